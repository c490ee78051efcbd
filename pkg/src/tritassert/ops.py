"""Gate-operation records making up a circuit."""
from __future__ import annotations

from dataclasses import dataclass

from .gates import Gate3


@dataclass(frozen=True)
class Single:
    gate: Gate3
    q: int

    @property
    def qutrits(self) -> tuple[int, ...]:
        return (self.q,)


@dataclass(frozen=True)
class ControlledMS:
    """Muthukrishnan-Stroud controlled gate: fires only when control is |2>."""

    gate: Gate3
    control: int
    target: int

    @property
    def qutrits(self) -> tuple[int, ...]:
        return (self.control, self.target)


@dataclass(frozen=True)
class Composite:
    """A1 (target += control) or A2 (target += 2*control), mod 3."""

    kind: str
    control: int
    target: int

    @property
    def qutrits(self) -> tuple[int, ...]:
        return (self.control, self.target)


@dataclass(frozen=True)
class Measure:
    q: int
    register: str

    @property
    def qutrits(self) -> tuple[int, ...]:
        return (self.q,)


GateOp = Single | ControlledMS | Composite | Measure

"""Constructors for the ternary gate set.

Six Z permutations, the two Chrestenson gates (stored with their 1/sqrt(3)
factor so they are unitary), and the A1/A2 composites in both their
four-gate M-S decomposition and their 9x9 permutation form.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from functools import cache

import numpy as np

from .errors import InputError

OMEGA = np.exp(2j * np.pi / 3)

# images of |0>, |1>, |2> under each Z permutation
_Z_PERMUTATIONS = {
    "Z0": (0, 1, 2),
    "Z+1": (1, 2, 0),
    "Z+2": (2, 0, 1),
    "Z01": (1, 0, 2),
    "Z02": (2, 1, 0),
    "Z12": (0, 2, 1),
}
Z_LABELS = tuple(_Z_PERMUTATIONS)
GATE3_LABELS = Z_LABELS + ("Ch1", "Ch2")
COMPOSITE_KINDS = ("A1", "A2")


@dataclass(frozen=True)
class Gate3:
    label: str
    matrix: np.ndarray = field(compare=False, repr=False)
    cost: int = 1


@dataclass(frozen=True)
class Gate9:
    label: str
    matrix: np.ndarray = field(compare=False, repr=False)
    cost: int = 4
    depth: int = 4


def _frozen(mat: np.ndarray) -> np.ndarray:
    mat = np.ascontiguousarray(mat, dtype=np.complex128)
    mat.flags.writeable = False
    return mat


@cache
def z_gate(label: str) -> Gate3:
    try:
        perm = _Z_PERMUTATIONS[label]
    except KeyError:
        raise InputError(f"unknown Z gate {label!r}; expected one of {', '.join(Z_LABELS)}") from None
    mat = np.zeros((3, 3))
    for src, dst in enumerate(perm):
        mat[dst, src] = 1.0
    return Gate3(label, _frozen(mat))


@cache
def chrestenson(k: int) -> Gate3:
    if k not in (1, 2):
        raise InputError(f"Chrestenson index must be 1 or 2, got {k}")
    sign = 1 if k == 1 else -1
    mat = np.array([[OMEGA ** (sign * r * c) for c in range(3)] for r in range(3)]) / np.sqrt(3)
    return Gate3(f"Ch{k}", _frozen(mat))


def gate3(label: str) -> Gate3:
    """Look up any single-qutrit gate by label (``Z+1``, ``Ch2``, ...)."""
    if label in ("Ch1", "Ch2"):
        return chrestenson(int(label[-1]))
    return z_gate(label)


def chrestenson_state(k: int) -> np.ndarray:
    """Amplitudes of |+> (k=0), |-1> (k=1) or |-2> (k=2)."""
    if k not in (0, 1, 2):
        raise InputError(f"Chrestenson state index must be 0, 1 or 2, got {k}")
    return np.array([OMEGA ** (k * x) for x in range(3)]) / np.sqrt(3)


def _multiplier(kind: str) -> int:
    if kind not in COMPOSITE_KINDS:
        raise InputError(f"composite gate must be A1 or A2, got {kind!r}")
    return 1 if kind == "A1" else 2


@cache
def a_gate_unitary(kind: str) -> Gate9:
    """Permutation |c, t> -> |c, (t + m*c) mod 3> with m = 1 (A1) or 2 (A2)."""
    m = _multiplier(kind)
    mat = np.zeros((9, 9))
    for c in range(3):
        for t in range(3):
            mat[3 * c + (t + m * c) % 3, 3 * c + t] = 1.0
    return Gate9(kind, _frozen(mat))


def a_gate_sequence(kind: str, control: int, target: int) -> list:
    """The four primitive ops realising A1/A2 with trigger-on-|2> controls."""
    from .ops import ControlledMS, Single

    m = _multiplier(kind)
    if control == target:
        raise InputError("A-gate control and target must differ")
    first, second = ("Z+2", "Z+1") if m == 1 else ("Z+1", "Z+2")
    return [
        ControlledMS(z_gate(first), control, target),
        Single(z_gate("Z+1"), control),
        ControlledMS(z_gate(second), control, target),
        Single(z_gate("Z+2"), control),
    ]

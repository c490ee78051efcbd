"""Reference circuits with their expected slice states and assertion outcomes.

Each entry's circuit is fully instrumented (ancillas and assertion ops
included). ``probes`` names slices that sit inside an assertion block: they
are useful test vectors but the ``.t3`` format cannot express them, so
:meth:`CorpusEntry.source` drops them.
"""
from __future__ import annotations

from dataclasses import dataclass, field, replace
from pathlib import Path

import numpy as np

from .assertions import (
    AssertionSpec,
    attach,
    classical_assertion,
    combined_assertion,
    entanglement_assertion,
    superposition_assertion,
)
from .circuit import Circuit
from .dsl import serialize
from .errors import InputError
from .gates import OMEGA, chrestenson_state, gate3
from .ops import Composite, ControlledMS, Single
from .state import StateVector, init_basis, tensor

CORPUS_DIR = Path(__file__).with_name("corpus")


@dataclass(frozen=True)
class CorpusEntry:
    name: str
    circuit: Circuit
    specs: tuple[AssertionSpec, ...]
    expected_slices: dict[str, StateVector]
    # one deterministic ancilla outcome tuple per spec
    expected_outcomes: tuple[tuple[int, ...], ...]
    probes: tuple[str, ...] = ()
    notes: str = field(default="", compare=False)

    @property
    def expected_pass(self) -> tuple[bool, ...]:
        return tuple(s.passes(o) for s, o in zip(self.specs, self.expected_outcomes))

    def dsl_circuit(self) -> Circuit:
        return replace(self.circuit, slices=tuple(s for s in self.circuit.slices if s[0] not in self.probes))

    def source(self) -> str:
        return serialize(self.dsl_circuit(), self.specs)


def _trits(pair, what: str) -> tuple[int, int]:
    pair = tuple(int(d) for d in pair)
    if len(pair) != 2 or any(d not in (0, 1, 2) for d in pair):
        raise InputError(f"{what} must be two trits, got {pair!r}")
    return pair


def _state(n: int, digits) -> StateVector:
    return init_basis(n, digits)


def _uniform(terms: dict) -> StateVector:
    return StateVector.from_terms(terms)


# -- half adder -----------------------------------------------------------------------


def half_adder(with_bug: bool = False, inputs=(2, 2)) -> CorpusEntry:
    """Ternary half adder on wires A, B, Cout with ``assert(Cout == 1)``.

    The sum lands on A, B is restored and Cout becomes 1 on carry. The bug
    is a stray [+1] on A ahead of the first controlled gate.
    """
    a, b = _trits(inputs, "inputs")
    Z = gate3
    ops = [Single(Z("Z+1"), 0)] if with_bug else []
    marks = [("psi0", 0)] + ([("psi1", 1)] if with_bug else [])
    ops.append(ControlledMS(Z("Z+2"), 1, 0))
    marks.append(("psi2", len(ops)))
    ops.append(ControlledMS(Z("Z12"), 0, 1))
    marks.append(("psi3", len(ops)))
    ops.append(ControlledMS(Z("Z+1"), 1, 2))
    marks.append(("psi4", len(ops)))
    ops += [ControlledMS(Z("Z12"), 0, 1), Single(Z("Z+1"), 1), ControlledMS(Z("Z+1"), 1, 0)]
    check_at = len(ops)
    ops.append(Single(Z("Z+2"), 1))
    marks.append(("psi5", len(ops)))

    base = Circuit(3, (a, b, 0), ops, marks)
    circuit, specs = attach(base, classical_assertion(2, 1), at=check_at)

    # independent arithmetic oracle: the bug just feeds A+1 into a correct adder
    a_eff = (a + 1) % 3 if with_bug else a
    carry = 1 if a_eff + b >= 3 else 0
    anc_init = specs[0].ancilla_init[0]
    expected = {
        "psi0": _state(4, (a, b, 0, anc_init)),
        "psi5": _state(4, ((a_eff + b) % 3, b, carry, (anc_init + carry) % 3)),
    }
    if with_bug and (a, b) == (2, 2):
        expected.update(
            psi1=_state(4, (0, 2, 0, 2)),
            psi2=_state(4, (2, 2, 0, 2)),
            psi3=_state(4, (2, 1, 0, 2)),
            psi4=_state(4, (2, 1, 0, 2)),
        )
    return CorpusEntry(
        name="half_adder",
        circuit=circuit,
        specs=tuple(specs),
        expected_slices=expected,
        expected_outcomes=(((anc_init + carry) % 3,),),
        notes=(
            "Mid-circuit controls: both Z12 gates are controlled by A and act on B, "
            "and the last +1 is controlled by B and acts on A; this is the reading "
            "that reproduces every annotated slice and the bug-free truth table."
        ),
    )


# -- superposition demo -----------------------------------------------------------------


def _chi(k: int) -> StateVector:
    return StateVector(1, chrestenson_state(k))


def superposition_demo(with_bug: bool = False) -> CorpusEntry:
    """Prepare |-1> from |1> with Ch1 (or, buggy, Ch2) and assert minus1."""
    k = 2 if with_bug else 1
    prep = Single(gate3("Ch2" if with_bug else "Ch1"), 0)
    base = Circuit(1, (1,), [prep], [("psi0", 1)])
    circuit, specs = attach(base, superposition_assertion(0, "minus1"))
    circuit = circuit.with_slices([("psi1", 2), ("psi2", 3), ("psi3", 4)])
    a0 = specs[0].ancilla_init[0]

    # ancilla drives A1 into the tested qutrit: |y, j> -> |y + j, j>
    entangled = {
        f"{y}{j}": OMEGA ** ((k * (y - j) + a0 * j) % 3) / 3 for y in range(3) for j in range(3)
    }
    expected = {
        "psi0": tensor(_chi(k), _state(1, (a0,))),
        "psi1": tensor(_chi(k), _chi(a0)),
        "psi2": _uniform(entangled),
        "psi3": tensor(_chi(k), _state(1, ((a0 - k) % 3,))),
    }
    return CorpusEntry(
        name="superposition_demo",
        circuit=circuit,
        specs=tuple(specs),
        expected_slices=expected,
        expected_outcomes=(((a0 - k) % 3,),),
        probes=("psi1", "psi2"),
    )


# -- entangler --------------------------------------------------------------------------


def _entangler_ops(with_bug: bool) -> list:
    ops = [Single(gate3("Z+1"), 1)] if with_bug else []
    return ops + [Single(gate3("Ch1"), 0), Composite("A1", 0, 1)]


def corbaci_entangler(with_bug: bool = False, input=(0, 0)) -> CorpusEntry:
    """Two-qutrit entangler (Ch1 then controlled-add) with a group-b row-0 check."""
    a, b = _trits(input, "input")
    ops = _entangler_ops(with_bug)
    base = Circuit(2, (a, b), ops, [("input", 0), ("entangled", len(ops))])
    circuit, specs = attach(base, entanglement_assertion(0, 1, "b", 0))
    circuit = circuit.with_slices([("final", len(circuit.ops))])

    shift = (b + 1) % 3 if with_bug else b
    pair = {f"{x}{(x + shift) % 3}0": OMEGA ** (a * x) / np.sqrt(3) for x in range(3)}
    # ancilla picks up q0 + 2*q1 = x + 2(x + shift) = -shift (mod 3)
    out = (-shift) % 3
    final = {k[:2] + str(out): v for k, v in pair.items()}
    expected = {
        "input": _state(3, (a, b, 0)),
        "entangled": _uniform(pair),
        "final": _uniform(final),
    }
    return CorpusEntry(
        name="corbaci_entangler",
        circuit=circuit,
        specs=tuple(specs),
        expected_slices=expected,
        expected_outcomes=((out,),),
    )


# -- combined ------------------------------------------------------------------------------

# (third, fourth) ancilla digits listed for each classical input |alpha beta>
COMBINED_TABLE = {
    (0, 0): (0, 0),
    (0, 1): (1, 0),
    (0, 2): (2, 0),
    (1, 0): (0, 2),
    (1, 1): (1, 2),
    (1, 2): (2, 2),
    (2, 0): (0, 1),
    (2, 1): (1, 1),
    (2, 2): (2, 1),
}


def combined_demo(input=(0, 0)) -> CorpusEntry:
    """Entangler guarded by a superposition check on alpha and a group-b check.

    ``expected_outcomes`` holds the reference table digits. For beta != 0 the
    simulated third digit is -beta mod 3 where the table lists beta; the
    "final" slice records what the circuit actually produces.
    """
    a, b = _trits(input, "input")
    ops = _entangler_ops(False)
    base = Circuit(2, (a, b), ops, [("input", 0), ("entangled", len(ops))])
    circuit, specs = attach(base, combined_assertion(0, 1, (0, 0)))
    circuit = circuit.with_slices([("final", len(circuit.ops))])

    pair = {f"{x}{(x + b) % 3}": OMEGA ** (a * x) / np.sqrt(3) for x in range(3)}
    # the SA block already ran on alpha = chi_a, leaving -a on its ancilla;
    # the EA block then adds q0 + 2*q1 = x + 2(x + b) = -b to its own
    expected = {
        "input": _state(4, (a, b, 0, 0)),
        "entangled": tensor(_uniform(pair), _state(2, (0, -a % 3))),
        "final": tensor(_uniform(pair), _state(2, (-b % 3, -a % 3))),
    }
    return CorpusEntry(
        name="combined_demo",
        circuit=circuit,
        specs=tuple(specs),
        expected_slices=expected,
        expected_outcomes=(COMBINED_TABLE[(a, b)],),
    )


# -- registry --------------------------------------------------------------------------------

BUILDERS = {
    "half_adder": half_adder,
    "superposition_demo": superposition_demo,
    "corbaci_entangler": corbaci_entangler,
    "combined_demo": combined_demo,
}

DESCRIPTIONS = {
    "half_adder": "ternary half adder with assert(Cout == 1); --bug adds a stray [+1] on A; --input AB",
    "superposition_demo": "prepare |-1> from |1> and assert it; --bug uses Ch2 instead of Ch1",
    "corbaci_entangler": "two-qutrit entangler with a group-b row-0 check; --bug adds [+1] on beta; --input AB",
    "combined_demo": "entangler with superposition and entanglement checks; --input AB",
}

_DEFAULT_INPUTS = {"half_adder": (2, 2), "corbaci_entangler": (0, 0), "combined_demo": (0, 0)}


def build(name: str, with_bug: bool = False, inputs=None) -> CorpusEntry:
    """Construct a corpus entry by name with optional bug flag and input pair."""
    if name not in BUILDERS:
        raise InputError(f"unknown corpus entry {name!r}; choose from {', '.join(BUILDERS)}")
    if name == "combined_demo":
        if with_bug:
            raise InputError("combined_demo has no bug variant")
        return combined_demo(inputs if inputs is not None else (0, 0))
    if name == "superposition_demo":
        if inputs is not None:
            raise InputError("superposition_demo takes no input digits")
        return superposition_demo(with_bug)
    if name == "half_adder":
        return half_adder(with_bug, inputs if inputs is not None else _DEFAULT_INPUTS[name])
    return corbaci_entangler(with_bug, inputs if inputs is not None else _DEFAULT_INPUTS[name])


def shipped_variants() -> list[tuple[str, CorpusEntry]]:
    """(file stem, entry) for every ``.t3`` file shipped in the corpus directory."""
    out = []
    for name in BUILDERS:
        variants = [False] if name == "combined_demo" else [False, True]
        for bug in variants:
            stem = name + ("_bug" if bug else "")
            out.append((stem, build(name, bug)))
    return out


def write_corpus(directory: Path | None = None) -> list[Path]:
    """Regenerate the shipped ``.t3`` files from the builders."""
    directory = Path(directory) if directory is not None else CORPUS_DIR
    directory.mkdir(parents=True, exist_ok=True)
    written = []
    for stem, entry in shipped_variants():
        path = directory / f"{stem}.t3"
        path.write_text(entry.source(), encoding="utf-8", newline="\n")
        written.append(path)
    return written


if __name__ == "__main__":
    for p in write_corpus():
        print(p)

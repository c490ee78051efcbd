"""Circuit container, simulation driver, metrics, dense oracle and shot runner."""
from __future__ import annotations

from collections import Counter
from dataclasses import dataclass, field, replace
from typing import NamedTuple

import numpy as np

from ._backend import kernels
from .errors import InputError, ResourceError
from .gates import a_gate_sequence, a_gate_unitary
from .ops import Composite, ControlledMS, GateOp, Measure, Single
from .state import StateVector, index_of, init_basis

DENSE_MAX_QUTRITS = 6
SEED_MASK = (1 << 64) - 1


@dataclass(frozen=True)
class Circuit:
    """An ordered list of gate ops over ``num_qutrits`` qutrits.

    ``slices`` holds ``(name, position)`` pairs: the snapshot is taken after
    the first ``position`` ops have been applied (0 is the initial state).
    Measurements may only appear as a suffix of ``ops``.
    """

    num_qutrits: int
    init_digits: tuple[int, ...] = ()
    ops: tuple[GateOp, ...] = ()
    slices: tuple[tuple[str, int], ...] = field(default=())

    def __post_init__(self):
        n = self.num_qutrits
        if n < 1:
            raise InputError(f"circuit needs at least one qutrit, got {n}")
        init = tuple(int(d) for d in self.init_digits) if self.init_digits else (0,) * n
        if len(init) != n:
            raise InputError(f"init has {len(init)} digits for {n} qutrits")
        if any(d not in (0, 1, 2) for d in init):
            raise InputError(f"init digits must be trits, got {init}")
        object.__setattr__(self, "init_digits", init)
        object.__setattr__(self, "ops", tuple(self.ops))
        object.__setattr__(self, "slices", tuple((str(a), int(b)) for a, b in self.slices))

        registers, measured = set(), set()
        seen_measure = False
        for i, op in enumerate(self.ops):
            for q in op.qutrits:
                if not 0 <= q < n:
                    raise InputError(f"op {i} ({op}) uses qutrit {q} outside 0..{n - 1}")
            if len(op.qutrits) == 2 and op.qutrits[0] == op.qutrits[1]:
                raise InputError(f"op {i} has control == target")
            if isinstance(op, Measure):
                seen_measure = True
                if op.register in registers:
                    raise InputError(f"duplicate measurement register {op.register!r}")
                if op.q in measured:
                    raise InputError(f"qutrit {op.q} is measured twice")
                registers.add(op.register)
                measured.add(op.q)
            elif seen_measure:
                raise InputError(f"op {i} follows a measurement; measurements must end the circuit")

        last = -1
        names = set()
        for name, pos in self.slices:
            if not 0 <= pos <= len(self.ops):
                raise InputError(f"slice {name!r} at invalid position {pos}")
            if pos <= last:
                raise InputError(f"slice {name!r}: positions must be strictly increasing")
            if name in names:
                raise InputError(f"duplicate slice name {name!r}")
            names.add(name)
            last = pos

    @property
    def measurements(self) -> tuple[Measure, ...]:
        return tuple(op for op in self.ops if isinstance(op, Measure))

    @property
    def gate_ops(self) -> tuple[GateOp, ...]:
        return tuple(op for op in self.ops if not isinstance(op, Measure))

    def initial_state(self) -> StateVector:
        return init_basis(self.num_qutrits, self.init_digits)

    def with_slices(self, extra) -> Circuit:
        merged = sorted(list(self.slices) + list(extra), key=lambda s: s[1])
        return replace(self, slices=tuple(merged))

    def with_measurements(self, pairs) -> Circuit:
        return replace(self, ops=self.ops + tuple(Measure(q, reg) for q, reg in pairs))


def concat(c1: Circuit, c2: Circuit) -> Circuit:
    """Run ``c2``'s ops after ``c1``'s on the same register (c1's init wins)."""
    if c1.num_qutrits != c2.num_qutrits:
        raise InputError("cannot concatenate circuits of different widths")
    shift = len(c1.ops)
    return Circuit(
        c1.num_qutrits,
        c1.init_digits,
        c1.ops + c2.ops,
        c1.slices + tuple((name, pos + shift) for name, pos in c2.slices),
    )


# -- simulation ---------------------------------------------------------------


def apply_op(amps: np.ndarray, n: int, op: GateOp) -> None:
    """Apply one (non-measurement) op to a working amplitude buffer in place."""
    if isinstance(op, Single):
        kernels.apply_single(amps, n, op.q, op.gate.matrix)
    elif isinstance(op, ControlledMS):
        kernels.apply_controlled(amps, n, op.control, op.target, op.gate.matrix)
    elif isinstance(op, Composite):
        kernels.apply_two(amps, n, op.control, op.target, a_gate_unitary(op.kind).matrix)
    elif isinstance(op, Measure):
        raise InputError("measurements cannot be applied as unitary ops")
    else:
        raise InputError(f"unknown op {op!r}")


class Trace(NamedTuple):
    final: StateVector
    slices: dict[str, StateVector]


def start_state(circuit: Circuit, initial: StateVector | None = None) -> StateVector:
    """The circuit's input: ``initial`` on the leading qutrits, init digits on the rest.

    Passing a state for only the program qutrits lets assertion ancillas
    keep their prescribed digits.
    """
    if initial is None:
        return circuit.initial_state()
    k = initial.num_qutrits
    if k > circuit.num_qutrits:
        raise InputError(f"initial state has {k} qutrits, circuit only {circuit.num_qutrits}")
    if k == circuit.num_qutrits:
        return initial
    rest = init_basis(circuit.num_qutrits - k, circuit.init_digits[k:])
    return StateVector(circuit.num_qutrits, np.kron(initial.amps, rest.amps), check=False)


def simulate(circuit: Circuit, initial: StateVector | None = None) -> Trace:
    """Apply every gate op to the input state, snapshotting slices.

    Trailing measurements are not performed; ``final`` is the state just
    before them.
    """
    n = circuit.num_qutrits
    amps = start_state(circuit, initial).copy_amps()
    marks = {pos: name for name, pos in circuit.slices}
    snaps: dict[str, StateVector] = {}
    for i, op in enumerate(circuit.ops):
        if i in marks:
            snaps[marks[i]] = StateVector(n, amps.copy(), check=False)
        if isinstance(op, Measure):
            continue
        apply_op(amps, n, op)
    if len(circuit.ops) in marks:
        snaps[marks[len(circuit.ops)]] = StateVector(n, amps.copy(), check=False)
    return Trace(StateVector(n, amps, check=False), snaps)


# -- metrics ------------------------------------------------------------------


@dataclass(frozen=True)
class Metrics:
    quantum_cost: int
    depth: int


def _ops_of(circuit_or_ops):
    return circuit_or_ops.ops if isinstance(circuit_or_ops, Circuit) else tuple(circuit_or_ops)


def quantum_cost(circuit_or_ops) -> int:
    """Unit cost per Z/Chrestenson/controlled gate, 4 per A1/A2, 0 per measurement."""
    cost = 0
    for op in _ops_of(circuit_or_ops):
        if isinstance(op, (Single, ControlledMS)):
            cost += op.gate.cost
        elif isinstance(op, Composite):
            cost += a_gate_unitary(op.kind).cost
    return cost


def expand_primitives(circuit_or_ops) -> list[GateOp]:
    out: list[GateOp] = []
    for op in _ops_of(circuit_or_ops):
        if isinstance(op, Composite):
            out.extend(a_gate_sequence(op.kind, op.control, op.target))
        elif not isinstance(op, Measure):
            out.append(op)
    return out


def depth_asap(circuit_or_ops) -> int:
    """ASAP layer count over the primitive expansion (A1/A2 -> 4 gates)."""
    level: dict[int, int] = {}
    depth = 0
    for op in expand_primitives(circuit_or_ops):
        layer = 1 + max(level.get(q, 0) for q in op.qutrits)
        for q in op.qutrits:
            level[q] = layer
        depth = max(depth, layer)
    return depth


def metrics(circuit_or_ops) -> Metrics:
    return Metrics(quantum_cost(circuit_or_ops), depth_asap(circuit_or_ops))


# -- dense oracle -------------------------------------------------------------

_PROJECTORS = [np.diag([1.0 if d == k else 0.0 for d in range(3)]) for k in range(3)]


def _kron_all(factors) -> np.ndarray:
    out = np.ones((1, 1), dtype=np.complex128)
    for f in factors:
        out = np.kron(out, f)
    return out


def _embed(n: int, placed: dict[int, np.ndarray]) -> np.ndarray:
    eye = np.eye(3)
    return _kron_all(placed.get(q, eye) for q in range(n))


def _expand_op(n: int, op: GateOp) -> np.ndarray:
    if isinstance(op, Single):
        return _embed(n, {op.q: op.gate.matrix})
    # controlled: sum over control levels of |k><k| (x) (G if k == 2 else I)
    total = np.zeros((3**n, 3**n), dtype=np.complex128)
    for k in range(3):
        target_op = op.gate.matrix if k == 2 else np.eye(3)
        total += _embed(n, {op.control: _PROJECTORS[k], op.target: target_op})
    return total


def dense_unitary(circuit: Circuit) -> np.ndarray:
    """Brute-force ``3**n`` square unitary of the circuit's gate ops.

    A1/A2 are expanded into their four M-S primitives, so this is independent
    of the permutation-matrix path used by :func:`simulate`.
    """
    n = circuit.num_qutrits
    if n > DENSE_MAX_QUTRITS:
        raise ResourceError(f"dense oracle limited to {DENSE_MAX_QUTRITS} qutrits, got {n}")
    if circuit.measurements:
        raise InputError("dense oracle needs a measurement-free circuit")
    unitary = np.eye(3**n, dtype=np.complex128)
    for op in expand_primitives(circuit):
        unitary = _expand_op(n, op) @ unitary
    return unitary


def oracle_state(circuit: Circuit) -> StateVector:
    """``dense_unitary(c) @ |init>`` ignoring trailing measurements."""
    bare = replace(circuit, ops=circuit.gate_ops, slices=())
    vec = np.zeros(3**circuit.num_qutrits, dtype=np.complex128)
    vec[index_of(circuit.init_digits)] = 1.0
    return StateVector(circuit.num_qutrits, dense_unitary(bare) @ vec, check=False)


# -- shots --------------------------------------------------------------------


def shot_draws(seed: int, shots: int, width: int) -> np.ndarray:
    """Uniform draws of shape ``(shots, width)``.

    Counter-based: shot ``i`` reads the Philox stream keyed by ``seed`` whose
    counter starts at word ``i``, so any shot can be replayed in isolation.
    """
    key = int(seed) & SEED_MASK
    out = np.empty((shots, width))
    for i in range(shots):
        bitgen = np.random.Philox(key=key, counter=[0, i, 0, 0])
        out[i] = np.random.Generator(bitgen).random(width)
    return out


def sample_measurements(state: StateVector, qutrits, draws: np.ndarray) -> np.ndarray:
    """Sequential measure-and-collapse of ``qutrits`` for every row of ``draws``."""
    qutrits = list(qutrits)
    joint = kernels.joint_marginal(state.amps, state.num_qutrits, np.asarray(qutrits, dtype=np.int64))
    return kernels.sample_joint(joint, len(qutrits), np.ascontiguousarray(draws, dtype=np.float64))


def simulate_shots(
    circuit: Circuit, shots: int, seed: int, initial: StateVector | None = None
) -> dict[tuple[int, ...], int]:
    """Histogram of measured digit tuples (in measurement-op order)."""
    if shots < 1:
        raise InputError(f"shots must be positive, got {shots}")
    measures = circuit.measurements
    if not measures:
        raise InputError("circuit has no measurements")
    final = simulate(circuit, initial).final
    outcomes = sample_measurements(final, [m.q for m in measures], shot_draws(seed, shots, len(measures)))
    counts = Counter(tuple(int(d) for d in row) for row in outcomes)
    return dict(sorted(counts.items()))

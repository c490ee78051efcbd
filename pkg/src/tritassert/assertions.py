"""Dynamic assertion circuits and their evaluation over shots.

Every family works the same way: fresh ancilla qutrits are initialised to a
digit chosen from the asserted value, a short sub-circuit couples them to the
qutrits under test, and measuring the ancillas (never the tested qutrits)
gives the verdict. All-zero ancilla outcomes mean "pass" except for the
combined family, whose expected outcome pair is explicit.
"""
from __future__ import annotations

from dataclasses import dataclass, replace

import numpy as np

from .circuit import Circuit, depth_asap, quantum_cost, simulate, simulate_shots
from .errors import InputError
from .gates import gate3
from .ops import Composite, Measure, Single
from .state import StateVector, project

CLASSICAL = "classical"
ENTANGLED_A = "entangled_a"
ENTANGLED_B = "entangled_b"
SUPERPOSITION = "superposition"
COMBINED = "combined"
FAMILIES = (CLASSICAL, ENTANGLED_A, ENTANGLED_B, SUPERPOSITION, COMBINED)

# Chrestenson basis targets and the phase index k of (|0> + w^k|1> + w^2k|2>)/sqrt(3)
SUPERPOSITION_TARGETS = {"plus": 0, "minus1": 1, "minus2": 2}

# basis terms of each entangled row, in the order they are usually written
ENTANGLED_ROWS = {
    "a": (("00", "12", "21"), ("01", "10", "22"), ("02", "11", "20")),
    "b": (("00", "11", "22"), ("02", "10", "21"), ("01", "12", "20")),
}

LOW_SHOT_LIMIT = 100


def _trit(value, what: str) -> int:
    if value not in (0, 1, 2):
        raise InputError(f"{what} must be 0, 1 or 2, got {value!r}")
    return int(value)


@dataclass(frozen=True)
class AssertionSpec:
    """One assertion instance.

    ``param`` depends on ``family``: the expected digit (classical), the row
    0..2 (entangled), ``plus``/``minus1``/``minus2`` (superposition) or the
    expected (third, fourth) outcome pair (combined). ``ancillas`` is empty
    until the assertion is attached to a circuit; ``positions`` then records the
    start of each of its blocks in that circuit's op list.
    """

    family: str
    targets: tuple[int, ...]
    param: object
    ancilla_init: tuple[int, ...]
    ancillas: tuple[int, ...] = ()
    positions: tuple[int, ...] = ()

    def __post_init__(self):
        if self.family not in FAMILIES:
            raise InputError(f"unknown assertion family {self.family!r}")
        if len(set(self.targets)) != len(self.targets):
            raise InputError("assertion targets must be distinct")
        if self.ancillas:
            if len(self.ancillas) != len(self.ancilla_init):
                raise InputError("one init digit per ancilla required")
            if set(self.ancillas) & set(self.targets):
                raise InputError("ancillas must be disjoint from targets")

    @property
    def attached(self) -> bool:
        return bool(self.ancillas)

    @property
    def pass_digits(self) -> tuple[int, ...]:
        if self.family == COMBINED:
            return tuple(self.param)
        return (0,)

    def passes(self, outcome) -> bool:
        return tuple(outcome) == self.pass_digits

    def blocks(self) -> list[list]:
        """The op blocks in time order; requires attached ancillas."""
        if not self.attached:
            raise InputError("assertion has no ancillas yet; attach it to a circuit first")
        t, anc = self.targets, self.ancillas
        if self.family == CLASSICAL:
            return [[Composite("A1", t[0], anc[0])]]
        if self.family == ENTANGLED_A:
            return [[Composite("A1", t[0], anc[0]), Composite("A1", t[1], anc[0])]]
        if self.family == ENTANGLED_B:
            return [_ea_block(t[0], t[1], anc[0])]
        if self.family == SUPERPOSITION:
            return [_sa_block(t[0], anc[0])]
        return [_sa_block(t[0], anc[1]), _ea_block(t[0], t[1], anc[0])]

    def subcircuit(self) -> list:
        return [op for block in self.blocks() for op in block]

    def describe(self) -> str:
        return describe(self)


def _sa_block(q: int, anc: int) -> list:
    # the ancilla drives the qutrit under test here, the reverse of the other families
    return [Single(gate3("Ch1"), anc), Composite("A1", anc, q), Single(gate3("Ch2"), anc)]


def _ea_block(q1: int, q2: int, anc: int) -> list:
    return [Composite("A1", q1, anc), Composite("A2", q2, anc)]


def describe(spec: AssertionSpec) -> str:
    t = spec.targets
    if spec.family == CLASSICAL:
        return f"classical q{t[0]} == {spec.param}"
    if spec.family in (ENTANGLED_A, ENTANGLED_B):
        return f"entangled {spec.family[-1]} row {spec.param} (q{t[0]}, q{t[1]})"
    if spec.family == SUPERPOSITION:
        return f"superposition q{t[0]} {spec.param}"
    return f"combined (q{t[0]}, q{t[1]}) expect {spec.param[0]}{spec.param[1]}"


# -- builders -------------------------------------------------------------------


def classical_assertion(q: int, expected: int) -> AssertionSpec:
    """assert(q == expected): A1 from q onto an ancilla set to 2*expected mod 3."""
    expected = _trit(expected, "expected digit")
    return AssertionSpec(CLASSICAL, (q,), expected, ((2 * expected) % 3,))


def entanglement_assertion(q1: int, q2: int, group: str, row: int) -> AssertionSpec:
    """Assert membership of (q1, q2) in row ``row`` of entangled group a or b."""
    group = str(group).lower()
    if group not in ENTANGLED_ROWS:
        raise InputError(f"entangled group must be 'a' or 'b', got {group!r}")
    if row not in (0, 1, 2):
        raise InputError(f"entangled row must be 0, 1 or 2, got {row!r}")
    if q1 == q2:
        raise InputError("entanglement assertion needs two distinct qutrits")
    family = ENTANGLED_A if group == "a" else ENTANGLED_B
    return AssertionSpec(family, (q1, q2), int(row), ((-row) % 3,))


def superposition_assertion(q: int, target: str) -> AssertionSpec:
    target = str(target).lower()
    if target not in SUPERPOSITION_TARGETS:
        raise InputError(f"superposition target must be plus, minus1 or minus2, got {target!r}")
    return AssertionSpec(SUPERPOSITION, (q,), target, (SUPERPOSITION_TARGETS[target],))


def combined_assertion(q1: int, q2: int, expected_row=(0, 0)) -> AssertionSpec:
    """Superposition check on q1 before the entangler plus a group-b check after.

    Ancillas are allocated (EA, SA); ``expected_row`` is the passing
    (EA outcome, SA outcome) pair.
    """
    if q1 == q2:
        raise InputError("combined assertion needs two distinct qutrits")
    if len(tuple(expected_row)) != 2:
        raise InputError(f"expected_row needs two digits, got {expected_row!r}")
    row = tuple(_trit(d, "expected_row digit") for d in expected_row)
    return AssertionSpec(COMBINED, (q1, q2), row, (0, 0))


def entangled_state(group: str, row: int, coeffs=None) -> StateVector:
    """a|xy> + b|..> + c|..> for a row of an entangled group (uniform by default)."""
    terms = ENTANGLED_ROWS[group][row]
    coeffs = np.full(3, 1 / np.sqrt(3)) if coeffs is None else coeffs
    return StateVector.from_terms(dict(zip(terms, coeffs)))


# -- attaching to circuits ------------------------------------------------------


def _coupling_index(ops, q1: int, q2: int, before: int) -> int | None:
    for i in range(before - 1, -1, -1):
        if {q1, q2} <= set(ops[i].qutrits):
            return i
    return None


def _insert(circuit: Circuit, at: int, block: list, specs: list) -> tuple[Circuit, list]:
    ops = circuit.ops[:at] + tuple(block) + circuit.ops[at:]
    size = len(block)
    slices = tuple((name, pos + size if pos > at else pos) for name, pos in circuit.slices)
    shifted = [
        replace(s, positions=tuple(p + size if p >= at else p for p in s.positions)) for s in specs
    ]
    return replace(circuit, ops=ops, slices=slices), shifted


def attach(circuit: Circuit, spec: AssertionSpec, at: int | None = None, *, attached=()):
    """Allocate ancillas for ``spec`` and splice its blocks into ``circuit``.

    The (last) block goes in at op index ``at`` (default: before any trailing
    measurements). For the combined family the superposition block is placed
    immediately before the latest earlier op coupling both targets, i.e.
    after the Chrestenson stage and ahead of the entangling gate. Returns the
    new circuit and the full spec list: ``attached`` (positions shifted as
    needed) followed by the newly attached spec.
    """
    if spec.attached:
        raise InputError("assertion is already attached")
    n = circuit.num_qutrits
    for q in spec.targets:
        if not 0 <= q < n:
            raise InputError(f"assertion target {q} outside 0..{n - 1}")
    if at is None:
        at = next((i for i, op in enumerate(circuit.ops) if isinstance(op, Measure)), len(circuit.ops))
    if not 0 <= at <= len(circuit.ops):
        raise InputError(f"insertion point {at} out of range")

    ancillas = tuple(range(n, n + len(spec.ancilla_init)))
    widened = replace(circuit, num_qutrits=n + len(ancillas), init_digits=circuit.init_digits + spec.ancilla_init)
    new = replace(spec, ancillas=ancillas)
    others = list(attached)
    blocks = new.blocks()

    starts = []
    if spec.family == COMBINED:
        sa_block, ea_block = blocks
        sa_at = _coupling_index(widened.ops, spec.targets[0], spec.targets[1], at)
        if sa_at is None:
            sa_at = at
        widened, others = _insert(widened, sa_at, sa_block, others)
        at += len(sa_block)
        starts.append(sa_at)
        widened, others = _insert(widened, at, ea_block, others)
        starts.append(at)
    else:
        widened, others = _insert(widened, at, blocks[0], others)
        starts.append(at)
    return widened, others + [replace(new, positions=tuple(starts))]


def attach_all(circuit: Circuit, specs) -> tuple[Circuit, list]:
    """Attach unattached specs one after another at the end of the circuit."""
    done: list = []
    for spec in specs:
        circuit, done = attach(circuit, spec, attached=done)
    return circuit, done


def ancilla_register(q: int) -> str:
    return f"anc{q}"


def instrument(circuit: Circuit, specs) -> Circuit:
    """Append measurements of every ancilla of the (attached) specs."""
    pairs = []
    for spec in specs:
        if not spec.attached:
            raise InputError("instrument() needs attached assertion specs")
        pairs.extend((q, ancilla_register(q)) for q in spec.ancillas)
    return circuit.with_measurements(pairs)


# -- evaluation -------------------------------------------------------------------


@dataclass(frozen=True)
class AssertionReport:
    family: str
    targets: tuple[int, ...]
    description: str
    histogram: dict
    pass_count: int
    shots: int
    pass_probability: float
    estimated_sq_coeffs: tuple[float, float, float] | None

    @property
    def pass_rate(self) -> float:
        return self.pass_count / self.shots

    @property
    def low_shots(self) -> bool:
        """Estimates from fewer than 100 shots are flagged as unreliable."""
        return self.shots < LOW_SHOT_LIMIT

    @property
    def deterministic(self) -> bool:
        return min(self.pass_probability, 1.0 - self.pass_probability) < 1e-9

    def verdict(self, threshold: float | None = None) -> bool:
        if threshold is None:
            return self.pass_count == self.shots
        return self.pass_rate >= threshold


def outcome_distribution(state: StateVector, qutrits) -> np.ndarray:
    """Exact joint outcome probabilities of ``qutrits``, shape ``(3,) * len``."""
    n = state.num_qutrits
    weights = (np.abs(state.amps) ** 2).reshape((3,) * n)
    rest = [q for q in range(n) if q not in qutrits]
    return np.transpose(weights, list(qutrits) + rest).reshape((3,) * len(qutrits) + (-1,)).sum(axis=-1)


def postselect(state: StateVector, qutrits, digits) -> tuple[float, StateVector | None]:
    """Probability of reading ``digits`` on ``qutrits`` and the collapsed state."""
    prob = 1.0
    for q, d in zip(qutrits, digits):
        p, state = project(state, q, d)
        prob *= p
        if state is None:
            return prob, None
    return prob, state


def _estimate(spec: AssertionSpec, hist: dict, shots: int):
    if spec.family == COMBINED:
        return None
    freq = [hist.get((d,), 0) / shots for d in range(3)]
    if spec.family == CLASSICAL:
        # outcome d reads basis digit (d - init) mod 3 of the tested qutrit
        init = spec.ancilla_init[0]
        return tuple(freq[(x + init) % 3] for x in range(3))
    return tuple(freq)


def run_assertions(
    circuit: Circuit, specs, shots: int, seed: int, initial: StateVector | None = None
) -> list[AssertionReport]:
    """Run ``circuit`` with all attached ``specs`` for ``shots`` seeded shots.

    ``initial`` optionally replaces the basis input of the leading qutrits
    (see :func:`tritassert.circuit.start_state`).
    """
    specs = list(specs)
    if not specs:
        raise InputError("no assertions to run")
    full = instrument(circuit, specs)
    joint = simulate_shots(full, shots, seed, initial)
    order = {m.q: i for i, m in enumerate(full.measurements)}
    final = simulate(full, initial).final
    reports = []
    for spec in specs:
        cols = [order[q] for q in spec.ancillas]
        hist: dict = {}
        for outcome, count in joint.items():
            key = tuple(outcome[c] for c in cols)
            hist[key] = hist.get(key, 0) + count
        hist = dict(sorted(hist.items()))
        dist = outcome_distribution(final, spec.ancillas)
        reports.append(
            AssertionReport(
                family=spec.family,
                targets=spec.targets,
                description=describe(spec),
                histogram=hist,
                pass_count=hist.get(spec.pass_digits, 0),
                shots=shots,
                pass_probability=float(dist[spec.pass_digits]),
                estimated_sq_coeffs=_estimate(spec, hist, shots),
            )
        )
    return reports


def run_assertion(
    base: Circuit, spec: AssertionSpec, shots: int, seed: int, initial: StateVector | None = None
) -> AssertionReport:
    """Evaluate one assertion, attaching it at the end of ``base`` if needed."""
    if not spec.attached:
        base, (spec,) = attach(base, spec)
    return run_assertions(base, [spec], shots, seed, initial)[0]


# -- metrics ------------------------------------------------------------------------


@dataclass(frozen=True)
class AssertionMetrics:
    quantum_cost: int
    depth: int
    serial_depth: int


def assertion_metrics(spec: AssertionSpec) -> AssertionMetrics:
    """Cost and depth of the assertion's own gates.

    ``depth`` layers all blocks together ASAP; ``serial_depth`` adds the
    depths of the blocks, which is how multi-block assertions are tallied
    when the blocks sit at different points of the host circuit.
    """
    if not spec.attached:
        q = max(spec.targets) + 1
        spec = replace(spec, ancillas=tuple(range(q, q + len(spec.ancilla_init))))
    blocks = spec.blocks()
    ops = [op for block in blocks for op in block]
    return AssertionMetrics(quantum_cost(ops), depth_asap(ops), sum(depth_asap(b) for b in blocks))

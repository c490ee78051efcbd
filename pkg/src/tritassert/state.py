"""Dense n-qutrit state vectors.

Qutrit 0 is the leftmost ket digit, i.e. the most significant trit:
``|d0 d1 ... d(n-1)>`` lives at flat index ``sum(d_k * 3**(n-1-k))``.
"""
from __future__ import annotations

import numpy as np

from ._backend import kernels
from .errors import InputError, NumericalError

NORM_TOL = 1e-9
DEAD_BRANCH = 1e-12


class StateVector:
    """An immutable normalised pure state of ``num_qutrits`` qutrits."""

    __slots__ = ("amps", "num_qutrits")

    def __init__(self, num_qutrits: int, amps, *, check: bool = True):
        if num_qutrits < 1:
            raise InputError(f"need at least one qutrit, got {num_qutrits}")
        arr = np.array(amps, dtype=np.complex128).reshape(-1)
        if arr.size != 3**num_qutrits:
            raise InputError(
                f"{num_qutrits} qutrits need {3 ** num_qutrits} amplitudes, got {arr.size}"
            )
        if check:
            if not np.all(np.isfinite(arr)):
                raise NumericalError("amplitudes must be finite")
            norm = float(np.vdot(arr, arr).real)
            if abs(norm - 1.0) > NORM_TOL:
                raise InputError(f"state is not normalised (norm^2 = {norm:.12g})")
        arr.flags.writeable = False
        self.num_qutrits = num_qutrits
        self.amps = arr

    @classmethod
    def from_terms(cls, terms: dict, *, normalize: bool = False) -> StateVector:
        """Build a state from ``{"012": amplitude, ...}`` ket-label terms."""
        labels = list(terms)
        if not labels:
            raise InputError("no terms given")
        n = len(labels[0])
        amps = np.zeros(3**n, dtype=np.complex128)
        for label, value in terms.items():
            amps[index_of(_digits(label, n))] += value
        if normalize:
            norm = np.linalg.norm(amps)
            if norm == 0:
                raise InputError("terms sum to the zero vector")
            amps /= norm
        return cls(n, amps)

    def copy_amps(self) -> np.ndarray:
        return np.array(self.amps, dtype=np.complex128)

    def norm_squared(self) -> float:
        return float(np.vdot(self.amps, self.amps).real)

    def amplitude(self, label: str) -> complex:
        return complex(self.amps[index_of(_digits(label, self.num_qutrits))])

    def terms(self, threshold: float = 1e-9) -> list[tuple[str, complex]]:
        """Nonzero (label, amplitude) pairs in flat-index order."""
        out = []
        for idx in np.flatnonzero(np.abs(self.amps) >= threshold):
            out.append((label_of(int(idx), self.num_qutrits), complex(self.amps[idx])))
        return out

    def __repr__(self) -> str:
        inner = " + ".join(f"({a:.4g})|{lab}>" for lab, a in self.terms())
        return f"StateVector({self.num_qutrits}: {inner or '0'})"


def _digits(label, n=None) -> list[int]:
    digits = [int(ch) for ch in str(label)] if isinstance(label, str) else [int(d) for d in label]
    if n is not None and len(digits) != n:
        raise InputError(f"expected {n} digits, got {len(digits)}")
    for d in digits:
        if d not in (0, 1, 2):
            raise InputError(f"trit digit must be 0, 1 or 2, got {d}")
    return digits


def index_of(digits) -> int:
    idx = 0
    for d in digits:
        idx = idx * 3 + d
    return idx


def label_of(index: int, n: int) -> str:
    out = []
    for _ in range(n):
        index, d = divmod(index, 3)
        out.append(str(d))
    return "".join(reversed(out))


def _check_qutrit(state: StateVector, q: int, what: str = "qutrit") -> None:
    if not 0 <= q < state.num_qutrits:
        raise InputError(f"{what} index {q} out of range for {state.num_qutrits} qutrits")


def _matrix(gate, size: int) -> np.ndarray:
    mat = np.ascontiguousarray(getattr(gate, "matrix", gate), dtype=np.complex128)
    if mat.shape != (size, size):
        raise InputError(f"expected a {size}x{size} matrix, got shape {mat.shape}")
    return mat


def init_basis(n: int, digits) -> StateVector:
    """The computational basis state ``|digits>``."""
    if n < 1:
        raise InputError(f"need at least one qutrit, got {n}")
    digits = _digits(digits)
    if len(digits) != n:
        raise InputError(f"expected {n} digits, got {len(digits)}")
    amps = np.zeros(3**n, dtype=np.complex128)
    amps[index_of(digits)] = 1.0
    return StateVector(n, amps, check=False)


def tensor(*states: StateVector) -> StateVector:
    amps = np.ones(1, dtype=np.complex128)
    for s in states:
        amps = np.kron(amps, s.amps)
    return StateVector(sum(s.num_qutrits for s in states), amps)


def apply_single(state: StateVector, gate, q: int) -> StateVector:
    _check_qutrit(state, q)
    amps = state.copy_amps()
    kernels.apply_single(amps, state.num_qutrits, q, _matrix(gate, 3))
    return StateVector(state.num_qutrits, amps, check=False)


def apply_controlled_ms(state: StateVector, gate, control: int, target: int) -> StateVector:
    """Apply ``gate`` to ``target`` on the branches where ``control`` is |2>."""
    _check_qutrit(state, control, "control")
    _check_qutrit(state, target, "target")
    if control == target:
        raise InputError("control and target must differ")
    amps = state.copy_amps()
    kernels.apply_controlled(amps, state.num_qutrits, control, target, _matrix(gate, 3))
    return StateVector(state.num_qutrits, amps, check=False)


def apply_two_qutrit(state: StateVector, gate, q1: int, q2: int) -> StateVector:
    """Apply a 9x9 matrix to the ordered trit pair ``(q1, q2)``."""
    _check_qutrit(state, q1)
    _check_qutrit(state, q2)
    if q1 == q2:
        raise InputError("two-qutrit gate needs distinct qutrits")
    amps = state.copy_amps()
    kernels.apply_two(amps, state.num_qutrits, q1, q2, _matrix(gate, 9))
    return StateVector(state.num_qutrits, amps, check=False)


def qutrit_probabilities(state: StateVector, q: int) -> tuple[float, float, float]:
    _check_qutrit(state, q)
    p = kernels.probabilities(state.amps, state.num_qutrits, q)
    return float(p[0]), float(p[1]), float(p[2])


def pick_outcome(probs, draw: float) -> int:
    """Cumulative-threshold choice in digit order 0, 1, 2.

    ``probs`` are raw branch weights; branches below ``DEAD_BRANCH`` after
    normalisation can never be selected.
    """
    p = np.asarray(probs, dtype=np.float64)
    if not np.all(np.isfinite(p)) or p.max() < DEAD_BRANCH:
        raise NumericalError("all outcome probabilities are below 1e-12")
    p = p / p.sum()
    p[p < DEAD_BRANCH] = 0.0
    p /= p.sum()
    cum = np.cumsum(p)
    last = -1
    for d in range(3):
        if p[d] > 0:
            last = d
            if draw < cum[d]:
                return d
    return last


def measure_and_collapse(state: StateVector, q: int, uniform_draw: float) -> tuple[int, StateVector]:
    """Measure qutrit ``q`` given a caller-supplied uniform draw in [0, 1)."""
    if not 0.0 <= uniform_draw < 1.0:
        raise InputError(f"uniform draw must lie in [0, 1), got {uniform_draw}")
    probs = qutrit_probabilities(state, q)
    outcome = pick_outcome(probs, uniform_draw)
    tensor_view = state.copy_amps().reshape(3**q, 3, -1)
    mask = np.zeros(3, dtype=bool)
    mask[outcome] = True
    tensor_view[:, ~mask, :] = 0.0
    amps = tensor_view.reshape(-1) / np.sqrt(probs[outcome])
    return outcome, StateVector(state.num_qutrits, amps, check=False)


def project(state: StateVector, q: int, digit: int) -> tuple[float, StateVector | None]:
    """Probability of ``digit`` on ``q`` and the renormalised branch (or None)."""
    probs = qutrit_probabilities(state, q)
    if probs[digit] < DEAD_BRANCH:
        return probs[digit], None
    view = state.copy_amps().reshape(3**q, 3, -1)
    for d in range(3):
        if d != digit:
            view[:, d, :] = 0.0
    return probs[digit], StateVector(state.num_qutrits, view.reshape(-1) / np.sqrt(probs[digit]), check=False)


def fidelity(s1: StateVector, s2: StateVector) -> float:
    """``|<s1|s2>|**2``."""
    if s1.num_qutrits != s2.num_qutrits:
        raise InputError(f"qutrit counts differ: {s1.num_qutrits} vs {s2.num_qutrits}")
    return float(abs(np.vdot(s1.amps, s2.amps)) ** 2)


def reduced_state(state: StateVector, keep, *, tol: float = 1e-9) -> StateVector:
    """The pure state of the ``keep`` qutrits when the rest is a product basis state.

    Raises InputError if the discarded qutrits are entangled with (or in
    superposition alongside) the kept ones.
    """
    keep = list(keep)
    n = state.num_qutrits
    rest = [q for q in range(n) if q not in keep]
    tensor_view = state.amps.reshape((3,) * n).transpose(keep + rest).reshape(3 ** len(keep), -1)
    weights = np.sum(np.abs(tensor_view) ** 2, axis=0)
    col = int(np.argmax(weights))
    if abs(weights[col] - 1.0) > tol:
        raise InputError("discarded qutrits are not in a definite basis state")
    return StateVector(len(keep), tensor_view[:, col] / np.sqrt(weights[col]))

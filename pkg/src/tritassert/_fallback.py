"""Pure numpy implementations of the hot kernels.

Same signatures and semantics as the compiled ``_kernels`` module; used when
the extension has not been built or ``TRITASSERT_BACKEND=python`` is set.
Gate kernels mutate ``amps`` (a C-contiguous complex128 vector) in place.
"""
import numpy as np

from .errors import NumericalError

DEAD_BRANCH = 1e-12


def apply_single(amps, n, q, mat):
    view = amps.reshape(3**q, 3, 3 ** (n - 1 - q))
    view[...] = np.einsum("ij,ajb->aib", mat, view)


def apply_controlled(amps, n, control, target, mat):
    tensor = amps.reshape((3,) * n)
    index = [slice(None)] * n
    index[control] = 2
    sub = tensor[tuple(index)]
    # dropping the control axis shifts later axes down by one
    axis = target if target < control else target - 1
    moved = np.moveaxis(sub, axis, 0)
    moved[...] = np.tensordot(mat, moved, axes=([1], [0]))


def apply_two(amps, n, q1, q2, mat9):
    tensor = amps.reshape((3,) * n)
    moved = np.moveaxis(tensor, (q1, q2), (0, 1))
    shape = moved.shape
    flat = moved.reshape(9, -1)
    moved[...] = (mat9 @ flat).reshape(shape)


def probabilities(amps, n, q):
    weights = (amps.real**2 + amps.imag**2).reshape(3**q, 3, 3 ** (n - 1 - q))
    return weights.sum(axis=(0, 2))


def joint_marginal(amps, n, qutrits):
    qutrits = [int(x) for x in qutrits]
    weights = (amps.real**2 + amps.imag**2).reshape((3,) * n)
    rest = [ax for ax in range(n) if ax not in qutrits]
    moved = np.transpose(weights, qutrits + rest)
    return moved.reshape(3 ** len(qutrits), -1).sum(axis=1)


def pick_digits(p, u):
    """Vectorised cumulative-threshold selection over rows of ``p``.

    Rows must already be normalised with dead branches zeroed. A draw that
    lands past the last threshold through rounding takes the last live digit.
    """
    cum = np.cumsum(p, axis=1)
    digit = (u[:, None] >= cum).sum(axis=1)
    overflow = digit > 2
    if overflow.any():
        live = p[overflow] > 0
        digit[overflow] = 2 - np.argmax(live[:, ::-1], axis=1)
    return digit


def sample_joint(joint, m, draws):
    """Sequentially measure ``m`` qutrits per shot from their joint table.

    ``joint`` has length ``3**m`` (digit of the first measured qutrit most
    significant); ``draws`` has shape ``(shots, m)``. Returns int64 outcomes
    of the same shape.
    """
    shots = draws.shape[0]
    levels = [np.asarray(joint, dtype=np.float64)]
    for _ in range(m - 1):
        levels.insert(0, levels[0].reshape(-1, 3).sum(axis=1))
    out = np.empty((shots, m), dtype=np.int64)
    prefix = np.zeros(shots, dtype=np.int64)
    for k in range(m):
        cand = levels[k].reshape(-1, 3)[prefix]
        tot = cand.sum(axis=1)
        if (k == 0 and shots and tot[0] < DEAD_BRANCH) or not np.all(np.isfinite(tot)):
            raise NumericalError("state has no measurable probability mass")
        if np.any(tot <= 0):
            raise NumericalError("conditional branch has zero probability mass")
        p = cand / tot[:, None]
        p[p < DEAD_BRANCH] = 0.0
        p /= p.sum(axis=1)[:, None]
        digit = pick_digits(p, draws[:, k])
        out[:, k] = digit
        prefix = prefix * 3 + digit
    return out

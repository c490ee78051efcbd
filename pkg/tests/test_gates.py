import itertools

import numpy as np
import pytest

from tritassert.circuit import Circuit, dense_unitary
from tritassert.errors import InputError
from tritassert.gates import (
    OMEGA,
    Z_LABELS,
    a_gate_sequence,
    a_gate_unitary,
    chrestenson,
    chrestenson_state,
    gate3,
    z_gate,
)

# image of 0, 1, 2 under each permutation, written out by hand
Z_TABLE = {
    "Z0": (0, 1, 2),
    "Z+1": (1, 2, 0),
    "Z+2": (2, 0, 1),
    "Z01": (1, 0, 2),
    "Z02": (2, 1, 0),
    "Z12": (0, 2, 1),
}


@pytest.mark.parametrize("label", Z_LABELS)
def test_z_gates_permute_basis(label):
    mat = z_gate(label).matrix
    for src in range(3):
        col = mat[:, src]
        assert np.argmax(np.abs(col)) == Z_TABLE[label][src]
        assert np.count_nonzero(col) == 1


@pytest.mark.parametrize("label", Z_LABELS + ("Ch1", "Ch2"))
def test_unitary(label):
    m = gate3(label).matrix
    np.testing.assert_allclose(m @ m.conj().T, np.eye(3), atol=1e-12)
    assert gate3(label).cost == 1


def test_chrestenson_pair():
    ch1, ch2 = chrestenson(1).matrix, chrestenson(2).matrix
    np.testing.assert_allclose(ch1 @ ch2, np.eye(3), atol=1e-12)
    assert ch1[1, 1] == pytest.approx(OMEGA / np.sqrt(3))
    assert ch1[2, 1] == pytest.approx(OMEGA**2 / np.sqrt(3))
    for k in range(3):
        np.testing.assert_allclose(ch1[:, k], chrestenson_state(k), atol=1e-12)


def test_unknown_labels():
    with pytest.raises(InputError):
        z_gate("Z+9")
    with pytest.raises(InputError):
        chrestenson(3)
    with pytest.raises(InputError):
        a_gate_unitary("A3")
    with pytest.raises(InputError):
        a_gate_sequence("A1", 0, 0)


@pytest.mark.parametrize("kind,mult", [("A1", 1), ("A2", 2)])
def test_a_gates_add_multiple_of_control(kind, mult):
    u = a_gate_unitary(kind)
    assert (u.cost, u.depth) == (4, 4)
    for c, t in itertools.product(range(3), repeat=2):
        col = u.matrix[:, 3 * c + t]
        assert np.argmax(np.abs(col)) == 3 * c + (t + mult * c) % 3


@pytest.mark.parametrize("kind", ["A1", "A2"])
def test_a_gate_decomposition_matches_permutation(kind):
    prims = a_gate_sequence(kind, 0, 1)
    assert len(prims) == 4
    dense = dense_unitary(Circuit(2, ops=prims))
    np.testing.assert_allclose(dense, a_gate_unitary(kind).matrix, atol=1e-12)

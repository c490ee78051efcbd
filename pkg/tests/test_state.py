import numpy as np
import pytest
from conftest import random_state_amps
from hypothesis import given, settings
from hypothesis import strategies as st

from tritassert.errors import InputError, NumericalError
from tritassert.gates import chrestenson, z_gate
from tritassert.state import (
    StateVector,
    apply_controlled_ms,
    apply_single,
    apply_two_qutrit,
    fidelity,
    index_of,
    init_basis,
    label_of,
    measure_and_collapse,
    pick_outcome,
    project,
    qutrit_probabilities,
    reduced_state,
    tensor,
)


def test_index_is_most_significant_first():
    assert index_of([1, 0, 0]) == 9
    assert index_of([0, 0, 2]) == 2
    assert label_of(9, 3) == "100"
    for i in range(27):
        assert index_of(int(c) for c in label_of(i, 3)) == i


def test_init_basis_and_amplitude_lookup():
    s = init_basis(4, "2202")
    assert s.amplitude("2202") == 1
    assert s.terms() == [("2202", 1 + 0j)]


def test_state_is_immutable_and_checked():
    s = init_basis(1, [0])
    with pytest.raises(ValueError):
        s.amps[0] = 0
    with pytest.raises(InputError):
        StateVector(1, [1, 1, 0])
    with pytest.raises(NumericalError):
        StateVector(1, [np.nan, 0, 0])
    with pytest.raises(InputError):
        StateVector(2, [1, 0, 0])


def test_from_terms_normalize():
    s = StateVector.from_terms({"00": 1, "11": 1}, normalize=True)
    assert s.amplitude("11") == pytest.approx(1 / np.sqrt(2))


def test_bad_digits_rejected():
    with pytest.raises(InputError):
        init_basis(2, "03")
    with pytest.raises(InputError):
        init_basis(2, "0")


def test_tensor_orders_factors_left_to_right():
    s = tensor(init_basis(1, "1"), init_basis(2, "02"))
    assert s.terms() == [("102", 1 + 0j)]


def test_single_gate_acts_on_named_qutrit():
    s = apply_single(init_basis(3, "000"), z_gate("Z+1"), 1)
    assert s.terms() == [("010", 1 + 0j)]


def test_controlled_gate_fires_only_on_two():
    for c in range(3):
        s = apply_controlled_ms(init_basis(2, [c, 0]), z_gate("Z+1"), 0, 1)
        assert s.terms()[0][0] == f"{c}{1 if c == 2 else 0}"
    # control below target in significance
    s = apply_controlled_ms(init_basis(2, "02"), z_gate("Z+2"), 1, 0)
    assert s.terms()[0][0] == "22"
    with pytest.raises(InputError):
        apply_controlled_ms(init_basis(2, "00"), z_gate("Z+1"), 1, 1)


def test_two_qutrit_gate_against_kron():
    rng = np.random.default_rng(5)
    amps = random_state_amps(rng, 2)
    u = np.linalg.qr(rng.normal(size=(9, 9)) + 1j * rng.normal(size=(9, 9)))[0]
    out = apply_two_qutrit(StateVector(2, amps), u, 0, 1)
    np.testing.assert_allclose(out.amps, u @ amps, atol=1e-12)
    # reversed order swaps the factor roles
    swap = np.zeros((9, 9))
    for a in range(3):
        for b in range(3):
            swap[3 * b + a, 3 * a + b] = 1
    out = apply_two_qutrit(StateVector(2, amps), u, 1, 0)
    np.testing.assert_allclose(out.amps, swap @ u @ swap @ amps, atol=1e-12)


def test_probabilities_and_projection():
    s = tensor(StateVector(1, np.sqrt([0.5, 0.3, 0.2])), init_basis(1, "1"))
    assert qutrit_probabilities(s, 0) == pytest.approx((0.5, 0.3, 0.2))
    assert qutrit_probabilities(s, 1) == pytest.approx((0, 1, 0))
    p, post = project(s, 0, 2)
    assert p == pytest.approx(0.2)
    assert post.terms() == [("21", pytest.approx(1))]
    p, post = project(s, 1, 0)
    assert post is None


def test_pick_outcome_thresholds():
    assert pick_outcome([0.5, 0.3, 0.2], 0.0) == 0
    assert pick_outcome([0.5, 0.3, 0.2], 0.49) == 0
    assert pick_outcome([0.5, 0.3, 0.2], 0.5) == 1
    assert pick_outcome([0.5, 0.3, 0.2], 0.81) == 2
    # rounding overflow falls back to the last live digit
    assert pick_outcome([0.5, 0.5, 0.0], 1 - 1e-17) == 1
    # a branch below 1e-12 can never be chosen
    assert pick_outcome([1.0, 1e-14, 0.0], 0.9999999999999) == 0
    with pytest.raises(NumericalError):
        pick_outcome([0.0, 0.0, 0.0], 0.3)
    with pytest.raises(NumericalError):
        pick_outcome([np.nan, 0.0, 0.0], 0.3)


def test_measure_and_collapse():
    s = StateVector(1, np.sqrt([0.5, 0.3, 0.2]))
    assert measure_and_collapse(s, 0, 0.1)[0] == 0
    d, post = measure_and_collapse(s, 0, 0.9)
    assert d == 2 and post.terms() == [("2", pytest.approx(1))]
    with pytest.raises(InputError):
        measure_and_collapse(s, 0, 1.0)


def test_reduced_state():
    s = tensor(StateVector(1, np.sqrt([0.5, 0.5, 0])), init_basis(1, "2"))
    r = reduced_state(s, [0])
    assert fidelity(r, StateVector(1, np.sqrt([0.5, 0.5, 0]))) == pytest.approx(1)
    with pytest.raises(InputError):
        reduced_state(StateVector.from_terms({"00": 1, "11": 1}, normalize=True), [0])


@settings(max_examples=60, deadline=None)
@given(st.integers(1, 4), st.integers(0, 2**32 - 1), st.data())
def test_gates_preserve_norm(n, seed, data):
    rng = np.random.default_rng(seed)
    s = StateVector(n, random_state_amps(rng, n))
    q = data.draw(st.integers(0, n - 1))
    for gate in (chrestenson(1), chrestenson(2), z_gate("Z12")):
        assert apply_single(s, gate, q).norm_squared() == pytest.approx(1, abs=1e-12)
    if n > 1:
        t = data.draw(st.integers(0, n - 1).filter(lambda x: x != q))
        assert apply_controlled_ms(s, z_gate("Z+1"), q, t).norm_squared() == pytest.approx(1, abs=1e-12)


@settings(max_examples=40, deadline=None)
@given(st.integers(1, 3), st.integers(0, 2**32 - 1), st.data())
def test_gate_application_is_linear(n, seed, data):
    rng = np.random.default_rng(seed)
    x, y = random_state_amps(rng, n), random_state_amps(rng, n)
    a, b = complex(*rng.normal(size=2)), complex(*rng.normal(size=2))
    q = data.draw(st.integers(0, n - 1))
    gate = chrestenson(1)

    def apply(v):
        norm = np.linalg.norm(v)
        return apply_single(StateVector(n, v / norm), gate, q).amps * norm

    np.testing.assert_allclose(apply(a * x + b * y), a * apply(x) + b * apply(y), atol=1e-10)


@settings(max_examples=40, deadline=None)
@given(st.integers(1, 3), st.integers(0, 2**32 - 1), st.floats(0, 1, exclude_max=True), st.data())
def test_collapse_lands_in_supported_branch(n, seed, u, data):
    rng = np.random.default_rng(seed)
    s = StateVector(n, random_state_amps(rng, n))
    q = data.draw(st.integers(0, n - 1))
    d, post = measure_and_collapse(s, q, u)
    assert qutrit_probabilities(s, q)[d] > 0
    assert qutrit_probabilities(post, q)[d] == pytest.approx(1)
    assert post.norm_squared() == pytest.approx(1)

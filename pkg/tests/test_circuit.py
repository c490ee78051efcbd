import numpy as np
import pytest
from conftest import gate_ops
from hypothesis import given, settings
from hypothesis import strategies as st

from tritassert.circuit import (
    Circuit,
    concat,
    dense_unitary,
    depth_asap,
    expand_primitives,
    metrics,
    oracle_state,
    quantum_cost,
    shot_draws,
    simulate,
    simulate_shots,
)
from tritassert.errors import InputError, ResourceError
from tritassert.gates import gate3
from tritassert.ops import Composite, ControlledMS, Measure, Single
from tritassert.state import fidelity

Z = gate3


def test_validation():
    with pytest.raises(InputError):
        Circuit(0)
    with pytest.raises(InputError):
        Circuit(2, (0,))
    with pytest.raises(InputError):
        Circuit(2, ops=[Single(Z("Z+1"), 2)])
    with pytest.raises(InputError):
        Circuit(2, ops=[ControlledMS(Z("Z+1"), 1, 1)])
    with pytest.raises(InputError):
        Circuit(2, ops=[Measure(0, "m"), Single(Z("Z+1"), 0)])
    with pytest.raises(InputError):
        Circuit(2, ops=[Measure(0, "m"), Measure(1, "m")])
    with pytest.raises(InputError):
        Circuit(2, ops=[Measure(0, "m"), Measure(0, "k")])
    with pytest.raises(InputError):
        Circuit(1, ops=[Single(Z("Z+1"), 0)], slices=[("a", 1), ("b", 1)])
    with pytest.raises(InputError):
        Circuit(1, ops=[Single(Z("Z+1"), 0)], slices=[("a", 2)])
    with pytest.raises(InputError):
        Circuit(1, ops=[Single(Z("Z+1"), 0)], slices=[("a", 0), ("a", 1)])


def test_default_init_is_zero():
    assert Circuit(3).init_digits == (0, 0, 0)


def test_slices_snapshot_after_position():
    c = Circuit(1, ops=[Single(Z("Z+1"), 0), Single(Z("Z+1"), 0)], slices=[("start", 0), ("mid", 1), ("end", 2)])
    tr = simulate(c)
    assert [tr.slices[k].terms()[0][0] for k in ("start", "mid", "end")] == ["0", "1", "2"]
    assert tr.final.terms()[0][0] == "2"


def test_concat_shifts_slices():
    c1 = Circuit(1, (1,), [Single(Z("Z+1"), 0)], [("a", 1)])
    c2 = Circuit(1, ops=[Single(Z("Z+1"), 0)], slices=[("b", 1)])
    c = concat(c1, c2)
    assert c.slices == (("a", 1), ("b", 2)) and c.init_digits == (1,)


def test_metrics_count_composites_as_four():
    ops = [Composite("A1", 0, 1), Single(Z("Ch1"), 2), ControlledMS(Z("Z+1"), 2, 0), Measure(0, "m")]
    assert quantum_cost(ops) == 4 + 1 + 1
    assert len(expand_primitives(ops)) == 6
    # Ch1 on 2 runs alongside the A1 expansion; the controlled gate waits for both
    assert depth_asap(ops) == 5
    assert metrics(Circuit(3, ops=ops)).quantum_cost == 6
    assert metrics(Circuit(3)).depth == 0


def test_dense_oracle_guards():
    with pytest.raises(ResourceError):
        dense_unitary(Circuit(7))
    with pytest.raises(InputError):
        dense_unitary(Circuit(1, ops=[Measure(0, "m")]))


@settings(max_examples=80, deadline=None)
@given(st.data())
def test_simulator_matches_dense_oracle(data):
    n = data.draw(st.integers(1, 4))
    ops = data.draw(st.lists(gate_ops(n), max_size=12))
    init = data.draw(st.lists(st.integers(0, 2), min_size=n, max_size=n))
    c = Circuit(n, tuple(init), ops)
    assert fidelity(simulate(c).final, oracle_state(c)) > 1 - 1e-9
    u = dense_unitary(c)
    np.testing.assert_allclose(u.conj().T @ u, np.eye(3**n), atol=1e-10)


def test_shot_draws_are_counter_based():
    full = shot_draws(7, 50, 3)
    assert full.shape == (50, 3)
    np.testing.assert_array_equal(full[:20], shot_draws(7, 20, 3))
    assert not np.array_equal(full, shot_draws(8, 50, 3))
    assert np.all((full >= 0) & (full < 1))
    # seeds are taken modulo 2**64
    np.testing.assert_array_equal(shot_draws(-1, 5, 1), shot_draws(2**64 - 1, 5, 1))


def test_simulate_shots_deterministic_and_validated():
    c = Circuit(2, ops=[Single(Z("Ch1"), 0), Composite("A1", 0, 1), Measure(0, "a"), Measure(1, "b")])
    h1 = simulate_shots(c, 3000, 11)
    assert h1 == simulate_shots(c, 3000, 11)
    assert set(h1) == {(0, 0), (1, 1), (2, 2)}
    assert sum(h1.values()) == 3000
    with pytest.raises(InputError):
        simulate_shots(c, 0, 1)
    with pytest.raises(InputError):
        simulate_shots(Circuit(1), 10, 1)


def test_measurement_frequencies_follow_born_rule():
    # Ch1 then Z12-controlled mixing gives a non-uniform joint distribution
    c = Circuit(2, ops=[Single(Z("Ch1"), 0), ControlledMS(Z("Z+1"), 0, 1), Single(Z("Ch1"), 1),
                        Measure(1, "b"), Measure(0, "a")])
    final = simulate(c).final
    probs = {}
    for label, amp in final.terms(0):
        key = (int(label[1]), int(label[0]))
        probs[key] = probs.get(key, 0) + abs(amp) ** 2
    shots = 20000
    hist = simulate_shots(c, shots, 3)
    for key, p in probs.items():
        sigma = np.sqrt(p * (1 - p) / shots)
        assert abs(hist.get(key, 0) / shots - p) <= 4 * sigma + 1e-12


def test_start_state_pads_with_init_digits():
    from tritassert.circuit import start_state
    from tritassert.state import StateVector

    psi = StateVector(1, np.sqrt([0.5, 0.3, 0.2]))
    c = Circuit(2, (0, 2))
    s = start_state(c, psi)
    assert s.amplitude("02") == pytest.approx(np.sqrt(0.5))
    assert s.amplitude("22") == pytest.approx(np.sqrt(0.2))
    assert simulate(c, psi).final.amplitude("12") == pytest.approx(np.sqrt(0.3))
    with pytest.raises(InputError):
        start_state(Circuit(1), StateVector(2, np.eye(9)[0]))

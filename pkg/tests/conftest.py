import numpy as np
import pytest
from hypothesis import strategies as st

from tritassert.gates import GATE3_LABELS, Z_LABELS, gate3
from tritassert.ops import Composite, ControlledMS, Single

ACCEPTANCE_LINES: list[str] = []


def random_state_amps(rng: np.random.Generator, n: int) -> np.ndarray:
    amps = rng.normal(size=3**n) + 1j * rng.normal(size=3**n)
    return amps / np.linalg.norm(amps)


@st.composite
def gate_ops(draw, n: int):
    kind = draw(st.sampled_from(["single", "controlled", "composite"] if n > 1 else ["single"]))
    if kind == "single":
        return Single(gate3(draw(st.sampled_from(GATE3_LABELS))), draw(st.integers(0, n - 1)))
    a, b = draw(st.lists(st.integers(0, n - 1), min_size=2, max_size=2, unique=True))
    if kind == "controlled":
        return ControlledMS(gate3(draw(st.sampled_from(Z_LABELS))), a, b)
    return Composite(draw(st.sampled_from(["A1", "A2"])), a, b)


@pytest.fixture
def rng():
    return np.random.default_rng(1234)


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)

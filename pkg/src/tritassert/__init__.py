"""Qutrit state-vector simulation with ancilla-based dynamic assertions."""
from ._backend import BACKEND
from .assertions import (
    AssertionReport,
    AssertionSpec,
    assertion_metrics,
    attach,
    classical_assertion,
    combined_assertion,
    entanglement_assertion,
    run_assertion,
    run_assertions,
    superposition_assertion,
)
from .circuit import (
    Circuit,
    dense_unitary,
    metrics,
    oracle_state,
    simulate,
    simulate_shots,
)
from .dsl import parse, serialize
from .errors import InputError, NumericalError, ParseError, ResourceError, TritError
from .state import StateVector, fidelity, init_basis, measure_and_collapse

__all__ = [
    "BACKEND",
    "AssertionReport",
    "AssertionSpec",
    "Circuit",
    "InputError",
    "NumericalError",
    "ParseError",
    "ResourceError",
    "StateVector",
    "TritError",
    "assertion_metrics",
    "attach",
    "classical_assertion",
    "combined_assertion",
    "dense_unitary",
    "entanglement_assertion",
    "fidelity",
    "init_basis",
    "measure_and_collapse",
    "metrics",
    "oracle_state",
    "parse",
    "run_assertion",
    "run_assertions",
    "serialize",
    "simulate",
    "simulate_shots",
    "superposition_assertion",
]

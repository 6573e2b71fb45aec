"""Reciprocation dynamics on interaction networks."""

from ._core import (
    Agent,
    ReciprocityError,
    Scenario,
    check,
    counterexample,
    dynamics_matrix,
    limit,
    rate,
    simulate,
    spectral_radius,
    step,
    structure,
    sweep,
)

__all__ = [
    "Agent",
    "ReciprocityError",
    "Scenario",
    "check",
    "counterexample",
    "dynamics_matrix",
    "limit",
    "rate",
    "simulate",
    "spectral_radius",
    "step",
    "structure",
    "sweep",
]

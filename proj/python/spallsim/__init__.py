"""Python access to the spallsim fire simulator."""

from ._core import (
    ScenarioError,
    SolverFailure,
    builtin_scenarios,
    failure_function,
    flux_decomposition,
    load_scenario,
    moisture_content,
    run,
    saturation_vapour_pressure,
    serialize_scenario,
    validate,
)

__all__ = [
    "ScenarioError",
    "SolverFailure",
    "builtin_scenarios",
    "failure_function",
    "flux_decomposition",
    "load_scenario",
    "moisture_content",
    "run",
    "saturation_vapour_pressure",
    "serialize_scenario",
    "validate",
]

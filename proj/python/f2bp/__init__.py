"""Full two rigid body simulation with polyhedral mutual gravity."""

import json as _json

from ._f2bp import (
    Body,
    ConfigError,
    ContactError,
    ConvergenceError,
    Error,
    Gradients,
    MutualGravity,
    ParseError,
    SingularConfigurationError,
    StepSizeUnderflowError,
    elements_to_state,
    euler313,
    load_body,
    octahedron,
    osculating_elements,
    q_tensor_entry,
)
from ._f2bp import _run


def run(config, **overrides):
    """Run a key = value config file and return the run summary as a dict.

    Accepted overrides: integrator, h, tol, tf, order, out_states, out_diag.
    """
    return _json.loads(_run(str(config), **overrides))


__all__ = [
    "Body",
    "ConfigError",
    "ContactError",
    "ConvergenceError",
    "Error",
    "Gradients",
    "MutualGravity",
    "ParseError",
    "SingularConfigurationError",
    "StepSizeUnderflowError",
    "elements_to_state",
    "euler313",
    "load_body",
    "octahedron",
    "osculating_elements",
    "q_tensor_entry",
    "run",
]

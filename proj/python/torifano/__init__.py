"""Python front end for the torifano core."""

import json

from . import _core
from ._core import (
    ConfigError,
    DegenerateError,
    DegenerateLiftError,
    DomainMismatchError,
    EmptyPolytopeError,
    InputError,
    RangeError,
    SingularHessianError,
    TorifanoError,
    UnboundedPolytopeError,
    UnknownExampleError,
    builtin_names,
    command_names,
    polytope,
    solve_ma_1d,
    weighted_moments,
)

__version__ = _core.__version__


def example(name):
    """Problem document of a builtin example, as a dict."""
    return json.loads(_core.builtin_example_json(name))


def normalize(problem):
    """Validates a problem dict and returns its canonical form."""
    return json.loads(_core.normalize_problem_json(json.dumps(problem)))


def run(command, problem, with_snapshots=False):
    """Runs a CLI command on a problem (dict or builtin name) and returns the report.

    The report carries the exit code the CLI would use under "exit_code".
    """
    if isinstance(problem, str):
        problem = example(problem)
    text, code, snapshots = _core.run_json(command, json.dumps(problem))
    report = json.loads(text)
    report["exit_code"] = code
    if with_snapshots:
        return report, [json.loads(s) for s in snapshots]
    return report


__all__ = [
    "ConfigError",
    "DegenerateError",
    "DegenerateLiftError",
    "DomainMismatchError",
    "EmptyPolytopeError",
    "InputError",
    "RangeError",
    "SingularHessianError",
    "TorifanoError",
    "UnboundedPolytopeError",
    "UnknownExampleError",
    "builtin_names",
    "command_names",
    "example",
    "normalize",
    "polytope",
    "run",
    "solve_ma_1d",
    "weighted_moments",
]

"""Python bindings for the pcfp solver. Reports come back as dicts."""

import json

from . import _pcfp
from ._pcfp import (
    Error,
    InvalidArgument,
    LimitError,
    ParseError,
    SolverError,
    ValidationError,
    beta,
    chernoff_lower_tail,
    chernoff_upper_tail,
)

__all__ = [
    "Error", "InvalidArgument", "LimitError", "ParseError", "SolverError",
    "ValidationError", "beta", "chernoff_lower_tail", "chernoff_upper_tail",
    "solve", "experiment", "oracle", "generate", "validate",
]


def _text(instance):
    return instance if isinstance(instance, str) else json.dumps(instance)


def solve(instance, eps=0.5, eps_lp=0.05, seed=1):
    return json.loads(_pcfp.solve(_text(instance), eps, eps_lp, seed))


def experiment(instance, eps=0.5, eps_lp=0.05, trials=200, seed=1):
    return json.loads(_pcfp.experiment(_text(instance), eps, eps_lp, trials, seed))


def oracle(instance):
    return json.loads(_pcfp.oracle(_text(instance)))


def generate(family="grid", size=4, requests=10, stages=2, capacity=10.0, seed=1):
    """size is the node count for path/random and the side length for grid."""
    return json.loads(_pcfp.generate(family, size, requests, stages, capacity, seed))


def validate(instance):
    return _pcfp.validate(_text(instance))

"""Benchmark problems addressable by string id ("dtlz2", "cdtlz3", "wfg7")."""
import re
from typing import Tuple

import numpy as np

from ..core.errors import InvalidArgumentError, InvalidProblemError
from . import dtlz as _dtlz
from . import wfg as _wfg
from .base import CountingEvaluator, ProblemDef
from .dtlz import convex_dtlz, dtlz
from .wfg import wfg

_ID_PATTERN = re.compile(r"^(dtlz|cdtlz|wfg)(\d+)$")

PROBLEM_FAMILIES = {"dtlz": dtlz, "cdtlz": convex_dtlz, "wfg": wfg}


def parse_problem_id(problem_id: str) -> Tuple[str, int]:
    """
    Split an id such as "cdtlz3" into ("cdtlz", 3).

    Raises:
        InvalidArgumentError: If the id does not name a known family
    """
    match = _ID_PATTERN.match(str(problem_id).strip().lower())
    if not match:
        raise InvalidArgumentError(
            f"Unknown problem id '{problem_id}'; expected dtlz1-4, cdtlz1-4 or wfg1-9"
        )
    return match.group(1), int(match.group(2))


def get_problem(problem_id: str, m: int) -> ProblemDef:
    """Build a benchmark problem from its id and objective count."""
    family, k = parse_problem_id(problem_id)
    return PROBLEM_FAMILIES[family](k, int(m))


def known_hv_bounds(problem: ProblemDef) -> Tuple[np.ndarray, np.ndarray]:
    """
    Ideal and nadir points used to normalize HV for a named benchmark.

    Raises:
        InvalidProblemError: If the problem is not one of the named benchmarks
    """
    try:
        family, k = parse_problem_id(problem.name)
    except InvalidArgumentError as e:
        raise InvalidProblemError(f"No known HV bounds for problem '{problem.name}'") from e
    m = problem.m
    if family == "dtlz" and k in _dtlz.DISTANCE_VARIABLES:
        nadir = _dtlz.dtlz_nadir(k, m)
    elif family == "cdtlz" and k in _dtlz.DISTANCE_VARIABLES:
        nadir = _dtlz.convex_transform(_dtlz.dtlz_nadir(k, m))
    elif family == "wfg" and k in _wfg.WFG_EVALUATORS:
        nadir = _wfg.wfg_nadir(m)
    else:
        raise InvalidProblemError(f"No known HV bounds for problem '{problem.name}'")
    return np.zeros(m), nadir


def optimal_decision(problem: ProblemDef, position: np.ndarray) -> np.ndarray:
    """Pareto-optimal decision vectors of a named benchmark for the given position values."""
    family, _ = parse_problem_id(problem.name)
    if family == "wfg":
        return _wfg.optimal_decision(problem, position)
    return _dtlz.optimal_decision(problem, position)


__all__ = [
    "CountingEvaluator", "ProblemDef", "PROBLEM_FAMILIES",
    "convex_dtlz", "dtlz", "wfg",
    "get_problem", "known_hv_bounds", "optimal_decision", "parse_problem_id",
]

"""
DTLZ1-4 and their convex variants.

Variable counts follow the usual recommendation n = m + k - 1 with k = 5 for
DTLZ1 and k = 10 for DTLZ2-4. The convex variants raise f_1..f_{m-1} to the
fourth power and f_m to the second power.
"""
from functools import partial

import numpy as np

from ..core.errors import InvalidArgumentError
from .base import ProblemDef, make_problem

DISTANCE_VARIABLES = {1: 5, 2: 10, 3: 10, 4: 10}
DTLZ4_ALPHA = 100.0


def _g_rastrigin(xm: np.ndarray) -> np.ndarray:
    k = xm.shape[1]
    return 100.0 * (k + np.sum((xm - 0.5) ** 2 - np.cos(20.0 * np.pi * (xm - 0.5)), axis=1))


def _g_sphere(xm: np.ndarray) -> np.ndarray:
    return np.sum((xm - 0.5) ** 2, axis=1)


def _linear_front(xp: np.ndarray, g: np.ndarray, m: int) -> np.ndarray:
    F = np.empty((xp.shape[0], m))
    for i in range(m):
        f = 0.5 * (1.0 + g)
        f = f * np.prod(xp[:, : m - 1 - i], axis=1)
        if i > 0:
            f = f * (1.0 - xp[:, m - 1 - i])
        F[:, i] = f
    return F


def _spherical_front(xp: np.ndarray, g: np.ndarray, m: int) -> np.ndarray:
    F = np.empty((xp.shape[0], m))
    angles = xp * (np.pi / 2.0)
    for i in range(m):
        f = 1.0 + g
        f = f * np.prod(np.cos(angles[:, : m - 1 - i]), axis=1)
        if i > 0:
            f = f * np.sin(angles[:, m - 1 - i])
        F[:, i] = f
    return F


def evaluate_dtlz(X: np.ndarray, k: int, m: int) -> np.ndarray:
    """Objectives of DTLZ-k for an (rows, n) decision matrix."""
    xp, xm = X[:, : m - 1], X[:, m - 1:]
    if k == 1:
        return _linear_front(xp, _g_rastrigin(xm), m)
    if k == 2:
        return _spherical_front(xp, _g_sphere(xm), m)
    if k == 3:
        return _spherical_front(xp, _g_rastrigin(xm), m)
    if k == 4:
        return _spherical_front(xp ** DTLZ4_ALPHA, _g_sphere(xm), m)
    raise InvalidArgumentError(f"Unsupported DTLZ index {k}; expected 1-4")


def convex_transform(F: np.ndarray) -> np.ndarray:
    """f_j -> f_j^4 for j < m, f_m -> f_m^2."""
    G = F ** 4
    G[..., -1] = F[..., -1] ** 2
    return G


def evaluate_convex_dtlz(X: np.ndarray, k: int, m: int) -> np.ndarray:
    return convex_transform(evaluate_dtlz(X, k, m))


def _check(k: int, m: int) -> None:
    if k not in DISTANCE_VARIABLES:
        raise InvalidArgumentError(f"Unsupported DTLZ index {k}; expected 1-4")
    if m < 2:
        raise InvalidArgumentError(f"DTLZ needs m >= 2, got {m}")


def dtlz_nadir(k: int, m: int) -> np.ndarray:
    return np.full(m, 0.5 if k == 1 else 1.0)


def dtlz(k: int, m: int) -> ProblemDef:
    """
    DTLZ-k with m objectives.

    Raises:
        InvalidArgumentError: If k is not in 1..4 or m < 2
    """
    _check(k, m)
    n = m + DISTANCE_VARIABLES[k] - 1
    return make_problem(
        name=f"dtlz{k}", m=m, n=n,
        evaluator=partial(evaluate_dtlz, k=k, m=m),
        hv_ideal=np.zeros(m),
        hv_nadir=dtlz_nadir(k, m),
    )


def convex_dtlz(k: int, m: int) -> ProblemDef:
    """
    Convex DTLZ-k with m objectives; the HV nadir is the transformed DTLZ nadir.

    Raises:
        InvalidArgumentError: If k is not in 1..4 or m < 2
    """
    _check(k, m)
    n = m + DISTANCE_VARIABLES[k] - 1
    return make_problem(
        name=f"cdtlz{k}", m=m, n=n,
        evaluator=partial(evaluate_convex_dtlz, k=k, m=m),
        hv_ideal=np.zeros(m),
        hv_nadir=convex_transform(dtlz_nadir(k, m)),
    )


def optimal_decision(problem: ProblemDef, position: np.ndarray) -> np.ndarray:
    """Pareto-optimal decision vectors: given position variables, distance variables at 0.5."""
    position = np.atleast_2d(position)
    X = np.full((position.shape[0], problem.n), 0.5)
    X[:, : problem.m - 1] = position
    return X

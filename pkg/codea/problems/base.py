"""
Problem definition shared by all benchmark suites.
"""
import logging
from dataclasses import dataclass, field
from typing import Callable, Optional

import numpy as np

from ..core.errors import ContractViolationError, InvalidProblemError

Evaluator = Callable[[np.ndarray], np.ndarray]


@dataclass(frozen=True)
class ProblemDef:
    """
    A box-constrained minimization problem with known HV normalization bounds.

    The evaluator maps an (k, n) decision matrix to an (k, m) objective matrix
    and must be pure, so evaluating rows in any grouping gives identical values.
    """
    name: str
    m: int
    n: int
    lower: np.ndarray
    upper: np.ndarray
    evaluator: Evaluator = field(repr=False)
    hv_ideal: np.ndarray = field(repr=False)
    hv_nadir: np.ndarray = field(repr=False)

    def __post_init__(self):
        if self.lower.shape != (self.n,) or self.upper.shape != (self.n,):
            raise ContractViolationError(f"{self.name}: bounds must have length n={self.n}")
        if np.any(self.lower > self.upper):
            raise ContractViolationError(f"{self.name}: lower bound exceeds upper bound")
        if np.any(self.hv_ideal >= self.hv_nadir):
            raise InvalidProblemError(f"{self.name}: hv_ideal must be strictly below hv_nadir")

    def evaluate(self, X: np.ndarray) -> np.ndarray:
        """
        Evaluate decision vectors.

        Args:
            X: (k, n) decision matrix or a single (n,) vector

        Returns:
            np.ndarray: (k, m) objectives, or (m,) for a single vector
        """
        X = np.asarray(X, dtype=np.float64)
        single = X.ndim == 1
        X2 = np.atleast_2d(X)
        if X2.shape[1] != self.n:
            raise ContractViolationError(f"{self.name}: expected {self.n} variables, got {X2.shape[1]}")
        F = np.asarray(self.evaluator(X2.copy()), dtype=np.float64)
        return F[0] if single else F

    def with_evaluator(self, evaluator: Evaluator) -> "ProblemDef":
        """Same problem with a wrapped evaluator (e.g. an evaluation counter)."""
        return ProblemDef(
            name=self.name, m=self.m, n=self.n, lower=self.lower, upper=self.upper,
            evaluator=evaluator, hv_ideal=self.hv_ideal, hv_nadir=self.hv_nadir,
        )


class CountingEvaluator:
    """Evaluator wrapper counting individual evaluations."""

    def __init__(self, evaluator: Evaluator):
        self.evaluator = evaluator
        self.count = 0
        self.logger = logging.getLogger(self.__class__.__name__)

    def __call__(self, X: np.ndarray) -> np.ndarray:
        self.count += X.shape[0]
        self.logger.debug(f"Evaluating {X.shape[0]} individuals (total {self.count})")
        return self.evaluator(X)


def make_problem(name: str, m: int, n: int, evaluator: Evaluator,
                 hv_ideal: np.ndarray, hv_nadir: np.ndarray,
                 lower: Optional[np.ndarray] = None, upper: Optional[np.ndarray] = None) -> ProblemDef:
    """Build a ProblemDef; bounds default to the unit box."""
    return ProblemDef(
        name=name, m=m, n=n,
        lower=np.zeros(n) if lower is None else np.asarray(lower, dtype=np.float64),
        upper=np.ones(n) if upper is None else np.asarray(upper, dtype=np.float64),
        evaluator=evaluator,
        hv_ideal=np.asarray(hv_ideal, dtype=np.float64),
        hv_nadir=np.asarray(hv_nadir, dtype=np.float64),
    )

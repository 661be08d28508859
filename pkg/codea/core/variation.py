"""
Population initialization and offspring generation.

SBX and polynomial mutation operate on whole (pairs, n) blocks. Random draws
are taken from the run's RngStream in a fixed order: pairing permutation,
odd-size mate, crossover draws, mutation draws.
"""
import logging
from dataclasses import dataclass, replace
from typing import Optional, Tuple

import numpy as np

from .errors import ContractViolationError
from .population import Population, RngStream

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class VariationConfig:
    """
    SBX and polynomial-mutation parameters.

    Attributes:
        eta_c: SBX distribution index
        eta_m: Mutation distribution index
        p_c: Probability that a parent pair is recombined
        p_m: Per-variable mutation probability; None means 1/n
    """
    eta_c: float = 30.0
    eta_m: float = 30.0
    p_c: float = 1.0
    p_m: Optional[float] = None

    def __post_init__(self):
        if self.eta_c <= 0 or self.eta_m <= 0:
            raise ContractViolationError("Distribution indices must be positive")
        if not 0.0 <= self.p_c <= 1.0:
            raise ContractViolationError(f"p_c must lie in [0, 1], got {self.p_c}")
        if self.p_m is not None and not 0.0 <= self.p_m <= 1.0:
            raise ContractViolationError(f"p_m must lie in [0, 1], got {self.p_m}")

    def resolve(self, n: int) -> "VariationConfig":
        """Fill in p_m = 1/n when unset."""
        if self.p_m is not None:
            return self
        return replace(self, p_m=1.0 / n)


def init_population(problem, N: int, rng: RngStream) -> Population:
    """
    N individuals drawn uniformly from the problem box, evaluated in one batch.

    Raises:
        ContractViolationError: If N < 2
    """
    if N < 2:
        raise ContractViolationError(f"Population size must be at least 2, got {N}")
    X = rng.uniform(problem.lower, problem.upper, size=(N, problem.n))
    X = np.clip(X, problem.lower, problem.upper)
    return Population(decisions=X, objectives=problem.evaluate(X), capacity=N)


def sbx_crossover(p1: np.ndarray, p2: np.ndarray, cfg: VariationConfig, rng: RngStream,
                  lower: np.ndarray, upper: np.ndarray) -> Tuple[np.ndarray, np.ndarray]:
    """
    Simulated binary crossover of one pair or of row-aligned parent blocks.

    Each variable takes part with probability 0.5; the children of every
    variable are exchanged with probability 0.5, so each child is centred on
    the parents' midpoint. A pair skips recombination with probability 1 - p_c
    and its children are copies of the parents.

    Args:
        p1, p2: (n,) parents or (pairs, n) parent blocks
        cfg: Variation parameters
        rng: Run random stream
        lower, upper: Variable bounds

    Returns:
        tuple: Two children of the parents' shape, clipped to bounds
    """
    p1 = np.asarray(p1, dtype=np.float64)
    p2 = np.asarray(p2, dtype=np.float64)
    if p1.shape != p2.shape:
        raise ContractViolationError(f"Parents differ in shape: {p1.shape} vs {p2.shape}")
    single = p1.ndim == 1
    a, b = np.atleast_2d(p1), np.atleast_2d(p2)
    pairs, n = a.shape

    mu = rng.random((pairs, n))
    beta = np.where(
        mu <= 0.5,
        (2.0 * mu) ** (1.0 / (cfg.eta_c + 1.0)),
        (2.0 - 2.0 * mu) ** (-1.0 / (cfg.eta_c + 1.0)),
    )
    participate = rng.random((pairs, n)) >= 0.5
    exchange = rng.integers(0, 2, size=(pairs, n)) == 1
    recombine = (rng.random(pairs) < cfg.p_c)[:, None]

    mid = (a + b) / 2.0
    half = (a - b) / 2.0
    c1 = np.where(participate & recombine, mid + beta * half, a)
    c2 = np.where(participate & recombine, mid - beta * half, b)
    swap = exchange & recombine
    c1, c2 = np.where(swap, c2, c1), np.where(swap, c1, c2)
    c1 = np.clip(c1, lower, upper)
    c2 = np.clip(c2, lower, upper)
    if single:
        return c1[0], c2[0]
    return c1, c2


def polynomial_mutation(x: np.ndarray, cfg: VariationConfig, rng: RngStream,
                        lower: np.ndarray, upper: np.ndarray) -> np.ndarray:
    """
    Bounded polynomial mutation of one vector or of a (rows, n) block.

    A variable at its lower bound can only move up and one at its upper
    bound only down. Variables with zero-width bounds are left unchanged.
    """
    x = np.array(x, dtype=np.float64)
    single = x.ndim == 1
    X = np.atleast_2d(x)
    rows, n = X.shape
    p_m = cfg.resolve(n).p_m

    site = rng.random((rows, n)) < p_m
    mu = rng.random((rows, n))
    lb = np.broadcast_to(lower, X.shape)
    ub = np.broadcast_to(upper, X.shape)
    span = ub - lb
    site &= span > 0
    safe_span = np.where(span > 0, span, 1.0)
    delta1 = (X - lb) / safe_span
    delta2 = (ub - X) / safe_span
    power = 1.0 / (cfg.eta_m + 1.0)

    down = site & (mu <= 0.5)
    step = (2.0 * mu + (1.0 - 2.0 * mu) * (1.0 - delta1) ** (cfg.eta_m + 1.0)) ** power - 1.0
    X[down] += span[down] * step[down]

    up = site & (mu > 0.5)
    step = 1.0 - (2.0 * (1.0 - mu) + 2.0 * (mu - 0.5) * (1.0 - delta2) ** (cfg.eta_m + 1.0)) ** power
    X[up] += span[up] * step[up]

    X = np.clip(X, lb, ub)
    return X[0] if single else X


def create_offspring_population(P: Population, cfg: VariationConfig, rng: RngStream,
                                problem) -> Population:
    """
    N offspring from N parents by random pairing, SBX and polynomial mutation.

    Parents are paired along a random permutation. For odd N the last parent
    is paired with a mate drawn uniformly from the other N - 1 and only the
    first child of that pair is kept.

    Args:
        P: Parent population
        cfg: Variation parameters
        rng: Run random stream
        problem: ProblemDef providing bounds and evaluation

    Returns:
        Population: |P| evaluated offspring
    """
    N = len(P)
    if N < 2:
        raise ContractViolationError(f"Need at least two parents, got {N}")
    cfg = cfg.resolve(problem.n)

    order = rng.permutation(N)
    first, second = order[0:N - 1:2], order[1:N:2]
    if N % 2:
        mate = order[rng.integers(0, N - 1)]
        first = np.append(first, order[-1])
        second = np.append(second, mate)

    c1, c2 = sbx_crossover(P.decisions[first], P.decisions[second], cfg, rng,
                           problem.lower, problem.upper)
    children = np.empty((N, problem.n))
    children[0::2] = c1
    children[1::2] = c2[: N // 2]

    children = polynomial_mutation(children, cfg, rng, problem.lower, problem.upper)
    logger.debug(f"Created {N} offspring from {len(first)} parent pairs")
    return Population(decisions=children, objectives=problem.evaluate(children), capacity=P.capacity)

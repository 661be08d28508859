"""
Hypervolume (exact and Monte Carlo), normalized HV scoring and the
statistics used to compare independent runs.
"""
import logging
from dataclasses import dataclass
from typing import Optional, Sequence, Tuple, Union

import numpy as np
from pymoo.indicators.hv import HV
from scipy import stats

from ..core.errors import ContractViolationError, InvalidProblemError
from ..core.population import Population, nondominated_mask

logger = logging.getLogger(__name__)

METRIC_SEED = 20240601
DEFAULT_MC_SAMPLES = 1_000_000
MIN_MC_SAMPLES = 10_000
MC_CHUNK = 4096
SIGNIFICANCE_LEVEL = 0.05
MIN_SAMPLE_SIZE = 5


@dataclass(frozen=True)
class HvProtocol:
    """Reference point (1.1, ..., 1.1) in normalized space; scores divided by 1.1^m."""
    m: int
    reference_value: float = 1.1
    exact_max_m: int = 4

    @property
    def reference(self) -> np.ndarray:
        return np.full(self.m, self.reference_value)

    @property
    def divisor(self) -> float:
        return self.reference_value ** self.m

    @property
    def exact(self) -> bool:
        return self.m <= self.exact_max_m


@dataclass(frozen=True)
class WilcoxonResult:
    statistic: float
    p_value: float
    verdict: str


def _contributing(points: np.ndarray, ref: np.ndarray) -> np.ndarray:
    points = np.asarray(points, dtype=np.float64)
    if points.size == 0:
        return np.zeros((0, len(ref)))
    points = np.atleast_2d(points)
    if points.shape[1] != len(ref):
        raise ContractViolationError(
            f"Points have {points.shape[1]} objectives, reference point has {len(ref)}"
        )
    return points[np.all(points < ref, axis=1)]


def hypervolume_exact(points, ref) -> float:
    """
    Exact dominated hypervolume, computed by pymoo's HV indicator.

    Args:
        points: (k, m) objective vectors, m <= 4
        ref: Reference point; only points strictly dominating it contribute

    Returns:
        float: Hypervolume, 0 for an empty contributing set
    """
    ref = np.asarray(ref, dtype=np.float64)
    if len(ref) > 4:
        raise ContractViolationError(f"Exact hypervolume supports m <= 4, got m={len(ref)}")
    pts = _contributing(points, ref)
    if len(pts) == 0:
        return 0.0
    indicator = HV(ref_point=ref)
    return float(indicator(pts[nondominated_mask(pts)]))


def hypervolume_mc(points, ref, samples: int = DEFAULT_MC_SAMPLES,
                   rng: Optional[np.random.Generator] = None) -> Tuple[float, float]:
    """
    Monte Carlo hypervolume estimate.

    Samples are drawn uniformly in the box [min(points), ref].

    Args:
        points: (k, m) objective vectors
        ref: Reference point
        samples: Number of uniform samples (>= 10^4)
        rng: numpy Generator; a fixed-seed generator when omitted

    Returns:
        tuple: (estimate, binomial standard error)
    """
    if samples < MIN_MC_SAMPLES:
        raise ContractViolationError(f"Monte Carlo HV needs at least {MIN_MC_SAMPLES} samples, got {samples}")
    ref = np.asarray(ref, dtype=np.float64)
    pts = _contributing(points, ref)
    if len(pts) == 0:
        return 0.0, 0.0
    pts = pts[nondominated_mask(pts)]
    if rng is None:
        rng = np.random.default_rng(METRIC_SEED)

    lower = pts.min(axis=0)
    box = float(np.prod(ref - lower))
    # Bounded (chunk, k, m) comparison tensors
    chunk = max(1, min(MC_CHUNK, (1 << 22) // max(1, pts.size)))
    hits = 0
    drawn = 0
    while drawn < samples:
        size = min(chunk, samples - drawn)
        u = rng.uniform(lower, ref, size=(size, len(ref)))
        dominated = np.any(np.all(pts[None, :, :] <= u[:, None, :], axis=2), axis=1)
        hits += int(dominated.sum())
        drawn += size
    fraction = hits / samples
    stderr = box * np.sqrt(fraction * (1.0 - fraction) / samples)
    return box * fraction, float(stderr)


def normalize_objectives(F: np.ndarray, ideal: np.ndarray, nadir: np.ndarray) -> np.ndarray:
    """
    Map objectives by (f - ideal) / (nadir - ideal).

    Raises:
        InvalidProblemError: If ideal equals nadir in some component
    """
    ideal = np.asarray(ideal, dtype=np.float64)
    nadir = np.asarray(nadir, dtype=np.float64)
    span = nadir - ideal
    if np.any(span == 0):
        raise InvalidProblemError("HV normalization bounds are degenerate (ideal == nadir)")
    return (np.asarray(F, dtype=np.float64) - ideal) / span


def normalized_hv(P: Union[Population, np.ndarray], problem, samples: int = DEFAULT_MC_SAMPLES,
                  seed: int = METRIC_SEED) -> float:
    """
    HV of a population in the problem's normalized space, divided by 1.1^m.

    Uses the exact path for m <= 4 and a seeded Monte Carlo estimate otherwise.

    Args:
        P: Population or (k, m) raw objective matrix
        problem: ProblemDef supplying hv_ideal and hv_nadir
        samples: Monte Carlo sample count for m > 4
        seed: Metric seed, independent of any run seed

    Returns:
        float: Score in [0, 1]
    """
    F = P.objectives if isinstance(P, Population) else np.asarray(P, dtype=np.float64)
    normalized = normalize_objectives(F, problem.hv_ideal, problem.hv_nadir)
    protocol = HvProtocol(m=problem.m)
    if protocol.exact:
        volume = hypervolume_exact(normalized, protocol.reference)
    else:
        volume, _ = hypervolume_mc(normalized, protocol.reference, samples, np.random.default_rng(seed))
    return float(min(1.0, max(0.0, volume / protocol.divisor)))


def median_iqr(sample: Sequence[float]) -> Tuple[float, float]:
    """
    Median and interquartile range with linearly interpolated quartiles.

    Raises:
        ContractViolationError: If the sample is empty
    """
    x = np.asarray(sample, dtype=np.float64)
    if x.size == 0:
        raise ContractViolationError("median_iqr needs a nonempty sample")
    q1, q3 = np.percentile(x, [25, 75])
    return float(np.median(x)), float(q3 - q1)


def wilcoxon_rank_sum(a: Sequence[float], b: Sequence[float],
                      alpha: float = SIGNIFICANCE_LEVEL) -> WilcoxonResult:
    """
    Two-sided rank-sum test of a against b with tie and continuity correction.

    The verdict is '+' when a is significantly better (larger median), '-'
    when significantly worse, and '≈' otherwise.

    Raises:
        ContractViolationError: If either sample has fewer than 5 values
    """
    a = np.asarray(a, dtype=np.float64)
    b = np.asarray(b, dtype=np.float64)
    if len(a) < MIN_SAMPLE_SIZE or len(b) < MIN_SAMPLE_SIZE:
        raise ContractViolationError(
            f"Rank-sum test needs at least {MIN_SAMPLE_SIZE} values per sample, got {len(a)} and {len(b)}"
        )
    if np.ptp(np.concatenate([a, b])) == 0:
        return WilcoxonResult(statistic=len(a) * len(b) / 2.0, p_value=1.0, verdict="≈")

    result = stats.mannwhitneyu(a, b, alternative="two-sided", use_continuity=True, method="asymptotic")
    p_value = float(result.pvalue)
    verdict = "≈"
    if p_value < alpha:
        diff = np.median(a) - np.median(b)
        if diff > 0:
            verdict = "+"
        elif diff < 0:
            verdict = "-"
    return WilcoxonResult(statistic=float(result.statistic), p_value=p_value, verdict=verdict)

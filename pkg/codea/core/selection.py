"""
Collaborative-decomposition environmental selection.

Pipeline per generation: non-dominated sorting of the union, candidate set
S, normalization, association by perpendicular distance, niche ranking and
truncation to N by whole ranks plus a random fill from the last rank.
"""
import logging
from dataclasses import dataclass, field
from enum import Enum
from typing import List, Optional, Sequence, Tuple

import numpy as np

from .errors import ContractViolationError
from .population import Population, RngStream, dominance_matrix
from .refgeom import ReferenceSet, rotation_factor
from .scalarize import PbiConfig, angle_to_center, g_cod, g_nbi, g_pbi, perpendicular_distances

logger = logging.getLogger(__name__)

ASF_EPSILON = 1.0e-6


class RankingVariant(str, Enum):
    """Niche ranking scheme; CODEA is the reference method, the rest are ablations."""
    CODEA = "codea"
    CODEA_STAR = "codea_star"
    PBI = "pbi"
    NBI = "nbi"


class InnerAngleOrder(str, Enum):
    """Order of inner-niche members by angle to the centre direction."""
    MIN = "min"
    MAX = "max"


def center_vector(m: int) -> np.ndarray:
    return np.full(m, 1.0 / m)


@dataclass
class NormalizationState:
    """
    Running normalization statistics, all in objective units.

    Attributes:
        z_star: Componentwise minima seen so far
        z_nadir: Componentwise maxima over the latest first front
        intercepts: Hyperplane intercepts a_j used as the upper end of each objective range
        fallback: Name of the last fallback used ("", "front", "candidates", "unit")
    """
    z_star: np.ndarray
    z_nadir: np.ndarray
    intercepts: np.ndarray
    fallback: str = ""

    @classmethod
    def initial(cls, objectives: np.ndarray) -> "NormalizationState":
        """State seeded from an evaluated population."""
        F = np.atleast_2d(np.asarray(objectives, dtype=np.float64))
        front = F[~np.any(dominance_matrix(F), axis=0)]
        z_star = F.min(axis=0)
        z_nadir = front.max(axis=0)
        return cls(z_star=z_star, z_nadir=z_nadir, intercepts=z_nadir.copy())

    def to_dict(self) -> dict:
        return {
            "z_star": self.z_star.tolist(),
            "z_nadir": self.z_nadir.tolist(),
            "intercepts": self.intercepts.tolist(),
            "fallback": self.fallback,
        }


@dataclass
class RankPartition:
    """ranks[i] holds indices into S of the (i+1)-th best member of every niche large enough."""
    ranks: List[np.ndarray] = field(default_factory=list)

    def __len__(self) -> int:
        return len(self.ranks)

    def sizes(self) -> List[int]:
        return [len(r) for r in self.ranks]


def nondominated_sort(F: np.ndarray) -> List[np.ndarray]:
    """
    Partition objective vectors into successive non-dominated fronts.

    Args:
        F: (k, m) objective matrix

    Returns:
        list: Index arrays F_0, F_1, ...; indices within a front keep input order
    """
    F = np.atleast_2d(np.asarray(F, dtype=np.float64))
    if F.shape[0] == 0:
        return []
    D = dominance_matrix(F)
    dominated_by = D.sum(axis=0)
    remaining = np.ones(F.shape[0], dtype=bool)
    fronts = []
    while remaining.any():
        current = np.flatnonzero(remaining & (dominated_by == 0))
        fronts.append(current)
        remaining[current] = False
        dominated_by = dominated_by - D[current].sum(axis=0)
    return fronts


def select_candidates(fronts: Sequence[np.ndarray], N: int) -> np.ndarray:
    """
    Union of the leading fronts, stopping at the first prefix of size >= N.

    Raises:
        ContractViolationError: If all fronts together hold fewer than N individuals
    """
    total = sum(len(f) for f in fronts)
    if total < N:
        raise ContractViolationError(f"Fronts hold {total} individuals, fewer than N={N}")
    chosen, size = [], 0
    for front in fronts:
        chosen.append(np.asarray(front, dtype=int))
        size += len(front)
        if size >= N:
            break
    return np.concatenate(chosen)


def _range_scale(T: np.ndarray) -> np.ndarray:
    scale = T.max(axis=0)
    return np.where(scale > 0, scale, 1.0)


def _extreme_points(T: np.ndarray) -> np.ndarray:
    m = T.shape[1]
    weights = np.full((m, m), ASF_EPSILON)
    np.fill_diagonal(weights, 1.0)
    # Achievement scalarizing function per axis direction, on range-scaled objectives
    scaled = T / _range_scale(T)
    asf = np.max(scaled[:, None, :] / weights[None, :, :], axis=2)
    return np.argmin(asf, axis=0)


def _hyperplane_span(T: np.ndarray) -> Optional[np.ndarray]:
    scale = _range_scale(T)
    extremes = T[_extreme_points(T)] / scale
    try:
        b = np.linalg.solve(extremes, np.ones(T.shape[1]))
    except np.linalg.LinAlgError:
        return None
    with np.errstate(divide="ignore"):
        span = 1.0 / b
    if not np.all(np.isfinite(span)) or np.any(span <= ASF_EPSILON):
        return None
    return span * scale


def update_normalization(F: np.ndarray, state: NormalizationState,
                         front_mask: Optional[np.ndarray] = None) -> Tuple[NormalizationState, np.ndarray]:
    """
    Update ideal point, nadir estimate and intercepts, and normalize F.

    Intercepts come from the hyperplane through the per-objective extreme
    points. When that system is singular or yields nonpositive intercepts the
    range falls back to the first-front maxima, then to the maxima over F;
    any objective still without a positive range gets range 1.

    Args:
        F: (k, m) raw objectives of the candidate set S
        state: Previous statistics
        front_mask: Rows of F in the first front; all rows when omitted

    Returns:
        tuple: (new NormalizationState, (k, m) normalized objectives)
    """
    F = np.atleast_2d(np.asarray(F, dtype=np.float64))
    if F.shape[0] == 0:
        raise ContractViolationError("Cannot normalize an empty candidate set")
    if front_mask is None:
        front_mask = np.ones(F.shape[0], dtype=bool)

    z_star = np.minimum(state.z_star, F.min(axis=0))
    z_nadir = F[front_mask].max(axis=0)
    T = F - z_star

    fallback = ""
    span = _hyperplane_span(T)
    if span is None:
        fallback = "front"
        span = z_nadir - z_star
        if np.any(span <= 0):
            fallback = "candidates"
            span = np.where(span > 0, span, F.max(axis=0) - z_star)
        if np.any(span <= 0):
            fallback = "unit"
            span = np.where(span > 0, span, 1.0)
        logger.debug(f"Normalization fell back to '{fallback}' ranges")

    new_state = NormalizationState(
        z_star=z_star, z_nadir=z_nadir, intercepts=z_star + span, fallback=fallback,
    )
    return new_state, T / span


def associate(normalized: np.ndarray, refset: ReferenceSet) -> Tuple[np.ndarray, np.ndarray]:
    """
    Attach every normalized vector to the reference point at minimal perpendicular distance.

    Returns:
        tuple: (assoc indices, distances); ties go to the lowest reference index
    """
    dist = perpendicular_distances(normalized, refset.weights)
    assoc = np.argmin(dist, axis=1)
    return assoc, dist[np.arange(len(assoc)), assoc]


def niche_scores(normalized: np.ndarray, assoc: np.ndarray, refset: ReferenceSet,
                 variant: RankingVariant = RankingVariant.CODEA,
                 inner_order: InnerAngleOrder = InnerAngleOrder.MAX,
                 pbi: PbiConfig = PbiConfig()) -> Tuple[np.ndarray, np.ndarray]:
    """
    Primary sort key and g_nbi tie-breaker of each individual within its niche.

    Lower primary keys rank first. Under InnerAngleOrder.MAX the key of an
    inner-niche member is the negated angle.
    """
    variant = RankingVariant(variant)
    inner_order = InnerAngleOrder(inner_order)
    W = refset.weights[assoc]
    tie = np.asarray(g_nbi(normalized, W), dtype=np.float64).reshape(-1)

    if variant == RankingVariant.PBI:
        return np.asarray(g_pbi(normalized, W, pbi), dtype=np.float64).reshape(-1), tie
    if variant == RankingVariant.NBI:
        return tie.copy(), tie

    score = np.empty(len(assoc))
    boundary = refset.boundary_mask[assoc]
    if boundary.any():
        score[boundary] = g_cod(normalized[boundary], W[boundary], refset.r[assoc[boundary]], refset.k_m)
    inner = ~boundary
    if inner.any():
        if variant == RankingVariant.CODEA_STAR:
            _, _, r_inner = rotation_factor(W[inner])
            score[inner] = g_cod(normalized[inner], W[inner], r_inner, refset.k_m)
        else:
            angle = np.asarray(angle_to_center(normalized[inner]), dtype=np.float64)
            score[inner] = -angle if inner_order == InnerAngleOrder.MAX else angle
    return score, tie


def rank_within_niche(normalized: np.ndarray, ref_index: int, refset: ReferenceSet,
                      variant: RankingVariant = RankingVariant.CODEA,
                      inner_order: InnerAngleOrder = InnerAngleOrder.MAX,
                      pbi: PbiConfig = PbiConfig()) -> np.ndarray:
    """
    Order the members of one niche, best first.

    Args:
        normalized: (k, m) normalized objectives of the niche members
        ref_index: Index of the niche's reference point in refset

    Returns:
        np.ndarray: Permutation of range(k)
    """
    normalized = np.asarray(normalized, dtype=np.float64)
    if normalized.size == 0:
        return np.zeros(0, dtype=int)
    normalized = np.atleast_2d(normalized)
    assoc = np.full(normalized.shape[0], ref_index, dtype=int)
    score, tie = niche_scores(normalized, assoc, refset, variant, inner_order, pbi)
    return np.lexsort((np.arange(len(score)), tie, score))


def build_rank_partition(normalized: np.ndarray, assoc: np.ndarray, refset: ReferenceSet,
                         variant: RankingVariant = RankingVariant.CODEA,
                         inner_order: InnerAngleOrder = InnerAngleOrder.MAX,
                         pbi: PbiConfig = PbiConfig()) -> Tuple[RankPartition, np.ndarray]:
    """
    Group the i-th best member of every niche into rank R_i.

    Returns:
        tuple: (RankPartition over indices of S, per-individual niche position)
    """
    assoc = np.asarray(assoc, dtype=int)
    k = len(assoc)
    if k == 0:
        return RankPartition(), np.zeros(0, dtype=int)
    score, tie = niche_scores(normalized, assoc, refset, variant, inner_order, pbi)
    order = np.lexsort((np.arange(k), tie, score, assoc))

    sorted_assoc = assoc[order]
    starts = np.flatnonzero(np.r_[True, sorted_assoc[1:] != sorted_assoc[:-1]])
    group_start = np.repeat(starts, np.diff(np.r_[starts, k]))
    position = np.empty(k, dtype=int)
    position[order] = np.arange(k) - group_start

    ranks = []
    for i in range(int(position.max()) + 1):
        members = order[position[order] == i]
        ranks.append(members)
    return RankPartition(ranks=ranks), position


def environmental_selection(U: Population, refset: ReferenceSet, state: NormalizationState,
                            N: int, rng: RngStream,
                            variant: RankingVariant = RankingVariant.CODEA,
                            inner_order: InnerAngleOrder = InnerAngleOrder.MAX,
                            pbi: PbiConfig = PbiConfig()) -> Tuple[Population, NormalizationState]:
    """
    Select N survivors from the union of parents and offspring.

    Whole ranks are accepted while they fit strictly below N; the first rank
    that would reach or exceed N is sampled uniformly without replacement.

    Args:
        U: Union population
        refset: Reference points with rotation factors and k_m
        state: Normalization statistics from the previous generation
        N: Survivor count
        rng: Run random stream, used only for the final fill

    Returns:
        tuple: (annotated survivors in union order, updated NormalizationState)

    Raises:
        ContractViolationError: If |U| < N
    """
    if len(U) < N:
        raise ContractViolationError(f"Union holds {len(U)} individuals, fewer than N={N}")

    fronts = nondominated_sort(U.objectives)
    S = select_candidates(fronts, N)
    front_of = np.empty(len(U), dtype=int)
    for level, members in enumerate(fronts):
        front_of[members] = level
    front_mask = front_of[S] == 0

    # Normalize, associate and rank the candidates only

    state, normalized = update_normalization(U.objectives[S], state, front_mask)
    assoc, _ = associate(normalized, refset)
    partition, position = build_rank_partition(normalized, assoc, refset, variant, inner_order, pbi)

    chosen: List[np.ndarray] = []
    count = 0
    for members in partition.ranks:
        if count + len(members) < N:
            chosen.append(members)
            count += len(members)
            continue
        # Last admitted rank: random fill up to N
        chosen.append(np.sort(rng.choice(members, size=N - count, replace=False)))
        count = N
        break
    keep = np.concatenate(chosen)
    keep = keep[np.argsort(S[keep], kind="stable")]  # union order

    P = U.subset(S[keep], capacity=N)
    P.normalized = normalized[keep]
    P.assoc = assoc[keep]
    P.front = front_of[S[keep]]
    P.cod_rank = position[keep]
    logger.debug(f"Selected {N} of {len(U)}: |S|={len(S)}, fronts={len(fronts)}, "
                 f"ranks={partition.sizes()}")
    return P, state

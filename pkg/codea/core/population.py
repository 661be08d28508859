"""
Domain types, the deterministic random stream and population containers.

Objectives are always minimized. Decision and objective vectors are plain
float64 numpy arrays; a Population stores its members column-wise so the
selection and variation code can stay vectorized.
"""
from dataclasses import dataclass
from typing import Any, Dict, Iterator, List, Optional, Sequence, Union

import numpy as np

from .errors import ContractViolationError

DecisionVector = np.ndarray
ObjectiveVector = np.ndarray


class RngStream:
    """Seeded random stream driving initialization, variation and tie-breaking of one run."""

    def __init__(self, seed: int):
        self.seed = int(seed)
        self.generator = np.random.Generator(np.random.PCG64(self.seed))

    @property
    def state(self) -> Dict[str, Any]:
        """Opaque generator state (bit generator dict)."""
        return self.generator.bit_generator.state

    def random(self, size=None) -> Union[float, np.ndarray]:
        return self.generator.random(size)

    def uniform(self, low, high, size=None) -> np.ndarray:
        return self.generator.uniform(low, high, size)

    def integers(self, low: int, high: Optional[int] = None, size=None):
        return self.generator.integers(low, high, size)

    def permutation(self, n: int) -> np.ndarray:
        return self.generator.permutation(n)

    def choice(self, a, size: int, replace: bool = False) -> np.ndarray:
        return self.generator.choice(a, size=size, replace=replace)

    def __repr__(self) -> str:
        return f"RngStream(seed={self.seed})"


def as_objective_vector(values: Sequence[float], m: Optional[int] = None) -> ObjectiveVector:
    """
    Convert values to a finite float64 objective vector.

    Args:
        values: Objective values
        m: Expected length, if known

    Returns:
        np.ndarray: Objective vector

    Raises:
        ContractViolationError: On length mismatch or non-finite values
    """
    f = np.asarray(values, dtype=np.float64)
    if f.ndim != 1:
        raise ContractViolationError(f"Objective vector must be 1-D, got shape {f.shape}")
    if m is not None and f.shape[0] != m:
        raise ContractViolationError(f"Objective vector has length {f.shape[0]}, expected {m}")
    if not np.all(np.isfinite(f)):
        raise ContractViolationError("Objective vector contains non-finite values")
    return f


def as_decision_vector(values: Sequence[float], lower: np.ndarray, upper: np.ndarray) -> DecisionVector:
    """
    Convert values to a decision vector and check the box constraints.

    Raises:
        ContractViolationError: On length mismatch or a component outside its bounds
    """
    x = np.asarray(values, dtype=np.float64)
    if x.shape != lower.shape:
        raise ContractViolationError(f"Decision vector has shape {x.shape}, expected {lower.shape}")
    if np.any(x < lower) or np.any(x > upper):
        raise ContractViolationError("Decision vector violates its bounds")
    return x


def dominates(a: ObjectiveVector, b: ObjectiveVector) -> bool:
    """
    Pareto dominance for minimization.

    Returns:
        bool: True iff a <= b componentwise and a < b in at least one component

    Raises:
        ContractViolationError: If the vectors differ in length
    """
    a = np.asarray(a, dtype=np.float64)
    b = np.asarray(b, dtype=np.float64)
    if a.shape != b.shape:
        raise ContractViolationError(f"Cannot compare vectors of shapes {a.shape} and {b.shape}")
    return bool(np.all(a <= b) and np.any(a < b))


def dominance_matrix(F: np.ndarray) -> np.ndarray:
    """
    Pairwise dominance relation of a set of objective vectors.

    Args:
        F: (k, m) objective matrix

    Returns:
        np.ndarray: (k, k) boolean matrix, D[i, j] is True iff F[i] dominates F[j]
    """
    F = np.asarray(F, dtype=np.float64)
    le = np.all(F[:, None, :] <= F[None, :, :], axis=2)
    lt = np.any(F[:, None, :] < F[None, :, :], axis=2)
    return le & lt


def nondominated_mask(F: np.ndarray) -> np.ndarray:
    """Boolean mask of the rows of F not dominated by any other row."""
    if len(F) == 0:
        return np.zeros(0, dtype=bool)
    return ~np.any(dominance_matrix(F), axis=0)


@dataclass
class Individual:
    """A single solution with its selection annotations."""
    decision: DecisionVector
    objectives: ObjectiveVector
    normalized: Optional[ObjectiveVector] = None
    assoc: Optional[int] = None
    front: Optional[int] = None
    cod_rank: Optional[int] = None


@dataclass
class Population:
    """
    Ordered collection of individuals stored as parallel arrays.

    Annotation arrays (normalized, assoc, front, cod_rank) are None until the
    selection pass that produces them has run on this population.
    """
    decisions: np.ndarray
    objectives: np.ndarray
    capacity: int
    normalized: Optional[np.ndarray] = None
    assoc: Optional[np.ndarray] = None
    front: Optional[np.ndarray] = None
    cod_rank: Optional[np.ndarray] = None

    def __post_init__(self):
        self.decisions = np.atleast_2d(np.asarray(self.decisions, dtype=np.float64))
        self.objectives = np.atleast_2d(np.asarray(self.objectives, dtype=np.float64))
        if self.decisions.shape[0] != self.objectives.shape[0]:
            raise ContractViolationError(
                f"Population has {self.decisions.shape[0]} decision rows but "
                f"{self.objectives.shape[0]} objective rows"
            )

    def __len__(self) -> int:
        return self.decisions.shape[0]

    def __iter__(self) -> Iterator[Individual]:
        for i in range(len(self)):
            yield self[i]

    def __getitem__(self, i: int) -> Individual:
        def pick(arr, cast=None):
            if arr is None:
                return None
            return cast(arr[i]) if cast else arr[i].copy()
        return Individual(
            decision=self.decisions[i].copy(),
            objectives=self.objectives[i].copy(),
            normalized=pick(self.normalized),
            assoc=pick(self.assoc, int),
            front=pick(self.front, int),
            cod_rank=pick(self.cod_rank, int),
        )

    @property
    def members(self) -> List[Individual]:
        return list(self)

    @property
    def m(self) -> int:
        return self.objectives.shape[1]

    def subset(self, indices: Sequence[int], capacity: Optional[int] = None) -> "Population":
        """Population of the given rows, annotations carried along."""
        idx = np.asarray(indices, dtype=int)

        def take(arr):
            return None if arr is None else arr[idx].copy()
        return Population(
            decisions=self.decisions[idx].copy(),
            objectives=self.objectives[idx].copy(),
            capacity=self.capacity if capacity is None else capacity,
            normalized=take(self.normalized),
            assoc=take(self.assoc),
            front=take(self.front),
            cod_rank=take(self.cod_rank),
        )

    def merge(self, other: "Population") -> "Population":
        """Union P ∪ Q as a new unannotated population; the capacity is kept."""
        return Population(
            decisions=np.vstack([self.decisions, other.decisions]),
            objectives=np.vstack([self.objectives, other.objectives]),
            capacity=self.capacity,
        )

    @classmethod
    def from_individuals(cls, members: Sequence[Individual], capacity: Optional[int] = None) -> "Population":
        if not members:
            raise ContractViolationError("Cannot build a population from an empty member list")
        return cls(
            decisions=np.vstack([ind.decision for ind in members]),
            objectives=np.vstack([ind.objectives for ind in members]),
            capacity=len(members) if capacity is None else capacity,
        )

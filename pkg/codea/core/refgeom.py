"""
Reference-point lattices and rotation factors.

Boundary points always precede inner points in storage order. Rotation factors
are stored per point (NaN on inner points) and the objective-count factor k_m
is stored once on the set, so either can be zeroed independently.
"""
import logging
from dataclasses import dataclass, replace
from enum import Enum
from math import exp
from pathlib import Path
from typing import List, Optional, Tuple, Union

import numpy as np

from .errors import ContractViolationError, InvalidArgumentError

logger = logging.getLogger(__name__)

# Divisions used for the supported objective counts: H for single-layer
# sets, (H1, H2) for two-layer sets.
SINGLE_LAYER_DIVISIONS = {3: 12, 5: 6}
TWO_LAYER_DIVISIONS = {8: (3, 2), 10: (3, 2), 15: (2, 1)}


class Layer(str, Enum):
    BOUNDARY = "boundary"
    INNER = "inner"


@dataclass(frozen=True)
class ReferencePoint:
    """A simplex weight vector with its layer tag and rotation factor."""
    w: np.ndarray
    layer: Layer
    r: Optional[float] = None

    @property
    def is_boundary(self) -> bool:
        return self.layer == Layer.BOUNDARY


@dataclass(frozen=True)
class ReferenceSet:
    """
    Full reference lattice with layer bookkeeping.

    Attributes:
        weights: (K, m) simplex points, boundary rows first
        layers: (K,) array of Layer values
        r: (K,) rotation factors, NaN where undefined
        m: Objective count
        k_m: Objective-number-based rotation factor
        boundary_count: Number of boundary points
    """
    weights: np.ndarray
    layers: np.ndarray
    r: np.ndarray
    m: int
    k_m: float
    boundary_count: int

    def __len__(self) -> int:
        return self.weights.shape[0]

    @property
    def points(self) -> List[ReferencePoint]:
        return [
            ReferencePoint(
                w=self.weights[i].copy(),
                layer=Layer(self.layers[i]),
                r=None if np.isnan(self.r[i]) else float(self.r[i]),
            )
            for i in range(len(self))
        ]

    @property
    def boundary_mask(self) -> np.ndarray:
        mask = np.zeros(len(self), dtype=bool)
        mask[: self.boundary_count] = True
        return mask

    def with_k_m(self, k_m: float) -> "ReferenceSet":
        return replace(self, k_m=float(k_m))


def das_dennis(m: int, H: int) -> np.ndarray:
    """
    Das and Dennis simplex lattice.

    Args:
        m: Number of objectives (>= 2)
        H: Number of divisions (>= 1)

    Returns:
        np.ndarray: (C(H+m-1, m-1), m) points with components in {0, 1/H, ..., 1},
        ordered lexicographically descending in the first coordinate

    Raises:
        InvalidArgumentError: If m < 2 or H < 1
    """
    if m < 2:
        raise InvalidArgumentError(f"Simplex lattice needs m >= 2, got {m}")
    if H < 1:
        raise InvalidArgumentError(f"Simplex lattice needs H >= 1, got {H}")

    rows: List[List[int]] = []

    def compose(prefix: List[int], remaining: int, slots: int) -> None:
        if slots == 1:
            rows.append(prefix + [remaining])
            return
        for first in range(remaining, -1, -1):
            compose(prefix + [first], remaining - first, slots - 1)

    compose([], H, m)
    return np.array(rows, dtype=np.float64) / H


def rotation_factor(w: np.ndarray) -> Tuple[np.ndarray, np.ndarray, np.ndarray]:
    """
    Edge term alpha, vertex term beta and rotation factor r of simplex points.

    Args:
        w: (m,) point or (K, m) points on the unit simplex

    Returns:
        tuple: (alpha, beta, r) with r = (alpha + beta) / 2
    """
    w = np.asarray(w, dtype=np.float64)
    m = w.shape[-1]
    alpha = 1.0 - np.min(w, axis=-1) * m
    beta = (1.0 - np.max(w, axis=-1)) * 2.0
    return alpha, beta, (alpha + beta) / 2.0


def objective_rotation_factor(m: int) -> float:
    """k_m = m / (1 + e^(-m(m - 5.5)))."""
    if m < 2:
        raise InvalidArgumentError(f"k_m is defined for m >= 2, got {m}")
    return m / (1.0 + exp(-m * (m - 5.5)))


def _assemble(m: int, boundary: np.ndarray, inner: Optional[np.ndarray] = None) -> ReferenceSet:
    parts = [boundary] if inner is None else [boundary, inner]
    weights = np.vstack(parts)
    layers = np.array(
        [Layer.BOUNDARY.value] * len(boundary) + [Layer.INNER.value] * (0 if inner is None else len(inner)),
        dtype=object,
    )
    refset = ReferenceSet(
        weights=weights,
        layers=layers,
        r=np.full(len(weights), np.nan),
        m=m,
        k_m=objective_rotation_factor(m),
        boundary_count=len(boundary),
    )
    return rotation_factors(refset)


def single_layer(m: int, H: int) -> ReferenceSet:
    """Single Das-Dennis layer, every point tagged Boundary, rotation factors attached."""
    return _assemble(m, das_dennis(m, H))


def two_layer(m: int, H1: int, H2: int) -> ReferenceSet:
    """
    Boundary lattice plus an inner lattice shrunk halfway towards the centroid.

    The inner image of a lattice point w is w / 2 + 1 / (2m). Boundary points
    carry rotation factors; inner points carry none.
    """
    boundary = das_dennis(m, H1)
    inner = das_dennis(m, H2) / 2.0 + 1.0 / (2.0 * m)
    return _assemble(m, boundary, inner)


def rotation_factors(refset: ReferenceSet) -> ReferenceSet:
    """Populate r on every Boundary point; inner points keep NaN."""
    r = np.full(len(refset), np.nan)
    nb = refset.boundary_count
    if nb:
        _, _, r[:nb] = rotation_factor(refset.weights[:nb])
    return replace(refset, r=r)


def build_reference_set(m: int, H: Optional[int] = None,
                        layers: Optional[Tuple[int, int]] = None) -> ReferenceSet:
    """
    Reference set for m objectives with rotation factors and k_m attached.

    m <= 5 gives a single layer (H=12 for m=3, H=6 for m=5); larger m gives two
    layers ((3, 2) for m in {8, 10}, (2, 1) for m=15). H or layers override the
    defaults for any m >= 2.

    Raises:
        InvalidArgumentError: If m has no default and no override is supplied
    """
    if H is not None and layers is not None:
        raise InvalidArgumentError("Pass either H or layers, not both")
    if H is not None:
        refset = single_layer(m, H)
    elif layers is not None:
        refset = two_layer(m, layers[0], layers[1])
    elif m in SINGLE_LAYER_DIVISIONS:
        refset = single_layer(m, SINGLE_LAYER_DIVISIONS[m])
    elif m in TWO_LAYER_DIVISIONS:
        H1, H2 = TWO_LAYER_DIVISIONS[m]
        refset = two_layer(m, H1, H2)
    else:
        raise InvalidArgumentError(
            f"No default reference divisions for m={m}; supported m are "
            f"{sorted(list(SINGLE_LAYER_DIVISIONS) + list(TWO_LAYER_DIVISIONS))} or pass H / layers"
        )
    logger.debug(f"Built reference set: m={m}, size={len(refset)}, boundary={refset.boundary_count}, "
                 f"k_m={refset.k_m:.6g}")
    return refset


def load_reference_set(path: Union[str, Path]) -> ReferenceSet:
    """
    Load a user-supplied reference set from CSV.

    The header must contain w_1..w_m and may contain a layer column; rows are
    rescaled onto the simplex. Boundary rows are moved before inner rows.
    Uniformity is not checked.
    """
    path = Path(path)
    if not path.exists():
        raise FileNotFoundError(f"Reference set file not found: {path}")
    with open(path, "r") as f:
        header = f.readline().strip().split(",")
    w_cols = [i for i, name in enumerate(header) if name.startswith("w_")]
    if len(w_cols) < 2:
        raise InvalidArgumentError(f"{path}: expected at least two w_j columns, got header {header}")
    data = np.genfromtxt(path, delimiter=",", skip_header=1, dtype=str, ndmin=2)
    weights = data[:, w_cols].astype(np.float64)
    if np.any(weights < 0):
        raise ContractViolationError(f"{path}: reference weights must be non-negative")
    sums = weights.sum(axis=1, keepdims=True)
    if np.any(sums <= 0):
        raise ContractViolationError(f"{path}: reference weights must have a positive sum")
    weights = weights / sums

    if "layer" in header:
        layer_col = data[:, header.index("layer")]
        inner = np.char.strip(layer_col) == Layer.INNER.value
    else:
        inner = np.zeros(len(weights), dtype=bool)
    refset = _assemble(weights.shape[1], weights[~inner], weights[inner] if inner.any() else None)
    logger.info(f"Loaded {len(refset)} reference points from {path}")
    return refset

"""
Aggregation functions: projection distances d1/d2 and the PBI, NBI and CoD
scalarizations.

Every function broadcasts over the last axis, so f and w may be single
vectors, matching (k, m) stacks, or a stack paired with one vector.
"""
from dataclasses import dataclass
from typing import Union

import numpy as np

from .errors import ContractViolationError

ArrayOrFloat = Union[float, np.ndarray]


@dataclass(frozen=True)
class PbiConfig:
    """Penalty weights of the PBI function; theta_axis applies to axis reference vectors."""
    theta: float = 5.0
    theta_axis: float = 1.0e6

    def __post_init__(self):
        if self.theta <= 0:
            raise ContractViolationError(f"PBI theta must be positive, got {self.theta}")
        if self.theta_axis < self.theta:
            raise ContractViolationError(
                f"PBI theta_axis ({self.theta_axis}) must be >= theta ({self.theta})"
            )


def _pair(f, w):
    f = np.asarray(f, dtype=np.float64)
    w = np.asarray(w, dtype=np.float64)
    if f.shape[-1] != w.shape[-1]:
        raise ContractViolationError(
            f"Objective vector length {f.shape[-1]} does not match reference length {w.shape[-1]}"
        )
    return f, w


def _scalar(x) -> ArrayOrFloat:
    x = np.asarray(x)
    return float(x) if x.ndim == 0 else x


def _norm_w(w: np.ndarray) -> np.ndarray:
    norm = np.asarray(np.linalg.norm(w, axis=-1))
    if np.any(norm <= 0):
        raise ContractViolationError("Reference vector has zero norm")
    return norm


def d1(f, w) -> ArrayOrFloat:
    """Signed scalar projection (f . w) / ||w|| of f onto the ray through w."""
    f, w = _pair(f, w)
    return _scalar(np.sum(f * w, axis=-1) / _norm_w(w))


def d2(f, w) -> ArrayOrFloat:
    """Perpendicular distance from f to the ray through w."""
    f, w = _pair(f, w)
    norm = _norm_w(w)
    proj = np.asarray(np.sum(f * w, axis=-1) / norm)[..., None] * (w / norm[..., None])
    return _scalar(np.linalg.norm(f - proj, axis=-1))


def perpendicular_distances(F: np.ndarray, W: np.ndarray) -> np.ndarray:
    """
    d2 of every row of F to every row of W.

    Args:
        F: (k, m) normalized objectives
        W: (K, m) reference points

    Returns:
        np.ndarray: (k, K) distance matrix
    """
    F, W = _pair(np.atleast_2d(F), np.atleast_2d(W))
    unit = W / _norm_w(W)[:, None]
    proj = F @ unit.T
    residual = F[:, None, :] - proj[:, :, None] * unit[None, :, :]
    return np.linalg.norm(residual, axis=2)


def g_pbi(f, w, cfg: PbiConfig = PbiConfig()) -> ArrayOrFloat:
    """
    PBI value d1 + theta * d2.

    theta_axis replaces theta when w has exactly one nonzero component.
    """
    f, w = _pair(f, w)
    is_axis = np.count_nonzero(w, axis=-1) == 1
    theta = np.where(is_axis, cfg.theta_axis, cfg.theta)
    return _scalar(d1(f, w) + theta * d2(f, w))


def g_nbi(f, w) -> ArrayOrFloat:
    """NBI-style Tchebycheff value max_j (f_j - w_j)."""
    f, w = _pair(f, w)
    return _scalar(np.max(f - w, axis=-1))


def g_cod(f, w, r, k_m: float) -> ArrayOrFloat:
    """
    Collaborative decomposition value g_nbi + r * k_m * d2.

    Raises:
        ContractViolationError: If r is undefined (None or NaN)
    """
    if r is None:
        raise ContractViolationError("CoD needs a rotation factor; inner reference points carry none")
    r = np.asarray(r, dtype=np.float64)
    if np.any(np.isnan(r)):
        raise ContractViolationError("CoD needs a rotation factor; inner reference points carry none")
    return _scalar(g_nbi(f, w) + r * k_m * d2(f, w))


def angle_to_center(f) -> ArrayOrFloat:
    """
    Acute angle between f and the centre direction (1/m, ..., 1/m).

    A zero vector has angle 0.
    """
    f = np.asarray(f, dtype=np.float64)
    m = f.shape[-1]
    lam = np.full(m, 1.0 / m)
    norm_f = np.linalg.norm(f, axis=-1)
    denom = norm_f * np.linalg.norm(lam)
    with np.errstate(invalid="ignore", divide="ignore"):
        cos = np.abs(np.sum(f * lam, axis=-1)) / denom
    cos = np.where(norm_f > 0, cos, 1.0)
    return _scalar(np.arccos(np.clip(cos, 0.0, 1.0)))

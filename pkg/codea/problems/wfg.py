"""
WFG1-9 with position parameter k = 2(m - 1) and distance parameter l = 20.

Each problem is an evaluator object built from the toolkit's transformation,
reduction and shape primitives. Variable i (1-based) ranges over [0, 2i].
"""
import numpy as np

from ..core.errors import InvalidArgumentError
from .base import ProblemDef, make_problem

DISTANCE_PARAMETER = 20
OPTIMAL_DISTANCE = 0.35
# Decision scaling X / upper is inexact for most bounds; residues this small count as on the shift
SHIFT_TOLERANCE = 1.0e-15


def correct_to_01(x: np.ndarray, epsilon: float = 1.0e-10) -> np.ndarray:
    x = np.asarray(x, dtype=np.float64)
    x[(x < 0) & (x >= -epsilon)] = 0.0
    x[(x > 1) & (x <= 1 + epsilon)] = 1.0
    return x


# Transformations

def shift_linear(y, shift=0.35):
    offset = np.fabs(y - shift)
    offset = np.where(offset <= SHIFT_TOLERANCE, 0.0, offset)
    return correct_to_01(offset / np.fabs(np.floor(shift - y) + shift))


def shift_deceptive(y, A=0.35, B=0.005, C=0.05):
    tmp1 = np.floor(y - A + B) * (1.0 - C + (A - B) / B) / (A - B)
    tmp2 = np.floor(A + B - y) * (1.0 - C + (1.0 - A - B) / B) / (1.0 - A - B)
    return correct_to_01(1.0 + (np.fabs(y - A) - B) * (tmp1 + tmp2 + 1.0 / B))


def shift_multi_modal(y, A, B, C):
    tmp1 = np.fabs(y - C) / (2.0 * (np.floor(C - y) + C))
    tmp2 = (4.0 * A + 2.0) * np.pi * (0.5 - tmp1)
    return correct_to_01((1.0 + np.cos(tmp2) + 4.0 * B * tmp1 ** 2) / (B + 2.0))


def bias_flat(y, a, b, c):
    ret = (a + np.minimum(0, np.floor(y - b)) * (a * (b - y) / b)
           - np.minimum(0, np.floor(c - y)) * ((1.0 - a) * (y - c) / (1.0 - c)))
    return correct_to_01(ret)


def bias_poly(y, alpha):
    return correct_to_01(y ** alpha)


def param_dependent(y, y_deg, A=0.98 / 49.98, B=0.02, C=50.0):
    aux = A - (1.0 - 2.0 * y_deg) * np.fabs(np.floor(0.5 - y_deg) + A)
    return correct_to_01(np.power(y, B + (C - B) * aux))


# Reductions

def reduce_weighted_sum(y, w):
    return correct_to_01(np.dot(y, w) / w.sum())


def reduce_mean(y):
    return correct_to_01(y.mean(axis=1))


def reduce_non_separable(y, A: int):
    rows, cols = y.shape
    val = np.ceil(A / 2.0)
    num = np.zeros(rows)
    for j in range(cols):
        num += y[:, j]
        for k in range(A - 1):
            num += np.fabs(y[:, j] - y[:, (1 + j + k) % cols])
    denom = cols * val * (1.0 + 2.0 * A - 2 * val) / A
    return correct_to_01(num / denom)


# Shapes; x holds the m - 1 position values, i is the 1-based objective index

def shape_linear(x, i):
    M = x.shape[1]
    if i == 1:
        ret = np.prod(x, axis=1)
    elif i <= M:
        ret = np.prod(x[:, : M - i + 1], axis=1) * (1.0 - x[:, M - i + 1])
    else:
        ret = 1.0 - x[:, 0]
    return correct_to_01(ret)


def shape_convex(x, i):
    M = x.shape[1]
    if i == 1:
        ret = np.prod(1.0 - np.cos(0.5 * np.pi * x), axis=1)
    elif i <= M:
        ret = np.prod(1.0 - np.cos(0.5 * np.pi * x[:, : M - i + 1]), axis=1)
        ret = ret * (1.0 - np.sin(0.5 * np.pi * x[:, M - i + 1]))
    else:
        ret = 1.0 - np.sin(0.5 * np.pi * x[:, 0])
    return correct_to_01(ret)


def shape_concave(x, i):
    M = x.shape[1]
    if i == 1:
        ret = np.prod(np.sin(0.5 * np.pi * x), axis=1)
    elif i <= M:
        ret = np.prod(np.sin(0.5 * np.pi * x[:, : M - i + 1]), axis=1)
        ret = ret * np.cos(0.5 * np.pi * x[:, M - i + 1])
    else:
        ret = np.cos(0.5 * np.pi * x[:, 0])
    return correct_to_01(ret)


def shape_mixed(x, A=5.0, alpha=1.0):
    aux = 2.0 * A * np.pi
    return correct_to_01(np.power(1.0 - x - np.cos(aux * x + 0.5 * np.pi) / aux, alpha))


def shape_disconnected(x, alpha=1.0, beta=1.0, A=5.0):
    aux = np.cos(A * np.pi * x ** beta)
    return correct_to_01(1.0 - x ** alpha * aux ** 2)


class WfgEvaluator:
    """
    Shared WFG frame: scale to [0, 1], transform to m underlying values,
    degeneracy post-processing, then f_j = x_M + 2j * h_j.

    Subclasses implement transform() and shapes().
    """
    degenerate = False

    def __init__(self, m: int, k: int, l: int):
        self.m = m
        self.k = k
        self.l = l
        self.n = k + l
        self.upper = 2.0 * np.arange(1, self.n + 1, dtype=np.float64)
        self.S = 2.0 * np.arange(1, m + 1, dtype=np.float64)
        self.A = np.ones(m - 1)
        if self.degenerate:
            self.A[1:] = 0.0

    def transform(self, y: np.ndarray) -> np.ndarray:
        raise NotImplementedError

    def shapes(self, x: np.ndarray) -> np.ndarray:
        raise NotImplementedError

    def _position_groups(self, y, reduce):
        gap = self.k // (self.m - 1)
        cols = [reduce(y[:, (j - 1) * gap: j * gap]) for j in range(1, self.m)]
        return cols, gap

    def _weighted_groups(self, y):
        cols, _ = self._position_groups(y, reduce_mean)
        cols.append(reduce_mean(y[:, self.k:]))
        return np.column_stack(cols)

    def _non_separable_groups(self, y):
        gap = self.k // (self.m - 1)
        cols = [reduce_non_separable(y[:, (j - 1) * gap: j * gap], gap) for j in range(1, self.m)]
        cols.append(reduce_non_separable(y[:, self.k:], y.shape[1] - self.k))
        return np.column_stack(cols)

    def _post(self, t: np.ndarray) -> np.ndarray:
        x = np.empty_like(t)
        for i in range(t.shape[1] - 1):
            x[:, i] = np.maximum(t[:, -1], self.A[i]) * (t[:, i] - 0.5) + 0.5
        x[:, -1] = t[:, -1]
        return x

    def __call__(self, X: np.ndarray) -> np.ndarray:
        y = X / self.upper
        x = self._post(self.transform(y))
        h = self.shapes(x[:, :-1])
        return x[:, -1][:, None] + self.S * h

    def optimal_decision(self, position: np.ndarray) -> np.ndarray:
        """Pareto-optimal decisions for position values in [0, 1]^k."""
        position = np.atleast_2d(np.asarray(position, dtype=np.float64))
        X = np.column_stack([position, np.full((len(position), self.l), OPTIMAL_DISTANCE)])
        return X * self.upper

    def _concave(self, x):
        return np.column_stack([shape_concave(x, i) for i in range(1, self.m + 1)])


class Wfg1(WfgEvaluator):

    def transform(self, y):
        k, n = self.k, self.n
        y[:, k:] = shift_linear(y[:, k:], 0.35)
        y[:, k:] = bias_flat(y[:, k:], 0.8, 0.75, 0.85)
        y = bias_poly(y, 0.02)
        w = 2.0 * np.arange(1, n + 1)
        gap = k // (self.m - 1)
        cols = [reduce_weighted_sum(y[:, (j - 1) * gap: j * gap], w[(j - 1) * gap: j * gap])
                for j in range(1, self.m)]
        cols.append(reduce_weighted_sum(y[:, k:], w[k:]))
        return np.column_stack(cols)

    def shapes(self, x):
        h = [shape_convex(x, i) for i in range(1, self.m)]
        h.append(shape_mixed(x[:, 0], A=5.0, alpha=1.0))
        return np.column_stack(h)


class Wfg2(WfgEvaluator):

    def _pairwise_distance(self, y):
        k = self.k
        cols = [y[:, i] for i in range(k)]
        for i in range(k + 1, k + self.l // 2 + 1):
            head = k + 2 * (i - k) - 2
            cols.append(reduce_non_separable(y[:, head: head + 2], 2))
        return np.column_stack(cols)

    def transform(self, y):
        k = self.k
        y[:, k:] = shift_linear(y[:, k:], 0.35)
        y = self._pairwise_distance(y)
        cols, _ = self._position_groups(y, reduce_mean)
        cols.append(reduce_mean(y[:, k:]))
        return np.column_stack(cols)

    def shapes(self, x):
        h = [shape_convex(x, i) for i in range(1, self.m)]
        h.append(shape_disconnected(x[:, 0], alpha=1.0, beta=1.0, A=5.0))
        return np.column_stack(h)


class Wfg3(Wfg2):
    degenerate = True

    def shapes(self, x):
        return np.column_stack([shape_linear(x, i) for i in range(1, self.m + 1)])


class Wfg4(WfgEvaluator):

    def transform(self, y):
        return self._weighted_groups(shift_multi_modal(y, 30.0, 10.0, 0.35))

    def shapes(self, x):
        return self._concave(x)


class Wfg5(WfgEvaluator):

    def transform(self, y):
        return self._weighted_groups(shift_deceptive(y, 0.35, 0.001, 0.05))

    def shapes(self, x):
        return self._concave(x)


class Wfg6(WfgEvaluator):

    def transform(self, y):
        k = self.k
        y[:, k:] = shift_linear(y[:, k:], 0.35)
        return self._non_separable_groups(y)

    def shapes(self, x):
        return self._concave(x)


class Wfg7(WfgEvaluator):

    def transform(self, y):
        k = self.k
        for i in range(k):
            y[:, i] = param_dependent(y[:, i], reduce_mean(y[:, i + 1:]))
        y[:, k:] = shift_linear(y[:, k:], 0.35)
        return self._weighted_groups(y)

    def shapes(self, x):
        return self._concave(x)


class Wfg8(WfgEvaluator):

    def transform(self, y):
        k, n = self.k, self.n
        dependent = [param_dependent(y[:, i], reduce_mean(y[:, :i])) for i in range(k, n)]
        y[:, k:] = np.column_stack(dependent)
        y[:, k:] = shift_linear(y[:, k:], 0.35)
        return self._weighted_groups(y)

    def shapes(self, x):
        return self._concave(x)

    def optimal_decision(self, position):
        X = np.atleast_2d(np.asarray(position, dtype=np.float64))
        A = 0.98 / 49.98
        for _ in range(self.l):
            u = X.mean(axis=1)
            tmp1 = np.abs(np.floor(0.5 - u) + A)
            tmp2 = 0.02 + 49.98 * (A - (1.0 - 2.0 * u) * tmp1)
            X = np.column_stack([X, OPTIMAL_DISTANCE ** (1.0 / tmp2)])
        return X * self.upper


class Wfg9(WfgEvaluator):

    def transform(self, y):
        k, n = self.k, self.n
        dependent = [param_dependent(y[:, i], reduce_mean(y[:, i + 1:])) for i in range(n - 1)]
        y[:, : n - 1] = np.column_stack(dependent)
        y[:, :k] = shift_deceptive(y[:, :k], 0.35, 0.001, 0.05)
        y[:, k:] = shift_multi_modal(y[:, k:], 30.0, 95.0, 0.35)
        return self._non_separable_groups(y)

    def shapes(self, x):
        return self._concave(x)

    def optimal_decision(self, position):
        position = np.atleast_2d(np.asarray(position, dtype=np.float64))
        X = np.column_stack([position, np.zeros((len(position), self.l))])
        X[:, -1] = OPTIMAL_DISTANCE
        for i in range(self.n - 2, self.k - 1, -1):
            val = X[:, i + 1:].mean(axis=1)
            X[:, i] = OPTIMAL_DISTANCE ** (1.0 / (0.02 + 1.96 * val))
        return X * self.upper


WFG_EVALUATORS = {
    1: Wfg1, 2: Wfg2, 3: Wfg3, 4: Wfg4, 5: Wfg5,
    6: Wfg6, 7: Wfg7, 8: Wfg8, 9: Wfg9,
}


def wfg_nadir(m: int) -> np.ndarray:
    return 2.0 * np.arange(1, m + 1, dtype=np.float64)


def wfg_evaluator(k: int, m: int) -> WfgEvaluator:
    """
    Raises:
        InvalidArgumentError: If k is not in 1..9 or m < 2
    """
    if k not in WFG_EVALUATORS:
        raise InvalidArgumentError(f"Unsupported WFG index {k}; expected 1-9")
    if m < 2:
        raise InvalidArgumentError(f"WFG needs m >= 2, got {m}")
    return WFG_EVALUATORS[k](m, 2 * (m - 1), DISTANCE_PARAMETER)


def wfg(k: int, m: int) -> ProblemDef:
    """
    WFG-k with m objectives.

    Args:
        k: Problem index, 1..9
        m: Number of objectives

    Returns:
        ProblemDef: n = 2(m - 1) + 20 variables, variable i in [0, 2i]

    Raises:
        InvalidArgumentError: If k is not in 1..9 or m < 2
    """
    evaluator = wfg_evaluator(k, m)
    return make_problem(
        name=f"wfg{k}", m=m, n=evaluator.n,
        evaluator=evaluator,
        hv_ideal=np.zeros(m),
        hv_nadir=wfg_nadir(m),
        lower=np.zeros(evaluator.n),
        upper=evaluator.upper.copy(),
    )


def optimal_decision(problem: ProblemDef, position: np.ndarray) -> np.ndarray:
    """Pareto-optimal decisions of a WFG problem for position values in [0, 1]^k."""
    return wfg_evaluator(int(problem.name[3:]), problem.m).optimal_decision(position)

"""
Tests for the DTLZ, convex DTLZ and WFG benchmark problems.
"""
import pytest
import numpy as np

# Add the parent directory to the path for imports
import sys
import os
sys.path.insert(0, os.path.join(os.path.dirname(__file__), '..'))

from codea.core.errors import ContractViolationError, InvalidArgumentError, InvalidProblemError
from codea.problems import get_problem, known_hv_bounds, optimal_decision, parse_problem_id
from codea.problems.base import CountingEvaluator, make_problem
from codea.problems.dtlz import convex_dtlz, convex_transform, dtlz
from codea.problems.wfg import shift_linear


def _positions(count, dims, seed=0):
    return np.random.default_rng(seed).random((count, dims))


class TestProblemIds:
    """Test cases for problem-id parsing."""

    def test_parse(self):
        """Family and index are split and lower-cased."""
        assert parse_problem_id("DTLZ2") == ("dtlz", 2)
        assert parse_problem_id("cdtlz3") == ("cdtlz", 3)
        assert parse_problem_id("wfg9") == ("wfg", 9)

    def test_unknown(self):
        """Unknown families and indices are rejected."""
        with pytest.raises(InvalidArgumentError):
            parse_problem_id("zdt1")
        with pytest.raises(InvalidArgumentError):
            get_problem("dtlz7", 3)
        with pytest.raises(InvalidArgumentError):
            get_problem("wfg10", 3)


class TestDtlz:
    """Test cases for DTLZ1-4."""

    def test_variable_counts(self):
        """n = m + k - 1 with k = 5 for DTLZ1 and 10 otherwise."""
        assert get_problem("dtlz1", 3).n == 7
        assert get_problem("dtlz2", 3).n == 12
        assert get_problem("dtlz4", 10).n == 19

    @pytest.mark.parametrize("m", [3, 5, 8])
    def test_dtlz1_linear_front(self, m):
        """Optimal DTLZ1 points satisfy sum f = 0.5."""
        problem = get_problem("dtlz1", m)
        F = problem.evaluate(optimal_decision(problem, _positions(50, m - 1)))
        assert np.allclose(F.sum(axis=1), 0.5)

    @pytest.mark.parametrize("name", ["dtlz2", "dtlz3", "dtlz4"])
    def test_spherical_front(self, name):
        """Optimal DTLZ2-4 points lie on the unit sphere."""
        problem = get_problem(name, 5)
        F = problem.evaluate(optimal_decision(problem, _positions(50, 4)))
        assert np.allclose((F ** 2).sum(axis=1), 1.0)

    def test_axis_corner(self):
        """x = (0, 0, 0.5, ...) maps to (1, 0, 0) on DTLZ2."""
        problem = get_problem("dtlz2", 3)
        x = np.full(problem.n, 0.5)
        x[:2] = 0.0
        assert np.allclose(problem.evaluate(x), [1.0, 0.0, 0.0])

    def test_single_and_batch_agree(self):
        """Row-wise and batch evaluation give identical values."""
        problem = get_problem("dtlz3", 3)
        X = _positions(10, problem.n)
        batch = problem.evaluate(X)
        for i in range(10):
            assert np.allclose(problem.evaluate(X[i]), batch[i], rtol=1e-12, atol=0)

    def test_wrong_variable_count(self):
        """A decision vector of the wrong length is rejected."""
        with pytest.raises(ContractViolationError):
            get_problem("dtlz2", 3).evaluate(np.zeros(5))


class TestConvexDtlz:
    """Test cases for the convex variants."""

    def test_transform_corner(self):
        """(1, 0, 0) is a fixed point of the transform."""
        assert np.allclose(convex_transform(np.array([1.0, 0.0, 0.0])), [1.0, 0.0, 0.0])

    def test_transform_edge(self):
        """(sqrt(1/2), sqrt(1/2), 0) maps to (0.25, 0.25, 0)."""
        h = np.sqrt(0.5)
        assert np.allclose(convex_transform(np.array([h, h, 0.0])), [0.25, 0.25, 0.0])

    def test_last_objective_squared(self):
        """The last objective is squared, the others raised to the fourth."""
        assert np.allclose(convex_transform(np.array([0.5, 0.5])), [0.0625, 0.25])

    def test_problem_applies_transform(self):
        """cdtlz2 equals the transform of dtlz2."""
        X = _positions(20, 12)
        base = get_problem("dtlz2", 3).evaluate(X)
        assert np.allclose(get_problem("cdtlz2", 3).evaluate(X), convex_transform(base))

    @pytest.mark.parametrize("k", [1, 2, 3, 4])
    def test_constructor_matches_id(self, k):
        """convex_dtlz(k, m) agrees with its string id and transforms the nadir."""
        problem = convex_dtlz(k, 5)
        assert problem.name == f"cdtlz{k}"
        assert problem.n == dtlz(k, 5).n
        assert np.allclose(problem.hv_nadir, convex_transform(dtlz(k, 5).hv_nadir))
        X = _positions(8, problem.n)
        assert np.allclose(problem.evaluate(X), get_problem(f"cdtlz{k}", 5).evaluate(X))

    def test_invalid_index(self):
        """Only DTLZ1-4 have convex variants."""
        with pytest.raises(InvalidArgumentError):
            convex_dtlz(5, 3)


class TestWfg:
    """Test cases for WFG1-9."""

    @pytest.mark.parametrize("k", range(1, 10))
    def test_random_inputs_in_range(self, k):
        """Random inputs give 0 <= f_j <= 2j + 1."""
        problem = get_problem(f"wfg{k}", 3)
        X = _positions(10_000, problem.n, seed=k) * problem.upper
        F = problem.evaluate(X)
        limit = 2.0 * np.arange(1, 4) + 1.0
        assert np.all(F >= -1e-12)
        assert np.all(F <= limit + 1e-12)

    @pytest.mark.parametrize("k", range(1, 10))
    def test_optimal_inputs_within_nadir(self, k):
        """Pareto-optimal inputs give 0 <= f_j <= 2j."""
        problem = get_problem(f"wfg{k}", 3)
        F = problem.evaluate(optimal_decision(problem, _positions(200, 4, seed=k)))
        assert np.all(F >= -1e-9)
        assert np.all(F <= 2.0 * np.arange(1, 4) + 1e-9)

    @pytest.mark.parametrize("k", [4, 5, 6, 7, 8, 9])
    def test_concave_front(self, k):
        """Optimal WFG4-9 points satisfy sum (f_j / 2j)^2 = 1."""
        problem = get_problem(f"wfg{k}", 3)
        F = problem.evaluate(optimal_decision(problem, _positions(100, 4, seed=k)))
        scaled = F / (2.0 * np.arange(1, 4))
        assert np.allclose((scaled ** 2).sum(axis=1), 1.0, atol=1e-6)

    def test_dimensions(self):
        """k = 2(m - 1) position and 20 distance variables; x_i in [0, 2i]."""
        problem = get_problem("wfg1", 5)
        assert problem.n == 28
        assert problem.upper[0] == 2.0
        assert problem.upper[-1] == 56.0

    @pytest.mark.parametrize("k", range(1, 10))
    @pytest.mark.parametrize("m", [5, 8])
    def test_optimal_inputs_within_nadir_many_objectives(self, k, m):
        """The Pareto-optimal bound f_j <= 2j holds for larger m too."""
        problem = get_problem(f"wfg{k}", m)
        F = problem.evaluate(optimal_decision(problem, _positions(200, 2 * (m - 1), seed=k)))
        assert np.all(F >= -1e-9)
        assert np.all(F <= 2.0 * np.arange(1, m + 1) + 1e-9)

    def test_shift_absorbs_scaling_residue(self):
        """Values a few ulps from the shift map to zero; genuine offsets do not."""
        near = np.array([0.35, np.nextafter(0.35, 1.0), np.nextafter(0.35, 0.0),
                         np.nextafter(np.nextafter(0.35, 1.0), 1.0)])
        assert np.all(shift_linear(near, 0.35) == 0.0)
        assert np.all(shift_linear(np.array([0.34, 0.36, 0.0, 1.0]), 0.35) > 0.0)

    def test_wfg1_distance_term_vanishes_at_optimum(self):
        """Optimal WFG1 decisions put the distance value x_M at exactly zero."""
        problem = get_problem("wfg1", 3)
        X = optimal_decision(problem, _positions(50, 4, seed=3))
        evaluator = problem.evaluator
        t = evaluator.transform(X / evaluator.upper)
        assert np.all(t[:, -1] == 0.0)

    @pytest.mark.parametrize("m", [2, 3])
    def test_wfg3_front_is_degenerate_line(self, m):
        """Scaled optimal WFG3 points lie on one line inside the unit simplex."""
        problem = get_problem("wfg3", m)
        F = problem.evaluate(optimal_decision(problem, _positions(100, 2 * (m - 1), seed=m)))
        scaled = F / (2.0 * np.arange(1, m + 1))
        assert np.allclose(scaled.sum(axis=1), 1.0, atol=1e-9)
        assert np.allclose(scaled[:, :-1], scaled[:, [0]], atol=1e-9)
        assert np.linalg.matrix_rank(scaled - scaled.mean(axis=0), tol=1e-9) == 1


class TestEvaluatorContract:
    """Finiteness and purity of every named benchmark."""

    PROBLEM_IDS = ([f"dtlz{k}" for k in range(1, 5)] + [f"cdtlz{k}" for k in range(1, 5)]
                   + [f"wfg{k}" for k in range(1, 10)])

    @pytest.mark.parametrize("m", [3, 5, 8, 10, 15])
    @pytest.mark.parametrize("problem_id", PROBLEM_IDS)
    def test_finite_and_pure(self, problem_id, m):
        """Outputs are finite, inputs are untouched and results do not depend on batching."""
        problem = get_problem(problem_id, m)
        X = problem.lower + _positions(1000, problem.n, seed=m) * (problem.upper - problem.lower)
        X[0] = problem.lower
        X[1] = problem.upper
        original = X.copy()

        F = problem.evaluate(X)
        assert F.shape == (1000, m)
        assert np.all(np.isfinite(F))
        assert np.array_equal(X, original)
        assert np.array_equal(problem.evaluate(X), F)

        halves = np.vstack([problem.evaluate(X[500:]), problem.evaluate(X[:500])])
        assert np.allclose(halves, np.vstack([F[500:], F[:500]]), rtol=0.0, atol=1e-12)
        assert np.allclose(problem.evaluate(X[7]), F[7], rtol=0.0, atol=1e-12)


class TestHvBounds:
    """Test cases for the HV normalization bounds."""

    def test_dtlz2(self):
        """DTLZ2 m=3 spans the unit cube."""
        ideal, nadir = known_hv_bounds(get_problem("dtlz2", 3))
        assert ideal.tolist() == [0.0, 0.0, 0.0]
        assert nadir.tolist() == [1.0, 1.0, 1.0]

    def test_dtlz1(self):
        """DTLZ1 nadir is 0.5 everywhere."""
        _, nadir = known_hv_bounds(get_problem("dtlz1", 3))
        assert nadir.tolist() == [0.5, 0.5, 0.5]

    def test_cdtlz1(self):
        """Convex nadir is the transformed DTLZ nadir."""
        _, nadir = known_hv_bounds(get_problem("cdtlz1", 3))
        assert np.allclose(nadir, [0.0625, 0.0625, 0.25])

    def test_wfg(self):
        """WFG nadir is (2, 4, 6) for m=3."""
        _, nadir = known_hv_bounds(get_problem("wfg3", 3))
        assert nadir.tolist() == [2.0, 4.0, 6.0]

    def test_unknown_problem(self):
        """Custom problems have no known bounds."""
        custom = make_problem("custom", 2, 1, lambda X: np.hstack([X, 1 - X]), np.zeros(2), np.ones(2))
        with pytest.raises(InvalidProblemError):
            known_hv_bounds(custom)

    def test_degenerate_bounds_rejected(self):
        """ideal == nadir is rejected at construction."""
        with pytest.raises(InvalidProblemError):
            make_problem("flat", 2, 1, lambda X: np.hstack([X, X]), np.zeros(2), np.array([1.0, 0.0]))


class TestCountingEvaluator:
    """Test cases for evaluation counting."""

    def test_counts_rows(self):
        """Every evaluated row is counted once."""
        problem = get_problem("dtlz2", 3)
        counter = CountingEvaluator(problem.evaluator)
        counted = problem.with_evaluator(counter)
        counted.evaluate(np.zeros((7, problem.n)))
        counted.evaluate(np.zeros(problem.n))
        assert counter.count == 8


if __name__ == "__main__":
    pytest.main([__file__])

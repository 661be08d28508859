"""
Tests for hypervolume, normalized HV scoring and run statistics.
"""
import pytest
import numpy as np
from itertools import combinations

# Add the parent directory to the path for imports
import sys
import os
sys.path.insert(0, os.path.join(os.path.dirname(__file__), '..'))

from codea.core.errors import ContractViolationError, InvalidProblemError
from codea.core.population import Population, nondominated_mask
from codea.core.refgeom import das_dennis
from codea.problems import get_problem
from codea.problems.base import make_problem
from codea.utils.metrics import (
    HvProtocol,
    hypervolume_exact,
    hypervolume_mc,
    median_iqr,
    normalize_objectives,
    normalized_hv,
    wilcoxon_rank_sum,
)


def inclusion_exclusion_hv(points, ref):
    """HV oracle over all subsets of a small point set."""
    points = [p for p in np.asarray(points) if np.all(p < ref)]
    total = 0.0
    for size in range(1, len(points) + 1):
        for subset in combinations(points, size):
            corner = np.max(np.vstack(subset), axis=0)
            total += (-1) ** (size + 1) * np.prod(ref - corner)
    return total


@pytest.fixture
def dtlz2_m3():
    """DTLZ2 with three objectives."""
    return get_problem("dtlz2", 3)


class TestExactHypervolume:
    """Test cases for the exact hypervolume path."""

    def test_point_at_origin(self):
        """A single point at the origin covers the whole box."""
        assert hypervolume_exact([[0.0, 0.0, 0.0]], np.full(3, 1.1)) == pytest.approx(1.331)

    def test_two_points_2d(self):
        """Two 2-D points give 0.4725."""
        assert hypervolume_exact([[0.25, 0.75], [0.75, 0.25]], [1.1, 1.1]) == pytest.approx(0.4725)

    def test_duplicates(self):
        """Duplicates do not change the volume."""
        pts = np.array([[0.25, 0.75], [0.75, 0.25]])
        assert hypervolume_exact(np.vstack([pts, pts]), [1.1, 1.1]) == pytest.approx(0.4725)

    def test_no_contribution(self):
        """Points not strictly dominating the reference contribute nothing."""
        assert hypervolume_exact([[1.1, 0.0], [2.0, 2.0]], [1.1, 1.1]) == 0.0
        assert hypervolume_exact(np.zeros((0, 3)), np.full(3, 1.1)) == 0.0

    @pytest.mark.parametrize("m", [3, 4])
    def test_matches_inclusion_exclusion(self, m):
        """Random small sets agree with the subset oracle."""
        rng = np.random.default_rng(m)
        ref = np.full(m, 1.1)
        for _ in range(20):
            pts = rng.random((6, m))
            assert hypervolume_exact(pts, ref) == pytest.approx(inclusion_exclusion_hv(pts, ref))

    @pytest.mark.parametrize("m", [2, 3, 4])
    def test_adding_points_never_decreases(self, m):
        """Exact HV is monotone under adding points."""
        rng = np.random.default_rng(40 + m)
        ref = np.full(m, 1.1)
        for _ in range(30):
            pts = rng.random((8, m))
            before = hypervolume_exact(pts, ref)
            after = hypervolume_exact(np.vstack([pts, rng.random((1, m)) * 1.2]), ref)
            assert after >= before - 1e-12

    @pytest.mark.parametrize("m", [2, 3, 4])
    def test_dominated_points_do_not_count(self, m):
        """Removing dominated points leaves exact HV unchanged."""
        rng = np.random.default_rng(50 + m)
        ref = np.full(m, 1.1)
        for _ in range(30):
            pts = rng.random((10, m))
            pruned = pts[nondominated_mask(pts)]
            assert hypervolume_exact(pts, ref) == pytest.approx(inclusion_exclusion_hv(pruned, ref))

    def test_too_many_objectives(self):
        """The exact path is limited to m <= 4."""
        with pytest.raises(ContractViolationError):
            hypervolume_exact(np.zeros((1, 5)), np.full(5, 1.1))


class TestMonteCarloHypervolume:
    """Test cases for the Monte Carlo estimate."""

    def test_point_at_origin_m10(self):
        """Every sample is dominated by the origin."""
        estimate, stderr = hypervolume_mc(np.zeros((1, 10)), np.full(10, 1.1), samples=10_000)
        assert abs(estimate - 1.1 ** 10) <= 3 * stderr + 1e-9

    def test_empty(self):
        """An empty set has zero volume."""
        assert hypervolume_mc(np.zeros((0, 6)), np.full(6, 1.1), samples=10_000) == (0.0, 0.0)

    def test_agrees_with_exact(self):
        """On 50 random sets at least 95% of estimates fall within four standard errors."""
        rng = np.random.default_rng(7)
        ref = np.full(3, 1.1)
        within = 0
        for _ in range(50):
            pts = rng.random((10, 3))
            estimate, stderr = hypervolume_mc(pts, ref, samples=100_000, rng=rng)
            within += abs(estimate - hypervolume_exact(pts, ref)) <= 4 * stderr
        assert within >= 48

    def test_fixed_seed_reproducible(self):
        """The default generator is seeded."""
        pts = np.random.default_rng(1).random((8, 6))
        ref = np.full(6, 1.1)
        assert hypervolume_mc(pts, ref, samples=20_000) == hypervolume_mc(pts, ref, samples=20_000)

    def test_sample_floor(self):
        """Fewer than 10^4 samples are rejected."""
        with pytest.raises(ContractViolationError):
            hypervolume_mc(np.zeros((1, 3)), np.full(3, 1.1), samples=100)


class TestNormalizedHv:
    """Test cases for the benchmark HV score."""

    def test_protocol(self):
        """Reference 1.1 per objective, exact up to m=4."""
        protocol = HvProtocol(m=5)
        assert protocol.reference.tolist() == [1.1] * 5
        assert protocol.divisor == pytest.approx(1.1 ** 5)
        assert not protocol.exact
        assert HvProtocol(m=4).exact

    def test_ideal_population(self, dtlz2_m3):
        """A population at the ideal point scores 1."""
        assert normalized_hv(np.zeros((3, 3)), dtlz2_m3) == pytest.approx(1.0)

    def test_dominated_population(self, dtlz2_m3):
        """A population beyond the reference point scores 0."""
        assert normalized_hv(np.full((4, 3), 2.0), dtlz2_m3) == 0.0

    def test_sphere_sampling(self, dtlz2_m3):
        """The 91 lattice directions on the unit sphere score about 0.56."""
        W = das_dennis(3, 12)
        F = W / np.linalg.norm(W, axis=1, keepdims=True)
        assert normalized_hv(F, dtlz2_m3) == pytest.approx(0.56, abs=0.015)

    def test_accepts_population(self, dtlz2_m3):
        """Populations and raw arrays score alike."""
        F = np.array([[0.2, 0.5, 0.8], [0.9, 0.1, 0.3]])
        P = Population(decisions=np.zeros((2, 12)), objectives=F, capacity=2)
        assert normalized_hv(P, dtlz2_m3) == normalized_hv(F, dtlz2_m3)

    def test_many_objectives_in_unit_interval(self):
        """The Monte Carlo path is clipped to [0, 1]."""
        problem = get_problem("dtlz2", 8)
        F = np.random.default_rng(3).random((20, 8))
        score = normalized_hv(F, problem, samples=10_000)
        assert 0.0 <= score <= 1.0

    @pytest.mark.parametrize("m", [3, 6])
    def test_affine_rescaling_invariant(self, m):
        """Rescaling raw objectives together with ideal and nadir keeps the score."""
        rng = np.random.default_rng(60 + m)
        F = rng.random((25, m))
        base = make_problem("box", m, 1, lambda X: X, np.zeros(m), np.ones(m))
        a = rng.uniform(0.1, 50.0, size=m)
        b = rng.uniform(-10.0, 10.0, size=m)
        moved = make_problem("box", m, 1, lambda X: X, b, a + b)
        expected = normalized_hv(F, base, samples=20_000)
        assert normalized_hv(F * a + b, moved, samples=20_000) == pytest.approx(expected, rel=1e-9)

    def test_degenerate_bounds(self):
        """ideal == nadir in a component is rejected."""
        with pytest.raises(InvalidProblemError):
            normalize_objectives(np.zeros((1, 2)), np.zeros(2), np.array([1.0, 0.0]))


class TestStatistics:
    """Test cases for median/IQR and the rank-sum test."""

    def test_median_iqr(self):
        """Interpolated quartiles."""
        assert median_iqr([1, 2, 3]) == (2.0, 1.0)
        assert median_iqr([5]) == (5.0, 0.0)
        assert median_iqr([0.3] * 21) == (0.3, 0.0)

    def test_median_iqr_empty(self):
        """An empty sample raises."""
        with pytest.raises(ContractViolationError):
            median_iqr([])

    def test_identical_samples(self):
        """Identical samples are not significantly different."""
        a = np.linspace(0.5, 0.6, 21)
        result = wilcoxon_rank_sum(a, a.copy())
        assert result.p_value == pytest.approx(1.0)
        assert result.verdict == "≈"

    def test_disjoint_samples(self):
        """Disjoint ranges are extremely significant."""
        a = np.arange(1, 22, dtype=float)
        b = np.arange(22, 43, dtype=float)
        worse = wilcoxon_rank_sum(a, b)
        assert worse.p_value < 0.001
        assert worse.verdict == "-"
        assert wilcoxon_rank_sum(b, a).verdict == "+"

    def test_all_tied(self):
        """All-tied samples give no verdict."""
        result = wilcoxon_rank_sum([0.5] * 5, [0.5] * 5)
        assert result.p_value == 1.0
        assert result.verdict == "≈"

    def test_too_few_values(self):
        """At least five values per sample are needed."""
        with pytest.raises(ContractViolationError):
            wilcoxon_rank_sum([1, 2, 3, 4], [1, 2, 3, 4, 5])


if __name__ == "__main__":
    pytest.main([__file__])

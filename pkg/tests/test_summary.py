"""
Tests for summary tables and rank-sum verdicts.
"""
import csv
import pytest
import numpy as np

# Add the parent directory to the path for imports
import sys
import os
sys.path.insert(0, os.path.join(os.path.dirname(__file__), '..'))

from codea.harness.summary import (
    ABSENT,
    NOT_APPLICABLE,
    SUMMARY_HEADER,
    build_summary,
    collect_scores,
    format_summary_text,
    resolve_variants,
    summarize,
)
from codea.utils.metrics import normalized_hv
from codea.problems import get_problem
from codea.utils.results import ResultStore


def _row(rows, variant, problem="dtlz2", m=3):
    return next(r for r in rows if r.variant == variant and r.problem == problem and r.m == m)


class TestBuildSummary:
    """Test cases for summary rows."""

    def test_identical_values(self):
        """21 identical values give IQR 0 and no significant difference."""
        scores = {("dtlz2", 3): {"codea": [0.56] * 21, "pbi": [0.56] * 21}}
        rows = build_summary(scores, baseline="codea")
        for variant in ("codea", "pbi"):
            row = _row(rows, variant)
            assert row.median_hv == pytest.approx(0.56)
            assert row.iqr == 0.0
            assert row.verdict == "≈"

    def test_disjoint_values(self):
        """A variant entirely below the baseline gets '-' with p < 0.001."""
        scores = {("dtlz2", 3): {
            "codea": list(np.linspace(0.60, 0.61, 21)),
            "pbi": list(np.linspace(0.50, 0.51, 21)),
        }}
        rows = build_summary(scores, baseline="codea")
        pbi = _row(rows, "pbi")
        assert pbi.verdict == "-"
        assert pbi.p_value < 0.001
        assert _row(rows, "codea").verdict == "≈"
        flipped = build_summary(scores, baseline="pbi")
        assert _row(flipped, "codea").verdict == "+"

    def test_single_seed(self):
        """One run gives its value, IQR 0 and no verdict."""
        rows = build_summary({("dtlz1", 3): {"codea": [0.8]}}, baseline="codea")
        row = _row(rows, "codea", problem="dtlz1")
        assert row.median_hv == 0.8
        assert row.iqr == 0.0
        assert row.verdict == NOT_APPLICABLE

    def test_missing_variant_is_absent(self):
        """A requested variant without runs yields an absent row."""
        rows = build_summary({("dtlz2", 3): {"codea": [0.5] * 5}}, baseline="codea",
                             variants=["codea", "nbi"])
        row = _row(rows, "nbi")
        assert row.absent
        assert row.csv_fields() == ["dtlz2", "3", "nbi", ABSENT, ABSENT, ABSENT]

    def test_listed_instance_without_runs(self):
        """Configured instances appear even if every cell failed."""
        rows = build_summary({}, baseline="codea", variants=["codea"], instances=[("wfg4", 5)])
        assert len(rows) == 1
        assert rows[0].absent

    def test_instance_order(self):
        """DTLZ rows precede convex DTLZ and WFG rows; m ascends."""
        scores = {
            ("wfg1", 3): {"codea": [0.1]},
            ("cdtlz2", 3): {"codea": [0.2]},
            ("dtlz2", 5): {"codea": [0.3]},
            ("dtlz2", 3): {"codea": [0.4]},
            ("dtlz10", 3): {"codea": [0.5]},
        }
        rows = build_summary(scores)
        assert [(r.problem, r.m) for r in rows] == [
            ("dtlz2", 3), ("dtlz2", 5), ("dtlz10", 3), ("cdtlz2", 3), ("wfg1", 3),
        ]

    def test_resolve_variants(self):
        """codea leads the columns and becomes the default baseline."""
        variants, baseline = resolve_variants({("dtlz2", 3): {"pbi": [1], "codea": [1], "nbi": [1]}})
        assert variants == ["codea", "nbi", "pbi"]
        assert baseline == "codea"

    def test_text_table(self):
        """The text table names the baseline and every row."""
        rows = build_summary({("dtlz2", 3): {"codea": [0.5] * 5}}, baseline="codea",
                             variants=["codea", "pbi"])
        text = format_summary_text(rows, "codea")
        assert text.splitlines()[0] == "baseline: codea"
        assert "absent" in text
        assert "5.0000e-01" in text


class TestSummarize:
    """Test cases for summarizing a results directory."""

    def test_collect_and_write(self, tmp_path, make_result):
        """Runs on disk are summarized into CSV and text tables."""
        store = ResultStore(tmp_path)
        for seed in range(5):
            store.save_run(make_result(seed=seed, variant="codea", hv=0.6 + seed * 0.001))
            store.save_run(make_result(seed=seed, variant="pbi", hv=0.5 + seed * 0.001))
        rows = summarize(tmp_path)
        assert len(rows) == 2
        with open(tmp_path / "summary.csv", newline="", encoding="utf-8") as f:
            table = list(csv.reader(f))
        assert table[0] == SUMMARY_HEADER
        assert [r[2] for r in table[1:]] == ["codea", "pbi"]
        assert float(table[1][3]) == pytest.approx(0.602)
        assert (tmp_path / "summary.txt").exists()

    def test_missing_hv_is_recomputed(self, tmp_path, make_result):
        """Runs saved without HV are scored from their objectives."""
        result = make_result(seed=2, hv=None)
        ResultStore(tmp_path).save_run(result)
        scores = collect_scores(tmp_path)
        expected = normalized_hv(result.final_population, get_problem("dtlz2", 3))
        assert scores[("dtlz2", 3)]["codea"] == [pytest.approx(expected)]

    def test_scores_ordered_by_seed(self, tmp_path, make_result):
        """Scores are listed in seed order."""
        store = ResultStore(tmp_path)
        for seed in (10, 2, 7):
            store.save_run(make_result(seed=seed, hv=seed / 100))
        assert collect_scores(tmp_path)[("dtlz2", 3)]["codea"] == [0.02, 0.07, 0.10]


if __name__ == "__main__":
    pytest.main([__file__])

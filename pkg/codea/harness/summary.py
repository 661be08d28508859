"""
Summary tables: median HV, IQR and rank-sum verdicts against a baseline variant.
"""
import csv
import logging
from collections import defaultdict
from dataclasses import dataclass
from pathlib import Path
from typing import Dict, List, Optional, Sequence, Tuple, Union

from ..core.errors import ContractViolationError
from ..problems import get_problem
from ..utils.metrics import MIN_SAMPLE_SIZE, median_iqr, normalized_hv, wilcoxon_rank_sum
from ..utils.results import ResultStore

logger = logging.getLogger(__name__)

ABSENT = "absent"
NOT_APPLICABLE = "n/a"
SUMMARY_HEADER = ["problem", "m", "variant", "median_hv", "iqr", "verdict"]


@dataclass
class SummaryRow:
    problem: str
    m: int
    variant: str
    median_hv: Optional[float]
    iqr: Optional[float]
    verdict: str
    runs: int = 0
    p_value: Optional[float] = None

    @property
    def absent(self) -> bool:
        return self.runs == 0

    def csv_fields(self) -> List[str]:
        if self.absent:
            return [self.problem, str(self.m), self.variant, ABSENT, ABSENT, ABSENT]
        return [self.problem, str(self.m), self.variant,
                f"{self.median_hv:.17g}", f"{self.iqr:.17g}", self.verdict]


def _instance_key(problem: str) -> Tuple[int, str, int]:
    order = {"dtlz": 0, "cdtlz": 1, "wfg": 2}
    family = problem.rstrip("0123456789")
    return order.get(family, 3), family, int(problem[len(family):] or 0)


def _score(store: ResultStore, meta: dict, path_stem: str) -> float:
    if meta.get("hv") is not None:
        return float(meta["hv"])
    loaded = store.load_run(store.output_dir / f"{path_stem}.json")
    return normalized_hv(loaded["objectives"], get_problem(meta["problem"], meta["m"]))


def collect_scores(results_dir: Union[str, Path]) -> Dict[Tuple[str, int], Dict[str, List[float]]]:
    """HV per (problem, m) and variant over all completed runs, ordered by seed."""
    store = ResultStore(results_dir)
    runs = defaultdict(lambda: defaultdict(list))
    for meta in store.iter_runs():
        variant = meta["config"]["variant"]
        stem = ResultStore.run_stem(meta["problem"], meta["m"], variant, meta["seed"])
        runs[(meta["problem"], meta["m"])][variant].append((meta["seed"], _score(store, meta, stem)))
    return {
        key: {variant: [hv for _, hv in sorted(values)] for variant, values in by_variant.items()}
        for key, by_variant in runs.items()
    }


def resolve_variants(scores, baseline: Optional[str] = None,
                     variants: Optional[Sequence[str]] = None) -> Tuple[List[str], Optional[str]]:
    """Variant columns (codea first when unspecified) and the baseline, defaulting to the first."""
    if variants is None:
        seen = {v for by_variant in scores.values() for v in by_variant}
        variants = sorted(seen, key=lambda v: (v != "codea", v))
    variants = list(variants)
    if baseline is None and variants:
        baseline = variants[0]
    return variants, baseline


def build_summary(scores: Dict[Tuple[str, int], Dict[str, List[float]]],
                  baseline: Optional[str] = None,
                  variants: Optional[Sequence[str]] = None,
                  instances: Sequence[Tuple[str, int]] = ()) -> List[SummaryRow]:
    """
    One row per (problem, m, variant); variants without runs get an absent row.
    Instances listed in `instances` appear even when none of their runs completed.

    Verdicts compare each variant with the baseline on the same instance and
    need at least five runs on both sides; otherwise the verdict is "n/a".
    """
    variants, baseline = resolve_variants(scores, baseline, variants)

    rows = []
    keys = set(scores) | {(p, int(m)) for p, m in instances}
    for problem, m in sorted(keys, key=lambda k: (_instance_key(k[0]), k[1])):
        by_variant = scores.get((problem, m), {})
        base = by_variant.get(baseline, [])
        for variant in variants:
            sample = by_variant.get(variant, [])
            if not sample:
                rows.append(SummaryRow(problem, m, variant, None, None, ABSENT))
                continue
            median, iqr = median_iqr(sample)
            verdict, p_value = NOT_APPLICABLE, None
            if len(sample) >= MIN_SAMPLE_SIZE and len(base) >= MIN_SAMPLE_SIZE:
                try:
                    test = wilcoxon_rank_sum(sample, base)
                    verdict, p_value = test.verdict, test.p_value
                except ContractViolationError as e:
                    logger.warning(f"No verdict for {problem} m={m} {variant}: {str(e)}")
            rows.append(SummaryRow(problem, m, variant, median, iqr, verdict,
                                   runs=len(sample), p_value=p_value))
    return rows


def format_summary_text(rows: Sequence[SummaryRow], baseline: Optional[str] = None) -> str:
    """Aligned text table with 'median (IQR)' cells."""
    header = ["problem", "m", "variant", "runs", "median HV (IQR)", "verdict", "p"]
    lines = []
    for row in rows:
        if row.absent:
            cell, p = ABSENT, ""
        else:
            cell = f"{row.median_hv:.4e} ({row.iqr:.2e})"
            p = "" if row.p_value is None else f"{row.p_value:.3g}"
        lines.append([row.problem, str(row.m), row.variant, str(row.runs), cell, row.verdict, p])
    widths = [max(len(r[i]) for r in [header] + lines) for i in range(len(header))]
    out = []
    if baseline:
        out.append(f"baseline: {baseline}")
    out.append("  ".join(h.ljust(w) for h, w in zip(header, widths)).rstrip())
    out.append("  ".join("-" * w for w in widths))
    out.extend("  ".join(c.ljust(w) for c, w in zip(line, widths)).rstrip() for line in lines)
    return "\n".join(out) + "\n"


def write_summary(rows: Sequence[SummaryRow], output_dir: Union[str, Path],
                  baseline: Optional[str] = None) -> Tuple[Path, Path]:
    """Write summary.csv and summary.txt; returns both paths."""
    output_dir = Path(output_dir)
    csv_path = output_dir / "summary.csv"
    txt_path = output_dir / "summary.txt"
    with open(csv_path, "w", newline="", encoding="utf-8") as f:
        writer = csv.writer(f)
        writer.writerow(SUMMARY_HEADER)
        for row in rows:
            writer.writerow(row.csv_fields())
    with open(txt_path, "w", encoding="utf-8") as f:
        f.write(format_summary_text(rows, baseline))
    logger.info(f"Wrote summary of {len(rows)} row(s) to {csv_path} and {txt_path}")
    return csv_path, txt_path


def summarize(results_dir: Union[str, Path], baseline: Optional[str] = None,
              variants: Optional[Sequence[str]] = None,
              instances: Sequence[Tuple[str, int]] = ()) -> List[SummaryRow]:
    """
    Summarize every completed run under results_dir and write the tables there.

    Returns:
        list: The summary rows
    """
    scores = collect_scores(results_dir)
    variants, baseline = resolve_variants(scores, baseline, variants)
    rows = build_summary(scores, baseline, variants, instances)
    write_summary(rows, results_dir, baseline)
    return rows

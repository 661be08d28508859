"""
Experiment configuration: YAML loading, validation and the default
generation budgets.
"""
import logging
import os
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any, Dict, List, Optional, Tuple, Union

import yaml

from ..core.errors import CodeaError, InvalidArgumentError
from ..core.refgeom import SINGLE_LAYER_DIVISIONS, TWO_LAYER_DIVISIONS
from ..core.selection import InnerAngleOrder, RankingVariant
from ..problems import get_problem

logger = logging.getLogger(__name__)

OUTPUT_DIR_ENV = "CODEA_OUTPUT_DIR"
DEFAULT_OUTPUT_DIR = "results"
DEFAULT_SEED_COUNT = 21
DEFAULT_HV_SAMPLES = 1_000_000

# Generation budgets per family and objective count
DEFAULT_GMAX: Dict[str, Dict[int, int]] = {
    "dtlz1": {3: 36800, 5: 127200, 8: 117000, 10: 276000, 15: 204000},
    "dtlz2": {3: 23000, 5: 74200, 8: 78000, 10: 207000, 15: 136000},
    "dtlz3": {3: 92000, 5: 212000, 8: 156000, 10: 414000, 15: 272000},
    "dtlz4": {3: 55200, 5: 212000, 8: 195000, 10: 552000, 15: 408000},
    "wfg": {3: 92000, 5: 265000, 8: 234000, 10: 552000, 15: 405000},
}

KNOWN_KEYS = {
    "problems", "problem", "m", "variants", "seeds", "gens", "budget_factor",
    "baseline", "inner_angle_order", "workers", "output_dir", "hv_samples", "logging",
}


class ConfigError(CodeaError, ValueError):
    """Invalid experiment configuration, reported with the offending field and line."""

    def __init__(self, message: str, field: Optional[str] = None, line: Optional[int] = None):
        self.field = field
        self.line = line
        location = []
        if line is not None:
            location.append(f"line {line}")
        if field is not None:
            location.append(f"field '{field}'")
        prefix = ", ".join(location)
        super().__init__(f"{prefix}: {message}" if prefix else message)


def default_gmax(problem_id: str, m: int) -> int:
    """
    Default generation budget of a benchmark instance.

    Convex DTLZ variants share the budget of their DTLZ base.

    Raises:
        InvalidArgumentError: If no default exists for the instance
    """
    key = problem_id.lower()
    if key.startswith("cdtlz"):
        key = key[1:]
    elif key.startswith("wfg"):
        key = "wfg"
    table = DEFAULT_GMAX.get(key, {})
    if m not in table:
        raise InvalidArgumentError(f"No default G_max for {problem_id} with m={m}; set 'gens'")
    return table[m]


@dataclass
class ExperimentSpec:
    """
    A batch of runs over problems x variants x seeds.

    Attributes:
        problems: (problem id, m) pairs
        variants: Ranking variants to run
        seeds: Run seeds
        gens: Fixed budget for every instance, or None to use the defaults
        gens_table: Per-instance overrides keyed by (problem id, m)
        budget_factor: Scale applied to default budgets
        baseline: Variant the others are compared against
        inner_angle_order: Inner-niche angle order for every run
        workers: Concurrent experiment cells
        output_dir: Result directory
        hv_samples: Monte Carlo samples for final HV when m > 4
        log_level: Logging level name
    """
    problems: List[Tuple[str, int]]
    variants: List[RankingVariant] = field(default_factory=lambda: [RankingVariant.CODEA])
    seeds: List[int] = field(default_factory=lambda: list(range(DEFAULT_SEED_COUNT)))
    gens: Optional[int] = None
    gens_table: Dict[Tuple[str, int], int] = field(default_factory=dict)
    budget_factor: float = 1.0
    baseline: Optional[RankingVariant] = None
    inner_angle_order: InnerAngleOrder = InnerAngleOrder.MAX
    workers: int = 1
    output_dir: Path = field(default_factory=lambda: Path(os.environ.get(OUTPUT_DIR_ENV, DEFAULT_OUTPUT_DIR)))
    hv_samples: int = DEFAULT_HV_SAMPLES
    log_level: str = "INFO"

    def __post_init__(self):
        if self.baseline is None:
            self.baseline = self.variants[0]

    def gmax_for(self, problem_id: str, m: int) -> int:
        """Generation budget of one instance: explicit override, else scaled default."""
        if (problem_id, m) in self.gens_table:
            return self.gens_table[(problem_id, m)]
        if self.gens is not None:
            return self.gens
        return max(1, int(round(default_gmax(problem_id, m) * self.budget_factor)))

    def cells(self) -> List[Tuple[str, int, RankingVariant, int]]:
        """Every (problem, m, variant, seed) combination in execution order."""
        return [
            (problem, m, variant, seed)
            for problem, m in self.problems
            for variant in self.variants
            for seed in self.seeds
        ]


def _as_list(value) -> list:
    return list(value) if isinstance(value, (list, tuple)) else [value]


def _parse_problems(raw: Dict[str, Any]) -> List[Tuple[str, int]]:
    if "problems" in raw:
        entries = raw["problems"]
        if not isinstance(entries, list) or not entries:
            raise ConfigError("expected a nonempty list of {problem, m} entries", field="problems")
        pairs = []
        for i, entry in enumerate(entries):
            if not isinstance(entry, dict) or "problem" not in entry or "m" not in entry:
                raise ConfigError("each entry needs 'problem' and 'm'", field=f"problems[{i}]")
            pairs.append((str(entry["problem"]).lower(), entry["m"]))
    elif "problem" in raw and "m" in raw:
        pairs = [(str(p).lower(), m) for p in _as_list(raw["problem"]) for m in _as_list(raw["m"])]
    else:
        raise ConfigError("either 'problems' or both 'problem' and 'm' are required", field="problems")

    resolved = []
    for problem, m in pairs:
        if isinstance(m, bool) or not isinstance(m, int):
            raise ConfigError(f"objective count must be an integer, got {m!r}", field="m")
        if m not in SINGLE_LAYER_DIVISIONS and m not in TWO_LAYER_DIVISIONS:
            supported = sorted({**SINGLE_LAYER_DIVISIONS, **TWO_LAYER_DIVISIONS})
            raise ConfigError(f"no reference set for m={m}; supported m are {supported}", field="m")
        try:
            get_problem(problem, m)
        except CodeaError as e:
            raise ConfigError(str(e), field="problem") from e
        resolved.append((problem, m))
    return resolved


def _parse_seeds(value) -> List[int]:
    if isinstance(value, bool):
        raise ConfigError("expected a count or a list of integers", field="seeds")
    if isinstance(value, int):
        if value < 1:
            raise ConfigError("seed count must be positive", field="seeds")
        return list(range(value))
    if isinstance(value, list):
        if not value:
            raise ConfigError("seed list is empty", field="seeds")
        if not all(isinstance(s, int) and not isinstance(s, bool) for s in value):
            raise ConfigError("seeds must be integers", field="seeds")
        return list(value)
    raise ConfigError("expected a count or a list of integers", field="seeds")


def _parse_gens(value) -> Tuple[Optional[int], Dict[Tuple[str, int], int]]:
    if value is None:
        return None, {}
    if isinstance(value, int) and not isinstance(value, bool):
        if value < 1:
            raise ConfigError("generation count must be at least 1", field="gens")
        return value, {}
    if isinstance(value, dict):
        table = {}
        for key, gens in value.items():
            problem, sep, m = str(key).partition("/")
            if not sep or not m.strip().isdigit():
                raise ConfigError(f"keys must look like 'dtlz2/3', got '{key}'", field="gens")
            if not isinstance(gens, int) or isinstance(gens, bool) or gens < 1:
                raise ConfigError(f"'{key}' needs a positive integer", field="gens")
            table[(problem.strip().lower(), int(m))] = gens
        return None, table
    raise ConfigError("expected an integer or a 'problem/m' mapping", field="gens")


def _parse_enum(enum_cls, value, field_name: str):
    try:
        return enum_cls(str(value).lower())
    except ValueError:
        choices = ", ".join(e.value for e in enum_cls)
        raise ConfigError(f"unknown value '{value}'; expected one of {choices}", field=field_name)


def parse_experiment_spec(raw: Any) -> ExperimentSpec:
    """
    Validate a parsed config mapping.

    Raises:
        ConfigError: On unknown keys, wrong types or unresolvable problems
    """
    if not isinstance(raw, dict):
        raise ConfigError("top level must be a mapping")
    unknown = sorted(set(raw) - KNOWN_KEYS)
    if unknown:
        raise ConfigError(f"unknown key(s): {', '.join(unknown)}", field=unknown[0])

    problems = _parse_problems(raw)
    variants = [_parse_enum(RankingVariant, v, "variants") for v in _as_list(raw.get("variants", ["codea"]))]
    if not variants:
        raise ConfigError("variant list is empty", field="variants")
    seeds = _parse_seeds(raw.get("seeds", DEFAULT_SEED_COUNT))
    gens, gens_table = _parse_gens(raw.get("gens"))

    budget_factor = raw.get("budget_factor", 1.0)
    if isinstance(budget_factor, bool) or not isinstance(budget_factor, (int, float)) or budget_factor <= 0:
        raise ConfigError("must be a positive number", field="budget_factor")

    baseline = raw.get("baseline")
    if baseline is not None:
        baseline = _parse_enum(RankingVariant, baseline, "baseline")
        if baseline not in variants:
            raise ConfigError(f"baseline '{baseline.value}' is not among the variants", field="baseline")

    workers = raw.get("workers", 1)
    if isinstance(workers, bool) or not isinstance(workers, int) or workers < 1:
        raise ConfigError("must be a positive integer", field="workers")

    hv_samples = raw.get("hv_samples", DEFAULT_HV_SAMPLES)
    if isinstance(hv_samples, bool) or not isinstance(hv_samples, int) or hv_samples < 10_000:
        raise ConfigError("must be an integer >= 10000", field="hv_samples")

    log_config = raw.get("logging", {}) or {}
    if not isinstance(log_config, dict):
        raise ConfigError("must be a mapping", field="logging")

    output_dir = raw.get("output_dir") or os.environ.get(OUTPUT_DIR_ENV, DEFAULT_OUTPUT_DIR)

    spec = ExperimentSpec(
        problems=problems,
        variants=variants,
        seeds=seeds,
        gens=gens,
        gens_table=gens_table,
        budget_factor=float(budget_factor),
        baseline=baseline,
        inner_angle_order=_parse_enum(InnerAngleOrder, raw.get("inner_angle_order", "max"), "inner_angle_order"),
        workers=workers,
        output_dir=Path(output_dir),
        hv_samples=hv_samples,
        log_level=str(log_config.get("level", "INFO")),
    )
    for problem, m in spec.problems:
        try:
            spec.gmax_for(problem, m)
        except InvalidArgumentError as e:
            raise ConfigError(str(e), field="gens") from e
    return spec


def load_experiment_spec(path: Union[str, Path]) -> ExperimentSpec:
    """
    Load and validate an experiment config from YAML.

    Raises:
        FileNotFoundError: If the file does not exist
        ConfigError: On YAML syntax errors (with line) or invalid content
    """
    config_file = Path(path)
    if not config_file.exists():
        raise FileNotFoundError(f"Configuration file not found: {path}")
    try:
        with open(config_file, "r") as f:
            raw = yaml.safe_load(f)
    except yaml.YAMLError as e:
        mark = getattr(e, "problem_mark", None)
        line = mark.line + 1 if mark is not None else None
        raise ConfigError(f"YAML syntax error: {getattr(e, 'problem', e)}", line=line) from e
    spec = parse_experiment_spec(raw)
    logger.info(f"Loaded experiment from {config_file}: {len(spec.problems)} instance(s), "
                f"{len(spec.variants)} variant(s), {len(spec.seeds)} seed(s)")
    return spec

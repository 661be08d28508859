"""
Batch execution of experiment cells (problem x m x variant x seed).
"""
import logging
from concurrent.futures import ProcessPoolExecutor, as_completed
from dataclasses import dataclass
from pathlib import Path
from typing import Any, Dict, List, Optional

from ..core.algorithm import AlgoConfig, RunResult, run_codea
from ..core.selection import InnerAngleOrder, RankingVariant
from ..problems import get_problem
from ..utils.metrics import DEFAULT_MC_SAMPLES, normalized_hv
from ..utils.results import ResultStore
from .config import ExperimentSpec


@dataclass(frozen=True)
class CellOutcome:
    problem: str
    m: int
    variant: str
    seed: int
    hv: Optional[float] = None
    error: Optional[str] = None

    @property
    def ok(self) -> bool:
        return self.error is None


def execute_run(problem_id: str, m: int, variant: RankingVariant, seed: int, G_max: int,
                inner_angle_order: InnerAngleOrder = InnerAngleOrder.MAX,
                hv_samples: int = DEFAULT_MC_SAMPLES,
                output_dir: Optional[Path] = None) -> RunResult:
    """
    Run one cell, score its final population and optionally persist it.

    Returns:
        RunResult: With hv filled in
    """
    problem = get_problem(problem_id, m)
    cfg = AlgoConfig(G_max=G_max, seed=seed, variant=variant, inner_angle_order=inner_angle_order)
    result = run_codea(problem, cfg)
    result.hv = normalized_hv(result.final_population, problem, samples=hv_samples)
    if output_dir is not None:
        ResultStore(output_dir).save_run(result)
    return result


def _run_cell(problem_id: str, m: int, variant: str, seed: int, G_max: int,
              inner_angle_order: str, hv_samples: int, output_dir: str) -> CellOutcome:
    result = execute_run(problem_id, m, RankingVariant(variant), seed, G_max,
                         InnerAngleOrder(inner_angle_order), hv_samples, Path(output_dir))
    return CellOutcome(problem=problem_id, m=m, variant=variant, seed=seed, hv=result.hv)


class ExperimentRunner:
    """Runs every cell of an ExperimentSpec, concurrently up to the worker limit."""

    def __init__(self, spec: ExperimentSpec):
        self.spec = spec
        self.logger = logging.getLogger(self.__class__.__name__)
        self.store = ResultStore(spec.output_dir)

    def _cell_args(self, problem: str, m: int, variant: RankingVariant, seed: int) -> Dict[str, Any]:
        return {
            "problem_id": problem,
            "m": m,
            "variant": variant.value,
            "seed": seed,
            "G_max": self.spec.gmax_for(problem, m),
            "inner_angle_order": self.spec.inner_angle_order.value,
            "hv_samples": self.spec.hv_samples,
            "output_dir": str(self.spec.output_dir),
        }

    def _record_failure(self, args: Dict[str, Any], error: Exception) -> CellOutcome:
        cell_id = ResultStore.run_stem(args["problem_id"], args["m"], args["variant"], args["seed"])
        self.logger.error(f"Cell {cell_id} failed: {str(error)}")
        self.store.save_failure(args["problem_id"], args["m"], args["variant"], args["seed"], str(error))
        return CellOutcome(problem=args["problem_id"], m=args["m"], variant=args["variant"],
                           seed=args["seed"], error=str(error))

    def run(self) -> List[CellOutcome]:
        """
        Execute all cells; a failing cell is recorded and the batch continues.

        Returns:
            list: One outcome per cell, in cell order
        """
        cells = [self._cell_args(*cell) for cell in self.spec.cells()]
        self.logger.info(f"Running {len(cells)} cell(s) with {self.spec.workers} worker(s) "
                         f"into {self.spec.output_dir}")
        outcomes: List[Optional[CellOutcome]] = [None] * len(cells)

        if self.spec.workers <= 1:
            for i, args in enumerate(cells):
                try:
                    outcomes[i] = _run_cell(**args)
                except Exception as e:
                    outcomes[i] = self._record_failure(args, e)
        else:
            # Workers persist their own results; outcomes are placed back in cell order
            with ProcessPoolExecutor(max_workers=self.spec.workers) as executor:
                futures = {executor.submit(_run_cell, **args): i for i, args in enumerate(cells)}
                for future in as_completed(futures):
                    i = futures[future]
                    try:
                        outcomes[i] = future.result()
                    except Exception as e:
                        outcomes[i] = self._record_failure(cells[i], e)

        failed = sum(1 for o in outcomes if not o.ok)
        self.logger.info(f"Experiment finished: {len(cells) - failed} succeeded, {failed} failed")
        return outcomes

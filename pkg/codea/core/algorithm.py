"""
The generational optimizer loop and its ranking variants.
"""
import logging
import time
from dataclasses import dataclass, field, replace
from typing import Any, Dict, List, Optional, Tuple

from ..problems.base import CountingEvaluator
from ..utils.metrics import normalized_hv
from .errors import InvalidArgumentError
from .population import Population, RngStream
from .refgeom import ReferenceSet, build_reference_set
from .scalarize import PbiConfig
from .selection import (
    InnerAngleOrder,
    NormalizationState,
    RankingVariant,
    environmental_selection,
)
from .variation import VariationConfig, create_offspring_population, init_population

HISTORY_POINTS = 50
HISTORY_SAMPLES = 10_000


@dataclass
class AlgoConfig:
    """
    Settings of one optimizer run.

    Attributes:
        G_max: Number of generations
        seed: Seed of the run's random stream
        N: Population size; must equal the reference-set size when given
        variation: SBX / mutation parameters
        variant: Niche ranking scheme
        inner_angle_order: Angle order inside inner niches
        pbi: Penalty weights for the PBI variant
        k_m_override: Replaces the objective-count rotation factor when set
        reference_set: Explicit reference set; built from m when omitted
        hv_every: Generations between HV history samples; None for the
            default spacing, 0 to disable
    """
    G_max: int
    seed: int = 0
    N: Optional[int] = None
    variation: VariationConfig = field(default_factory=VariationConfig)
    variant: RankingVariant = RankingVariant.CODEA
    inner_angle_order: InnerAngleOrder = InnerAngleOrder.MAX
    pbi: PbiConfig = field(default_factory=PbiConfig)
    k_m_override: Optional[float] = None
    reference_set: Optional[ReferenceSet] = field(default=None, repr=False)
    hv_every: Optional[int] = None

    def __post_init__(self):
        self.variant = RankingVariant(self.variant)
        self.inner_angle_order = InnerAngleOrder(self.inner_angle_order)
        if int(self.G_max) < 1:
            raise InvalidArgumentError(f"G_max must be at least 1, got {self.G_max}")
        self.G_max = int(self.G_max)

    @property
    def history_interval(self) -> int:
        if self.hv_every is None:
            return max(1, self.G_max // HISTORY_POINTS)
        return int(self.hv_every)

    def to_dict(self) -> Dict[str, Any]:
        return {
            "G_max": self.G_max,
            "seed": self.seed,
            "N": self.N,
            "variation": {
                "eta_c": self.variation.eta_c,
                "eta_m": self.variation.eta_m,
                "p_c": self.variation.p_c,
                "p_m": self.variation.p_m,
            },
            "variant": self.variant.value,
            "inner_angle_order": self.inner_angle_order.value,
            "pbi": {"theta": self.pbi.theta, "theta_axis": self.pbi.theta_axis},
            "k_m_override": self.k_m_override,
            "hv_every": self.history_interval,
        }


@dataclass
class RunResult:
    """Outcome of one run."""
    problem: str
    m: int
    final_population: Population
    seed: int
    config: Dict[str, Any]
    elapsed: float
    evaluations: int
    generations: int
    state: NormalizationState
    hv_history: List[Tuple[int, float]] = field(default_factory=list)
    hv: Optional[float] = None

    def to_dict(self) -> Dict[str, Any]:
        """JSON-ready metadata; the population itself is persisted separately."""
        return {
            "problem": self.problem,
            "m": self.m,
            "seed": self.seed,
            "N": len(self.final_population),
            "config": self.config,
            "elapsed": self.elapsed,
            "evaluations": self.evaluations,
            "generations": self.generations,
            "normalization": self.state.to_dict(),
            "hv_history": [[g, v] for g, v in self.hv_history],
            "hv": self.hv,
        }


class CoDEA:
    """
    Decomposition-based evolutionary optimizer with collaborative niche ranking.

    Each generation creates N offspring, merges them with the parents and
    keeps N survivors by environmental selection.
    """

    def __init__(self, problem, config: AlgoConfig):
        self.problem = problem
        self.config = config
        self.logger = logging.getLogger(self.__class__.__name__)
        self.refset = self._prepare_reference_set()
        self.N = len(self.refset)

    def _prepare_reference_set(self) -> ReferenceSet:
        cfg = self.config
        refset = cfg.reference_set if cfg.reference_set is not None else build_reference_set(self.problem.m)
        if refset.m != self.problem.m:
            raise InvalidArgumentError(
                f"Reference set has m={refset.m} but problem {self.problem.name} has m={self.problem.m}"
            )
        if cfg.N is not None and cfg.N != len(refset):
            raise InvalidArgumentError(
                f"Population size N={cfg.N} must equal the reference-set size {len(refset)}"
            )
        if cfg.k_m_override is not None:
            refset = refset.with_k_m(cfg.k_m_override)
        return refset

    def _history_hv(self, P: Population) -> float:
        return normalized_hv(P, self.problem, samples=HISTORY_SAMPLES)

    def run(self) -> RunResult:
        """
        Execute G_max generations.

        Returns:
            RunResult: Final population with provenance and statistics
        """
        cfg = self.config
        counter = CountingEvaluator(self.problem.evaluator)
        problem = self.problem.with_evaluator(counter)
        rng = RngStream(cfg.seed)
        interval = cfg.history_interval
        history: List[Tuple[int, float]] = []

        self.logger.info(
            f"Starting {cfg.variant.value} on {self.problem.name} (m={self.problem.m}, N={self.N}, "
            f"G_max={cfg.G_max}, seed={cfg.seed}, inner_angle_order={cfg.inner_angle_order.value})"
        )
        started = time.perf_counter()

        # Initial population and ideal/nadir estimates
        P = init_population(problem, self.N, rng)
        state = NormalizationState.initial(P.objectives)

        for gen in range(1, cfg.G_max + 1):
            Q = create_offspring_population(P, cfg.variation, rng, problem)
            U = P.merge(Q)  # parents first, then offspring
            P, state = environmental_selection(
                U, self.refset, state, self.N, rng,
                variant=cfg.variant, inner_order=cfg.inner_angle_order, pbi=cfg.pbi,
            )
            # HV history is sampled; the last generation is always recorded
            if interval and (gen % interval == 0 or gen == cfg.G_max):
                hv = self._history_hv(P)
                history.append((gen, hv))
                self.logger.debug(f"Generation {gen}/{cfg.G_max}: HV={hv:.6f}")
            else:
                self.logger.debug(f"Generation {gen}/{cfg.G_max} done")

        elapsed = time.perf_counter() - started
        self.logger.info(
            f"Finished {cfg.variant.value} on {self.problem.name} seed={cfg.seed}: "
            f"{counter.count} evaluations in {elapsed:.2f}s"
        )
        return RunResult(
            problem=self.problem.name,
            m=self.problem.m,
            final_population=P,
            seed=cfg.seed,
            config=cfg.to_dict(),
            elapsed=elapsed,
            evaluations=counter.count,
            generations=cfg.G_max,
            state=state,
            hv_history=history,
        )


def run_codea(problem, cfg: AlgoConfig) -> RunResult:
    """Run the optimizer with the configured ranking variant."""
    return CoDEA(problem, cfg).run()


def run_variant(problem, cfg: AlgoConfig, variant: Optional[RankingVariant] = None) -> RunResult:
    """
    Run an ablation variant; `variant`, when given, replaces cfg.variant.
    """
    if variant is not None:
        cfg = replace(cfg, variant=RankingVariant(variant))
    return CoDEA(problem, cfg).run()

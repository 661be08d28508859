"""
Command-line interface: run, experiment, hv, refpoints, plotdata, summarize.
"""
import argparse
import os
import sys
from pathlib import Path
from typing import List, Optional

import numpy as np

from ..core.algorithm import AlgoConfig, run_codea
from ..core.errors import CodeaError
from ..core.refgeom import ReferenceSet, build_reference_set, load_reference_set
from ..core.selection import InnerAngleOrder, RankingVariant
from ..problems import get_problem
from ..utils.logger import get_logger, setup_logging
from ..utils.metrics import DEFAULT_MC_SAMPLES, normalized_hv
from ..utils.results import ResultStore, read_objectives_csv, write_plot_data
from .config import DEFAULT_OUTPUT_DIR, OUTPUT_DIR_ENV, ConfigError, default_gmax, load_experiment_spec
from .runner import ExperimentRunner
from .summary import summarize

logger = get_logger(__name__)


def _default_output_dir() -> str:
    return os.environ.get(OUTPUT_DIR_ENV, DEFAULT_OUTPUT_DIR)


def write_reference_csv(refset: ReferenceSet, out) -> None:
    """Write w_1..w_m, layer and r columns; r is empty on inner points."""
    header = [f"w_{j}" for j in range(1, refset.m + 1)] + ["layer", "r"]
    out.write(",".join(header) + "\n")
    for w, layer, r in zip(refset.weights, refset.layers, refset.r):
        r_text = "" if np.isnan(r) else f"{r:.17g}"
        out.write(",".join(f"{v:.17g}" for v in w) + f",{layer},{r_text}\n")


def cmd_run(args) -> int:
    problem = get_problem(args.problem, args.m)
    G_max = args.gens if args.gens is not None else default_gmax(args.problem, args.m)
    refset = load_reference_set(args.refpoints) if args.refpoints else None
    cfg = AlgoConfig(
        G_max=G_max,
        seed=args.seed,
        variant=RankingVariant(args.variant),
        inner_angle_order=InnerAngleOrder(args.inner_angle_order),
        reference_set=refset,
    )
    logger.info(f"Running {args.variant} on {args.problem} m={args.m} seed={args.seed} for {G_max} generations")
    result = run_codea(problem, cfg)
    result.hv = normalized_hv(result.final_population, problem, samples=args.hv_samples)
    json_path, csv_path = ResultStore(args.output_dir).save_run(result)
    print(f"hv={result.hv:.17g}")
    print(f"result={json_path}")
    print(f"objectives={csv_path}")
    return 0


def cmd_experiment(args) -> int:
    spec = load_experiment_spec(args.config)
    if args.output_dir:
        spec.output_dir = Path(args.output_dir)
    setup_logging(args.log_level or spec.log_level, log_file=spec.output_dir / "experiment.log")
    outcomes = ExperimentRunner(spec).run()
    summarize(spec.output_dir, baseline=spec.baseline.value,
              variants=[v.value for v in spec.variants], instances=spec.problems)
    failed = [o for o in outcomes if not o.ok]
    for outcome in failed:
        logger.warning(f"Failed cell {outcome.problem}/{outcome.m} {outcome.variant} seed={outcome.seed}: {outcome.error}")
    print(f"cells={len(outcomes)} failed={len(failed)} summary={spec.output_dir / 'summary.csv'}")
    return 1 if failed else 0


def cmd_hv(args) -> int:
    F = read_objectives_csv(args.input, args.m)
    problem = get_problem(args.problem, F.shape[1])
    print(f"{normalized_hv(F, problem, samples=args.samples):.17g}")
    return 0


def cmd_refpoints(args) -> int:
    if args.H is not None:
        refset = build_reference_set(args.m, H=args.H)
    elif args.H1 is not None or args.H2 is not None:
        if args.H1 is None or args.H2 is None:
            raise ConfigError("--H1 and --H2 must be given together", field="H1/H2")
        refset = build_reference_set(args.m, layers=(args.H1, args.H2))
    else:
        refset = build_reference_set(args.m)
    if args.out:
        with open(args.out, "w") as f:
            write_reference_csv(refset, f)
        print(f"Wrote {len(refset)} reference points to {args.out}")
    else:
        write_reference_csv(refset, sys.stdout)
    return 0


def cmd_plotdata(args) -> int:
    F = read_objectives_csv(args.input, args.m)
    out = args.out or str(Path(args.input).with_name(Path(args.input).stem + "_plot.csv"))
    kind = write_plot_data(out, F)
    print(f"Wrote {kind} plot data to {out}")
    return 0


def cmd_summarize(args) -> int:
    rows = summarize(args.results_dir, baseline=args.baseline)
    print(f"Summarized {len(rows)} row(s) into {Path(args.results_dir) / 'summary.csv'}")
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="codea",
        description="Collaborative-decomposition evolutionary optimizer and benchmark harness",
    )
    parser.add_argument("--log-level", default=None, help="DEBUG, INFO, WARNING or ERROR")
    sub = parser.add_subparsers(dest="command", required=True)

    variants = [v.value for v in RankingVariant]
    orders = [o.value for o in InnerAngleOrder]

    run = sub.add_parser("run", help="Run one (problem, variant, seed) and persist the result")
    run.add_argument("--problem", required=True, help="Problem id, e.g. dtlz2, cdtlz3, wfg7")
    run.add_argument("--m", type=int, required=True, help="Number of objectives")
    run.add_argument("--variant", default="codea", choices=variants)
    run.add_argument("--gens", type=int, default=None, help="Generations (default: instance table)")
    run.add_argument("--seed", type=int, default=0)
    run.add_argument("--inner-angle-order", default="max", choices=orders)
    run.add_argument("--refpoints", default=None, help="CSV reference set replacing the default lattice")
    run.add_argument("--hv-samples", type=int, default=DEFAULT_MC_SAMPLES)
    run.add_argument("--output-dir", default=_default_output_dir())
    run.set_defaults(func=cmd_run)

    experiment = sub.add_parser("experiment", help="Run a YAML experiment and write the summary")
    experiment.add_argument("--config", required=True)
    experiment.add_argument("--output-dir", default=None)
    experiment.set_defaults(func=cmd_experiment)

    hv = sub.add_parser("hv", help="Normalized HV of an objectives CSV")
    hv.add_argument("--in", dest="input", required=True)
    hv.add_argument("--problem", required=True)
    hv.add_argument("--m", type=int, default=None, help="Objective count (default: from header)")
    hv.add_argument("--samples", type=int, default=DEFAULT_MC_SAMPLES)
    hv.set_defaults(func=cmd_hv)

    refpoints = sub.add_parser("refpoints", help="Dump a reference set as CSV")
    refpoints.add_argument("--m", type=int, required=True)
    refpoints.add_argument("--H", type=int, default=None, help="Single-layer divisions")
    refpoints.add_argument("--H1", type=int, default=None, help="Boundary-layer divisions")
    refpoints.add_argument("--H2", type=int, default=None, help="Inner-layer divisions")
    refpoints.add_argument("--out", default=None)
    refpoints.set_defaults(func=cmd_refpoints)

    plotdata = sub.add_parser("plotdata", help="Scatter (m=3) or long-format plot data from an objectives CSV")
    plotdata.add_argument("--in", dest="input", required=True)
    plotdata.add_argument("--m", type=int, default=None)
    plotdata.add_argument("--out", default=None)
    plotdata.set_defaults(func=cmd_plotdata)

    summary = sub.add_parser("summarize", help="Rebuild summary.csv / summary.txt from a results directory")
    summary.add_argument("--results-dir", default=_default_output_dir())
    summary.add_argument("--baseline", default=None, choices=variants)
    summary.set_defaults(func=cmd_summarize)
    return parser


def _writes_data_to_stdout(args) -> bool:
    return args.command == "hv" or (args.command == "refpoints" and not args.out)


def main(argv: Optional[List[str]] = None) -> int:
    """
    Parse arguments and dispatch to a subcommand.

    Returns:
        int: 0 on success, 2 on configuration errors, 1 on other failures
    """
    parser = build_parser()
    args = parser.parse_args(argv)
    if args.command != "experiment":
        stream = sys.stderr if _writes_data_to_stdout(args) else sys.stdout
        setup_logging(args.log_level or "INFO", stream=stream)
    try:
        return args.func(args)
    except ConfigError as e:
        print(f"Configuration error: {str(e)}", file=sys.stderr)
        return 2
    except (CodeaError, FileNotFoundError, ValueError) as e:
        print(f"Error: {str(e)}", file=sys.stderr)
        return 1

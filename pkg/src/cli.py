"""Command-line interface for the detection pipeline"""
import argparse
import json
import logging
import sys
from dataclasses import replace
from typing import Any, Dict, List, Optional, TextIO

import numpy as np

from .config import NMI_AVERAGES, SOLVERS, Config, parse_epsilon
from .exceptions import (
    ConfigError,
    DataError,
    EnumerationBudgetError,
    ParameterError,
    ValidationError,
)
from .graph import read_communities, read_edge_list, write_edge_list
from .hop_metric import HopMetric
from .models import RunReport
from .pipeline import SWEEP_AXES, parse_grid, run_pipeline, sweep, sweep_summary, sweep_to_dict

logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_DATA = 2


class _ArgumentParser(argparse.ArgumentParser):
    """Argument parser that reports usage problems as ParameterError"""

    def error(self, message: str) -> None:
        raise ParameterError(message)


def build_parser() -> argparse.ArgumentParser:
    """Command-line arguments; flags override config.json"""
    parser = _ArgumentParser(
        prog="hsgn",
        description="Community detection with HOP-enhanced symmetric graph-regularized NMF",
    )
    parser.add_argument("--edges", required=True, help="edge-list file (two identifiers per line)")
    parser.add_argument("--communities", help="ground-truth file, one community per line")
    parser.add_argument("--k", type=int, help="community count (defaults to the ground-truth count)")
    parser.add_argument("--config", help="JSON config file (default: $HSGN_CONFIG or config.json)")
    parser.add_argument("--verbose", action="store_true", help="log at DEBUG level")

    model = parser.add_argument_group("model")
    model.add_argument("--theta", type=float)
    model.add_argument("--lambda", dest="lam", type=float)
    model.add_argument("--beta", type=float)
    model.add_argument("--tol", type=float)
    model.add_argument("--max-iters", type=int)
    model.add_argument("--solver", choices=SOLVERS)

    rec = parser.add_argument_group("reconstruction")
    rec.add_argument("--epsilon", help="threshold > 1, or 'disabled'")
    rec.add_argument("--r", type=int, help="maximum path order (1..6)")
    rec.add_argument("--d", type=int, help="reconstruction passes (1..6)")
    rec.add_argument("--no-reconstruct", action="store_true")

    exp = parser.add_argument_group("experiment")
    exp.add_argument("--trials", type=int)
    exp.add_argument("--seed", type=int)
    exp.add_argument("--workers", type=int)
    exp.add_argument("--nmi-average", choices=NMI_AVERAGES)
    exp.add_argument("--sweep", action="append", choices=SWEEP_AXES)
    exp.add_argument("--grid", help="comma-separated sweep values")

    out = parser.add_argument_group("output")
    out.add_argument("--output", help="JSON report path")
    out.add_argument("--dump-enhanced", help="write the enhanced edge list here")
    out.add_argument("--dump-factors", help="write X of the best trial here")
    out.add_argument("--dump-partition", help="write 'node community' lines of the best trial here")
    out.add_argument("--dump-hop", help="write the HOP ratio table of the input graph here")
    return parser


def _settings(args: argparse.Namespace, config: Config, K: int):
    model = config.model_settings(K)
    overrides = {
        "theta": args.theta,
        "lam": args.lam,
        "beta": args.beta,
        "tol": args.tol,
        "max_iters": args.max_iters,
    }
    model = replace(model, **{k: v for k, v in overrides.items() if v is not None})

    reconstruction = config.reconstruction_settings()
    overrides = {"r": args.r, "d": args.d}
    if args.epsilon is not None:
        overrides["epsilon"] = parse_epsilon(args.epsilon)
    reconstruction = replace(reconstruction, **{k: v for k, v in overrides.items() if v is not None})

    experiment = config.experiment_settings()
    overrides = {
        "trials": args.trials,
        "seed": args.seed,
        "solver": args.solver,
        "workers": args.workers,
        "nmi_average": args.nmi_average,
    }
    experiment = replace(experiment, **{k: v for k, v in overrides.items() if v is not None})
    model = replace(model, seed=experiment.seed)

    for settings in (model, reconstruction, experiment):
        try:
            settings.validate()
        except ConfigError as e:
            raise ParameterError(str(e))
    return model, reconstruction, experiment


def _percent(mean: Optional[float], std: Optional[float]) -> str:
    if mean is None:
        return "n/a"
    return f"{100 * mean:.2f} ± {100 * std:.2f}"


def print_summary(report: RunReport, stream: Optional[TextIO] = None) -> None:
    """Print mean and std of NMI and Purity as percentages"""
    stream = stream or sys.stdout
    config = report.config
    stream.write(f"{config['label']} on n={config['n']}, m={config['m']}, K={config['K']}\n")
    rec = report.reconstruction
    stream.write(
        f"Reconstruction: {rec.executed} pass(es) executed, +{rec.total_added} edges "
        f"({rec.final_graph.m} total)\n"
    )
    agg = report.aggregate
    stream.write(f"NMI%:    {_percent(agg['nmi_mean'], agg['nmi_std'])}\n")
    stream.write(f"Purity%: {_percent(agg['purity_mean'], agg['purity_std'])}\n")


def _write_json(payload: Dict[str, Any], path: str) -> None:
    with open(path, "w", encoding="utf-8") as f:
        json.dump(payload, f, indent=2)
        f.write("\n")


def _write_outputs(args: argparse.Namespace, report: RunReport) -> None:
    if args.dump_enhanced:
        write_edge_list(report.reconstruction.final_graph, args.dump_enhanced)
        logger.info(f"Enhanced edge list written to {args.dump_enhanced}")
    best = report.best_trial
    if args.dump_factors:
        np.savetxt(args.dump_factors, best.factors, fmt="%.9g")
        logger.info(f"Factors of trial {best.trial} written to {args.dump_factors}")
    if args.dump_partition:
        node_ids = report.reconstruction.final_graph.node_ids
        with open(args.dump_partition, "w", encoding="utf-8") as f:
            for node_id, community in zip(node_ids, best.partition.assignment):
                f.write(f"{node_id} {community}\n")
        logger.info(f"Partition of trial {best.trial} written to {args.dump_partition}")


def run(args: argparse.Namespace) -> int:
    config = Config(args.config)
    graph = read_edge_list(args.edges)
    truth = read_communities(args.communities, graph) if args.communities else None

    K = args.k if args.k is not None else (truth.k_true if truth is not None else None)
    if K is None:
        raise ParameterError("--k is required when no --communities file is given")
    model, reconstruction, experiment = _settings(args, config, K)
    reconstruct = not args.no_reconstruct

    if args.dump_hop:
        table = HopMetric.build_hop_table(graph, reconstruction.r, budget=reconstruction.budget)
        with open(args.dump_hop, "w", encoding="utf-8") as f:
            table.dump(f, graph.node_ids)
        logger.info(f"HOP table with {len(table)} pairs written to {args.dump_hop}")

    if args.sweep:
        if len(args.sweep) > 1:
            raise ParameterError("Only one --sweep axis is allowed per invocation")
        if not args.grid:
            raise ParameterError("--sweep needs --grid")
        per_run = [flag for flag, value in (
            ("--dump-enhanced", args.dump_enhanced),
            ("--dump-factors", args.dump_factors),
            ("--dump-partition", args.dump_partition),
        ) if value]
        if per_run:
            raise ParameterError(f"{', '.join(per_run)} cannot be combined with --sweep")
        axis = args.sweep[0]
        values: List[Any] = parse_grid(axis, [v for v in args.grid.split(",") if v.strip()])
        results = sweep(
            graph, model, reconstruction, experiment, {axis: values},
            truth=truth, reconstruct=reconstruct,
        )
        if args.output:
            _write_json(sweep_to_dict(axis, results), args.output)
        sys.stdout.write(sweep_summary(axis, results).to_string(index=False) + "\n")
        return EXIT_OK

    report = run_pipeline(
        graph, model, reconstruction, experiment, truth=truth, reconstruct=reconstruct
    )
    if args.output:
        _write_json(report.to_dict(), args.output)
        logger.info(f"Report written to {args.output}")
    _write_outputs(args, report)
    print_summary(report)
    return EXIT_OK


def main(argv: Optional[List[str]] = None) -> int:
    """Parse arguments, run, and map failures to exit codes"""
    try:
        args = build_parser().parse_args(argv)
        if args.verbose:
            logging.getLogger().setLevel(logging.DEBUG)
        return run(args)
    except (ParameterError, ConfigError, ValidationError) as e:
        logger.error(f"{type(e).__name__}: {e}")
        sys.stderr.write(f"error: {e}\n")
        return EXIT_USAGE
    except (DataError, EnumerationBudgetError, OSError) as e:
        logger.error(f"{type(e).__name__}: {e}")
        sys.stderr.write(f"error: {e}\n")
        return EXIT_DATA

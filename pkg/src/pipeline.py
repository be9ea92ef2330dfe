"""End-to-end detection pipeline: reconstruct, train, assign, score"""
import logging
import math
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import replace
from typing import Any, Dict, List, Optional, Sequence, Tuple

import pandas as pd

from .config import (
    ExperimentSettings,
    ReconstructionSettings,
    SgnConfig,
    format_epsilon,
    parse_epsilon,
)
from .evaluation import nmi, purity
from .exceptions import ParameterError
from .models import Graph, GroundTruth, ReconstructionReport, RunReport, TrialRecord
from .reconstruct import reconstruct_iterative
from .solver import assign, sgn_train, snmf_train

logger = logging.getLogger(__name__)

SWEEP_AXES = ("theta", "lambda", "epsilon", "r", "d")


def model_label(solver: str, reconstructed: bool) -> str:
    """Report label of a solver and reconstruction combination"""
    if solver == "sgn":
        return "HSGN" if reconstructed else "HSGN-I"
    return "HSGN-II (SNMF)" if reconstructed else "SNMF"


class CommunityDetector:
    """Runs the seeded trial protocol on one network"""

    def __init__(
        self,
        graph: Graph,
        model: SgnConfig,
        reconstruction: ReconstructionSettings,
        experiment: ExperimentSettings,
        truth: Optional[GroundTruth] = None,
        reconstruct: bool = True,
    ):
        """Validate settings and bind the network"""
        model.validate()
        reconstruction.validate()
        experiment.validate()
        if truth is not None and truth.n != graph.n:
            raise ParameterError(
                f"Ground truth covers {truth.n} nodes but the graph has {graph.n}"
            )
        self.graph = graph
        self.truth = truth
        self.model = model
        self.reconstruction = reconstruction
        self.experiment = experiment
        self.reconstruct = reconstruct and reconstruction.enabled

    @property
    def label(self) -> str:
        return model_label(self.experiment.solver, self.reconstruct)

    def config_echo(self) -> Dict[str, Any]:
        return {
            "label": self.label,
            "solver": self.experiment.solver,
            "reconstruct": self.reconstruct,
            "K": self.model.K,
            "theta": self.model.theta,
            "lambda": self.model.lam,
            "beta": self.model.beta,
            "tol": self.model.tol,
            "max_iters": self.model.max_iters,
            "r": self.reconstruction.r,
            "d": self.reconstruction.d,
            "epsilon": format_epsilon(self.reconstruction.epsilon) if self.reconstruct else "disabled",
            "trials": self.experiment.trials,
            "seed": self.experiment.seed,
            "nmi_average": self.experiment.nmi_average,
            "n": self.graph.n,
            "m": self.graph.m,
        }

    def enhance(self) -> ReconstructionReport:
        """Run the iterative reconstruction, or record zero passes when disabled"""
        if not self.reconstruct:
            return ReconstructionReport(passes=[], final_graph=self.graph, executed=0)
        settings = self.reconstruction
        return reconstruct_iterative(
            self.graph, settings.r, settings.epsilon, settings.d, budget=settings.budget
        )

    def run_trial(self, trial: int, enhanced: Graph) -> TrialRecord:
        """Train one seeded model on the enhanced network and score it"""
        seed = self.experiment.seed + trial
        started = time.perf_counter()

        if self.experiment.solver == "sgn":
            cfg = self.model.with_seed(seed)
            factors, trace = sgn_train(enhanced, cfg)
            X = factors.X
        else:
            X, trace = snmf_train(
                enhanced, self.model.K, seed, tol=self.model.tol, max_iters=self.model.max_iters
            )

        objective = float(trace[-1])
        partition = assign(X)
        wall_ms = (time.perf_counter() - started) * 1000.0

        nmi_value = purity_value = None
        if self.truth is not None:
            nmi_value = nmi(partition, self.truth, self.experiment.nmi_average)
            purity_value = purity(partition, self.truth)

        record = TrialRecord(
            trial=trial,
            seed=seed,
            iters=int(trace.size),
            objective=objective,
            nmi=nmi_value,
            purity=purity_value,
            wall_ms=wall_ms,
            partition=partition,
            factors=X,
        )
        if nmi_value is not None:
            logger.info(
                f"Trial {trial} (seed {seed}): {record.iters} iterations, "
                f"objective={objective:.6f}, NMI={nmi_value:.4f}, Purity={purity_value:.4f}"
            )
        else:
            logger.info(
                f"Trial {trial} (seed {seed}): {record.iters} iterations, objective={objective:.6f}"
            )
        return record

    @staticmethod
    def aggregate(trials: Sequence[TrialRecord]) -> Dict[str, Any]:
        """Mean and population std of the per-trial scores"""
        frame = pd.DataFrame([t.to_dict() for t in trials])
        result: Dict[str, Any] = {"std_convention": "population"}
        for metric in ("nmi", "purity"):
            values = frame[metric]
            if values.isna().any():
                result[f"{metric}_mean"] = None
                result[f"{metric}_std"] = None
            else:
                result[f"{metric}_mean"] = float(values.astype(float).mean())
                result[f"{metric}_std"] = float(values.astype(float).std(ddof=0))
        return result

    def run(self, enhancement: Optional[ReconstructionReport] = None) -> RunReport:
        """Reconstruct (unless disabled), then train, assign and score every trial"""
        logger.info(f"Running {self.label} with K={self.model.K} on n={self.graph.n}, m={self.graph.m}")
        report = enhancement if enhancement is not None else self.enhance()
        enhanced = report.final_graph

        trials = range(self.experiment.trials)
        if self.experiment.workers > 1:
            with ThreadPoolExecutor(max_workers=self.experiment.workers) as pool:
                records = list(pool.map(lambda t: self.run_trial(t, enhanced), trials))
        else:
            records = [self.run_trial(t, enhanced) for t in trials]

        return RunReport(
            config=self.config_echo(),
            reconstruction=report,
            trials=records,
            aggregate=self.aggregate(records),
        )


def run_pipeline(
    graph: Graph,
    model: SgnConfig,
    reconstruction: ReconstructionSettings,
    experiment: ExperimentSettings,
    truth: Optional[GroundTruth] = None,
    reconstruct: bool = True,
) -> RunReport:
    """Reconstruct, then train, assign and score every seeded trial"""
    detector = CommunityDetector(
        graph, model, reconstruction, experiment, truth=truth, reconstruct=reconstruct
    )
    return detector.run()


def parse_grid(axis: str, values: Sequence[str]) -> List[Any]:
    """Convert textual grid values to the axis' type"""
    parsed: List[Any] = []
    for raw in values:
        try:
            if axis in ("r", "d"):
                parsed.append(int(raw))
            elif axis == "epsilon":
                parsed.append(parse_epsilon(raw))
            else:
                parsed.append(float(raw))
        except (ValueError, TypeError):
            raise ParameterError(f"Invalid {axis} grid value: {raw}")
    if not parsed:
        raise ParameterError("Sweep grid is empty")
    return parsed


def _grid_key(value: Any) -> str:
    """Textual form of a grid value for reports"""
    if isinstance(value, float) and math.isinf(value):
        return "disabled"
    return str(value)


def sweep(
    graph: Graph,
    model: SgnConfig,
    reconstruction: ReconstructionSettings,
    experiment: ExperimentSettings,
    grids: Dict[str, Sequence[Any]],
    truth: Optional[GroundTruth] = None,
    reconstruct: bool = True,
) -> List[Tuple[Any, RunReport]]:
    """Run the pipeline once per grid value of a single parameter.

    Enhanced networks are shared between grid points with identical
    reconstruction settings.
    """
    if len(grids) != 1:
        raise ParameterError(f"Exactly one sweep axis is allowed, got {sorted(grids)}")
    axis, values = next(iter(grids.items()))
    if axis not in SWEEP_AXES:
        raise ParameterError(f"Unknown sweep axis: {axis}")

    cache: Dict[Tuple[bool, int, int, float], ReconstructionReport] = {}
    results: List[Tuple[Any, RunReport]] = []
    for value in values:
        point_model = model
        point_rec = reconstruction
        if axis == "theta":
            point_model = replace(model, theta=float(value))
        elif axis == "lambda":
            point_model = replace(model, lam=float(value))
        elif axis == "epsilon":
            point_rec = replace(reconstruction, epsilon=float(value))
        else:
            point_rec = replace(reconstruction, **{axis: int(value)})

        detector = CommunityDetector(
            graph, point_model, point_rec, experiment, truth=truth, reconstruct=reconstruct
        )
        key = (detector.reconstruct, point_rec.r, point_rec.d, point_rec.epsilon)
        if key not in cache:
            cache[key] = detector.enhance()
        logger.info(f"Sweep {axis}={_grid_key(value)}")
        results.append((value, detector.run(enhancement=cache[key])))
    return results


def sweep_to_dict(axis: str, results: Sequence[Tuple[Any, RunReport]]) -> Dict[str, Any]:
    """JSON form of a sweep: axis, grid values and one report per value"""
    return {
        "sweep": {
            "axis": axis,
            "values": [_grid_key(v) for v, _ in results],
            "reports": {_grid_key(v): report.to_dict() for v, report in results},
        }
    }


def sweep_summary(axis: str, results: Sequence[Tuple[Any, RunReport]]) -> pd.DataFrame:
    """One row per grid value with the aggregate scores"""
    rows = []
    for value, report in results:
        row = {axis: _grid_key(value)}
        row.update({k: v for k, v in report.aggregate.items() if k != "std_convention"})
        rows.append(row)
    return pd.DataFrame(rows)

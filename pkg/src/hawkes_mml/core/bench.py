"""
Benchmark harness for synthetic graph-recovery experiments.

Each trial draws a ground-truth model, simulates one path, runs every
configured method on it and scores the inferred graph. Randomness for trial
t comes from SeedSequence([seed, t, stream]) with separate streams for the
truth, the simulated path and the methods, so adding a method never shifts
the data a trial sees.
"""

import math
import sys
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass, field
from typing import Any, Dict, List, Optional, Sequence, Tuple, Union

import numpy as np
import pandas as pd
from tqdm import tqdm

from hawkes_mml.config.constants import (
    CRITERIA,
    DEFAULT_LATTICE_MODE,
    DESK_TRIALS,
    PRIOR_PRESETS,
    SETTING_DEFAULTS,
    SETTINGS,
)
from hawkes_mml.core.estimation import OptimizerConfig
from hawkes_mml.core.events import EventData, Graph, HawkesModel
from hawkes_mml.core.metrics import ScoreReport, aggregate, score
from hawkes_mml.core.priors import PriorSpec
from hawkes_mml.core.search import SearchConfig, run_search
from hawkes_mml.core.simulate import SimConfig, simulate
from hawkes_mml.utils.errors import HawkesMMLError, ValidationError
from hawkes_mml.utils.logging import get_logger
from hawkes_mml.utils.validation import validate_horizon, validate_max_parents, validate_workers

logger = get_logger("bench")

STREAM_TRUTH = 0
STREAM_SIMULATION = 1
STREAM_METHODS = 2

Range = Union[float, List[float]]


def _check_range(name: str, value: Range) -> Range:
    if isinstance(value, (list, tuple)):
        if len(value) != 2 or not 0 <= value[0] <= value[1]:
            raise ValidationError(f"{name} range must be [low, high] with 0 <= low <= high")
        return [float(value[0]), float(value[1])]
    return float(value)


@dataclass(frozen=True)
class SweepSpec:
    """Log-spaced grid over one prior hyperparameter."""

    kind: str = "uniform"
    low: float = 1.0
    high: float = 1e5
    points: int = 11

    def __post_init__(self) -> None:
        PriorSpec(self.kind, self.low)
        PriorSpec(self.kind, self.high)
        if self.points < 1 or self.low > self.high:
            raise ValidationError("Sweep grid needs points >= 1 and low <= high")

    def grid(self) -> np.ndarray:
        return np.logspace(math.log10(self.low), math.log10(self.high), self.points)

    @classmethod
    def from_dict(cls, data: Dict[str, Any]) -> "SweepSpec":
        return cls(
            kind=data.get("kind", "uniform"),
            low=float(data.get("low", 1.0)),
            high=float(data.get("high", 1e5)),
            points=int(data.get("points", 11)),
        )


@dataclass(frozen=True)
class ExperimentSpec:
    """
    One synthetic experiment.

    alpha and mu are either a constant or a [low, high] range drawn
    uniformly per edge / per node. Unset fields take the defaults of the
    setting.
    """

    name: str
    setting: str
    p: int
    horizon: float
    trials: int = DESK_TRIALS
    methods: Tuple[str, ...] = ("mml-u", "mml-e", "bic", "aic", "mle-ms", "mle-thr", "rand")
    prior_preset: str = "sparse"
    priors: Dict[str, float] = field(default_factory=dict)
    seed: int = 0
    beta: float = 1.0
    alpha: Range = 0.55
    mu: Range = 0.5
    edge_probability: float = 0.3
    max_parents: Optional[int] = None
    lattice: str = DEFAULT_LATTICE_MODE
    optimizer: OptimizerConfig = field(default_factory=OptimizerConfig)
    sweep: Optional[SweepSpec] = None

    def __post_init__(self) -> None:
        if self.setting not in SETTINGS:
            raise ValidationError(
                f"Unknown setting '{self.setting}', expected one of {', '.join(SETTINGS)}"
            )
        if self.p < 1 or self.trials < 1:
            raise ValidationError("Experiments need p >= 1 and trials >= 1")
        validate_horizon(self.horizon)
        validate_max_parents(self.max_parents, self.p)
        unknown = [m for m in self.methods if m not in CRITERIA]
        if unknown:
            raise ValidationError(f"Unknown method(s) {unknown}; known: {', '.join(CRITERIA)}")
        if self.prior_preset not in PRIOR_PRESETS:
            raise ValidationError(f"Unknown prior preset '{self.prior_preset}'")
        if not 0.0 <= self.edge_probability <= 1.0:
            raise ValidationError("edge_probability must lie in [0, 1]")
        object.__setattr__(self, "alpha", _check_range("alpha", self.alpha))
        object.__setattr__(self, "mu", _check_range("mu", self.mu))

    @classmethod
    def from_dict(cls, data: Dict[str, Any], name: Optional[str] = None) -> "ExperimentSpec":
        """Create a spec from a parsed YAML mapping, filling setting defaults."""
        try:
            setting = data["setting"]
            defaults = SETTING_DEFAULTS.get(setting, {})
            methods = data.get("methods")
            sweep = data.get("sweep")
            return cls(
                name=name or data.get("name", setting),
                setting=setting,
                p=int(data["p"]),
                horizon=float(data["horizon"]),
                trials=int(data.get("trials", DESK_TRIALS)),
                methods=tuple(methods) if methods else cls.methods,
                prior_preset=data.get("prior_preset", defaults.get("prior_preset", "sparse")),
                priors={k: float(v) for k, v in data.get("priors", {}).items()},
                seed=int(data.get("seed", 0)),
                beta=float(data.get("beta", 1.0)),
                alpha=data.get("alpha", defaults.get("alpha", 0.55)),
                mu=data.get("mu", defaults.get("mu", 0.5)),
                edge_probability=float(
                    data.get("edge_probability", defaults.get("edge_probability", 0.3))
                ),
                max_parents=data.get("max_parents"),
                lattice=data.get("lattice", DEFAULT_LATTICE_MODE),
                optimizer=OptimizerConfig.from_dict(data.get("optimizer", {})),
                sweep=SweepSpec.from_dict(sweep) if sweep else None,
            )
        except KeyError as e:
            raise ValidationError(f"Experiment spec is missing '{e.args[0]}'") from None

    def to_dict(self) -> Dict[str, Any]:
        data = asdict(self)
        data["methods"] = list(self.methods)
        data["optimizer"] = self.optimizer.to_dict()
        return data

    def prior_for(self, kind: str) -> PriorSpec:
        if kind in self.priors:
            return PriorSpec(kind, self.priors[kind])
        return PriorSpec.from_preset(kind, self.prior_preset)

    def search_config(self, method: str, seed: int) -> SearchConfig:
        prior = None
        if method == "mml-u":
            prior = self.prior_for("uniform")
        elif method == "mml-e":
            prior = self.prior_for("exponential")
        return SearchConfig(
            criterion=method,
            prior=prior,
            max_parents=self.max_parents,
            optimizer=self.optimizer,
            workers=1,
            lattice=self.lattice,
            seed=seed,
        )


def trial_rng(seed: int, trial: int, stream: int) -> np.random.Generator:
    return np.random.default_rng(np.random.SeedSequence([seed, trial, stream]))


def trial_seed(seed: int, trial: int, stream: int) -> int:
    """Integer seed for components that take one (simulator, selectors)."""
    state = np.random.SeedSequence([seed, trial, stream]).generate_state(1, dtype=np.uint32)
    return int(state[0])


def _draw(value: Range, rng: np.random.Generator, size: Any) -> np.ndarray:
    if isinstance(value, list):
        return rng.uniform(value[0], value[1], size=size)
    return np.full(size, float(value))


def make_truth(spec: ExperimentSpec, trial: int) -> Tuple[HawkesModel, Graph]:
    """
    Ground-truth model and graph of one trial.

    cascade: self-excitation of node 1 and edges i -> i+1.
    single-input: exactly one random parent per node.
    bernoulli: self-excitation everywhere, other edges with probability q.
    """
    rng = trial_rng(spec.seed, trial, STREAM_TRUTH)
    p = spec.p
    adjacency = np.zeros((p, p), dtype=np.int8)
    if spec.setting == "cascade":
        adjacency[0, 0] = 1
        adjacency[np.arange(1, p), np.arange(p - 1)] = 1
    elif spec.setting == "single-input":
        adjacency[np.arange(p), rng.integers(0, p, size=p)] = 1
    else:
        adjacency[:] = rng.uniform(size=(p, p)) < spec.edge_probability
        np.fill_diagonal(adjacency, 1)

    alpha = np.where(adjacency == 1, _draw(spec.alpha, rng, (p, p)), 0.0)
    mu = _draw(spec.mu, rng, p)
    model = HawkesModel(mu=mu, alpha=alpha, beta=np.full((p, p), spec.beta))
    return model, Graph(adjacency)


def _simulate_trial(spec: ExperimentSpec, trial: int) -> Tuple[HawkesModel, Graph, EventData]:
    model, truth = make_truth(spec, trial)
    data = simulate(SimConfig(model, spec.horizon, trial_seed(spec.seed, trial, STREAM_SIMULATION)))
    return model, truth, data


def _graph_label(graph: Graph) -> str:
    return "/".join(graph.row(i).label() for i in range(graph.dims))


def _run_method(
    spec: ExperimentSpec, config: SearchConfig, data: EventData, truth: Graph
) -> Tuple[Graph, ScoreReport, int, float]:
    started = time.perf_counter()
    result = run_search(data, config, spec.beta)
    runtime = time.perf_counter() - started
    evaluated = sum(n.evaluated for n in result.nodes)
    return result.graph, score(result.graph, truth), evaluated, runtime


def _failed_row(trial: int, method: str, message: str) -> Dict[str, Any]:
    return {
        "trial": trial,
        "method": method,
        "status": "failed",
        "precision": math.nan,
        "recall": math.nan,
        "f1": math.nan,
        "tp": math.nan,
        "predicted": math.nan,
        "truth": math.nan,
        "evaluated": math.nan,
        "runtime": math.nan,
        "events": math.nan,
        "graph": "",
        "message": message,
    }


def run_trial(spec: ExperimentSpec, trial: int) -> List[Dict[str, Any]]:
    """Simulate one trial and evaluate every method; failures become rows."""
    try:
        _, truth, data = _simulate_trial(spec, trial)
    except HawkesMMLError as e:
        logger.warning(f"Trial {trial}: simulation failed: {e}")
        return [_failed_row(trial, m, f"simulation: {e}") for m in spec.methods]

    rows = []
    method_seed = trial_seed(spec.seed, trial, STREAM_METHODS)
    for method in spec.methods:
        try:
            graph, report, evaluated, runtime = _run_method(
                spec, spec.search_config(method, method_seed), data, truth
            )
        except HawkesMMLError as e:
            logger.warning(f"Trial {trial}, method {method} failed: {e}")
            rows.append(_failed_row(trial, method, str(e)))
            continue
        rows.append(
            {
                "trial": trial,
                "method": method,
                "status": "ok",
                "precision": report.precision,
                "recall": report.recall,
                "f1": report.f1,
                "tp": report.tp_count,
                "predicted": report.predicted_count,
                "truth": report.truth_count,
                "evaluated": evaluated,
                "runtime": runtime,
                "events": data.total_events,
                "graph": _graph_label(graph),
                "message": "",
            }
        )
    return rows


def _trial_task(args: Tuple[ExperimentSpec, int]) -> List[Dict[str, Any]]:
    return run_trial(*args)


def _map_trials(
    spec: ExperimentSpec, task: Any, workers: int, progress: bool, label: str
) -> List[Any]:
    """Run task(spec, trial) for every trial, results ordered by trial index."""
    validate_workers(workers)
    args = [(spec, trial) for trial in range(spec.trials)]
    bar = tqdm(total=spec.trials, desc=label, file=sys.stderr, disable=not progress)
    results: List[Any] = []
    try:
        if workers == 1:
            for item in args:
                results.append(task(item))
                bar.update(1)
        else:
            with ProcessPoolExecutor(max_workers=workers) as pool:
                for result in pool.map(task, args):
                    results.append(result)
                    bar.update(1)
    finally:
        bar.close()
    return results


@dataclass
class ExperimentResult:
    """Per-trial rows and the per-method summary of one experiment."""

    spec: ExperimentSpec
    trials: pd.DataFrame
    summary: pd.DataFrame
    workers: int = 1


def summarize(trials: pd.DataFrame, methods: Sequence[str], workers: int = 1) -> pd.DataFrame:
    """One summary row per method, failed trials excluded and counted."""
    rows = []
    for method in methods:
        subset = trials[trials["method"] == method]
        ok = subset[subset["status"] == "ok"]
        row: Dict[str, Any] = {
            "method": method,
            "mean_f1": math.nan,
            "std_f1": math.nan,
            "mean_tp_rate": math.nan,
            "mean_runtime": math.nan,
            "trials_ok": int(len(ok)),
            "trials_failed": int(len(subset) - len(ok)),
            "workers": workers,
        }
        if len(ok):
            reports = [
                ScoreReport(r.precision, r.recall, r.f1, int(r.tp), int(r.predicted), int(r.truth))
                for r in ok.itertuples()
            ]
            stats = aggregate(reports)
            row.update(
                mean_f1=stats.mean_f1,
                std_f1=stats.std_f1,
                mean_tp_rate=stats.mean_tp_rate,
                mean_runtime=float(ok["runtime"].mean()),
            )
        rows.append(row)
    return pd.DataFrame(rows)


def run_experiment(
    spec: ExperimentSpec, workers: int = 1, progress: bool = False
) -> ExperimentResult:
    """
    Run every trial of an experiment.

    Trials are spread over a process pool; each trial's search runs with a
    single worker. The tables depend only on the ExperimentSpec, not on the pool size.
    """
    logger.info(
        f"Experiment {spec.name}: {spec.setting}, p={spec.p}, T={spec.horizon}, "
        f"beta={spec.beta}, {spec.trials} trials, methods {', '.join(spec.methods)}"
    )
    per_trial = _map_trials(spec, _trial_task, workers, progress, spec.name)
    trials = pd.DataFrame([row for rows in per_trial for row in rows])
    summary = summarize(trials, spec.methods, workers)
    for row in summary.itertuples():
        logger.info(
            f"{spec.name} {row.method}: F1 {row.mean_f1:.3f} ({row.std_f1:.3f}), "
            f"{row.trials_ok} ok, {row.trials_failed} failed"
        )
    return ExperimentResult(spec=spec, trials=trials, summary=summary, workers=workers)


def _sweep_task(args: Tuple[ExperimentSpec, int]) -> List[Optional[ScoreReport]]:
    spec, trial = args
    sweep = spec.sweep or SweepSpec()
    try:
        _, truth, data = _simulate_trial(spec, trial)
    except HawkesMMLError as e:
        logger.warning(f"Trial {trial}: simulation failed: {e}")
        return [None] * sweep.points

    method = "mml-u" if sweep.kind == "uniform" else "mml-e"
    base = spec.search_config(method, trial_seed(spec.seed, trial, STREAM_METHODS))
    reports: List[Optional[ScoreReport]] = []
    for value in sweep.grid():
        config = SearchConfig.from_dict(
            {**base.to_dict(), "prior": {"kind": sweep.kind, "value": float(value)}}
        )
        try:
            reports.append(score(run_search(data, config, spec.beta).graph, truth))
        except HawkesMMLError as e:
            logger.warning(f"Trial {trial}, {sweep.kind}={value:g} failed: {e}")
            reports.append(None)
    return reports


def prior_sweep(
    spec: ExperimentSpec,
    sweep: Optional[SweepSpec] = None,
    workers: int = 1,
    progress: bool = False,
) -> pd.DataFrame:
    """
    F1 and TP rate (recall) as functions of a prior hyperparameter.

    Every grid point reuses the same simulated trials.

    Returns:
        DataFrame with columns hyperparameter, mean_f1, std_f1,
        mean_tp_rate, trials_ok
    """
    sweep = sweep or spec.sweep or SweepSpec()
    spec = ExperimentSpec.from_dict({**spec.to_dict(), "sweep": asdict(sweep)}, name=spec.name)
    logger.info(
        f"Sweep {spec.name}: {sweep.kind} prior over {sweep.points} values "
        f"in [{sweep.low:g}, {sweep.high:g}], {spec.trials} trials"
    )
    per_trial = _map_trials(spec, _sweep_task, workers, progress, f"{spec.name} sweep")
    rows = []
    for index, value in enumerate(sweep.grid()):
        reports = [r[index] for r in per_trial if r[index] is not None]
        stats = aggregate(reports) if reports else None
        rows.append(
            {
                "hyperparameter": float(value),
                "mean_f1": stats.mean_f1 if stats else math.nan,
                "std_f1": stats.std_f1 if stats else math.nan,
                "mean_tp_rate": stats.mean_tp_rate if stats else math.nan,
                "trials_ok": len(reports),
            }
        )
    return pd.DataFrame(rows)

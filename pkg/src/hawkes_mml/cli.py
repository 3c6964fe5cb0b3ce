"""Command-line entry point for hawkes-mml."""

import argparse
import json
import os
import sys
from dataclasses import asdict
from pathlib import Path
from typing import Any, Callable, Dict, List, NoReturn, Optional, Sequence, TypeVar

import numpy as np

from hawkes_mml import __version__
from hawkes_mml.config.constants import (
    DEFAULT_MAX_EVENTS,
    DESK_TRIALS,
    ENV_LOG_LEVEL,
    ENV_WORKERS,
    EXIT_OK,
    FULL_TRIALS,
    LATTICE_MODES,
    MML_PRIOR_KINDS,
    OPTIMIZER_METHODS,
    PRIOR_PRESETS,
    RNG_ALGORITHM,
    SETTINGS,
)
from hawkes_mml.config.settings import ConfigLoader, Settings
from hawkes_mml.core import io
from hawkes_mml.core.bench import (
    ExperimentSpec,
    SweepSpec,
    make_truth,
    prior_sweep,
    run_experiment,
)
from hawkes_mml.core.criteria import kappa_table
from hawkes_mml.core.estimation import OptimizerConfig
from hawkes_mml.core.ingest import extract_events, load_csv
from hawkes_mml.core.manifest import RunManifest
from hawkes_mml.core.metrics import score
from hawkes_mml.core.priors import PRIOR_KINDS, PriorSpec
from hawkes_mml.core.search import SearchConfig, run_search
from hawkes_mml.core.simulate import SimConfig, simulate
from hawkes_mml.selectors.registry import default_registry, get_selector
from hawkes_mml.utils.errors import HawkesMMLError, UsageError, ValidationError, exit_code_for
from hawkes_mml.utils.formatting import (
    format_adjacency,
    format_event_counts,
    format_score,
    format_table,
)
from hawkes_mml.utils.logging import get_logger, setup_logging
from hawkes_mml.utils.validation import (
    validate_dimension,
    validate_horizon,
    validate_max_parents,
    validate_positive,
    validate_quantile,
    validate_workers,
)

logger = get_logger("cli")

T = TypeVar("T")


class ArgumentParser(argparse.ArgumentParser):
    """ArgumentParser that raises UsageError instead of exiting."""

    def error(self, message: str) -> NoReturn:
        raise UsageError(f"{self.prog}: {message}")


def usage_check(check: Callable[..., T], *args: Any) -> T:
    """Run a validator on a flag value; failures are usage errors."""
    try:
        return check(*args)
    except ValidationError as e:
        raise UsageError(str(e)) from None


def _emit(text: str) -> None:
    sys.stdout.write(text.rstrip("\n") + "\n")
    sys.stdout.flush()


def _resolve_workers(args: argparse.Namespace, settings: Settings) -> int:
    """--workers, then HAWKES_MML_WORKERS, then the config file, then all cores."""
    workers = args.workers
    if workers is None and os.environ.get(ENV_WORKERS):
        try:
            workers = int(os.environ[ENV_WORKERS])
        except ValueError:
            raise UsageError(f"{ENV_WORKERS} must be an integer") from None
    if workers is None:
        workers = settings.workers
    if workers is None:
        workers = os.cpu_count() or 1
    return usage_check(validate_workers, workers)


def _optimizer(args: argparse.Namespace, settings: Settings) -> OptimizerConfig:
    data = settings.optimizer.to_dict()
    if args.optimizer is not None:
        data["method"] = args.optimizer
    if args.restarts is not None:
        data["restarts"] = args.restarts
    return usage_check(OptimizerConfig.from_dict, data)


def _prior(args: argparse.Namespace, settings: Settings, criterion: str) -> Optional[PriorSpec]:
    """Prior for the MML criteria: explicit kind/value, else the preset for the criterion."""
    kind = MML_PRIOR_KINDS.get(criterion)
    if kind is None:
        if args.prior or args.prior_value is not None:
            logger.warning(f"Prior flags have no effect on {criterion}")
        return None
    if args.prior and args.prior != kind:
        raise UsageError(f"{criterion} takes a {kind} prior, not --prior {args.prior}")
    if args.prior_value is not None:
        return usage_check(PriorSpec, kind, args.prior_value)
    return usage_check(PriorSpec.from_preset, kind, args.prior_preset or settings.prior_preset)


def _manifest(command: str, argv: Sequence[str]) -> RunManifest:
    return RunManifest(command=command, argv=list(argv))


def cmd_simulate(args: argparse.Namespace, settings: Settings, argv: Sequence[str]) -> int:
    """Simulate one path; writes events.csv, model.json and manifest.json."""
    horizon = usage_check(validate_horizon, args.horizon)
    if args.model:
        model = io.read_model(args.model)
    elif args.setting:
        spec = usage_check(
            ExperimentSpec.from_dict,
            {"setting": args.setting, "p": args.p, "horizon": horizon,
             "beta": args.beta, "seed": args.seed},
        )
        model, _ = make_truth(spec, 0)
    else:
        raise UsageError("simulate needs --model or --setting")

    config = usage_check(
        SimConfig, model, horizon, args.seed, args.max_events or settings.max_events
    )
    data = simulate(config)

    out = Path(args.out)
    manifest = _manifest("simulate", argv)
    manifest.seed = args.seed
    manifest.config = config.to_dict()
    events = io.write_events(data, out / "events.csv")
    manifest.add_output("events", events)
    manifest.add_output("events_meta", io.events_meta_path(events))
    manifest.add_output("model", io.write_model(model, out / "model.json"))
    manifest.finish()
    manifest.write(out)
    logger.info(f"Simulated {data.total_events} events ({RNG_ALGORITHM}, seed {args.seed})")
    _emit(format_event_counts([str(i + 1) for i in range(data.dims)], data.counts))
    return EXIT_OK


def cmd_infer(args: argparse.Namespace, settings: Settings, argv: Sequence[str]) -> int:
    """Infer the graph; writes graph.json, diagnostics.csv and manifest.json."""
    horizon = usage_check(validate_horizon, args.horizon)
    criterion = args.criterion or settings.criterion
    get_selector(criterion)
    dims = usage_check(validate_dimension, args.dims) if args.dims is not None else None
    model = io.read_model(args.model) if args.model else None
    if model is not None:
        if dims is not None and dims != model.dims:
            raise UsageError(f"--dims {dims} disagrees with the {model.dims}-node --model")
        dims = model.dims
    data = io.read_events(args.events, horizon, dims)

    max_parents = args.max_parents if args.max_parents is not None else settings.max_parents
    usage_check(validate_max_parents, max_parents, data.dims)
    if model is not None:
        beta: Any = model.beta
    else:
        beta = usage_check(validate_positive, "--beta", args.beta)

    config = SearchConfig(
        criterion=criterion,
        prior=_prior(args, settings, criterion),
        max_parents=max_parents,
        optimizer=_optimizer(args, settings),
        workers=_resolve_workers(args, settings),
        lattice=args.lattice or settings.lattice,
        threshold=args.threshold if args.threshold is not None else settings.threshold,
        seed=args.seed,
    )
    logger.info(
        f"Inferring {data.dims}-node graph from {data.total_events} events "
        f"with {criterion} on {config.workers} worker(s)"
    )
    result = run_search(data, config, beta)

    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    manifest = _manifest("infer", argv)
    manifest.seed = args.seed
    manifest.config = {**config.to_dict(), "horizon": horizon, "dims": data.dims,
                       "beta": np.asarray(beta).tolist()}
    manifest.add_output("graph", io.write_graph(result.graph, out / "graph.json"))
    diagnostics = out / "diagnostics.csv"
    result.diagnostics().to_csv(diagnostics, index=False, float_format="%.12g")
    manifest.add_output("diagnostics", diagnostics)
    manifest.finish()
    manifest.write(out)

    _emit(format_adjacency(result.graph.adjacency.tolist()))
    if criterion in ("mml-u", "mml-e"):
        logger.info(f"Total message length {result.message_length():.6f} nats")
    return EXIT_OK


def cmd_score(args: argparse.Namespace, settings: Settings, argv: Sequence[str]) -> int:
    """Score a predicted graph against the truth; prints the report."""
    predicted = io.read_graph(args.predicted)
    if args.truth:
        truth = io.read_graph(args.truth)
    elif args.truth_model:
        truth = io.read_model(args.truth_model).graph()
    else:
        raise UsageError("score needs --truth or --truth-model")
    report = score(predicted, truth)
    _emit(json.dumps(report.to_dict()) if args.json else format_score(report))
    return EXIT_OK


def _experiment(args: argparse.Namespace, loader: ConfigLoader) -> ExperimentSpec:
    spec = loader.load_experiment(args.experiment)
    overrides: Dict[str, Any] = {}
    if args.full:
        overrides["trials"] = FULL_TRIALS
    if args.trials is not None:
        overrides["trials"] = args.trials
    if args.seed is not None:
        overrides["seed"] = args.seed
    if getattr(args, "methods", None):
        overrides["methods"] = args.methods
    if not overrides:
        return spec
    return usage_check(ExperimentSpec.from_dict, {**spec.to_dict(), **overrides}, spec.name)


def cmd_bench(
    args: argparse.Namespace, settings: Settings, argv: Sequence[str], loader: ConfigLoader
) -> int:
    """Run an experiment preset; writes summary.csv, trials.csv and manifest.json."""
    spec = _experiment(args, loader)
    workers = _resolve_workers(args, settings)
    result = run_experiment(spec, workers=workers, progress=not args.no_progress)

    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    manifest = _manifest("bench", argv)
    manifest.seed = spec.seed
    manifest.config = {**spec.to_dict(), "workers": workers}
    summary = out / "summary.csv"
    trials = out / "trials.csv"
    result.summary.to_csv(summary, index=False)
    result.trials.to_csv(trials, index=False)
    manifest.add_output("summary", summary)
    manifest.add_output("trials", trials)
    manifest.finish()
    manifest.write(out)
    _emit(format_table(result.summary))
    return EXIT_OK


def cmd_sweep(
    args: argparse.Namespace, settings: Settings, argv: Sequence[str], loader: ConfigLoader
) -> int:
    """Prior-hyperparameter sweep; writes sweep.csv and manifest.json."""
    spec = _experiment(args, loader)
    base = spec.sweep or SweepSpec()
    sweep = usage_check(
        SweepSpec,
        args.kind or base.kind,
        args.low if args.low is not None else base.low,
        args.high if args.high is not None else base.high,
        args.points if args.points is not None else base.points,
    )
    workers = _resolve_workers(args, settings)
    table = prior_sweep(spec, sweep, workers=workers, progress=not args.no_progress)

    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    path = out / "sweep.csv"
    table.to_csv(path, index=False)
    manifest = _manifest("sweep", argv)
    manifest.seed = spec.seed
    manifest.config = {**spec.to_dict(), "sweep": asdict(sweep), "workers": workers}
    manifest.add_output("sweep", path)
    manifest.finish()
    manifest.write(out)
    _emit(format_table(table))
    return EXIT_OK


def cmd_ingest(args: argparse.Namespace, settings: Settings, argv: Sequence[str]) -> int:
    """Extract shock events from a series file; writes events.csv and manifest.json."""
    window = args.window if args.window is not None else settings.ingest.window
    quantile = usage_check(
        validate_quantile, args.quantile if args.quantile is not None else settings.ingest.quantile
    )
    horizon = usage_check(
        validate_horizon, args.horizon if args.horizon is not None else settings.ingest.horizon
    )
    table = load_csv(args.input, columns=args.columns, index_column=args.index_column,
                     delimiter=args.delimiter)
    data = extract_events(table, window=window, quantile=quantile, horizon=horizon)

    out = Path(args.out)
    manifest = _manifest("ingest", argv)
    manifest.config = {
        "input": str(args.input),
        "columns": table.columns,
        "window": window,
        "quantile": quantile,
        "horizon": horizon,
        "dims": data.dims,
    }
    events = io.write_events(data, out / "events.csv")
    manifest.add_output("events", events)
    manifest.add_output("events_meta", io.events_meta_path(events))
    manifest.finish()
    manifest.write(out)
    _emit(format_event_counts(table.columns, data.counts))
    return EXIT_OK


def cmd_kappa(args: argparse.Namespace, settings: Settings, argv: Sequence[str]) -> int:
    """Lattice-constant bounds table as CSV, to --out or stdout."""
    table = kappa_table(args.k_max)
    if args.out:
        Path(args.out).parent.mkdir(parents=True, exist_ok=True)
        table.to_csv(args.out, index=False, float_format="%.10g")
    else:
        _emit(table.to_csv(index=False, float_format="%.10g"))
    return EXIT_OK


def cmd_replay(args: argparse.Namespace, settings: Settings, argv: Sequence[str]) -> int:
    """Re-run the command recorded in a manifest."""
    manifest = RunManifest.read(args.manifest)
    replay_argv = list(manifest.argv)
    if args.out:
        if "--out" not in replay_argv:
            raise UsageError(f"Recorded '{manifest.command}' command has no --out to replace")
        replay_argv[replay_argv.index("--out") + 1] = args.out
    if manifest.version != __version__:
        logger.warning(f"Manifest was written by version {manifest.version}, running {__version__}")
    logger.info(f"Replaying: hawkes-mml {' '.join(replay_argv)}")
    return run(replay_argv)


def _add_workers(parser: argparse.ArgumentParser) -> None:
    parser.add_argument(
        "--workers", type=int, default=None,
        help=f"Worker processes (falls back to {ENV_WORKERS}, config, then all cores)",
    )


def _add_experiment(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--experiment", required=True,
                        help="Experiment preset name or path to a YAML file")
    parser.add_argument("--trials", type=int, default=None,
                        help=f"Number of trials (preset default, usually {DESK_TRIALS})")
    parser.add_argument("--full", action="store_true",
                        help=f"Run {FULL_TRIALS} trials")
    parser.add_argument("--seed", type=int, default=None, help="Master seed override")
    parser.add_argument("--out", required=True, help="Output directory")
    parser.add_argument("--no-progress", action="store_true", help="Hide the progress bar")
    _add_workers(parser)


def build_parser() -> ArgumentParser:
    parser = ArgumentParser(
        prog="hawkes-mml",
        description="Granger-causal graph inference for exponential Hawkes processes",
    )
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    parser.add_argument("--config-dir", default=None, help="Override config directory path")
    parser.add_argument(
        "--log-level", default=None,
        help=f"Logging level (falls back to {ENV_LOG_LEVEL}, config, then INFO)",
    )
    commands = parser.add_subparsers(dest="command", parser_class=ArgumentParser)

    sim = commands.add_parser("simulate", help="Simulate an exp-MHP sample path")
    sim.add_argument("--model", help="Model JSON with mu, alpha, beta")
    sim.add_argument("--setting", choices=SETTINGS, help="Generate the model of a benchmark setting")
    sim.add_argument("--p", type=int, default=7, help="Dimension for --setting")
    sim.add_argument("--beta", type=float, default=1.0, help="Decay constant for --setting")
    sim.add_argument("--horizon", type=float, required=True, help="Horizon T")
    sim.add_argument("--seed", type=int, default=0)
    sim.add_argument("--max-events", type=int, default=None,
                     help=f"Event cap (default {DEFAULT_MAX_EVENTS})")
    sim.add_argument("--out", required=True, help="Output directory")

    infer = commands.add_parser("infer", help="Infer the connectivity graph from events")
    infer.add_argument("--events", required=True, help="Events CSV (node_id,time)")
    infer.add_argument("--horizon", type=float, required=True, help="Horizon T")
    infer.add_argument("--dims", type=int, default=None, help="Number of nodes")
    infer.add_argument("--criterion", default=None, help="Selection criterion")
    infer.add_argument("--prior", choices=PRIOR_KINDS, default=None)
    infer.add_argument("--prior-value", type=float, default=None, help="b or c")
    infer.add_argument("--prior-preset", choices=list(PRIOR_PRESETS), default=None)
    infer.add_argument("--max-parents", type=int, default=None, help="Bound m on parents")
    infer.add_argument("--beta", type=float, default=1.0, help="Known decay constant")
    infer.add_argument("--model", default=None, help="Model JSON to take the decay matrix from")
    infer.add_argument("--lattice", choices=LATTICE_MODES, default=None)
    infer.add_argument("--optimizer", choices=OPTIMIZER_METHODS, default=None)
    infer.add_argument("--restarts", type=int, default=None)
    infer.add_argument("--threshold", type=float, default=None, help="mle-thr cut-off")
    infer.add_argument("--seed", type=int, default=0)
    infer.add_argument("--out", required=True, help="Output directory")
    _add_workers(infer)

    sc = commands.add_parser("score", help="Score a predicted graph against the truth")
    sc.add_argument("--predicted", required=True, help="Predicted graph JSON")
    sc.add_argument("--truth", default=None, help="Ground-truth graph JSON")
    sc.add_argument("--truth-model", default=None, help="Ground-truth model JSON")
    sc.add_argument("--json", action="store_true", help="Print the report as JSON")

    bench = commands.add_parser("bench", help="Run a benchmark experiment")
    _add_experiment(bench)
    bench.add_argument("--methods", nargs="+", default=None, help="Subset of methods")

    sweep = commands.add_parser("sweep", help="Sweep a prior hyperparameter")
    _add_experiment(sweep)
    sweep.add_argument("--kind", choices=PRIOR_KINDS, default=None)
    sweep.add_argument("--low", type=float, default=None)
    sweep.add_argument("--high", type=float, default=None)
    sweep.add_argument("--points", type=int, default=None)

    ingest = commands.add_parser("ingest", help="Extract shock events from time series")
    ingest.add_argument("--input", required=True, help="Delimited file with a header")
    ingest.add_argument("--columns", nargs="+", default=None, help="Series to keep")
    ingest.add_argument("--index-column", default=None, help="Date/index column")
    ingest.add_argument("--delimiter", default=",")
    ingest.add_argument("--window", type=int, default=None, help="Rolling window in samples")
    ingest.add_argument("--quantile", type=float, default=None, help="Top fraction")
    ingest.add_argument("--horizon", type=float, default=None, help="Output horizon T")
    ingest.add_argument("--out", required=True, help="Output directory")

    kappa = commands.add_parser("kappa", help="Lattice-constant bounds table")
    kappa.add_argument("--k-max", type=int, default=50)
    kappa.add_argument("--out", default=None, help="CSV path (stdout if omitted)")

    replay = commands.add_parser("replay", help="Re-run a command from its manifest")
    replay.add_argument("manifest", help="manifest.json or its directory")
    replay.add_argument("--out", default=None, help="Write outputs elsewhere")

    commands.add_parser("criteria", help="List the selection criteria")
    return parser


def _log_level(args: argparse.Namespace, settings: Settings) -> str:
    return args.log_level or os.environ.get(ENV_LOG_LEVEL) or settings.log_level or "INFO"


def run(argv: List[str]) -> int:
    """Parse argv and run one command; raises on failure."""
    args = build_parser().parse_args(argv)
    if args.command is None:
        raise UsageError("No command given; see hawkes-mml --help")
    loader = ConfigLoader(Path(args.config_dir) if args.config_dir else None)
    settings = loader.load_settings()
    usage_check(setup_logging, _log_level(args, settings))

    logger.info(f"hawkes-mml {__version__}: {args.command}")
    if args.command == "criteria":
        for info in default_registry().get_selector_info():
            _emit(f"{info['name']}\t{info['description']}")
        return EXIT_OK
    if args.command in ("bench", "sweep"):
        handler = cmd_bench if args.command == "bench" else cmd_sweep
        status = handler(args, settings, argv, loader)
    else:
        handlers = {
            "simulate": cmd_simulate,
            "infer": cmd_infer,
            "score": cmd_score,
            "ingest": cmd_ingest,
            "kappa": cmd_kappa,
            "replay": cmd_replay,
        }
        status = handlers[args.command](args, settings, argv)
    logger.info(f"{args.command} finished")
    return status


def main(argv: Optional[List[str]] = None) -> int:
    """Entry point for the hawkes-mml CLI; returns the exit code."""
    argv = list(sys.argv[1:] if argv is None else argv)
    try:
        return run(argv)
    except (HawkesMMLError, OSError) as e:
        print(f"Error: {e}", file=sys.stderr)
        return exit_code_for(e)


if __name__ == "__main__":
    sys.exit(main())

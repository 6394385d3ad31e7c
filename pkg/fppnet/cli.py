"""Command-line interface: ``fppnet <command> [options]``.

Every command writes into ``--out`` only and finishes with ``manifest.json``.
Exit codes: 0 success, 2 usage, configuration or input errors, 3 numerical
failure (details in ``diagnostics.json``).

Seeds: ``simulate`` and ``study`` use ``--seed`` directly; training derives
``derive_seed(seed, "init")`` for the weights and ``derive_seed(seed,
"shuffle")`` for the split and batch order; ``ablate`` generates its data from
``derive_seed(seed, "ablation", "data")``.
"""

import argparse
import os
import sys
from datetime import date, datetime, timezone
from pathlib import Path
from typing import Any, Dict, List, Optional, Sequence, Union

from pydantic import BaseModel, ConfigDict, Field

from . import __version__
from .config import (
    ClipPolicy,
    FppParams,
    InputActivation,
    ModelConfig,
    SamplerKind,
    SimulationConfig,
    TimestampFormat,
    TimestampSeriesSpec,
    TrainSpec,
    build_config,
)
from .errors import (
    ConfigError,
    ConvergenceError,
    DatasetFormatError,
    DomainError,
    IngestError,
    ModelFormatError,
    NumericalError,
)
from .experiments import (
    AblationAxis,
    AblationBase,
    ablation_summary,
    compare_with_mom,
    evaluate,
    held_out_set,
    run_ablation,
    sampling_distribution_study,
    split_dataset,
    track_windows,
    train,
    write_ablation,
    write_comparison,
    write_loss_curve,
    write_report,
    write_sampling_study,
    write_trajectory,
)
from .experiments.training import TrainResult
from .ingest import label_windows_with_mom, load_interarrivals, make_windows, write_ingest_stats
from .neural import load_model, save_model
from .simulation import LabeledDataset, generate_dataset, load_dataset, save_dataset
from .utils.io import write_json_atomic
from .utils.logging import configure_logging, get_logger
from .utils.rng import derive_seed

logger = get_logger(__name__)

EXIT_OK = 0
EXIT_USAGE = 2
EXIT_NUMERICAL = 3

_USAGE_ERRORS = (ConfigError, DomainError, IngestError, FileNotFoundError, ModelFormatError, DatasetFormatError)
_NUMERICAL_ERRORS = (NumericalError, ConvergenceError)


class RunManifest(BaseModel):
    """Record of one CLI run, enough to repeat it."""

    model_config = ConfigDict(frozen=True)

    command: str
    argv: List[str]
    version: str
    config: Dict[str, Any]
    seeds: Dict[str, int]
    started_at: str
    finished_at: str
    outputs: List[str] = Field(default_factory=list)


class RunContext:
    """Output directory, produced files and seeds of the running command."""

    def __init__(self, out: Path, seed: int):
        self.out = out
        self.outputs: List[str] = []
        self.seeds: Dict[str, int] = {"root": seed}
        self.config: Dict[str, Any] = {}

    def path(self, name: str) -> Path:
        """Register ``name`` as an output and return its path inside ``out``."""
        if name not in self.outputs:
            self.outputs.append(name)
        return self.out / name


def _now() -> str:
    return datetime.now(timezone.utc).isoformat()


def _threads(args: argparse.Namespace, default: int) -> int:
    return args.threads if args.threads else default


# --- Shared builders ---


def _model_config(args: argparse.Namespace, run: RunContext) -> ModelConfig:
    run.seeds["init"] = derive_seed(args.seed, "init")
    return build_config(
        ModelConfig,
        hidden_dim=args.hidden,
        fc_dim=args.fc,
        input_activation=args.input_activation,
        log_inputs=args.log_inputs,
        grad_clip_norm=args.grad_clip,
        seed=run.seeds["init"],
    )


def _train_spec(args: argparse.Namespace, run: RunContext, dataset: Optional[Path] = None) -> TrainSpec:
    run.seeds["shuffle"] = derive_seed(args.seed, "shuffle")
    return build_config(
        TrainSpec,
        dataset=dataset,
        split_fraction=args.split,
        epochs=args.epochs,
        lr=args.lr,
        batch_size=args.batch_size,
        shuffle_seed=run.seeds["shuffle"],
        val_fraction=args.val_fraction,
        threads=_threads(args, 1),
    )


def _train_and_save(run: RunContext, spec: TrainSpec, cfg: ModelConfig, dataset: LabeledDataset) -> TrainResult:
    result = train(spec, cfg, dataset)
    meta = {
        "split_fraction": spec.split_fraction,
        "val_fraction": spec.val_fraction,
        "shuffle_seed": spec.shuffle_seed,
        "n_samples": dataset.n_samples,
        "seq_len": dataset.seq_len,
        "best_epoch": result.curves.best_epoch,
        "epochs": spec.epochs,
    }
    save_model(run.path("model_final.fpl"), result.model, result.optimizer, meta)
    save_model(run.path("model_best.fpl"), result.best_model, None, meta)
    write_loss_curve(result.curves, run.path("loss_curve.csv"))
    run.config.update(model=cfg.model_dump(mode="json"), train=spec.model_dump(mode="json"))
    return result


def _test_set(args: argparse.Namespace, metadata: Dict[str, Any], dataset: LabeledDataset) -> LabeledDataset:
    if args.all_rows:
        return dataset
    try:
        split = split_dataset(
            dataset.n_samples, metadata["split_fraction"], metadata["val_fraction"], metadata["shuffle_seed"]
        )
    except KeyError as e:
        raise ConfigError(f"model file carries no split metadata ({e}); pass --all-rows") from e
    if metadata.get("n_samples") not in (None, dataset.n_samples):
        raise ConfigError(
            f"model was trained on {metadata['n_samples']} rows, dataset has {dataset.n_samples}; pass --all-rows"
        )
    return dataset.subset(split.test)


def _column(args: argparse.Namespace) -> Union[str, int]:
    return int(args.column) if args.no_header else args.column


def _ingest(args: argparse.Namespace, run: RunContext) -> LabeledDataset:
    spec = build_config(
        TimestampSeriesSpec,
        path=Path(args.file),
        timestamp_column=_column(args),
        format=args.format,
        delimiter=args.delimiter,
        has_header=not args.no_header,
        sort=not args.no_sort,
        date_filter=args.date_filter,
        parse_tolerance=args.tolerance,
    )
    series = load_interarrivals(spec)
    windows = make_windows(series.gaps, args.window, args.stride, series.source_stats)
    dataset = label_windows_with_mom(windows, ClipPolicy(), keep_saturated=args.keep_saturated)
    save_dataset(dataset, run.path("dataset.bin"))
    run.path("dataset.json")
    write_ingest_stats(run.path("ingest_stats.json"), dataset, series.source_stats)
    run.config["ingest"] = spec.model_dump(mode="json") | {"window": args.window, "stride": args.stride}
    return dataset


# --- Commands ---


def cmd_simulate(args: argparse.Namespace, run: RunContext) -> None:
    dataset = generate_dataset(
        n_samples=args.n,
        seq_len=args.seq_len,
        mu_range=tuple(args.mu_range),
        beta_range=tuple(args.beta_range),
        rng_seed=args.seed,
        sampler=args.sampler,
        threads=_threads(args, os.cpu_count() or 1),
    )
    save_dataset(dataset, run.path("dataset.bin"))
    run.path("dataset.json")
    run.config["simulation"] = dataset.metadata | {"n_samples": args.n, "seq_len": args.seq_len}


def cmd_train(args: argparse.Namespace, run: RunContext) -> None:
    dataset = load_dataset(args.dataset)
    spec = _train_spec(args, run, Path(args.dataset))
    result = _train_and_save(run, spec, _model_config(args, run), dataset)
    report = evaluate(
        result.best_model,
        held_out_set(dataset, result),
        batch_size=spec.batch_size,
        wall_clock_train=result.wall_clock_train,
    )
    write_report(report, run.path("report.json"))


def cmd_eval(args: argparse.Namespace, run: RunContext) -> None:
    saved = load_model(args.model)
    test = _test_set(args, saved.metadata, load_dataset(args.dataset))
    write_report(evaluate(saved.model, test, batch_size=args.batch_size), run.path("report.json"))
    run.config["eval"] = {"model": str(args.model), "dataset": str(args.dataset), "n_test": test.n_samples}


def cmd_compare(args: argparse.Namespace, run: RunContext) -> None:
    saved = load_model(args.model)
    test = _test_set(args, saved.metadata, load_dataset(args.dataset))
    report = compare_with_mom(saved.model, test, ClipPolicy(), timing_repeats=args.timing_repeats)
    write_comparison(report, run.path("comparison.json"))
    run.config["compare"] = {"model": str(args.model), "dataset": str(args.dataset), "n_test": test.n_samples}


def cmd_ablate(args: argparse.Namespace, run: RunContext) -> None:
    run.seeds["ablation_data"] = derive_seed(args.seed, "ablation", "data")
    simulation = build_config(
        SimulationConfig,
        n_samples=args.n,
        seq_len=args.seq_len,
        seed=run.seeds["ablation_data"],
        threads=_threads(args, os.cpu_count() or 1),
    )
    base = build_config(
        AblationBase,
        simulation=simulation,
        model=_model_config(args, run),
        train=_train_spec(args, run),
    )
    grid = run_ablation(args.axis, args.values, base, threads=args.cell_threads)
    write_ablation(grid, run.out)
    run.path(f"ablation_{grid.axis.value}.csv")
    write_json_atomic(
        run.path(f"ablation_{grid.axis.value}.json"),
        {"summary": ablation_summary(grid), "cells": [c.model_dump(mode="json") for c in grid.cells]},
    )
    run.config["ablation"] = base.model_dump(mode="json") | {"axis": grid.axis.value, "values": grid.values}


def cmd_ingest(args: argparse.Namespace, run: RunContext) -> None:
    _ingest(args, run)


def cmd_study(args: argparse.Namespace, run: RunContext) -> None:
    params = build_config(FppParams, mu=args.mu, beta=args.beta)
    model = load_model(args.model).model if args.model else None
    study = sampling_distribution_study(
        params, args.n_paths, args.seq_len, model, rng_seed=args.seed, sampler=args.sampler
    )
    write_sampling_study(study, run.path("sampling_study.json"))
    run.config["study"] = {"mu": args.mu, "beta": args.beta, "n_paths": args.n_paths, "seq_len": args.seq_len}


def cmd_track(args: argparse.Namespace, run: RunContext) -> None:
    dataset = _ingest(args, run)
    spec = _train_spec(args, run)
    result = _train_and_save(run, spec, _model_config(args, run), dataset)
    trajectory = track_windows(result.best_model, dataset)
    write_trajectory(trajectory, run.path("trajectory.csv"), run.path("tracking.json"))


# --- Parser ---


def _add_common(p: argparse.ArgumentParser) -> None:
    p.add_argument("--out", type=Path, default=Path("out"), help="Output directory (default: out)")
    p.add_argument("--seed", type=int, default=0, help="Root seed for every random stream (default: 0)")
    p.add_argument("--threads", type=int, default=None, help="Worker threads (default: machine count for data generation, 1 for training)")
    p.add_argument("--verbose", action="store_true", help="Log at DEBUG level")
    p.add_argument("--log-json", action="store_true", help="Render console logs as JSON lines")


def _add_train_options(p: argparse.ArgumentParser, epochs: int = 100) -> None:
    g = p.add_argument_group("training")
    g.add_argument("--epochs", type=int, default=epochs)
    g.add_argument("--lr", type=float, default=1e-3)
    g.add_argument("--batch-size", type=int, default=64)
    g.add_argument("--split", type=float, default=0.8, help="Training fraction; the rest is test")
    g.add_argument("--val-fraction", type=float, default=0.1, help="Share of the training rows used for validation")
    g.add_argument("--hidden", type=int, default=16)
    g.add_argument("--fc", type=int, default=32)
    g.add_argument("--input-activation", choices=[a.value for a in InputActivation], default=InputActivation.RELU.value)
    g.add_argument("--log-inputs", action="store_true", help="Feed ln(inter-arrival) instead of raw values")
    g.add_argument("--grad-clip", type=float, default=None, help="Clip gradients to this global norm")


def _add_ingest_options(p: argparse.ArgumentParser) -> None:
    g = p.add_argument_group("ingest")
    g.add_argument("--file", required=True, help="Delimited text file with a timestamp column")
    g.add_argument("--column", required=True, help="Column name, or 0-based index with --no-header")
    g.add_argument("--format", choices=[f.value for f in TimestampFormat], default=TimestampFormat.ISO_DATETIME.value)
    g.add_argument("--window", type=int, default=10, help="Window length (default: 10)")
    g.add_argument("--stride", type=int, default=1)
    g.add_argument("--date-filter", type=date.fromisoformat, default=None, help="Keep only this day (YYYY-MM-DD)")
    g.add_argument("--delimiter", default=",")
    g.add_argument("--no-header", action="store_true")
    g.add_argument("--no-sort", action="store_true")
    g.add_argument("--tolerance", type=float, default=0.01, help="Maximum share of unparseable rows")
    g.add_argument("--keep-saturated", action="store_true", help="Keep windows whose beta estimate was clamped")


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    _add_common(common)

    parser = argparse.ArgumentParser(prog="fppnet", description="Fractional Poisson process estimation toolkit")
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("simulate", parents=[common], help="Generate a labelled synthetic dataset")
    p.add_argument("--n", type=int, default=100_000, help="Number of windows")
    p.add_argument("--seq-len", type=int, default=50)
    p.add_argument("--mu-range", type=float, nargs=2, default=[0.5, 5.0], metavar=("LO", "HI"))
    p.add_argument("--beta-range", type=float, nargs=2, default=[0.1, 0.9], metavar=("LO", "HI"))
    p.add_argument("--sampler", choices=[s.value for s in SamplerKind], default=SamplerKind.KANTER.value)
    p.set_defaults(handler=cmd_simulate)

    p = sub.add_parser("train", parents=[common], help="Train the LSTM regressor on a dataset")
    p.add_argument("--dataset", type=Path, required=True)
    _add_train_options(p)
    p.set_defaults(handler=cmd_train)

    for name, handler, text in (
        ("eval", cmd_eval, "Evaluate a saved model"),
        ("compare", cmd_compare, "Compare a saved model with the MOM estimator"),
    ):
        p = sub.add_parser(name, parents=[common], help=text)
        p.add_argument("--model", type=Path, required=True)
        p.add_argument("--dataset", type=Path, required=True)
        p.add_argument("--all-rows", action="store_true", help="Use every row instead of the model's test split")
        if name == "eval":
            p.add_argument("--batch-size", type=int, default=64)
        else:
            p.add_argument("--timing-repeats", type=int, default=20)
        p.set_defaults(handler=handler)

    p = sub.add_parser("ablate", parents=[common], help="Sweep one training setting")
    p.add_argument("--axis", choices=[a.value for a in AblationAxis], required=True)
    p.add_argument("--values", type=float, nargs="+", default=None, help="Grid values (default: built-in grid)")
    p.add_argument("--n", type=int, default=5000, help="Windows per generated dataset")
    p.add_argument("--seq-len", type=int, default=50)
    p.add_argument("--cell-threads", type=int, default=1, help="Grid cells trained concurrently")
    _add_train_options(p, epochs=30)
    p.set_defaults(handler=cmd_ablate)

    p = sub.add_parser("ingest", parents=[common], help="Turn a timestamp file into a MOM-labelled dataset")
    _add_ingest_options(p)
    p.set_defaults(handler=cmd_ingest)

    p = sub.add_parser("study", parents=[common], help="Sampling distribution of the estimators at one point")
    p.add_argument("--mu", type=float, default=2.622)
    p.add_argument("--beta", type=float, default=0.520)
    p.add_argument("--n-paths", type=int, default=1000)
    p.add_argument("--seq-len", type=int, default=30)
    p.add_argument("--model", type=Path, default=None, help="Saved model for the LSTM column")
    p.add_argument("--sampler", choices=[s.value for s in SamplerKind], default=SamplerKind.KANTER.value)
    p.set_defaults(handler=cmd_study)

    p = sub.add_parser("track", parents=[common], help="Ingest, label, train and export per-window trajectories")
    _add_ingest_options(p)
    _add_train_options(p, epochs=10)
    p.set_defaults(handler=cmd_track)

    return parser


def _write_diagnostics(run: RunContext, command: str, error: Exception) -> None:
    write_json_atomic(
        run.path("diagnostics.json"),
        {
            "command": command,
            "error": type(error).__name__,
            "message": str(error),
            "diagnostics": getattr(error, "diagnostics", {}),
        },
    )


def main(argv: Optional[Sequence[str]] = None) -> int:
    """Run the CLI and return its exit code."""
    argv = list(sys.argv[1:] if argv is None else argv)
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return e.code if isinstance(e.code, int) else (EXIT_OK if e.code is None else EXIT_USAGE)

    out: Path = args.out
    out.mkdir(parents=True, exist_ok=True)
    run = RunContext(out, args.seed)
    configure_logging(
        level="DEBUG" if args.verbose else None,
        json_output=args.log_json,
        output_file=str(run.path("run.log")),
    )
    started = _now()
    logger.info("command_started", command=args.command, out=str(out), seed=args.seed)

    try:
        args.handler(args, run)
    except _NUMERICAL_ERRORS as e:
        logger.error("command_failed_numerical", command=args.command, error=str(e))
        _write_diagnostics(run, args.command, e)
        print(f"fppnet {args.command}: numerical failure: {e}", file=sys.stderr)
        return EXIT_NUMERICAL
    except _USAGE_ERRORS as e:
        logger.error("command_failed", command=args.command, error=str(e), counts=getattr(e, "counts", None))
        print(f"fppnet {args.command}: {e}", file=sys.stderr)
        return EXIT_USAGE

    config = {k: v for k, v in vars(args).items() if k != "handler"}
    manifest = RunManifest(
        command=args.command,
        argv=argv,
        version=__version__,
        config=config | {"resolved": run.config},
        seeds=run.seeds,
        started_at=started,
        finished_at=_now(),
        outputs=run.outputs + ["manifest.json"],
    )
    write_json_atomic(out / "manifest.json", manifest.model_dump(mode="json"))
    logger.info("command_finished", command=args.command, outputs=len(manifest.outputs))
    return EXIT_OK

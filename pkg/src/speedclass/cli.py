"""Command-line front end wiring the pipeline end to end.

Five subcommands cover the full workflow:

``generate``
    Synthesize seeded driving recordings as CSV files plus a manifest.
``train``
    Fit one classifier on recordings and save a model file.
``compare``
    Run the full protocol — 90/10 split, k-fold cross-validation on the
    training portion, holdout evaluation — for several classifiers and
    write aligned-text tables plus a structured JSON report.
``evaluate``
    Score one saved model on held-out recordings, rendering the
    per-class precision/recall/F1/support table.
``simulate``
    Emit a rule-based speed profile, its humanized variant, and
    (optionally) a saved model's predicted class midpoints as columnar
    text for external plotting, printing RMSE between each pair.

Exit codes are a stable contract: 0 success, 2 usage or configuration
error, 3 data or model error.  Every command is reproducible from its
flags, seed, and input files alone; nothing is seeded from the clock.
Set ``SPEEDCLASS_LOG`` (DEBUG/INFO/WARNING/ERROR) to adjust verbosity.

The model file written by ``train`` and read by ``evaluate``/``simulate``
is JSON with this schema::

    {
      "format": "speedclass-model-file",
      "version": 1,
      "feature_names": [<7 channel names>],
      "standardizer": {"mean": [...], "std_dev": [...]},
      "model": {<classifier document, see classifiers.TrainedClassifier>}
    }
"""

from __future__ import annotations

import argparse
import json
import logging
import math
import os
from dataclasses import dataclass
from pathlib import Path
from typing import Any, Sequence

import numpy as np

from .classifiers import TrainedClassifier, TrainingConfig, fit, from_document
from .domain import Algorithm
from .errors import ConfigError, SchemaError, SpeedClassError
from .evaluation import (
    CrossValidationReport,
    EvaluationReport,
    cross_validate,
    evaluate_model,
    render_class_table,
    render_comparison_table,
    render_cv_table,
)
from .ingestion import LabeledDataset, extract_target, load_recording, select_features
from .preprocess import (
    StandardizationParams,
    apply_standardizer,
    discretize_speed,
    fit_standardizer,
    make_split,
)
from .synthgen import (
    DriverParams,
    RouteProfile,
    emit_recording,
    generate_route,
    humanize,
    integrate_positions,
    make_benchmark,
    simulate_rule_based_driver,
)

logger = logging.getLogger(__name__)

MODEL_FILE_FORMAT = "speedclass-model-file"
MODEL_FILE_VERSION = 1
MANIFEST_FORMAT = "speedclass-manifest"
MANIFEST_VERSION = 1

#: Compliance ladder cycled over generated routes so a multi-route corpus
#: spans cautious drivers through habitual speeders.
_GENERATE_COMPLIANCES = (0.95, 0.85, 1.05, 0.90, 1.12, 1.00)
#: Route kinds cycled when no explicit --kind is given.
_GENERATE_KINDS = ("mixed", "urban", "highway", "mountain")

_EXIT_OK = 0
_EXIT_USAGE = 2
_EXIT_DATA = 3


@dataclass(frozen=True)
class RunConfig:
    """Validated invocation parameters shared by the subcommands.

    Fields not applicable to the current command hold their defaults.
    Paths are validated here, before any work begins, and the seed is
    always explicit — there is no wall-clock fallback.
    """

    command: str
    seed: int = 0
    data: tuple[Path, ...] = ()
    out: Path | None = None
    model_path: Path | None = None
    algorithms: tuple[Algorithm, ...] = ()
    test_fraction: float = 0.10
    folds: int = 5
    paper_fidelity: bool = False
    fit_on_all: bool = False
    routes: int = 6
    kind: str | None = None
    length_km: float = 10.0
    compliance: float = 0.95
    noise_amplitude: float = 3.0
    sample_rate: float = 1.0


# ---------------------------------------------------------------------------
# shared plumbing


def _ensure_out_dir(path: Path) -> None:
    """Create ``path`` as a directory, failing with ConfigError if unusable."""
    try:
        path.mkdir(parents=True, exist_ok=True)
    except OSError as exc:
        raise ConfigError(f"cannot create output directory {path}: {exc}") from exc
    if not os.access(path, os.W_OK):
        raise ConfigError(f"output directory {path} is not writable")


def _ensure_out_file(path: Path) -> None:
    """Check that ``path`` can be written as a file."""
    parent = path.parent if str(path.parent) else Path(".")
    if not parent.is_dir():
        raise ConfigError(f"output directory {parent} does not exist")
    if path.is_dir():
        raise ConfigError(f"output path {path} is a directory")
    if not os.access(parent, os.W_OK):
        raise ConfigError(f"output directory {parent} is not writable")


def _expand_csv_paths(paths: Sequence[Path]) -> list[Path]:
    """Resolve data arguments: directories expand to their sorted *.csv."""
    files: list[Path] = []
    for p in paths:
        if p.is_dir():
            inside = sorted(p.glob("*.csv"))
            if not inside:
                raise ConfigError(f"data directory {p} contains no .csv files")
            files.extend(inside)
        elif p.is_file():
            files.append(p)
        else:
            raise ConfigError(f"data path {p} does not exist")
    return files


def _load_dataset(paths: Sequence[Path], sample_rate: float | None = None) -> LabeledDataset:
    """Load recordings, discretize targets, and stack the feature rows."""
    files = _expand_csv_paths(paths)
    feats, labs = [], []
    names: tuple[str, ...] = ()
    for f in files:
        rec = load_recording(f, sample_rate)
        labels = discretize_speed(extract_target(rec))
        ds = select_features(rec, labels)
        feats.append(ds.features)
        labs.append(ds.labels)
        names = ds.feature_names
    dataset = LabeledDataset(
        features=np.vstack(feats), labels=np.concatenate(labs), feature_names=names
    )
    logger.info("loaded %d samples from %d file(s)", dataset.features.shape[0], len(files))
    return dataset


def _benchmark_dataset(seed: int, sample_rate: float) -> LabeledDataset:
    """The stock synthetic benchmark as one stacked dataset."""
    recordings = make_benchmark(seed, sample_rate=sample_rate)
    feats, labs = [], []
    names: tuple[str, ...] = ()
    for rec in recordings:
        labels = discretize_speed(extract_target(rec))
        ds = select_features(rec, labels)
        feats.append(ds.features)
        labs.append(ds.labels)
        names = ds.feature_names
    return LabeledDataset(
        features=np.vstack(feats), labels=np.concatenate(labs), feature_names=names
    )


def _write_text(path: Path, text: str) -> None:
    with open(path, "w", newline="\n") as fh:
        fh.write(text)


def _write_json(path: Path, document: dict[str, Any]) -> None:
    with open(path, "w", newline="\n") as fh:
        json.dump(document, fh, indent=2, sort_keys=True)
        fh.write("\n")


def _standardizer_state(params: StandardizationParams) -> dict[str, list[float]]:
    return {"mean": params.mean.tolist(), "std_dev": params.std_dev.tolist()}


def _standardizer_from_state(state: Any) -> StandardizationParams:
    if not isinstance(state, dict) or "mean" not in state or "std_dev" not in state:
        raise SchemaError("model file: standardizer must carry 'mean' and 'std_dev'")
    return StandardizationParams(
        mean=np.asarray(state["mean"], dtype=np.float64),
        std_dev=np.asarray(state["std_dev"], dtype=np.float64),
    )


def _write_model_file(
    path: Path,
    model: TrainedClassifier,
    standardizer: StandardizationParams,
    feature_names: Sequence[str],
) -> None:
    _write_json(
        path,
        {
            "format": MODEL_FILE_FORMAT,
            "version": MODEL_FILE_VERSION,
            "feature_names": list(feature_names),
            "standardizer": _standardizer_state(standardizer),
            "model": model.to_document(),
        },
    )


def _load_model_file(
    path: Path,
) -> tuple[TrainedClassifier, StandardizationParams, tuple[str, ...]]:
    try:
        with open(path) as fh:
            document = json.load(fh)
    except OSError as exc:
        raise SchemaError(f"cannot read model file {path}: {exc}") from exc
    except json.JSONDecodeError as exc:
        raise SchemaError(f"model file {path} is not valid JSON: {exc}") from exc
    if not isinstance(document, dict) or document.get("format") != MODEL_FILE_FORMAT:
        raise SchemaError(
            f"{path} is not a model file (expected format {MODEL_FILE_FORMAT!r})"
        )
    if document.get("version") != MODEL_FILE_VERSION:
        raise SchemaError(
            f"unsupported model file version {document.get('version')!r}"
        )
    for key in ("feature_names", "standardizer", "model"):
        if key not in document:
            raise SchemaError(f"model file: {key} required")
    model = from_document(document["model"])
    standardizer = _standardizer_from_state(document["standardizer"])
    return model, standardizer, tuple(document["feature_names"])


def _check_feature_names(
    model_names: tuple[str, ...], data_names: tuple[str, ...]
) -> None:
    if model_names != data_names:
        raise SchemaError(
            "model/data feature mismatch: model expects "
            f"{list(model_names)}, data provides {list(data_names)}"
        )


def _rmse(a: np.ndarray, b: np.ndarray) -> float:
    return float(math.sqrt(np.mean((np.asarray(a) - np.asarray(b)) ** 2)))


# ---------------------------------------------------------------------------
# subcommands


def cmd_generate(config: RunConfig) -> int:
    """Write ``routes`` seeded recordings plus a manifest to ``out``."""
    if config.routes < 1:
        raise ConfigError("--routes must be at least 1")
    assert config.out is not None
    _ensure_out_dir(config.out)

    sub_seeds = np.random.default_rng(config.seed).integers(
        0, 2**63, size=(config.routes, 4)
    )
    entries = []
    for i in range(config.routes):
        kind = config.kind or _GENERATE_KINDS[i % len(_GENERATE_KINDS)]
        driver = DriverParams(
            compliance=_GENERATE_COMPLIANCES[i % len(_GENERATE_COMPLIANCES)],
            noise_amplitude=config.noise_amplitude,
        )
        profile = RouteProfile(kind=kind, length_m=config.length_km * 1000.0)
        route = generate_route(profile, int(sub_seeds[i, 0]))
        rule = simulate_rule_based_driver(
            route, driver, int(sub_seeds[i, 1]), config.sample_rate
        )
        recorded = humanize(rule, driver, int(sub_seeds[i, 2]))
        filename = f"recording_{i:02d}.csv"
        recording = emit_recording(
            route,
            recorded,
            config.sample_rate,
            int(sub_seeds[i, 3]),
            path=config.out / filename,
        )
        entries.append(
            {
                "file": filename,
                "kind": kind,
                "length_m": config.length_km * 1000.0,
                "compliance": driver.compliance,
                "noise_amplitude": driver.noise_amplitude,
                "samples": recording.samples,
                "seeds": {
                    "route": int(sub_seeds[i, 0]),
                    "stops": int(sub_seeds[i, 1]),
                    "humanize": int(sub_seeds[i, 2]),
                    "congestion": int(sub_seeds[i, 3]),
                },
            }
        )
        logger.info("wrote %s (%d samples, %s)", filename, recording.samples, kind)

    _write_json(
        config.out / "manifest.json",
        {
            "format": MANIFEST_FORMAT,
            "version": MANIFEST_VERSION,
            "seed": config.seed,
            "sample_rate": config.sample_rate,
            "recordings": entries,
        },
    )
    print(f"generated {config.routes} recording(s) in {config.out}")
    return _EXIT_OK


def cmd_train(config: RunConfig) -> int:
    """Fit one classifier on the data and write a model file."""
    if len(config.algorithms) != 1:
        raise ConfigError("train requires exactly one --algorithms entry")
    assert config.out is not None
    _ensure_out_file(config.out)
    dataset = _load_dataset(config.data, config.sample_rate)

    standardizer = fit_standardizer(dataset.features)
    X = apply_standardizer(standardizer, dataset.features)
    training = TrainingConfig(algorithm=config.algorithms[0], seed=config.seed)
    model = fit(
        training,
        LabeledDataset(
            features=X, labels=dataset.labels, feature_names=dataset.feature_names
        ),
    )
    report = evaluate_model(model, X, dataset.labels)
    _write_model_file(config.out, model, standardizer, dataset.feature_names)
    print(
        f"{model.algorithm.value}: trained on {X.shape[0]} samples, "
        f"training accuracy {report.accuracy:.2f}; model -> {config.out}"
    )
    return _EXIT_OK


def cmd_compare(config: RunConfig) -> int:
    """Split, cross-validate, and holdout-evaluate each algorithm."""
    if not config.algorithms:
        raise ConfigError("compare requires at least one algorithm")
    assert config.out is not None
    _ensure_out_dir(config.out)

    if config.data:
        dataset = _load_dataset(config.data, config.sample_rate)
    else:
        logger.info("no --data given; generating the stock synthetic benchmark")
        dataset = _benchmark_dataset(config.seed, config.sample_rate)

    n = dataset.features.shape[0]
    plan = make_split(
        n, test_fraction=config.test_fraction, seed=config.seed, n_folds=config.folds
    )

    if config.fit_on_all:
        # Fidelity variant: one standardizer over the full dataset,
        # fitted before any splitting.
        params = fit_standardizer(dataset.features)
        features = apply_standardizer(params, dataset.features)
        cv_standardize = False
    else:
        params = fit_standardizer(dataset.features[plan.train_indices])
        features = dataset.features
        cv_standardize = True

    X_train = features[plan.train_indices]
    y_train = dataset.labels[plan.train_indices]
    X_test = features[plan.test_indices]
    y_test = dataset.labels[plan.test_indices]
    if not config.fit_on_all:
        X_test = apply_standardizer(params, X_test)
        holdout_train = apply_standardizer(params, X_train)
    else:
        holdout_train = X_train
    # cross_validate indexes with the plan's absolute fold indices, so it
    # needs the full feature matrix (pre-standardized only in fit-on-all
    # mode; otherwise each fold fits its own standardizer).
    full_set = LabeledDataset(
        features=features, labels=dataset.labels, feature_names=dataset.feature_names
    )

    cv_reports: dict[str, CrossValidationReport] = {}
    holdout_reports: dict[str, EvaluationReport] = {}
    failures: dict[str, str] = {}
    for algorithm in config.algorithms:
        training = TrainingConfig(algorithm=algorithm, seed=config.seed)
        name = algorithm.value
        run_cv = not (config.paper_fidelity and algorithm is Algorithm.KNEIGHBORS)
        try:
            if run_cv:
                cv_reports[name] = cross_validate(
                    training, full_set, plan, standardize=cv_standardize
                )
            else:
                logger.info("%s: skipping cross-validation (no fitted state)", name)
            model = fit(
                training,
                LabeledDataset(
                    features=holdout_train,
                    labels=y_train,
                    feature_names=dataset.feature_names,
                ),
            )
            holdout_reports[name] = evaluate_model(model, X_test, y_test)
        except SpeedClassError as exc:
            logger.warning("%s failed: %s", name, exc)
            failures[name] = str(exc)
            cv_reports.pop(name, None)
            continue
        logger.info(
            "%s: holdout weighted F1 %.4f", name, holdout_reports[name].weighted_f1
        )

    if not holdout_reports:
        details = "; ".join(f"{k}: {v}" for k, v in failures.items())
        raise SpeedClassError(f"every algorithm failed: {details}")

    cv_text = render_cv_table(cv_reports)
    holdout_text = render_comparison_table(holdout_reports)
    _write_text(config.out / "cross_validation.txt", cv_text)
    _write_text(config.out / "holdout_comparison.txt", holdout_text)
    _write_json(
        config.out / "report.json",
        {
            "format": "speedclass-comparison",
            "version": 1,
            "seed": config.seed,
            "test_fraction": config.test_fraction,
            "folds": config.folds,
            "paper_fidelity": config.paper_fidelity,
            "fit_on_all": config.fit_on_all,
            "n_samples": n,
            "algorithms": {
                name: {
                    "cross_validation": (
                        cv_reports[name].to_dict() if name in cv_reports else None
                    ),
                    "holdout": holdout_reports[name].to_dict(),
                }
                for name in holdout_reports
            },
            "failures": failures,
        },
    )
    print(cv_text)
    print(holdout_text)
    if failures:
        print(f"warning: {len(failures)} algorithm(s) failed: {', '.join(failures)}")
    print(f"reports written to {config.out}")
    return _EXIT_OK


def cmd_evaluate(config: RunConfig) -> int:
    """Per-class report of one saved model on held-out recordings."""
    assert config.model_path is not None
    model, standardizer, model_features = _load_model_file(config.model_path)
    dataset = _load_dataset(config.data, config.sample_rate)
    _check_feature_names(model_features, dataset.feature_names)
    if dataset.features.shape[0] == 0:
        raise SpeedClassError("test data is empty after dropping missing samples")

    X = apply_standardizer(standardizer, dataset.features)
    report = evaluate_model(model, X, dataset.labels)
    text = render_class_table(report, title=f"{model.algorithm.value} evaluation")
    print(text)
    if config.out is not None:
        _ensure_out_dir(config.out)
        _write_text(config.out / "class_table.txt", text)
        _write_json(
            config.out / "report.json",
            {
                "format": "speedclass-evaluation",
                "version": 1,
                "algorithm": model.algorithm.value,
                "n_samples": int(dataset.features.shape[0]),
                **report.to_dict(),
            },
        )
        print(f"reports written to {config.out}")
    return _EXIT_OK


def cmd_simulate(config: RunConfig) -> int:
    """Columnar speed profiles (recorded, rule-based, optional predicted)."""
    assert config.out is not None
    _ensure_out_file(config.out)
    model_bundle = None
    if config.model_path is not None:
        if not config.model_path.is_file():
            raise ConfigError(f"model file {config.model_path} does not exist")
        model_bundle = _load_model_file(config.model_path)

    sub_seeds = np.random.default_rng(config.seed).integers(0, 2**63, size=4)
    driver = DriverParams(
        compliance=config.compliance, noise_amplitude=config.noise_amplitude
    )
    profile = RouteProfile(
        kind=config.kind or "mixed", length_m=config.length_km * 1000.0
    )
    route = generate_route(profile, int(sub_seeds[0]))
    rule = simulate_rule_based_driver(route, driver, int(sub_seeds[1]), config.sample_rate)
    recorded = humanize(rule, driver, int(sub_seeds[2]))
    distance = integrate_positions(recorded, config.sample_rate)

    columns = [("distance_m", distance), ("recorded_kmh", recorded), ("rule_kmh", rule)]
    rmse_lines = [f"RMSE recorded vs rule-based: {_rmse(recorded, rule):.3f} km/h"]

    if model_bundle is not None:
        model, standardizer, model_features = model_bundle
        recording = emit_recording(route, recorded, config.sample_rate, int(sub_seeds[3]))
        labels = discretize_speed(extract_target(recording))
        ds = select_features(recording, labels)
        _check_feature_names(model_features, ds.feature_names)
        predicted_class = model.predict(apply_standardizer(standardizer, ds.features))
        predicted = predicted_class.astype(np.float64) * 10.0 + 5.0  # class midpoint
        columns.append(("predicted_kmh", predicted))
        rmse_lines.append(
            f"RMSE recorded vs predicted: {_rmse(recorded, predicted):.3f} km/h"
        )
        rmse_lines.append(f"RMSE rule-based vs predicted: {_rmse(rule, predicted):.3f} km/h")

    header = " ".join(name for name, _ in columns)
    body = "\n".join(
        " ".join(f"{col[i]:.3f}" for _, col in columns)
        for i in range(recorded.shape[0])
    )
    _write_text(config.out, header + "\n" + body + "\n")
    for line in rmse_lines:
        print(line)
    print(f"profile ({len(columns)} columns, {recorded.shape[0]} samples) -> {config.out}")
    return _EXIT_OK


# ---------------------------------------------------------------------------
# argument parsing


class _Parser(argparse.ArgumentParser):
    """ArgumentParser that reports usage errors instead of exiting."""

    def error(self, message: str):
        raise ConfigError(message)


def _parse_algorithms(raw: Sequence[str] | None, default_all: bool) -> tuple[Algorithm, ...]:
    if not raw:
        return tuple(Algorithm) if default_all else ()
    names: list[str] = []
    for chunk in raw:
        names.extend(part.strip() for part in chunk.split(",") if part.strip())
    resolved = []
    for name in names:
        try:
            resolved.append(Algorithm(name))
        except ValueError:
            valid = ", ".join(a.value for a in Algorithm)
            raise ConfigError(f"unknown algorithm {name!r}; valid names: {valid}")
    return tuple(dict.fromkeys(resolved))  # dedupe, keep order


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(
        prog="speedclass",
        description="Speed-class prediction pipeline: generate, train, compare, "
        "evaluate, simulate.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def add_common(p: _Parser, *, seed_required: bool = True) -> None:
        p.add_argument(
            "--seed",
            type=int,
            required=seed_required,
            help="master seed; every random choice derives from it",
        )
        p.add_argument(
            "--sample-rate",
            type=float,
            default=1.0,
            help="recording sample rate in Hz (default 1.0)",
        )

    g = sub.add_parser("generate", help="synthesize CSV recordings + manifest")
    add_common(g)
    g.add_argument("--routes", type=int, default=6, help="number of recordings")
    g.add_argument("--out", type=Path, required=True, help="output directory")
    g.add_argument(
        "--kind",
        choices=("urban", "highway", "mountain", "mixed"),
        help="route kind for every recording (default: cycle through all kinds)",
    )
    g.add_argument("--length-km", type=float, default=10.0, help="route length (km)")
    g.add_argument(
        "--noise-amplitude", type=float, default=3.0, help="driver noise (km/h)"
    )

    t = sub.add_parser("train", help="fit one classifier, save a model file")
    add_common(t)
    t.add_argument("--data", type=Path, nargs="+", required=True, help="CSV files or directories")
    t.add_argument("--out", type=Path, required=True, help="model file path")
    t.add_argument(
        "--algorithms",
        nargs="+",
        required=True,
        metavar="NAME",
        help="algorithm to train (exactly one)",
    )

    c = sub.add_parser("compare", help="split + cross-validate + holdout for many classifiers")
    add_common(c)
    c.add_argument(
        "--data",
        type=Path,
        nargs="*",
        default=[],
        help="CSV files or directories (default: stock synthetic benchmark)",
    )
    c.add_argument("--out", type=Path, required=True, help="report directory")
    c.add_argument(
        "--algorithms",
        nargs="+",
        metavar="NAME",
        help="algorithms to compare, comma- or space-separated (default: all eight)",
    )
    c.add_argument(
        "--test-fraction", type=float, default=0.10, help="holdout fraction (default 0.10)"
    )
    c.add_argument("--folds", type=int, default=5, help="cross-validation folds (default 5)")
    c.add_argument(
        "--paper-fidelity",
        action="store_true",
        help="skip cross-validation for KNNeighbors (it fits no state to validate) "
        "while keeping it in the holdout comparison",
    )
    c.add_argument(
        "--fit-on-all",
        action="store_true",
        help="fit the standardizer once on the full dataset before splitting "
        "instead of on each training portion",
    )

    e = sub.add_parser("evaluate", help="per-class report for one saved model")
    e.add_argument("--model", type=Path, required=True, help="model file from train")
    e.add_argument("--data", type=Path, nargs="+", required=True, help="test CSVs or directories")
    e.add_argument("--out", type=Path, help="optional report directory")
    e.add_argument("--sample-rate", type=float, default=1.0, help="recording sample rate in Hz")

    s = sub.add_parser("simulate", help="speed-profile comparison columns for plotting")
    add_common(s)
    s.add_argument("--out", type=Path, required=True, help="columnar text output file")
    s.add_argument(
        "--kind", choices=("urban", "highway", "mountain", "mixed"), default="mixed"
    )
    s.add_argument("--length-km", type=float, default=10.0, help="route length (km)")
    s.add_argument("--compliance", type=float, default=0.95, help="fraction of posted limit")
    s.add_argument("--noise-amplitude", type=float, default=3.0, help="driver noise (km/h)")
    s.add_argument("--model", type=Path, help="optional model file for predicted midpoints")

    return parser


def _config_from_args(args: argparse.Namespace) -> RunConfig:
    command = args.command
    algorithms: tuple[Algorithm, ...] = ()
    if command in ("train", "compare"):
        algorithms = _parse_algorithms(
            getattr(args, "algorithms", None), default_all=(command == "compare")
        )
    if command == "compare":
        if not 0.0 < args.test_fraction < 1.0:
            raise ConfigError("--test-fraction must be strictly between 0 and 1")
        if args.folds < 2:
            raise ConfigError("--folds must be at least 2")
    return RunConfig(
        command=command,
        seed=int(getattr(args, "seed", 0) or 0),
        data=tuple(getattr(args, "data", []) or []),
        out=getattr(args, "out", None),
        model_path=getattr(args, "model", None),
        algorithms=algorithms,
        test_fraction=getattr(args, "test_fraction", 0.10),
        folds=getattr(args, "folds", 5),
        paper_fidelity=getattr(args, "paper_fidelity", False),
        fit_on_all=getattr(args, "fit_on_all", False),
        routes=getattr(args, "routes", 6),
        kind=getattr(args, "kind", None),
        length_km=getattr(args, "length_km", 10.0),
        compliance=getattr(args, "compliance", 0.95),
        noise_amplitude=getattr(args, "noise_amplitude", 3.0),
        sample_rate=getattr(args, "sample_rate", 1.0),
    )


_COMMANDS = {
    "generate": cmd_generate,
    "train": cmd_train,
    "compare": cmd_compare,
    "evaluate": cmd_evaluate,
    "simulate": cmd_simulate,
}


def main(argv: Sequence[str] | None = None) -> int:
    """Entry point. Returns the process exit code (0, 2, or 3)."""
    logging.basicConfig(
        level=getattr(
            logging, os.environ.get("SPEEDCLASS_LOG", "WARNING").upper(), logging.WARNING
        ),
        format="%(levelname)s %(name)s: %(message)s",
    )
    parser = build_parser()
    try:
        try:
            args = parser.parse_args(argv)
        except SystemExit as exc:  # argparse's --help path
            return int(exc.code or 0)
        config = _config_from_args(args)
        return _COMMANDS[config.command](config)
    except ConfigError as exc:
        print(f"error: {exc}", flush=True)
        return _EXIT_USAGE
    except SpeedClassError as exc:
        print(f"error: {exc}", flush=True)
        return _EXIT_DATA
    except ValueError as exc:
        # Numeric/shape validation from the pipeline: a data problem.
        print(f"data error: {exc}", flush=True)
        return _EXIT_DATA


if __name__ == "__main__":
    raise SystemExit(main())

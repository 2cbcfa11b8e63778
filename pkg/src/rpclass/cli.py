"""Command-line interface.

Subcommands: ``bench`` (run a configured experiment), ``train`` /
``predict`` (fit or apply a serialized model on CSV data), ``jl-check``
(embedding-dimension bound and a distortion demonstration), ``fetch-data``
(EEG dataset fetcher) and ``b1-sweep`` (ensemble-size sweep).

Exit codes: 0 on success, 2 for usage and configuration errors, 1 for
runtime failures.
"""

from __future__ import annotations

import argparse
import dataclasses
import sys
from pathlib import Path

import numpy as np

from .errors import ConfigError, LabelError, ParseError, RpclassError
from .harness import (
    ExperimentConfig,
    b1_sweep,
    emit_report,
    emit_sweep,
    run_experiment,
    summarize,
)
from .ingest import (
    EPILEPSY_URL,
    fetch_epilepsy_dataset,
    load_csv,
    load_epilepsy,
)
from .lda_ensemble import SketchedLdaModel, fit_sketched_lda, predict_sketched_lda_many
from .model_io import load_model, save_model
from .projections import (
    Family,
    JlParams,
    check_distortion,
    jl_dimension_bound,
    sample_projection,
)
from .rp_ensemble import (
    RpEnsembleConfig,
    RpEnsembleModel,
    predict_rp_ensemble_many,
    train_rp_ensemble,
)
from .base_classifiers import BaseClassifierSpec, ClassifierKind
from .streams import stream

_USAGE_ERRORS = (ConfigError, ParseError, LabelError)


def _read_config(path) -> ExperimentConfig:
    try:
        return ExperimentConfig.from_json(path)
    except OSError as exc:
        raise ConfigError(f"cannot read config {path}: {exc}") from exc


def cmd_bench(args) -> int:
    config = _read_config(args.config)
    if args.seed is not None:
        config = dataclasses.replace(config, seed=args.seed)
    if args.jobs is not None:
        config = dataclasses.replace(config, n_jobs=args.jobs)
    report = run_experiment(config)
    if args.out:
        emit_report(report, format=args.format, path=args.out)
        print(f"report written to {args.out}")
    for row in summarize(report):
        mean = "intractable" if row["mean_error"] is None else f"{row['mean_error']:.4f}"
        sd = "" if row["sd_error"] is None else f" +/- {row['sd_error']:.4f}"
        bad = f" ({row['intractable']} intractable)" if row["intractable"] else ""
        print(f"{row['method']:>12}: {mean}{sd}{bad}")
    return 0


def _parse_label_map(raw: str | None):
    if raw is None:
        return None
    mapping = {}
    try:
        for item in raw.split(","):
            source, target = item.split("=")
            mapping[int(source)] = int(target)
    except ValueError:
        raise ConfigError(f"bad label map {raw!r}; expected e.g. '1=1,2=0'") from None
    return mapping


def _load_labeled(args):
    try:
        return load_csv(
            args.data,
            label_column=args.label_column,
            header=args.header,
            label_map=_parse_label_map(args.label_map),
        )
    except OSError as exc:
        raise ConfigError(f"cannot read data {args.data}: {exc}") from exc


def cmd_train(args) -> int:
    data = _load_labeled(args)
    if args.method == "SKETCH_LDA":
        d = args.d or max(1, min(data.n - 2, data.dim) // 2)
        model = fit_sketched_lda(data, d=d, family=Family(args.family), seed=args.seed)
    else:
        kind = {"RP_LDA": ClassifierKind.LDA, "RP_QDA": ClassifierKind.QDA,
                "RP_KNN": ClassifierKind.KNN}[args.method]
        spec = BaseClassifierSpec(kind, knn_k=args.k)
        config = RpEnsembleConfig(
            d=args.d or 5,
            b1=args.b1,
            b2=args.b2,
            base=spec,
            family=Family(args.family),
            alpha=args.alpha,
            seed=args.seed,
        )
        model = train_rp_ensemble(data, config, n_jobs=args.jobs)
    save_model(model, args.out)
    print(f"model written to {args.out}")
    return 0


def cmd_predict(args) -> int:
    model = load_model(args.model)
    if args.label_column is None:
        try:
            features = np.loadtxt(
                args.data, delimiter=",", skiprows=1 if args.header else 0, ndmin=2
            )
        except OSError as exc:
            raise ConfigError(f"cannot read data {args.data}: {exc}") from exc
        except ValueError as exc:
            raise ParseError(f"{args.data}: {exc}") from exc
        labels = None
    else:
        dataset = _load_labeled(args)
        features, labels = dataset.features, dataset.labels
    if isinstance(model, RpEnsembleModel):
        predictions = predict_rp_ensemble_many(model, features)
    elif isinstance(model, SketchedLdaModel):
        predictions = predict_sketched_lda_many(model, features)
    else:
        raise ConfigError(f"loaded model of unsupported type {type(model).__name__}")
    if args.out:
        with open(args.out, "w", encoding="utf-8") as handle:
            handle.write("prediction\n")
            handle.writelines(f"{int(p)}\n" for p in predictions)
        print(f"predictions written to {args.out}")
    else:
        for p in predictions:
            print(int(p))
    if labels is not None:
        print(f"test error: {np.mean(predictions != labels):.4f}")
    return 0


def cmd_jl_check(args) -> int:
    params = JlParams(epsilon=args.eps, delta=args.delta, n_points=args.n)
    bound = jl_dimension_bound(params)
    print(f"jl dimension bound: {bound}")
    if args.p is None:
        return 0
    if bound > args.p:
        print(f"bound exceeds ambient dimension p={args.p}; nothing to check")
        return 0
    rng = stream(args.seed, "points")
    points = rng.standard_normal((args.n, args.p))
    within = 0
    worst = (1.0, 1.0)
    for trial in range(args.trials):
        projection = sample_projection(Family.GAUSSIAN, bound, args.p, args.seed, trial)
        report = check_distortion(projection, points)
        within += report.within(args.eps)
        worst = (min(worst[0], report.min_ratio), max(worst[1], report.max_ratio))
    print(
        f"{within}/{args.trials} trials within (1-eps, 1+eps); "
        f"ratio range over all trials: [{worst[0]:.4f}, {worst[1]:.4f}]"
    )
    return 0


def cmd_fetch_data(args) -> int:
    dataset = fetch_epilepsy_dataset(cache_dir=args.cache_dir, url=args.url)
    print(f"dataset at {dataset.path}")
    print(f"rows: {dataset.n_rows}, feature columns: {dataset.n_feature_columns}")
    loaded = load_epilepsy(dataset)
    n0, n1 = loaded.class_counts()
    print(f"class counts after collapsing: {n0} no-seizure / {n1} seizure")
    return 0


def cmd_b1_sweep(args) -> int:
    config = _read_config(args.config)
    if args.seed is not None:
        config = dataclasses.replace(config, seed=args.seed)
    try:
        grid = tuple(int(b) for b in args.grid.split(","))
    except ValueError:
        raise ConfigError(f"bad grid {args.grid!r}; expected e.g. '10,40,160'") from None
    points = b1_sweep(config, grid, args.ensembles)
    if args.out:
        emit_sweep(points, args.out)
        print(f"sweep written to {args.out}")
    print("B1,mean_error,sd_error")
    for point in points:
        print(f"{point.b1},{point.mean_error:.5f},{point.sd_error:.5f}")
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="rpclass",
        description="Random-projection classifiers: ensembles, sketched LDA, benchmarks.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    bench = sub.add_parser("bench", help="run a benchmark from a JSON config")
    bench.add_argument("--config", required=True, type=Path)
    bench.add_argument("--seed", type=int, default=None, help="override the config seed")
    bench.add_argument("--jobs", type=int, default=None, help="override config n_jobs")
    bench.add_argument("--out", type=Path, default=None)
    bench.add_argument("--format", choices=("csv", "json"), default="csv")
    bench.set_defaults(func=cmd_bench)

    train = sub.add_parser("train", help="fit a model on a CSV file")
    train.add_argument("--data", required=True, type=Path)
    train.add_argument("--label-column", type=int, default=-1)
    train.add_argument("--header", action="store_true")
    train.add_argument("--label-map", default=None, help="e.g. '1=1,2=0,3=0'")
    train.add_argument(
        "--method",
        choices=("RP_LDA", "RP_QDA", "RP_KNN", "SKETCH_LDA"),
        default="RP_LDA",
    )
    train.add_argument("--d", type=int, default=None)
    train.add_argument("--b1", type=int, default=500)
    train.add_argument("--b2", type=int, default=50)
    train.add_argument("--k", type=int, default=5)
    train.add_argument("--family", choices=[f.value for f in Family], default="gaussian")
    train.add_argument("--alpha", type=float, default=None, help="fixed vote threshold")
    train.add_argument("--seed", type=int, default=0)
    train.add_argument("--jobs", type=int, default=1)
    train.add_argument("--out", required=True, type=Path)
    train.set_defaults(func=cmd_train)

    predict = sub.add_parser("predict", help="apply a saved model to a CSV file")
    predict.add_argument("--model", required=True, type=Path)
    predict.add_argument("--data", required=True, type=Path)
    predict.add_argument(
        "--label-column",
        type=int,
        default=None,
        help="if given, the file has labels and the test error is printed",
    )
    predict.add_argument("--header", action="store_true")
    predict.add_argument("--label-map", default=None)
    predict.add_argument("--out", type=Path, default=None)
    predict.set_defaults(func=cmd_predict)

    jl = sub.add_parser("jl-check", help="embedding dimension bound and distortion check")
    jl.add_argument("--n", required=True, type=int, help="number of points")
    jl.add_argument("--eps", required=True, type=float)
    jl.add_argument("--delta", required=True, type=float)
    jl.add_argument("--p", type=int, default=None, help="run a distortion check in R^p")
    jl.add_argument("--trials", type=int, default=20)
    jl.add_argument("--seed", type=int, default=0)
    jl.set_defaults(func=cmd_jl_check)

    fetch = sub.add_parser("fetch-data", help="fetch and cache the EEG dataset")
    fetch.add_argument("--cache-dir", type=Path, default=None)
    fetch.add_argument("--url", default=EPILEPSY_URL)
    fetch.set_defaults(func=cmd_fetch_data)

    sweep = sub.add_parser("b1-sweep", help="error mean/sd against ensemble size")
    sweep.add_argument("--config", required=True, type=Path)
    sweep.add_argument("--grid", default="10,40,160")
    sweep.add_argument("--ensembles", type=int, default=20)
    sweep.add_argument("--seed", type=int, default=None)
    sweep.add_argument("--out", type=Path, default=None)
    sweep.set_defaults(func=cmd_b1_sweep)

    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except _USAGE_ERRORS as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except RpclassError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())

"""Repeated-trial benchmark runner with seeded resampling.

One fixed test set is drawn from the master seed; every repetition draws a
fresh training sample disjoint from it, fits each configured method, and
records the test error.  Methods whose fit is infeasible on a draw (for
example QDA when one class has fewer observations than dimensions) are
recorded as intractable markers rather than dropped, so the report always
has repetitions x methods rows.

All randomness is keyed by (master seed, role, indices), so reports are
identical regardless of parallel scheduling.
"""

from __future__ import annotations

import csv
import json
import time
from dataclasses import asdict, dataclass

import numpy as np
from joblib import Parallel, delayed

from .base_classifiers import BaseClassifierSpec, ClassifierKind, fit_base_classifier
from .data import LabeledDataset
from .errors import INTRACTABLE_ERRORS, ConfigError
from .ingest import fetch_epilepsy_dataset, load_csv, load_epilepsy
from .lda_ensemble import fit_lda_ensemble, fit_sketched_lda, predict_sketched_lda_many
from .projections import Family
from .rp_ensemble import RpEnsembleConfig, predict_rp_ensemble_many, test_error, train_rp_ensemble
from .streams import derive_seed, stream
from .synthetic import SyntheticSpec, generate_synthetic

SCHEMA_VERSION = 1

METHOD_NAMES = (
    "LDA",
    "QDA",
    "LDA_1",
    "LDA_1000",
    "RP_LDA",
    "RP_QDA",
    "RP_KNN",
    "SKETCH_LDA",
    "CONST_0",
    "CONST_1",
)

_RP_BASES = {
    "RP_LDA": ClassifierKind.LDA,
    "RP_QDA": ClassifierKind.QDA,
    "RP_KNN": ClassifierKind.KNN,
}


@dataclass(frozen=True)
class MethodConfig:
    """One roster entry: a method name plus hyperparameter overrides."""

    name: str
    d: int | None = None
    b1: int | None = None
    b2: int | None = None
    k: int = 5
    family: str = Family.GAUSSIAN.value
    alpha: float | None = None

    def __post_init__(self):
        if self.name not in METHOD_NAMES:
            raise ConfigError(f"unknown method {self.name!r}; choose from {METHOD_NAMES}")
        Family(self.family)


@dataclass(frozen=True)
class ExperimentConfig:
    data: dict
    methods: tuple[MethodConfig, ...]
    n_train: int
    n_test: int
    repetitions: int
    seed: int
    record_timings: bool = False
    n_jobs: int = 1

    def __post_init__(self):
        if self.repetitions < 1:
            raise ConfigError("repetitions must be at least 1")
        if self.n_train < 1 or self.n_test < 1:
            raise ConfigError("n_train and n_test must be positive")
        if not self.methods:
            raise ConfigError("the method roster is empty")
        object.__setattr__(self, "methods", tuple(self.methods))

    def to_dict(self) -> dict:
        return {
            "schema_version": SCHEMA_VERSION,
            "data": self.data,
            "methods": [asdict(m) for m in self.methods],
            "n_train": self.n_train,
            "n_test": self.n_test,
            "repetitions": self.repetitions,
            "seed": self.seed,
            "record_timings": self.record_timings,
            "n_jobs": self.n_jobs,
        }

    @staticmethod
    def from_dict(raw: dict) -> "ExperimentConfig":
        try:
            version = raw.get("schema_version", SCHEMA_VERSION)
            if version != SCHEMA_VERSION:
                raise ConfigError(f"unsupported schema_version {version}")
            methods = tuple(MethodConfig(**m) for m in raw["methods"])
            return ExperimentConfig(
                data=raw["data"],
                methods=methods,
                n_train=raw["n_train"],
                n_test=raw["n_test"],
                repetitions=raw["repetitions"],
                seed=raw.get("seed", 0),
                record_timings=raw.get("record_timings", False),
                n_jobs=raw.get("n_jobs", 1),
            )
        except KeyError as exc:
            raise ConfigError(f"config is missing key {exc}") from exc
        except TypeError as exc:
            raise ConfigError(f"bad config entry: {exc}") from exc

    @staticmethod
    def from_json(path) -> "ExperimentConfig":
        with open(path, encoding="utf-8") as handle:
            try:
                raw = json.load(handle)
            except json.JSONDecodeError as exc:
                raise ConfigError(f"{path}: invalid JSON ({exc})") from exc
        return ExperimentConfig.from_dict(raw)


@dataclass(frozen=True)
class RunResult:
    repetition: int
    method: str
    error: float | None
    intractable: bool
    seconds: float


@dataclass(frozen=True)
class ExperimentReport:
    config: dict
    n_features: int
    results: tuple[RunResult, ...]

    def to_dict(self) -> dict:
        return {
            "config": self.config,
            "n_features": self.n_features,
            "results": [asdict(r) for r in self.results],
        }

    @staticmethod
    def from_dict(raw: dict) -> "ExperimentReport":
        return ExperimentReport(
            config=raw["config"],
            n_features=raw["n_features"],
            results=tuple(RunResult(**r) for r in raw["results"]),
        )

    def errors_by_method(self) -> dict[str, list[float]]:
        grouped: dict[str, list[float]] = {}
        for result in self.results:
            if not result.intractable:
                grouped.setdefault(result.method, []).append(result.error)
        return grouped


def _default_half_min_d(n: int, p: int) -> int:
    return max(1, min(n - 2, p) // 2)


def _synthetic_spec(data_cfg: dict) -> SyntheticSpec:
    try:
        return SyntheticSpec(
            model=data_cfg["model"],
            p=data_cfg["p"],
            pi_0=data_cfg.get("pi_0", 0.5),
            delta=data_cfg.get("delta", 2.0),
            n_relevant=data_cfg.get("n_relevant"),
        )
    except (KeyError, ValueError) as exc:
        raise ConfigError(f"bad synthetic data spec: {exc}") from exc


def _resolve_table(data_cfg: dict) -> LabeledDataset:
    kind = data_cfg.get("kind")
    if kind == "csv":
        try:
            path = data_cfg["path"]
        except KeyError:
            raise ConfigError("csv data spec needs a 'path'") from None
        label_map = data_cfg.get("label_map")
        if label_map is not None:
            label_map = {int(k): int(v) for k, v in label_map.items()}
        return load_csv(
            path,
            label_column=data_cfg.get("label_column", -1),
            header=data_cfg.get("header", False),
            label_map=label_map,
            delimiter=data_cfg.get("delimiter", ","),
            drop_columns=tuple(data_cfg.get("drop_columns", ())),
        )
    if kind == "epilepsy":
        dataset_file = fetch_epilepsy_dataset(cache_dir=data_cfg.get("cache_dir"))
        return load_epilepsy(dataset_file)
    raise ConfigError(f"unknown data kind {kind!r}")


def _train_test_source(config: ExperimentConfig):
    """Return (test set, callable repetition -> training set, n_features)."""
    data_cfg = config.data
    if data_cfg.get("kind") == "synthetic":
        spec = _synthetic_spec(data_cfg)
        test = generate_synthetic(spec, config.n_test, derive_seed(config.seed, "test"))

        def training_set(rep: int) -> LabeledDataset:
            return generate_synthetic(
                spec, config.n_train, derive_seed(config.seed, "train", rep)
            )

        return test, training_set, spec.p

    table = _resolve_table(data_cfg)
    if config.n_train + config.n_test > table.n:
        raise ConfigError(
            f"n_train + n_test = {config.n_train + config.n_test} exceeds the "
            f"{table.n} available observations"
        )
    permutation = stream(config.seed, "split").permutation(table.n)
    test = table.subset(np.sort(permutation[: config.n_test]))
    pool = permutation[config.n_test :]

    def training_set(rep: int) -> LabeledDataset:
        rows = stream(config.seed, "train", rep).choice(pool, config.n_train, replace=False)
        return table.subset(np.sort(rows))

    return test, training_set, table.dim


def _fit_and_classify(method: MethodConfig, train: LabeledDataset, seed: int):
    """Fit one roster method; returns a callable features -> labels."""
    name = method.name
    if name == "CONST_0" or name == "CONST_1":
        label = int(name[-1])
        return lambda x: np.full(x.shape[0], label, dtype=np.int64)
    if name == "LDA":
        fitted = fit_base_classifier(BaseClassifierSpec(ClassifierKind.LDA), train)
        return fitted.predict_many
    if name == "QDA":
        fitted = fit_base_classifier(BaseClassifierSpec(ClassifierKind.QDA), train)
        return fitted.predict_many
    if name in ("LDA_1", "LDA_1000"):
        d = method.d or _default_half_min_d(train.n, train.dim)
        b = method.b1 or (1 if name == "LDA_1" else 1000)
        model = fit_lda_ensemble(train, d=d, b=b, family=Family(method.family), seed=seed)
        return model.predict_many
    if name == "SKETCH_LDA":
        d = method.d or _default_half_min_d(train.n, train.dim)
        model = fit_sketched_lda(train, d=d, family=Family(method.family), seed=seed)
        return lambda x: predict_sketched_lda_many(model, x)
    base_kind = _RP_BASES[name]
    spec = (
        BaseClassifierSpec(base_kind, knn_k=method.k)
        if base_kind is ClassifierKind.KNN
        else BaseClassifierSpec(base_kind)
    )
    rp_config = RpEnsembleConfig(
        d=method.d or 5,
        b1=method.b1 or 500,
        b2=method.b2 or 50,
        base=spec,
        family=Family(method.family),
        alpha=method.alpha,
        seed=seed,
    )
    model = train_rp_ensemble(train, rp_config)
    return lambda x: predict_rp_ensemble_many(model, x)


def _run_repetition(
    config: ExperimentConfig, rep: int, train: LabeledDataset, test: LabeledDataset
) -> list[RunResult]:
    results = []
    for index, method in enumerate(config.methods):
        seed = derive_seed(config.seed, "method", rep, index)
        start = time.perf_counter()
        try:
            classify = _fit_and_classify(method, train, seed)
            error = test_error(classify, test)
            intractable = False
        except INTRACTABLE_ERRORS:
            error = None
            intractable = True
        seconds = time.perf_counter() - start if config.record_timings else 0.0
        results.append(RunResult(rep, method.name, error, intractable, seconds))
    return results


def run_experiment(config: ExperimentConfig) -> ExperimentReport:
    """Run the full repetitions x methods grid and collect a report."""
    test, training_set, n_features = _train_test_source(config)

    def one_rep(rep: int) -> list[RunResult]:
        return _run_repetition(config, rep, training_set(rep), test)

    reps = range(config.repetitions)
    if config.n_jobs == 1:
        per_rep = [one_rep(rep) for rep in reps]
    else:
        per_rep = Parallel(n_jobs=config.n_jobs)(delayed(one_rep)(rep) for rep in reps)
    results = tuple(result for rep_results in per_rep for result in rep_results)
    return ExperimentReport(config=config.to_dict(), n_features=n_features, results=results)


REPORT_CSV_COLUMNS = ("repetition", "method", "error", "intractable", "seconds")


def emit_report(report: ExperimentReport, format: str = "csv", path=None):
    """Write the report losslessly as json or csv (one row per result)."""
    if format == "json":
        with open(path, "w", encoding="utf-8") as handle:
            json.dump(report.to_dict(), handle, indent=2, sort_keys=True)
            handle.write("\n")
        return
    if format != "csv":
        raise ValueError(f"unknown report format {format!r}")
    with open(path, "w", newline="", encoding="utf-8") as handle:
        writer = csv.writer(handle)
        writer.writerow(REPORT_CSV_COLUMNS)
        for r in report.results:
            writer.writerow(
                [
                    r.repetition,
                    r.method,
                    "" if r.error is None else repr(r.error),
                    "true" if r.intractable else "false",
                    repr(r.seconds),
                ]
            )


def load_report_json(path) -> ExperimentReport:
    with open(path, encoding="utf-8") as handle:
        return ExperimentReport.from_dict(json.load(handle))


def summarize(report: ExperimentReport) -> list[dict]:
    """Per-method mean/sd of the tractable errors plus intractable counts."""
    rows = []
    seen = []
    for result in report.results:
        if result.method not in seen:
            seen.append(result.method)
    grouped = report.errors_by_method()
    for method in seen:
        errors = grouped.get(method, [])
        n_bad = sum(r.method == method and r.intractable for r in report.results)
        rows.append(
            {
                "method": method,
                "mean_error": float(np.mean(errors)) if errors else None,
                "sd_error": float(np.std(errors, ddof=1)) if len(errors) > 1 else None,
                "intractable": n_bad,
            }
        )
    return rows


@dataclass(frozen=True)
class SweepPoint:
    b1: int
    mean_error: float
    sd_error: float
    errors: tuple[float, ...]


def b1_sweep(
    config: ExperimentConfig, grid: tuple[int, ...], n_ensembles: int
) -> list[SweepPoint]:
    """Error mean/sd over repeated ensembles for each ensemble size in the grid.

    One training sample and one test set stay fixed; for each b1 in the
    grid, ``n_ensembles`` ensembles are trained with different seeds and
    their test errors summarised.  Ensemble e uses the same per-group
    streams at every b1, so larger ensembles extend smaller ones.
    """
    if len(config.methods) != 1 or config.methods[0].name not in _RP_BASES:
        raise ConfigError("b1 sweep needs exactly one RP_* method in the roster")
    if n_ensembles < 2:
        raise ConfigError("need at least 2 ensembles per grid point")
    method = config.methods[0]
    test, training_set, _ = _train_test_source(config)
    train = training_set(0)
    base_kind = _RP_BASES[method.name]
    spec = (
        BaseClassifierSpec(base_kind, knn_k=method.k)
        if base_kind is ClassifierKind.KNN
        else BaseClassifierSpec(base_kind)
    )
    points = []
    for b1 in grid:
        errors = []
        for ensemble in range(n_ensembles):
            rp_config = RpEnsembleConfig(
                d=method.d or 5,
                b1=b1,
                b2=method.b2 or 50,
                base=spec,
                family=Family(method.family),
                alpha=method.alpha,
                seed=derive_seed(config.seed, "sweep", ensemble),
            )
            model = train_rp_ensemble(train, rp_config)
            errors.append(test_error(lambda x: predict_rp_ensemble_many(model, x), test))
        points.append(
            SweepPoint(
                b1=int(b1),
                mean_error=float(np.mean(errors)),
                sd_error=float(np.std(errors, ddof=1)),
                errors=tuple(errors),
            )
        )
    return points


def emit_sweep(points: list[SweepPoint], path):
    """Write sweep results as csv with columns B1, mean_error, sd_error."""
    with open(path, "w", newline="", encoding="utf-8") as handle:
        writer = csv.writer(handle)
        writer.writerow(("B1", "mean_error", "sd_error"))
        for point in points:
            writer.writerow([point.b1, repr(point.mean_error), repr(point.sd_error)])

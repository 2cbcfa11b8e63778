"""CSV ingestion and the epileptic-seizure EEG dataset fetcher."""

from __future__ import annotations

import csv
import hashlib
import os
from dataclasses import dataclass
from pathlib import Path

import numpy as np
import requests

from .data import LabeledDataset
from .errors import ChecksumMismatch, LabelError, NetworkError, NonFinite, ParseError

EPILEPSY_URL = "https://archive.ics.uci.edu/ml/machine-learning-databases/00388/data.csv"
EPILEPSY_FILENAME = "epileptic_seizure.csv"
EPILEPSY_ROWS = 11500
EPILEPSY_FEATURES = 178
EPILEPSY_RAW_LABELS = (1, 2, 3, 4, 5)
# recording 1 is a seizure; recordings 2-5 are the collapsed "no seizure" class
EPILEPSY_LABEL_MAP = {1: 1, 2: 0, 3: 0, 4: 0, 5: 0}
CACHE_ENV_VAR = "RPCLASS_CACHE"


@dataclass(frozen=True)
class DatasetFile:
    """A delimited table on disk plus how to read it."""

    path: Path
    n_rows: int
    n_feature_columns: int
    label_column: int = -1
    header: bool = True
    drop_columns: tuple[int, ...] = ()


def _parse_label(raw: str, label_map: dict | None, row: int):
    raw = raw.strip()
    try:
        value = int(raw)
    except ValueError:
        try:
            as_float = float(raw)
        except ValueError:
            raise LabelError(f"row {row}: label {raw!r} is not numeric") from None
        if not as_float.is_integer():
            raise LabelError(f"row {row}: label {raw!r} is not an integer") from None
        value = int(as_float)
    if label_map is not None:
        if value not in label_map:
            raise LabelError(f"row {row}: label {value} has no mapping")
        value = label_map[value]
    if value not in (0, 1):
        raise LabelError(f"row {row}: label {value} is not in {{0, 1}}")
    return value


def load_csv(
    path,
    label_column: int = -1,
    header: bool = False,
    label_map: dict | None = None,
    delimiter: str = ",",
    drop_columns: tuple[int, ...] = (),
) -> LabeledDataset:
    """Read a delimited table into a dataset, preserving the row order.

    ``label_column`` and ``drop_columns`` index the raw file columns
    (negatives count from the end).  Labels go through ``label_map`` first
    and must come out as 0 or 1.
    """
    rows = []
    labels = []
    width = None
    with open(path, newline="", encoding="utf-8") as handle:
        reader = csv.reader(handle, delimiter=delimiter)
        for i, record in enumerate(reader):
            if i == 0 and header:
                continue
            if not record:
                continue
            if width is None:
                width = len(record)
                label_idx = label_column % width
                dropped = {c % width for c in drop_columns}
                if label_idx in dropped:
                    raise ValueError("label column cannot be dropped")
                feature_idx = [
                    c for c in range(width) if c != label_idx and c not in dropped
                ]
            elif len(record) != width:
                raise ParseError(f"row {i}: expected {width} fields, got {len(record)}")
            labels.append(_parse_label(record[label_idx], label_map, i))
            try:
                rows.append([float(record[c]) for c in feature_idx])
            except ValueError:
                for c in feature_idx:
                    try:
                        float(record[c])
                    except ValueError:
                        raise ParseError(
                            f"row {i}, column {c}: {record[c]!r} is not a number"
                        ) from None
                raise
    if width is None:
        raise ParseError(f"{path}: no data rows")
    features = np.asarray(rows, dtype=np.float64)
    if not np.isfinite(features).all():
        raise NonFinite(f"{path}: features contain NaN or infinite values")
    return LabeledDataset(features, np.asarray(labels))


def _sha256(path: Path) -> str:
    digest = hashlib.sha256()
    with open(path, "rb") as handle:
        for chunk in iter(lambda: handle.read(1 << 20), b""):
            digest.update(chunk)
    return digest.hexdigest()


def _download(url: str, dest: Path):
    try:
        response = requests.get(url, timeout=120)
        response.raise_for_status()
    except requests.RequestException as exc:
        raise NetworkError(f"download of {url} failed: {exc}") from exc
    dest.write_bytes(response.content)


def default_cache_dir() -> Path:
    env = os.environ.get(CACHE_ENV_VAR)
    if env:
        return Path(env)
    return Path.home() / ".cache" / "rpclass"


def _inspect_epilepsy_table(path: Path) -> tuple[int, bool]:
    """Return (data rows, whether the first column is a non-numeric id)."""
    with open(path, newline="", encoding="utf-8") as handle:
        reader = csv.reader(handle)
        try:
            next(reader)  # header
        except StopIteration:
            raise ParseError(f"{path}: empty file") from None
        n_rows = 0
        width = None
        has_id = False
        labels_seen = set()
        for i, record in enumerate(reader, start=1):
            if not record:
                continue
            if width is None:
                width = len(record)
                try:
                    float(record[0])
                except ValueError:
                    has_id = True
            elif len(record) != width:
                raise ParseError(f"row {i}: expected {width} fields, got {len(record)}")
            labels_seen.add(record[-1].strip())
            n_rows += 1
    n_features = width - 1 - int(has_id)
    if n_features != EPILEPSY_FEATURES:
        raise ParseError(
            f"{path}: expected {EPILEPSY_FEATURES} feature columns, found {n_features}"
        )
    expected_labels = {str(v) for v in EPILEPSY_RAW_LABELS}
    if not labels_seen <= expected_labels:
        raise ParseError(f"{path}: unexpected labels {sorted(labels_seen - expected_labels)}")
    return n_rows, has_id


def fetch_epilepsy_dataset(
    cache_dir=None, url: str = EPILEPSY_URL, downloader=None
) -> DatasetFile:
    """Fetch (or reuse) the 11500 x 178 EEG recording table.

    The file is cached on disk and its sha256 digest recorded on first
    fetch; later calls verify the cache against that digest and never touch
    the network.  The raw labels are 1-5; see ``load_epilepsy`` for the
    binary collapse.
    """
    cache_dir = Path(cache_dir) if cache_dir is not None else default_cache_dir()
    cache_dir.mkdir(parents=True, exist_ok=True)
    path = cache_dir / EPILEPSY_FILENAME
    digest_path = path.with_suffix(path.suffix + ".sha256")
    if not path.exists():
        (downloader or _download)(url, path)
    digest = _sha256(path)
    if digest_path.exists():
        recorded = digest_path.read_text().strip()
        if digest != recorded:
            raise ChecksumMismatch(
                f"{path}: sha256 {digest} does not match recorded {recorded}"
            )
    n_rows, has_id = _inspect_epilepsy_table(path)
    if n_rows != EPILEPSY_ROWS:
        raise ParseError(f"{path}: expected {EPILEPSY_ROWS} data rows, found {n_rows}")
    if not digest_path.exists():
        digest_path.write_text(digest + "\n")
    return DatasetFile(
        path=path,
        n_rows=n_rows,
        n_feature_columns=EPILEPSY_FEATURES,
        label_column=-1,
        header=True,
        drop_columns=(0,) if has_id else (),
    )


def load_epilepsy(dataset: DatasetFile) -> LabeledDataset:
    """Load the fetched table with the four no-seizure recordings collapsed to 0."""
    return load_csv(
        dataset.path,
        label_column=dataset.label_column,
        header=dataset.header,
        label_map=EPILEPSY_LABEL_MAP,
        drop_columns=dataset.drop_columns,
    )

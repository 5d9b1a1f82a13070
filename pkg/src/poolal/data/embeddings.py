"""Embedding CSV ingestion and canonical serialization.

File layout (UTF-8, LF)::

    id,split,label[K=3],f0,f1
    0,train,2,0.25,-1.5
    1,test,0,1.0,0.0

The header declares the class count K in the label column and the feature
dimension d through the f0..f<d-1> columns. Ids are dense 0..N-1 across
both splits.
"""

import csv
import io
import logging
import math
import re
from pathlib import Path

import numpy as np
from numpy.typing import ArrayLike
from pydantic import ValidationError

from poolal.core.errors import DatasetFormatError, ReportIOError
from poolal.core.models.dataset import Dataset
from poolal.core.models.ids import Split
from poolal.core.util.hashing import hash_text

logger = logging.getLogger(__name__)

_LABEL_HEADER = re.compile(r"^label\[K=(\d+)\]$")


def _header(class_count: int, feature_dim: int) -> list[str]:
    return ["id", "split", f"label[K={class_count}]", *(f"f{j}" for j in range(feature_dim))]


def _canonical_text(
    class_count: int,
    feature_dim: int,
    ids: np.ndarray,
    splits: list[str],
    labels: np.ndarray,
    features: np.ndarray,
) -> str:
    buffer = io.StringIO()
    writer = csv.writer(buffer, lineterminator="\n")
    writer.writerow(_header(class_count, feature_dim))
    for row in np.argsort(ids, kind="stable"):
        writer.writerow(
            [
                int(ids[row]),
                splits[row],
                int(labels[row]),
                *(repr(float(x)) for x in features[row]),
            ]
        )
    return buffer.getvalue()


def serialize_dataset(dataset: Dataset) -> str:
    """Canonical CSV text: rows sorted by id, floats in shortest round-trip form."""
    ids = np.concatenate([dataset.train_ids, dataset.test_ids])
    splits = [Split.TRAIN.value] * dataset.train_size + [Split.TEST.value] * dataset.test_size
    labels = np.concatenate([dataset.train_labels, dataset.test_labels])
    features = np.concatenate([dataset.train_features, dataset.test_features])
    return _canonical_text(dataset.class_count, dataset.feature_dim, ids, splits, labels, features)


def build_dataset(
    name: str,
    class_count: int,
    train: tuple[ArrayLike, ArrayLike, ArrayLike],
    test: tuple[ArrayLike, ArrayLike, ArrayLike],
) -> Dataset:
    """Assemble a Dataset and stamp it with the digest of its canonical text.

    Args:
        name: Dataset name (not part of the digest).
        class_count: Number of classes K.
        train: (ids, features, labels) of the training split.
        test: (ids, features, labels) of the test split.
    """
    tr_ids, tr_x, tr_y = (np.asarray(a) for a in train)
    te_ids, te_x, te_y = (np.asarray(a) for a in test)
    tr_x = np.atleast_2d(tr_x.astype(np.float64))
    te_x = te_x.astype(np.float64).reshape(len(te_ids), tr_x.shape[1])

    ids = np.concatenate([tr_ids, te_ids]).astype(np.int64)
    splits = [Split.TRAIN.value] * len(tr_ids) + [Split.TEST.value] * len(te_ids)
    labels = np.concatenate([tr_y, te_y]).astype(np.int64)
    features = np.concatenate([tr_x, te_x])
    digest = hash_text(
        _canonical_text(class_count, tr_x.shape[1], ids, splits, labels, features)
    )

    arrays = {
        "train_ids": tr_ids.astype(np.int64),
        "train_features": tr_x,
        "train_labels": tr_y.astype(np.int64),
        "test_ids": te_ids.astype(np.int64),
        "test_features": te_x,
        "test_labels": te_y.astype(np.int64),
    }
    for arr in arrays.values():
        arr.setflags(write=False)
    return Dataset(
        name=name,
        feature_dim=tr_x.shape[1],
        class_count=class_count,
        digest=digest,
        **arrays,
    )


def _parse_header(row: list[str]) -> tuple[int, int]:
    if len(row) < 4 or row[0] != "id" or row[1] != "split":
        raise DatasetFormatError(
            "header must start with id,split,label[K=<K>] and name at least one feature",
            line=1,
        )
    match = _LABEL_HEADER.match(row[2])
    if not match:
        raise DatasetFormatError("label column must read label[K=<K>]", line=1, field=row[2])
    class_count = int(match.group(1))
    if class_count < 1:
        raise DatasetFormatError("K must be at least 1", line=1, field=row[2])
    for j, name in enumerate(row[3:]):
        if name != f"f{j}":
            raise DatasetFormatError(f"expected feature column f{j}", line=1, field=name)
    return class_count, len(row) - 3


def _parse_int(text: str, line: int, field: str) -> int:
    try:
        return int(text)
    except ValueError:
        raise DatasetFormatError(f"not an integer: {text!r}", line=line, field=field) from None


def _parse_float(text: str, line: int, field: str) -> float:
    try:
        value = float(text)
    except ValueError:
        raise DatasetFormatError(f"not a number: {text!r}", line=line, field=field) from None
    if not math.isfinite(value):
        raise DatasetFormatError(f"non-finite value {text!r}", line=line, field=field)
    return value


def parse_embedding_csv(text: str, name: str = "embeddings") -> Dataset:
    """Parse embedding CSV text into a validated Dataset.

    Raises:
        DatasetFormatError: Naming the offending line (1-based, header is line 1)
            and field for ragged rows, bad numbers, unknown split tags,
            labels >= K, duplicate ids, or an empty data section.
    """
    rows = list(csv.reader(io.StringIO(text)))
    if not rows:
        raise DatasetFormatError("file is empty", line=1)
    class_count, feature_dim = _parse_header(rows[0])
    width = feature_dim + 3

    seen: dict[int, int] = {}
    split_rows: dict[str, tuple[list[int], list[list[float]], list[int]]] = {
        Split.TRAIN.value: ([], [], []),
        Split.TEST.value: ([], [], []),
    }
    for line, row in enumerate(rows[1:], start=2):
        if not row:
            continue
        if len(row) != width:
            raise DatasetFormatError(f"expected {width} fields, got {len(row)}", line=line)
        instance_id = _parse_int(row[0], line, "id")
        if instance_id < 0:
            raise DatasetFormatError("id must be non-negative", line=line, field="id")
        if instance_id in seen:
            raise DatasetFormatError(
                f"duplicate id {instance_id} (first on line {seen[instance_id]})",
                line=line,
                field="id",
            )
        seen[instance_id] = line
        split = row[1]
        if split not in split_rows:
            raise DatasetFormatError(f"unknown split tag {split!r}", line=line, field="split")
        label = _parse_int(row[2], line, "label")
        if not 0 <= label < class_count:
            raise DatasetFormatError(
                f"label {label} outside 0..{class_count - 1}", line=line, field="label"
            )
        features = [_parse_float(v, line, f"f{j}") for j, v in enumerate(row[3:])]
        ids, feats, labels = split_rows[split]
        ids.append(instance_id)
        feats.append(features)
        labels.append(label)

    if not seen:
        raise DatasetFormatError("no data rows after the header", line=2)
    missing = sorted(set(range(len(seen))) - set(seen))
    if missing:
        raise DatasetFormatError(
            f"ids must be dense 0..{len(seen) - 1}; missing {missing[0]}", field="id"
        )
    if not split_rows[Split.TRAIN.value][0]:
        raise DatasetFormatError("no training rows", field="split")

    def _arrays(split: str) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
        ids, feats, labels = split_rows[split]
        return (
            np.asarray(ids, dtype=np.int64),
            np.asarray(feats, dtype=np.float64).reshape(len(ids), feature_dim),
            np.asarray(labels, dtype=np.int64),
        )

    try:
        dataset = build_dataset(
            name, class_count, _arrays(Split.TRAIN.value), _arrays(Split.TEST.value)
        )
    except ValidationError as e:
        raise DatasetFormatError(str(e)) from e
    logger.debug(
        "Parsed %s: %d train, %d test, d=%d, K=%d",
        name,
        dataset.train_size,
        dataset.test_size,
        feature_dim,
        class_count,
    )
    return dataset


def load_embedding_csv(path: Path) -> Dataset:
    """Load an embedding CSV; the dataset is named after the file stem.

    Raises:
        ReportIOError: If the file cannot be read.
        DatasetFormatError: If it does not parse.
    """
    path = Path(path)
    try:
        text = path.read_text(encoding="utf-8")
    except OSError as e:
        raise ReportIOError(path, e) from e
    return parse_embedding_csv(text, name=path.stem)


def write_embedding_csv(dataset: Dataset, path: Path) -> str:
    """Write the canonical serialization of ``dataset`` and return its digest."""
    path = Path(path)
    text = serialize_dataset(dataset)
    try:
        path.parent.mkdir(parents=True, exist_ok=True)
        with path.open("w", encoding="utf-8", newline="\n") as handle:
            handle.write(text)
    except OSError as e:
        raise ReportIOError(path, e) from e
    return hash_text(text)

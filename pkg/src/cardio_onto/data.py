"""Loading, validation, deduplication and partitioning of the cardiovascular dataset."""
from __future__ import annotations

import csv
import hashlib
from dataclasses import dataclass, field
from functools import cached_property
from pathlib import Path
from typing import NamedTuple, Sequence

import numpy as np

FEATURES = (
    "age", "gender", "height", "weight", "ap_hi", "ap_lo",
    "cholesterol", "gluc", "smoke", "alco", "active",
)
TARGET = "cardio"
COLUMNS = FEATURES + (TARGET,)

# allowed values for the coded columns
DOMAINS = {
    "gender": {1, 2},
    "cholesterol": {1, 2, 3},
    "gluc": {1, 2, 3},
    "smoke": {0, 1},
    "alco": {0, 1},
    "active": {0, 1},
    "cardio": {0, 1},
}
POSITIVE = ("age", "height", "weight")
FLOAT_COLUMNS = {"weight"}

# column indices, used as defaults by the tree learners
CATEGORICAL = (FEATURES.index("cholesterol"), FEATURES.index("gluc"))
BINARY = tuple(FEATURES.index(f) for f in ("gender", "smoke", "alco", "active"))


class PatientRecord(NamedTuple):
    age: int
    gender: int
    height: int
    weight: float
    ap_hi: int
    ap_lo: int
    cholesterol: int
    gluc: int
    smoke: int
    alco: int
    active: int
    cardio: int

    def features(self) -> tuple:
        return self[:-1]


class LoadError(ValueError):
    """Raised for a malformed input file; carries the offending line number."""

    def __init__(self, path, line: int, message: str):
        self.path = str(path)
        self.line = line
        super().__init__(f"{self.path}:{line}: {message}")


class SplitError(ValueError):
    pass


@dataclass(frozen=True)
class Dataset:
    records: tuple[PatientRecord, ...]
    source: str = "<memory>"
    rows_read: int | None = None
    removed: int = 0

    def __post_init__(self):
        object.__setattr__(self, "records", tuple(self.records))
        if self.rows_read is None:
            object.__setattr__(self, "rows_read", len(self.records))

    def __len__(self) -> int:
        return len(self.records)

    def __iter__(self):
        return iter(self.records)

    def __getitem__(self, i):
        return self.records[i]

    @cached_property
    def X(self) -> np.ndarray:
        """Feature matrix in column order ``FEATURES`` (float64)."""
        if not self.records:
            return np.empty((0, len(FEATURES)))
        X = np.array([r[:-1] for r in self.records], dtype=np.float64)
        X.setflags(write=False)
        return X

    @cached_property
    def y(self) -> np.ndarray:
        y = np.array([r.cardio for r in self.records], dtype=np.int64)
        y.setflags(write=False)
        return y

    def subset(self, indices) -> "Dataset":
        return Dataset(tuple(self.records[i] for i in indices), source=self.source)

    def class_counts(self) -> dict[int, int]:
        n1 = sum(r.cardio for r in self.records)
        return {0: len(self.records) - n1, 1: n1}

    def fingerprint(self) -> str:
        h = hashlib.sha256()
        for r in self.records:
            h.update(repr(tuple(r)).encode())
        return h.hexdigest()[:16]


@dataclass(frozen=True)
class SplitSpec:
    mode: str = "percentage_split"
    train_fraction: float = 0.60
    k: int = 10
    seed: int = 1
    stratified: bool = True

    def __post_init__(self):
        if self.mode not in ("percentage_split", "k_fold"):
            raise ValueError(f"unknown split mode {self.mode!r}")
        if not 0 < self.train_fraction < 1:
            raise ValueError("train_fraction must lie strictly between 0 and 1")
        if self.k < 2:
            raise ValueError("k must be at least 2")


def _parse_value(name: str, text: str):
    text = text.strip()
    try:
        value = float(text)
    except ValueError:
        raise ValueError(f"{name}: non-numeric value {text!r}") from None
    if not np.isfinite(value):
        raise ValueError(f"{name}: non-finite value {text!r}")
    if name not in FLOAT_COLUMNS:
        if not value.is_integer():
            raise ValueError(f"{name}: expected an integer, got {text!r}")
        value = int(value)
    if name in DOMAINS and value not in DOMAINS[name]:
        allowed = ",".join(str(v) for v in sorted(DOMAINS[name]))
        raise ValueError(f"{name}={text} outside {{{allowed}}}")
    if name in POSITIVE and value <= 0:
        raise ValueError(f"{name} must be positive, got {text}")
    return value


def parse_record(fields: Sequence[str]) -> PatientRecord:
    return PatientRecord(*(_parse_value(n, v) for n, v in zip(COLUMNS, fields)))


def load_csv(path, delimiter: str = ";") -> Dataset:
    """Read a delimited file with a header row into a :class:`Dataset`.

    Columns are matched by header name, so any column order works; an ``id``
    column is accepted and dropped. Errors report the 1-based file line and
    the 1-based data row.
    """
    path = Path(path)
    records = []
    with path.open(newline="", encoding="utf-8") as fh:
        reader = csv.reader(fh, delimiter=delimiter)
        try:
            header = [h.strip().strip('"') for h in next(reader)]
        except StopIteration:
            raise LoadError(path, 1, "missing header row") from None
        names = [h for h in header if h != "id"]
        if sorted(names) != sorted(COLUMNS) or len(header) - len(names) > 1:
            raise LoadError(
                path, 1, f"header must hold {', '.join(COLUMNS)} (plus optional id); got {header}"
            )
        order = [header.index(c) for c in COLUMNS]
        for row_no, row in enumerate(reader, start=1):
            line = reader.line_num
            if not row:
                continue
            if len(row) != len(header):
                raise LoadError(
                    path, line, f"row {row_no}: expected {len(header)} fields, got {len(row)}"
                )
            try:
                records.append(parse_record([row[i] for i in order]))
            except ValueError as exc:
                raise LoadError(path, line, f"row {row_no}: {exc}") from None
    return Dataset(tuple(records), source=str(path))


def _format(value) -> str:
    return repr(value) if isinstance(value, float) else str(value)


def write_csv(d: Dataset, path, delimiter: str = ";", with_id: bool = False) -> None:
    with Path(path).open("w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh, delimiter=delimiter, lineterminator="\n")
        writer.writerow((("id",) if with_id else ()) + COLUMNS)
        for i, r in enumerate(d.records):
            writer.writerow(((i,) if with_id else ()) + tuple(_format(v) for v in r))


def deduplicate(d: Dataset) -> Dataset:
    """Keep the first occurrence of every distinct 12-field record."""
    kept = tuple(dict.fromkeys(d.records))
    return Dataset(kept, source=d.source, rows_read=d.rows_read,
                   removed=d.removed + len(d.records) - len(kept))


def percentage_split(d: Dataset, spec: SplitSpec | None = None, seed: int | None = None):
    spec = spec or SplitSpec()
    if spec.mode != "percentage_split":
        raise SplitError("percentage_split needs a SplitSpec in percentage_split mode")
    n = len(d)
    if n < 2:
        raise SplitError(f"cannot split a dataset of {n} record(s)")
    rng = np.random.default_rng(spec.seed if seed is None else seed)
    perm = rng.permutation(n)
    n_train = int(np.floor(n * spec.train_fraction))
    return d.subset(perm[:n_train]), d.subset(perm[n_train:])


def stratified_folds(d: Dataset, k: int = 10, seed: int = 1, stratified: bool = True) -> list[np.ndarray]:
    """Partition ``range(len(d))`` into ``k`` disjoint, sorted index arrays.

    Records of each class are shuffled, laid end to end (class 0 first) and
    dealt round-robin, so fold sizes differ by at most one and each class is
    spread within one instance of its global share.
    """
    n = len(d)
    if k < 2:
        raise SplitError("k must be at least 2")
    if k > n:
        raise SplitError(f"k={k} exceeds dataset size {n}")
    rng = np.random.default_rng(seed)
    if stratified:
        y = d.y
        parts = []
        for c in (0, 1):
            idx = np.flatnonzero(y == c)
            if 0 < idx.size < k:
                raise SplitError(f"class {c} has {idx.size} members, fewer than k={k}")
            parts.append(rng.permutation(idx))
        order = np.concatenate(parts)
    else:
        order = rng.permutation(n)
    slot = np.arange(n) % k
    return [np.sort(order[slot == f]) for f in range(k)]

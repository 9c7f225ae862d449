"""Dataset schemas, loading, encoding, splitting, and feature scaling.

A schema is a small plain-text file declaring the column layout of a
delimited dataset: per-column kind (numeric, categorical with its level
list, the target with its raw-value map, or ignore), the delimiter,
whether a header row is present, and an optional missing-value token.

Encoding is one-hot for categoricals (one column per declared level, in
declared order) and passthrough for numerics, so the feature dimension is
fixed by the schema alone, not by which levels happen to occur.
"""

import csv
import io
from dataclasses import dataclass

import numpy as np

from .errors import InputError

COLUMN_KINDS = ("numeric", "categorical", "target", "ignore")
_DELIMITERS = {"whitespace": None, "comma": ",", "semicolon": ";"}
SCHEMA_VERSION = 1


@dataclass(frozen=True)
class ColumnSpec:
    """One column of a raw dataset."""

    name: str
    kind: str
    levels: tuple = None       # categorical only, in declared order
    target_map: dict = None    # target only, raw string -> 0/1


@dataclass(frozen=True)
class DatasetSchema:
    name: str
    delimiter: str             # key into _DELIMITERS
    header: bool
    missing_token: str         # None when the dataset has no missing marker
    columns: tuple

    @property
    def target_index(self):
        for i, col in enumerate(self.columns):
            if col.kind == "target":
                return i
        raise AssertionError("schema validated with no target")

    @property
    def feature_columns(self):
        return tuple(c for c in self.columns if c.kind in ("numeric", "categorical"))

    @property
    def feature_names(self):
        """Encoded feature names: numerics as-is, categoricals name=level."""
        names = []
        for col in self.feature_columns:
            if col.kind == "numeric":
                names.append(col.name)
            else:
                names.extend(f"{col.name}={lv}" for lv in col.levels)
        return tuple(names)

    @property
    def dim(self):
        return len(self.feature_names)


def parse_schema_text(text, origin="<schema>"):
    """Parse the schema file format. Raises InputError on any defect."""
    version = None
    name = None
    delimiter = None
    header = None
    missing_token = None
    columns = []
    seen = set()

    def fail(lineno, msg):
        raise InputError(f"{origin}:{lineno}: {msg}")

    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        parts = line.split()
        key = parts[0]
        if key == "schema_version":
            if len(parts) != 2 or not parts[1].isdigit():
                fail(lineno, "schema_version takes one integer")
            version = int(parts[1])
        elif key == "name":
            if len(parts) != 2:
                fail(lineno, "name takes one token")
            name = parts[1]
        elif key == "delimiter":
            if len(parts) != 2 or parts[1] not in _DELIMITERS:
                fail(lineno, f"delimiter must be one of {sorted(_DELIMITERS)}")
            delimiter = parts[1]
        elif key == "header":
            if len(parts) != 2 or parts[1] not in ("true", "false"):
                fail(lineno, "header must be true or false")
            header = parts[1] == "true"
        elif key == "missing_token":
            if len(parts) != 2:
                fail(lineno, "missing_token takes one token ('\"\"' for empty cells)")
            missing_token = "" if parts[1] == '""' else parts[1]
        elif key == "column":
            if len(parts) < 3:
                fail(lineno, "column takes a name and a kind")
            cname, kind = parts[1], parts[2]
            if kind not in COLUMN_KINDS:
                fail(lineno, f"unknown column kind {kind!r}")
            if cname in seen:
                fail(lineno, f"duplicate column name {cname!r}")
            seen.add(cname)
            # levels and target maps take the rest of the line, comma
            # separated with surrounding whitespace stripped, so raw values
            # containing spaces stay representable
            payload = line.split(None, 3)[3].strip() if len(parts) > 3 else None
            if kind == "categorical":
                if payload is None:
                    fail(lineno, "categorical column takes a comma-separated level list")
                levels = tuple(s.strip() for s in payload.split(","))
                if len(set(levels)) != len(levels) or "" in levels:
                    fail(lineno, f"level list for {cname!r} has empty or repeated levels")
                columns.append(ColumnSpec(cname, kind, levels=levels))
            elif kind == "target":
                if payload is None:
                    fail(lineno, "target column takes a comma-separated raw=label map")
                tmap = {}
                for item in (s.strip() for s in payload.split(",")):
                    if "=" not in item:
                        fail(lineno, f"bad target map entry {item!r}")
                    rawv, lab = item.rsplit("=", 1)
                    if lab not in ("0", "1") or rawv in tmap or rawv == "":
                        fail(lineno, f"bad target map entry {item!r}")
                    tmap[rawv] = int(lab)
                if set(tmap.values()) != {0, 1}:
                    fail(lineno, "target map must produce both labels 0 and 1")
                columns.append(ColumnSpec(cname, kind, target_map=tmap))
            else:
                if payload is not None:
                    fail(lineno, f"{kind} column takes no extra fields")
                columns.append(ColumnSpec(cname, kind))
        else:
            fail(lineno, f"unknown schema key {key!r}")

    if version != SCHEMA_VERSION:
        raise InputError(f"{origin}: schema_version {version!r} unsupported, expected {SCHEMA_VERSION}")
    if name is None or delimiter is None or header is None:
        raise InputError(f"{origin}: name, delimiter, and header are all required")
    if not columns:
        raise InputError(f"{origin}: no columns declared")
    n_targets = sum(1 for c in columns if c.kind == "target")
    if n_targets != 1:
        raise InputError(f"{origin}: exactly one target column required, found {n_targets}")
    if not any(c.kind in ("numeric", "categorical") for c in columns):
        raise InputError(f"{origin}: no feature columns declared")
    return DatasetSchema(name, delimiter, header, missing_token, tuple(columns))


def load_schema(path):
    try:
        with open(path, encoding="utf-8") as fh:
            text = fh.read()
    except OSError as exc:
        raise InputError(f"cannot read schema {path}: {exc}") from exc
    return parse_schema_text(text, origin=str(path))


@dataclass(frozen=True)
class RawTable:
    """String-valued rows that already passed schema validation."""

    schema: DatasetSchema
    rows: tuple
    n_dropped_missing: int

    @property
    def n(self):
        return len(self.rows)


def load_dataset(path, schema):
    """Read a delimited file against its schema.

    Validates arity and categorical levels per row; rows carrying the
    missing token in any non-ignored column are dropped and counted.
    """
    try:
        with open(path, encoding="utf-8") as fh:
            text = fh.read()
    except OSError as exc:
        raise InputError(f"cannot read dataset {path}: {exc}") from exc

    sep = _DELIMITERS[schema.delimiter]
    if sep is None:
        raw_rows = [(ln, line.split()) for ln, line in enumerate(text.splitlines(), 1) if line.strip()]
    else:
        reader = csv.reader(io.StringIO(text), delimiter=sep)
        raw_rows = [(reader.line_num, [f.strip() for f in row]) for row in reader if row and any(f.strip() for f in row)]

    if schema.header:
        raw_rows = raw_rows[1:]
    if not raw_rows:
        raise InputError(f"{path}: no data rows")

    ncol = len(schema.columns)
    checked = []
    n_dropped = 0
    for ln, fields in raw_rows:
        if len(fields) != ncol:
            raise InputError(f"{path}: line {ln}: expected {ncol} fields, got {len(fields)}")
        if schema.missing_token is not None and any(
            f == schema.missing_token
            for f, col in zip(fields, schema.columns)
            if col.kind != "ignore"
        ):
            n_dropped += 1
            continue
        for f, col in zip(fields, schema.columns):
            if col.kind == "categorical" and f not in col.levels:
                raise InputError(f"{path}: line {ln}: column {col.name!r}: unknown level {f!r}")
        checked.append(tuple(fields))
    if not checked:
        raise InputError(f"{path}: all rows dropped as missing")
    return RawTable(schema, tuple(checked), n_dropped)


@dataclass(frozen=True)
class FeatureMatrix:
    """Encoded features: float64 matrix plus the encoded column names."""

    values: np.ndarray
    column_names: tuple

    @property
    def n(self):
        return self.values.shape[0]

    @property
    def dim(self):
        return self.values.shape[1]


def encode_features(table, schema=None):
    """One-hot encode a RawTable into (FeatureMatrix, labels).

    Labels are int64 with 1 = payback, 0 = default, per the schema's
    target map. Raises InputError on unparsable numerics, non-finite
    values, or target values outside the map.
    """
    schema = table.schema if schema is None else schema
    names = schema.feature_names
    n = table.n
    X = np.zeros((n, len(names)))
    y = np.empty(n, dtype=np.int64)

    offsets = []
    pos = 0
    for col in schema.columns:
        if col.kind == "numeric":
            offsets.append(pos)
            pos += 1
        elif col.kind == "categorical":
            offsets.append(pos)
            pos += len(col.levels)
        else:
            offsets.append(None)

    for i, row in enumerate(table.rows):
        for col, off, f in zip(schema.columns, offsets, row):
            if col.kind == "numeric":
                try:
                    v = float(f)
                except ValueError:
                    raise InputError(
                        f"row {i}: column {col.name!r}: not a number: {f!r}") from None
                if not np.isfinite(v):
                    raise InputError(f"row {i}: column {col.name!r}: non-finite value {f!r}")
                X[i, off] = v
            elif col.kind == "categorical":
                X[i, off + col.levels.index(f)] = 1.0
            elif col.kind == "target":
                if f not in col.target_map:
                    raise InputError(
                        f"row {i}: target value {f!r} outside the target map")
                y[i] = col.target_map[f]
    return FeatureMatrix(X, names), y


@dataclass(frozen=True)
class SplitSet:
    """One side of a train/test split, keeping original row indices."""

    values: np.ndarray
    labels: np.ndarray
    orig_index: np.ndarray

    @property
    def n(self):
        return self.values.shape[0]


def split(X, y, train_fraction, seed):
    """Shuffle rows with default_rng(seed) and split.

    Train size is round-half-up of n * train_fraction; both sides must be
    non-empty. Row order within each side follows the shuffle order.
    """
    values = X.values if isinstance(X, FeatureMatrix) else np.asarray(X, dtype=np.float64)
    y = np.asarray(y)
    n = values.shape[0]
    if y.shape[0] != n:
        raise ValueError(f"features have {n} rows but labels have {y.shape[0]}")
    if not 0.0 < train_fraction < 1.0:
        raise InputError(f"train_fraction must be in (0, 1), got {train_fraction}")
    n_train = int(np.floor(n * train_fraction + 0.5))
    if n_train == 0 or n_train == n:
        raise InputError(
            f"split of {n} rows at fraction {train_fraction} leaves an empty side")
    perm = np.random.default_rng(seed).permutation(n)
    tr, te = perm[:n_train], perm[n_train:]
    return (
        SplitSet(values[tr], y[tr], tr.astype(np.int64)),
        SplitSet(values[te], y[te], te.astype(np.int64)),
    )


@dataclass(frozen=True)
class FeatureScaler:
    """Min-max scaler fitted on training rows, mapping each feature to [0, 1].

    Constant features (range below 1e-12) pass through shifted only, so
    transform never divides by ~0.
    """

    lo: np.ndarray
    hi: np.ndarray

    @property
    def span(self):
        rng = self.hi - self.lo
        return np.where(rng < 1e-12, 1.0, rng)

    def transform(self, values):
        values = np.asarray(values, dtype=np.float64)
        return (values - self.lo) / self.span


def fit_scaler(values):
    values = values.values if isinstance(values, FeatureMatrix) else np.asarray(values, dtype=np.float64)
    if values.size == 0:
        raise InputError("cannot fit a scaler on an empty matrix")
    return FeatureScaler(values.min(axis=0), values.max(axis=0))


def subsample(values, y, n_max, seed):
    """Uniform subsample without replacement, preserving row order."""
    n = values.shape[0]
    if n_max >= n:
        return values, y, np.arange(n, dtype=np.int64)
    idx = np.sort(np.random.default_rng(seed).choice(n, size=n_max, replace=False))
    return values[idx], y[idx], idx.astype(np.int64)

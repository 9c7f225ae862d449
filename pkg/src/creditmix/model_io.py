"""Versioned structured-text serialization of fitted models.

Floats are written with repr(), the shortest decimal string that parses
back to the identical IEEE-754 double, so a save/load round trip is
bit-exact for finite values. The format is line-oriented: a version
header, then named sections. A bundle file extends the bare mixture file
with the scaler, the cluster probability table, the decision threshold,
and the encoded feature names.
"""

import numpy as np

from .dataio import FeatureScaler
from .errors import InputError
from .gmm import FittedGmm, GmmParams
from .scoring import ClusterPdTable, ScoringModel

FORMAT_NAME = "creditmix-model"
FORMAT_VERSION = 1


def _fmt(x):
    return repr(float(x))


def _fmt_vec(v):
    return " ".join(_fmt(x) for x in np.asarray(v, dtype=np.float64))


def _gmm_lines(fitted):
    p = fitted.params
    k, d = p.n_components, p.dim
    lines = [
        f"gmm components {k}",
        f"gmm dim {d}",
        f"gmm loglik {_fmt(fitted.log_likelihood)}",
        f"gmm n_iter {fitted.n_iter}",
        f"gmm converged {str(fitted.converged).lower()}",
        f"gmm trace {_fmt_vec(fitted.trace)}",
        f"weights {_fmt_vec(p.weights)}",
    ]
    for j in range(k):
        lines.append(f"mean {j} {_fmt_vec(p.means[j])}")
    for j in range(k):
        for row in range(d):
            lines.append(f"cov {j} {row} {_fmt_vec(p.covariances[j][row])}")
    return lines


def save_gmm(path, fitted):
    lines = [f"{FORMAT_NAME} {FORMAT_VERSION}"] + _gmm_lines(fitted)
    with open(path, "w", encoding="utf-8") as fh:
        fh.write("\n".join(lines) + "\n")


def save_bundle(path, scoring_model, scaler=None, feature_names=None):
    """Write a full scoring bundle: mixture, table, threshold, scaler, names."""
    lines = [f"{FORMAT_NAME} {FORMAT_VERSION}"]
    lines += _gmm_lines(scoring_model.gmm)
    t = scoring_model.table
    lines += [
        f"table payback {_fmt_vec(t.payback)}",
        f"table default {_fmt_vec(t.default)}",
        f"table good_mass {_fmt_vec(t.good_mass)}",
        f"table bad_mass {_fmt_vec(t.bad_mass)}",
        "table low_mass " + " ".join(str(bool(f)).lower() for f in t.low_mass),
        "table crisp_good " + " ".join(str(int(c)) for c in t.crisp_good),
        "table crisp_bad " + " ".join(str(int(c)) for c in t.crisp_bad),
        f"threshold {_fmt(scoring_model.threshold)}",
    ]
    if scaler is not None:
        lines.append(f"scaler lo {_fmt_vec(scaler.lo)}")
        lines.append(f"scaler hi {_fmt_vec(scaler.hi)}")
    if feature_names:
        lines.append("features " + " ".join(feature_names))
    with open(path, "w", encoding="utf-8") as fh:
        fh.write("\n".join(lines) + "\n")


class _Parser:
    def __init__(self, path):
        self.path = path
        try:
            with open(path, encoding="utf-8") as fh:
                raw = fh.read()
        except OSError as exc:
            raise InputError(f"cannot read model {path}: {exc}") from exc
        self.fields = {}
        lines = [ln for ln in raw.splitlines() if ln.strip()]
        if not lines:
            raise InputError(f"{path}: empty model file")
        head = lines[0].split()
        if len(head) != 2 or head[0] != FORMAT_NAME or head[1] != str(FORMAT_VERSION):
            raise InputError(
                f"{path}: expected header '{FORMAT_NAME} {FORMAT_VERSION}', got {lines[0]!r}")
        for ln in lines[1:]:
            parts = ln.split()
            if parts[0] in ("mean", "cov"):
                key = " ".join(parts[: 2 if parts[0] == "mean" else 3])
                payload = parts[2 if parts[0] == "mean" else 3:]
            elif parts[0] in ("gmm", "table", "scaler"):
                key = " ".join(parts[:2])
                payload = parts[2:]
            else:
                key = parts[0]
                payload = parts[1:]
            if key in self.fields:
                raise InputError(f"{path}: duplicate field {key!r}")
            self.fields[key] = payload

    def take(self, key, required=True):
        if key not in self.fields:
            if required:
                raise InputError(f"{self.path}: missing field {key!r}")
            return None
        return self.fields.pop(key)

    def floats(self, key, required=True):
        payload = self.take(key, required)
        if payload is None:
            return None
        try:
            return np.array([float(x) for x in payload])
        except ValueError as exc:
            raise InputError(f"{self.path}: bad float in {key!r}: {exc}") from None

    def scalar(self, key, caster, required=True):
        payload = self.take(key, required)
        if payload is None:
            return None
        if len(payload) != 1:
            raise InputError(f"{self.path}: field {key!r} takes one value")
        try:
            return caster(payload[0])
        except ValueError as exc:
            raise InputError(f"{self.path}: bad value in {key!r}: {exc}") from None


def _parse_bool(tok):
    if tok not in ("true", "false"):
        raise ValueError(f"expected true/false, got {tok!r}")
    return tok == "true"


def _load_gmm_from(parser):
    k = parser.scalar("gmm components", int)
    d = parser.scalar("gmm dim", int)
    loglik = parser.scalar("gmm loglik", float)
    n_iter = parser.scalar("gmm n_iter", int)
    converged = parser.scalar("gmm converged", _parse_bool)
    trace = parser.floats("gmm trace")
    weights = parser.floats("weights")
    if weights.shape != (k,):
        raise InputError(f"{parser.path}: weights length {weights.shape[0]}, expected {k}")
    means = np.empty((k, d))
    covs = np.empty((k, d, d))
    for j in range(k):
        v = parser.floats(f"mean {j}")
        if v.shape != (d,):
            raise InputError(f"{parser.path}: mean {j} has length {v.shape[0]}, expected {d}")
        means[j] = v
        for row in range(d):
            v = parser.floats(f"cov {j} {row}")
            if v.shape != (d,):
                raise InputError(
                    f"{parser.path}: cov {j} row {row} has length {v.shape[0]}, expected {d}")
            covs[j][row] = v
    params = GmmParams(weights, means, covs)
    return FittedGmm(params, loglik, n_iter, converged, trace)


def load_gmm(path):
    return _load_gmm_from(_Parser(path))


def load_bundle(path):
    """Read a scoring bundle: (ScoringModel, FeatureScaler or None, names)."""
    parser = _Parser(path)
    fitted = _load_gmm_from(parser)
    payback = parser.floats("table payback")
    default = parser.floats("table default")
    good_mass = parser.floats("table good_mass")
    bad_mass = parser.floats("table bad_mass")
    low = np.array([_parse_bool(t) for t in parser.take("table low_mass")])
    crisp_good = np.array([int(t) for t in parser.take("table crisp_good")], dtype=np.int64)
    crisp_bad = np.array([int(t) for t in parser.take("table crisp_bad")], dtype=np.int64)
    table = ClusterPdTable(payback, default, good_mass, bad_mass, low,
                           crisp_good, crisp_bad)
    threshold = parser.scalar("threshold", float)
    lo = parser.floats("scaler lo", required=False)
    hi = parser.floats("scaler hi", required=False)
    scaler = FeatureScaler(lo, hi) if lo is not None and hi is not None else None
    names = parser.take("features", required=False)
    model = ScoringModel(fitted, table, threshold)
    return model, scaler, tuple(names) if names else None

"""Command-line pipeline: dataset file to model, scores, and reports.

Subcommands mirror the pipeline stages (preprocess, select-k, fit, score,
evaluate, el-report, threshold) plus an all-in-one `pipeline`. Every stage
reads and writes plain CSV or structured text, so stages can be re-run
independently. One root seed drives everything through named sub-seeds;
a manifest records the config hash, the seeds, and artifact checksums, and
rerunning the same config reproduces the same bytes.

Exit codes: 0 success, 1 input error, 2 numerical failure, 3 infeasible
loss budget.
"""

import csv
import hashlib
import os
import sys
from dataclasses import dataclass, fields

import click
import numpy as np

from . import __version__, kernels
from .balance import balance_train
from .dataio import (
    FeatureMatrix,
    encode_features,
    fit_scaler,
    load_dataset,
    load_schema,
    split,
    subsample,
)
from .errors import InfeasibleBudgetError, InputError, NumericalError
from .evaluation import LogisticConfig, confusion, logistic_fit, logistic_predict_proba, metrics
from .gmm import FitConfig, fit_restarts
from .model_io import load_bundle, save_bundle
from .risk import PortfolioSpec, approval_curve, build_el_report, default_grid, invert_loss_budget
from .scoring import ScoringModel, cluster_payback_probs, score_rows
from .seeds import derive_seed
from .selection import select_k

_BOOL_TOKENS = {"true": True, "false": False, "yes": True, "no": False,
                "on": True, "off": False, "1": True, "0": False}


@dataclass(frozen=True)
class RunConfig:
    """Everything a run needs; serializable so the run is reproducible."""

    schema: str = None
    data: str = None
    out: str = "out"
    seed: int = 0
    train_fraction: float = 2.0 / 3.0
    smote: bool = False
    scale: bool = True
    k: int = None              # fixed component count; None selects via k_min..k_max
    k_min: int = 1
    k_max: int = 15
    criterion: str = "bic"
    restarts: int = 3
    max_iter: int = 500
    tol: float = 1e-6
    reg: float = 1e-6
    threshold: float = 0.5
    loan_amount: float = 1000.0
    original_capital: float = 1000.0
    recovery_rate: float = 0.5
    exposure_mean: float = 1000.0
    exposure_std: float = 100.0
    grid_step: float = 0.01
    subsample: int = None

    def fit_config(self, seed):
        return FitConfig(max_iter=self.max_iter, tol=self.tol, reg=self.reg, seed=seed)

    def portfolio(self, mode, exposure_seed=0):
        return PortfolioSpec(
            loan_amount=self.loan_amount,
            original_capital=self.original_capital,
            recovery_rate=self.recovery_rate,
            exposure_mode=mode,
            exposure_mean=self.exposure_mean,
            exposure_std=self.exposure_std,
            exposure_seed=exposure_seed,
        )

    def canonical_text(self):
        """Stable key=value rendering used for hashing and the manifest."""
        lines = []
        for f in sorted(fields(self), key=lambda f: f.name):
            v = getattr(self, f.name)
            if v is None:
                rendered = ""
            elif isinstance(v, bool):
                rendered = "true" if v else "false"
            elif isinstance(v, float):
                rendered = repr(v)
            else:
                rendered = str(v)
            lines.append(f"{f.name}={rendered}")
        return "\n".join(lines) + "\n"

    def sha256(self):
        return hashlib.sha256(self.canonical_text().encode()).hexdigest()


_FIELD_TYPES = {f.name: f.type for f in fields(RunConfig)}
_INT_FIELDS = {"seed", "k", "k_min", "k_max", "restarts", "max_iter", "subsample"}
_FLOAT_FIELDS = {"train_fraction", "tol", "reg", "threshold", "loan_amount",
                 "original_capital", "recovery_rate", "exposure_mean",
                 "exposure_std", "grid_step"}
_BOOL_FIELDS = {"smote", "scale"}


def _parse_value(key, raw):
    raw = raw.strip()
    if raw == "":
        return None
    if key in _BOOL_FIELDS:
        if raw.lower() not in _BOOL_TOKENS:
            raise InputError(f"config key {key!r}: not a boolean: {raw!r}")
        return _BOOL_TOKENS[raw.lower()]
    if key in _INT_FIELDS:
        try:
            return int(raw)
        except ValueError:
            raise InputError(f"config key {key!r}: not an integer: {raw!r}") from None
    if key in _FLOAT_FIELDS:
        try:
            if "/" in raw:
                num, den = raw.split("/", 1)
                return float(num) / float(den)
            return float(raw)
        except (ValueError, ZeroDivisionError):
            raise InputError(f"config key {key!r}: not a number: {raw!r}") from None
    return raw


def load_config(path):
    """Parse a key=value config file (# comments, blank lines allowed)."""
    try:
        with open(path, encoding="utf-8") as fh:
            text = fh.read()
    except OSError as exc:
        raise InputError(f"cannot read config {path}: {exc}") from exc
    values = {}
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        if "=" not in line:
            raise InputError(f"{path}:{lineno}: expected key=value")
        key, val = line.split("=", 1)
        key = key.strip()
        if key not in _FIELD_TYPES:
            raise InputError(f"{path}:{lineno}: unknown config key {key!r}")
        values[key] = _parse_value(key, val)
    return values


def build_config(config_path, overrides):
    values = load_config(config_path) if config_path else {}
    for key, val in overrides.items():
        if val is not None:
            values[key] = val
    cfg = RunConfig(**values)
    if cfg.schema is None or cfg.data is None:
        raise InputError("schema and data paths are required (config file or flags)")
    if not 0.0 < cfg.threshold < 1.0:
        raise InputError(f"threshold must be in (0, 1), got {cfg.threshold}")
    if cfg.k is not None and cfg.k < 1:
        raise InputError(f"k must be at least 1, got {cfg.k}")
    if cfg.k_min < 1 or cfg.k_max < cfg.k_min:
        raise InputError(f"bad k range [{cfg.k_min}, {cfg.k_max}]")
    if cfg.criterion.lower() not in ("aic", "bic"):
        raise InputError(f"criterion must be aic or bic, got {cfg.criterion!r}")
    if cfg.restarts < 1:
        raise InputError("restarts must be at least 1")
    if not 0.0 < cfg.grid_step <= 1.0:
        raise InputError(f"grid_step must be in (0, 1], got {cfg.grid_step}")
    if cfg.subsample is not None and cfg.subsample < 2:
        raise InputError("subsample must keep at least 2 rows")
    return cfg


# ---------------------------------------------------------------------------
# CSV helpers: repr() for floats so reruns are byte-identical and parsing
# round-trips bit-exact.

def _render_cell(v):
    if v is None:
        return ""
    if isinstance(v, bool) or isinstance(v, np.bool_):
        return "true" if v else "false"
    if isinstance(v, (float, np.floating)):
        return repr(float(v))
    if isinstance(v, (int, np.integer)):
        return str(int(v))
    return str(v)


def write_csv(path, header, rows):
    with open(path, "w", encoding="utf-8", newline="") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(header)
        for row in rows:
            writer.writerow([_render_cell(v) for v in row])


def _write_rowset(path, orig_index, synthetic, y, values, names):
    header = ["orig_index", "synthetic", "y", *names]
    rows = []
    for i in range(values.shape[0]):
        rows.append([int(orig_index[i]), int(synthetic[i]), int(y[i]),
                     *values[i]])
    write_csv(path, header, rows)


def _read_rowset(path):
    try:
        with open(path, encoding="utf-8", newline="") as fh:
            reader = csv.reader(fh)
            header = next(reader, None)
            if header is None:
                raise InputError(f"{path}: empty rowset")
            data = list(reader)
    except OSError as exc:
        raise InputError(f"cannot read rowset {path}: {exc}") from exc
    if header[:3] != ["orig_index", "synthetic", "y"]:
        raise InputError(f"{path}: not a rowset csv (header starts {header[:3]})")
    names = tuple(header[3:])
    n = len(data)
    orig_index = np.empty(n, dtype=np.int64)
    synthetic = np.empty(n, dtype=np.int64)
    y = np.empty(n, dtype=np.int64)
    values = np.empty((n, len(names)))
    for i, row in enumerate(data):
        if len(row) != 3 + len(names):
            raise InputError(f"{path}: row {i} has {len(row)} cells, expected {3 + len(names)}")
        orig_index[i] = int(row[0])
        synthetic[i] = int(row[1])
        y[i] = int(row[2])
        values[i] = [float(x) for x in row[3:]]
    return orig_index, synthetic, y, values, names


def _sha256_file(path):
    h = hashlib.sha256()
    with open(path, "rb") as fh:
        for chunk in iter(lambda: fh.read(1 << 20), b""):
            h.update(chunk)
    return h.hexdigest()


# ---------------------------------------------------------------------------
# pipeline stages as library functions

def stage_preprocess(cfg, echo=lambda s: None):
    """load -> encode -> subsample -> split -> scale -> SMOTE; write rowsets."""
    schema = load_schema(cfg.schema)
    table = load_dataset(cfg.data, schema)
    if table.n_dropped_missing:
        echo(f"dropped {table.n_dropped_missing} rows with missing values")
    X, y = encode_features(table)
    values = X.values
    if cfg.subsample is not None and cfg.subsample < values.shape[0]:
        values, y, _ = subsample(values, y, cfg.subsample, derive_seed(cfg.seed, "subsample"))
        echo(f"subsampled to {values.shape[0]} rows")

    train, test = split(FeatureMatrix(values, X.column_names), y,
                        cfg.train_fraction, derive_seed(cfg.seed, "split"))

    scaler = fit_scaler(train.values) if cfg.scale else None
    tr_values = scaler.transform(train.values) if scaler else train.values
    te_values = scaler.transform(test.values) if scaler else test.values

    n_orig = tr_values.shape[0]
    if cfg.smote:
        balanced, y_bal, report = balance_train(
            tr_values, train.labels, derive_seed(cfg.seed, "smote"))
        for line in report.lines():
            echo(line)
        tr_all = balanced
        y_all = y_bal
    else:
        tr_all, y_all = tr_values, train.labels

    n_all = tr_all.shape[0]
    orig_index = np.concatenate([train.orig_index,
                                 np.full(n_all - n_orig, -1, dtype=np.int64)])
    synthetic = np.concatenate([np.zeros(n_orig, dtype=np.int64),
                                np.ones(n_all - n_orig, dtype=np.int64)])

    os.makedirs(cfg.out, exist_ok=True)
    train_path = os.path.join(cfg.out, "train.csv")
    test_path = os.path.join(cfg.out, "test.csv")
    _write_rowset(train_path, orig_index, synthetic, y_all, tr_all, X.column_names)
    _write_rowset(test_path, test.orig_index, np.zeros(test.n, dtype=np.int64),
                  test.labels, te_values, X.column_names)
    echo(f"train rows {n_all} ({n_orig} original), test rows {test.n}")
    return {"scaler": scaler, "schema": schema, "train": train_path, "test": test_path}


def _fit_seeds(cfg, k):
    return [derive_seed(cfg.seed, f"kmeans:k{k}:r{r}") for r in range(cfg.restarts)]


def stage_select_k(cfg, echo=lambda s: None):
    _, _, _, values, _ = _read_rowset(os.path.join(cfg.out, "train.csv"))
    candidates = list(range(cfg.k_min, cfg.k_max + 1))
    curve = select_k(values, candidates, cfg.fit_config(cfg.seed),
                     criterion=cfg.criterion, n_restarts=cfg.restarts)
    path = os.path.join(cfg.out, "selection.csv")
    write_csv(path, ("k", "loglik", "params", "aic", "bic", "n_iter", "converged", "error"),
              curve.rows())
    echo(f"chosen k: aic={curve.chosen_aic} bic={curve.chosen_bic} "
         f"(criterion {cfg.criterion}: {curve.chosen_k})")
    return curve


def stage_fit(cfg, echo=lambda s: None):
    """Fit the mixture on the full training rowset, estimate cluster
    probabilities on its original (non-synthetic) rows, save the bundle."""
    orig_index, synthetic, y, values, names = _read_rowset(os.path.join(cfg.out, "train.csv"))
    k = cfg.k
    if k is None:
        selection_path = os.path.join(cfg.out, "selection.csv")
        if os.path.exists(selection_path):
            k = _chosen_k_from_csv(selection_path, cfg.criterion)
            echo(f"using selected k={k} from {selection_path}")
        else:
            curve = stage_select_k(cfg, echo)
            k = curve.chosen_k
    fitted = fit_restarts(values, k, cfg.fit_config(cfg.seed), _fit_seeds(cfg, k))
    mask = synthetic == 0
    table = cluster_payback_probs(fitted, values[mask], y[mask])
    model = ScoringModel(fitted, table, cfg.threshold)

    scaler = None
    # the scaler is reconstructed exactly from preprocess when scaling is on
    if cfg.scale:
        scaler = _rebuild_scaler(cfg)
    path = os.path.join(cfg.out, "model.txt")
    save_bundle(path, model, scaler, names)
    header, rows = table.rows()
    write_csv(os.path.join(cfg.out, "clusters.csv"), header, rows)
    echo(f"fitted k={k} loglik={fitted.log_likelihood!r} "
         f"iters={fitted.n_iter} converged={fitted.converged}")
    return model


def _rebuild_scaler(cfg):
    """Re-derive the training scaler from raw data and the split seed."""
    schema = load_schema(cfg.schema)
    table = load_dataset(cfg.data, schema)
    X, y = encode_features(table)
    values = X.values
    if cfg.subsample is not None and cfg.subsample < values.shape[0]:
        values, y, _ = subsample(values, y, cfg.subsample, derive_seed(cfg.seed, "subsample"))
    train, _ = split(values, y, cfg.train_fraction, derive_seed(cfg.seed, "split"))
    return fit_scaler(train.values)


def _chosen_k_from_csv(path, criterion):
    with open(path, encoding="utf-8", newline="") as fh:
        reader = csv.DictReader(fh)
        rows = [r for r in reader if r.get("error", "") == ""]
    if not rows:
        raise InputError(f"{path}: no usable selection rows")
    col = criterion.lower()
    best = min(rows, key=lambda r: (float(r[col]), int(r["k"])))
    return int(best["k"])


def _load_model(cfg):
    path = os.path.join(cfg.out, "model.txt")
    model, scaler, names = load_bundle(path)
    return model, scaler, names


def stage_score(cfg, echo=lambda s: None):
    """Score train (original rows) and test; CSVs sorted by orig_index."""
    model, _, _ = _load_model(cfg)
    outputs = {}
    for name in ("train", "test"):
        orig_index, synthetic, y, values, _ = _read_rowset(
            os.path.join(cfg.out, f"{name}.csv"))
        mask = synthetic == 0
        payback, default, labels = score_rows(values[mask], model)
        order = np.argsort(orig_index[mask], kind="stable")
        rows = [(int(orig_index[mask][i]), payback[i], default[i], int(labels[i]))
                for i in order]
        path = os.path.join(cfg.out, f"scores_{name}.csv")
        write_csv(path, ("orig_index", "p_payback", "p_default", "label_at_D"), rows)
        outputs[name] = path
        echo(f"scored {name}: {len(rows)} rows -> {path}")
    return outputs


def _scored_sets(cfg, model):
    """(name, y, payback, default) for original train rows and test rows."""
    out = []
    for name in ("train", "test"):
        orig_index, synthetic, y, values, _ = _read_rowset(
            os.path.join(cfg.out, f"{name}.csv"))
        mask = synthetic == 0
        payback, default, _ = score_rows(values[mask], model)
        out.append((name, y[mask], payback, default))
    return out


def _lr_model(cfg):
    """Deterministic logistic baseline retrained from the training rowset."""
    _, _, y, values, _ = _read_rowset(os.path.join(cfg.out, "train.csv"))
    return logistic_fit(values, y, LogisticConfig())


def stage_evaluate(cfg, echo=lambda s: None):
    model, _, _ = _load_model(cfg)
    lr = _lr_model(cfg)
    rows = []
    for name, y, payback, default in _scored_sets(cfg, model):
        pred = (payback >= model.threshold).astype(np.int64)
        cm = confusion(y, pred)
        rep = metrics(cm, payback, y)
        rows.append((name, "gmm", cm.n, cm.tp, cm.tn, cm.fp, cm.fn,
                     rep.accuracy, rep.precision, rep.recall, rep.f1, rep.auc))
        orig_index, synthetic, yy, values, _ = _read_rowset(
            os.path.join(cfg.out, f"{name}.csv"))
        mask = synthetic == 0
        lr_scores = logistic_predict_proba(lr, values[mask])
        lr_pred = (lr_scores >= cfg.threshold).astype(np.int64)
        cm = confusion(yy[mask], lr_pred)
        rep = metrics(cm, lr_scores, yy[mask])
        rows.append((name, "lr", cm.n, cm.tp, cm.tn, cm.fp, cm.fn,
                     rep.accuracy, rep.precision, rep.recall, rep.f1, rep.auc))
    path = os.path.join(cfg.out, "metrics.csv")
    write_csv(path, ("split", "model", "n", "tp", "tn", "fp", "fn",
                     "accuracy", "precision", "recall", "f1", "auc"), rows)
    for r in rows:
        echo(f"{r[0]} {r[1]} accuracy={_render_cell(r[7])} auc={_render_cell(r[11])}")
    return path


def stage_el_report(cfg, echo=lambda s: None):
    model, _, _ = _load_model(cfg)
    lr = _lr_model(cfg)
    rows = []
    for name, y, payback, default in _scored_sets(cfg, model):
        orig_index, synthetic, yy, values, _ = _read_rowset(
            os.path.join(cfg.out, f"{name}.csv"))
        mask = synthetic == 0
        lr_default = 1.0 - logistic_predict_proba(lr, values[mask])
        for mode in ("fixed", "normal"):
            spec = cfg.portfolio(mode, derive_seed(cfg.seed, f"exposures:{name}"))
            for model_name, pds in (("gmm", default), ("lr", lr_default)):
                rep = build_el_report(pds, y, spec)
                rows.append((name, model_name, mode, rep.total_capital,
                             rep.el_actual, rep.el_model,
                             f"{100.0 * rep.capital_relative_error:.2f}",
                             rep.eps_el))
    path = os.path.join(cfg.out, "el_report.csv")
    write_csv(path, ("split", "model", "exposure_mode", "total_capital",
                     "actual_loss", "predicted_loss", "relative_error_pct",
                     "eps_el"), rows)
    for r in rows:
        echo(f"{r[0]} {r[1]} {r[2]}: capital={_render_cell(r[3])} "
             f"actual={_render_cell(r[4])} predicted={_render_cell(r[5])} "
             f"rel_err={r[6]}%")
    return path


def stage_threshold(cfg, budget=None, echo=lambda s: None):
    model, _, _ = _load_model(cfg)
    grid = default_grid(cfg.grid_step)
    spec = cfg.portfolio("fixed")
    train_curve = None
    for name, y, payback, default in _scored_sets(cfg, model):
        curve = approval_curve(payback, grid, spec, y=y)
        header, rows = curve.rows()
        write_csv(os.path.join(cfg.out, f"threshold_{name}.csv"), header, rows)
        if name == "train":
            train_curve = curve
    if budget is not None:
        p_min, bound = invert_loss_budget(train_curve, budget)
        echo(f"budget {budget!r}: p_min={p_min!r} achieved_bound={bound!r}")
        return train_curve, (p_min, bound)
    return train_curve, None


def _manifest_lines(cfg, artifact_paths):
    k_for_seeds = cfg.k if cfg.k is not None else "selected"
    lines = [
        "creditmix-manifest 1",
        f"package_version {__version__}",
        f"backend {kernels.active_backend}",
        f"config_sha256 {cfg.sha256()}",
        f"schema_sha256 {_sha256_file(cfg.schema)}",
        f"data_sha256 {_sha256_file(cfg.data)}",
        f"seed root {cfg.seed}",
        f"seed split {derive_seed(cfg.seed, 'split')}",
        f"seed smote {derive_seed(cfg.seed, 'smote')}",
        f"seed subsample {derive_seed(cfg.seed, 'subsample')}",
        f"seed exposures:train {derive_seed(cfg.seed, 'exposures:train')}",
        f"seed exposures:test {derive_seed(cfg.seed, 'exposures:test')}",
        f"fit_k {k_for_seeds}",
    ]
    lines.append("config_begin")
    lines.extend(cfg.canonical_text().splitlines())
    lines.append("config_end")
    for name in sorted(artifact_paths):
        lines.append(f"artifact {os.path.basename(artifact_paths[name])} "
                     f"{_sha256_file(artifact_paths[name])}")
    return lines


def run_pipeline(cfg, budget=None, echo=lambda s: None):
    """Execute every stage in order and write the manifest."""
    stage_preprocess(cfg, echo)
    if cfg.k is None:
        stage_select_k(cfg, echo)
    stage_fit(cfg, echo)
    stage_score(cfg, echo)
    stage_evaluate(cfg, echo)
    stage_el_report(cfg, echo)
    _, inversion = stage_threshold(cfg, budget=budget, echo=echo)

    names = ["train.csv", "test.csv", "model.txt", "clusters.csv",
             "scores_train.csv", "scores_test.csv", "metrics.csv",
             "el_report.csv", "threshold_train.csv", "threshold_test.csv"]
    if cfg.k is None:
        names.append("selection.csv")
    paths = {n: os.path.join(cfg.out, n) for n in names}
    manifest = os.path.join(cfg.out, "manifest.txt")
    with open(manifest, "w", encoding="utf-8") as fh:
        fh.write("\n".join(_manifest_lines(cfg, paths)) + "\n")
    echo(f"manifest -> {manifest}")
    return {"manifest": manifest, "inversion": inversion, **paths}


# ---------------------------------------------------------------------------
# click wiring

def _config_options(fn):
    opts = [
        click.option("--config", "config_path", type=click.Path(), default=None,
                     help="key=value config file; flags override it."),
        click.option("--schema", default=None, help="dataset schema file"),
        click.option("--data", default=None, help="dataset file"),
        click.option("--out", default=None, help="output directory"),
        click.option("--seed", type=int, default=None),
        click.option("--train-fraction", "train_fraction", default=None,
                     help="e.g. 0.667 or 2/3"),
        click.option("--smote/--no-smote", "smote", default=None),
        click.option("--scale/--no-scale", "scale", default=None),
        click.option("--k", type=int, default=None, help="fixed component count"),
        click.option("--k-min", "k_min", type=int, default=None),
        click.option("--k-max", "k_max", type=int, default=None),
        click.option("--criterion", type=click.Choice(["aic", "bic"]), default=None),
        click.option("--restarts", type=int, default=None),
        click.option("--max-iter", "max_iter", type=int, default=None),
        click.option("--tol", type=float, default=None),
        click.option("--reg", type=float, default=None),
        click.option("--threshold", type=float, default=None),
        click.option("--loan-amount", "loan_amount", type=float, default=None),
        click.option("--original-capital", "original_capital", type=float, default=None),
        click.option("--recovery-rate", "recovery_rate", type=float, default=None),
        click.option("--exposure-mean", "exposure_mean", type=float, default=None),
        click.option("--exposure-std", "exposure_std", type=float, default=None),
        click.option("--grid-step", "grid_step", type=float, default=None),
        click.option("--subsample", type=int, default=None,
                     help="uniform row subsample for desk-scale runs"),
    ]
    for opt in reversed(opts):
        fn = opt(fn)
    return fn


def _gather(config_path, kwargs):
    overrides = dict(kwargs)
    if overrides.get("train_fraction") is not None:
        overrides["train_fraction"] = _parse_value("train_fraction",
                                                   overrides["train_fraction"])
    return build_config(config_path, overrides)


@click.group()
@click.version_option(version=__version__, prog_name="creditmix")
def cli():
    """Mixture-based credit scoring pipeline."""


def _command(name, runner):
    @cli.command(name=name)
    @_config_options
    def _cmd(config_path, **kwargs):
        cfg = _gather(config_path, kwargs)
        runner(cfg, echo=click.echo)
    return _cmd


_command("preprocess", stage_preprocess)
_command("select-k", stage_select_k)
_command("fit", stage_fit)
_command("score", stage_score)
_command("evaluate", stage_evaluate)
_command("el-report", stage_el_report)


@cli.command(name="threshold")
@_config_options
@click.option("--budget", type=float, default=None,
              help="loss budget to invert into a minimum approval threshold")
def _threshold_cmd(config_path, budget, **kwargs):
    cfg = _gather(config_path, kwargs)
    stage_threshold(cfg, budget=budget, echo=click.echo)


@cli.command(name="pipeline")
@_config_options
@click.option("--budget", type=float, default=None,
              help="loss budget to invert into a minimum approval threshold")
def _pipeline_cmd(config_path, budget, **kwargs):
    cfg = _gather(config_path, kwargs)
    run_pipeline(cfg, budget=budget, echo=click.echo)


def main(argv=None):
    try:
        cli.main(args=argv, standalone_mode=False)
    except click.exceptions.Abort:
        click.echo("aborted", err=True)
        sys.exit(1)
    except click.ClickException as exc:
        exc.show()
        sys.exit(1)
    except InfeasibleBudgetError as exc:
        click.echo(f"error: {exc}", err=True)
        sys.exit(3)
    except NumericalError as exc:
        click.echo(f"error: {exc}", err=True)
        sys.exit(2)
    except (InputError, OSError, ValueError) as exc:
        click.echo(f"error: {exc}", err=True)
        sys.exit(1)
    return 0


if __name__ == "__main__":
    main()

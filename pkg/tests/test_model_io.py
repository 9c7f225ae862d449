"""Model file round trips and parse failure modes."""

import numpy as np
import pytest

from creditmix.dataio import FeatureScaler
from creditmix.errors import InputError
from creditmix.gmm import FitConfig, fit
from creditmix.model_io import load_bundle, load_gmm, save_bundle, save_gmm
from creditmix.scoring import ScoringModel, cluster_payback_probs


def _fitted_and_model(seed=0):
    rng = np.random.default_rng(seed)
    X = np.concatenate([rng.normal(size=(40, 3)),
                        rng.normal(loc=9.0, size=(40, 3))])
    y = rng.integers(0, 2, size=80)
    fitted = fit(X, 2, FitConfig(seed=seed))
    table = cluster_payback_probs(fitted, X, y)
    return fitted, ScoringModel(fitted, table, 0.5), X


def test_gmm_round_trip_bit_exact(tmp_path):
    fitted, _, _ = _fitted_and_model()
    path = tmp_path / "m.txt"
    save_gmm(path, fitted)
    back = load_gmm(path)
    np.testing.assert_array_equal(back.params.weights, fitted.params.weights)
    np.testing.assert_array_equal(back.params.means, fitted.params.means)
    np.testing.assert_array_equal(back.params.covariances,
                                  fitted.params.covariances)
    np.testing.assert_array_equal(back.trace, fitted.trace)
    assert back.log_likelihood == fitted.log_likelihood
    assert back.n_iter == fitted.n_iter
    assert back.converged == fitted.converged


def test_bundle_round_trip_bit_exact(tmp_path):
    _, model, X = _fitted_and_model(1)
    scaler = FeatureScaler(X.min(axis=0), X.max(axis=0))
    names = ("alpha", "beta", "gamma")
    path = tmp_path / "b.txt"
    save_bundle(path, model, scaler=scaler, feature_names=names)
    back, back_scaler, back_names = load_bundle(path)

    t, bt = model.table, back.table
    np.testing.assert_array_equal(bt.payback, t.payback)
    np.testing.assert_array_equal(bt.default, t.default)
    np.testing.assert_array_equal(bt.good_mass, t.good_mass)
    np.testing.assert_array_equal(bt.bad_mass, t.bad_mass)
    np.testing.assert_array_equal(bt.low_mass, t.low_mass)
    np.testing.assert_array_equal(bt.crisp_good, t.crisp_good)
    np.testing.assert_array_equal(bt.crisp_bad, t.crisp_bad)
    assert back.threshold == model.threshold
    np.testing.assert_array_equal(back_scaler.lo, scaler.lo)
    np.testing.assert_array_equal(back_scaler.hi, scaler.hi)
    assert back_names == names


def test_bundle_without_scaler_or_names(tmp_path):
    _, model, _ = _fitted_and_model(2)
    path = tmp_path / "b.txt"
    save_bundle(path, model)
    back, scaler, names = load_bundle(path)
    assert scaler is None
    assert names is None
    assert back.threshold == model.threshold


def test_save_is_byte_deterministic(tmp_path):
    _, model, _ = _fitted_and_model(3)
    p1, p2 = tmp_path / "a.txt", tmp_path / "b.txt"
    save_bundle(p1, model)
    save_bundle(p2, model)
    assert p1.read_bytes() == p2.read_bytes()


def test_scores_survive_round_trip(tmp_path):
    from creditmix.scoring import score_rows
    _, model, X = _fitted_and_model(4)
    path = tmp_path / "b.txt"
    save_bundle(path, model)
    back, _, _ = load_bundle(path)
    a = score_rows(X, model)
    b = score_rows(X, back)
    for u, v in zip(a, b):
        np.testing.assert_array_equal(u, v)


def test_reject_missing_file(tmp_path):
    with pytest.raises(InputError, match="cannot read"):
        load_gmm(tmp_path / "absent.txt")


def test_reject_wrong_header(tmp_path):
    path = tmp_path / "bad.txt"
    path.write_text("some-other-format 3\n")
    with pytest.raises(InputError, match="header"):
        load_gmm(path)
    path.write_text("")
    with pytest.raises(InputError, match="empty"):
        load_gmm(path)


def test_reject_duplicate_and_missing_fields(tmp_path):
    fitted, _, _ = _fitted_and_model(5)
    path = tmp_path / "m.txt"
    save_gmm(path, fitted)
    text = path.read_text()

    dup = tmp_path / "dup.txt"
    weights_line = next(ln for ln in text.splitlines() if ln.startswith("weights"))
    dup.write_text(text + weights_line + "\n")
    with pytest.raises(InputError, match="duplicate"):
        load_gmm(dup)

    missing = tmp_path / "missing.txt"
    missing.write_text("\n".join(
        ln for ln in text.splitlines() if not ln.startswith("gmm loglik")) + "\n")
    with pytest.raises(InputError, match="missing field"):
        load_gmm(missing)


def test_reject_corrupt_payloads(tmp_path):
    fitted, _, _ = _fitted_and_model(6)
    path = tmp_path / "m.txt"
    save_gmm(path, fitted)
    text = path.read_text()

    bad_float = tmp_path / "f.txt"
    bad_float.write_text(text.replace("weights ", "weights oops ", 1))
    with pytest.raises(InputError, match="bad float"):
        load_gmm(bad_float)

    short_mean = tmp_path / "s.txt"
    lines = []
    for ln in text.splitlines():
        if ln.startswith("mean 0 "):
            parts = ln.split()
            ln = " ".join(parts[:-1])     # drop one coordinate
        lines.append(ln)
    short_mean.write_text("\n".join(lines) + "\n")
    with pytest.raises(InputError, match="length"):
        load_gmm(short_mean)


def test_reject_bad_bool_and_scalar_arity(tmp_path):
    fitted, _, _ = _fitted_and_model(7)
    path = tmp_path / "m.txt"
    save_gmm(path, fitted)
    text = path.read_text()

    bad_bool = tmp_path / "b.txt"
    bad_bool.write_text(text.replace("gmm converged true", "gmm converged yes")
                        .replace("gmm converged false", "gmm converged yes"))
    with pytest.raises(InputError, match="bad value"):
        load_gmm(bad_bool)

    two_vals = tmp_path / "t.txt"
    two_vals.write_text(text.replace("gmm dim 3", "gmm dim 3 3"))
    with pytest.raises(InputError, match="one value"):
        load_gmm(two_vals)

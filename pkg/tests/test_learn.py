import json

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from cylink.learn import (
    LAYERS, MLPModel, MetricError, TrainConfig, TrainingDiverged, cn_binary_probe,
    cross_validate, extrapolation_split, features, gradient_check, kfold_indices, metrics,
    mlp_forward, mse_loss, pmcc, train,
)


def reference_forward(model, x):
    """Plain loop forward pass: ReLU hidden layers, linear output."""
    h = (np.asarray(x, float) - model.mean) / model.scale
    for k, (W, b) in enumerate(zip(model.weights, model.biases)):
        h = h @ W + b
        if k < len(model.weights) - 1:
            h = np.array([max(v, 0.0) for v in h])
    return float(h[0])


def toy_data(n=200, seed=0):
    rng = np.random.default_rng(seed)
    X = rng.integers(1, 60, size=(n, 5)).astype(float)
    y = X[:, 0] + 2 * X[:, 1] - 0.5 * X[:, 4]
    return X, y


def test_architecture():
    m = MLPModel.init(0)
    assert m.layers == LAYERS == (5, 16, 32, 16, 1)
    assert all(np.all(b == 0) for b in m.biases)
    assert all(np.abs(W).max() <= np.sqrt(6 / W.shape[0]) for W in m.weights)


def test_forward_matches_reference():
    m = MLPModel.init(3)
    m.mean = np.arange(5.0)
    m.scale = np.full(5, 2.0)
    for x in np.random.default_rng(1).normal(size=(10, 5)) * 10:
        assert mlp_forward(m, x) == pytest.approx(reference_forward(m, x), rel=1e-12)


@pytest.mark.parametrize("seed", [0, 1, 2])
def test_gradients_match_finite_differences(seed):
    rng = np.random.default_rng(seed)
    X = rng.normal(size=(12, 5))
    y = rng.normal(size=12)
    m = MLPModel.init(seed)
    for b in m.biases:
        b += rng.normal(scale=0.1, size=b.shape)
    assert gradient_check(m, X, y) < 1e-4


def test_mse_loss():
    m = MLPModel.zeros()
    X = np.ones((4, 5))
    assert mse_loss(m, X, np.array([1.0, -1.0, 2.0, 0.0])) == pytest.approx(1.5)


def test_training_reduces_loss_and_is_seeded():
    X, y = toy_data()
    cfg = TrainConfig(epochs=300, seed=5)
    hist = []
    a = train(MLPModel.init(5), X, cfg, y=y, history=hist)
    b = train(MLPModel.init(5), list(zip(X, y)), cfg)
    assert hist[-1] < hist[0] / 10
    assert np.array_equal(a.predict(X), b.predict(X))
    assert metrics(y, a.predict(X)).r2 > 0.95


@pytest.mark.filterwarnings("ignore::RuntimeWarning")
def test_training_divergence_raises():
    X, y = toy_data(50)
    with pytest.raises(TrainingDiverged) as info:
        train(MLPModel.init(0), X, TrainConfig(lr=1e6, epochs=50, normalize="none"), y=y * 1e200)
    assert info.value.history


def test_train_config_validation():
    with pytest.raises(ValueError):
        TrainConfig(lr=0)
    with pytest.raises(ValueError):
        TrainConfig(epochs=0)
    with pytest.raises(ValueError):
        TrainConfig(normalize="minmax")


def test_checkpoint_roundtrip(tmp_path):
    X, y = toy_data(80)
    m = train(MLPModel.init(1), X, TrainConfig(epochs=5), y=y)
    m.save(tmp_path / "m.json")
    back = MLPModel.load(tmp_path / "m.json")
    assert np.array_equal(back.predict(X), m.predict(X))
    assert json.loads((tmp_path / "m.json").read_text())["layers"] == list(LAYERS)


def test_features_sort_rows():
    assert features([[5, 1, 4, 2, 3]]).tolist() == [[1, 2, 3, 4, 5]]


# ---------------------------------------------------------------- metrics


def test_metric_identities():
    y = np.array([1.0, 4.0, 2.0, 8.0])
    assert metrics(y, y).r2 == 1.0 and metrics(y, y).mae == 0.0
    assert metrics(y, np.full(4, y.mean())).r2 == pytest.approx(0.0)
    assert metrics(y, y + 100).accuracy == 0.0
    with pytest.raises(MetricError):
        metrics(np.ones(3), np.ones(3))
    with pytest.raises(MetricError):
        metrics(y, y[:2])


@given(st.lists(st.floats(-100, 100), min_size=3, max_size=30),
       st.floats(0.1, 10), st.floats(-50, 50))
def test_pmcc_symmetry_and_affine_invariance(xs, a, b):
    x = np.array(xs)
    y = np.sin(x) + 0.1 * x
    if np.ptp(x) < 1e-6 or np.ptp(y) < 1e-6:
        return
    r = pmcc(x, y)
    assert -1 <= r <= 1
    assert pmcc(y, x) == pytest.approx(r, abs=1e-12)
    assert pmcc(a * x + b, y) == pytest.approx(r, abs=1e-9)


def test_pmcc_known_values():
    x = np.arange(10.0)
    assert pmcc(x, 3 * x + 1) == pytest.approx(1.0)
    assert pmcc(x, -x) == pytest.approx(-1.0)
    assert pmcc(x, x ** 2) == pytest.approx(np.corrcoef(x, x ** 2)[0, 1], abs=1e-12)
    with pytest.raises(MetricError):
        pmcc(x, np.ones(10))


# ---------------------------------------------------------------- cross-validation


@settings(max_examples=30)
@given(st.integers(5, 200), st.integers(2, 5), st.integers(0, 100))
def test_kfold_partition(n, k, seed):
    folds = kfold_indices(n, k, seed)
    allidx = np.concatenate(folds)
    assert sorted(allidx.tolist()) == list(range(n))
    sizes = [len(f) for f in folds]
    assert max(sizes) - min(sizes) <= 1


def test_cross_validation_is_reproducible():
    X, y = toy_data(120)
    cfg = TrainConfig(epochs=20, seed=2)
    a = cross_validate(X, cfg, k=3, y=y)
    b = cross_validate(X, cfg, k=3, y=y)
    assert a.to_json() == b.to_json()
    assert len(a.folds) == 3 and a.split == (2, 1)
    assert sum(f["n_test"] for f in a.folds) == 120
    assert "r2 =" in a.summary()


def test_extrapolation_split():
    W = np.array([[1, 1, 1, 1, i] for i in range(20)])
    y = np.array([5] * 10 + list(range(10)))
    tr, te = extrapolation_split(W, y, 0.9)
    assert len(tr) == 18 and len(te) == 2
    assert set(te.tolist()) == {18, 19}
    # ties at the cut go to training in weight order
    W = np.array([[1, 1, 1, 1, 4], [1, 1, 1, 1, 1], [1, 1, 1, 1, 3], [1, 1, 1, 1, 2]])
    tr, te = extrapolation_split(W, np.full(4, 7), 0.5)
    assert tr.tolist() == [1, 3] and te.tolist() == [0, 2]


def test_cn_probe_runs():
    rng = np.random.default_rng(0)
    W = rng.integers(1, 50, size=(80, 5))
    nu = np.where(W[:, 0] > 25, 25, 1)
    nu[:5] = 7
    rep = cn_binary_probe(W, nu, cfg=TrainConfig(epochs=10), k=4)
    assert set(rep.classes) == {1, 25}
    assert rep.n == 75
    assert 0 <= rep.accuracy <= 1 and 0.5 <= rep.majority_rate <= 1

"""Small fully connected regressor trained with Adam, plus evaluation metrics.

Inputs are weight vectors (sorted ascending, then standardised over the
training data); targets stay in their raw units.
"""

from __future__ import annotations

import json
import logging
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass, field, replace
from typing import Sequence

import numpy as np

logger = logging.getLogger(__name__)

LAYERS = (5, 16, 32, 16, 1)


class TrainingDiverged(FloatingPointError):
    def __init__(self, msg, history):
        super().__init__(msg)
        self.history = history


class MetricError(ValueError):
    pass


# --------------------------------------------------------------------------
# model


@dataclass
class MLPModel:
    weights: list  # W[k] has shape (n_in, n_out)
    biases: list
    mean: np.ndarray = field(default_factory=lambda: np.zeros(LAYERS[0]))
    scale: np.ndarray = field(default_factory=lambda: np.ones(LAYERS[0]))
    seed: int | None = None

    @property
    def layers(self) -> tuple:
        return (self.weights[0].shape[0],) + tuple(W.shape[1] for W in self.weights)

    @classmethod
    def init(cls, seed: int = 0, layers: Sequence[int] = LAYERS) -> "MLPModel":
        """Uniform weights with limit sqrt(6 / fan_in); zero biases."""
        rng = np.random.default_rng(seed)
        Ws, bs = [], []
        for a, b in zip(layers[:-1], layers[1:]):
            lim = np.sqrt(6.0 / a)
            Ws.append(rng.uniform(-lim, lim, size=(a, b)))
            bs.append(np.zeros(b))
        return cls(Ws, bs, np.zeros(layers[0]), np.ones(layers[0]), seed)

    @classmethod
    def zeros(cls, layers: Sequence[int] = LAYERS) -> "MLPModel":
        Ws = [np.zeros((a, b)) for a, b in zip(layers[:-1], layers[1:])]
        return cls(Ws, [np.zeros(b) for b in layers[1:]])

    def copy(self) -> "MLPModel":
        return MLPModel([W.copy() for W in self.weights], [b.copy() for b in self.biases],
                        self.mean.copy(), self.scale.copy(), self.seed)

    def params(self) -> list[np.ndarray]:
        return [*self.weights, *self.biases]

    def predict(self, X) -> np.ndarray:
        """Raw (un-normalised) inputs, shape (n, 5) -> predictions (n,)."""
        X = np.atleast_2d(np.asarray(X, dtype=float))
        if not np.isfinite(X).all():
            raise ValueError("non-finite input")
        return _forward(self, (X - self.mean) / self.scale)[0][-1][:, 0]

    def to_json(self) -> dict:
        return {
            "layers": list(self.layers),
            "weights": [W.ravel().tolist() for W in self.weights],
            "biases": [b.tolist() for b in self.biases],
            "mean": self.mean.tolist(),
            "scale": self.scale.tolist(),
            "seed": self.seed,
        }

    @classmethod
    def from_json(cls, obj) -> "MLPModel":
        L = obj["layers"]
        Ws = [np.asarray(w, dtype=float).reshape(a, b)
              for w, a, b in zip(obj["weights"], L[:-1], L[1:])]
        bs = [np.asarray(b, dtype=float) for b in obj["biases"]]
        return cls(Ws, bs, np.asarray(obj["mean"], float), np.asarray(obj["scale"], float),
                   obj.get("seed"))

    def save(self, path) -> None:
        with open(path, "w") as fh:
            json.dump(self.to_json(), fh)

    @classmethod
    def load(cls, path) -> "MLPModel":
        with open(path) as fh:
            return cls.from_json(json.load(fh))


def _forward(model: MLPModel, Z: np.ndarray):
    acts = [Z]
    pre = []
    n = len(model.weights)
    for k, (W, b) in enumerate(zip(model.weights, model.biases)):
        a = acts[-1] @ W + b
        pre.append(a)
        acts.append(np.maximum(a, 0.0) if k < n - 1 else a)
    return acts, pre


def _backward(model: MLPModel, acts, pre, y: np.ndarray):
    """Gradients of mean squared error w.r.t. weights and biases."""
    n = len(y)
    delta = (2.0 / n) * (acts[-1][:, 0] - y)[:, None]
    gW, gb = [None] * len(model.weights), [None] * len(model.biases)
    for k in range(len(model.weights) - 1, -1, -1):
        gW[k] = acts[k].T @ delta
        gb[k] = delta.sum(axis=0)
        if k:
            delta = (delta @ model.weights[k].T) * (pre[k - 1] > 0)
    return gW, gb


def mlp_forward(model: MLPModel, x: Sequence[float]) -> float:
    return float(model.predict(np.asarray(x, dtype=float).reshape(1, -1))[0])


def mse_loss(model: MLPModel, X, y) -> float:
    r = model.predict(X) - np.asarray(y, dtype=float)
    return float(np.mean(r * r))


def _pattern(model: MLPModel, Z: np.ndarray) -> np.ndarray:
    return np.concatenate([(a > 0).ravel() for a in _forward(model, Z)[1][:-1]])


def gradient_check(model: MLPModel, X, y, eps: float = 1e-5, n_probe: int | None = None,
                   seed: int = 0) -> float:
    """Largest relative error between backprop and central differences.

    The error for each entry is |a - n| / max(|a| + |n|, 1e-8); entries are
    probed exhaustively unless ``n_probe`` caps them per array. Probes whose
    two evaluations straddle a ReLU kink are skipped, since the loss is not
    differentiable across it.
    """
    X = np.asarray(X, dtype=float)
    y = np.asarray(y, dtype=float)
    Z = (X - model.mean) / model.scale
    acts, pre = _forward(model, Z)
    gW, gb = _backward(model, acts, pre, y)
    rng = np.random.default_rng(seed)
    worst = 0.0
    for P, G in zip(model.params(), [*gW, *gb]):
        flat = P.reshape(-1)
        idx = np.arange(flat.size)
        if n_probe is not None and flat.size > n_probe:
            idx = rng.choice(flat.size, n_probe, replace=False)
        for i in idx:
            old = flat[i]
            flat[i] = old + eps
            up, pat_up = mse_loss(model, X, y), _pattern(model, Z)
            flat[i] = old - eps
            dn, pat_dn = mse_loss(model, X, y), _pattern(model, Z)
            flat[i] = old
            if not np.array_equal(pat_up, pat_dn):
                continue
            num = (up - dn) / (2 * eps)
            ana = G.reshape(-1)[i]
            worst = max(worst, abs(ana - num) / max(abs(ana) + abs(num), 1e-8))
    return worst


# --------------------------------------------------------------------------
# training


@dataclass(frozen=True)
class TrainConfig:
    lr: float = 1e-3
    beta1: float = 0.9
    beta2: float = 0.999
    eps: float = 1e-8
    epochs: int = 500
    batch_size: int = 32
    patience: int | None = 50
    normalize: str = "standardize"  # or "none"
    seed: int = 0

    def __post_init__(self):
        if self.lr <= 0:
            raise ValueError("learning rate must be positive")
        if self.epochs < 1:
            raise ValueError("need at least one epoch")
        if self.normalize not in ("standardize", "none"):
            raise ValueError(f"unknown normalisation {self.normalize!r}")


def _as_xy(data, y=None) -> tuple[np.ndarray, np.ndarray]:
    if y is None:
        data = list(data)
        X = np.array([d[0] for d in data], dtype=float)
        y = np.array([d[1] for d in data], dtype=float)
    else:
        X = np.asarray(data, dtype=float)
        y = np.asarray(y, dtype=float)
    if len(X) == 0:
        raise ValueError("empty dataset")
    if not np.isfinite(y).all():
        raise ValueError("non-finite targets")
    return X, y


def features(weights) -> np.ndarray:
    """Weight vectors as model inputs: each row sorted ascending."""
    return np.sort(np.asarray(weights, dtype=float).reshape(-1, 5), axis=1)


def train(model: MLPModel, data, cfg: TrainConfig = TrainConfig(), y=None,
          history: list | None = None) -> MLPModel:
    """Mini-batch Adam on MSE; returns a new model (best epoch if early-stopped).

    ``data`` is either a list of ``(x, y)`` pairs or an array ``X`` with
    targets passed as ``y``. Per-epoch training loss is appended to
    ``history`` when given.
    """
    X, y = _as_xy(data, y)
    model = model.copy()
    if cfg.normalize == "standardize":
        model.mean = X.mean(axis=0)
        sd = X.std(axis=0)
        model.scale = np.where(sd > 0, sd, 1.0)
    else:
        model.mean = np.zeros(X.shape[1])
        model.scale = np.ones(X.shape[1])
    Z = (X - model.mean) / model.scale
    rng = np.random.default_rng(cfg.seed)
    params = model.params()
    m = [np.zeros_like(p) for p in params]
    v = [np.zeros_like(p) for p in params]
    t = 0
    hist = history if history is not None else []
    best, best_loss, stale = None, np.inf, 0
    n = len(y)
    for epoch in range(cfg.epochs):
        order = rng.permutation(n)
        for s in range(0, n, cfg.batch_size):
            b = order[s:s + cfg.batch_size]
            acts, pre = _forward(model, Z[b])
            gW, gb = _backward(model, acts, pre, y[b])
            t += 1
            c1 = 1 - cfg.beta1 ** t
            c2 = 1 - cfg.beta2 ** t
            for p, g, mi, vi in zip(params, [*gW, *gb], m, v):
                mi *= cfg.beta1
                mi += (1 - cfg.beta1) * g
                vi *= cfg.beta2
                vi += (1 - cfg.beta2) * g * g
                p -= cfg.lr * (mi / c1) / (np.sqrt(vi / c2) + cfg.eps)
        r = _forward(model, Z)[0][-1][:, 0] - y
        loss = float(np.mean(r * r))
        hist.append(loss)
        if not np.isfinite(loss):
            raise TrainingDiverged(f"loss became {loss} at epoch {epoch}", hist)
        if best is None or loss < best_loss * (1 - 1e-12):
            best_loss, best, stale = loss, model.copy(), 0
        else:
            stale += 1
            if cfg.patience is not None and stale >= cfg.patience:
                break
    return best if best is not None else model


# --------------------------------------------------------------------------
# metrics


@dataclass(frozen=True)
class Metrics:
    r2: float
    mae: float
    accuracy: float


def metrics(y_true, y_pred, tol: float = 0.05) -> Metrics:
    """R^2, mean absolute error and fraction within tol * range(y_true)."""
    yt = np.asarray(y_true, dtype=float)
    yp = np.asarray(y_pred, dtype=float)
    if yt.shape != yp.shape or yt.size == 0:
        raise MetricError("need equal, nonempty inputs")
    ss_tot = float(np.sum((yt - yt.mean()) ** 2))
    if ss_tot == 0:
        raise MetricError("R^2 undefined: true values have zero variance")
    r2 = 1.0 - float(np.sum((yt - yp) ** 2)) / ss_tot
    err = np.abs(yt - yp)
    bound = tol * (yt.max() - yt.min())
    return Metrics(r2, float(err.mean()), float(np.mean(err <= bound)))


def pmcc(x, y) -> float:
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    if x.shape != y.shape or x.size < 2:
        raise MetricError("need two equal-length samples of size >= 2")
    dx, dy = x - x.mean(), y - y.mean()
    sx, sy = np.sqrt(np.sum(dx * dx)), np.sqrt(np.sum(dy * dy))
    if sx == 0 or sy == 0:
        raise MetricError("zero variance")
    return float(np.clip(np.sum(dx * dy) / (sx * sy), -1.0, 1.0))


# --------------------------------------------------------------------------
# cross-validation


@dataclass
class RegressionReport:
    k: int
    split: tuple
    folds: list  # dicts with r2, mae, accuracy, n_train, n_test
    mean: dict
    stderr: dict
    config: dict

    def to_json(self) -> dict:
        return asdict(self)

    def summary(self) -> str:
        return ", ".join(f"{m} = {self.mean[m]:.3f} +- {self.stderr[m]:.3f}"
                         for m in ("r2", "mae", "accuracy"))


def kfold_indices(n: int, k: int, seed: int = 0) -> list[np.ndarray]:
    """Shuffled, disjoint test folds covering range(n); sizes differ by <= 1."""
    if k < 2 or n < k:
        raise ValueError(f"cannot split {n} samples into {k} folds")
    perm = np.random.default_rng(seed).permutation(n)
    return [np.sort(f) for f in np.array_split(perm, k)]


def _fold_job(args):
    X, y, train_idx, test_idx, cfg, fold = args
    model = train(MLPModel.init(cfg.seed + fold), X[train_idx], replace(cfg, seed=cfg.seed + fold),
                  y=y[train_idx])
    m = metrics(y[test_idx], model.predict(X[test_idx]))
    return {"fold": fold, "r2": m.r2, "mae": m.mae, "accuracy": m.accuracy,
            "n_train": int(len(train_idx)), "n_test": int(len(test_idx))}


def cross_validate(data, cfg: TrainConfig = TrainConfig(), k: int = 5, y=None,
                   workers: int = 1) -> RegressionReport:
    X, y = _as_xy(data, y)
    folds = kfold_indices(len(y), k, cfg.seed)
    allidx = np.arange(len(y))
    jobs = [(X, y, np.setdiff1d(allidx, f), f, cfg, i) for i, f in enumerate(folds)]
    if workers > 1:
        with ProcessPoolExecutor(max_workers=workers) as ex:
            rows = list(ex.map(_fold_job, jobs))
    else:
        rows = [_fold_job(j) for j in jobs]
    mean, se = {}, {}
    for key in ("r2", "mae", "accuracy"):
        vals = np.array([r[key] for r in rows])
        mean[key] = float(vals.mean())
        se[key] = float(vals.std(ddof=1) / np.sqrt(k))
    return RegressionReport(k, (k - 1, 1), rows, mean, se, asdict(cfg))


def extrapolation_split(weights, y, frac: float = 0.95) -> tuple[np.ndarray, np.ndarray]:
    """Indices of the ``frac`` smallest targets (train) and the rest (test).

    Ties are broken by the sorted weight tuple, so the split is stable.
    """
    W = np.sort(np.asarray(weights, dtype=np.int64).reshape(-1, 5), axis=1)
    y = np.asarray(y)
    order = np.lexsort(tuple(W[:, i] for i in range(4, -1, -1)) + (y,))
    cut = int(np.floor(frac * len(y)))
    return np.sort(order[:cut]), np.sort(order[cut:])


# --------------------------------------------------------------------------
# CN class probe


@dataclass
class ProbeReport:
    classes: tuple
    n: int
    accuracy: float
    majority_rate: float
    folds: list


def cn_binary_probe(weights, nu, classes: tuple | None = None,
                    cfg: TrainConfig = TrainConfig(), k: int = 5) -> ProbeReport:
    """Two-class CN prediction with the same regressor read out at 0.5.

    ``classes`` defaults to the two most frequent values in ``nu``.
    """
    nu = np.asarray(nu, dtype=np.int64)
    if classes is None:
        vals, counts = np.unique(nu, return_counts=True)
        top = vals[np.argsort(-counts, kind="stable")[:2]]
        classes = (int(top[0]), int(top[1]))
    mask = np.isin(nu, classes)
    X = features(np.asarray(weights)[mask])
    lab = (nu[mask] == classes[1]).astype(float)
    folds = kfold_indices(len(lab), k, cfg.seed)
    accs = []
    allidx = np.arange(len(lab))
    for i, f in enumerate(folds):
        tr = np.setdiff1d(allidx, f)
        m = train(MLPModel.init(cfg.seed + i), X[tr], cfg, y=lab[tr])
        accs.append(float(np.mean((m.predict(X[f]) > 0.5) == (lab[f] > 0.5))))
    maj = float(max(lab.mean(), 1 - lab.mean()))
    return ProbeReport(tuple(classes), int(len(lab)), float(np.mean(accs)), maj, accs)

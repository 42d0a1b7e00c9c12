"""MLP regressor for normalized price moves, trained with a direction-penalized MAE.

Architecture: input -> 64 -> 256 -> 1 by default, rectifier hidden units,
linear output.  The loss is mean absolute error where a sample is weighted
x2 whenever truth and prediction do not sit on the same side of 1 (i.e. the
predicted move direction is wrong); a value of exactly 1 counts as the wrong
side.  Training is plain full-batch gradient descent from a seeded
deterministic initialization, so identical seed and data reproduce metrics
bit for bit.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass

import numpy as np

from .rng import SplitMix64
from .textfeat import FeatureMatrix
from .timeseries import NormalizedTarget

_MODEL_FORMAT_VERSION = 1
_FULL_BATCH_LIMIT = 1000


class ModelError(ValueError):
    pass


@dataclass(frozen=True)
class MlpConfig:
    hidden_units: tuple[int, ...] = (64, 256)
    output_units: int = 1
    seed: int = 0
    learning_rate: float = 1e-3
    epochs: int = 200
    runs: int = 3
    batch_size: int | None = None  # None: full batch under 1000 rows, else 128

    def __post_init__(self):
        if any(u < 1 for u in self.hidden_units) or self.output_units != 1:
            raise ModelError("hidden sizes must be positive and output_units must be 1")
        if self.learning_rate <= 0 or self.epochs < 1 or self.runs < 1:
            raise ModelError("learning_rate, epochs and runs must be positive")


@dataclass(frozen=True)
class SplitSpec:
    train_fraction: float = 0.8
    chronological: bool = True

    def __post_init__(self):
        if not 0.0 < self.train_fraction < 1.0:
            raise ModelError("train_fraction must be in (0, 1)")
        if not self.chronological:
            raise ModelError("only chronological splits are supported")


@dataclass(frozen=True)
class Stat:
    mean: float
    std: float


@dataclass(frozen=True)
class Metrics:
    mae: Stat
    accuracy: Stat
    f1: Stat
    n_train: int
    n_test: int
    runs: int


@dataclass
class MlpModel:
    weights: list  # per layer, shape (fan_in, fan_out)
    biases: list   # per layer, shape (fan_out,)
    config: MlpConfig
    seed: int
    n_train: int = 0
    n_test: int = 0

    @property
    def feature_dim(self) -> int:
        return self.weights[0].shape[0]


def _init_model(feature_dim: int, config: MlpConfig, seed: int) -> MlpModel:
    """Uniform fan-in-scaled weights from the counter-based generator."""
    sizes = (feature_dim, *config.hidden_units, config.output_units)
    rng = SplitMix64(seed)
    weights, biases = [], []
    for fan_in, fan_out in zip(sizes, sizes[1:]):
        bound = 1.0 / math.sqrt(fan_in)
        w = (rng.uniforms(fan_in * fan_out) * 2.0 - 1.0) * bound
        weights.append(w.reshape(fan_in, fan_out))
        biases.append(np.zeros(fan_out))
    return MlpModel(weights=weights, biases=biases, config=config, seed=seed)


def _forward_batch(model: MlpModel, x: np.ndarray):
    """Returns (predictions, activations); activations[0] is the input."""
    activations = [x]
    a = x
    last = len(model.weights) - 1
    for i, (w, b) in enumerate(zip(model.weights, model.biases)):
        z = a @ w + b
        a = z if i == last else np.maximum(z, 0.0)
        activations.append(a)
    return a[:, 0], activations


def predict(model: MlpModel, x: np.ndarray) -> np.ndarray:
    x = np.asarray(x, dtype=float)
    if x.ndim != 2 or x.shape[1] != model.feature_dim:
        raise ModelError(f"expected shape (n, {model.feature_dim}), got {x.shape}")
    if not np.all(np.isfinite(x)):
        raise ModelError("features must be finite")
    return _forward_batch(model, x)[0]


def forward(model: MlpModel, features) -> float:
    """Prediction for a single feature vector."""
    features = np.asarray(features, dtype=float)
    if features.ndim != 1:
        raise ModelError("features must be a 1-D vector")
    return float(predict(model, features[None, :])[0])


def direction_penalties(truth, predictions) -> np.ndarray:
    """Per-sample penalty: 1 when both values sit strictly on the same side of 1, else 2."""
    t = np.asarray(truth, dtype=float)
    p = np.asarray(predictions, dtype=float)
    same_side = ((t > 1.0) & (p > 1.0)) | ((t < 1.0) & (p < 1.0))
    return np.where(same_side, 1.0, 2.0)


def penalized_mae_loss(truth, predictions) -> float:
    """Mean of penalty * |truth - prediction| over the batch."""
    t = np.asarray(truth, dtype=float)
    p = np.asarray(predictions, dtype=float)
    if t.shape != p.shape or t.ndim != 1 or t.size == 0:
        raise ModelError("truth and predictions must be equal-length non-empty 1-D arrays")
    return float(np.mean(direction_penalties(t, p) * np.abs(t - p)))


def backward(model: MlpModel, x: np.ndarray, y: np.ndarray):
    """Gradients of the penalized MAE w.r.t. every weight and bias.

    Subgradient 0 is taken at the |.| kinks (sign(0) = 0); the penalty factor
    is treated as piecewise constant in the prediction.
    """
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    preds, activations = _forward_batch(model, x)
    m = y.shape[0]
    dpred = direction_penalties(y, preds) * np.sign(preds - y) / m
    grad_w = [np.zeros_like(w) for w in model.weights]
    grad_b = [np.zeros_like(b) for b in model.biases]
    delta = dpred[:, None]  # gradient flowing into each layer's output
    for i in range(len(model.weights) - 1, -1, -1):
        if i != len(model.weights) - 1:
            delta = delta * (activations[i + 1] > 0.0)
        grad_w[i] = activations[i].T @ delta
        grad_b[i] = delta.sum(axis=0)
        if i > 0:
            delta = delta @ model.weights[i].T
    return grad_w, grad_b


def _sgd_step(model: MlpModel, x, y, lr: float):
    grad_w, grad_b = backward(model, x, y)
    for w, b, gw, gb in zip(model.weights, model.biases, grad_w, grad_b):
        w -= lr * gw
        b -= lr * gb


def _fit(model: MlpModel, x: np.ndarray, y: np.ndarray):
    cfg = model.config
    n = x.shape[0]
    batch = cfg.batch_size
    if batch is None:
        batch = n if n < _FULL_BATCH_LIMIT else 128
    for _ in range(cfg.epochs):
        for start in range(0, n, batch):
            _sgd_step(model, x[start : start + batch], y[start : start + batch], cfg.learning_rate)


def binarize(values) -> np.ndarray:
    """1 for an up-move (> 1), else 0; mirrors timeseries.to_binary_label."""
    return (np.asarray(values, dtype=float) > 1.0).astype(int)


def classification_scores(truth_labels, pred_labels) -> tuple[float, float]:
    """(accuracy, F1) with the up-move class as positive."""
    t = np.asarray(truth_labels)
    p = np.asarray(pred_labels)
    accuracy = float(np.mean(t == p))
    tp = int(np.sum((t == 1) & (p == 1)))
    fp = int(np.sum((t == 0) & (p == 1)))
    fn = int(np.sum((t == 1) & (p == 0)))
    f1 = 2 * tp / (2 * tp + fp + fn) if (2 * tp + fp + fn) > 0 else 0.0
    return accuracy, f1


def _eval_arrays(model: MlpModel, x: np.ndarray, y: np.ndarray) -> tuple[float, float, float]:
    preds = predict(model, x)
    mae = float(np.mean(np.abs(y - preds)))
    accuracy, f1 = classification_scores(binarize(y), binarize(preds))
    return mae, accuracy, f1


def align_features_to_target(matrix: FeatureMatrix, target: NormalizedTarget):
    """Feature rows matched to target values by frame index.

    Returns (row_positions, X, y); raises if a target index has no matching row.
    """
    pos = {fi: r for r, fi in enumerate(matrix.frame_indices)}
    rows, ys = [], []
    for i, y in target.values:
        if i not in pos:
            raise ModelError(f"target frame {i} has no feature row")
        rows.append(pos[i])
        ys.append(y)
    return rows, matrix.values[rows].astype(float), np.asarray(ys, dtype=float)


def split_positions(n: int, split: SplitSpec) -> tuple[list[int], list[int]]:
    """Chronological cut: first floor(train_fraction * n) rows train, rest test."""
    n_train = int(math.floor(split.train_fraction * n))
    return list(range(n_train)), list(range(n_train, n))


def _stat(samples) -> Stat:
    arr = np.asarray(samples, dtype=float)
    return Stat(mean=float(arr.mean()), std=float(arr.std()))


def train(
    matrix: FeatureMatrix,
    target: NormalizedTarget,
    mlp: MlpConfig | None = None,
    split: SplitSpec | None = None,
) -> tuple[MlpModel, Metrics]:
    """Train ``runs`` seeded models on the chronological split; aggregate metrics.

    Run r is initialized from seed + r; the returned model is run 0's.
    Metrics are mean +/- std (population) over the runs, evaluated on the
    held-out latest fraction.
    """
    mlp = mlp or MlpConfig()
    split = split or SplitSpec()
    _, x, y = align_features_to_target(matrix, target)
    train_pos, test_pos = split_positions(len(y), split)
    if len(test_pos) < 2:
        raise ModelError(f"test split has {len(test_pos)} rows; need at least 2")
    x_train, y_train = x[train_pos], y[train_pos]
    x_test, y_test = x[test_pos], y[test_pos]

    first_model = None
    maes, accs, f1s = [], [], []
    for r in range(mlp.runs):
        model = _init_model(x.shape[1], mlp, mlp.seed + r)
        _fit(model, x_train, y_train)
        model.n_train = len(train_pos)
        model.n_test = len(test_pos)
        mae, acc, f1 = _eval_arrays(model, x_test, y_test)
        maes.append(mae)
        accs.append(acc)
        f1s.append(f1)
        if r == 0:
            first_model = model

    metrics = Metrics(
        mae=_stat(maes),
        accuracy=_stat(accs),
        f1=_stat(f1s),
        n_train=len(train_pos),
        n_test=len(test_pos),
        runs=mlp.runs,
    )
    return first_model, metrics


def evaluate(model: MlpModel, matrix: FeatureMatrix, target: NormalizedTarget) -> Metrics:
    """Metrics of one trained model on the given aligned rows (stds are 0)."""
    _, x, y = align_features_to_target(matrix, target)
    if len(y) == 0:
        raise ModelError("evaluation set is empty")
    mae, acc, f1 = _eval_arrays(model, x, y)
    return Metrics(
        mae=Stat(mae, 0.0),
        accuracy=Stat(acc, 0.0),
        f1=Stat(f1, 0.0),
        n_train=model.n_train,
        n_test=len(y),
        runs=1,
    )


def model_to_json(model: MlpModel) -> str:
    """Versioned JSON: layer sizes, row-major weights, config, seed."""
    doc = {
        "format_version": _MODEL_FORMAT_VERSION,
        "layer_sizes": [model.feature_dim]
        + [w.shape[1] for w in model.weights],
        "weights": [w.tolist() for w in model.weights],
        "biases": [b.tolist() for b in model.biases],
        "config": {
            "hidden_units": list(model.config.hidden_units),
            "output_units": model.config.output_units,
            "seed": model.config.seed,
            "learning_rate": model.config.learning_rate,
            "epochs": model.config.epochs,
            "runs": model.config.runs,
        },
        "seed": model.seed,
        "n_train": model.n_train,
        "n_test": model.n_test,
    }
    return json.dumps(doc, sort_keys=True, indent=2) + "\n"


def model_from_json(text: str) -> MlpModel:
    doc = json.loads(text)
    if doc.get("format_version") != _MODEL_FORMAT_VERSION:
        raise ModelError(f"unsupported model format {doc.get('format_version')!r}")
    cfg = doc["config"]
    config = MlpConfig(
        hidden_units=tuple(cfg["hidden_units"]),
        output_units=cfg["output_units"],
        seed=cfg["seed"],
        learning_rate=cfg["learning_rate"],
        epochs=cfg["epochs"],
        runs=cfg["runs"],
    )
    model = MlpModel(
        weights=[np.array(w, dtype=float) for w in doc["weights"]],
        biases=[np.array(b, dtype=float) for b in doc["biases"]],
        config=config,
        seed=doc["seed"],
        n_train=doc.get("n_train", 0),
        n_test=doc.get("n_test", 0),
    )
    return model

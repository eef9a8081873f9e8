"""Feed-forward network: dense 128 -> dense 128 -> 1 with inverted dropout.

Trained with mini-batch Adam on mean squared error (regression head, ReLU
output) or binary cross-entropy (binary head, sigmoid output). All
randomness (init, shuffling, dropout masks) comes from seeded generators so
training is bit-reproducible.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from ..errors import DataError, NumericError
from . import as_dense

HIDDEN = 128
ADAM_BETA1 = 0.9
ADAM_BETA2 = 0.999
ADAM_EPS = 1e-8

PARAM_NAMES = ("w1", "b1", "w2", "b2", "w3", "b3")


@dataclass
class MlpModel:
    w1: np.ndarray
    b1: np.ndarray
    w2: np.ndarray
    b2: np.ndarray
    w3: np.ndarray
    b3: np.ndarray
    dropout_rate: float
    task: str  # "regression" | "binary"
    seed: int
    train_log: list[float] = field(default_factory=list)

    @property
    def n_features(self) -> int:
        return self.w1.shape[0]

    def params(self) -> dict[str, np.ndarray]:
        return {name: getattr(self, name) for name in PARAM_NAMES}


def init_mlp(n_features: int, dropout_rate: float = 0.85, task: str = "regression",
             seed: int = 0) -> MlpModel:
    if n_features < 1:
        raise DataError(f"n_features must be >= 1, got {n_features}")
    if not (0.0 <= dropout_rate < 1.0):
        raise DataError(f"dropout_rate must be in [0, 1), got {dropout_rate}")
    if task not in ("regression", "binary"):
        raise DataError(f"task must be regression or binary, got {task!r}")
    rng = np.random.default_rng(np.random.SeedSequence(seed))

    def uniform(fan_in, shape):
        bound = 1.0 / np.sqrt(fan_in)
        return rng.uniform(-bound, bound, size=shape)

    return MlpModel(
        w1=uniform(n_features, (n_features, HIDDEN)),
        b1=np.zeros(HIDDEN),
        w2=uniform(HIDDEN, (HIDDEN, HIDDEN)),
        b2=np.zeros(HIDDEN),
        w3=uniform(HIDDEN, (HIDDEN, 1)),
        b3=np.zeros(1),
        dropout_rate=float(dropout_rate),
        task=task,
        seed=seed,
    )


def _softplus(z):
    return np.maximum(z, 0.0) + np.log1p(np.exp(-np.abs(z)))


def _sigmoid(z):
    out = np.empty_like(z)
    pos = z >= 0
    out[pos] = 1.0 / (1.0 + np.exp(-z[pos]))
    ez = np.exp(z[~pos])
    out[~pos] = ez / (1.0 + ez)
    return out


def forward(model: MlpModel, X, training: bool = False, rng=None):
    """Network output as a 1-D vector; dropout masks only when training."""
    X = as_dense(X)
    if X.shape[1] != model.n_features:
        raise DataError(f"model expects {model.n_features} features, got {X.shape[1]}")
    rate = model.dropout_rate if training else 0.0
    mask1 = mask2 = None
    if rate > 0.0:
        keep = 1.0 - rate
        mask1 = (rng.random((X.shape[0], HIDDEN)) >= rate) / keep
        mask2 = (rng.random((X.shape[0], HIDDEN)) >= rate) / keep
    out, _ = _forward_pass(model.params(), X, model.task, mask1, mask2)
    return out


def _forward_pass(params, X, task, mask1, mask2):
    z1 = X @ params["w1"] + params["b1"]
    a1 = np.maximum(z1, 0.0)
    if mask1 is not None:
        a1 = a1 * mask1
    z2 = a1 @ params["w2"] + params["b2"]
    a2 = np.maximum(z2, 0.0)
    if mask2 is not None:
        a2 = a2 * mask2
    z3 = (a2 @ params["w3"] + params["b3"]).ravel()
    if task == "regression":
        out = np.maximum(z3, 0.0)
    else:
        out = _sigmoid(z3)
    return out, (X, z1, a1, z2, a2, z3)


def loss_and_grads(params, X, y, task, mask1=None, mask2=None):
    """Mean loss over the batch plus gradients for every parameter.

    Backpropagation through the exact forward pass used in training;
    the finite-difference suite checks these gradients coordinate-wise.
    """
    n = X.shape[0]
    out, (X, z1, a1, z2, a2, z3) = _forward_pass(params, X, task, mask1, mask2)
    if task == "regression":
        err = out - y
        loss = float(np.mean(err**2))
        dz3 = (2.0 / n) * err * (z3 > 0.0)
    else:
        loss = float(np.mean(y * _softplus(-z3) + (1.0 - y) * _softplus(z3)))
        dz3 = (out - y) / n
    dz3 = dz3[:, None]
    grads = {}
    grads["w3"] = a2.T @ dz3
    grads["b3"] = dz3.sum(axis=0)
    da2 = dz3 @ params["w3"].T
    if mask2 is not None:
        da2 = da2 * mask2
    dz2 = da2 * (z2 > 0.0)
    grads["w2"] = a1.T @ dz2
    grads["b2"] = dz2.sum(axis=0)
    da1 = dz2 @ params["w2"].T
    if mask1 is not None:
        da1 = da1 * mask1
    dz1 = da1 * (z1 > 0.0)
    grads["w1"] = X.T @ dz1
    grads["b1"] = dz1.sum(axis=0)
    return loss, grads


def train_mlp(
    model: MlpModel,
    X,
    y,
    epochs: int = 100,
    batch_size: int = 32,
    learning_rate: float = 1e-3,
    seed: int = 0,
) -> MlpModel:
    X = as_dense(X)
    y = np.asarray(y, dtype=np.float64)
    if X.shape[0] != y.shape[0]:
        raise DataError(f"X has {X.shape[0]} rows but y has {y.shape[0]} entries")
    if model.task == "regression":
        if np.min(y) < 1.0 or np.max(y) > 7.0:
            raise DataError("regression labels must lie in [1, 7]")
    else:
        if not np.all(np.isin(y, (0.0, 1.0))):
            raise DataError("binary labels must be 0 or 1")
    n = X.shape[0]
    rng = np.random.default_rng(np.random.SeedSequence(seed))
    params = model.params()
    # ReLU output head: a fresh model whose pre-activations all start negative
    # would never receive gradient, so seed the output bias with the label mean
    if model.task == "regression" and not model.train_log and model.b3[0] == 0.0:
        params["b3"] = params["b3"] + float(np.mean(y))
    m_state = {k: np.zeros_like(v) for k, v in params.items()}
    v_state = {k: np.zeros_like(v) for k, v in params.items()}
    t = 0
    rate = model.dropout_rate
    keep = 1.0 - rate
    for epoch in range(epochs):
        order = rng.permutation(n)
        epoch_loss = 0.0
        for lo in range(0, n, batch_size):
            batch = order[lo : lo + batch_size]
            xb, yb = X[batch], y[batch]
            mask1 = mask2 = None
            if rate > 0.0:
                mask1 = (rng.random((len(batch), HIDDEN)) >= rate) / keep
                mask2 = (rng.random((len(batch), HIDDEN)) >= rate) / keep
            loss, grads = loss_and_grads(params, xb, yb, model.task, mask1, mask2)
            if not np.isfinite(loss):
                raise NumericError(
                    f"non-finite training loss at epoch {epoch + 1} "
                    f"(learning_rate={learning_rate:g}, batch_size={batch_size})"
                )
            epoch_loss += loss * len(batch)
            t += 1
            bc1 = 1.0 - ADAM_BETA1**t
            bc2 = 1.0 - ADAM_BETA2**t
            for k in params:
                g = grads[k]
                m_state[k] = ADAM_BETA1 * m_state[k] + (1.0 - ADAM_BETA1) * g
                v_state[k] = ADAM_BETA2 * v_state[k] + (1.0 - ADAM_BETA2) * g * g
                params[k] = params[k] - learning_rate * (m_state[k] / bc1) / (
                    np.sqrt(v_state[k] / bc2) + ADAM_EPS
                )
        model.train_log.append(epoch_loss / n)
        for k, v in params.items():
            setattr(model, k, v)
    return model


def predict_mlp(model: MlpModel, X) -> np.ndarray:
    return forward(model, X, training=False)

"""Ridge classifier, linear SVM and logistic regression, written from scratch.

All three work on features standardized with training statistics and carry
an unregularized bias. Labels are +1 (rumble) / -1 (background); a zero
decision value is classified as +1.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from ..errors import DataError, NumericError, SizeError
from .dataset import Dataset

LINEAR_KINDS = ("ridge", "svm_linear", "logistic")


@dataclass(frozen=True)
class LinearModel:
    kind: str
    weights: np.ndarray
    bias: float
    hyperparams: dict = field(default_factory=dict)
    means: np.ndarray | None = None
    stds: np.ndarray | None = None
    trace: tuple = field(default=(), compare=False, repr=False)

    def __post_init__(self):
        if self.kind not in LINEAR_KINDS:
            raise ValueError(f"unknown linear model kind {self.kind!r}")
        w = np.asarray(self.weights, dtype=np.float64).reshape(-1)
        if not np.all(np.isfinite(w)) or not np.isfinite(self.bias):
            raise NumericError(f"{self.kind} training produced non-finite weights")
        object.__setattr__(self, "weights", w)
        object.__setattr__(self, "bias", float(self.bias))
        d = w.shape[0]
        means = np.zeros(d) if self.means is None else np.asarray(self.means, dtype=np.float64)
        stds = np.ones(d) if self.stds is None else np.asarray(self.stds, dtype=np.float64)
        object.__setattr__(self, "means", means)
        object.__setattr__(self, "stds", stds)

    @property
    def n_features(self) -> int:
        return self.weights.shape[0]

    def transform(self, X) -> np.ndarray:
        X = np.atleast_2d(np.asarray(X, dtype=np.float64))
        if X.shape[1] != self.n_features:
            raise SizeError(f"model expects {self.n_features} features, got {X.shape[1]}")
        return (X - self.means) / self.stds

    def decision_function(self, X) -> np.ndarray:
        return self.transform(X) @ self.weights + self.bias

    def predict(self, X) -> np.ndarray:
        return np.where(self.decision_function(X) >= 0.0, 1, -1)

    def to_dict(self) -> dict:
        return {
            "kind": self.kind,
            "weights": self.weights.tolist(),
            "bias": self.bias,
            "hyperparams": dict(self.hyperparams),
            "standardization": {"means": self.means.tolist(), "stds": self.stds.tolist()},
        }

    @classmethod
    def from_dict(cls, d: dict) -> "LinearModel":
        std = d.get("standardization") or {}
        return cls(d["kind"], np.asarray(d["weights"]), d["bias"], dict(d.get("hyperparams", {})),
                   std.get("means"), std.get("stds"))


def standardization(X: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    means = X.mean(axis=0)
    stds = X.std(axis=0)
    stds = np.where(stds > 0, stds, 1.0)
    return means, stds


def _prepare(train: Dataset, standardize: bool):
    train.require_both_classes()
    X = train.X
    if standardize:
        means, stds = standardization(X)
    else:
        means, stds = np.zeros(X.shape[1]), np.ones(X.shape[1])
    Z = (X - means) / stds
    return Z, train.y.astype(np.float64), means, stds


def _augment(Z: np.ndarray) -> np.ndarray:
    return np.hstack([Z, np.ones((Z.shape[0], 1))])


def ridge_solve(Z: np.ndarray, y: np.ndarray, alpha: float) -> np.ndarray:
    """Solve (A^T A + alpha*P) theta = A^T y with A = [Z, 1], P = diag(1..1, 0)."""
    A = _augment(Z)
    penalty = np.full(A.shape[1], float(alpha))
    penalty[-1] = 0.0
    G = A.T @ A + np.diag(penalty)
    # Jacobi scaling keeps a large alpha from looking ill-conditioned
    diag = np.sqrt(np.maximum(np.diag(G), np.finfo(float).tiny))
    if np.linalg.cond(G / np.outer(diag, diag)) > 1e12:
        raise NumericError(f"ridge normal equations are singular (alpha={alpha})")
    try:
        return np.linalg.solve(G, A.T @ y)
    except np.linalg.LinAlgError as exc:
        raise NumericError(f"ridge solve failed: {exc}") from exc


def train_ridge(train: Dataset, alpha: float = 1.0, standardize: bool = True) -> LinearModel:
    if alpha < 0:
        raise ValueError("alpha must be nonnegative")
    Z, y, means, stds = _prepare(train, standardize)
    theta = ridge_solve(Z, y, alpha)
    return LinearModel("ridge", theta[:-1], theta[-1], {"alpha": alpha}, means, stds)


def hinge_objective(w: np.ndarray, b: float, Z: np.ndarray, y: np.ndarray, C: float) -> float:
    """0.5*|w|^2 + C * mean(max(0, 1 - y (w.z + b)))."""
    margins = 1.0 - y * (Z @ w + b)
    return float(0.5 * w @ w + C * np.mean(np.maximum(margins, 0.0)))


def hinge_subgradient(w: np.ndarray, b: float, Z: np.ndarray, y: np.ndarray, C: float):
    active = y * (Z @ w + b) < 1.0
    scale = C / Z.shape[0]
    return w - scale * (y[active] @ Z[active]), -scale * float(y[active].sum())


def train_svm_linear(train: Dataset, C: float = 1.0, epochs: int = 300, step: float = 1.0,
                     standardize: bool = True, max_halvings: int = 30) -> LinearModel:
    """Primal hinge loss with L2 penalty, full-batch subgradient descent.

    Each epoch takes one subgradient step; the step is halved until the
    objective does not increase (the step carries over to the next epoch).
    If no halving helps the iterate is at a kink minimum and training stops.
    ``trace`` holds the objective after each epoch.
    """
    Z, y, means, stds = _prepare(train, standardize)
    w = np.zeros(Z.shape[1])
    b = 0.0
    eta = step
    current = hinge_objective(w, b, Z, y, C)
    trace = [current]
    for _ in range(epochs):
        gw, gb = hinge_subgradient(w, b, Z, y, C)
        for _ in range(max_halvings):
            w_new, b_new = w - eta * gw, b - eta * gb
            candidate = hinge_objective(w_new, b_new, Z, y, C)
            if candidate <= current:
                break
            eta *= 0.5
        else:
            break
        w, b, current = w_new, b_new, candidate
        trace.append(current)
    hp = {"C": C, "epochs": epochs, "step": step}
    return LinearModel("svm_linear", w, b, hp, means, stds, tuple(trace))


def logistic_loss_and_grad(theta: np.ndarray, Z: np.ndarray, y01: np.ndarray):
    """Mean negative log-likelihood and its gradient; theta = [w..., b]."""
    A = _augment(Z)
    t = A @ theta
    # log(1 + e^t) - y t, evaluated stably
    loss = float(np.mean(np.logaddexp(0.0, t) - y01 * t))
    p = 0.5 * (1.0 + np.tanh(0.5 * t))
    grad = A.T @ (p - y01) / Z.shape[0]
    return loss, grad


def train_logistic(train: Dataset, step: float = 0.5, epochs: int = 5000, tol: float = 1e-8,
                   standardize: bool = True) -> LinearModel:
    """Maximum likelihood by batch gradient descent.

    Stops early once the gradient norm falls below ``tol``; on separable
    data the epoch budget acts as early stopping.
    """
    Z, y, means, stds = _prepare(train, standardize)
    y01 = (y > 0).astype(np.float64)
    theta = np.zeros(Z.shape[1] + 1)
    trace = []
    for _ in range(epochs):
        loss, grad = logistic_loss_and_grad(theta, Z, y01)
        trace.append(loss)
        if np.linalg.norm(grad) < tol:
            break
        theta = theta - step * grad
    hp = {"step": step, "epochs": epochs, "tol": tol}
    return LinearModel("logistic", theta[:-1], theta[-1], hp, means, stds, tuple(trace))


def predict_proba(model: LinearModel, X) -> np.ndarray:
    """P(rumble | x) for a logistic model."""
    if model.kind != "logistic":
        raise DataError("probabilities are only defined for logistic models")
    t = model.decision_function(X)
    return 0.5 * (1.0 + np.tanh(0.5 * t))

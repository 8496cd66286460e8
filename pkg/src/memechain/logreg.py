"""Binary L2-regularized logistic regression, the chain's base classifier.

Training minimizes

    J(w, b) = sum_n log(1 + exp(-y_n (w.x_n + b))) + (l2/2) ||w||^2

with y_n in {-1, +1} mapped from 0/1 targets and the intercept left
unpenalized. The objective is smooth and convex, so the BFGS minimizer
below with a backtracking (Armijo) line search finds the global optimum;
accepted iterates never increase J, and iteration stops once the gradient
infinity-norm drops to ``gradient_tolerance`` or ``max_iterations`` is hit.
Defaults (l2=1.0, 100 iterations, tolerance 1e-4, zero start) follow the
usual library defaults for this model so results are comparable.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import DataError, NumericalError


@dataclass(frozen=True)
class TrainConfig:
    l2_strength: float = 1.0
    max_iterations: int = 100
    gradient_tolerance: float = 1e-4

    def __post_init__(self):
        if self.l2_strength < 0:
            raise ValueError("l2_strength must be >= 0")
        if self.max_iterations < 1:
            raise ValueError("max_iterations must be >= 1")
        if self.gradient_tolerance <= 0:
            raise ValueError("gradient_tolerance must be > 0")


@dataclass(frozen=True)
class LinearModel:
    weights: np.ndarray
    intercept: float


def sigmoid(z):
    """Numerically stable logistic function, element-wise."""
    z = np.asarray(z, dtype=np.float64)
    # each branch sees only non-positive exponents
    ez_neg = np.exp(-np.maximum(z, 0.0))
    ez_pos = np.exp(np.minimum(z, 0.0))
    return np.where(z >= 0, 1.0 / (1.0 + ez_neg), ez_pos / (1.0 + ez_pos))


def objective(model: LinearModel, features, targets, l2_strength: float) -> float:
    """Regularized negative log-likelihood J(w, b)."""
    z = features @ model.weights + model.intercept
    signed = (2.0 * np.asarray(targets) - 1.0) * z
    penalty = 0.5 * l2_strength * float(model.weights @ model.weights)
    return float(np.logaddexp(0.0, -signed).sum() + penalty)


def gradient(model: LinearModel, features, targets, l2_strength: float) -> np.ndarray:
    """Analytic gradient of J, weights first, intercept last (dim m+1)."""
    residual = sigmoid(features @ model.weights + model.intercept) - np.asarray(targets)
    grad_w = features.T @ residual + l2_strength * model.weights
    return np.concatenate([grad_w, [residual.sum()]])


def _minimize_bfgs(value_and_grad, x0, gradient_tolerance, max_iterations):
    """BFGS with Armijo backtracking; iterates decrease f monotonically."""
    x = np.array(x0, dtype=np.float64)
    f, g = value_and_grad(x)
    n = x.size
    H = np.eye(n)
    first_update = True
    for _ in range(max_iterations):
        if np.max(np.abs(g)) <= gradient_tolerance:
            break
        p = -H @ g
        slope = float(p @ g)
        if slope >= 0.0:  # curvature info went bad; restart from steepest descent
            H = np.eye(n)
            first_update = True
            p = -g
            slope = -float(g @ g)
        step = 1.0
        for _ in range(60):
            x_new = x + step * p
            f_new, g_new = value_and_grad(x_new)
            if f_new <= f + 1e-4 * step * slope:
                break
            step *= 0.5
        else:
            break  # no decreasing step at float precision
        s = x_new - x
        y = g_new - g
        sy = float(s @ y)
        if sy > 1e-12 * np.linalg.norm(s) * np.linalg.norm(y):
            if first_update:
                H *= sy / float(y @ y)
                first_update = False
            rho = 1.0 / sy
            Hy = H @ y
            H -= rho * (np.outer(s, Hy) + np.outer(Hy, s))
            H += (rho * rho * float(y @ Hy) + rho) * np.outer(s, s)
        x, f, g = x_new, f_new, g_new
    return x


def train_binary(features, targets, cfg: TrainConfig = TrainConfig()) -> LinearModel:
    """Fit a LinearModel to 0/1 targets by minimizing J from zero start."""
    features = np.asarray(features, dtype=np.float64)
    targets = np.asarray(targets, dtype=np.float64)
    if features.ndim != 2 or features.shape[0] < 1:
        raise DataError("training requires a non-empty N x m feature matrix")
    if targets.shape != (features.shape[0],):
        raise DataError(
            f"targets shape {targets.shape} does not match {features.shape[0]} rows"
        )
    if not np.all(np.isfinite(features)):
        raise NumericalError("non-finite feature entries")
    if not np.all((targets == 0.0) | (targets == 1.0)):
        raise DataError("targets must be 0 or 1")

    n_features = features.shape[1]
    l2 = cfg.l2_strength

    def value_and_grad(params):
        w, b = params[:-1], params[-1]
        z = features @ w + b
        signed = (2.0 * targets - 1.0) * z
        f = float(np.logaddexp(0.0, -signed).sum() + 0.5 * l2 * (w @ w))
        residual = sigmoid(z) - targets
        grad = np.concatenate([features.T @ residual + l2 * w, [residual.sum()]])
        return f, grad

    params = _minimize_bfgs(
        value_and_grad,
        np.zeros(n_features + 1),
        cfg.gradient_tolerance,
        cfg.max_iterations,
    )
    return LinearModel(weights=params[:-1], intercept=float(params[-1]))


def predict_proba(model: LinearModel, features) -> np.ndarray:
    """Per-row probability sigmoid(w.x + b), in (0, 1)."""
    features = np.asarray(features, dtype=np.float64)
    if features.ndim != 2 or features.shape[1] != model.weights.size:
        raise DataError(
            f"feature width {features.shape[-1] if features.ndim else '?'} "
            f"does not match model width {model.weights.size}"
        )
    return sigmoid(features @ model.weights + model.intercept)

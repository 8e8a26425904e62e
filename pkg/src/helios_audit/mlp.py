"""Small feedforward network (one tanh hidden layer, identity output) with a
from-scratch Levenberg-Marquardt trainer.

The functional layer works on plain numpy arrays and a packed parameter
vector; :class:`LevenbergMarquardtRegressor` wraps it in a scikit-learn
style estimator that owns input/target normalization.

Parameter packing order: hidden weights row-major (hidden x n_inputs),
hidden biases, output weights, output bias — ``h*k + 2h + 1`` numbers.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass
from typing import Sequence

import numpy as np
from sklearn.base import BaseEstimator, RegressorMixin
from sklearn.utils.validation import check_array, check_is_fitted, check_X_y

from .errors import DegenerateRange, DimensionMismatch, SingularSystem
from .seeding import seed_sequence
from .validation import as_float_matrix, as_float_vector

__all__ = [
    "ScaleRanges",
    "fit_ranges",
    "normalize",
    "denormalize",
    "n_params",
    "pack_params",
    "unpack_params",
    "forward",
    "jacobian",
    "LmConfig",
    "TrainResult",
    "train_lm",
    "LevenbergMarquardtRegressor",
    "DEFAULT_HIDDEN",
    "DEFAULT_CLIP_RADIUS",
]

DEFAULT_HIDDEN = 3
DEFAULT_CLIP_RADIUS = 1.2


# ---------------------------------------------------------------------------
# normalization


@dataclass(frozen=True)
class ScaleRanges:
    """Per-feature (min, max) pairs mapping raw values onto [-1, 1]."""

    mins: np.ndarray
    maxs: np.ndarray


def fit_ranges(X) -> ScaleRanges:
    """Column-wise min/max of the training data.

    Raises :class:`DegenerateRange` when a column is constant, since the
    affine map onto [-1, 1] is then undefined.
    """
    X = as_float_matrix(X, "X")
    mins = X.min(axis=0)
    maxs = X.max(axis=0)
    flat = np.flatnonzero(maxs == mins)
    if flat.size:
        raise DegenerateRange(f"column {int(flat[0])} is constant (min == max)")
    return ScaleRanges(mins=mins, maxs=maxs)


def normalize(X, ranges: ScaleRanges, clip_radius: float | None = None) -> np.ndarray:
    """Map raw values to x' = 2(x - min)/(max - min) - 1.

    With ``clip_radius`` set, scaled values are clipped to
    [-clip_radius, clip_radius] so inputs outside the training range
    cannot push the network arbitrarily far off its training manifold.
    """
    X = np.asarray(X, dtype=np.float64)
    scaled = 2.0 * (X - ranges.mins) / (ranges.maxs - ranges.mins) - 1.0
    if clip_radius is not None:
        scaled = np.clip(scaled, -clip_radius, clip_radius)
    return scaled


def denormalize(scaled, ranges: ScaleRanges) -> np.ndarray:
    scaled = np.asarray(scaled, dtype=np.float64)
    return (scaled + 1.0) / 2.0 * (ranges.maxs - ranges.mins) + ranges.mins


# ---------------------------------------------------------------------------
# packed-parameter network


def n_params(hidden: int, n_inputs: int) -> int:
    return hidden * n_inputs + 2 * hidden + 1


def pack_params(W1: np.ndarray, b1: np.ndarray, w2: np.ndarray, b2: float) -> np.ndarray:
    return np.concatenate([np.ravel(W1), np.ravel(b1), np.ravel(w2), [float(b2)]])


def unpack_params(params: np.ndarray, hidden: int, n_inputs: int):
    expected = n_params(hidden, n_inputs)
    params = as_float_vector(params, "params")
    if params.size != expected:
        raise DimensionMismatch(
            f"expected {expected} parameters for hidden={hidden}, n_inputs={n_inputs}, "
            f"got {params.size}"
        )
    hk = hidden * n_inputs
    W1 = params[:hk].reshape(hidden, n_inputs)
    b1 = params[hk:hk + hidden]
    w2 = params[hk + hidden:hk + 2 * hidden]
    b2 = float(params[-1])
    return W1, b1, w2, b2


def _activation(A: np.ndarray, kind: str):
    """Return (H, H') for the hidden activation at pre-activations ``A``."""
    if kind == "tanh":
        H = np.tanh(A)
        return H, 1.0 - H * H
    if kind == "identity":
        return A, np.ones_like(A)
    raise ValueError(f"unknown activation {kind!r}")


def forward(params, X, hidden: int = DEFAULT_HIDDEN, activation: str = "tanh") -> np.ndarray:
    """Network output for each row of (normalized) ``X``."""
    X = as_float_matrix(X, "X")
    W1, b1, w2, b2 = unpack_params(params, hidden, X.shape[1])
    H, _ = _activation(X @ W1.T + b1, activation)
    return H @ w2 + b2


def jacobian(params, X, hidden: int = DEFAULT_HIDDEN, activation: str = "tanh") -> np.ndarray:
    """(n_samples x n_params) matrix of d(residual)/d(param).

    The residual is r = y - f(x), so every column is the negated model
    derivative. Column order matches the packing order.
    """
    X = as_float_matrix(X, "X")
    n, k = X.shape
    W1, b1, w2, b2 = unpack_params(params, hidden, k)
    H, Hp = _activation(X @ W1.T + b1, activation)      # (n, h)
    G = Hp * w2                                          # (n, h): df/da_j

    J = np.empty((n, n_params(hidden, k)), dtype=np.float64)
    hk = hidden * k
    # df/dW1[j, m] = G[:, j] * x_m, laid out row-major over (j, m)
    J[:, :hk] = (G[:, :, None] * X[:, None, :]).reshape(n, hk)
    J[:, hk:hk + hidden] = G                             # df/db1
    J[:, hk + hidden:hk + 2 * hidden] = H                # df/dw2
    J[:, -1] = 1.0                                       # df/db2
    return -J


# ---------------------------------------------------------------------------
# Levenberg-Marquardt


@dataclass(frozen=True)
class LmConfig:
    """Damping schedule and stopping rules for the trainer."""

    lambda0: float = 1e-3
    lambda_up: float = 10.0
    lambda_down: float = 0.1
    lambda_max: float = 1e10
    max_iterations: int = 200
    min_relative_mse_improvement: float = 1e-9
    seed: int = 0

    def __post_init__(self):
        if self.lambda0 <= 0.0:
            raise ValueError(f"lambda0 must be positive, got {self.lambda0}")
        if self.lambda_up <= 1.0:
            raise ValueError(f"lambda_up must exceed 1, got {self.lambda_up}")
        if not 0.0 < self.lambda_down < 1.0:
            raise ValueError(f"lambda_down must lie in (0, 1), got {self.lambda_down}")
        if self.lambda_max < self.lambda0:
            raise ValueError("lambda_max must be >= lambda0")
        if self.max_iterations < 0:
            raise ValueError(f"max_iterations must be >= 0, got {self.max_iterations}")
        if self.min_relative_mse_improvement < 0.0:
            raise ValueError("min_relative_mse_improvement must be >= 0")


@dataclass(frozen=True)
class TrainResult:
    """Final packed parameters plus the accepted-step training trace."""

    params: np.ndarray
    mse_path: tuple[float, ...]     # initial MSE followed by each accepted step
    iterations: int                 # accepted steps
    stop_reason: str                # min_improvement | lambda_max | max_iterations

    @property
    def mse(self) -> float:
        return self.mse_path[-1]

    @property
    def converged(self) -> bool:
        return self.stop_reason == "min_improvement"


def _mse(params, X, y, hidden, activation) -> float:
    r = y - forward(params, X, hidden, activation)
    return float(np.mean(r * r))


def train_lm(
    X,
    y,
    cfg: LmConfig = LmConfig(),
    hidden: int = DEFAULT_HIDDEN,
    activation: str = "tanh",
    init: np.ndarray | None = None,
) -> TrainResult:
    """Fit the network to (X, y) by damped Gauss-Newton.

    Each outer iteration solves (J'J + lambda I) d = J'r and proposes
    p - d. A proposal is accepted only if it strictly lowers the MSE;
    acceptance relaxes the damping (lambda_down), rejection tightens it
    (lambda_up) and retries from the same point. Training stops when the
    relative MSE improvement of an accepted step falls below the
    threshold, when lambda overflows lambda_max, or at max_iterations.

    Weights start uniform on [-0.5, 0.5] from cfg.seed unless ``init``
    is given. Deterministic: same (data, cfg, init) -> same result.
    """
    X = as_float_matrix(X, "X")
    y = as_float_vector(y, "y")
    if y.size != X.shape[0]:
        raise DimensionMismatch(f"X has {X.shape[0]} rows but y has {y.size}")
    p = n_params(hidden, X.shape[1])
    if X.shape[0] < p:
        warnings.warn(
            f"{X.shape[0]} training rows for {p} parameters; fit may be underdetermined",
            stacklevel=2,
        )

    if init is None:
        rng = np.random.default_rng(seed_sequence(cfg.seed, "lm-init"))
        params = rng.uniform(-0.5, 0.5, size=p)
    else:
        params = as_float_vector(init, "init").copy()
        if params.size != p:
            raise DimensionMismatch(f"init has {params.size} entries, expected {p}")

    mse = _mse(params, X, y, hidden, activation)
    path = [mse]
    lam = cfg.lambda0
    accepted = 0
    stop_reason = "max_iterations"

    eye = np.eye(p)
    while accepted < cfg.max_iterations:
        r = y - forward(params, X, hidden, activation)
        J = jacobian(params, X, hidden, activation)
        JtJ = J.T @ J
        Jtr = J.T @ r

        # Inner damping loop: tighten lambda until a step is accepted or
        # the damping budget runs out.
        step_taken = False
        while True:
            try:
                delta = np.linalg.solve(JtJ + lam * eye, Jtr)
            except np.linalg.LinAlgError:
                if lam >= cfg.lambda_max:
                    raise SingularSystem(
                        f"damped normal equations unsolvable at lambda={lam:g}"
                    ) from None
                lam *= cfg.lambda_up
                continue
            candidate = params - delta
            cand_mse = _mse(candidate, X, y, hidden, activation)
            if cand_mse < mse:
                improvement = (mse - cand_mse) / mse if mse > 0.0 else np.inf
                params = candidate
                mse = cand_mse
                path.append(mse)
                accepted += 1
                lam = max(lam * cfg.lambda_down, 1e-15)
                step_taken = True
                if improvement < cfg.min_relative_mse_improvement:
                    stop_reason = "min_improvement"
                break
            lam *= cfg.lambda_up
            if lam > cfg.lambda_max:
                break

        if not step_taken:
            stop_reason = "lambda_max"
            break
        if stop_reason == "min_improvement":
            break

    return TrainResult(
        params=params,
        mse_path=tuple(path),
        iterations=accepted,
        stop_reason=stop_reason,
    )


# ---------------------------------------------------------------------------
# estimator


class LevenbergMarquardtRegressor(BaseEstimator, RegressorMixin):
    """Feedforward regressor (tanh hidden layer) trained by Levenberg-Marquardt.

    Inputs and target are affinely mapped onto [-1, 1] using ranges from
    the fitted data; at predict time, scaled inputs are clipped to
    ``clip_radius`` and outputs optionally clamped to [0, capacity].

    Parameters
    ----------
    hidden : int, default 3
        Hidden-layer width.
    activation : str, default "tanh"
        Hidden activation; "identity" turns the model linear (test mode).
    lambda0, lambda_up, lambda_down, lambda_max, max_iter, min_improvement :
        Damping schedule and stopping rules, see :class:`LmConfig`.
    clip_radius : float, default 1.2
        Bound on scaled inputs at predict time.
    capacity : float or None, default None
        If set, predictions are clamped to [0, capacity].
    seed : int, default 0
        Weight-initialization seed.
    """

    def __init__(
        self,
        hidden: int = DEFAULT_HIDDEN,
        activation: str = "tanh",
        lambda0: float = 1e-3,
        lambda_up: float = 10.0,
        lambda_down: float = 0.1,
        lambda_max: float = 1e10,
        max_iter: int = 200,
        min_improvement: float = 1e-9,
        clip_radius: float = DEFAULT_CLIP_RADIUS,
        capacity: float | None = None,
        seed: int = 0,
    ):
        self.hidden = hidden
        self.activation = activation
        self.lambda0 = lambda0
        self.lambda_up = lambda_up
        self.lambda_down = lambda_down
        self.lambda_max = lambda_max
        self.max_iter = max_iter
        self.min_improvement = min_improvement
        self.clip_radius = clip_radius
        self.capacity = capacity
        self.seed = seed

    def _lm_config(self) -> LmConfig:
        return LmConfig(
            lambda0=self.lambda0,
            lambda_up=self.lambda_up,
            lambda_down=self.lambda_down,
            lambda_max=self.lambda_max,
            max_iterations=self.max_iter,
            min_relative_mse_improvement=self.min_improvement,
            seed=self.seed,
        )

    def fit(self, X, y):
        X, y = check_X_y(X, y, y_numeric=True)
        X = np.asarray(X, dtype=np.float64)
        y = np.asarray(y, dtype=np.float64)
        self.input_ranges_ = fit_ranges(X)
        self.target_ranges_ = fit_ranges(y.reshape(-1, 1))

        Xs = normalize(X, self.input_ranges_)
        ys = normalize(y.reshape(-1, 1), self.target_ranges_)[:, 0]
        result = train_lm(
            Xs, ys, self._lm_config(), hidden=self.hidden, activation=self.activation
        )

        self.n_features_in_ = X.shape[1]
        self.params_ = result.params
        W1, b1, w2, b2 = unpack_params(result.params, self.hidden, X.shape[1])
        self.hidden_weights_ = W1
        self.hidden_bias_ = b1
        self.output_weights_ = w2
        self.output_bias_ = b2
        self.n_iter_ = result.iterations
        self.mse_path_ = result.mse_path
        self.stop_reason_ = result.stop_reason
        self.converged_ = result.converged
        self.training_mse_ = result.mse
        return self

    def predict(self, X) -> np.ndarray:
        check_is_fitted(self, "params_")
        X = check_array(X)
        X = np.asarray(X, dtype=np.float64)
        if X.shape[1] != self.n_features_in_:
            raise DimensionMismatch(
                f"model expects {self.n_features_in_} inputs, got {X.shape[1]}"
            )
        Xs = normalize(X, self.input_ranges_, clip_radius=self.clip_radius)
        ys = forward(self.params_, Xs, hidden=self.hidden, activation=self.activation)
        y = denormalize(ys.reshape(-1, 1), self.target_ranges_)[:, 0]
        if self.capacity is not None:
            y = np.clip(y, 0.0, self.capacity)
        return y


# ---------------------------------------------------------------------------
# persistence


def model_to_dict(
    est: LevenbergMarquardtRegressor,
    inputs: Sequence[str],
    training: dict | None = None,
) -> dict:
    """Flat, fixed-order document describing a fitted estimator.

    ``inputs`` are the feature labels in column order; ``training``
    carries run metadata (seed, restarts, validation error, row counts).
    """
    check_is_fitted(est, "params_")
    if len(inputs) != est.n_features_in_:
        raise DimensionMismatch(
            f"{len(inputs)} input labels for {est.n_features_in_} model inputs"
        )
    doc = {
        "schema_version": 1,
        "inputs": list(inputs),
        "hidden": est.hidden,
        "activation": est.activation,
        "input_min": est.input_ranges_.mins.tolist(),
        "input_max": est.input_ranges_.maxs.tolist(),
        "target_min": float(est.target_ranges_.mins[0]),
        "target_max": float(est.target_ranges_.maxs[0]),
        "hidden_weights": est.hidden_weights_.tolist(),
        "hidden_bias": est.hidden_bias_.tolist(),
        "output_weights": est.output_weights_.tolist(),
        "output_bias": est.output_bias_,
        "clip_radius": est.clip_radius,
        "capacity": est.capacity,
        "training": {
            "seed": est.seed,
            "iterations": est.n_iter_,
            "mse": est.training_mse_,
            "stop_reason": est.stop_reason_,
            **(training or {}),
        },
    }
    return doc


def model_from_dict(doc: dict) -> tuple[LevenbergMarquardtRegressor, list[str]]:
    """Rebuild a fitted estimator (and its input labels) from a model document."""
    est = LevenbergMarquardtRegressor(
        hidden=int(doc["hidden"]),
        activation=doc["activation"],
        clip_radius=float(doc["clip_radius"]),
        capacity=None if doc["capacity"] is None else float(doc["capacity"]),
        seed=int(doc["training"]["seed"]),
    )
    inputs = [str(s) for s in doc["inputs"]]
    W1 = np.asarray(doc["hidden_weights"], dtype=np.float64)
    b1 = np.asarray(doc["hidden_bias"], dtype=np.float64)
    w2 = np.asarray(doc["output_weights"], dtype=np.float64)
    b2 = float(doc["output_bias"])
    est.n_features_in_ = len(inputs)
    est.input_ranges_ = ScaleRanges(
        mins=np.asarray(doc["input_min"], dtype=np.float64),
        maxs=np.asarray(doc["input_max"], dtype=np.float64),
    )
    est.target_ranges_ = ScaleRanges(
        mins=np.array([doc["target_min"]], dtype=np.float64),
        maxs=np.array([doc["target_max"]], dtype=np.float64),
    )
    est.params_ = pack_params(W1, b1, w2, b2)
    est.hidden_weights_ = W1
    est.hidden_bias_ = b1
    est.output_weights_ = w2
    est.output_bias_ = b2
    est.n_iter_ = int(doc["training"]["iterations"])
    est.mse_path_ = (float(doc["training"]["mse"]),)
    est.stop_reason_ = str(doc["training"]["stop_reason"])
    est.converged_ = est.stop_reason_ == "min_improvement"
    est.training_mse_ = float(doc["training"]["mse"])
    return est, inputs

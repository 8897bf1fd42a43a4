"""Scikit-learn style regressor wrapping the tanh network.

DischargeRegressor is a generic small-data MLP regressor: any number of
input features, one output, full-batch heavy-ball momentum training, and
joint min-max scaling of features and target fitted on the training set.
The seasonal-discharge specifics (feature records, Rankine temperatures,
CSV plumbing) live in :mod:`snowflow.training`; this class only sees
numeric arrays.
"""

from __future__ import annotations

import numpy as np
from sklearn.base import BaseEstimator, RegressorMixin
from sklearn.utils.validation import check_array, check_is_fitted, check_X_y

from .errors import DataError
from .network import (
    TrainingHyperparams,
    batch_gradients,
    batch_loss,
    forward_batch,
    init_network,
    momentum_step,
    zero_gradients,
)
from .scaling import DEFAULT_RANGE, apply_scaler, column_slice, fit_scaler, invert_scaler

__all__ = ["DischargeRegressor", "MIN_TRAINING_RECORDS"]

# below this the scaler bounds and the fit itself are meaningless
MIN_TRAINING_RECORDS = 4


class DischargeRegressor(BaseEstimator, RegressorMixin):
    """Single-hidden-layer tanh network trained by batch gradient descent.

    Both layers apply tanh, so the target is scaled into ``feature_range``
    (a sub-interval of tanh's output range) before training and predictions
    are mapped back. One epoch is exactly one full-batch gradient plus one
    momentum update; training stops at ``target_mse`` (measured in scaled
    space) or after ``max_epochs``. Identical data, parameters and seed
    reproduce the fit bit for bit.

    Fitted attributes: ``network_``, ``scaler_`` (joint, features+target),
    ``feature_scaler_``, ``target_scaler_``, ``loss_history_``,
    ``n_epochs_``, ``n_features_in_``.
    """

    def __init__(
        self,
        hidden_nodes: int = 7,
        learning_rate: float = 0.05,
        momentum: float = 0.9,
        max_epochs: int = 20000,
        target_mse: float = 2.72e-4,
        seed: int = 0,
        feature_range: tuple[float, float] = DEFAULT_RANGE,
    ):
        self.hidden_nodes = hidden_nodes
        self.learning_rate = learning_rate
        self.momentum = momentum
        self.max_epochs = max_epochs
        self.target_mse = target_mse
        self.seed = seed
        self.feature_range = feature_range

    def _hyperparams(self) -> TrainingHyperparams:
        return TrainingHyperparams(
            learning_rate=self.learning_rate,
            momentum_coefficient=self.momentum,
            max_epochs=self.max_epochs,
            target_mse=self.target_mse,
            seed=self.seed,
        )

    def fit(self, X, y):
        X, y = check_X_y(X, y, y_numeric=True)
        if X.shape[0] < MIN_TRAINING_RECORDS:
            raise DataError(f"need at least {MIN_TRAINING_RECORDS} training records, got {X.shape[0]}")
        if int(self.hidden_nodes) < 1:
            raise ValueError(f"hidden_nodes must be at least 1, got {self.hidden_nodes}")
        hp = self._hyperparams()

        n_features = X.shape[1]
        table = np.column_stack([X, y])
        self.scaler_ = fit_scaler(table, tuple(self.feature_range))
        self.feature_scaler_ = column_slice(self.scaler_, 0, n_features)
        self.target_scaler_ = column_slice(self.scaler_, n_features, n_features + 1)
        Xs = apply_scaler(self.feature_scaler_, X)
        Ts = apply_scaler(self.target_scaler_, y[:, np.newaxis])

        net = init_network([n_features, int(self.hidden_nodes), 1], hp.seed)
        velocity = zero_gradients(net)
        history = []
        for _ in range(hp.max_epochs):
            grads = batch_gradients(net, Xs, Ts)
            net, velocity = momentum_step(net, grads, velocity, hp)
            history.append(batch_loss(net, Xs, Ts))
            if history[-1] <= hp.target_mse:
                break

        self.network_ = net
        self.loss_history_ = history
        self.n_epochs_ = len(history)
        self.n_features_in_ = n_features
        return self

    def predict(self, X):
        check_is_fitted(self, "network_")
        X = check_array(X)
        if X.shape[1] != self.n_features_in_:
            raise ValueError(
                f"X has {X.shape[1]} features, but this model was fitted with {self.n_features_in_}"
            )
        scaled = apply_scaler(self.feature_scaler_, X)
        out = forward_batch(self.network_, scaled)
        return invert_scaler(self.target_scaler_, out).ravel()

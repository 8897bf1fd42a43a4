"""Domain-level training pipeline: feature records in, fitted model out.

This module binds the generic estimator to the seasonal discharge problem:
the fixed input column order (SWE, cumulative precipitation, mean Rankine
temperature), physical-unit predictions, the reported metric triple, the
hidden-node sweep, and an optional leave-one-out cross-validation. Fit
quality is reported on the training set; the cross-validation helper exists
for honesty checks, not as part of the standard pipeline.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import DataError, DomainError
from .estimator import MIN_TRAINING_RECORDS, DischargeRegressor
from .ingest import FeatureRecord
from .metrics import Metrics, mse_metric, pearson_r, percent_error
from .network import Network, TrainingHyperparams, forward
from .scaling import Scaler, apply_scaler, column_slice, invert_scaler

__all__ = [
    "TrainedModel",
    "SweepRow",
    "FEATURE_COLUMNS",
    "features_to_arrays",
    "train",
    "predict",
    "sweep",
    "best_node_count",
    "loo_metrics",
]

FEATURE_COLUMNS = ("swe_may1", "precip_mjj", "temp_mjj_rankine")
N_FEATURES = len(FEATURE_COLUMNS)


@dataclass
class TrainedModel:
    """A fitted network plus everything needed to use and audit it.

    ``scaler`` covers all four columns (three features, then discharge);
    ``loss_history`` holds the scaled-space MSE after each epoch, and its
    final entry is exactly ``training_metrics.mse``.
    """

    network: Network
    scaler: Scaler
    hyperparams: TrainingHyperparams
    training_metrics: Metrics
    epoch_count: int
    loss_history: list[float]

    def __post_init__(self):
        if len(self.loss_history) != self.epoch_count:
            raise ValueError("loss_history length must equal epoch_count")
        if not self.loss_history or self.loss_history[-1] != self.training_metrics.mse:
            raise ValueError("final loss_history entry must equal training_metrics.mse")
        if self.scaler.n_columns != N_FEATURES + 1:
            raise ValueError(f"scaler must cover {N_FEATURES + 1} columns, got {self.scaler.n_columns}")


@dataclass(frozen=True)
class SweepRow:
    """Metrics for one hidden-layer width tried during the sweep."""

    node_count: int
    metrics: Metrics

    def __post_init__(self):
        if self.node_count < 1:
            raise ValueError(f"node_count must be at least 1, got {self.node_count}")


def features_to_arrays(features: list[FeatureRecord], require_target: bool = True):
    """Stack records into (X, y) with the fixed column order of FEATURE_COLUMNS.

    y is None when targets are not required; with require_target a record
    without a discharge value is an error (it cannot be trained on).
    """
    if require_target:
        missing = [r.year for r in features if r.discharge_mjj is None]
        if missing:
            raise DataError(f"records for year(s) {missing} have no discharge value")
    X = np.array([[r.swe_may1, r.precip_mjj, r.temp_mjj_rankine] for r in features], dtype=float)
    X = X.reshape(len(features), N_FEATURES)
    if not require_target:
        return X, None
    y = np.array([r.discharge_mjj for r in features], dtype=float)
    return X, y


def train(
    features: list[FeatureRecord],
    hidden_nodes: int,
    hp: TrainingHyperparams = TrainingHyperparams(),
) -> TrainedModel:
    """Fit scaler and network on complete records; metrics on the training set.

    Needs at least 4 records, all with a discharge value. Same records, same
    hidden_nodes, same hyperparameters give a bit-identical model.
    """
    if len(features) < MIN_TRAINING_RECORDS:
        raise DataError(f"need at least {MIN_TRAINING_RECORDS} training records, got {len(features)}")
    X, y = features_to_arrays(features)
    est = DischargeRegressor(
        hidden_nodes=hidden_nodes,
        learning_rate=hp.learning_rate,
        momentum=hp.momentum_coefficient,
        max_epochs=hp.max_epochs,
        target_mse=hp.target_mse,
        seed=hp.seed,
    ).fit(X, y)
    predicted = est.predict(X)
    metrics = Metrics(
        mse=est.loss_history_[-1],
        r=pearson_r(predicted, y),
        pct_error=percent_error(predicted, y),
    )
    return TrainedModel(
        network=est.network_,
        scaler=est.scaler_,
        hyperparams=hp,
        training_metrics=metrics,
        epoch_count=est.n_epochs_,
        loss_history=est.loss_history_,
    )


def predict(model, swe: float, precip: float, temp_rankine: float) -> float:
    """Discharge in CFS for one set of physical inputs.

    Works on anything carrying ``network`` and ``scaler`` attributes (a
    TrainedModel or a loaded model file). Temperature is absolute, so it
    must be positive.
    """
    values = np.array([swe, precip, temp_rankine], dtype=float)
    if not np.isfinite(values).all():
        raise ValueError(f"inputs must be finite, got {values.tolist()}")
    if temp_rankine <= 0:
        raise DomainError(f"temperature must be positive in degrees Rankine, got {temp_rankine}")
    feature_scaler = column_slice(model.scaler, 0, N_FEATURES)
    target_scaler = column_slice(model.scaler, N_FEATURES, N_FEATURES + 1)
    out = forward(model.network, apply_scaler(feature_scaler, values))
    return float(invert_scaler(target_scaler, out)[0])


def sweep(
    features: list[FeatureRecord],
    node_counts: list[int],
    hp: TrainingHyperparams = TrainingHyperparams(),
) -> list[SweepRow]:
    """Train once per hidden-node count, same data and seed, in given order.

    Runs are fully independent, so the metrics for a count do not depend on
    its position in node_counts. Use best_node_count to pick the winner.
    """
    if not node_counts:
        raise ValueError("node_counts must not be empty")
    return [
        SweepRow(int(n), train(features, int(n), hp).training_metrics)
        for n in node_counts
    ]


def best_node_count(rows: list[SweepRow]) -> int:
    """Node count of the row with the smallest MSE (first on ties)."""
    if not rows:
        raise ValueError("no sweep rows to choose from")
    return min(rows, key=lambda row: row.metrics.mse).node_count


def loo_metrics(
    features: list[FeatureRecord],
    hidden_nodes: int,
    hp: TrainingHyperparams = TrainingHyperparams(),
) -> Metrics:
    """Leave-one-out cross-validated metrics; trains one model per record.

    r and pct_error compare held-out predictions with actuals in physical
    units; mse averages each fold's squared error in that fold's scaled
    space. Slow by construction, and not used by the standard pipeline.
    """
    if len(features) < MIN_TRAINING_RECORDS + 1:
        raise DataError(f"leave-one-out needs at least {MIN_TRAINING_RECORDS + 1} records, got {len(features)}")
    features_to_arrays(features)  # fail fast on missing targets
    predictions, actuals, scaled_sq = [], [], []
    for i, held_out in enumerate(features):
        model = train(features[:i] + features[i + 1 :], hidden_nodes, hp)
        predicted = predict(model, held_out.swe_may1, held_out.precip_mjj, held_out.temp_mjj_rankine)
        predictions.append(predicted)
        actuals.append(held_out.discharge_mjj)
        target_scaler = column_slice(model.scaler, N_FEATURES, N_FEATURES + 1)
        scaled_sq.append(
            mse_metric(
                apply_scaler(target_scaler, [predicted]),
                apply_scaler(target_scaler, [held_out.discharge_mjj]),
            )
        )
    return Metrics(
        mse=float(np.mean(scaled_sq)),
        r=pearson_r(predictions, actuals),
        pct_error=percent_error(predictions, actuals),
    )

"""Domain pipeline: train/predict/sweep on feature records."""

import numpy as np
import pytest
from numpy.testing import assert_allclose

from snowflow import (
    DataError,
    DomainError,
    FeatureRecord,
    Network,
    Scaler,
    TrainedModel,
    TrainingHyperparams,
    apply_scaler,
    best_node_count,
    column_slice,
    features_to_arrays,
    forward_batch,
    loo_metrics,
    mse_metric,
    predict,
    sweep,
    train,
)

FAST = TrainingHyperparams(max_epochs=300)


def small_records(n=8, seed=5):
    rng = np.random.default_rng(seed)
    records = []
    for k in range(n):
        swe = rng.uniform(3.0, 20.0)
        precip = rng.uniform(3.0, 15.0)
        temp = rng.uniform(480.0, 540.0)
        records.append(FeatureRecord(1990 + k, swe, precip, temp, 30.0 * swe + precip))
    return records


def test_features_to_arrays_column_order():
    records = [FeatureRecord(2001, 1.0, 2.0, 500.0, 9.0)]
    X, y = features_to_arrays(records)
    assert X.shape == (1, 3)
    assert X[0].tolist() == [1.0, 2.0, 500.0]
    assert y.tolist() == [9.0]
    X_only, none = features_to_arrays(
        [FeatureRecord(2001, 1.0, 2.0, 500.0, None)], require_target=False
    )
    assert none is None and X_only.shape == (1, 3)


def test_train_rejects_too_few_or_incomplete_records():
    with pytest.raises(DataError, match="at least 4"):
        train(small_records(3), 3, FAST)
    records = small_records(6)
    records[2] = FeatureRecord(1992, 5.0, 5.0, 500.0, None)
    with pytest.raises(DataError, match="1992"):
        train(records, 3, FAST)


def test_train_fits_synthetic_corpus_well(synthetic_records):
    model = train(synthetic_records, 7)
    assert model.training_metrics.mse < 1e-3
    assert model.training_metrics.r > 0.99
    assert model.training_metrics.pct_error < 5.0
    assert model.epoch_count <= 20000


def test_trained_model_invariants(synthetic_model):
    model = synthetic_model
    assert len(model.loss_history) == model.epoch_count
    assert model.loss_history[-1] == model.training_metrics.mse
    assert model.loss_history[-1] <= model.loss_history[0]
    assert min(model.loss_history) >= 0.9 * model.loss_history[-1]


def test_reported_mse_matches_recomputation(synthetic_records, synthetic_model):
    # recompute the normalized-space MSE from scratch through public pieces
    model = synthetic_model
    X, y = features_to_arrays(synthetic_records)
    Xs = apply_scaler(column_slice(model.scaler, 0, 3), X)
    ys = apply_scaler(column_slice(model.scaler, 3, 4), y[:, np.newaxis])
    recomputed = mse_metric(forward_batch(model.network, Xs).ravel(), ys.ravel())
    assert abs(recomputed - model.training_metrics.mse) < 1e-12


def test_training_is_deterministic():
    records = small_records()
    a = train(records, 4, FAST)
    b = train(records, 4, FAST)
    assert a.loss_history == b.loss_history
    for Wa, Wb in zip(a.network.weights, b.network.weights):
        assert np.array_equal(Wa, Wb)


def test_predict_recovers_training_points(synthetic_records, synthetic_model):
    for rec in synthetic_records[:8]:
        got = predict(synthetic_model, rec.swe_may1, rec.precip_mjj, rec.temp_mjj_rankine)
        assert got == pytest.approx(rec.discharge_mjj, rel=0.05)


def test_predict_is_pure(synthetic_model):
    first = predict(synthetic_model, 10.0, 8.0, 505.0)
    second = predict(synthetic_model, 10.0, 8.0, 505.0)
    assert first == second


def test_predict_validates_inputs(synthetic_model):
    with pytest.raises(ValueError, match="finite"):
        predict(synthetic_model, float("nan"), 8.0, 505.0)
    with pytest.raises(DomainError, match="positive"):
        predict(synthetic_model, 10.0, 8.0, 0.0)
    with pytest.raises(DomainError):
        predict(synthetic_model, 10.0, 8.0, -500.0)


def zero_weight_model(records) -> TrainedModel:
    trained = train(records, 3, TrainingHyperparams(max_epochs=1))
    net = trained.network
    silent = Network(
        list(net.layer_sizes),
        [np.zeros_like(W) for W in net.weights],
        [np.zeros_like(b) for b in net.biases],
    )
    return TrainedModel(
        network=silent,
        scaler=trained.scaler,
        hyperparams=trained.hyperparams,
        training_metrics=trained.training_metrics,
        epoch_count=trained.epoch_count,
        loss_history=trained.loss_history,
    )


def test_all_zero_network_predicts_target_midpoint():
    # tanh(0) = 0 in scaled space inverts to the discharge column midpoint
    records = small_records()
    model = zero_weight_model(records)
    mins, maxs = model.scaler.column_mins, model.scaler.column_maxs
    midpoint = (mins[3] + maxs[3]) / 2.0
    for swe, precip, temp in ((1.0, 1.0, 500.0), (50.0, 0.0, 460.0)):
        assert predict(model, swe, precip, temp) == pytest.approx(midpoint, rel=1e-12)


def test_sweep_row_per_count_in_order(synthetic_records):
    rows = sweep(synthetic_records, [3, 4, 5], FAST)
    assert [r.node_count for r in rows] == [3, 4, 5]
    assert all(r.metrics.mse >= 0 for r in rows)


def test_sweep_single_count_equals_direct_train(synthetic_records):
    row = sweep(synthetic_records, [7], FAST)[0]
    direct = train(synthetic_records, 7, FAST)
    assert row.metrics == direct.training_metrics


def test_sweep_rows_do_not_depend_on_ordering(synthetic_records):
    forward_rows = {r.node_count: r.metrics for r in sweep(synthetic_records, [3, 5, 7], FAST)}
    reversed_rows = {r.node_count: r.metrics for r in sweep(synthetic_records, [7, 5, 3], FAST)}
    assert forward_rows == reversed_rows


def test_sweep_is_deterministic(synthetic_records):
    assert sweep(synthetic_records, [3, 4], FAST) == sweep(synthetic_records, [3, 4], FAST)


def test_sweep_rejects_empty_node_list(synthetic_records):
    with pytest.raises(ValueError):
        sweep(synthetic_records, [], FAST)


def test_best_node_count_picks_smallest_mse(synthetic_records):
    rows = sweep(synthetic_records, [2, 7], FAST)
    expected = min(rows, key=lambda r: r.metrics.mse).node_count
    assert best_node_count(rows) == expected
    with pytest.raises(ValueError):
        best_node_count([])


def test_trained_model_validates_consistency(synthetic_model):
    with pytest.raises(ValueError, match="loss_history"):
        TrainedModel(
            network=synthetic_model.network,
            scaler=synthetic_model.scaler,
            hyperparams=synthetic_model.hyperparams,
            training_metrics=synthetic_model.training_metrics,
            epoch_count=synthetic_model.epoch_count + 1,
            loss_history=synthetic_model.loss_history,
        )


def test_loo_metrics_smoke():
    records = small_records(6)
    metrics = loo_metrics(records, 3, TrainingHyperparams(max_epochs=150))
    assert metrics.mse >= 0.0
    assert -1.0 <= metrics.r <= 1.0
    assert metrics.pct_error >= 0.0
    with pytest.raises(DataError, match="at least"):
        loo_metrics(records[:4], 3, FAST)

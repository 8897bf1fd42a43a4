"""Model file format: exact round trips, versioning, validation."""

import json

import numpy as np
import pytest

from snowflow import (
    FeatureRecord,
    ParseError,
    TrainingHyperparams,
    from_trained,
    load_model,
    predict,
    save_model,
    train,
)


@pytest.fixture(scope="module")
def quick_model():
    records = [
        FeatureRecord(2000 + k, float(2 + 2 * k), float(3 + k), 490.0 + 4.0 * k, 80.0 * (k + 1))
        for k in range(6)
    ]
    return train(records, 4, TrainingHyperparams(max_epochs=500))


def test_save_load_round_trip_is_bit_exact(quick_model, tmp_path):
    path = tmp_path / "model.json"
    save_model(from_trained(quick_model, "unit test model"), path)
    loaded = load_model(path)
    assert loaded.format_version == 1
    assert loaded.network.layer_sizes == quick_model.network.layer_sizes
    for Wa, Wb in zip(loaded.network.weights, quick_model.network.weights):
        assert np.array_equal(Wa, Wb)
    for ba, bb in zip(loaded.network.biases, quick_model.network.biases):
        assert np.array_equal(ba, bb)
    assert np.array_equal(loaded.scaler.column_mins, quick_model.scaler.column_mins)
    assert np.array_equal(loaded.scaler.column_maxs, quick_model.scaler.column_maxs)
    assert loaded.scaler.feature_range == quick_model.scaler.feature_range
    assert loaded.hyperparams == quick_model.hyperparams
    assert loaded.metrics == quick_model.training_metrics
    assert loaded.provenance == "unit test model"


def test_save_load_save_is_byte_identical(quick_model, tmp_path):
    first = tmp_path / "a.json"
    second = tmp_path / "b.json"
    save_model(from_trained(quick_model, "determinism probe"), first)
    save_model(load_model(first), second)
    assert first.read_bytes() == second.read_bytes()


def test_loaded_model_predicts_identically(quick_model, tmp_path):
    path = tmp_path / "model.json"
    save_model(from_trained(quick_model, "prediction parity"), path)
    loaded = load_model(path)
    for point in ((4.0, 5.0, 500.0), (12.0, 8.0, 510.0)):
        assert predict(loaded, *point) == predict(quick_model, *point)


def test_model_file_is_human_readable_json(quick_model, tmp_path):
    path = tmp_path / "model.json"
    save_model(from_trained(quick_model, "inspection"), path)
    doc = json.loads(path.read_text())
    assert list(doc) == ["format_version", "network", "scaler", "hyperparams", "metrics", "provenance"]
    assert doc["network"]["activation"] == "tanh"
    # row-major weights: first matrix has hidden_nodes rows of 3 entries
    assert len(doc["network"]["weights"][0]) == 4
    assert len(doc["network"]["weights"][0][0]) == 3


def test_unsupported_version_rejected(quick_model, tmp_path):
    path = tmp_path / "model.json"
    save_model(from_trained(quick_model, "x"), path)
    doc = json.loads(path.read_text())
    doc["format_version"] = 99
    path.write_text(json.dumps(doc))
    with pytest.raises(ParseError, match="format_version"):
        load_model(path)


def test_malformed_documents_rejected(quick_model, tmp_path):
    path = tmp_path / "model.json"
    path.write_text("not json at all {")
    with pytest.raises(ParseError, match="JSON"):
        load_model(path)

    save_model(from_trained(quick_model, "x"), path)
    doc = json.loads(path.read_text())
    del doc["scaler"]
    path.write_text(json.dumps(doc))
    with pytest.raises(ParseError, match="malformed"):
        load_model(path)

    save_model(from_trained(quick_model, "x"), path)
    doc = json.loads(path.read_text())
    doc["network"]["weights"][0][0][0] = None
    path.write_text(json.dumps(doc))
    with pytest.raises(ParseError):
        load_model(path)


def test_tampered_values_fail_dataclass_validation(quick_model, tmp_path):
    path = tmp_path / "model.json"
    save_model(from_trained(quick_model, "x"), path)
    doc = json.loads(path.read_text())
    doc["hyperparams"]["momentum_coefficient"] = 1.7
    path.write_text(json.dumps(doc))
    with pytest.raises(ParseError, match="malformed"):
        load_model(path)

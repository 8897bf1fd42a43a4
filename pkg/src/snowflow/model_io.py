"""Versioned on-disk model format.

A saved model is a small JSON document holding the network, the scaler, the
hyperparameters, the training metrics and a free-text provenance note.
Floats are serialized with their shortest round-tripping decimal form, keys
are written in a fixed order, and nothing time- or machine-dependent is
recorded, so saving the same model twice gives byte-identical files and
save -> load -> save is a fixed point.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .errors import ParseError
from .metrics import Metrics
from .network import Network, TrainingHyperparams
from .scaling import Scaler
from .training import TrainedModel

__all__ = ["FORMAT_VERSION", "ModelFile", "from_trained", "save_model", "load_model"]

FORMAT_VERSION = 1


@dataclass
class ModelFile:
    """Everything a saved model carries; duck-compatible with TrainedModel
    wherever only ``network`` and ``scaler`` are needed (e.g. predict)."""

    format_version: int
    network: Network
    scaler: Scaler
    hyperparams: TrainingHyperparams
    metrics: Metrics
    provenance: str


def from_trained(model: TrainedModel, provenance: str) -> ModelFile:
    """Wrap a training result for saving; provenance should say what data
    built the model (source path, record count, year span), nothing more."""
    return ModelFile(
        format_version=FORMAT_VERSION,
        network=model.network,
        scaler=model.scaler,
        hyperparams=model.hyperparams,
        metrics=model.training_metrics,
        provenance=provenance,
    )


def _to_document(mf: ModelFile) -> dict:
    # fixed construction order = fixed key order in the file
    return {
        "format_version": mf.format_version,
        "network": {
            "layer_sizes": [int(s) for s in mf.network.layer_sizes],
            "activation": mf.network.activation,
            "weights": [W.tolist() for W in mf.network.weights],
            "biases": [b.tolist() for b in mf.network.biases],
        },
        "scaler": {
            "column_mins": mf.scaler.column_mins.tolist(),
            "column_maxs": mf.scaler.column_maxs.tolist(),
            "feature_range": list(mf.scaler.feature_range),
        },
        "hyperparams": {
            "learning_rate": mf.hyperparams.learning_rate,
            "momentum_coefficient": mf.hyperparams.momentum_coefficient,
            "max_epochs": mf.hyperparams.max_epochs,
            "target_mse": mf.hyperparams.target_mse,
            "seed": mf.hyperparams.seed,
        },
        "metrics": {
            "mse": mf.metrics.mse,
            "r": mf.metrics.r,
            "pct_error": mf.metrics.pct_error,
        },
        "provenance": mf.provenance,
    }


def save_model(mf: ModelFile, path) -> None:
    """Write the model document; byte-deterministic for identical models."""
    text = json.dumps(_to_document(mf), indent=2, ensure_ascii=False)
    Path(path).write_text(text + "\n", encoding="utf-8", newline="\n")


def load_model(path) -> ModelFile:
    """Read and validate a model document written by save_model.

    JSON numbers parse back to the exact float that was saved, so the loaded
    network is bit-identical to the one written.
    """
    path = Path(path)
    try:
        doc = json.loads(path.read_text(encoding="utf-8"))
    except json.JSONDecodeError as exc:
        raise ParseError(f"{path}: not valid JSON: {exc}") from None
    try:
        version = doc["format_version"]
        if version != FORMAT_VERSION:
            raise ParseError(f"{path}: unsupported format_version {version!r}, expected {FORMAT_VERSION}")
        net_doc = doc["network"]
        network = Network(
            layer_sizes=[int(s) for s in net_doc["layer_sizes"]],
            weights=[np.asarray(W, dtype=float) for W in net_doc["weights"]],
            biases=[np.asarray(b, dtype=float) for b in net_doc["biases"]],
            activation=net_doc["activation"],
        )
        scaler_doc = doc["scaler"]
        scaler = Scaler(
            column_mins=np.asarray(scaler_doc["column_mins"], dtype=float),
            column_maxs=np.asarray(scaler_doc["column_maxs"], dtype=float),
            feature_range=tuple(scaler_doc["feature_range"]),
        )
        hp_doc = doc["hyperparams"]
        hyperparams = TrainingHyperparams(
            learning_rate=hp_doc["learning_rate"],
            momentum_coefficient=hp_doc["momentum_coefficient"],
            max_epochs=hp_doc["max_epochs"],
            target_mse=hp_doc["target_mse"],
            seed=hp_doc["seed"],
        )
        metrics_doc = doc["metrics"]
        metrics = Metrics(
            mse=metrics_doc["mse"],
            r=metrics_doc["r"],
            pct_error=metrics_doc["pct_error"],
        )
        provenance = doc["provenance"]
        if not isinstance(provenance, str):
            raise ParseError(f"{path}: provenance must be text")
    except ParseError:
        raise
    except (KeyError, TypeError, ValueError) as exc:
        raise ParseError(f"{path}: malformed model document: {exc}") from None
    return ModelFile(version, network, scaler, hyperparams, metrics, provenance)

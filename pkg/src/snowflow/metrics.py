"""Fit-quality metrics for the discharge model.

Convention used throughout the package: MSE is reported in the scaled space
the network is trained in (so it is comparable across datasets), while the
correlation coefficient and the percentage error are computed on physical
discharge values, where they are meaningful to a reader.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import DomainError

__all__ = ["Metrics", "mse_metric", "pearson_r", "percent_error"]


@dataclass(frozen=True)
class Metrics:
    """MSE (scaled space), Pearson r and mean absolute percentage error."""

    mse: float
    r: float
    pct_error: float

    def __post_init__(self):
        if not (math.isfinite(self.mse) and self.mse >= 0):
            raise ValueError(f"mse must be a non-negative real, got {self.mse}")
        if not -1.0 <= self.r <= 1.0:
            raise ValueError(f"r must lie in [-1, 1], got {self.r}")
        if not (math.isfinite(self.pct_error) and self.pct_error >= 0):
            raise ValueError(f"pct_error must be a non-negative real, got {self.pct_error}")


def _paired(pred, actual, min_len: int = 1) -> tuple[np.ndarray, np.ndarray]:
    p = np.asarray(pred, dtype=float).ravel()
    a = np.asarray(actual, dtype=float).ravel()
    if p.shape != a.shape:
        raise ValueError(f"length mismatch: {p.shape[0]} predictions vs {a.shape[0]} actuals")
    if p.shape[0] < min_len:
        raise ValueError(f"need at least {min_len} value pairs, got {p.shape[0]}")
    if not (np.isfinite(p).all() and np.isfinite(a).all()):
        raise ValueError("metric inputs contain non-finite values")
    return p, a


def mse_metric(pred, actual) -> float:
    """Mean squared difference between two equal-length sequences."""
    p, a = _paired(pred, actual)
    return float(np.mean((p - a) ** 2))


def pearson_r(pred, actual) -> float:
    """Sample Pearson correlation, clamped into [-1, 1] against roundoff.

    Undefined when either sequence is constant; that raises DomainError
    rather than returning a NaN that would poison downstream tables.
    """
    p, a = _paired(pred, actual, min_len=2)
    pc = p - p.mean()
    ac = a - a.mean()
    spp = float(pc @ pc)
    saa = float(ac @ ac)
    if spp == 0.0 or saa == 0.0:
        raise DomainError("correlation is undefined for a constant sequence")
    r = float(pc @ ac) / math.sqrt(spp * saa)
    return min(1.0, max(-1.0, r))


def percent_error(pred, actual) -> float:
    """Mean absolute percentage error, (100/N) * sum |pred - actual| / |actual|."""
    p, a = _paired(pred, actual)
    if np.any(a == 0.0):
        raise DomainError("percentage error is undefined when an actual value is zero")
    return float(100.0 * np.mean(np.abs(p - a) / np.abs(a)))

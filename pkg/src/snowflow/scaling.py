"""Column-wise min-max scaling onto a symmetric sub-range of (-1, 1).

The network squashes its output through tanh, so targets have to live
strictly inside (-1, 1); mapping every column onto [-0.9, 0.9] leaves
headroom for predictions slightly beyond the training extremes. The map is
affine and is never clamped: values outside the fitted min/max extrapolate
linearly, and :func:`invert_scaler` is the exact algebraic inverse.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from sklearn.base import BaseEstimator, TransformerMixin
from sklearn.utils.validation import check_array, check_is_fitted

from .errors import DataError

__all__ = ["Scaler", "fit_scaler", "apply_scaler", "invert_scaler", "column_slice", "RangeScaler"]

DEFAULT_RANGE = (-0.9, 0.9)


@dataclass(frozen=True)
class Scaler:
    """Fitted per-column bounds plus the shared output range."""

    column_mins: np.ndarray
    column_maxs: np.ndarray
    feature_range: tuple[float, float] = DEFAULT_RANGE

    def __post_init__(self):
        lo, hi = self.feature_range
        if not (-1.0 < lo < hi < 1.0):
            raise ValueError(f"feature_range must satisfy -1 < lo < hi < 1, got {self.feature_range}")
        if self.column_mins.shape != self.column_maxs.shape or self.column_mins.ndim != 1:
            raise ValueError("column_mins and column_maxs must be 1-d and congruent")
        if not (np.isfinite(self.column_mins).all() and np.isfinite(self.column_maxs).all()):
            raise ValueError("scaler bounds must be finite")

    @property
    def n_columns(self) -> int:
        return self.column_mins.shape[0]


def fit_scaler(table, feature_range: tuple[float, float] = DEFAULT_RANGE) -> Scaler:
    """Record per-column min/max of a 2-d table.

    A column with zero spread cannot be mapped onto an interval, so a
    constant column raises DataError rather than silently dividing by zero.
    """
    X = np.asarray(table, dtype=float)
    if X.ndim != 2 or X.shape[0] < 1 or X.shape[1] < 1:
        raise ValueError(f"expected a non-empty 2-d table, got shape {X.shape}")
    if not np.isfinite(X).all():
        raise ValueError("table contains non-finite values")
    mins = X.min(axis=0)
    maxs = X.max(axis=0)
    constant = np.flatnonzero(maxs == mins)
    if constant.size:
        raise DataError(f"column(s) {constant.tolist()} are constant and cannot be range-scaled")
    return Scaler(mins, maxs, feature_range)


def _check_table(scaler: Scaler, values, name: str) -> tuple[np.ndarray, bool]:
    X = np.asarray(values, dtype=float)
    squeeze = X.ndim == 1
    X = np.atleast_2d(X)
    if X.ndim != 2 or X.shape[1] != scaler.n_columns:
        raise ValueError(f"{name} must have {scaler.n_columns} columns, got shape {np.asarray(values).shape}")
    if not np.isfinite(X).all():
        raise ValueError(f"{name} contain non-finite values")
    return X, squeeze


def apply_scaler(scaler: Scaler, values) -> np.ndarray:
    """Map physical values onto the scaled range, extrapolating past the bounds."""
    X, squeeze = _check_table(scaler, values, "values")
    lo, hi = scaler.feature_range
    span = scaler.column_maxs - scaler.column_mins
    out = lo + (X - scaler.column_mins) * (hi - lo) / span
    return out[0] if squeeze else out


def invert_scaler(scaler: Scaler, values) -> np.ndarray:
    """Exact inverse of :func:`apply_scaler` on the same scaler."""
    X, squeeze = _check_table(scaler, values, "values")
    lo, hi = scaler.feature_range
    span = scaler.column_maxs - scaler.column_mins
    out = scaler.column_mins + (X - lo) * span / (hi - lo)
    return out[0] if squeeze else out


def column_slice(scaler: Scaler, start: int, stop: int) -> Scaler:
    """Sub-scaler over columns [start, stop), e.g. features without the target."""
    if not 0 <= start < stop <= scaler.n_columns:
        raise ValueError(f"invalid column slice [{start}, {stop}) for {scaler.n_columns} columns")
    return Scaler(
        scaler.column_mins[start:stop].copy(),
        scaler.column_maxs[start:stop].copy(),
        scaler.feature_range,
    )


class RangeScaler(BaseEstimator, TransformerMixin):
    """Estimator-style wrapper around the functional scaler.

    Unlike the usual min-max transformer this refuses constant columns and
    never clips, so ``inverse_transform(transform(X))`` recovers X exactly
    even outside the fitted bounds.
    """

    def __init__(self, feature_range: tuple[float, float] = DEFAULT_RANGE):
        self.feature_range = feature_range

    def fit(self, X, y=None):
        X = check_array(X, ensure_min_samples=1)
        self.scaler_ = fit_scaler(X, tuple(self.feature_range))
        self.n_features_in_ = X.shape[1]
        self.data_min_ = self.scaler_.column_mins
        self.data_max_ = self.scaler_.column_maxs
        return self

    def transform(self, X):
        check_is_fitted(self, "scaler_")
        X = check_array(X)
        if X.shape[1] != self.n_features_in_:
            raise ValueError(f"X has {X.shape[1]} features, but RangeScaler was fitted with {self.n_features_in_}")
        return apply_scaler(self.scaler_, X)

    def inverse_transform(self, X):
        check_is_fitted(self, "scaler_")
        X = check_array(X)
        if X.shape[1] != self.n_features_in_:
            raise ValueError(f"X has {X.shape[1]} features, but RangeScaler was fitted with {self.n_features_in_}")
        return invert_scaler(self.scaler_, X)

"""What-if scans over a trained model.

One input is varied while the other two stay at a base point: snowpack and
precipitation by multipliers, temperature by additive degree-F offsets
(multiplying an absolute temperature would be meaningless). Results are
reported as ratios to the base-point prediction in physical units, plus the
equivalent percent change.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum

from .errors import DomainError
from .training import predict

__all__ = ["VariedInput", "ScanSpec", "ScanRow", "SensitivityTable", "run_scan", "rank_input_influence"]

# varied value beyond this multiple of the training max is an extrapolation
EXTRAPOLATION_FACTOR = 1.5


class VariedInput(Enum):
    SNOWPACK = "snowpack"
    PRECIPITATION = "precipitation"
    TEMPERATURE = "temperature"

    @property
    def label(self) -> str:
        return self.value.capitalize()

    @property
    def column(self) -> int:
        """Feature-column index in the model's scaler (discharge is column 3)."""
        return (VariedInput.SNOWPACK, VariedInput.PRECIPITATION, VariedInput.TEMPERATURE).index(self)


@dataclass(frozen=True)
class ScanSpec:
    """Which input to vary, the base point, and the change schedule.

    Multiplier scans apply to snowpack and precipitation; temperature scans
    use ``offsets_f`` instead (same degree size in Rankine, so the offset is
    added to the base Rankine temperature unchanged).
    """

    varied_input: VariedInput
    base_swe: float
    base_precip: float
    base_temp_rankine: float
    multipliers: tuple[float, ...] = ()
    offsets_f: tuple[float, ...] = ()

    def __post_init__(self):
        base = (self.base_swe, self.base_precip, self.base_temp_rankine)
        if not all(math.isfinite(v) for v in base):
            raise ValueError(f"base point must be finite, got {base}")
        if self.base_swe < 0 or self.base_precip < 0:
            raise ValueError("base swe and precip must be non-negative")
        if self.base_temp_rankine <= 0:
            raise ValueError(f"base temperature must be positive Rankine, got {self.base_temp_rankine}")
        if self.varied_input is VariedInput.TEMPERATURE:
            if self.multipliers or not self.offsets_f:
                raise ValueError("temperature scans take offsets_f, not multipliers")
            bad = [d for d in self.offsets_f if not math.isfinite(d)]
        else:
            if self.offsets_f or not self.multipliers:
                raise ValueError(f"{self.varied_input.value} scans take multipliers, not offsets_f")
            bad = [m for m in self.multipliers if not (math.isfinite(m) and m > 0)]
        if bad:
            raise ValueError(f"invalid change values {bad}")

    @property
    def changes(self) -> tuple[float, ...]:
        return self.offsets_f if self.varied_input is VariedInput.TEMPERATURE else self.multipliers


@dataclass(frozen=True)
class ScanRow:
    """One scan point: the change applied and the resulting discharge."""

    change: float
    discharge_cfs: float
    discharge_ratio: float
    discharge_pct_change: float
    extrapolated: bool


@dataclass(frozen=True)
class SensitivityTable:
    spec: ScanSpec
    base_discharge: float
    rows: tuple[ScanRow, ...]


def _base_prediction(model, swe, precip, temp_rankine) -> float:
    base = predict(model, swe, precip, temp_rankine)
    if not math.isfinite(base) or base <= 0:
        raise DomainError(
            f"base prediction {base} CFS is not a positive finite value; "
            "ratios are undefined at this base point"
        )
    return base


def run_scan(model, spec: ScanSpec) -> SensitivityTable:
    """Predict along the scan schedule and report ratios to the base prediction.

    A multiplier of 1 (or offset of 0) leaves the inputs bit-identical, so
    its ratio is exactly 1.0. The percent change column is derived from the
    ratio (100 * (ratio - 1)), never recomputed separately. A row is marked
    extrapolated when the varied value exceeds 1.5x that input's training
    maximum (taken from the model's scaler).
    """
    base = _base_prediction(model, spec.base_swe, spec.base_precip, spec.base_temp_rankine)
    training_max = model.scaler.column_maxs[spec.varied_input.column]

    rows = []
    for change in spec.changes:
        point = [spec.base_swe, spec.base_precip, spec.base_temp_rankine]
        if spec.varied_input is VariedInput.TEMPERATURE:
            point[2] = spec.base_temp_rankine + change
        else:
            point[spec.varied_input.column] *= change
        varied_value = point[spec.varied_input.column]
        discharge = predict(model, *point)
        ratio = discharge / base
        rows.append(
            ScanRow(
                change=change,
                discharge_cfs=discharge,
                discharge_ratio=ratio,
                discharge_pct_change=100.0 * (ratio - 1.0),
                extrapolated=bool(varied_value > EXTRAPOLATION_FACTOR * training_max),
            )
        )
    return SensitivityTable(spec=spec, base_discharge=base, rows=tuple(rows))


def rank_input_influence(
    model,
    base_swe: float,
    base_precip: float,
    base_temp_rankine: float,
    relative_perturbation: float,
) -> list[tuple[VariedInput, float]]:
    """Rank the three inputs by |percent change| under one relative bump.

    Each input in turn is scaled by (1 + relative_perturbation) with the
    other two fixed; inputs come back sorted by descending influence. The
    sort is stable, so exact ties keep the snowpack, precipitation,
    temperature order.
    """
    if not 0.0 < relative_perturbation <= 0.5:
        raise ValueError(f"relative_perturbation must lie in (0, 0.5], got {relative_perturbation}")
    base_point = (base_swe, base_precip, base_temp_rankine)
    base = _base_prediction(model, *base_point)

    influences = []
    for varied in VariedInput:
        point = list(base_point)
        point[varied.column] *= 1.0 + relative_perturbation
        ratio = predict(model, *point) / base
        influences.append((varied, abs(100.0 * (ratio - 1.0))))
    return sorted(influences, key=lambda pair: -pair[1])

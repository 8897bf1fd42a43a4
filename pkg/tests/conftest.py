"""Shared fixtures: the synthetic training corpus and daily CSV builders.

The synthetic generator is a smooth monotone map with a known dominance
order (snowpack strongest, temperature negative):

    Q = 40 * swe + 2 * precip - 0.5 * (temp_r - 505)

sampled on swe in [2, 22] in, precip in [2, 18] in, temp in [460, 560] R,
31 records, seed 2009. Several tests assert against the generator's known
partial-derivative signs, so do not change it without revisiting them.
"""

from __future__ import annotations

from datetime import date, timedelta

import numpy as np
import pytest

from snowflow import FeatureRecord, train

SYNTHETIC_SEED = 2009
SYNTHETIC_YEARS = range(1979, 2010)  # 31 records


def true_discharge(swe: float, precip: float, temp_r: float) -> float:
    return 40.0 * swe + 2.0 * precip - 0.5 * (temp_r - 505.0)


def make_synthetic_records() -> list[FeatureRecord]:
    rng = np.random.default_rng(SYNTHETIC_SEED)
    records = []
    for year in SYNTHETIC_YEARS:
        swe = rng.uniform(2.0, 22.0)
        precip = rng.uniform(2.0, 18.0)
        temp_r = rng.uniform(460.0, 560.0)
        records.append(FeatureRecord(year, swe, precip, temp_r, true_discharge(swe, precip, temp_r)))
    return records


@pytest.fixture(scope="session")
def synthetic_records() -> list[FeatureRecord]:
    return make_synthetic_records()


@pytest.fixture(scope="session")
def synthetic_model(synthetic_records):
    """Default-hyperparameter fit, shared because training takes a moment."""
    return train(synthetic_records, 7)


def write_daily_year(climate_rows, flow_rows, year: int, swe: float, precip_total: float,
                     temp_f: float, discharge: float, days: int = 92) -> None:
    """Append one year of constant-rate daily rows covering `days` days.

    With the full 92-day window the derived features are (swe, ~precip_total,
    temp_f converted, ~discharge); a smaller `days` creates a coverage gap.
    """
    daily_precip = precip_total / 92.0
    start = date(year, 5, 1)
    for offset in range(days):
        d = (start + timedelta(days=offset)).isoformat()
        swe_today = swe if offset == 0 else max(0.0, swe - 0.05 * offset)
        climate_rows.append(f"{d},{swe_today!r},{daily_precip!r},{temp_f!r}")
        flow_rows.append(f"{d},{discharge!r}")


def write_daily_corpus(dir_path, records: list[FeatureRecord], gap_year: int | None = None):
    """Write climate.csv and discharge.csv whose reduction reproduces `records`.

    Optionally appends one extra year with only 20 covered days, which the
    ingest step must exclude. Returns the two paths.
    """
    climate = ["date,swe_in,precip_in,temp_f"]
    flow = ["date,discharge_cfs"]
    for rec in records:
        write_daily_year(
            climate, flow, rec.year, rec.swe_may1, rec.precip_mjj,
            rec.temp_mjj_rankine - 459.67, rec.discharge_mjj,
        )
    if gap_year is not None:
        write_daily_year(climate, flow, gap_year, 9.0, 9.2, 45.0, 350.0, days=20)
    climate_path = dir_path / "climate.csv"
    flow_path = dir_path / "discharge.csv"
    climate_path.write_text("\n".join(climate) + "\n", encoding="utf-8")
    flow_path.write_text("\n".join(flow) + "\n", encoding="utf-8")
    return climate_path, flow_path


def golden_daily_inputs():
    """Three hand-checkable years as (climate_rows, discharge_rows).

    2001: swe 10.0, precip 0.25/day (sums to exactly 23.0 in binary floats),
          temp 45.0 F every day (mean exactly 45.0 -> 504.67 R), flow 100.0.
    2002: swe 14.5, precip 0.125/day -> 11.5, temp 50.0 -> 509.67, flow 250.0.
    2003: only 60 days covered -> excluded for coverage.
    """
    climate = ["date,swe_in,precip_in,temp_f"]
    flow = ["date,discharge_cfs"]
    for year, swe, daily_precip, temp_f, q, days in (
        (2001, 10.0, 0.25, 45.0, 100.0, 92),
        (2002, 14.5, 0.125, 50.0, 250.0, 92),
        (2003, 8.0, 0.25, 47.0, 180.0, 60),
    ):
        start = date(year, 5, 1)
        for offset in range(days):
            d = (start + timedelta(days=offset)).isoformat()
            climate.append(f"{d},{swe!r},{daily_precip!r},{temp_f!r}")
            flow.append(f"{d},{q!r}")
    return climate, flow


@pytest.fixture()
def golden_csv_paths(tmp_path):
    climate, flow = golden_daily_inputs()
    climate_path = tmp_path / "climate.csv"
    flow_path = tmp_path / "discharge.csv"
    climate_path.write_text("\n".join(climate) + "\n", encoding="utf-8")
    flow_path.write_text("\n".join(flow) + "\n", encoding="utf-8")
    return climate_path, flow_path

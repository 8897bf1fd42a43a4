"""CSV ingestion and the seasonal feature table.

Two daily input layouts are defined here (and nowhere else):

* climate:   header ``date,swe_in,precip_in,temp_f``
* discharge: header ``date,discharge_cfs``

with ISO-8601 dates and decimal-point numbers, one row per day. Daily rows
are reduced to one record per calendar year over the May 1 to July 31
window: snow water equivalent on May 1, cumulative precipitation, mean
temperature (converted to degrees Rankine), and mean discharge. The derived
table round-trips through its own CSV layout, header
``year,swe_may1_in,precip_mjj_in,temp_mjj_r,discharge_mjj_cfs``.
"""

from __future__ import annotations

import csv
import io
import logging
import math
from dataclasses import dataclass
from datetime import date

from .errors import ParseError

__all__ = [
    "ClimateDaily",
    "DischargeDaily",
    "FeatureRecord",
    "YearExclusion",
    "parse_climate_csv",
    "parse_discharge_csv",
    "parse_feature_csv",
    "write_feature_csv",
    "fahrenheit_to_rankine",
    "build_feature_table",
]

logger = logging.getLogger(__name__)

CLIMATE_HEADER = ["date", "swe_in", "precip_in", "temp_f"]
DISCHARGE_HEADER = ["date", "discharge_cfs"]
FEATURE_HEADER = ["year", "swe_may1_in", "precip_mjj_in", "temp_mjj_r", "discharge_mjj_cfs"]

WINDOW_DAYS = 92  # May 1 through July 31 inclusive, every year
MIN_COVERAGE = 0.95


@dataclass(frozen=True)
class ClimateDaily:
    """One day of station data: SWE and precipitation in inches, temp in F."""

    date: date
    swe: float
    precip: float
    temp_mean: float

    def __post_init__(self):
        if not (math.isfinite(self.swe) and self.swe >= 0):
            raise ValueError(f"swe must be a non-negative real, got {self.swe}")
        if not (math.isfinite(self.precip) and self.precip >= 0):
            raise ValueError(f"precip must be a non-negative real, got {self.precip}")
        if not math.isfinite(self.temp_mean):
            raise ValueError(f"temp_mean must be finite, got {self.temp_mean}")


@dataclass(frozen=True)
class DischargeDaily:
    """One day of river discharge in cubic feet per second."""

    date: date
    discharge: float

    def __post_init__(self):
        if not (math.isfinite(self.discharge) and self.discharge >= 0):
            raise ValueError(f"discharge must be a non-negative real, got {self.discharge}")


@dataclass(frozen=True)
class FeatureRecord:
    """One year's model inputs, plus the seasonal discharge when known.

    ``discharge_mjj`` is None for prediction-only records (inputs observed,
    target not yet known or too sparse to trust).
    """

    year: int
    swe_may1: float
    precip_mjj: float
    temp_mjj_rankine: float
    discharge_mjj: float | None = None

    def __post_init__(self):
        if not (math.isfinite(self.swe_may1) and self.swe_may1 >= 0):
            raise ValueError(f"swe_may1 must be a non-negative real, got {self.swe_may1}")
        if not (math.isfinite(self.precip_mjj) and self.precip_mjj >= 0):
            raise ValueError(f"precip_mjj must be a non-negative real, got {self.precip_mjj}")
        if not (math.isfinite(self.temp_mjj_rankine) and self.temp_mjj_rankine > 0):
            raise ValueError(f"temp_mjj_rankine must be positive, got {self.temp_mjj_rankine}")
        if self.discharge_mjj is not None and not (
            math.isfinite(self.discharge_mjj) and self.discharge_mjj >= 0
        ):
            raise ValueError(f"discharge_mjj must be a non-negative real, got {self.discharge_mjj}")


@dataclass(frozen=True)
class YearExclusion:
    """A year dropped from the feature table and why."""

    year: int
    reason: str


def fahrenheit_to_rankine(t_f: float) -> float:
    """Degrees Fahrenheit to degrees Rankine (same degree size, shifted zero)."""
    if not math.isfinite(t_f):
        raise ValueError(f"temperature must be finite, got {t_f}")
    return t_f + 459.67


def _reader(text):
    """Yield (line_number, fields) from a str or text stream, 1-based."""
    stream = io.StringIO(text) if isinstance(text, str) else text
    for lineno, row in enumerate(csv.reader(stream), start=1):
        if not row:  # blank line, commonly a trailing newline
            continue
        yield lineno, [field.strip() for field in row]


def _check_header(got: list[str], want: list[str], what: str) -> None:
    if got and got[0].startswith("﻿"):
        got = [got[0].lstrip("﻿")] + got[1:]
    if got != want:
        raise ParseError(f"line 1: expected {what} header {','.join(want)!r}, got {','.join(got)!r}")


def _parse_date(field: str, lineno: int) -> date:
    try:
        return date.fromisoformat(field)
    except ValueError:
        raise ParseError(f"line {lineno}: invalid ISO date {field!r}") from None


def _parse_number(field: str, lineno: int, name: str, minimum: float | None = None):
    try:
        value = float(field)
    except ValueError:
        raise ParseError(f"line {lineno}: invalid number {field!r} for {name}") from None
    if not math.isfinite(value):
        raise ParseError(f"line {lineno}: non-finite {name} {field!r}")
    if minimum is not None and value < minimum:
        raise ParseError(f"line {lineno}: {name} must be >= {minimum:g}, got {value:g}")
    return value


def _parse_rows(text, header: list[str], what: str):
    rows = _reader(text)
    try:
        lineno, first = next(rows)
    except StopIteration:
        raise ParseError(f"line 1: empty file, expected {what} header") from None
    if lineno != 1:
        raise ParseError(f"line 1: expected {what} header on the first line")
    _check_header(first, header, what)
    for lineno, fields in rows:
        if len(fields) != len(header):
            raise ParseError(f"line {lineno}: expected {len(header)} fields, got {len(fields)}")
        yield lineno, fields


def parse_climate_csv(text) -> list[ClimateDaily]:
    """Parse daily climate rows from a string or text stream.

    The header row is required; every error message names the offending
    1-based line. Row order is preserved and not required to be sorted.
    """
    records = []
    for lineno, f in _parse_rows(text, CLIMATE_HEADER, "climate"):
        records.append(
            ClimateDaily(
                date=_parse_date(f[0], lineno),
                swe=_parse_number(f[1], lineno, "swe_in", minimum=0.0),
                precip=_parse_number(f[2], lineno, "precip_in", minimum=0.0),
                temp_mean=_parse_number(f[3], lineno, "temp_f"),
            )
        )
    return records


def parse_discharge_csv(text) -> list[DischargeDaily]:
    """Parse daily discharge rows; same conventions as parse_climate_csv."""
    records = []
    for lineno, f in _parse_rows(text, DISCHARGE_HEADER, "discharge"):
        records.append(
            DischargeDaily(
                date=_parse_date(f[0], lineno),
                discharge=_parse_number(f[1], lineno, "discharge_cfs", minimum=0.0),
            )
        )
    return records


def parse_feature_csv(text) -> list[FeatureRecord]:
    """Parse a previously written feature table (see write_feature_csv)."""
    records = []
    for lineno, f in _parse_rows(text, FEATURE_HEADER, "feature"):
        try:
            year = int(f[0])
        except ValueError:
            raise ParseError(f"line {lineno}: invalid year {f[0]!r}") from None
        discharge = None if f[4] == "" else _parse_number(f[4], lineno, "discharge_mjj_cfs", minimum=0.0)
        try:
            records.append(
                FeatureRecord(
                    year=year,
                    swe_may1=_parse_number(f[1], lineno, "swe_may1_in", minimum=0.0),
                    precip_mjj=_parse_number(f[2], lineno, "precip_mjj_in", minimum=0.0),
                    temp_mjj_rankine=_parse_number(f[3], lineno, "temp_mjj_r"),
                    discharge_mjj=discharge,
                )
            )
        except ValueError as exc:
            raise ParseError(f"line {lineno}: {exc}") from None
    return records


def write_feature_csv(records: list[FeatureRecord], stream) -> None:
    """Write the feature table CSV.

    Numbers are written with repr so parse_feature_csv recovers them
    bit-exactly; an unknown discharge becomes an empty field. Output is
    byte-deterministic (fixed "\\n" line endings, no timestamps).
    """
    writer = csv.writer(stream, lineterminator="\n")
    writer.writerow(FEATURE_HEADER)
    for rec in records:
        writer.writerow(
            [
                rec.year,
                repr(rec.swe_may1),
                repr(rec.precip_mjj),
                repr(rec.temp_mjj_rankine),
                "" if rec.discharge_mjj is None else repr(rec.discharge_mjj),
            ]
        )


def _in_window(d: date) -> bool:
    return d.month in (5, 6, 7)


def build_feature_table(
    climate: list[ClimateDaily],
    discharge: list[DischargeDaily],
    exclusions: list[YearExclusion] | None = None,
) -> list[FeatureRecord]:
    """Reduce daily rows to one FeatureRecord per calendar year.

    Only rows dated May 1 to July 31 participate. A year is kept when it has
    a May 1 SWE reading and at least 95% of the window's 92 days covered;
    dropped years are logged and, when ``exclusions`` is passed, appended to
    it with their reason. Discharge is averaged over the same window; a year
    whose discharge coverage is below the same 95% bar keeps its inputs but
    gets no target. Rows are reduced in sorted order, so the result is
    independent of input row order.
    """
    min_days = math.ceil(MIN_COVERAGE * WINDOW_DAYS)

    by_year: dict[int, list[ClimateDaily]] = {}
    for row in climate:
        if _in_window(row.date):
            by_year.setdefault(row.date.year, []).append(row)
    flow_by_year: dict[int, list[DischargeDaily]] = {}
    for row in discharge:
        if _in_window(row.date):
            flow_by_year.setdefault(row.date.year, []).append(row)

    def excluded(year: int, reason: str) -> None:
        logger.warning("year %d excluded: %s", year, reason)
        if exclusions is not None:
            exclusions.append(YearExclusion(year, reason))

    records = []
    for year in sorted(by_year):
        rows = sorted(by_year[year], key=lambda r: (r.date, r.swe, r.precip, r.temp_mean))
        covered = len({r.date for r in rows})
        if covered < min_days:
            excluded(year, f"insufficient coverage: {covered} of {WINDOW_DAYS} days in the May-Jul window")
            continue
        may1 = [r for r in rows if r.date == date(year, 5, 1)]
        if not may1:
            excluded(year, "missing May 1 swe reading")
            continue

        precip_mjj = sum(r.precip for r in rows)
        temp_r = fahrenheit_to_rankine(sum(r.temp_mean for r in rows) / len(rows))
        if not 400.0 < temp_r < 600.0:
            logger.warning("year %d: mean temperature %.2f R is outside the plausible 400-600 R band", year, temp_r)

        discharge_mjj = None
        flow = sorted(flow_by_year.get(year, []), key=lambda r: (r.date, r.discharge))
        if flow:
            flow_covered = len({r.date for r in flow})
            if flow_covered >= min_days:
                discharge_mjj = sum(r.discharge for r in flow) / len(flow)
            else:
                logger.warning(
                    "year %d: discharge covers only %d of %d days, treating target as unknown",
                    year,
                    flow_covered,
                    WINDOW_DAYS,
                )
        records.append(
            FeatureRecord(
                year=year,
                swe_may1=may1[0].swe,
                precip_mjj=precip_mjj,
                temp_mjj_rankine=temp_r,
                discharge_mjj=discharge_mjj,
            )
        )
    return records

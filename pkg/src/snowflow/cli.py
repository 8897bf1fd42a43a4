"""Command-line front end.

Subcommands: ingest, train, sweep, predict, sensitivity, report. Every
subcommand accepts --seed, --format {table,csv} and --quiet. Data goes to
standard output (or the file named by -o), diagnostics to standard error.
Exit codes: 0 success, 2 usage error, 3 unreadable or malformed data,
4 numeric-domain error.
"""

from __future__ import annotations

import argparse
import csv
import logging
import sys
from contextlib import contextmanager
from pathlib import Path

from .errors import DataError, DomainError, ParseError
from .ingest import (
    build_feature_table,
    fahrenheit_to_rankine,
    parse_climate_csv,
    parse_discharge_csv,
    parse_feature_csv,
    write_feature_csv,
)
from .model_io import from_trained, load_model, save_model
from .network import TrainingHyperparams
from .sensitivity import ScanSpec, SensitivityTable, VariedInput, run_scan
from .training import best_node_count, predict, sweep, train

EXIT_OK = 0
EXIT_USAGE = 2
EXIT_DATA = 3
EXIT_DOMAIN = 4

DEFAULT_NODES = (3, 4, 5, 6, 7, 8)
PRESET_MULTIPLIERS = (2.0, 3.0, 4.0, 5.0)
PRESET_OFFSETS_F = (2.5, 5.0)
# fixed-input grids for the canned scans
PRESET_PRECIP_BLOCKS = (4.0, 8.0, 12.0, 16.0)
PRESET_SWE_BLOCKS = (5.0, 10.0, 15.0, 20.0)


def _int_list(text: str) -> tuple[int, ...]:
    try:
        values = tuple(int(part) for part in text.split(","))
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated integers, got {text!r}") from None
    if not values:
        raise argparse.ArgumentTypeError("expected at least one integer")
    return values


def _float_list(text: str) -> tuple[float, ...]:
    try:
        return tuple(float(part) for part in text.split(","))
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated numbers, got {text!r}") from None


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--seed", type=int, default=0, help="RNG seed for weight initialization (default 0)")
    common.add_argument("--format", choices=("table", "csv"), default="table", help="stdout layout (default table)")
    common.add_argument("--quiet", action="store_true", help="suppress diagnostics on stderr")

    parser = argparse.ArgumentParser(
        prog="snowflow",
        description="Forecast seasonal river discharge from snowpack, precipitation and temperature.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("ingest", parents=[common], help="reduce daily CSVs to the per-year feature table")
    p.add_argument("climate", help="daily climate CSV (date,swe_in,precip_in,temp_f)")
    p.add_argument("discharge", help="daily discharge CSV (date,discharge_cfs)")
    p.add_argument("-o", "--out", default="-", help="feature table destination (default stdout)")
    p.set_defaults(func=cmd_ingest)

    p = sub.add_parser("train", parents=[common], help="fit a model on a feature table")
    p.add_argument("features", help="feature table CSV from the ingest step")
    p.add_argument("-o", "--model-out", required=True, help="where to write the model file")
    p.add_argument("--hidden-nodes", type=int, default=7, help="hidden layer width (default 7)")
    _hyperparam_flags(p)
    p.set_defaults(func=cmd_train)

    p = sub.add_parser("sweep", parents=[common], help="compare hidden layer widths on one dataset")
    p.add_argument("features", help="feature table CSV")
    p.add_argument("--nodes", type=_int_list, default=DEFAULT_NODES, help="comma-separated widths (default 3,4,5,6,7,8)")
    _hyperparam_flags(p)
    p.set_defaults(func=cmd_sweep)

    p = sub.add_parser("predict", parents=[common], help="predict seasonal discharge for one set of inputs")
    p.add_argument("model", help="model file from the train step")
    p.add_argument("--swe", type=float, required=True, help="May 1 snow water equivalent, inches")
    p.add_argument("--precip", type=float, required=True, help="cumulative May-July precipitation, inches")
    temp = p.add_mutually_exclusive_group(required=True)
    temp.add_argument("--temp-f", type=float, help="mean May-July temperature, degrees F")
    temp.add_argument("--temp-r", type=float, help="mean May-July temperature, degrees Rankine")
    p.set_defaults(func=cmd_predict)

    p = sub.add_parser("sensitivity", parents=[common], help="what-if scans over one input")
    p.add_argument("model", help="model file from the train step")
    which = p.add_mutually_exclusive_group(required=True)
    which.add_argument("--preset", choices=("table3", "table4", "table5"), help="canned scan grids")
    which.add_argument("--input", choices=tuple(v.value for v in VariedInput), help="input to vary")
    p.add_argument("--multipliers", type=_float_list, help="comma-separated multipliers for snowpack/precipitation scans")
    p.add_argument("--offsets-f", type=_float_list, help="comma-separated degree-F offsets for temperature scans")
    p.add_argument("--swe", type=float, default=5.0, help="base snowpack, inches (default 5)")
    p.add_argument("--precip", type=float, default=4.0, help="base cumulative precipitation, inches (default 4)")
    base_temp = p.add_mutually_exclusive_group()
    base_temp.add_argument("--temp-f", type=float, help="base temperature, degrees F")
    base_temp.add_argument("--temp-r", type=float, help="base temperature, degrees Rankine (default 505)")
    p.set_defaults(func=cmd_sensitivity)

    p = sub.add_parser("report", parents=[common], help="per-year actual vs predicted discharge for plotting")
    p.add_argument("model", help="model file from the train step")
    p.add_argument("features", help="feature table CSV")
    p.add_argument("-o", "--out", default="-", help="plot-data destination (default stdout)")
    p.set_defaults(func=cmd_report)
    return parser


def _hyperparam_flags(p: argparse.ArgumentParser) -> None:
    p.add_argument("--learning-rate", type=float, default=0.05, help="gradient step size (default 0.05)")
    p.add_argument("--momentum", type=float, default=0.9, help="heavy-ball coefficient (default 0.9)")
    p.add_argument("--max-epochs", type=int, default=20000, help="epoch cap (default 20000)")
    p.add_argument("--target-mse", type=float, default=2.72e-4, help="early-stop threshold in scaled space")


def _hyperparams(args) -> TrainingHyperparams:
    return TrainingHyperparams(
        learning_rate=args.learning_rate,
        momentum_coefficient=args.momentum,
        max_epochs=args.max_epochs,
        target_mse=args.target_mse,
        seed=args.seed,
    )


def _read_text(path: str, what: str) -> str:
    try:
        return Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        raise DataError(f"cannot read {what} file: {exc}") from None


def _parse_file(path: str, parser_fn, what: str):
    try:
        return parser_fn(_read_text(path, what))
    except ParseError as exc:
        raise ParseError(f"{path}: {exc}") from None


@contextmanager
def _out_stream(path: str):
    if path == "-":
        yield sys.stdout
    else:
        with open(path, "w", encoding="utf-8", newline="") as fh:
            yield fh


def _say(args, message: str) -> None:
    if not args.quiet:
        print(message, file=sys.stderr)


def _print_metric_rows(rows, best: int | None, fmt: str, stream) -> None:
    """rows: (node_count, Metrics) pairs, one line per node count."""
    if fmt == "csv":
        writer = csv.writer(stream, lineterminator="\n")
        header = ["node", "mse", "r", "pct_error"]
        if best is not None:
            header = header + ["best"]
        writer.writerow(header)
        for node, m in rows:
            record = [node, repr(m.mse), repr(m.r), repr(m.pct_error)]
            if best is not None:
                record.append(int(node == best))
            writer.writerow(record)
    else:
        print(f"{'Node':>4}  {'MSE':>10}  {'r':>8}  {'% Error':>9}", file=stream)
        for node, m in rows:
            marker = "  *" if node == best else ""
            print(f"{node:>4}  {m.mse:>10.6f}  {m.r:>8.4f}  {m.pct_error:>9.4f}{marker}", file=stream)


def cmd_ingest(args) -> int:
    climate = _parse_file(args.climate, parse_climate_csv, "climate")
    discharge = _parse_file(args.discharge, parse_discharge_csv, "discharge")
    exclusions = []
    # exclusions reach stderr through the package logger configured in main()
    records = build_feature_table(climate, discharge, exclusions=exclusions)
    with _out_stream(args.out) as fh:
        write_feature_csv(records, fh)
    _say(args, f"{len(records)} year record(s) written, {len(exclusions)} year(s) excluded")
    return EXIT_OK


def _provenance(path: str, records) -> str:
    years = [r.year for r in records]
    return f"trained on {path} ({len(records)} records, years {min(years)}-{max(years)})"


def cmd_train(args) -> int:
    records = _parse_file(args.features, parse_feature_csv, "feature")
    model = train(records, args.hidden_nodes, _hyperparams(args))
    save_model(from_trained(model, _provenance(args.features, records)), args.model_out)
    _print_metric_rows([(args.hidden_nodes, model.training_metrics)], None, args.format, sys.stdout)
    _say(args, f"{model.epoch_count} epoch(s), model written to {args.model_out}")
    return EXIT_OK


def cmd_sweep(args) -> int:
    records = _parse_file(args.features, parse_feature_csv, "feature")
    rows = sweep(records, list(args.nodes), _hyperparams(args))
    best = best_node_count(rows)
    _print_metric_rows([(row.node_count, row.metrics) for row in rows], best, args.format, sys.stdout)
    _say(args, f"lowest MSE at {best} hidden node(s)")
    return EXIT_OK


def _temp_rankine(args, default: float | None = None) -> float:
    if args.temp_r is not None:
        return args.temp_r
    if args.temp_f is not None:
        return fahrenheit_to_rankine(args.temp_f)
    return default


def cmd_predict(args) -> int:
    model = load_model(args.model)
    discharge = predict(model, args.swe, args.precip, _temp_rankine(args))
    print(f"{discharge:.2f}")
    return EXIT_OK


def _scan_blocks(args) -> list[ScanSpec]:
    temp = _temp_rankine(args, default=505.0)
    if args.preset == "table3":
        return [
            ScanSpec(VariedInput.SNOWPACK, args.swe, p, temp, multipliers=PRESET_MULTIPLIERS)
            for p in PRESET_PRECIP_BLOCKS
        ]
    if args.preset == "table4":
        return [
            ScanSpec(VariedInput.PRECIPITATION, s, args.precip, temp, multipliers=PRESET_MULTIPLIERS)
            for s in PRESET_SWE_BLOCKS
        ]
    if args.preset == "table5":
        return [ScanSpec(VariedInput.TEMPERATURE, args.swe, args.precip, temp, offsets_f=PRESET_OFFSETS_F)]

    varied = VariedInput(args.input)
    if varied is VariedInput.TEMPERATURE:
        if not args.offsets_f:
            raise ValueError("temperature scans need --offsets-f")
        return [ScanSpec(varied, args.swe, args.precip, temp, offsets_f=args.offsets_f)]
    if not args.multipliers:
        raise ValueError(f"{varied.value} scans need --multipliers")
    return [ScanSpec(varied, args.swe, args.precip, temp, multipliers=args.multipliers)]


def _base_desc(table: SensitivityTable) -> str:
    spec = table.spec
    return f"swe_in={spec.base_swe:g} precip_in={spec.base_precip:g} temp_r={spec.base_temp_rankine:g}"


def _print_sensitivity(results: list[SensitivityTable], fmt: str, stream) -> None:
    varied = results[0].spec.varied_input
    flagged = sorted({row.change for table in results for row in table.rows if row.extrapolated})
    if fmt == "csv":
        writer = csv.writer(stream, lineterminator="\n")
        stream.write(f"# varied_input: {varied.value}\n")
        stream.write(f"# extrapolated_changes: {','.join(f'{c:g}' for c in flagged) if flagged else 'none'}\n")
        writer.writerow(["change", "discharge_cfs", "ratio", "pct_change"])
        for table in results:
            stream.write(f"# block: {_base_desc(table)} base_discharge_cfs={repr(table.base_discharge)}\n")
            for row in table.rows:
                writer.writerow([f"{row.change:g}", repr(row.discharge_cfs), repr(row.discharge_ratio), repr(row.discharge_pct_change)])
    else:
        kind = "an offset in deg F" if varied is VariedInput.TEMPERATURE else "a multiplier"
        print(f"Scan of {varied.label.lower()}, change column is {kind}", file=stream)
        for table in results:
            print(f"\nBase {_base_desc(table)}: discharge {table.base_discharge:.2f} CFS", file=stream)
            print(f"{'Change':>8}  {'Discharge (CFS)':>16}  {'Ratio':>9}  {'Change (%)':>11}", file=stream)
            for row in table.rows:
                marker = "  *" if row.extrapolated else ""
                print(
                    f"{row.change:>8g}  {row.discharge_cfs:>16.2f}  {row.discharge_ratio:>9.6f}  {row.discharge_pct_change:>11.4f}{marker}",
                    file=stream,
                )
        if flagged:
            print("\n* varied value beyond 1.5x the training maximum (extrapolation)", file=stream)


def cmd_sensitivity(args) -> int:
    model = load_model(args.model)
    results = [run_scan(model, spec) for spec in _scan_blocks(args)]
    _print_sensitivity(results, args.format, sys.stdout)
    return EXIT_OK


def cmd_report(args) -> int:
    model = load_model(args.model)
    records = [r for r in _parse_file(args.features, parse_feature_csv, "feature") if r.discharge_mjj is not None]
    if not records:
        raise DataError("no records with a discharge value to report on")
    with _out_stream(args.out) as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(["year", "actual_cfs", "predicted_cfs", "residual"])
        for rec in records:
            predicted = predict(model, rec.swe_may1, rec.precip_mjj, rec.temp_mjj_rankine)
            writer.writerow([rec.year, repr(rec.discharge_mjj), repr(predicted), repr(rec.discharge_mjj - predicted)])
    _say(args, f"{len(records)} year(s) reported")
    return EXIT_OK


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:  # argparse already printed usage/help
        return exc.code if isinstance(exc.code, int) else EXIT_USAGE

    logger = logging.getLogger("snowflow")
    handler = logging.StreamHandler(sys.stderr)
    handler.setFormatter(logging.Formatter("%(levelname)s: %(message)s"))
    logger.addHandler(handler)
    old_level, old_propagate = logger.level, logger.propagate
    logger.setLevel(logging.ERROR if args.quiet else logging.WARNING)
    logger.propagate = False
    try:
        return args.func(args)
    except DomainError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_DOMAIN
    except (ParseError, DataError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_DATA
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_DATA
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    finally:
        logger.removeHandler(handler)
        logger.setLevel(old_level)
        logger.propagate = old_propagate


def entrypoint() -> None:
    sys.exit(main())


if __name__ == "__main__":
    entrypoint()

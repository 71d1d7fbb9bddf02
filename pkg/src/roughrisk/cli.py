"""Command-line pipeline: simulate | quantize | train | classify | evaluate.

Every command is deterministic given its inputs and seed, never mutates
an input file, and replaces outputs atomically. Exit codes: 0 ok,
2 usage or input problem, 3 degenerate config or data, 4 schema
mismatch, 5 corrupt model file.
"""

from __future__ import annotations

import argparse
import csv
import logging
import os
import sys
from pathlib import Path

import numpy as np

from . import datagen, evaluation, kinematics, quantize
from .decision_table import DecisionTable
from .errors import (
    ConfigError,
    DegenerateDataError,
    ModelFormatError,
    SchemaMismatchError,
)
from .rules import classify_batch, dumps_model, load_model, train_model
from .vprs import VprsParams, as_beta

log = logging.getLogger("roughrisk")

EXIT_OK = 0
EXIT_USAGE = 2
EXIT_DEGENERATE = 3
EXIT_SCHEMA = 4
EXIT_MODEL = 5


def _atomic_write(path: Path, text: str) -> None:
    tmp = path.with_name(path.name + ".tmp")
    tmp.write_text(text)
    os.replace(tmp, path)


def _read_header(path: Path) -> list[str]:
    with open(path, newline="") as fh:
        row = next(csv.reader(fh), None)
    if row is None:
        raise ValueError(f"{path} is empty")
    return row


def _load_events_or_records(path: Path):
    """Load a CSV as ('raw', events) or ('quantized', records) or
    ('generic', header, int rows) by inspecting the header."""
    header = _read_header(path)
    if header == quantize.RAW_HEADER:
        return "raw", quantize.read_raw_csv(path)
    if header == quantize.QUANTIZED_HEADER:
        return "quantized", quantize.read_quantized_csv(path)
    if len(header) < 2 or len(set(header)) != len(header):
        raise ValueError(
            f"{path}: header must list unique condition columns plus a "
            "final decision column"
        )
    rows = []
    with open(path, newline="") as fh:
        reader = csv.reader(fh)
        next(reader)
        for lineno, row in enumerate(reader, start=2):
            if len(row) != len(header):
                raise ValueError(f"{path}:{lineno}: expected {len(header)} fields")
            try:
                rows.append([_generic_cell(v) for v in row])
            except ValueError as exc:
                raise ValueError(f"{path}:{lineno}: {exc}") from exc
    return "generic", header, rows


def _generic_cell(v: str) -> int:
    try:
        return int(v)
    except ValueError:
        try:
            return int(quantize.RiskLevel[v])
        except KeyError:
            raise ValueError(f"cannot read level {v!r}") from None


def _as_table(loaded) -> DecisionTable:
    if loaded[0] == "raw":
        records = [quantize.quantize_event(e) for e in loaded[1]]
        return quantize.records_to_table(records)
    if loaded[0] == "quantized":
        return quantize.records_to_table(loaded[1])
    _, header, rows = loaded
    if not rows:
        raise ValueError("no data rows")
    mat = np.array(rows, dtype=np.int64)
    return DecisionTable(
        objects=tuple(str(i + 1) for i in range(len(rows))),
        condition_attrs=tuple(header[:-1]),
        decision_attr=header[-1],
        condition_values=mat[:, :-1],
        decision_values=mat[:, -1],
    )


def _sample_dicts(loaded) -> list[dict[str, int]]:
    if loaded[0] == "raw":
        return [quantize.quantize_event(e).as_levels() for e in loaded[1]]
    if loaded[0] == "quantized":
        return [r.as_levels() for r in loaded[1]]
    _, header, rows = loaded
    return [dict(zip(header, row)) for row in rows]


def cmd_simulate(args) -> int:
    cfg = datagen.load_sim_config(args.config, seed_override=args.seed)
    events = datagen.generate(cfg)
    out = Path(args.out)
    tmp = out.with_name(out.name + ".tmp")
    quantize.write_raw_csv(tmp, events)
    os.replace(tmp, out)
    log.info("wrote %d events to %s", len(events), args.out)
    return EXIT_OK


def cmd_quantize(args) -> int:
    events = quantize.read_raw_csv(args.data)
    if not events:
        raise ValueError(f"{args.data} holds no events")
    records = [quantize.quantize_event(e) for e in events]
    out = Path(args.out)
    tmp = out.with_name(out.name + ".tmp")
    quantize.write_quantized_csv(tmp, records)
    os.replace(tmp, out)
    log.info("quantized %d events to %s", len(records), args.out)
    return EXIT_OK


def cmd_train(args) -> int:
    if args.beta == "auto":
        params = None
    else:
        params = VprsParams(as_beta(args.beta))
    loaded = _load_events_or_records(Path(args.data))
    table = _as_table(loaded)
    model = train_model(table, params)
    _atomic_write(Path(args.out), dumps_model(model))
    log.info(
        "model: beta=%s reduct=%s rules=%d -> %s",
        model.beta, ",".join(model.reduct), len(model.rules), args.out,
    )
    return EXIT_OK


def _check_schema(model, columns) -> None:
    missing = tuple(a for a in model.reduct if a not in columns)
    if missing:
        raise SchemaMismatchError(missing)


def _predictions_csv(model, samples) -> str:
    preds = classify_batch(model, samples)
    lines = ["id,decision,belief,matched,similarity,score"]
    for i, p in enumerate(preds, start=1):
        lines.append(
            f"{i},{p.decision_name},{p.belief:.12g},{p.matched},"
            f"{p.similarity_score:.12g},{p.risk_score:.12g}"
        )
    return "\n".join(lines) + "\n"


def cmd_classify(args) -> int:
    model = load_model(args.model)
    loaded = _load_events_or_records(Path(args.data))
    samples = _sample_dicts(loaded)
    if not samples:
        raise ValueError(f"{args.data} holds no rows")
    _check_schema(model, samples[0].keys())
    _atomic_write(Path(args.out), _predictions_csv(model, samples))
    log.info("classified %d samples to %s", len(samples), args.out)
    return EXIT_OK


def cmd_evaluate(args) -> int:
    model = load_model(args.model)
    loaded = _load_events_or_records(Path(args.data))
    if loaded[0] != "raw":
        raise ValueError(
            "evaluate needs the raw-event CSV: labels come from decel and "
            "the baseline needs raw TTC values"
        )
    events = loaded[1]
    if not events:
        raise ValueError(f"{args.data} holds no events")
    records = [quantize.quantize_event(e) for e in events]
    _check_schema(model, quantize.CONDITION_ATTRS)
    labels = tuple(int(r.risk) for r in records)

    preds = classify_batch(model, [r.as_levels() for r in records])
    vprs_eval = evaluation.MethodEval(
        name="vprs",
        decisions=tuple(p.decision for p in preds),
        scores=tuple(p.risk_score for p in preds),
    )
    verdicts = [
        kinematics.ttc_baseline_classify(
            kinematics.NOT_CLOSING if e.ttc_occupied is None else e.ttc_occupied
        )
        for e in events
    ]
    ttc_eval = evaluation.MethodEval(
        name="ttc",
        decisions=tuple(
            int(quantize.RiskLevel.Moderate if v.positive else quantize.RiskLevel.Low)
            for v in verdicts
        ),
        scores=tuple(v.score for v in verdicts),
    )
    report = evaluation.compare_models([vprs_eval, ttc_eval], labels)

    out_dir = Path(args.out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    _atomic_write(out_dir / "report.txt", evaluation.render_report_text(report))
    _atomic_write(out_dir / "report.csv", evaluation.render_report_csv(report))
    for row in report.rows:
        _atomic_write(
            out_dir / f"roc_{row.name}.csv", evaluation.render_roc_csv(row.curve)
        )
    log.info("evaluation written to %s", out_dir)
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--seed", type=int, default=None,
                        help="RNG seed; overrides any seed in a config file")
    common.add_argument("--verbose", action="store_true",
                        help="log progress details to stderr")

    parser = argparse.ArgumentParser(
        prog="roughrisk",
        description="Rough-set risk classification pipeline for braking events",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("simulate", parents=[common],
                       help="generate a synthetic raw-event CSV")
    p.add_argument("--config", required=True, help="TOML generator config")
    p.add_argument("--out", required=True, help="raw-event CSV to write")
    p.set_defaults(func=cmd_simulate)

    p = sub.add_parser("quantize", parents=[common],
                       help="convert raw events to discrete levels")
    p.add_argument("--data", required=True, help="raw-event CSV")
    p.add_argument("--out", required=True, help="quantized CSV to write")
    p.set_defaults(func=cmd_quantize)

    p = sub.add_parser("train", parents=[common],
                       help="train a model from raw, quantized, or generic CSV")
    p.add_argument("--data", required=True)
    p.add_argument("--out", required=True, help="model JSON to write")
    p.add_argument("--beta", default="auto",
                   help="precision threshold in (0.5, 1], or 'auto' (default)")
    p.set_defaults(func=cmd_train)

    p = sub.add_parser("classify", parents=[common],
                       help="classify rows with a trained model")
    p.add_argument("--model", required=True)
    p.add_argument("--data", required=True)
    p.add_argument("--out", required=True, help="predictions CSV to write")
    p.set_defaults(func=cmd_classify)

    p = sub.add_parser("evaluate", parents=[common],
                       help="compare the model with the TTC baseline on raw events")
    p.add_argument("--model", required=True)
    p.add_argument("--data", required=True, help="raw-event CSV")
    p.add_argument("--out-dir", required=True)
    p.set_defaults(func=cmd_evaluate)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(
        stream=sys.stderr,
        level=logging.INFO if args.verbose else logging.WARNING,
        format="%(levelname)s %(name)s: %(message)s",
    )
    try:
        return args.func(args)
    except SchemaMismatchError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_SCHEMA
    except ModelFormatError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_MODEL
    except (ConfigError, DegenerateDataError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_DEGENERATE
    except (OSError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())

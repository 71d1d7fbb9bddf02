"""Confusion metrics, ROC/AUC with grouped-tie handling, and the
model-vs-baseline comparison report.

The positive class is {Moderate, High}; Low is negative.
"""

from __future__ import annotations

import dataclasses
from collections.abc import Sequence
from typing import NamedTuple

import numpy as np

from .quantize import RiskLevel

POSITIVE_MIN = int(RiskLevel.Moderate)


def _codes(values: Sequence, what: str) -> list[int]:
    out = []
    for v in values:
        try:
            out.append(int(RiskLevel(int(v))))
        except ValueError:
            raise ValueError(f"invalid {what} value {v!r}") from None
    return out


@dataclasses.dataclass(frozen=True)
class ConfusionCounts:
    tp: int
    fp: int
    tn: int
    fn: int

    def __post_init__(self):
        if min(self.tp, self.fp, self.tn, self.fn) < 0:
            raise ValueError("confusion counts must be non-negative")

    @property
    def total(self) -> int:
        return self.tp + self.fp + self.tn + self.fn


class Rates(NamedTuple):
    tpr: float
    fpr: float
    tnr: float
    ocr: float


def confusion(predictions: Sequence, labels: Sequence) -> ConfusionCounts:
    """Binary confusion counts with Moderate/High as the positive class."""
    if len(predictions) != len(labels):
        raise ValueError(
            f"prediction count {len(predictions)} does not match "
            f"label count {len(labels)}"
        )
    preds = _codes(predictions, "prediction")
    labs = _codes(labels, "label")
    tp = fp = tn = fn = 0
    for p, l in zip(preds, labs):
        pp = p >= POSITIVE_MIN
        lp = l >= POSITIVE_MIN
        if pp and lp:
            tp += 1
        elif pp:
            fp += 1
        elif lp:
            fn += 1
        else:
            tn += 1
    return ConfusionCounts(tp=tp, fp=fp, tn=tn, fn=fn)


def rates(c: ConfusionCounts) -> Rates:
    """tpr/fpr/tnr/ocr; undefined when a label class is empty."""
    if c.tp + c.fn == 0:
        raise ValueError("no positive labels: tpr is undefined")
    if c.tn + c.fp == 0:
        raise ValueError("no negative labels: fpr is undefined")
    tpr = c.tp / (c.tp + c.fn)
    fpr = c.fp / (c.fp + c.tn)
    return Rates(tpr=tpr, fpr=fpr, tnr=1.0 - fpr, ocr=(c.tp + c.tn) / c.total)


def level_matrix(predictions: Sequence, labels: Sequence) -> np.ndarray:
    """3x3 count matrix, rows = actual level, columns = predicted."""
    if len(predictions) != len(labels):
        raise ValueError("prediction and label counts differ")
    out = np.zeros((3, 3), dtype=np.int64)
    for p, l in zip(_codes(predictions, "prediction"), _codes(labels, "label")):
        out[l, p] += 1
    return out


@dataclasses.dataclass(frozen=True)
class RocCurve:
    """Threshold-sweep curve: points[0] is (0, 0) and each following
    point pairs with the threshold that produced it."""

    points: tuple[tuple[float, float], ...]
    thresholds: tuple[float, ...]
    auc: float

    def __post_init__(self):
        if len(self.points) != len(self.thresholds) + 1:
            raise ValueError("each point after the origin needs a threshold")
        if self.points[0] != (0.0, 0.0) or self.points[-1] != (1.0, 1.0):
            raise ValueError("curve must run from (0,0) to (1,1)")
        for (f0, t0), (f1, t1) in zip(self.points, self.points[1:]):
            if f1 < f0 or t1 < t0:
                raise ValueError("curve coordinates must be non-decreasing")


def roc_auc(scores: Sequence[float], labels: Sequence) -> RocCurve:
    """Descending sweep over distinct score thresholds; tied scores fall
    in one step, which makes the trapezoidal area equal the pairwise
    (Mann-Whitney, ties at half credit) ordering probability."""
    if len(scores) != len(labels):
        raise ValueError("score and label counts differ")
    labs = _codes(labels, "label")
    pos = np.array([l >= POSITIVE_MIN for l in labs])
    s = np.asarray(scores, dtype=np.float64)
    n_pos = int(pos.sum())
    n_neg = int((~pos).sum())
    if n_pos == 0 or n_neg == 0:
        raise ValueError("AUC is undefined for single-class labels")
    order = np.argsort(-s, kind="stable")
    points = [(0.0, 0.0)]
    thresholds = []
    auc = 0.0
    tp = fp = 0
    i = 0
    n = len(labs)
    while i < n:
        j = i
        thr = s[order[i]]
        while j < n and s[order[j]] == thr:
            if pos[order[j]]:
                tp += 1
            else:
                fp += 1
            j += 1
        fpr, tpr = fp / n_neg, tp / n_pos
        prev_fpr, prev_tpr = points[-1]
        auc += (fpr - prev_fpr) * (tpr + prev_tpr) / 2.0
        points.append((fpr, tpr))
        thresholds.append(float(thr))
        i = j
    return RocCurve(points=tuple(points), thresholds=tuple(thresholds), auc=auc)


@dataclasses.dataclass(frozen=True)
class MethodEval:
    """One method's predictions: hard risk decisions plus a continuous
    positive-class score per event."""

    name: str
    decisions: tuple[int, ...]
    scores: tuple[float, ...]


@dataclasses.dataclass(frozen=True)
class MethodRow:
    name: str
    counts: ConfusionCounts
    rates: Rates
    curve: RocCurve
    matrix: np.ndarray


@dataclasses.dataclass(frozen=True)
class ComparisonReport:
    rows: tuple[MethodRow, ...]
    n_events: int
    n_positive: int


def compare_models(methods: Sequence[MethodEval], labels: Sequence) -> ComparisonReport:
    """Score every method against the same labels; one report row each."""
    labs = _codes(labels, "label")
    rows = []
    for m in methods:
        c = confusion(m.decisions, labs)
        rows.append(MethodRow(
            name=m.name,
            counts=c,
            rates=rates(c),
            curve=roc_auc(m.scores, labs),
            matrix=level_matrix(m.decisions, labs),
        ))
    n_pos = sum(1 for l in labs if l >= POSITIVE_MIN)
    return ComparisonReport(rows=tuple(rows), n_events=len(labs), n_positive=n_pos)


# --- stable renderings ----------------------------------------------------

def render_report_csv(report: ComparisonReport) -> str:
    lines = ["method,tpr,fpr,tnr,ocr,auc"]
    for row in report.rows:
        r = row.rates
        lines.append(
            f"{row.name},{r.tpr:.6f},{r.fpr:.6f},{r.tnr:.6f},"
            f"{r.ocr:.6f},{row.curve.auc:.6f}"
        )
    return "\n".join(lines) + "\n"


def render_report_text(report: ComparisonReport) -> str:
    n, p = report.n_events, report.n_positive
    neg = n - p
    out = [
        "Risk classification report (positive class: Moderate + High)",
        f"events: {n}; positive: {p} ({100.0 * p / n:.1f}%); "
        f"negative: {neg} ({100.0 * neg / n:.1f}%)",
        "OCR uses raw counts; class prevalence above qualifies it.",
        "",
        f"{'method':<10}{'TPR':>8}{'FPR':>8}{'TNR':>8}{'OCR':>8}{'AUC':>7}",
    ]
    for row in report.rows:
        r = row.rates
        out.append(
            f"{row.name:<10}"
            f"{100.0 * r.tpr:>7.1f}%{100.0 * r.fpr:>7.1f}%"
            f"{100.0 * r.tnr:>7.1f}%{100.0 * r.ocr:>7.1f}%"
            f"{row.curve.auc:>7.2f}"
        )
    out.append("")
    out.append("per-level confusion (rows actual Low/Moderate/High, columns predicted):")
    for row in report.rows:
        out.append(f"[{row.name}]")
        for lvl in range(3):
            cells = " ".join(f"{int(v):>8d}" for v in row.matrix[lvl])
            out.append(f"  {RiskLevel(lvl).name:<9}{cells}")
    return "\n".join(out) + "\n"


def render_roc_csv(curve: RocCurve) -> str:
    lines = ["threshold,fpr,tpr", "inf,0,0"]
    for thr, (fpr, tpr) in zip(curve.thresholds, curve.points[1:]):
        lines.append(f"{thr:.12g},{fpr:.12g},{tpr:.12g}")
    return "\n".join(lines) + "\n"

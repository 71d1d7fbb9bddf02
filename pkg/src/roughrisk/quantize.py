"""Quantization of raw near-crash events into discrete attribute levels
plus the braking-outcome risk label, with the CSV formats for both.
"""

from __future__ import annotations

import csv
import dataclasses
import enum
import math
from collections.abc import Iterable, Sequence
from pathlib import Path

import numpy as np

from .decision_table import DecisionTable

GENDERS = ("male", "female")
ROAD_SEGMENTS = ("corridor", "intersection", "viaduct", "tunnel")
TRAFFIC_FLOWS = ("congested", "moderate", "free")

CONDITION_ATTRS = ("c1", "c2", "c3", "c4", "c5", "c6", "c7", "c8", "c9")
DECISION_ATTR = "risk"

RAW_HEADER = (
    "gender,age,acc_pedal,brake_switch,turn_indicator,ttc_occupied,"
    "ttc_neighbor,velocity,road_segment,traffic_flow,friction,decel"
).split(",")
QUANTIZED_HEADER = list(CONDITION_ATTRS) + [DECISION_ATTR]


class RiskLevel(enum.IntEnum):
    """Risk bands by braking deceleration; codes order by severity."""

    Low = 0
    Moderate = 1
    High = 2


@dataclasses.dataclass(frozen=True)
class RawEvent:
    """One near-crash event at sensor scale.

    decel is the braking-outcome acceleration in m/s^2 (negative while
    braking) and is the sole source of the risk label. TTC fields are
    None when no vehicle occupies the lane.
    """

    gender: str
    age: int
    acc_pedal: bool
    brake_switch: bool
    turn_indicator: bool
    ttc_occupied: float | None
    ttc_neighbor: float | None
    velocity: float
    road_segment: str
    traffic_flow: str
    friction: float
    decel: float

    def __post_init__(self):
        if self.gender not in GENDERS:
            raise ValueError(f"gender must be one of {GENDERS}, got {self.gender!r}")
        if not isinstance(self.age, int) or self.age < 16:
            raise ValueError(f"age must be an integer of at least 16, got {self.age!r}")
        for name in ("ttc_occupied", "ttc_neighbor"):
            t = getattr(self, name)
            if t is not None and not (math.isfinite(t) and t > 0):
                raise ValueError(f"{name} must be strictly positive when present")
        if not (math.isfinite(self.velocity) and self.velocity >= 0):
            raise ValueError("velocity must be finite and non-negative")
        if self.road_segment not in ROAD_SEGMENTS:
            raise ValueError(
                f"road_segment must be one of {ROAD_SEGMENTS}, got {self.road_segment!r}"
            )
        if self.traffic_flow not in TRAFFIC_FLOWS:
            raise ValueError(
                f"traffic_flow must be one of {TRAFFIC_FLOWS}, got {self.traffic_flow!r}"
            )
        if not (math.isfinite(self.friction) and 0 <= self.friction <= 1):
            raise ValueError("friction must lie in [0, 1]")
        if not math.isfinite(self.decel):
            raise ValueError("decel must be finite")


# inclusive level bounds per attribute
LEVEL_DOMAINS = {
    "c1": (0, 7), "c2": (1, 2), "c3": (1, 4), "c4": (1, 4), "c5": (1, 3),
    "c6": (1, 3), "c7": (1, 4), "c8": (1, 3), "c9": (1, 3),
}


@dataclasses.dataclass(frozen=True)
class QuantizedRecord:
    """Discrete attribute levels c1..c9 plus the risk label."""

    c1: int
    c2: int
    c3: int
    c4: int
    c5: int
    c6: int
    c7: int
    c8: int
    c9: int
    risk: RiskLevel

    def __post_init__(self):
        for name, (lo, hi) in LEVEL_DOMAINS.items():
            v = getattr(self, name)
            if not isinstance(v, int) or not lo <= v <= hi:
                raise ValueError(f"{name} must be an integer in [{lo}, {hi}], got {v!r}")
        if not isinstance(self.risk, RiskLevel):
            raise ValueError(f"risk must be a RiskLevel, got {self.risk!r}")

    def levels(self) -> tuple[int, ...]:
        return (self.c1, self.c2, self.c3, self.c4, self.c5,
                self.c6, self.c7, self.c8, self.c9)

    def as_levels(self) -> dict[str, int]:
        return dict(zip(CONDITION_ATTRS, self.levels()))


def risk_label(decel: float) -> RiskLevel:
    """Risk band of a braking deceleration: at or below -5 is High,
    down to -2 is Moderate, anything gentler is Low."""
    if not math.isfinite(decel):
        raise ValueError("decel must be finite")
    if decel <= -5:
        return RiskLevel.High
    if decel <= -2:
        return RiskLevel.Moderate
    return RiskLevel.Low


def _ttc_level(t: float | None) -> int:
    if t is None or t > 5:
        return 1
    if t > 2:
        return 2
    return 3


def _velocity_level(v: float) -> int:
    if v <= 40:
        return 1
    if v <= 50:
        return 2
    if v <= 60:
        return 3
    return 4


def _age_level(age: int) -> int:
    if age < 18:
        raise ValueError(f"age {age} is below the youngest licensed-driver group")
    if age <= 30:
        return 1
    if age <= 45:
        return 2
    if age <= 60:
        return 3
    return 4


def _friction_level(mu: float) -> int:
    if mu >= 0.7:
        return 1
    if mu >= 0.4:
        return 2
    return 3


def quantize_event(e: RawEvent) -> QuantizedRecord:
    """Map a raw event onto discrete levels and label its risk."""
    return QuantizedRecord(
        c1=4 * int(e.acc_pedal) + 2 * int(e.brake_switch) + int(e.turn_indicator),
        c2=GENDERS.index(e.gender) + 1,
        c3=_age_level(e.age),
        c4=_velocity_level(e.velocity),
        c5=_ttc_level(e.ttc_occupied),
        c6=_ttc_level(e.ttc_neighbor),
        c7=ROAD_SEGMENTS.index(e.road_segment) + 1,
        c8=TRAFFIC_FLOWS.index(e.traffic_flow) + 1,
        c9=_friction_level(e.friction),
        risk=risk_label(e.decel),
    )


def records_to_table(records: Sequence[QuantizedRecord]) -> DecisionTable:
    """Stack quantized records into a decision table; objects are
    numbered from 1 in input order."""
    if not records:
        raise ValueError("cannot build a decision table from zero records")
    cond = np.array([r.levels() for r in records], dtype=np.int64)
    dec = np.array([int(r.risk) for r in records], dtype=np.int64)
    return DecisionTable(
        objects=tuple(str(i + 1) for i in range(len(records))),
        condition_attrs=CONDITION_ATTRS,
        decision_attr=DECISION_ATTR,
        condition_values=cond,
        decision_values=dec,
    )


# --- CSV formats ---------------------------------------------------------

def _fmt_float(x: float) -> str:
    # shortest round-trip repr keeps band membership exact across I/O
    return repr(float(x))


def write_raw_csv(path: str | Path, events: Iterable[RawEvent]) -> None:
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(RAW_HEADER)
        for e in events:
            w.writerow([
                e.gender,
                e.age,
                int(e.acc_pedal),
                int(e.brake_switch),
                int(e.turn_indicator),
                "" if e.ttc_occupied is None else _fmt_float(e.ttc_occupied),
                "" if e.ttc_neighbor is None else _fmt_float(e.ttc_neighbor),
                _fmt_float(e.velocity),
                e.road_segment,
                e.traffic_flow,
                _fmt_float(e.friction),
                _fmt_float(e.decel),
            ])


def _parse_bool(field: str, raw: str) -> bool:
    if raw == "0":
        return False
    if raw == "1":
        return True
    raise ValueError(f"{field} must be 0 or 1, got {raw!r}")


def read_raw_csv(path: str | Path) -> list[RawEvent]:
    with open(path, newline="") as fh:
        reader = csv.reader(fh)
        header = next(reader, None)
        if header != RAW_HEADER:
            raise ValueError(
                f"unexpected raw-event header {header!r} in {path}"
            )
        events = []
        for lineno, row in enumerate(reader, start=2):
            if len(row) != len(RAW_HEADER):
                raise ValueError(f"{path}:{lineno}: expected {len(RAW_HEADER)} fields")
            try:
                events.append(RawEvent(
                    gender=row[0],
                    age=int(row[1]),
                    acc_pedal=_parse_bool("acc_pedal", row[2]),
                    brake_switch=_parse_bool("brake_switch", row[3]),
                    turn_indicator=_parse_bool("turn_indicator", row[4]),
                    ttc_occupied=None if row[5] == "" else float(row[5]),
                    ttc_neighbor=None if row[6] == "" else float(row[6]),
                    velocity=float(row[7]),
                    road_segment=row[8],
                    traffic_flow=row[9],
                    friction=float(row[10]),
                    decel=float(row[11]),
                ))
            except ValueError as exc:
                raise ValueError(f"{path}:{lineno}: {exc}") from exc
    return events


def write_quantized_csv(path: str | Path, records: Iterable[QuantizedRecord]) -> None:
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(QUANTIZED_HEADER)
        for r in records:
            w.writerow(list(r.levels()) + [r.risk.name])


def read_quantized_csv(path: str | Path) -> list[QuantizedRecord]:
    with open(path, newline="") as fh:
        reader = csv.reader(fh)
        header = next(reader, None)
        if header != QUANTIZED_HEADER:
            raise ValueError(f"unexpected quantized header {header!r} in {path}")
        records = []
        for lineno, row in enumerate(reader, start=2):
            if len(row) != len(QUANTIZED_HEADER):
                raise ValueError(
                    f"{path}:{lineno}: expected {len(QUANTIZED_HEADER)} fields"
                )
            try:
                levels = [int(v) for v in row[:9]]
                records.append(QuantizedRecord(*levels, risk=RiskLevel[row[9]]))
            except (ValueError, KeyError) as exc:
                raise ValueError(f"{path}:{lineno}: {exc}") from exc
    return records

"""Longitudinal safety distance, time to collision, and the circular
danger-zone overlap test; also the TTC-threshold baseline classifier.
"""

from __future__ import annotations

import dataclasses
import math
from typing import NamedTuple

NOT_CLOSING = math.inf

# horizon for the baseline's continuous ROC score; matches the safest
# quantization band boundary (TTC > 5 s)
SCORE_HORIZON = 5.0
DEFAULT_WARN_THRESHOLD = 2.0


@dataclasses.dataclass(frozen=True)
class CarFollowState:
    """Following/preceding pair for the warning-distance formula.

    Speeds in m/s, decelerations as positive magnitudes in m/s^2, tau
    the actuation delay in s, margin the standstill offset in m. The
    measured gap to the leader is optional; when recorded it can be
    compared against safety_distance to decide a warning.
    """

    v1: float
    v2: float
    a1_max: float
    a2_max: float
    tau: float
    d0: float
    gap: float | None = None

    def __post_init__(self):
        if not all(map(math.isfinite, (self.v1, self.v2, self.a1_max,
                                       self.a2_max, self.tau, self.d0))):
            raise ValueError("car-following state must be finite")
        if self.v1 < 0 or self.v2 < 0:
            raise ValueError("speeds must be non-negative")
        if self.a1_max <= 0 or self.a2_max <= 0:
            raise ValueError("maximum decelerations must be positive")
        if self.tau < 0:
            raise ValueError("tau must be non-negative")
        if self.d0 < 0:
            raise ValueError("d0 must be non-negative")
        if self.gap is not None and not (math.isfinite(self.gap) and self.gap > 0):
            raise ValueError("gap must be positive when recorded")


def safety_distance(s: CarFollowState) -> float:
    """Critical warning distance: reaction travel plus the stopping
    distance difference, floored at the standstill margin d0."""
    d = (s.v1 * s.tau
         + s.v1 * s.v1 / (2.0 * s.a1_max)
         - s.v2 * s.v2 / (2.0 * s.a2_max)
         + s.d0)
    return max(d, s.d0)


def ttc(gap: float, v_rel: float) -> float:
    """Time to collision for a closing pair; NOT_CLOSING (inf) when the
    gap is not shrinking."""
    if not (math.isfinite(gap) and gap > 0):
        raise ValueError("gap must be positive (vehicles not in contact)")
    if v_rel <= 0:
        return NOT_CLOSING
    return gap / v_rel


@dataclasses.dataclass(frozen=True)
class VehicleFootprint:
    """Planar vehicle pose with a circular danger zone of radius R.

    R defaults to half the body diagonal plus speed_gain times speed;
    an explicit radius must still cover the body.
    """

    x: float
    y: float
    vx: float
    vy: float
    length: float
    width: float
    radius: float | None = None
    speed_gain: float = 0.0

    def __post_init__(self):
        if self.length <= 0 or self.width <= 0:
            raise ValueError("length and width must be positive")
        if self.speed_gain < 0:
            raise ValueError("speed_gain must be non-negative")
        half_diag = math.hypot(self.length, self.width) / 2.0
        r = self.radius
        if r is None:
            r = half_diag + self.speed_gain * math.hypot(self.vx, self.vy)
        elif r < half_diag:
            raise ValueError("zone radius must cover the vehicle footprint")
        object.__setattr__(self, "radius", float(r))


def zone_overlap(f1: VehicleFootprint, f2: VehicleFootprint) -> bool:
    """True when the danger circles touch or intersect (boundary counts)."""
    return math.hypot(f1.x - f2.x, f1.y - f2.y) <= f1.radius + f2.radius


class BaselineVerdict(NamedTuple):
    positive: bool
    score: float


def ttc_baseline_classify(
    t: float, warn_threshold: float = DEFAULT_WARN_THRESHOLD
) -> BaselineVerdict:
    """Threshold baseline: risk-positive below warn_threshold seconds,
    with a continuous score 1 - min(t / horizon, 1) for ROC sweeps.
    NOT_CLOSING scores 0."""
    if not warn_threshold > 0:
        raise ValueError("warn_threshold must be positive")
    score = 1.0 - min(t / SCORE_HORIZON, 1.0)
    return BaselineVerdict(positive=t < warn_threshold, score=score)

"""Seeded synthetic near-crash generator.

Events carry a planted dependency: the braking outcome is decided by
ordered wildcard rules over the relevant attributes (c1, c4, c5, c6,
c9), while c2, c3, c7, c8 are drawn independently. Raw continuous
values are sampled inside the band their target level dictates, so
quantization round-trips exactly, and every event satisfies the
near-crash trigger (decel <= -1.5 m/s^2 or occupied-lane TTC < 3 s).
"""

from __future__ import annotations

import dataclasses
import itertools
import math
from collections.abc import Mapping, Sequence

import numpy as np

from .errors import ConfigError
from .kinematics import ttc as kinematic_ttc
from .quantize import (
    GENDERS,
    LEVEL_DOMAINS,
    ROAD_SEGMENTS,
    TRAFFIC_FLOWS,
    RawEvent,
    RiskLevel,
    risk_label,
)

RELEVANT_ATTRS = ("c1", "c4", "c5", "c6", "c9")

DECEL_TRIGGER = -1.5  # m/s^2, longitudinal
TTC_TRIGGER = 3.0     # s, occupied lane

# canonical deceleration sampling bands (open-low, closed-high)
_BAND_EDGES = {
    RiskLevel.High: (-8.0, -5.0),
    RiskLevel.Moderate: (-5.0, -2.0),
    RiskLevel.Low: (-2.0, 0.0),
}


def _domain(attr: str) -> tuple[int, ...]:
    lo, hi = LEVEL_DOMAINS[attr]
    return tuple(range(lo, hi + 1))


@dataclasses.dataclass(frozen=True)
class PlantedRule:
    """One outcome rule: events matching `when` draw their deceleration
    uniformly from [mean - spread, mean + spread]. Attributes absent
    from `when` are wildcards; rules are tried in config order."""

    name: str
    when: tuple[tuple[str, tuple[int, ...]], ...]
    decel_mean: float
    decel_spread: float

    def matches(self, levels: Mapping[str, int]) -> bool:
        return all(levels[a] in allowed for a, allowed in self.when)

    @property
    def decel_interval(self) -> tuple[float, float]:
        return (self.decel_mean - self.decel_spread,
                self.decel_mean + self.decel_spread)


def make_rule(name: str, when: Mapping[str, Sequence[int]],
              decel_mean: float, decel_spread: float) -> PlantedRule:
    return PlantedRule(
        name=name,
        when=tuple(sorted((a, tuple(sorted(set(int(v) for v in vs))))
                          for a, vs in when.items())),
        decel_mean=float(decel_mean),
        decel_spread=float(decel_spread),
    )


DEFAULT_RULES = (
    # same short TTC, opposite outcomes: a slow driver off the throttle
    # recovers gently, anyone else brakes hard
    make_rule("imminent-controlled",
              {"c5": [3], "c1": [0, 1, 2, 3], "c4": [1, 2]}, -1.2, 0.25),
    make_rule("imminent-fast", {"c5": [3], "c4": [3, 4]}, -6.2, 0.6),
    make_rule("imminent-slippery", {"c5": [3], "c9": [2, 3]}, -5.8, 0.5),
    make_rule("imminent", {"c5": [3]}, -3.5, 1.0),
    make_rule("closing-throttle", {"c5": [2], "c1": [4, 5, 6, 7]}, -5.9, 0.7),
    make_rule("closing-fast", {"c5": [2], "c4": [3, 4]}, -3.2, 0.9),
    make_rule("closing-slippery", {"c5": [2], "c9": [3]}, -2.9, 0.7),
    # emergencies with a clear occupied lane: a neighbor cuts in while
    # the driver is on the throttle
    make_rule("cutin-emergency", {"c6": [3], "c1": [4, 5, 6, 7]}, -6.0, 0.6),
    make_rule("neighbor-cut-in", {"c6": [3], "c1": [1, 3]}, -2.8, 0.6),
    make_rule("steady", {}, -1.75, 0.2),
)


@dataclasses.dataclass(frozen=True)
class SimConfig:
    """Generator settings; validated on construction."""

    seed: int = 0
    count: int | None = 1000
    exhaustive: bool = False
    label_noise: float = 0.0
    marginals: tuple[tuple[str, tuple[float, ...]], ...] = ()
    rules: tuple[PlantedRule, ...] = DEFAULT_RULES

    def __post_init__(self):
        if self.exhaustive:
            if self.count is not None:
                raise ConfigError("exhaustive mode does not take a sample count")
        else:
            if self.count is None or self.count < 1:
                raise ConfigError("sample count must be a positive integer")
        if not 0 <= self.label_noise < 0.5:
            raise ConfigError("label_noise must lie in [0, 0.5)")
        seen = set()
        for attr, weights in self.marginals:
            if attr not in LEVEL_DOMAINS:
                raise ConfigError(f"marginal for unknown attribute {attr!r}")
            if attr in seen:
                raise ConfigError(f"duplicate marginal for {attr!r}")
            seen.add(attr)
            dom = _domain(attr)
            if len(weights) != len(dom):
                raise ConfigError(
                    f"marginal for {attr!r} needs {len(dom)} weights, "
                    f"got {len(weights)}"
                )
            if any(w < 0 for w in weights):
                raise ConfigError(f"marginal for {attr!r} has negative weight")
            if abs(sum(weights) - 1.0) > 1e-9:
                raise ConfigError(f"marginal for {attr!r} must sum to 1")
        if not self.rules:
            raise ConfigError("at least one planted rule is required")
        names = [r.name for r in self.rules]
        if len(set(names)) != len(names):
            raise ConfigError("planted rule names must be unique")
        for r in self.rules:
            for attr, allowed in r.when:
                if attr not in RELEVANT_ATTRS:
                    raise ConfigError(
                        f"rule {r.name!r} constrains {attr!r}; only "
                        f"{RELEVANT_ATTRS} may carry planted structure"
                    )
                dom = _domain(attr)
                if not allowed or any(v not in dom for v in allowed):
                    raise ConfigError(
                        f"rule {r.name!r} allows levels outside {attr!r}'s domain"
                    )
            lo, hi = r.decel_interval
            if not (math.isfinite(lo) and math.isfinite(hi)) or r.decel_spread < 0:
                raise ConfigError(f"rule {r.name!r} has an invalid decel interval")
            if risk_label(lo) != risk_label(hi):
                raise ConfigError(
                    f"rule {r.name!r} decel interval [{lo}, {hi}] straddles "
                    "a risk-band boundary"
                )
        self._check_pattern_space()

    def _check_pattern_space(self):
        """Walk the 864 relevant patterns: every one must match a rule,
        and no clear-lane pattern (c5 = 1) may land on a rule whose
        decel can miss the braking trigger."""
        for combo in itertools.product(*(_domain(a) for a in RELEVANT_ATTRS)):
            levels = dict(zip(RELEVANT_ATTRS, combo))
            rule = next((r for r in self.rules if r.matches(levels)), None)
            if rule is None:
                raise ConfigError(
                    f"planted rules do not cover pattern {levels}; add a default rule"
                )
            if levels["c5"] == 1 and rule.decel_interval[1] > DECEL_TRIGGER:
                raise ConfigError(
                    f"rule {rule.name!r} is infeasible: it reaches clear-lane "
                    f"patterns (c5=1) but its deceleration can stay above the "
                    f"{DECEL_TRIGGER} m/s^2 trigger"
                )

    def marginal_for(self, attr: str) -> np.ndarray:
        for a, w in self.marginals:
            if a == attr:
                arr = np.asarray(w, dtype=np.float64)
                return arr / arr.sum()
        k = len(_domain(attr))
        return np.full(k, 1.0 / k)


def _open_closed(rng: np.random.Generator, lo, hi, size: int) -> np.ndarray:
    """Uniform draw over (lo, hi]: the upper edge is attainable, the
    lower is not, matching the band convention of the quantizer."""
    return hi - rng.random(size) * (np.asarray(hi) - lo)


def _first_match_index(cfg: SimConfig, levels: dict[str, np.ndarray]) -> np.ndarray:
    n = levels["c5"].shape[0]
    out = np.full(n, -1, dtype=np.int64)
    for i, rule in enumerate(cfg.rules):
        mask = out == -1
        for attr, allowed in rule.when:
            mask &= np.isin(levels[attr], allowed)
        out[mask] = i
    # config validation proved totality over the pattern space
    return out


def generate(cfg: SimConfig) -> list[RawEvent]:
    """Produce the configured event stream, deterministically in the
    seed. Draw order is fixed: levels (attribute-major), noise flips,
    deceleration, then raw fields (age, velocity, TTCs, friction)."""
    rng = np.random.default_rng(cfg.seed)
    attrs = tuple(LEVEL_DOMAINS)
    if cfg.exhaustive:
        grid = np.array(
            list(itertools.product(*(_domain(a) for a in attrs))), dtype=np.int64
        )
        levels = {a: grid[:, i] for i, a in enumerate(attrs)}
        n = grid.shape[0]
    else:
        n = cfg.count
        levels = {
            a: rng.choice(np.array(_domain(a)), size=n, p=cfg.marginal_for(a))
            for a in attrs
        }

    rule_idx = _first_match_index(cfg, levels)
    means = np.array([r.decel_mean for r in cfg.rules])
    spreads = np.array([r.decel_spread for r in cfg.rules])
    bands = np.array([int(risk_label(r.decel_mean)) for r in cfg.rules])

    target_band = bands[rule_idx]
    flip = rng.random(n) < cfg.label_noise
    hop = rng.integers(1, 3, size=n)  # 1 or 2 steps around the band cycle
    target_band = np.where(flip, (target_band + hop) % 3, target_band)

    u = rng.random(n)
    lo_r = means[rule_idx] - spreads[rule_idx]
    hi_r = means[rule_idx] + spreads[rule_idx]
    decel = lo_r + u * (hi_r - lo_r)
    band_lo = np.array([_BAND_EDGES[RiskLevel(b)][0] for b in range(3)])
    band_hi = np.array([_BAND_EDGES[RiskLevel(b)][1] for b in range(3)])
    flip_lo = band_lo[target_band]
    # flipped Low-band draws on a clear lane must still trip the
    # braking trigger, so their band shrinks to (-2, -1.5]
    flip_hi = np.where(
        (target_band == int(RiskLevel.Low)) & (levels["c5"] == 1),
        DECEL_TRIGGER,
        band_hi[target_band],
    )
    decel = np.where(flip, flip_hi - u * (flip_hi - flip_lo), decel)

    age_lo = np.array([0, 18, 31, 46, 61])[levels["c3"]]
    age_hi = np.array([0, 30, 45, 60, 75])[levels["c3"]]
    age = rng.integers(age_lo, age_hi + 1)

    vel_lo = np.array([0.0, 0.0, 40.0, 50.0, 60.0])[levels["c4"]]
    vel_hi = np.array([0.0, 40.0, 50.0, 60.0, 80.0])[levels["c4"]]
    uv = rng.random(n)
    # level 1 is [0, 40]: sample [0, 40); higher levels are (lo, hi]
    velocity = np.where(
        levels["c4"] == 1, uv * 40.0, vel_hi - uv * (vel_hi - vel_lo)
    )

    ttc_lo = np.array([0.0, 5.0, 2.0, 0.0])
    ttc_hi = np.array([0.0, 10.0, 5.0, 2.0])

    def draw_ttc(level: np.ndarray, constrain: np.ndarray | None) -> tuple:
        absent = (level == 1) & (rng.random(n) < 0.3)
        vals = _open_closed(rng, ttc_lo[level], ttc_hi[level], n)
        if constrain is not None:
            # keep strictly inside (2, 3) so the TTC trigger holds
            tight = 2.0 + 1e-9 + rng.random(n) * (1.0 - 2e-9)
            vals = np.where(constrain, tight, vals)
        return absent, vals

    need_ttc_trigger = (levels["c5"] == 2) & (decel > DECEL_TRIGGER)
    occ_absent, occ_vals = draw_ttc(levels["c5"], need_ttc_trigger)
    nb_absent, nb_vals = draw_ttc(levels["c6"], None)

    fric_lo = np.array([0.0, 0.7, 0.4, 0.0])[levels["c9"]]
    fric_w = np.array([0.0, 0.3, 0.3, 0.4])[levels["c9"]]
    friction = fric_lo + rng.random(n) * fric_w

    events = []
    for i in range(n):
        c1 = int(levels["c1"][i])
        events.append(RawEvent(
            gender=GENDERS[int(levels["c2"][i]) - 1],
            age=int(age[i]),
            acc_pedal=bool(c1 & 4),
            brake_switch=bool(c1 & 2),
            turn_indicator=bool(c1 & 1),
            ttc_occupied=None if occ_absent[i] else float(occ_vals[i]),
            ttc_neighbor=None if nb_absent[i] else float(nb_vals[i]),
            velocity=float(velocity[i]),
            road_segment=ROAD_SEGMENTS[int(levels["c7"][i]) - 1],
            traffic_flow=TRAFFIC_FLOWS[int(levels["c8"][i]) - 1],
            friction=float(friction[i]),
            decel=float(decel[i]),
        ))
    return events


def trigger_filter(events: Sequence[RawEvent]) -> list[RawEvent]:
    """Keep exactly the events meeting the near-crash trigger."""
    return [
        e for e in events
        if e.decel <= DECEL_TRIGGER
        or (e.ttc_occupied is not None and e.ttc_occupied < TTC_TRIGGER)
    ]


def consistent_closing_pair(t: float, rng: np.random.Generator) -> tuple[float, float]:
    """A (gap, closing-speed) pair whose kinematic TTC equals t; shows
    every sampled TTC value is physically realizable."""
    v_rel = 2.0 + rng.random() * 13.0
    gap = v_rel * t
    assert abs(kinematic_ttc(gap, v_rel) - t) <= 1e-9 * max(1.0, abs(t))
    return gap, v_rel


# --- TOML configuration ----------------------------------------------------

try:
    import tomllib as _toml
except ModuleNotFoundError:  # python 3.10
    import tomli as _toml

_SIM_KEYS = {"count", "exhaustive", "seed", "label_noise"}
_RULE_KEYS = {"name", "decel_mean", "decel_spread"} | set(RELEVANT_ATTRS)


def load_sim_config(path, seed_override: int | None = None) -> SimConfig:
    """Parse a generator config file.

    Layout: a [sim] table (count or exhaustive, optional seed and
    label_noise), an optional [marginals] table of per-attribute weight
    lists, and any number of [[rule]] tables (name, decel_mean,
    decel_spread, plus level lists keyed by relevant attribute).
    A seed given on the command line overrides the file's.
    """
    with open(path, "rb") as fh:
        try:
            doc = _toml.load(fh)
        except _toml.TOMLDecodeError as exc:
            raise ConfigError(f"cannot parse {path}: {exc}") from exc
    unknown = set(doc) - {"sim", "marginals", "rule"}
    if unknown:
        raise ConfigError(f"unknown config sections {sorted(unknown)}")
    sim = doc.get("sim", {})
    if not isinstance(sim, dict):
        raise ConfigError("[sim] must be a table")
    bad = set(sim) - _SIM_KEYS
    if bad:
        raise ConfigError(f"unknown [sim] keys {sorted(bad)}")
    exhaustive = bool(sim.get("exhaustive", False))
    count = sim.get("count")
    if count is None and not exhaustive:
        raise ConfigError("[sim] needs either count or exhaustive = true")
    seed = seed_override if seed_override is not None else int(sim.get("seed", 0))

    marginals = []
    for attr, weights in doc.get("marginals", {}).items():
        if not isinstance(weights, list):
            raise ConfigError(f"marginal for {attr!r} must be a list of weights")
        marginals.append((str(attr), tuple(float(w) for w in weights)))

    rule_docs = doc.get("rule", [])
    if not isinstance(rule_docs, list):
        raise ConfigError("[[rule]] must be an array of tables")
    rules = []
    for i, entry in enumerate(rule_docs):
        bad = set(entry) - _RULE_KEYS
        if bad:
            raise ConfigError(f"rule #{i + 1} has unknown keys {sorted(bad)}")
        try:
            name = str(entry["name"])
            mean = float(entry["decel_mean"])
            spread = float(entry["decel_spread"])
        except KeyError as exc:
            raise ConfigError(f"rule #{i + 1} is missing {exc.args[0]!r}") from exc
        when = {}
        for attr in RELEVANT_ATTRS:
            if attr in entry:
                levels = entry[attr]
                if not isinstance(levels, list):
                    raise ConfigError(
                        f"rule {name!r}: {attr} must be a list of levels"
                    )
                when[attr] = [int(v) for v in levels]
        rules.append(make_rule(name, when, mean, spread))

    return SimConfig(
        seed=seed,
        count=None if count is None else int(count),
        exhaustive=exhaustive,
        label_noise=float(sim.get("label_noise", 0.0)),
        marginals=tuple(marginals),
        rules=tuple(rules) if rules else DEFAULT_RULES,
    )

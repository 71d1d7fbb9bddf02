"""Belief rules extracted from a reduced decision table, the trained
model around them, and exact-match / weighted-similarity classification.
"""

from __future__ import annotations

import dataclasses
import json
import logging
from collections.abc import Iterable, Mapping, Sequence
from fractions import Fraction
from pathlib import Path

import numpy as np

from . import accel
from .decision_table import DecisionTable, partition
from .errors import CapacityError, DegenerateDataError, ModelFormatError
from .quantize import RiskLevel
from .reduct import find_all_reducts, find_reduct_greedy
from .vprs import VprsParams, beta_bound
from .weights import WeightVector, attribute_weights

log = logging.getLogger(__name__)


@dataclasses.dataclass(frozen=True)
class Rule:
    """IF antecedent THEN belief distribution over decisions.

    antecedent levels align with the model's reduct attributes; beliefs
    hold (decision code, belief) pairs sorted by code and sum to 1;
    theta is the rule weight (support fraction of the universe).
    """

    antecedent: tuple[int, ...]
    beliefs: tuple[tuple[int, float | Fraction], ...]
    theta: float | Fraction
    support: int

    def __post_init__(self):
        if not self.beliefs:
            raise ValueError("a rule needs at least one belief entry")
        codes = [c for c, _ in self.beliefs]
        if codes != sorted(set(codes)):
            raise ValueError("beliefs must be sorted by distinct decision code")
        if self.support < 1:
            raise ValueError("support must be at least 1")

    def belief_for(self, code: int) -> float:
        for c, b in self.beliefs:
            if c == code:
                return float(b)
        return 0.0

    def best_decision(self) -> int:
        """Decision code with the largest belief; ties go to the lower code."""
        best_code, best_b = self.beliefs[0]
        for c, b in self.beliefs[1:]:
            if b > best_b:
                best_code, best_b = c, b
        return best_code

    def positive_mass(self) -> float:
        """Belief mass above the lowest risk band (Moderate + High)."""
        return float(sum(b for c, b in self.beliefs if c > int(RiskLevel.Low)))


@dataclasses.dataclass(frozen=True)
class Prediction:
    decision: int
    decision_name: str
    belief: float
    matched: str  # "exact" or "similarity"
    similarity_score: float
    diagnostic_score: float
    risk_score: float


@dataclasses.dataclass(frozen=True, eq=False)
class VprsModel:
    """Trained classifier: reduct, attribute weights, level ranges and
    the belief-rule table, plus the beta the reduct was computed at."""

    beta: float
    reduct: tuple[str, ...]
    weights: WeightVector
    ranges: tuple[tuple[int, int], ...]
    rules: tuple[Rule, ...]
    decision_names: tuple[tuple[int, str], ...]

    def __post_init__(self):
        if not 0.5 < self.beta <= 1:
            raise ValueError(f"model beta must lie in (0.5, 1], got {self.beta}")
        if self.weights.attrs != self.reduct:
            raise ValueError("weight vector must be indexed by the reduct attributes")
        if len(self.ranges) != len(self.reduct):
            raise ValueError("one level range is required per reduct attribute")
        for attr, (lo, hi) in zip(self.reduct, self.ranges):
            if lo > hi:
                raise ValueError(f"range for {attr!r} has min above max")
        seen = set()
        for r in self.rules:
            if len(r.antecedent) != len(self.reduct):
                raise ValueError("rule antecedent does not cover the reduct")
            if r.antecedent in seen:
                raise ValueError(f"duplicate rule antecedent {r.antecedent}")
            seen.add(r.antecedent)
        names = dict(self.decision_names)
        for r in self.rules:
            for c, _ in r.beliefs:
                if c not in names:
                    raise ValueError(f"decision code {c} has no name entry")
        object.__setattr__(self, "_exact_index", {
            r.antecedent: i for i, r in enumerate(self.rules)
        })
        object.__setattr__(self, "_names", names)

    def name_of(self, code: int) -> str:
        return self._names[code]


def extract_rules(dt_reduced: DecisionTable) -> tuple[Rule, ...]:
    """One belief rule per condition block of the reduced table, in
    lexicographic antecedent order. Beliefs are the block's inclusion
    degrees in each decision class; theta is its support fraction."""
    if dt_reduced.n_objects == 0:
        raise ValueError("cannot extract rules from an empty table")
    n = dt_reduced.n_objects
    idx_of = {o: i for i, o in enumerate(dt_reduced.objects)}
    rules = []
    for block in partition(dt_reduced, dt_reduced.condition_attrs).blocks:
        rows = [idx_of[o] for o in block]
        antecedent = tuple(int(v) for v in dt_reduced.condition_values[rows[0]])
        counts: dict[int, int] = {}
        for r in rows:
            d = int(dt_reduced.decision_values[r])
            counts[d] = counts.get(d, 0) + 1
        beliefs = tuple(
            (code, Fraction(counts[code], len(rows))) for code in sorted(counts)
        )
        rules.append(Rule(
            antecedent=antecedent,
            beliefs=beliefs,
            theta=Fraction(len(rows), n),
            support=len(rows),
        ))
    rules.sort(key=lambda r: r.antecedent)
    return tuple(rules)


def similarity(level_i: int, level_j: int, attr_range: tuple[int, int]) -> float:
    """Per-attribute level similarity 1 - |vi - vj| / (max - min).

    A constant attribute (zero-width range) compares by equality; levels
    outside the range floor the similarity at 0.
    """
    lo, hi = attr_range
    d = abs(level_i - level_j)
    if hi == lo:
        return 1.0 if d == 0 else 0.0
    s = 1.0 - d / (hi - lo)
    return s if s > 0.0 else 0.0


def _sample_levels(model: VprsModel, sample) -> tuple[int, ...]:
    if hasattr(sample, "as_levels"):
        sample = sample.as_levels()
    if not isinstance(sample, Mapping):
        raise TypeError("sample must be a mapping of attribute -> level")
    levels = []
    for attr in model.reduct:
        if attr not in sample:
            raise ValueError(f"sample is missing reduct attribute {attr!r}")
        levels.append(int(sample[attr]))
    return tuple(levels)


def weighted_similarity(sample, rule: Rule, model: VprsModel) -> float:
    """Weight-summed per-attribute similarity of a sample to a rule
    antecedent; equals 1 exactly on identical level vectors."""
    levels = _sample_levels(model, sample)
    eps = model.weights.epsilon
    acc = 0.0
    # attribute-major accumulation, same order as the batch kernel
    for j in range(len(levels)):
        acc += eps[j] * similarity(levels[j], rule.antecedent[j], model.ranges[j])
    return acc


def _choose(model: VprsModel, scores: Sequence[float]) -> int:
    """Index of the best-scoring rule; ties go to larger theta, then to
    the earlier rule."""
    best = 0
    best_key = (scores[0], float(model.rules[0].theta))
    for i in range(1, len(scores)):
        key = (scores[i], float(model.rules[i].theta))
        if key > best_key:
            best, best_key = i, key
    return best


def _prediction(model: VprsModel, rule: Rule, matched: str,
                sim_score: float, wsum: float) -> Prediction:
    decision = rule.best_decision()
    return Prediction(
        decision=decision,
        decision_name=model.name_of(decision),
        belief=rule.belief_for(decision),
        matched=matched,
        similarity_score=sim_score,
        diagnostic_score=float(rule.theta) * wsum,
        risk_score=sim_score * rule.positive_mass(),
    )


def classify(model: VprsModel, sample) -> Prediction:
    """Classify one sample: an exact antecedent match wins outright,
    otherwise the nearest rule by weighted similarity decides."""
    if not model.rules:
        raise ValueError("model has no rules")
    levels = _sample_levels(model, sample)
    hit = model._exact_index.get(levels)
    if hit is not None:
        rule = model.rules[hit]
        wsum = weighted_similarity(dict(zip(model.reduct, levels)), rule, model)
        return _prediction(model, rule, "exact", 1.0, wsum)
    scores = [
        weighted_similarity(dict(zip(model.reduct, levels)), r, model)
        for r in model.rules
    ]
    i = _choose(model, scores)
    return _prediction(model, model.rules[i], "similarity", scores[i], scores[i])


def classify_batch(model: VprsModel, samples: Sequence) -> list[Prediction]:
    """Vectorized classify over many samples; predictions are identical
    to per-sample classify calls."""
    if not model.rules:
        raise ValueError("model has no rules")
    if not samples:
        return []
    mat = np.array([_sample_levels(model, s) for s in samples], dtype=np.int64)
    ants = np.array([r.antecedent for r in model.rules], dtype=np.int64)
    eps = np.array(model.weights.epsilon, dtype=np.float64)
    widths = np.array([hi - lo for lo, hi in model.ranges], dtype=np.int64)
    scores = accel.similarity_matrix(mat, ants, eps, widths)
    out = []
    for i in range(mat.shape[0]):
        levels = tuple(int(v) for v in mat[i])
        hit = model._exact_index.get(levels)
        if hit is not None:
            out.append(_prediction(
                model, model.rules[hit], "exact", 1.0, float(scores[i, hit])
            ))
            continue
        row = scores[i]
        j = _choose(model, row)
        out.append(_prediction(
            model, model.rules[j], "similarity", float(row[j]), float(row[j])
        ))
    return out


# --- training -------------------------------------------------------------

def _decision_name_map(dt: DecisionTable) -> tuple[tuple[int, str], ...]:
    codes = sorted(int(v) for v in set(dt.decision_values.tolist()))
    if dt.decision_attr == "risk":
        return tuple((c, RiskLevel(c).name) for c in codes)
    return tuple((c, str(c)) for c in codes)


def auto_beta(dt: DecisionTable) -> VprsParams:
    """Largest admissible beta for the full condition set, clamped into
    (0.5, 1]. Both the raw bound and any clamping are logged."""
    bound = beta_bound(dt, dt.condition_attrs)
    clamped = min(max(bound, Fraction(51, 100)), Fraction(1))
    if clamped != bound:
        log.warning("beta bound %s clamped to %s", bound, clamped)
    log.info("auto beta: bound=%s using=%s", bound, clamped)
    return VprsParams(clamped)


def train_model(
    dt: DecisionTable,
    params: VprsParams | None = None,
    exhaustive_cap: int = 16,
) -> VprsModel:
    """Full training pass: beta (auto when params is None), reduct,
    entropy weights, belief rules and level ranges."""
    if dt.n_objects == 0:
        raise ValueError("cannot train on an empty table")
    if len(set(dt.decision_values.tolist())) < 2:
        raise DegenerateDataError(
            "training data holds a single decision class; nothing to discriminate"
        )
    if params is None:
        params = auto_beta(dt)
    try:
        reducts = find_all_reducts(dt, params, cap=exhaustive_cap)
        reduct = reducts[0]  # minimal cardinality, earliest attribute order
        method = "exhaustive"
    except CapacityError:
        result = find_reduct_greedy(dt, params)
        reduct = result.attrs
        method = "greedy"
    log.info("reduct (%s): %s at beta=%s", method, reduct, params.beta)
    weights = attribute_weights(dt, reduct)
    rules = extract_rules(dt.restrict(reduct))
    ranges = tuple(
        (int(dt.column(a).min()), int(dt.column(a).max())) for a in reduct
    )
    return VprsModel(
        beta=float(params.beta),
        reduct=reduct,
        weights=weights,
        ranges=ranges,
        rules=rules,
        decision_names=_decision_name_map(dt),
    )


# --- persistence ----------------------------------------------------------

def _round12(x: float) -> float:
    # 12 significant digits: stable bytes and an idempotent round-trip
    return float(f"{float(x):.12g}")


def dumps_model(model: VprsModel) -> str:
    doc = {
        "beta": _round12(model.beta),
        "reduct": list(model.reduct),
        "weights": [_round12(e) for e in model.weights.epsilon],
        "ranges": {a: [lo, hi] for a, (lo, hi) in zip(model.reduct, model.ranges)},
        "rules": [
            {
                "antecedent": list(r.antecedent),
                "beliefs": {model.name_of(c): _round12(float(b)) for c, b in r.beliefs},
                "theta": _round12(float(r.theta)),
                "support": r.support,
            }
            for r in model.rules
        ],
    }
    return json.dumps(doc, indent=2) + "\n"


def save_model(model: VprsModel, path: str | Path) -> None:
    Path(path).write_text(dumps_model(model))


def _decision_code(name: str) -> int:
    try:
        return int(RiskLevel[name])
    except KeyError:
        pass
    try:
        return int(name)
    except ValueError:
        raise ModelFormatError(f"unknown decision name {name!r}") from None


def load_model(path: str | Path) -> VprsModel:
    """Parse and validate a model file; any structural defect raises
    ModelFormatError."""
    try:
        doc = json.loads(Path(path).read_text())
    except (OSError, json.JSONDecodeError) as exc:
        raise ModelFormatError(f"cannot parse model file {path}: {exc}") from exc
    try:
        expected = {"beta", "reduct", "weights", "ranges", "rules"}
        if set(doc) != expected:
            missing = sorted(expected - set(doc))
            extra = sorted(set(doc) - expected)
            parts = []
            if missing:
                parts.append(f"missing fields {missing}")
            if extra:
                parts.append(f"unexpected fields {extra}")
            raise ModelFormatError("model file: " + ", ".join(parts))
        reduct = tuple(str(a) for a in doc["reduct"])
        weights = WeightVector(
            attrs=reduct, epsilon=tuple(float(w) for w in doc["weights"])
        )
        if abs(sum(weights.epsilon) - 1.0) > 1e-9:
            raise ModelFormatError("weights do not sum to 1")
        ranges = tuple(
            (int(doc["ranges"][a][0]), int(doc["ranges"][a][1])) for a in reduct
        )
        rules = []
        names: dict[int, str] = {}
        for entry in doc["rules"]:
            beliefs = []
            for name, b in entry["beliefs"].items():
                code = _decision_code(name)
                names[code] = name
                beliefs.append((code, float(b)))
            beliefs.sort()
            if abs(sum(b for _, b in beliefs) - 1.0) > 1e-9:
                raise ModelFormatError("rule beliefs do not sum to 1")
            rules.append(Rule(
                antecedent=tuple(int(v) for v in entry["antecedent"]),
                beliefs=tuple(beliefs),
                theta=float(entry["theta"]),
                support=int(entry["support"]),
            ))
        return VprsModel(
            beta=float(doc["beta"]),
            reduct=reduct,
            weights=weights,
            ranges=ranges,
            rules=tuple(rules),
            decision_names=tuple(sorted(names.items())),
        )
    except ModelFormatError:
        raise
    except (KeyError, TypeError, ValueError, AttributeError) as exc:
        raise ModelFormatError(f"invalid model structure: {exc}") from exc

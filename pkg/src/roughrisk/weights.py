"""Entropy-based attribute weighting.

Attribute significance is the conditional-entropy drop an attribute
contributes inside a subset; weights are the normalized geometric means
of pairwise significance ratios.
"""

from __future__ import annotations

import dataclasses
from collections.abc import Iterable, Sequence

import numpy as np

from . import accel
from .decision_table import DecisionTable, Partition

# floor applied to significances before forming ratios (about 1e-6 bits),
# keeps weights finite when an attribute carries no information
SIG_FLOOR = 2.0 ** -20


def _entropy_from_counts(counts: np.ndarray, total: int) -> float:
    counts = np.asarray(counts, dtype=np.int64)
    nz = counts[counts > 0]
    p = nz / total
    return float(-np.sum(p * np.log2(p)))


def entropy(p: Partition, universe_size: int) -> float:
    """Shannon entropy (bits) of a partition's block-size distribution."""
    if universe_size <= 0:
        raise ValueError("universe_size must be positive")
    sizes = np.array([len(b) for b in p.blocks], dtype=np.int64)
    if int(sizes.sum()) != universe_size:
        raise ValueError("partition does not cover a universe of the given size")
    return _entropy_from_counts(sizes, universe_size)


def _contingency(dt: DecisionTable, attrs_X: Iterable[str]):
    """Blocks-by-decision count matrix, rows in first-occurrence order."""
    cols = dt.column_indices(attrs_X)
    dec_codes, n_dec = accel.factorize1d(
        np.ascontiguousarray(dt.decision_values, dtype=np.int64)
    )
    codes, n_groups = accel.row_codes(
        np.ascontiguousarray(dt.condition_values, dtype=np.int64), cols
    )
    return accel.contingency(codes, n_groups, dec_codes, n_dec)


def _decision_entropy(dt: DecisionTable) -> float:
    codes, n_dec = accel.factorize1d(
        np.ascontiguousarray(dt.decision_values, dtype=np.int64)
    )
    counts = np.bincount(codes, minlength=n_dec)
    return _entropy_from_counts(counts, dt.n_objects)


def conditional_entropy(dt: DecisionTable, attrs_X: Iterable[str]) -> float:
    """H(D | X) in bits over the table's decision attribute.

    When the contingency satisfies exact integer independence the
    decision entropy itself is returned, so H(D|X) == H(D) holds
    bit-for-bit and mutual information vanishes exactly.
    """
    if dt.n_objects == 0:
        raise ValueError("conditional entropy is undefined on an empty table")
    cont = _contingency(dt, attrs_X)
    n = dt.n_objects
    tot = cont.sum(axis=1)
    marg = cont.sum(axis=0)
    if np.array_equal(cont * n, tot[:, None] * marg[None, :]):
        return _decision_entropy(dt)
    p = cont / tot[:, None]
    terms = np.where(cont > 0, p * np.log2(np.where(cont > 0, p, 1.0)), 0.0)
    per_block = -terms.sum(axis=1)
    return float(np.sum((tot / n) * per_block))


def mutual_information(dt: DecisionTable, attrs_X: Iterable[str]) -> float:
    """I(X; D) = H(D) - H(D|X); exactly 0.0 for independent attributes."""
    return _decision_entropy(dt) - conditional_entropy(dt, attrs_X)


def significance(dt: DecisionTable, attr: str, attrs_X: Iterable[str]) -> float:
    """|H(D | X without attr) - H(D | X)|: the entropy contribution of
    attr inside the subset X (which must contain it)."""
    names = set(attrs_X)
    if attr not in names:
        raise ValueError(f"attribute {attr!r} is not in the evaluated subset")
    rest = names - {attr}
    return abs(conditional_entropy(dt, rest) - conditional_entropy(dt, names))


def weights_from_significance(sig: Sequence[float]) -> np.ndarray:
    """Normalized geometric-mean-ratio weights for raw significances.

    Each value is floored at SIG_FLOOR, then weighted by the geometric
    mean of its ratios against every value in the vector; the result is
    normalized to sum to 1 and is invariant under uniform rescaling.
    """
    s = np.maximum(np.asarray(sig, dtype=np.float64), SIG_FLOOR)
    if s.ndim != 1 or s.size == 0:
        raise ValueError("significance vector must be non-empty")
    k = s.size
    omega = np.array([np.prod(s[i] / s) ** (1.0 / k) for i in range(k)])
    return omega / omega.sum()


@dataclasses.dataclass(frozen=True)
class WeightVector:
    """Normalized attribute weights aligned with their attribute names."""

    attrs: tuple[str, ...]
    epsilon: tuple[float, ...]

    def __post_init__(self):
        if len(self.attrs) != len(self.epsilon):
            raise ValueError("weights and attributes must align")
        if any(e <= 0 for e in self.epsilon):
            raise ValueError("weights must be strictly positive")

    def as_dict(self) -> dict[str, float]:
        return dict(zip(self.attrs, self.epsilon))


def attribute_weights(dt: DecisionTable, attrs_B: Iterable[str]) -> WeightVector:
    """Entropy-significance weights for the attributes of a reduct B,
    evaluated within B itself."""
    names = tuple(dt.condition_attrs[i] for i in dt.column_indices(attrs_B))
    if not names:
        raise ValueError("cannot weight an empty attribute set")
    sig = [significance(dt, a, names) for a in names]
    eps = weights_from_significance(sig)
    return WeightVector(attrs=names, epsilon=tuple(float(e) for e in eps))

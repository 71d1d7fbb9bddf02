"""Beta-reduct search: minimal attribute subsets preserving the
classification quality of the full condition set.
"""

from __future__ import annotations

import dataclasses
import itertools
from collections.abc import Iterable
from fractions import Fraction

from .decision_table import DecisionTable
from .errors import CapacityError
from .vprs import QualityContext, VprsParams

EXHAUSTIVE_CAP = 16


@dataclasses.dataclass(frozen=True)
class ReductResult:
    """A reduct with the quality it preserves and how it was found."""

    attrs: tuple[str, ...]
    beta: Fraction
    quality: Fraction
    method: str


class _Memo:
    def __init__(self, dt: DecisionTable, params: VprsParams):
        self.ctx = QualityContext(dt, params)
        self.cache: dict[tuple[int, ...], Fraction] = {}

    def gamma(self, cols: tuple[int, ...]) -> Fraction:
        got = self.cache.get(cols)
        if got is None:
            got = self.ctx.gamma_cols(cols)
            self.cache[cols] = got
        return got


def is_beta_reduct(
    dt: DecisionTable, subset: Iterable[str], params: VprsParams
) -> bool:
    """True when subset preserves full-table quality and every proper
    subset (the empty set included) falls strictly below it."""
    cols = dt.column_indices(subset)
    if not cols:
        raise ValueError("a reduct candidate must contain at least one attribute")
    memo = _Memo(dt, params)
    target = memo.gamma(tuple(range(len(dt.condition_attrs))))
    if memo.gamma(cols) != target:
        return False
    for k in range(len(cols)):
        for sub in itertools.combinations(cols, k):
            if memo.gamma(sub) >= target:
                return False
    return True


def find_all_reducts(
    dt: DecisionTable, params: VprsParams, cap: int = EXHAUSTIVE_CAP
) -> tuple[tuple[str, ...], ...]:
    """All inclusion-minimal non-empty subsets matching full-table quality.

    Enumerates subsets by increasing cardinality and prunes supersets of
    accepted reducts, so the result is an antichain ordered by
    (cardinality, attribute order). Tables wider than cap are refused;
    use find_reduct_greedy there.
    """
    m = len(dt.condition_attrs)
    if m > cap:
        raise CapacityError(
            f"exhaustive reduct search over {m} attributes exceeds cap={cap}; "
            "use find_reduct_greedy instead"
        )
    memo = _Memo(dt, params)
    target = memo.gamma(tuple(range(m)))
    found: list[tuple[int, ...]] = []
    for k in range(1, m + 1):
        for combo in itertools.combinations(range(m), k):
            chosen = set(combo)
            if any(set(f) <= chosen for f in found):
                continue
            if memo.gamma(combo) == target:
                found.append(combo)
    return tuple(tuple(dt.condition_attrs[i] for i in combo) for combo in found)


def find_reduct_greedy(dt: DecisionTable, params: VprsParams) -> ReductResult:
    """Forward selection by largest quality gain (ties to the earlier
    column), then a backward prune dropping attributes whose removal
    leaves the quality unchanged."""
    m = len(dt.condition_attrs)
    memo = _Memo(dt, params)
    target = memo.gamma(tuple(range(m)))
    current: list[int] = []
    while memo.gamma(tuple(sorted(current))) != target:
        best_i = -1
        best_q: Fraction | None = None
        for i in range(m):
            if i in current:
                continue
            q = memo.gamma(tuple(sorted(current + [i])))
            if best_q is None or q > best_q:
                best_i, best_q = i, q
        current.append(best_i)
    for i in sorted(current, reverse=True):
        trimmed = tuple(sorted(c for c in current if c != i))
        if memo.gamma(trimmed) == target:
            current.remove(i)
    attrs = tuple(dt.condition_attrs[i] for i in sorted(current))
    return ReductResult(attrs=attrs, beta=params.beta, quality=target, method="greedy")

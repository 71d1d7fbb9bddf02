"""Variable precision rough set approximations.

The majority-inclusion threshold beta lives in (0.5, 1]; beta = 1
recovers the classical model. All threshold comparisons are carried out
in exact integer arithmetic so block membership never depends on float
rounding.
"""

from __future__ import annotations

import dataclasses
from collections.abc import Iterable
from fractions import Fraction

import numpy as np

from . import accel
from .decision_table import DecisionTable, partition


def as_beta(value) -> Fraction:
    """Coerce a user-supplied beta to an exact Fraction.

    Floats go through their shortest decimal repr, so as_beta(0.6)
    means 3/5 rather than the nearest binary64. Pass a Fraction or a
    string to control the value exactly.
    """
    if isinstance(value, Fraction):
        return value
    if isinstance(value, int):
        return Fraction(value)
    if isinstance(value, float):
        return Fraction(repr(value))
    if isinstance(value, str):
        return Fraction(value)
    raise TypeError(f"cannot interpret {value!r} as a beta threshold")


@dataclasses.dataclass(frozen=True)
class VprsParams:
    """Precision threshold for the variable precision model."""

    beta: Fraction

    def __post_init__(self):
        b = as_beta(self.beta)
        if not Fraction(1, 2) < b <= 1:
            raise ValueError(f"beta must lie in (1/2, 1], got {b}")
        object.__setattr__(self, "beta", b)


def lower_approx(
    dt: DecisionTable, attrs: Iterable[str], dec_value: int, params: VprsParams
) -> frozenset[str]:
    """Objects whose condition block falls into the decision class with
    inclusion degree at least beta."""
    cls = dt.decision_class(dec_value)
    out: set[str] = set()
    for block in partition(dt, attrs).blocks:
        inside = sum(1 for o in block if o in cls)
        # degree >= beta, compared exactly: inside/|block| >= num/den
        if inside * params.beta.denominator >= params.beta.numerator * len(block):
            out.update(block)
    return frozenset(out)


def upper_approx(
    dt: DecisionTable, attrs: Iterable[str], dec_value: int, params: VprsParams
) -> frozenset[str]:
    """Objects whose condition block meets the decision class with
    inclusion degree strictly above 1 - beta."""
    cls = dt.decision_class(dec_value)
    one_minus = 1 - params.beta
    out: set[str] = set()
    for block in partition(dt, attrs).blocks:
        inside = sum(1 for o in block if o in cls)
        if inside * one_minus.denominator > one_minus.numerator * len(block):
            out.update(block)
    return frozenset(out)


class QualityContext:
    """Reusable state for evaluating classification quality over many
    attribute subsets of one table at one beta.

    Precomputes the decision coding and the exact integer thresholds
    ceil(beta * t) for every possible block size t, so each subset costs
    one row-grouping pass plus one contingency scan.
    """

    def __init__(self, dt: DecisionTable, params: VprsParams):
        if dt.n_objects == 0:
            raise ValueError("classification quality is undefined on an empty table")
        self.dt = dt
        self.params = params
        self.n = dt.n_objects
        self.cond = np.ascontiguousarray(dt.condition_values, dtype=np.int64)
        self.dec_codes, self.n_dec = accel.factorize1d(
            np.ascontiguousarray(dt.decision_values, dtype=np.int64)
        )
        num, den = params.beta.numerator, params.beta.denominator
        # exact ceil(beta * t); python ints here, values fit int64 since t <= n
        self.thresholds = np.array(
            [(num * t + den - 1) // den for t in range(self.n + 1)], dtype=np.int64
        )

    def gamma_cols(self, cols: tuple[int, ...]) -> Fraction:
        codes, n_groups = accel.row_codes(self.cond, cols)
        cont = accel.contingency(codes, n_groups, self.dec_codes, self.n_dec)
        return Fraction(int(accel.quality_numerator(cont, self.thresholds)), self.n)


def classification_quality(
    dt: DecisionTable, attrs: Iterable[str], params: VprsParams
) -> Fraction:
    """gamma^beta: the fraction of objects inside some beta-lower
    approximation under the given condition attributes."""
    ctx = QualityContext(dt, params)
    return ctx.gamma_cols(dt.column_indices(attrs))


def beta_bound(dt: DecisionTable, attrs: Iterable[str]) -> Fraction:
    """Largest admissible beta for which the given attributes classify
    every block the same way as majority vote: min over blocks of
    1 - max{degree < 1/2} and min{degree > 1/2}, each defaulting to 1.

    Exact: candidate degrees are distinct rationals with denominators
    at most n, so for n below ~6.7e7 their float images are distinct
    and an argmin/argmax over floats identifies the exact extremum.
    """
    if dt.n_objects == 0:
        raise ValueError("beta bound is undefined on an empty table")
    cols = dt.column_indices(attrs)
    cond = np.ascontiguousarray(dt.condition_values, dtype=np.int64)
    dec_codes, n_dec = accel.factorize1d(
        np.ascontiguousarray(dt.decision_values, dtype=np.int64)
    )
    codes, n_groups = accel.row_codes(cond, cols)
    cont = accel.contingency(codes, n_groups, dec_codes, n_dec)
    tot = cont.sum(axis=1)
    deg = cont / tot[:, None]
    below = 2 * cont < tot[:, None]
    above = 2 * cont > tot[:, None]
    m1 = Fraction(1)
    if below.any():
        flat = np.where(below, deg, -np.inf).argmax()
        g, j = divmod(int(flat), cont.shape[1])
        m1 = 1 - Fraction(int(cont[g, j]), int(tot[g]))
    m2 = Fraction(1)
    if above.any():
        flat = np.where(above, deg, np.inf).argmin()
        g, j = divmod(int(flat), cont.shape[1])
        m2 = Fraction(int(cont[g, j]), int(tot[g]))
    return min(m1, m2)

"""Decision tables: finite universes of objects described by integer-coded
condition attributes plus one decision attribute, with the partition and
inclusion-degree operations everything else is built on.
"""

from __future__ import annotations

import dataclasses
from collections.abc import Iterable, Sequence, Set
from fractions import Fraction

import numpy as np

from . import accel


@dataclasses.dataclass(frozen=True, eq=False)
class DecisionTable:
    """Immutable decision table.

    condition_values has one row per object and one column per condition
    attribute; decision_values is the decision column. All levels are
    non-negative integer codes.
    """

    objects: tuple[str, ...]
    condition_attrs: tuple[str, ...]
    decision_attr: str
    condition_values: np.ndarray
    decision_values: np.ndarray

    def __post_init__(self):
        objects = tuple(str(o) for o in self.objects)
        cond_attrs = tuple(str(a) for a in self.condition_attrs)
        if not objects:
            raise ValueError("a decision table needs at least one object")
        if len(set(objects)) != len(objects):
            raise ValueError("object identifiers must be unique")
        if len(set(cond_attrs)) != len(cond_attrs):
            raise ValueError("condition attribute identifiers must be unique")
        if self.decision_attr in cond_attrs:
            raise ValueError(
                f"decision attribute {self.decision_attr!r} also appears as a condition"
            )
        cond = np.array(self.condition_values, dtype=np.int64, ndmin=2)
        dec = np.asarray(self.decision_values, dtype=np.int64).reshape(-1)
        if cond.shape != (len(objects), len(cond_attrs)):
            raise ValueError(
                f"condition values have shape {cond.shape}, "
                f"expected {(len(objects), len(cond_attrs))}"
            )
        if dec.shape[0] != len(objects):
            raise ValueError("decision column length does not match object count")
        if (cond.size and cond.min() < 0) or (dec.size and dec.min() < 0):
            raise ValueError("attribute levels must be non-negative integers")
        cond = cond.copy()
        dec = dec.copy()
        cond.setflags(write=False)
        dec.setflags(write=False)
        object.__setattr__(self, "objects", objects)
        object.__setattr__(self, "condition_attrs", cond_attrs)
        object.__setattr__(self, "condition_values", cond)
        object.__setattr__(self, "decision_values", dec)
        object.__setattr__(self, "_attr_index", {a: i for i, a in enumerate(cond_attrs)})
        object.__setattr__(self, "_obj_index", {o: i for i, o in enumerate(objects)})

    @property
    def n_objects(self) -> int:
        return len(self.objects)

    def column(self, attr: str) -> np.ndarray:
        """Values of one attribute (condition or decision) over all objects."""
        if attr == self.decision_attr:
            return self.decision_values
        idx = self._attr_index.get(attr)
        if idx is None:
            raise ValueError(f"unknown attribute {attr!r}")
        return self.condition_values[:, idx]

    def column_indices(self, attrs: Iterable[str]) -> tuple[int, ...]:
        """Positions of condition attributes, kept in table column order."""
        wanted = set()
        for a in attrs:
            if a not in self._attr_index:
                raise ValueError(f"unknown condition attribute {a!r}")
            wanted.add(a)
        return tuple(i for i, a in enumerate(self.condition_attrs) if a in wanted)

    def level(self, obj: str, attr: str) -> int:
        idx = self._obj_index.get(obj)
        if idx is None:
            raise ValueError(f"unknown object {obj!r}")
        return int(self.column(attr)[idx])

    def restrict(self, attrs: Sequence[str]) -> "DecisionTable":
        """A copy keeping only the given condition attributes (table order)."""
        cols = self.column_indices(attrs)
        return DecisionTable(
            objects=self.objects,
            condition_attrs=tuple(self.condition_attrs[i] for i in cols),
            decision_attr=self.decision_attr,
            condition_values=self.condition_values[:, cols],
            decision_values=self.decision_values,
        )

    def decision_class(self, dec_value: int) -> frozenset[str]:
        """Objects whose decision equals dec_value (may be empty)."""
        mask = self.decision_values == int(dec_value)
        return frozenset(self.objects[i] for i in np.flatnonzero(mask))


@dataclasses.dataclass(frozen=True)
class Partition:
    """Blocks of the universe induced by a set of attributes.

    Blocks are ordered by the smallest object index they contain and
    each block lists its members in object order, so the layout is a
    pure function of the table content.
    """

    blocks: tuple[tuple[str, ...], ...]
    source_attrs: tuple[str, ...]

    def block_sets(self) -> tuple[frozenset[str], ...]:
        return tuple(frozenset(b) for b in self.blocks)


def partition(dt: DecisionTable, attrs: Iterable[str]) -> Partition:
    """Partition dt's objects by equal values on the given attributes.

    attrs may include the decision attribute; an empty selection yields
    the single-block partition.
    """
    if dt.n_objects == 0:
        raise ValueError("cannot partition an empty table")
    names = _canonical_attrs(dt, attrs)
    if names:
        mat = np.column_stack([dt.column(a) for a in names]).astype(np.int64)
        codes, n_groups = accel.row_codes(mat, tuple(range(len(names))))
    else:
        codes = np.zeros(dt.n_objects, dtype=np.int64)
        n_groups = 1
    members: list[list[str]] = [[] for _ in range(n_groups)]
    for i, c in enumerate(codes):
        members[c].append(dt.objects[i])
    return Partition(
        blocks=tuple(tuple(b) for b in members),
        source_attrs=names,
    )


def _canonical_attrs(dt: DecisionTable, attrs: Iterable[str]) -> tuple[str, ...]:
    """Validate attrs and return them deduplicated in table order
    (conditions first, then the decision attribute if selected)."""
    seen = set()
    for a in attrs:
        if a != dt.decision_attr and a not in dt._attr_index:
            raise ValueError(f"unknown attribute {a!r}")
        seen.add(a)
    ordered = [a for a in dt.condition_attrs if a in seen]
    if dt.decision_attr in seen:
        ordered.append(dt.decision_attr)
    return tuple(ordered)


def inclusion_degree(cond_block: Iterable[str], dec_block: Iterable[str]) -> Fraction:
    """Fraction of cond_block's objects that fall inside dec_block.

    Exact rational; the empty cond_block is rejected because the degree
    is undefined there.
    """
    cond = cond_block if isinstance(cond_block, (set, frozenset, Set)) else set(cond_block)
    dec = dec_block if isinstance(dec_block, (set, frozenset, Set)) else set(dec_block)
    if not cond:
        raise ValueError("inclusion degree is undefined for an empty condition block")
    return Fraction(len(cond & dec), len(cond))

"""Finite orthomodular lattices.

A :class:`FiniteOml` is built from raw data (element names, order pairs, an
orthocomplement map and the two bounds) by :func:`validate_oml`, which checks
every ortholattice law plus the orthomodular law and then freezes meet, join,
orthocomplement, Sasaki projection and compatibility into dense tables.

Elements are referred to by name at the public surface and interned to dense
indices ``0..n-1`` internally.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Mapping, Sequence

import numpy as np


class OmlError(Exception):
    """Base class for errors raised by this module."""


class ForeignElement(OmlError, KeyError):
    """An element name that does not belong to the lattice."""

    def __init__(self, name):
        super().__init__(name)
        self.name = name

    def __str__(self):
        return f"element {self.name!r} is not in the lattice"


class LatticeFormatError(OmlError, ValueError):
    """Raw lattice data is syntactically malformed (duplicate names,
    non-total ortho map, unknown names in order pairs, ...)."""


class OmlValidationError(OmlError):
    """Raw data is well formed but violates a lattice law.

    Attributes
    ----------
    law : str
        Name of the first violated law.
    witnesses : tuple of str
        Element names exhibiting the violation.
    """

    kind = "ValidationError"

    def __init__(self, law: str, witnesses: Sequence[str]):
        self.law = law
        self.witnesses = tuple(witnesses)
        super().__init__(f"{self.kind}: {law} fails at {', '.join(self.witnesses)}")


class NotAPoset(OmlValidationError):
    kind = "NotAPoset"


class NotALattice(OmlValidationError):
    kind = "NotALattice"


class OrthoLawViolation(OmlValidationError):
    kind = "OrthoLawViolation"


class OrthomodularityViolation(OmlValidationError):
    kind = "OrthomodularityViolation"

    def __init__(self, x: str, y: str):
        super().__init__("orthomodular law", (x, y))
        self.x, self.y = x, y


@dataclass(frozen=True)
class RawOml:
    """Unvalidated lattice data, as read from a lattice document."""

    elements: tuple[str, ...]
    leq: tuple[tuple[str, str], ...]
    ortho: Mapping[str, str]
    bottom: str
    top: str

    @classmethod
    def from_dict(cls, doc: Mapping) -> "RawOml":
        try:
            elements = tuple(doc["elements"])
            leq = tuple((p[0], p[1]) for p in doc["leq"])
            ortho = dict(doc["ortho"])
            bottom, top = doc["bottom"], doc["top"]
        except (KeyError, TypeError, IndexError) as exc:
            raise LatticeFormatError(f"malformed lattice document: {exc!r}") from exc
        if any(len(p) != 2 for p in doc["leq"]):
            raise LatticeFormatError("every leq entry must be a pair")
        return cls(elements, leq, ortho, bottom, top)


def _check_syntax(raw: RawOml) -> dict[str, int]:
    if not raw.elements:
        raise LatticeFormatError("empty element list")
    index: dict[str, int] = {}
    for name in raw.elements:
        if not isinstance(name, str):
            raise LatticeFormatError(f"element names must be strings, got {name!r}")
        if name in index:
            raise LatticeFormatError(f"duplicate element name {name!r}")
        index[name] = len(index)
    for bound in (raw.bottom, raw.top):
        if bound not in index:
            raise LatticeFormatError(f"bound {bound!r} is not an element")
    for x, y in raw.leq:
        for name in (x, y):
            if name not in index:
                raise LatticeFormatError(f"leq pair mentions unknown element {name!r}")
    for key, value in raw.ortho.items():
        if key not in index or value not in index:
            raise LatticeFormatError(f"ortho entry {key!r}: {value!r} mentions an unknown element")
    missing = [x for x in raw.elements if x not in raw.ortho]
    if missing:
        raise LatticeFormatError(f"ortho map is not total; missing {missing[0]!r}")
    return index


def _transitive_closure(rel: np.ndarray) -> np.ndarray:
    rel = rel | np.eye(len(rel), dtype=bool)
    for k in range(len(rel)):
        rel |= np.outer(rel[:, k], rel[k, :])
    return rel


def _bits(mask: int) -> list[int]:
    out = []
    i = 0
    while mask:
        if mask & 1:
            out.append(i)
        mask >>= 1
        i += 1
    return out


class FiniteOml:
    """A validated finite orthomodular lattice.

    Do not construct directly; use :func:`validate_oml`. Instances are
    immutable and all tables are read-only numpy arrays indexed by the dense
    element index.
    """

    def __init__(self, names, leq, meet, join, ortho, bottom, top):
        self.names: tuple[str, ...] = tuple(names)
        self.index: dict[str, int] = {x: i for i, x in enumerate(self.names)}
        self.leq_table = leq
        self.meet_table = meet
        self.join_table = join
        self.ortho_table = ortho
        self.bottom_index = bottom
        self.top_index = top
        n = len(self.names)
        self.up_masks = tuple(sum(1 << j for j in range(n) if leq[i, j]) for i in range(n))
        self.down_masks = tuple(sum(1 << j for j in range(n) if leq[j, i]) for i in range(n))
        xs = np.arange(n)[:, None]
        ys = np.arange(n)[None, :]
        # x & y = y ^ (x v y')
        self.sasaki_table = meet[ys, join[xs, ortho[ys]]]
        # x C y  iff  x = (x ^ y) v (x ^ y')
        self.compatible_table = join[meet[xs, ys], meet[xs, ortho[ys]]] == xs
        for table in (leq, meet, join, ortho, self.sasaki_table, self.compatible_table):
            table.setflags(write=False)

    def __len__(self):
        return len(self.names)

    def __iter__(self):
        return iter(self.names)

    def __contains__(self, name):
        return name in self.index

    def __repr__(self):
        return f"FiniteOml({len(self)} elements, bottom={self.bottom!r}, top={self.top!r})"

    @property
    def full_mask(self) -> int:
        return (1 << len(self.names)) - 1

    @property
    def bottom(self) -> str:
        return self.names[self.bottom_index]

    @property
    def top(self) -> str:
        return self.names[self.top_index]

    def idx(self, name: str) -> int:
        try:
            return self.index[name]
        except (KeyError, TypeError):
            raise ForeignElement(name) from None

    def mask_names(self, mask: int) -> list[str]:
        return [self.names[i] for i in _bits(mask)]

    def names_mask(self, names: Iterable[str]) -> int:
        mask = 0
        for x in names:
            mask |= 1 << self.idx(x)
        return mask

    def leq(self, x: str, y: str) -> bool:
        return bool(self.leq_table[self.idx(x), self.idx(y)])

    def meet(self, x: str, y: str) -> str:
        return self.names[self.meet_table[self.idx(x), self.idx(y)]]

    def join(self, x: str, y: str) -> str:
        return self.names[self.join_table[self.idx(x), self.idx(y)]]

    def ortho(self, x: str) -> str:
        return self.names[self.ortho_table[self.idx(x)]]

    def sasaki(self, x: str, y: str) -> str:
        """Sasaki projection ``x & y = y ^ (x v y')``."""
        return self.names[self.sasaki_table[self.idx(x), self.idx(y)]]

    def compatible(self, x: str, y: str) -> bool:
        return bool(self.compatible_table[self.idx(x), self.idx(y)])

    def orthogonal(self, x: str, y: str) -> bool:
        """``x`` is orthogonal to ``y``, i.e. ``x <= y'``."""
        return bool(self.leq_table[self.idx(x), self.ortho_table[self.idx(y)]])

    def atoms(self) -> list[str]:
        """Elements covering the bottom."""
        b = self.bottom_index
        n = len(self)
        return [
            self.names[i]
            for i in range(n)
            if i != b and bin(self.down_masks[i]).count("1") == 2
        ]

    def to_dict(self) -> dict:
        """Lattice document with the covering relation as ``leq``."""
        n = len(self)
        covers = []
        for i in range(n):
            for j in range(n):
                if i == j or not self.leq_table[i, j]:
                    continue
                between = self.up_masks[i] & self.down_masks[j]
                if between == (1 << i) | (1 << j):
                    covers.append([self.names[i], self.names[j]])
        return {
            "elements": list(self.names),
            "leq": covers,
            "ortho": {x: self.names[self.ortho_table[i]] for i, x in enumerate(self.names)},
            "bottom": self.bottom,
            "top": self.top,
        }


def validate_oml(raw: RawOml | Mapping) -> FiniteOml:
    """Validate raw lattice data and build a :class:`FiniteOml`.

    The order relation is closed reflexively and transitively before any
    check. Laws are checked in a fixed order (poset, bounds, lattice,
    ortho laws, orthomodularity) and the first violation raises, carrying
    the witnessing element names.

    Raises
    ------
    LatticeFormatError
        Duplicate names, unknown names, non-total ortho map.
    NotAPoset, NotALattice, OrthoLawViolation, OrthomodularityViolation
        The first violated law, with witnesses.
    """
    if not isinstance(raw, RawOml):
        raw = RawOml.from_dict(raw)
    index = _check_syntax(raw)
    names = raw.elements
    n = len(names)

    rel = np.zeros((n, n), dtype=bool)
    for x, y in raw.leq:
        rel[index[x], index[y]] = True
    leq = _transitive_closure(rel)

    for i in range(n):
        for j in range(i + 1, n):
            if leq[i, j] and leq[j, i]:
                raise NotAPoset("antisymmetry", (names[i], names[j]))
    bot, top = index[raw.bottom], index[raw.top]
    for i in range(n):
        if not leq[bot, i]:
            raise NotAPoset("bottom is least", (raw.bottom, names[i]))
        if not leq[i, top]:
            raise NotAPoset("top is greatest", (names[i], raw.top))

    up = [sum(1 << j for j in range(n) if leq[i, j]) for i in range(n)]
    down = [sum(1 << j for j in range(n) if leq[j, i]) for i in range(n)]
    # a set of lower bounds has a greatest element k iff it equals down(k)
    by_down = {m: k for k, m in enumerate(down)}
    by_up = {m: k for k, m in enumerate(up)}
    meet = np.empty((n, n), dtype=np.intp)
    join = np.empty((n, n), dtype=np.intp)
    for i in range(n):
        for j in range(i, n):
            m = by_down.get(down[i] & down[j])
            if m is None:
                raise NotALattice("meet exists", (names[i], names[j]))
            jn = by_up.get(up[i] & up[j])
            if jn is None:
                raise NotALattice("join exists", (names[i], names[j]))
            meet[i, j] = meet[j, i] = m
            join[i, j] = join[j, i] = jn

    ortho = np.array([index[raw.ortho[x]] for x in names], dtype=np.intp)
    for i in range(n):
        if ortho[ortho[i]] != i:
            raise OrthoLawViolation("involution", (names[i],))
    for i in range(n):
        for j in range(n):
            if leq[i, j] and not leq[ortho[j], ortho[i]]:
                raise OrthoLawViolation("order-reversing", (names[i], names[j]))
    for i in range(n):
        if meet[i, ortho[i]] != bot or join[i, ortho[i]] != top:
            raise OrthoLawViolation("complement", (names[i],))

    for i in range(n):
        for j in range(n):
            if leq[i, j] and join[i, meet[j, ortho[i]]] != j:
                raise OrthomodularityViolation(names[i], names[j])

    return FiniteOml(names, leq, meet, join, ortho, bot, top)

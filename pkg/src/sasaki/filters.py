"""Upward-closed sets, Sasaki filters and pre-valuations on a finite OML.

Subsets are stored as integer bitmasks over the lattice's dense element
indices, so union and intersection are ``|`` and ``&``.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Iterator, Mapping

from .oml import FiniteOml, OmlError, _bits

DEFAULT_MAX_ELEMENTS = 24


class TooLarge(OmlError):
    def __init__(self, size: int, bound: int):
        super().__init__(f"lattice has {size} elements; enumeration bound is {bound}")
        self.size, self.bound = size, bound


class NotUpwardClosed(OmlError, ValueError):
    pass


class NotProper(OmlError, ValueError):
    pass


class NotAPreValuation(OmlError, ValueError):
    pass


@dataclass(frozen=True, eq=False)
class UpSet:
    """An upward-closed subset of ``lattice``.

    Equality is by value: same lattice object, same members.
    """

    lattice: FiniteOml
    mask: int

    def __post_init__(self):
        L = self.lattice
        for i in _bits(self.mask):
            if L.up_masks[i] & ~self.mask:
                raise NotUpwardClosed(f"{L.names[i]!r} is a member but not everything above it is")

    @property
    def members(self) -> list[str]:
        return self.lattice.mask_names(self.mask)

    def __contains__(self, name: str) -> bool:
        return bool(self.mask >> self.lattice.idx(name) & 1)

    def __len__(self) -> int:
        return bin(self.mask).count("1")

    def __iter__(self):
        return iter(self.members)

    def __eq__(self, other):
        if not isinstance(other, UpSet):
            return NotImplemented
        return self.lattice is other.lattice and self.mask == other.mask

    def __hash__(self):
        return hash((id(self.lattice), self.mask))

    def __le__(self, other: "UpSet") -> bool:
        return self.mask & ~other.mask == 0

    def __or__(self, other: "UpSet") -> "UpSet":
        return UpSet(self.lattice, self.mask | other.mask)

    def __and__(self, other: "UpSet") -> "UpSet":
        return UpSet(self.lattice, self.mask & other.mask)

    def __repr__(self):
        return "{" + ", ".join(self.members) + "}"


class SasakiFilter(UpSet):
    """An upset closed under the Sasaki projection (checked on construction)."""

    def __post_init__(self):
        super().__post_init__()
        if not is_sasaki_filter(self):
            x, y = _first_escape(self)
            raise OmlError(f"not a Sasaki filter: {x} & {y} escapes")

    @property
    def proper(self) -> bool:
        return is_proper(self)


def up(L: FiniteOml, x: str) -> UpSet:
    """Principal upset ``{y : x <= y}``."""
    return UpSet(L, L.up_masks[L.idx(x)])


def generated(L: FiniteOml, names: Iterable[str]) -> UpSet:
    """Union of the principal upsets of ``names``."""
    mask = 0
    for x in names:
        mask |= L.up_masks[L.idx(x)]
    return UpSet(L, mask)


def _first_escape(S: UpSet):
    L = S.lattice
    members = _bits(S.mask)
    for x in members:
        for y in members:
            if not S.mask >> int(L.sasaki_table[x, y]) & 1:
                return L.names[x], L.names[y]
    return None


def is_sasaki_filter(S: UpSet) -> bool:
    return _first_escape(S) is None


def is_proper(S: UpSet) -> bool:
    return S.mask != 0 and S.mask != S.lattice.full_mask


def is_stable_under_compatible_meets(S: UpSet) -> bool:
    L = S.lattice
    members = _bits(S.mask)
    return all(
        S.mask >> int(L.meet_table[x, y]) & 1
        for x in members
        for y in members
        if L.compatible_table[x, y]
    )


def sasaki_step(S: UpSet) -> UpSet:
    """One application of the lifted Sasaki operator: the union of
    ``(x & y)`` upsets over all ordered pairs of members."""
    L = S.lattice
    members = _bits(S.mask)
    images = {int(L.sasaki_table[x, y]) for x in members for y in members}
    mask = 0
    for z in images:
        mask |= L.up_masks[z]
    return UpSet(L, mask)


def closure_chain(S: UpSet) -> list[UpSet]:
    """Iterates ``S, step(S), step(step(S)), ...`` up to and including the
    first fixpoint."""
    chain = [S]
    while True:
        nxt = sasaki_step(chain[-1])
        if nxt.mask == chain[-1].mask:
            return chain
        chain.append(nxt)


def sasaki_closure(S: UpSet) -> SasakiFilter:
    """Least Sasaki filter containing ``S``, by iterating :func:`sasaki_step`."""
    return SasakiFilter(S.lattice, closure_chain(S)[-1].mask)


def _guard(L: FiniteOml, max_elements: int | None):
    bound = DEFAULT_MAX_ELEMENTS if max_elements is None else max_elements
    if len(L) > bound:
        raise TooLarge(len(L), bound)


def _upset_masks(L: FiniteOml) -> Iterator[int]:
    # top-down linear extension; including x forces up(x), excluding forces down(x)
    order = sorted(range(len(L)), key=lambda i: (bin(L.up_masks[i]).count("1"), i))
    n = len(order)

    def rec(k, inc, exc):
        while k < n and ((inc | exc) >> order[k]) & 1:
            k += 1
        if k == n:
            yield inc
            return
        x = order[k]
        yield from rec(k + 1, inc, exc | L.down_masks[x])
        yield from rec(k + 1, inc | L.up_masks[x], exc)

    yield from rec(0, 0, 0)


def enumerate_upsets(L: FiniteOml, max_elements: int | None = None) -> Iterator[UpSet]:
    """Every upward-closed subset of ``L`` exactly once, in a fixed order.

    Raises :class:`TooLarge` if ``L`` has more than ``max_elements``
    elements (default 24).
    """
    _guard(L, max_elements)
    for mask in _upset_masks(L):
        yield UpSet(L, mask)


def enumerate_sasaki_filters(L: FiniteOml, max_elements: int | None = None) -> Iterator[SasakiFilter]:
    for S in enumerate_upsets(L, max_elements):
        if is_sasaki_filter(S):
            yield SasakiFilter(L, S.mask)


@dataclass(frozen=True)
class PreValuation:
    """A total 0/1 labelling of a lattice, ``values[i]`` for element index ``i``."""

    lattice: FiniteOml
    values: tuple[int, ...]

    def __post_init__(self):
        if len(self.values) != len(self.lattice) or any(v not in (0, 1) for v in self.values):
            raise ValueError("values must be a 0/1 entry for every element")

    @classmethod
    def from_mapping(cls, L: FiniteOml, mapping: Mapping[str, int]) -> "PreValuation":
        values = [0] * len(L)
        for name, v in mapping.items():
            values[L.idx(name)] = v
        missing = [x for x in L.names if x not in mapping]
        if missing:
            raise ValueError(f"labelling is not total; missing {missing[0]!r}")
        return cls(L, tuple(values))

    @classmethod
    def indicator(cls, L: FiniteOml, names: Iterable[str]) -> "PreValuation":
        mask = L.names_mask(names)
        return cls(L, tuple(mask >> i & 1 for i in range(len(L))))

    def __call__(self, name: str) -> int:
        return self.values[self.lattice.idx(name)]

    @property
    def support(self) -> list[str]:
        return [x for x, v in zip(self.lattice.names, self.values) if v]

    @property
    def support_mask(self) -> int:
        return sum(1 << i for i, v in enumerate(self.values) if v)


def _orthogonal_pairs(L: FiniteOml):
    n = len(L)
    for x in range(n):
        for y in range(n):
            if L.leq_table[x, L.ortho_table[y]]:
                yield x, y


def is_prevaluation(v: PreValuation) -> bool:
    """``v(top) = 1``, superadditive on orthogonal joins, multiplicative on
    compatible meets."""
    L, val = v.lattice, v.values
    if val[L.top_index] != 1:
        return False
    for x, y in _orthogonal_pairs(L):
        if val[L.join_table[x, y]] < val[x] + val[y]:
            return False
    n = len(L)
    return all(
        val[L.meet_table[x, y]] == val[x] * val[y]
        for x in range(n)
        for y in range(n)
        if L.compatible_table[x, y]
    )


def is_prevaluation_restated(v: PreValuation, require_bottom_zero: bool = True) -> bool:
    """The monotone presentation: ``v(top) = 1``, monotone, multiplicative on
    compatible meets and, unless disabled, ``v(bottom) = 0``.

    Without the last clause the constant-1 map passes although its support
    is the whole lattice; with it this presentation coincides with
    :func:`is_prevaluation`.
    """
    L, val = v.lattice, v.values
    n = len(L)
    if val[L.top_index] != 1:
        return False
    if require_bottom_zero and val[L.bottom_index] != 0:
        return False
    if any(val[x] and not val[y] for x in range(n) for y in range(n) if L.leq_table[x, y]):
        return False
    return all(
        val[L.meet_table[x, y]] == val[x] * val[y]
        for x in range(n)
        for y in range(n)
        if L.compatible_table[x, y]
    )


def is_valuation(v: PreValuation) -> bool:
    """A pre-valuation that is additive on orthogonal joins (two-valued state)."""
    if not is_prevaluation(v):
        return False
    L, val = v.lattice, v.values
    return all(val[L.join_table[x, y]] == val[x] + val[y] for x, y in _orthogonal_pairs(L))


def filter_to_prevaluation(F: UpSet) -> PreValuation:
    if not is_sasaki_filter(F):
        raise OmlError(f"{F!r} is not a Sasaki filter")
    if not is_proper(F):
        raise NotProper(f"{F!r} is not proper")
    L = F.lattice
    return PreValuation(L, tuple(F.mask >> i & 1 for i in range(len(L))))


def prevaluation_to_filter(v: PreValuation) -> SasakiFilter:
    if not is_prevaluation(v):
        raise NotAPreValuation(f"labelling with support {v.support} is not a pre-valuation")
    return SasakiFilter(v.lattice, v.support_mask)


def enumerate_prevaluations(L: FiniteOml, max_elements: int | None = None) -> Iterator[PreValuation]:
    """All pre-valuations of ``L``.

    Pre-valuations are monotone (``y = x v (y ^ x')`` with orthogonal
    joinands), so their supports are upsets; only upsets are tried.
    """
    for S in enumerate_upsets(L, max_elements):
        v = PreValuation(L, tuple(S.mask >> i & 1 for i in range(len(L))))
        if is_prevaluation(v):
            yield v


def find_valuations(L: FiniteOml, max_elements: int | None = None) -> Iterator[PreValuation]:
    for v in enumerate_prevaluations(L, max_elements):
        if is_valuation(v):
            yield v

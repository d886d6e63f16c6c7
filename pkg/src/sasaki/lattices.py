"""Small concrete lattices and the JSON lattice document format.

A lattice document is a JSON object::

    {
      "elements": ["0", "a", "a'", "1"],
      "leq": [["0", "a"], ["0", "a'"], ["a", "1"], ["a'", "1"]],
      "ortho": {"0": "1", "a": "a'", "a'": "a", "1": "0"},
      "bottom": "0",
      "top": "1"
    }

``leq`` may list any generating set of order pairs; the loader takes the
reflexive-transitive closure. Names must be unique and ``ortho`` total.
"""
from __future__ import annotations

import json
from importlib import resources
from itertools import combinations
from pathlib import Path

from .oml import FiniteOml, LatticeFormatError, RawOml, validate_oml

BUNDLED = ("chain2", "boolean4", "boolean8", "boolean16", "mo2", "mo3", "mo4", "benzene_o6")


def _subset_name(s) -> str:
    return "".join(str(i) for i in sorted(s)) or "0"


def boolean_raw(k: int) -> dict:
    """Power set of ``{1..k}`` ordered by inclusion, complement as ortho.

    Subsets are named by their sorted digits, the empty set by ``"0"``.
    """
    if not 0 <= k <= 9:
        raise ValueError("k must be between 0 and 9")
    ground = range(1, k + 1)
    subsets = [frozenset(c) for r in range(k + 1) for c in combinations(ground, r)]
    full = frozenset(ground)
    leq = [
        [_subset_name(s), _subset_name(s | {i})]
        for s in subsets
        for i in ground
        if i not in s
    ]
    return {
        "elements": [_subset_name(s) for s in subsets],
        "leq": leq,
        "ortho": {_subset_name(s): _subset_name(full - s) for s in subsets},
        "bottom": _subset_name(frozenset()),
        "top": _subset_name(full),
    }


def mo_raw(n: int) -> dict:
    """The horizontal sum MO_n: ``n`` blocks ``{0, x, x', 1}`` glued at the bounds."""
    if not 1 <= n <= 26:
        raise ValueError("n must be between 1 and 26")
    letters = [chr(ord("a") + i) for i in range(n)]
    atoms = [name for x in letters for name in (x, x + "'")]
    ortho = {"0": "1", "1": "0"}
    for x in letters:
        ortho[x], ortho[x + "'"] = x + "'", x
    return {
        "elements": ["0", *atoms, "1"],
        "leq": [["0", a] for a in atoms] + [[a, "1"] for a in atoms],
        "ortho": ortho,
        "bottom": "0",
        "top": "1",
    }


def chain2_raw() -> dict:
    return {
        "elements": ["0", "1"],
        "leq": [["0", "1"]],
        "ortho": {"0": "1", "1": "0"},
        "bottom": "0",
        "top": "1",
    }


def benzene_raw() -> dict:
    """The hexagon ortholattice O6: ``0 < a < b < 1`` and ``0 < b' < a' < 1``.

    An ortholattice that is not orthomodular.
    """
    return {
        "elements": ["0", "a", "b", "b'", "a'", "1"],
        "leq": [["0", "a"], ["a", "b"], ["b", "1"], ["0", "b'"], ["b'", "a'"], ["a'", "1"]],
        "ortho": {"0": "1", "a": "a'", "b": "b'", "b'": "b", "a'": "a", "1": "0"},
        "bottom": "0",
        "top": "1",
    }


def raw_by_name(name: str) -> dict:
    builders = {
        "chain2": chain2_raw,
        "boolean4": lambda: boolean_raw(2),
        "boolean8": lambda: boolean_raw(3),
        "boolean16": lambda: boolean_raw(4),
        "mo2": lambda: mo_raw(2),
        "mo3": lambda: mo_raw(3),
        "mo4": lambda: mo_raw(4),
        "benzene_o6": benzene_raw,
    }
    try:
        return builders[name]()
    except KeyError:
        raise KeyError(f"no bundled lattice named {name!r}") from None


def boolean(k: int) -> FiniteOml:
    return validate_oml(boolean_raw(k))


def mo(n: int) -> FiniteOml:
    return validate_oml(mo_raw(n))


def chain2() -> FiniteOml:
    return validate_oml(chain2_raw())


def loads(text: str) -> RawOml:
    """Parse a lattice document (syntax only; no law checks)."""
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise LatticeFormatError(f"not valid JSON: {exc}") from exc
    if not isinstance(doc, dict):
        raise LatticeFormatError("lattice document must be a JSON object")
    return RawOml.from_dict(doc)


def load(path: str | Path) -> RawOml:
    return loads(Path(path).read_text())


def dumps(lattice: FiniteOml) -> str:
    return json.dumps(lattice.to_dict(), indent=1, ensure_ascii=False)


def bundled_path(name: str) -> Path:
    """Filesystem path of a bundled lattice document."""
    if name not in BUNDLED:
        raise KeyError(f"no bundled lattice named {name!r}")
    return Path(str(resources.files("sasaki") / "data" / f"{name}.json"))


def load_bundled(name: str) -> RawOml:
    return load(bundled_path(name))


def isomorphic_by_name(a: FiniteOml, b: FiniteOml) -> bool:
    """Same names, same order, same orthocomplement (identity isomorphism)."""
    if set(a.names) != set(b.names) or a.bottom != b.bottom or a.top != b.top:
        return False
    return all(
        a.leq(x, y) == b.leq(x, y) for x in a.names for y in a.names
    ) and all(a.ortho(x) == b.ortho(x) for x in a.names)

"""Collapse certificates: finite derivations of the zero subspace from two rays.

Starting from rays ``A`` and ``B`` assumed to lie in a Sasaki filter, each
round picks two planes through ``A``, projects ``B`` onto both, and obtains a
new pair of rays whose angle is the next rung of the ladder ``theta(k)``.
After ``n_min(angle(A, B))`` rounds the pair is orthogonal and its Sasaki
projection is the zero subspace, so the filter cannot be proper.

A certificate is a flat list of *elements*: the initial atoms, then any
premise subspaces, then one result atom per step. Every step cites a parent
element (the ray being projected), a plane, and a witness element lying
below the plane (which puts the plane in the upward closure). The checker in
:func:`verify_certificate` replays these citations with fresh arithmetic and
never calls the generator.

Certificate document (JSON)::

    {
      "schema": "sasaki-collapse/1",
      "tolerance": 1e-9,                 # projector agreement
      "eps_orth": 1e-7,                  # final orthogonality
      "basis": [[...], [...], [...]],    # e1, e2, e3 of the first round, or null
      "initial_atoms": [[x, y, z], ...],
      "premises": [[[x, y, z], ...], ...],   # spanning vectors per premise
      "prelude": [step, ...],
      "rounds": [[step, step], ...],
      "final": [i, j]
    }

    step = {"parent": int, "plane": [[x, y, z], ...], "witness": int,
            "phi": float or null, "result": [x, y, z]}
"""
from __future__ import annotations

import json
import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from . import hilbert3 as h3
from .hilbert3 import EPS_MAT, EPS_ORTH, Subspace3

SCHEMA = "sasaki-collapse/1"
EPS_ANG = 1e-8
ANGLE_MARGIN = 1e-9
ZERO_ANGLE = 1e-12


class CollapseError(Exception):
    pass


class DegeneratePair(CollapseError, ValueError):
    pass


class AngleTooSmall(CollapseError, ValueError):
    pass


class AlreadyAbove(CollapseError, ValueError):
    pass


class CertificateFormatError(CollapseError, ValueError):
    pass


@dataclass(frozen=True)
class CollapseStep:
    parent: int
    plane: np.ndarray  # (k, 3) spanning vectors
    witness: int
    phi: float | None
    result: np.ndarray

    def plane_subspace(self) -> Subspace3:
        return h3.span(self.plane)

    def to_dict(self) -> dict:
        return {
            "parent": self.parent,
            "plane": _rows(self.plane),
            "witness": self.witness,
            "phi": None if self.phi is None else float(self.phi),
            "result": _vec(self.result),
        }

    @classmethod
    def from_dict(cls, doc) -> "CollapseStep":
        phi = doc.get("phi")
        return cls(
            parent=_index(doc["parent"]),
            plane=_array(doc["plane"], rows=True),
            witness=_index(doc["witness"]),
            phi=None if phi is None else float(phi),
            result=_array(doc["result"]),
        )


@dataclass(frozen=True)
class CollapseCertificate:
    tolerance: float
    initial_atoms: tuple[np.ndarray, ...]
    rounds: tuple[tuple[CollapseStep, CollapseStep], ...]
    final: tuple[int, int]
    basis: np.ndarray | None = None
    premises: tuple[np.ndarray, ...] = ()
    prelude: tuple[CollapseStep, ...] = ()
    eps_orth: float = EPS_ORTH

    @property
    def steps(self) -> list[CollapseStep]:
        return [*self.prelude, *(s for r in self.rounds for s in r)]

    def elements(self) -> list[Subspace3]:
        """Initial atoms, premises, then step results, as subspaces."""
        out = [h3.span([a]) for a in self.initial_atoms]
        out += [h3.span(p) for p in self.premises]
        out += [h3.span([s.result]) for s in self.steps]
        return out

    def to_dict(self) -> dict:
        return {
            "schema": SCHEMA,
            "tolerance": self.tolerance,
            "eps_orth": self.eps_orth,
            "basis": None if self.basis is None else _rows(self.basis),
            "initial_atoms": [_vec(a) for a in self.initial_atoms],
            "premises": [_rows(p) for p in self.premises],
            "prelude": [s.to_dict() for s in self.prelude],
            "rounds": [[s.to_dict() for s in r] for r in self.rounds],
            "final": list(self.final),
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=1)

    @classmethod
    def from_dict(cls, doc) -> "CollapseCertificate":
        try:
            if doc.get("schema") != SCHEMA:
                raise CertificateFormatError(f"unknown schema {doc.get('schema')!r}")
            rounds = []
            for r in doc["rounds"]:
                if len(r) != 2:
                    raise CertificateFormatError("each round must hold exactly two steps")
                rounds.append((CollapseStep.from_dict(r[0]), CollapseStep.from_dict(r[1])))
            final = tuple(_index(i) for i in doc["final"])
            if len(final) != 2:
                raise CertificateFormatError("final must name two elements")
            basis = doc.get("basis")
            return cls(
                tolerance=float(doc["tolerance"]),
                eps_orth=float(doc.get("eps_orth", EPS_ORTH)),
                basis=None if basis is None else _array(basis, rows=True),
                initial_atoms=tuple(_array(a) for a in doc["initial_atoms"]),
                premises=tuple(_array(p, rows=True) for p in doc.get("premises", [])),
                prelude=tuple(CollapseStep.from_dict(s) for s in doc.get("prelude", [])),
                rounds=tuple(rounds),
                final=final,
            )
        except CertificateFormatError:
            raise
        except (KeyError, TypeError, ValueError, AttributeError) as exc:
            raise CertificateFormatError(f"malformed certificate: {exc!r}") from exc

    @classmethod
    def from_json(cls, text: str) -> "CollapseCertificate":
        try:
            doc = json.loads(text)
        except json.JSONDecodeError as exc:
            raise CertificateFormatError(f"not valid JSON: {exc}") from exc
        if not isinstance(doc, dict):
            raise CertificateFormatError("certificate must be a JSON object")
        return cls.from_dict(doc)


def _vec(v) -> list[float]:
    return [float(x) for x in v]


def _rows(M) -> list[list[float]]:
    return [_vec(r) for r in M]


def _index(i) -> int:
    if isinstance(i, bool) or not isinstance(i, int) or i < 0:
        raise CertificateFormatError(f"bad element index {i!r}")
    return i


def _array(data, rows: bool = False) -> np.ndarray:
    a = np.array(data, dtype=float)
    if rows:
        if a.ndim != 2 or a.shape[1] != 3:
            raise CertificateFormatError("expected a list of 3-vectors")
    elif a.shape != (3,):
        raise CertificateFormatError("expected a 3-vector")
    if not np.all(np.isfinite(a)):
        raise CertificateFormatError("non-finite coordinate")
    return a


def _unit(v) -> np.ndarray:
    v = np.asarray(v, dtype=float)
    norm = float(np.linalg.norm(v))
    if norm == 0.0 or not math.isfinite(norm):
        raise h3.DegenerateInput("zero or non-finite vector")
    return v / norm


def _as_unit(x) -> np.ndarray:
    if isinstance(x, Subspace3):
        return x.vector()
    return _unit(x)


def frame(a, b) -> np.ndarray:
    """Orthonormal ``e1, e2, e3`` with ``e1 = a`` and ``b`` in the ``e1 e2``
    half-plane with positive ``e1`` component (``b`` is sign-flipped if
    needed). ``e3`` is the normalised cross product."""
    a, b = _unit(a), _unit(b)
    if a @ b < 0:
        b = -b
    e3 = np.cross(a, b)
    n3 = float(np.linalg.norm(e3))
    if n3 < ZERO_ANGLE:
        raise DegeneratePair("atoms coincide")
    e3 /= n3
    e2 = np.cross(e3, a)
    return np.array([a, e2, e3])


def _angle(a, b) -> float:
    return math.atan2(float(np.linalg.norm(np.cross(a, b))), abs(float(a @ b)))


def induction_step(a, b, n: int, ia: int = 0, ib: int = 1):
    """One round: from rays ``a``, ``b`` at angle at least ``theta(n)``,
    produce rays at angle ``theta(n - 1)``.

    Both new rays are projections of ``b`` onto planes through ``a``.
    ``ia`` and ``ib`` are the element indices recorded as witness and parent.

    Returns ``(a_new, b_new, step_a, step_b)``; ``a_new`` and ``b_new`` are
    unit vectors.
    """
    a, b = _as_unit(a), _as_unit(b)
    if n < 1:
        raise ValueError("n must be at least 1")
    angle = _angle(a, b)
    if angle < ZERO_ANGLE:
        raise DegeneratePair("atoms coincide")
    if angle < h3.theta(n) - EPS_ANG:
        raise AngleTooSmall(f"angle {angle!r} < theta({n}) = {h3.theta(n)!r}")
    E = frame(a, b)
    if a @ b < 0:
        b = -b
    # Aim ANGLE_MARGIN wide of theta(n - 1): landing exactly on it puts the
    # next round on the edge of the reachable interval, where rounding
    # deficits compound by f' > 1 per round.
    target = math.cos(h3.theta(n - 1) + ANGLE_MARGIN) if n > 1 else 0.0
    target = max(target, h3.lemma_interval(angle)[0])
    alpha, beta = h3.solve_pair(angle, target)
    out = []
    for phi in (alpha, beta):
        w = math.cos(phi) * E[1] + math.sin(phi) * E[2]
        plane = np.array([E[0], w])
        image = h3.project(h3.span(plane), b)
        res = image / np.linalg.norm(image)
        out.append((res, CollapseStep(ib, plane, ia, float(phi), res)))
    (a_new, step_a), (b_new, step_b) = out
    return a_new, b_new, step_a, step_b


def _rounds(elements: list[np.ndarray], i: int, j: int):
    a, b = elements[i], elements[j]
    angle = _angle(a, b)
    if angle < ZERO_ANGLE:
        raise DegeneratePair("atoms coincide")
    n = h3.n_min(angle)
    rounds = []
    for k in range(n, 0, -1):
        a_new, b_new, sa, sb = induction_step(elements[i], elements[j], k, ia=i, ib=j)
        elements += [a_new, b_new]
        i, j = len(elements) - 2, len(elements) - 1
        rounds.append((sa, sb))
    return rounds, (i, j)


def collapse(A, B, tolerance: float = EPS_MAT) -> CollapseCertificate:
    """Certificate that the Sasaki closure of two distinct rays contains the
    zero subspace. ``A`` and ``B`` are vectors or one-dimensional
    :class:`Subspace3` values."""
    a, b = _as_unit(A), _as_unit(B)
    if _angle(a, b) < ZERO_ANGLE:
        raise DegeneratePair("atoms coincide")
    basis = frame(a, b)
    elements = [a, b]
    rounds, final = _rounds(elements, 0, 1)
    return CollapseCertificate(
        tolerance=tolerance,
        basis=basis,
        initial_atoms=(a, b),
        rounds=tuple(rounds),
        final=final,
    )


def refute_second_element(A, E: Subspace3 | Sequence, tolerance: float = EPS_MAT) -> CollapseCertificate:
    """Certificate that no proper Sasaki filter contains both the ray ``A``
    and the subspace ``E`` unless ``A <= E``.

    ``E`` is a :class:`Subspace3` or a list of spanning vectors.
    """
    a = _as_unit(A)
    if not isinstance(E, Subspace3):
        E = h3.span(E)
    A_sub = h3.span([a])
    if h3.leq_sub(A_sub, E):
        raise AlreadyAbove("the atom already lies in E")
    premise = E.basis()
    B = h3.sasaki_sub(A_sub, E)
    if B.dim == 0:
        return CollapseCertificate(
            tolerance=tolerance, initial_atoms=(a,), premises=(premise,), rounds=(), final=(0, 1),
        )
    image = h3.project(E, a)
    b = image / np.linalg.norm(image)
    prelude = CollapseStep(parent=0, plane=premise, witness=1, phi=None, result=b)
    # index 1 is the premise; rounds only touch atoms
    elements = [a, None, b]
    rounds, final = _rounds(elements, 0, 2)
    return CollapseCertificate(
        tolerance=tolerance,
        basis=frame(a, b),
        initial_atoms=(a,),
        premises=(premise,),
        prelude=(prelude,),
        rounds=tuple(rounds),
        final=final,
    )


@dataclass
class VerificationReport:
    accepted: bool
    check: str | None = None
    reason: str = ""
    rounds: int = 0
    depth: int | None = None
    final_residual: float | None = None

    def __bool__(self):
        return self.accepted

    def to_dict(self) -> dict:
        return {
            "accepted": self.accepted,
            "check": self.check,
            "reason": self.reason,
            "rounds": self.rounds,
            "depth": self.depth,
            "final_residual": self.final_residual,
        }


def _reject(check, reason, **kw):
    return VerificationReport(False, check, reason, **kw)


def verify_certificate(cert: CollapseCertificate | dict | str) -> VerificationReport:
    """Replay a certificate and accept it iff every citation checks out.

    Checks, in order: ``structure`` (indices point backwards, planes are
    planes); ``i`` initial atoms are unit vectors; per step ``ii`` the
    witness lies in the plane and ``iii`` the result equals the recomputed
    Sasaki projection of the parent onto the plane; ``iv`` the final pair is
    orthogonal within ``eps_orth`` and projects to the zero subspace.
    The report names the first failing check.
    """
    if not isinstance(cert, CollapseCertificate):
        try:
            cert = (CollapseCertificate.from_json(cert) if isinstance(cert, str)
                    else CollapseCertificate.from_dict(cert))
        except CertificateFormatError as exc:
            return _reject("structure", str(exc))
    tol = cert.tolerance
    n_rounds = len(cert.rounds)
    if not (0 < tol < 1e-3 and 0 < cert.eps_orth < 1e-3):
        return _reject("structure", "tolerances must be small and positive", rounds=n_rounds)

    if cert.basis is not None:
        if np.max(np.abs(cert.basis @ cert.basis.T - np.eye(3))) > tol:
            return _reject("structure", "basis is not orthonormal", rounds=n_rounds)

    # (i) initial atoms
    elements: list[Subspace3] = []
    depth: list[int] = []
    for k, a in enumerate(cert.initial_atoms):
        norm = float(np.linalg.norm(a))
        if abs(norm - 1.0) > tol:
            return _reject("i", f"initial atom {k} has norm {norm!r}", rounds=n_rounds)
        elements.append(h3.span([a]))
        depth.append(0)
    if not elements:
        return _reject("i", "no initial atoms", rounds=n_rounds)
    for k, p in enumerate(cert.premises):
        try:
            elements.append(h3.span(p))
        except h3.DegenerateInput as exc:
            return _reject("structure", f"premise {k}: {exc}", rounds=n_rounds)
        depth.append(0)

    # (ii), (iii) per step
    rounds_of = [None] * len(cert.prelude) + [r for r in range(n_rounds) for _ in range(2)]
    for s, (step, r) in enumerate(zip(cert.steps, rounds_of)):
        where = f"step {s}" + ("" if r is None else f" (round {r + 1})")
        new = len(elements)
        if step.parent >= new or step.witness >= new:
            return _reject("structure", f"{where} cites an element not yet derived", rounds=n_rounds)
        try:
            plane = step.plane_subspace()
        except h3.DegenerateInput as exc:
            return _reject("structure", f"{where}: {exc}", rounds=n_rounds)
        if r is not None and plane.dim != 2:
            return _reject("structure", f"{where}: plane has dimension {plane.dim}", rounds=n_rounds)
        if not h3.leq_sub(elements[step.witness], plane, tol):
            return _reject("ii", f"{where}: witness {step.witness} is not in the plane", rounds=n_rounds)
        expected = h3.sasaki_sub(elements[step.parent], plane)
        if not np.any(step.result):
            return _reject("iii", f"{where}: result is the zero vector", rounds=n_rounds)
        got = h3.span([step.result])
        if not got.is_close(expected, tol):
            return _reject("iii", f"{where}: result differs from the Sasaki projection", rounds=n_rounds)
        elements.append(got)
        depth.append(max(depth[step.parent], depth[step.witness]) + 1)

    # (iv) final pair
    i, j = cert.final
    if i >= len(elements) or j >= len(elements):
        return _reject("structure", "final cites an unknown element", rounds=n_rounds)
    Ei, Ej = elements[i], elements[j]
    residual = float(np.linalg.norm(Ej.projector @ Ei.projector, 2))
    if residual > cert.eps_orth:
        return _reject("iv", f"final pair not orthogonal (residual {residual:.3e})",
                       rounds=n_rounds, final_residual=residual)
    if h3.sasaki_sub(Ei, Ej, tol=cert.eps_orth).dim != 0:
        return _reject("iv", "final Sasaki projection is not zero", rounds=n_rounds, final_residual=residual)
    return VerificationReport(
        True, rounds=n_rounds, depth=max(depth[i], depth[j]) + 1, final_residual=residual,
    )

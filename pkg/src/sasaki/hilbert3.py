"""The lattice of subspaces of real 3-space, numerically.

Subspaces are represented by their orthogonal projectors. This module also
carries the planar-projection geometry used to push two rays apart:

* ``v_phi(theta, phi)``: the normalised projection of
  ``v = (cos theta, sin theta, 0)`` onto the plane spanned by ``e1`` and
  ``w_phi = (0, cos phi, sin phi)``;
* ``pair_dot(theta, phi, psi)``: the inner product of two such projections,
  whose range over all ``(phi, psi)`` is ``[f(cos theta), 1]`` with
  ``f(x) = (3x - 1)/(x + 1)``;
* the angle ladder ``theta(n) = arccos(n/(n+2))``, descending from ``pi/2``.

Angles are in radians throughout.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import NamedTuple, Sequence

import numpy as np
from scipy import optimize

EPS_MAT = 1e-9
EPS_RANK = 1e-9
EPS_UNIT = 1e-9
EPS_ORTH = 1e-7


class Hilbert3Error(Exception):
    pass


class DegenerateInput(Hilbert3Error, ValueError):
    pass


class NotAnAtom(Hilbert3Error, ValueError):
    pass


class ThetaOutOfRange(Hilbert3Error, ValueError):
    pass


class TargetOutOfRange(Hilbert3Error, ValueError):
    pass


class NegativeIndex(Hilbert3Error, ValueError):
    pass


@dataclass(frozen=True, eq=False)
class Subspace3:
    """A subspace of R^3 given by its orthogonal projector."""

    projector: np.ndarray
    dim: int

    def __post_init__(self):
        self.projector.setflags(write=False)

    def basis(self) -> np.ndarray:
        """Orthonormal basis as the rows of a ``(dim, 3)`` array."""
        if self.dim == 0:
            return np.zeros((0, 3))
        w, V = np.linalg.eigh(self.projector)
        return V[:, np.argsort(w)[::-1][: self.dim]].T

    def vector(self) -> np.ndarray:
        """Unit representative of an atom."""
        if self.dim != 1:
            raise NotAnAtom(f"subspace has dimension {self.dim}")
        return self.basis()[0]

    def is_close(self, other: "Subspace3", tol: float = EPS_MAT) -> bool:
        return self.dim == other.dim and float(np.max(np.abs(self.projector - other.projector))) <= tol

    def projector_defects(self) -> tuple[float, float, float]:
        """Max deviations from symmetry, idempotence and ``trace = dim``."""
        P = self.projector
        return (
            float(np.max(np.abs(P - P.T))),
            float(np.max(np.abs(P @ P - P))),
            abs(float(np.trace(P)) - self.dim),
        )

    def to_dict(self) -> dict:
        return {"projector": [float(x) for x in self.projector.ravel()], "dim": self.dim}

    @classmethod
    def from_dict(cls, doc) -> "Subspace3":
        P = np.array(doc["projector"], dtype=float).reshape(3, 3)
        return cls(P, int(doc["dim"]))

    def __repr__(self):
        if self.dim == 1:
            return f"Subspace3(atom {np.round(self.vector(), 6).tolist()})"
        return f"Subspace3(dim={self.dim})"


ZERO = Subspace3(np.zeros((3, 3)), 0)
WHOLE = Subspace3(np.eye(3), 3)


def _from_columns(M: np.ndarray, tol: float, relative: bool) -> Subspace3:
    if M.size == 0:
        return Subspace3(np.zeros((3, 3)), 0)
    U, s, _ = np.linalg.svd(M, full_matrices=True)
    cut = tol * s[0] if relative else tol
    r = int(np.sum(s > cut)) if s[0] > 0 else 0
    Q = U[:, :r]
    return Subspace3(Q @ Q.T, r)


def span(vectors: Sequence, tol: float = EPS_RANK) -> Subspace3:
    """Subspace spanned by ``vectors``.

    Rank is decided by singular values above ``tol`` times the largest one.
    An empty list gives the zero subspace; a non-empty list of zero vectors
    raises :class:`DegenerateInput`.
    """
    M = np.asarray(vectors, dtype=float).reshape(-1, 3).T
    if M.shape[1] and not np.any(M):
        raise DegenerateInput("spanning set is all zero")
    if not np.all(np.isfinite(M)):
        raise DegenerateInput("spanning set has non-finite entries")
    return _from_columns(M, tol, relative=True)


def project(E: Subspace3, v) -> np.ndarray:
    return E.projector @ np.asarray(v, dtype=float)


def ortho_sub(E: Subspace3) -> Subspace3:
    return Subspace3(np.eye(3) - E.projector, 3 - E.dim)


def join_sub(E: Subspace3, F: Subspace3) -> Subspace3:
    rows = np.vstack([E.basis(), F.basis()])
    return _from_columns(rows.T, EPS_RANK, relative=False)


def meet_sub(E: Subspace3, F: Subspace3) -> Subspace3:
    return ortho_sub(join_sub(ortho_sub(E), ortho_sub(F)))


def leq_sub(E: Subspace3, F: Subspace3, tol: float = EPS_MAT) -> bool:
    return float(np.max(np.abs(F.projector @ E.projector - E.projector))) <= tol


def sasaki_sub(A: Subspace3, B: Subspace3, tol: float = EPS_RANK) -> Subspace3:
    """``A & B`` as the image of ``A`` under orthogonal projection onto ``B``.

    Images of an orthonormal basis of ``A`` with norm at most ``tol`` count
    as zero, so a pair orthogonal within ``tol`` projects to the zero
    subspace.
    """
    images = B.projector @ A.basis().T
    return _from_columns(images, tol, relative=False)


def sasaki_algebraic(A: Subspace3, B: Subspace3) -> Subspace3:
    """``B ^ (A v B')`` from the lattice operations."""
    return meet_sub(B, join_sub(A, ortho_sub(B)))


def atom(v) -> Subspace3:
    E = span([v])
    if E.dim != 1:
        raise NotAnAtom("vector does not span a line")
    return E


def angle_atoms(A: Subspace3, B: Subspace3) -> float:
    """Angle in ``[0, pi/2]`` between two rays, ``arccos |u.v|`` for unit
    representatives ``u``, ``v``."""
    if A.dim != 1 or B.dim != 1:
        raise NotAnAtom("both arguments must be one-dimensional")
    u, v = A.vector(), B.vector()
    return math.atan2(float(np.linalg.norm(np.cross(u, v))), abs(float(u @ v)))


def _check_theta(theta: float):
    if not 0.0 < theta < math.pi / 2:
        raise ThetaOutOfRange(f"theta={theta!r} is not in (0, pi/2)")


def v_phi(theta: float, phi: float) -> np.ndarray:
    _check_theta(theta)
    c, s = math.cos(theta), math.sin(theta)
    cp, sp = math.cos(phi), math.sin(phi)
    return np.array([c, s * cp * cp, s * cp * sp]) / math.sqrt(c * c + s * s * cp * cp)


def pair_dot(theta: float, phi, psi):
    """Closed form of ``v_phi(theta, phi) . v_phi(theta, psi)``; broadcasts
    over array ``phi`` and ``psi``."""
    _check_theta(theta)
    c2, s2 = math.cos(theta) ** 2, math.sin(theta) ** 2
    cp, sp = np.cos(phi), np.sin(phi)
    cq, sq = np.cos(psi), np.sin(psi)
    num = c2 + s2 * (cp * cp * cq * cq + cp * cq * sp * sq)
    den = np.sqrt((c2 + s2 * cp * cp) * (c2 + s2 * cq * cq))
    return num / den


def f(x):
    """``(3x - 1)/(x + 1)``."""
    return (3 * x - 1) / (x + 1)


def f_inverse(x):
    return (1 + x) / (3 - x)


def lemma_interval(theta: float) -> tuple[float, float]:
    _check_theta(theta)
    return f(math.cos(theta)), 1.0


def extremal_phi(theta: float) -> float:
    """``arccos sqrt(cos theta / (1 + cos theta))``, where ``pair_dot(theta,
    phi, -phi)`` reaches the bottom of the lemma interval."""
    _check_theta(theta)
    c = math.cos(theta)
    return math.acos(math.sqrt(c / (1 + c)))


class CriticalPoint(NamedTuple):
    kind: str
    phi: float
    psi: float
    value: float


def quartic_residual(theta: float, phi: float) -> float:
    """``sin^2 t cos^4 p + 2 cos^2 t cos^2 p - cos^2 t``."""
    c2, s2 = math.cos(theta) ** 2, math.sin(theta) ** 2
    x = math.cos(phi) ** 2
    return s2 * x * x + 2 * c2 * x - c2


def lemma_extrema(theta: float) -> list[CriticalPoint]:
    """Representatives of each critical class of ``pair_dot(theta, ., .)``.

    Classes: the diagonal ``phi = psi``; and on the antidiagonal
    ``psi = -phi (mod pi)`` the points with ``sin phi = 0``, ``cos phi = 0``,
    or ``cos^2 phi = cos theta / (1 + cos theta)`` (root of the quartic).
    """
    _check_theta(theta)
    star = extremal_phi(theta)
    points = [
        ("diagonal", math.pi / 4, math.pi / 4),
        ("sin_zero", 0.0, 0.0),
        ("sin_zero", 0.0, math.pi),
        ("cos_zero", math.pi / 2, -math.pi / 2),
        ("quartic", star, -star),
        ("quartic", math.pi - star, star - math.pi),
    ]
    return [CriticalPoint(k, p, q, float(pair_dot(theta, p, q))) for k, p, q in points]


def solve_pair(theta: float, target: float, xtol: float = 1e-15, slack: float = 1e-12) -> tuple[float, float]:
    """Find ``(phi, -phi)`` with ``pair_dot(theta, phi, -phi) == target``.

    Searches ``phi`` in ``[0, extremal_phi(theta)]`` where the antidiagonal
    sweeps from 1 down to ``f(cos theta)``. Targets below the bottom of the
    interval by at most ``slack`` are clamped to it.
    """
    lo, hi = lemma_interval(theta)
    if not lo - slack <= target <= hi + slack:
        raise TargetOutOfRange(f"target {target!r} outside [{lo!r}, {hi!r}]")
    star = extremal_phi(theta)
    if target >= hi:
        return 0.0, 0.0
    # the closed-form bottom and the evaluated one differ in the last digits
    if target <= max(lo, float(pair_dot(theta, star, -star))):
        return star, -star

    c2, s2 = math.cos(theta) ** 2, math.sin(theta) ** 2

    def g(p):
        # pair_dot(theta, p, -p) in scalar arithmetic
        x, y = math.cos(p) ** 2, math.sin(p) ** 2
        return (c2 + s2 * (x * x - x * y)) / (c2 + s2 * x) - target

    phi = optimize.brentq(g, 0.0, star, xtol=xtol, rtol=4 * np.finfo(float).eps)
    return phi, -phi


class ScanResult(NamedTuple):
    minimum: float
    maximum: float
    argmin: tuple[float, float]
    argmax: tuple[float, float]


def scan_pair_dot(theta: float, grid: int = 720, refine: bool = True) -> ScanResult:
    """Range of ``pair_dot`` over ``[0, 2 pi]^2`` by a ``grid x grid`` scan,
    optionally polished by a bounded local search from the best samples."""
    _check_theta(theta)
    axis = np.linspace(0.0, 2 * math.pi, grid)
    values = pair_dot(theta, axis[:, None], axis[None, :])
    i, j = np.unravel_index(np.argmin(values), values.shape)
    k, l = np.unravel_index(np.argmax(values), values.shape)
    lo, argmin = float(values[i, j]), (float(axis[i]), float(axis[j]))
    hi, argmax = float(values[k, l]), (float(axis[k]), float(axis[l]))
    if refine:
        bounds = [(0.0, 2 * math.pi)] * 2
        res = optimize.minimize(
            lambda x: pair_dot(theta, x[0], x[1]), argmin, method="L-BFGS-B", bounds=bounds,
            options={"ftol": 1e-15, "gtol": 1e-12},
        )
        if res.fun < lo:
            lo, argmin = float(res.fun), (float(res.x[0]), float(res.x[1]))
        res = optimize.minimize(
            lambda x: -pair_dot(theta, x[0], x[1]), argmax, method="L-BFGS-B", bounds=bounds,
            options={"ftol": 1e-15, "gtol": 1e-12},
        )
        if -res.fun > hi:
            hi, argmax = float(-res.fun), (float(res.x[0]), float(res.x[1]))
    return ScanResult(lo, hi, argmin, argmax)


# angle ladder

def c(n: int) -> Fraction:
    """``n / (n + 2)`` exactly."""
    if n < 0:
        raise NegativeIndex(n)
    return Fraction(n, n + 2)


def c_recurrence(n: int) -> Fraction:
    """``c_0 = 0``, ``c_{k+1} = (1 + c_k)/(3 - c_k)``, in exact arithmetic."""
    if n < 0:
        raise NegativeIndex(n)
    x = Fraction(0)
    for _ in range(n):
        x = f_inverse(x)
    return x


def theta(n: int) -> float:
    """``arccos(n / (n + 2))``, evaluated as ``2 atan(1/sqrt(n + 1))`` to
    stay accurate for large ``n``."""
    if n < 0:
        raise NegativeIndex(n)
    return 2.0 * math.atan(1.0 / math.sqrt(n + 1))


ANGLE_SLACK = 1e-12


def n_min(angle: float, slack: float = ANGLE_SLACK) -> int:
    """Least ``n`` with ``theta(n) <= angle + slack``.

    The default slack absorbs last-digit rounding, e.g. ``n_min(pi/3) == 2``
    although ``theta(2)`` rounds a few ulps above ``pi/3``.
    """
    if not 0.0 < angle <= math.pi / 2 + 1e-15:
        raise ValueError(f"angle {angle!r} is not in (0, pi/2]")
    x = math.cos(angle)
    n = max(0, math.ceil(2 * x / (1 - x)))
    while n > 0 and theta(n - 1) <= angle + slack:
        n -= 1
    while theta(n) > angle + slack:
        n += 1
    return n

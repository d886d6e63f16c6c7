import math
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import assume, given, settings, strategies as st

from sasaki import hilbert3 as h3

E1, E2, E3 = np.eye(3)

finite = st.floats(-10, 10, allow_nan=False, allow_infinity=False)
vectors = st.tuples(finite, finite, finite).map(np.array).filter(lambda v: np.linalg.norm(v) > 1e-3)
thetas = st.floats(0.01, math.pi / 2 - 0.01)
angles = st.floats(-2 * math.pi, 2 * math.pi)


def direct_projection(theta, phi):
    """Normalised projection of (cos t, sin t, 0) onto span{e1, w_phi}, by
    explicit rank-2 projector."""
    v = np.array([math.cos(theta), math.sin(theta), 0.0])
    w = np.array([0.0, math.cos(phi), math.sin(phi)])
    P = np.outer(E1, E1) + np.outer(w, w)
    p = P @ v
    return p / np.linalg.norm(p)


@st.composite
def subspaces(draw):
    k = draw(st.integers(0, 3))
    vs = [draw(vectors) for _ in range(k)]
    E = h3.span(vs) if vs else h3.ZERO
    return E


# -- subspace lattice ---------------------------------------------------------

def test_span_and_project():
    E = h3.span([E1])
    assert E.dim == 1
    np.testing.assert_allclose(h3.project(E, [2.0, -3.0, 5.0]), [2.0, 0.0, 0.0], atol=1e-15)


def test_meet_join_examples():
    xy, yz = h3.span([E1, E2]), h3.span([E2, E3])
    assert h3.meet_sub(xy, yz).is_close(h3.span([E2]))
    J = h3.join_sub(h3.span([E1]), h3.span([E2]))
    assert J.dim == 2 and J.is_close(xy)
    assert h3.ortho_sub(xy).is_close(h3.span([E3]))
    assert h3.leq_sub(h3.span([E1]), xy) and not h3.leq_sub(h3.span([E3]), xy)


def test_degenerate_span():
    with pytest.raises(h3.DegenerateInput):
        h3.span([[0, 0, 0]])
    assert h3.span([]).dim == 0


def test_sasaki_sub_examples():
    A = h3.span([E1])
    B = h3.span([(E1 + E2) / math.sqrt(2)])
    assert h3.sasaki_sub(A, A).is_close(A)
    assert h3.sasaki_sub(A, B).is_close(h3.span([E1 + E2]))
    assert h3.sasaki_sub(A, h3.span([E2])).dim == 0
    # hand projection: Pi_B(e1) = (e1 + e2)/2
    np.testing.assert_allclose(h3.project(B, E1), [0.5, 0.5, 0.0], atol=1e-15)


@settings(max_examples=200, deadline=None)
@given(subspaces(), subspaces())
def test_sasaki_dual_computation(A, B):
    assert h3.sasaki_sub(A, B).is_close(h3.sasaki_algebraic(A, B), 1e-7)


@settings(max_examples=200, deadline=None)
@given(subspaces(), subspaces())
def test_projector_laws(A, B):
    for E in (A, B, h3.join_sub(A, B), h3.meet_sub(A, B), h3.ortho_sub(A), h3.sasaki_sub(A, B)):
        assert max(E.projector_defects()) <= h3.EPS_MAT
    assert h3.leq_sub(h3.sasaki_sub(A, B), B)
    assert h3.leq_sub(h3.meet_sub(A, B), A) and h3.leq_sub(A, h3.join_sub(A, B))


def test_angle_atoms_examples():
    A = h3.atom(E1)
    assert h3.angle_atoms(A, A) == 0.0
    assert h3.angle_atoms(A, h3.atom(E2)) == pytest.approx(math.pi / 2, abs=1e-15)
    C = h3.atom([math.cos(math.pi / 3), math.sin(math.pi / 3), 0])
    assert h3.angle_atoms(A, C) == pytest.approx(math.pi / 3, abs=1e-15)
    with pytest.raises(h3.NotAnAtom):
        h3.angle_atoms(A, h3.span([E1, E2]))


@given(vectors, vectors)
def test_angle_atoms_symmetric_and_sign_free(u, v):
    A, B = h3.atom(u), h3.atom(v)
    a = h3.angle_atoms(A, B)
    assert 0.0 <= a <= math.pi / 2
    assert a == pytest.approx(h3.angle_atoms(B, A), abs=1e-12)
    assert a == pytest.approx(h3.angle_atoms(A, h3.atom(-v)), abs=1e-12)


# -- projected pairs ----------------------------------------------------------

def test_v_phi_examples():
    t = 0.7
    np.testing.assert_allclose(h3.v_phi(t, 0.0), [math.cos(t), math.sin(t), 0.0], atol=1e-15)
    np.testing.assert_allclose(h3.v_phi(t, math.pi / 2), E1, atol=1e-15)
    np.testing.assert_allclose(h3.v_phi(math.pi / 3, math.pi / 4),
                               direct_projection(math.pi / 3, math.pi / 4), atol=1e-12)


@pytest.mark.parametrize("theta", [0.0, math.pi / 2, -0.1, 2.0])
def test_theta_out_of_range(theta):
    with pytest.raises(h3.ThetaOutOfRange):
        h3.v_phi(theta, 0.3)
    with pytest.raises(h3.ThetaOutOfRange):
        h3.pair_dot(theta, 0.3, 0.1)


@given(thetas, angles)
def test_v_phi_is_the_normalised_projection(theta, phi):
    assume(abs(math.cos(phi)) > 1e-6 or math.cos(theta) > 1e-3)
    np.testing.assert_allclose(h3.v_phi(theta, phi), direct_projection(theta, phi), atol=1e-12)
    # and agrees with the library's own span/project route
    w = np.array([0.0, math.cos(phi), math.sin(phi)])
    p = h3.project(h3.span([E1, w]), [math.cos(theta), math.sin(theta), 0.0])
    np.testing.assert_allclose(h3.v_phi(theta, phi), p / np.linalg.norm(p), atol=1e-12)


@given(thetas, angles, angles)
def test_pair_dot_matches_direct_dot(theta, phi, psi):
    direct = direct_projection(theta, phi) @ direct_projection(theta, psi)
    assert h3.pair_dot(theta, phi, psi) == pytest.approx(direct, abs=1e-12)
    assert h3.pair_dot(theta, phi, psi) == pytest.approx(h3.pair_dot(theta, psi, phi), abs=1e-15)


def test_pair_dot_examples():
    t = math.radians(50)
    assert h3.pair_dot(t, 1.1, 1.1) == pytest.approx(1.0, abs=1e-15)
    star = math.acos(math.sqrt(math.cos(t) / (1 + math.cos(t))))
    c = math.cos(t)
    assert h3.pair_dot(t, star, -star) == pytest.approx((3 * c - 1) / (c + 1), abs=1e-14)


def test_lemma_interval_anchors():
    lo, hi = h3.lemma_interval(math.acos(1 / 3))
    assert lo == pytest.approx(0.0, abs=1e-15) and hi == 1.0
    lo, _ = h3.lemma_interval(math.pi / 2 - 1e-9)
    assert lo == pytest.approx(-1.0, abs=1e-8)
    assert h3.lemma_interval(math.pi / 3)[0] == pytest.approx(1 / 3, abs=1e-15)


def test_lemma_interval_by_independent_grid():
    # plain 720x720 grid of direct vector dots, then a finer local grid
    t = math.radians(50)
    axis = np.linspace(0, 2 * math.pi, 720)
    V = np.array([direct_projection(t, p) for p in axis])
    D = V @ V.T
    i, j = np.unravel_index(np.argmin(D), D.shape)
    fine_p = np.linspace(axis[i] - 0.01, axis[i] + 0.01, 201)
    fine_q = np.linspace(axis[j] - 0.01, axis[j] + 0.01, 201)
    Vp = np.array([direct_projection(t, p) for p in fine_p])
    Vq = np.array([direct_projection(t, q) for q in fine_q])
    observed_min = min(D.min(), (Vp @ Vq.T).min())
    lo, hi = h3.lemma_interval(t)
    assert abs(observed_min - lo) <= 1e-4
    assert abs(D.max() - hi) <= 1e-4
    assert observed_min >= lo - 1e-12


def test_extrema_critical_points():
    for t in [math.radians(d) for d in (15, 40, 60, 75)]:
        for pt in h3.lemma_extrema(t):
            eps = 1e-6
            gx = (h3.pair_dot(t, pt.phi + eps, pt.psi) - h3.pair_dot(t, pt.phi - eps, pt.psi)) / (2 * eps)
            gy = (h3.pair_dot(t, pt.phi, pt.psi + eps) - h3.pair_dot(t, pt.phi, pt.psi - eps)) / (2 * eps)
            assert math.hypot(gx, gy) <= 1e-6, pt
        kinds = {p.kind: p.value for p in h3.lemma_extrema(t)}
        assert kinds["sin_zero"] == pytest.approx(1.0, abs=1e-15)
        assert kinds["quartic"] == pytest.approx(h3.lemma_interval(t)[0], abs=1e-14)


def test_quartic_root_at_sixty_degrees():
    t = math.pi / 3
    star = h3.extremal_phi(t)
    assert math.cos(star) ** 2 == pytest.approx(1 / 3, abs=1e-15)
    assert abs(h3.quartic_residual(t, star)) <= 1e-12


def test_solve_pair_examples():
    t = math.pi / 3
    assert h3.solve_pair(t, 1.0) == (0.0, 0.0)
    lo = h3.lemma_interval(t)[0]
    phi, psi = h3.solve_pair(t, lo)
    assert phi == pytest.approx(h3.extremal_phi(t)) and psi == -phi
    phi, psi = h3.solve_pair(t, 0.5)
    assert abs(h3.pair_dot(t, phi, psi) - 0.5) <= 1e-10
    # grid oracle: the nearest antidiagonal sample sits next to the root
    axis = np.linspace(0, h3.extremal_phi(t), 2001)
    k = np.argmin(np.abs(h3.pair_dot(t, axis, -axis) - 0.5))
    assert abs(axis[k] - phi) <= axis[1] - axis[0]
    with pytest.raises(h3.TargetOutOfRange):
        h3.solve_pair(t, 0.2)


@given(thetas, st.floats(0, 1))
def test_solve_pair_hits_any_target(theta, s):
    lo, hi = h3.lemma_interval(theta)
    target = lo + s * (hi - lo)
    phi, psi = h3.solve_pair(theta, target)
    assert abs(h3.pair_dot(theta, phi, psi) - target) <= 1e-10


# -- f and the angle ladder ---------------------------------------------------

def test_f_anchor_values():
    assert h3.f(0.0) == -1.0 and h3.f(Fraction(1, 3)) == 0 and h3.f(1.0) == 1.0


def test_f_monotone_and_below_identity():
    x = np.linspace(0, 1, 10_001)
    y = h3.f(x)
    assert np.all(np.diff(y) > 0)
    assert np.all(y[:-1] < x[:-1])


def test_f_inverse():
    for k in range(50):
        assert h3.f(h3.f_inverse(h3.c(k))) == h3.c(k)


def test_schedule_examples():
    assert h3.c(0) == 0 and h3.theta(0) == math.pi / 2
    assert h3.c(1) == Fraction(1, 3)
    assert h3.n_min(math.pi / 2) == 0
    assert h3.n_min(math.pi / 3) == 2
    assert h3.n_min(math.pi / 4) == 5
    with pytest.raises(h3.NegativeIndex):
        h3.c(-1)
    with pytest.raises(h3.NegativeIndex):
        h3.theta(-1)


def test_theta_matches_arccos_form():
    for n in range(0, 2000, 7):
        assert h3.theta(n) == pytest.approx(math.acos(n / (n + 2)), abs=1e-7)
    for n in range(0, 60):
        assert h3.theta(n) == pytest.approx(math.acos(n / (n + 2)), abs=1e-13)


@given(st.floats(1e-4, math.pi / 2))
def test_n_min_by_scan(angle):
    n = h3.n_min(angle, slack=0.0)
    assert h3.theta(n) <= angle
    assert n == 0 or h3.theta(n - 1) > angle


def test_theta_limit_and_monotone():
    ts = [h3.theta(n) for n in range(10_001)]
    assert all(a > b for a, b in zip(ts, ts[1:]))
    assert h3.theta(10 ** 6) < 1e-2


def test_scan_pair_dot_matches_interval():
    for d in (10, 45, 80):
        t = math.radians(d)
        r = h3.scan_pair_dot(t)
        lo, hi = h3.lemma_interval(t)
        assert abs(r.minimum - lo) <= 1e-4 and abs(r.maximum - hi) <= 1e-4


def test_subspace_serialisation():
    E = h3.span([E1, E1 + E3])
    again = h3.Subspace3.from_dict(E.to_dict())
    assert again.is_close(E, 0.0) and again.dim == 2

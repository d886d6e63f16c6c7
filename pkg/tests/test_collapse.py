import dataclasses
import json
import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from sasaki import collapse as col
from sasaki import hilbert3 as h3

E1, E2, E3 = np.eye(3)


def ray_angle(u, v):
    """Angle between lines by plain arccos, for cross-checking."""
    u, v = np.asarray(u, float), np.asarray(v, float)
    c = abs(u @ v) / (np.linalg.norm(u) * np.linalg.norm(v))
    return math.acos(min(1.0, c))


def at_angle(t):
    return np.array([math.cos(t), math.sin(t), 0.0])


def final_pair(cert):
    vecs = [*cert.initial_atoms, *[None] * len(cert.premises), *[s.result for s in cert.steps]]
    i, j = cert.final
    return vecs[i], vecs[j]


def mutate_step(cert, r, k, **changes):
    rounds = [list(x) for x in cert.rounds]
    rounds[r][k] = dataclasses.replace(rounds[r][k], **changes)
    return dataclasses.replace(cert, rounds=tuple(tuple(x) for x in rounds))


# -- induction step -----------------------------------------------------------

def test_step_from_first_rung_reaches_orthogonal():
    a, b, sa, sb = col.induction_step(E1, at_angle(math.acos(1 / 3)), 1)
    assert abs(a @ b) <= 1e-12
    assert sa.witness == 0 and sb.witness == 0 and sa.parent == 1


def test_step_sixty_degrees():
    a, b, _, _ = col.induction_step(E1, at_angle(math.pi / 3), 2)
    assert ray_angle(a, b) == pytest.approx(math.acos(1 / 3), abs=1e-9)
    assert h3.angle_atoms(h3.atom(a), h3.atom(b)) == pytest.approx(h3.theta(1), abs=1e-9)


def test_step_postconditions():
    u, v = E1, at_angle(0.4)
    n = h3.n_min(0.4)
    a, b, sa, sb = col.induction_step(u, v, n)
    for step, res in ((sa, a), (sb, b)):
        plane = h3.span(step.plane)
        assert plane.dim == 2
        assert h3.leq_sub(h3.atom(u), plane)
        assert h3.sasaki_sub(h3.atom(v), plane).is_close(h3.atom(res), 1e-9)
    assert np.allclose(col.frame(u, v)[2], [0, 0, 1])


def test_step_errors():
    with pytest.raises(col.DegeneratePair):
        col.induction_step(E1, E1, 1)
    with pytest.raises(col.DegeneratePair):
        col.induction_step(E1, -E1, 3)
    with pytest.raises(col.AngleTooSmall):
        col.induction_step(E1, at_angle(0.3), 1)


# -- collapse -----------------------------------------------------------------

def test_collapse_orthogonal_pair():
    cert = col.collapse(E1, E2)
    assert cert.rounds == () and cert.final == (0, 1)
    report = col.verify_certificate(cert)
    assert report and report.depth == 1 and report.final_residual <= 1e-15


def test_collapse_sixty_degrees():
    cert = col.collapse(E1, at_angle(math.pi / 3))
    assert len(cert.rounds) == 2
    report = col.verify_certificate(cert)
    assert report and report.rounds == 2 and report.depth == 3


def test_collapse_forty_five_degrees():
    cert = col.collapse([1, 0, 0], [1, 1, 0])
    assert len(cert.rounds) == 5
    assert col.verify_certificate(cert)


def test_collapse_errors():
    with pytest.raises(col.DegeneratePair):
        col.collapse(E1, 3 * E1)
    with pytest.raises(h3.DegenerateInput):
        col.collapse(E1, [0, 0, 0])


def test_round_angles_follow_ladder():
    rng = np.random.default_rng(7)
    for u, v in rng.normal(size=(20, 2, 3)):
        cert = col.collapse(u, v)
        n = h3.n_min(ray_angle(u, v))
        assert len(cert.rounds) == n
        for k, (sa, sb) in enumerate(cert.rounds, start=1):
            assert ray_angle(sa.result, sb.result) == pytest.approx(h3.theta(n - k), abs=1e-8)
        report = col.verify_certificate(cert)
        assert report.depth == n + 1


@settings(max_examples=40, deadline=None)
@given(st.floats(0.05, math.pi / 2), st.floats(0, 2 * math.pi))
def test_collapse_any_angle(t, spin):
    # rotate the plane of the pair about e1 so e3 varies too
    u = E1
    v = np.array([math.cos(t), math.sin(t) * math.cos(spin), math.sin(t) * math.sin(spin)])
    cert = col.collapse(u, v)
    assert len(cert.rounds) == h3.n_min(ray_angle(u, v))
    a, b = final_pair(cert)
    assert abs(a @ b) <= 1e-7
    assert col.verify_certificate(cert)


def test_collapse_accepts_subspaces():
    cert = col.collapse(h3.atom(E1), h3.atom([1, 1, 1]))
    assert col.verify_certificate(cert)


# -- verifier mutations --------------------------------------------------------

@pytest.fixture(scope="module")
def cert():
    return col.collapse(E1, at_angle(math.pi / 4))


def test_mutation_perturbed_result(cert):
    bad = mutate_step(cert, 1, 0, result=cert.rounds[1][0].result + 1e-3 * E3)
    report = col.verify_certificate(bad)
    assert not report and report.check == "iii"


def test_mutation_plane_omits_witness(cert):
    step = cert.rounds[0][1]
    # plane through the parent's image but not the witness e1
    bad = mutate_step(cert, 0, 1, plane=np.array([step.result, np.cross(E1, step.result)]))
    report = col.verify_certificate(bad)
    assert not report and report.check == "ii"


def test_mutation_non_orthogonal_final(cert):
    bad = dataclasses.replace(cert, final=(0, 1))
    report = col.verify_certificate(bad)
    assert not report and report.check == "iv"
    assert report.final_residual == pytest.approx(math.cos(math.pi / 4), abs=1e-12)


def test_mutation_non_unit_initial(cert):
    bad = dataclasses.replace(cert, initial_atoms=(2 * cert.initial_atoms[0], cert.initial_atoms[1]))
    report = col.verify_certificate(bad)
    assert not report and report.check == "i"


def test_mutation_forward_reference(cert):
    bad = mutate_step(cert, 0, 0, parent=99)
    assert col.verify_certificate(bad).check == "structure"


def test_verifier_never_raises_on_junk():
    for junk in ("", "[]", "{}", '{"schema": "sasaki-collapse/1"}', "not json"):
        assert not col.verify_certificate(junk)


# -- serialisation --------------------------------------------------------------

def test_json_round_trip_is_exact(cert):
    again = col.CollapseCertificate.from_json(cert.to_json())
    assert again.to_json() == cert.to_json()
    for s, t in zip(cert.steps, again.steps):
        assert np.array_equal(s.result, t.result) and s.phi == t.phi
    assert col.verify_certificate(again)


def test_tampered_json_rejected(cert):
    doc = json.loads(cert.to_json())
    doc["rounds"][2][1]["result"][2] += 1e-3
    assert col.verify_certificate(doc).check == "iii"


def test_format_errors():
    with pytest.raises(col.CertificateFormatError):
        col.CollapseCertificate.from_json('{"schema": "other"}')
    with pytest.raises(col.CertificateFormatError):
        col.CollapseCertificate.from_json("[1, 2]")


# -- refutation ---------------------------------------------------------------

def test_refute_orthogonal_subspace():
    cert = col.refute_second_element(E1, [E2, E3])
    assert cert.rounds == () and cert.prelude == ()
    assert col.verify_certificate(cert)


def test_refute_already_above():
    with pytest.raises(col.AlreadyAbove):
        col.refute_second_element(E1, [E1])
    with pytest.raises(col.AlreadyAbove):
        col.refute_second_element(E1, h3.WHOLE)


def test_refute_forty_five_degrees():
    E = h3.span([np.array([1, 1, 0]) / math.sqrt(2), E3])
    cert = col.refute_second_element(E1, E)
    b = cert.prelude[0].result
    assert h3.atom(b).is_close(h3.atom([1, 1, 0]), 1e-12)
    assert len(cert.rounds) == h3.n_min(math.pi / 4) == 5
    report = col.verify_certificate(cert)
    assert report and report.depth == 7


def test_refute_mutation_premise():
    E = h3.span([[1, 1, 0], E3])
    cert = col.refute_second_element(E1, E)
    bad = dataclasses.replace(cert, prelude=(dataclasses.replace(cert.prelude[0], witness=0),))
    assert col.verify_certificate(bad).check == "ii"


def test_generation_is_deterministic():
    u, v = np.random.default_rng(3).normal(size=(2, 3))
    assert col.collapse(u, v).to_json() == col.collapse(u, v).to_json()

import json
from fractions import Fraction

import numpy as np
import pytest

from banachdbar import acslab as acs
from banachdbar.acslab import GForm01, GTangent, LieGroupModel, QComplex
from banachdbar.dbarlab import poly
from banachdbar.dbarlab.poly import PolyForm01, PolyFunction

ADD = LieGroupModel.additive()
GL2 = LieGroupModel.gl(2)
z, zb = PolyFunction.z, PolyFunction.zbar


def test_qcomplex_is_exact():
    a = QComplex.of(0.1 + 0.2j)
    assert (a + a - a) == a
    assert a * QComplex(0, 1) == QComplex(-a.im, a.re)
    assert a.conjugate() == QComplex(a.re, -a.im)
    assert QComplex(Fraction(1, 3)) * 3 == 1


def test_maurer_cartan_examples():
    assert acs.maurer_cartan(ADD, 5 + 1j, 2 - 3j) == 2 - 3j
    g1 = LieGroupModel.gl(1)
    assert acs.maurer_cartan(g1, np.array([[2.0]]), np.array([[4.0]]))[0, 0] == 2
    nu = np.array([[1, 2j], [3, 4]])
    assert np.array_equal(acs.maurer_cartan(GL2, np.eye(2), nu), nu)
    with pytest.raises(ValueError):
        acs.maurer_cartan(GL2, np.zeros((2, 2)), nu)


def test_group_model_validation_and_json():
    with pytest.raises(ValueError):
        LieGroupModel("heisenberg", 1)
    with pytest.raises(ValueError):
        LieGroupModel("additive", 2)
    for G in (ADD, GL2):
        assert LieGroupModel.from_json(G.to_json()) == G


def test_membership_examples(rng):
    f0 = GForm01.zero(ADD, 2)
    V = GTangent(np.zeros(2), 0j, np.zeros(2), np.array([1, 2j]), 0j, 3 + 1j)
    assert acs.is_antiholomorphic_tangent(V, f0).ok
    W = GTangent(np.zeros(2), 0j, np.array([1e-3, 0]), np.array([1, 2j]), 0j, 3 + 1j)
    assert not acs.is_antiholomorphic_tangent(W, f0).ok
    for G in (ADD, GL2):
        f = acs.random_gform(G, 2, 3, rng)
        x = rng.normal(size=2) + 1j * rng.normal(size=2)
        zz = 1 + 0.5j if G is ADD else acs.random_gl_element(2, rng)
        nu01 = rng.normal() if G is ADD else rng.normal(size=(2, 2))
        M = acs.member(f, x, zz, rng.normal(size=2) + 1j * rng.normal(size=2), nu01)
        assert acs.is_antiholomorphic_tangent(M, f).ok


def test_decompose_with_zero_form(rng):
    V = acs.random_tangent(ADD, 2, rng)
    V1, V2 = acs.decompose(V, GForm01.zero(ADD, 2))
    assert np.array_equal(V1.zeta01, V.zeta01) and V1.nu01 == V.nu01
    assert not V1.zeta10.any() and V1.nu10 == 0
    assert np.array_equal(V2.zeta10, V.zeta10) and V2.nu10 == V.nu10
    assert not V2.zeta01.any() and V2.nu01 == 0


@pytest.mark.parametrize("G", [ADD, GL2])
def test_decompose_exact_and_inexact(G, rng):
    for _ in range(20):
        f = acs.random_gform(G, 3, 2, rng)
        V = acs.random_tangent(G, 3, rng)
        V1, V2 = acs.decompose(V, f, exact_mode=True)
        assert (V1 + V2).equals(V.exact())
        F1, F2 = acs.decompose(V, f)
        assert (F1 + F2).equals(V, tol=1e-12)
        for W in (V1, V2.conj(), F1, F2.conj()):
            assert acs.is_antiholomorphic_tangent(W, f).ok


@pytest.mark.parametrize("G", [ADD, GL2])
def test_decomposition_is_unique(G, rng):
    f = acs.random_gform(G, 2, 2, rng)
    x = 0.3 * rng.normal(size=2)
    zz = 0.2j if G is ADD else acs.random_gl_element(2, rng)
    assert acs.uniqueness_kernel_dim(f, x, zz) == 0


def test_tangent_json_round_trip(rng):
    V = acs.random_tangent(GL2, 2, rng)
    back = GTangent.from_json(json.loads(json.dumps(V.to_json())))
    assert back.equals(V)
    f = acs.random_gform(GL2, 2, 2, rng)
    g = GForm01.from_json(json.loads(json.dumps(f.to_json())))
    x = rng.normal(size=2) + 0j
    b = np.array([1, 1j])
    assert np.allclose(f(x, b), g(x, b), rtol=0, atol=1e-15)


def test_abelian_integrability_examples(rng):
    closed = GForm01(ADD, poly.dbar(poly.random_poly(3, 3, rng)))
    x = rng.normal(size=3) + 1j * rng.normal(size=3)
    b, bp = rng.normal(size=3) + 0j, rng.normal(size=3) + 0j
    assert abs(acs.integrability_residual(closed, x, b, bp)) < 1e-12
    assert all(c.is_zero() for c in acs.integrability_coefficients(closed).values())
    f = GForm01(ADD, PolyForm01(2, [zb(2, 1), PolyFunction(2)]))
    res = acs.integrability_residual(f, np.zeros(2), np.array([1, 0]), np.array([0, 1]))
    # dbar f = d(xbar2)/dxbar2 dxbar2 ^ dxbar1 = -dxbar1 ^ dxbar2
    assert res == -1
    assert acs.integrability_coefficients(f)[(0, 1)] == PolyFunction.constant(2, -1)


def test_gl_integrability_includes_commutator():
    A = np.array([[0, 1], [0, 0]], dtype=complex)
    B = np.array([[0, 0], [1, 0]], dtype=complex)
    f = GForm01.constant(GL2, [A, B])
    res = acs.integrability_residual(f, np.zeros(2), np.array([1, 0]), np.array([0, 1]))
    assert np.array_equal(res, A @ B - B @ A)
    coeff = acs.integrability_coefficients(f)[(0, 1)]
    assert np.array_equal(coeff.coeffs[((0, 0), (0, 0))], A @ B - B @ A)
    g1 = GForm01.constant(LieGroupModel.gl(1), [np.eye(1) * 2, np.eye(1) * 3])
    assert np.all(acs.integrability_residual(g1, np.zeros(2), np.array([1, 0]),
                                             np.array([0, 1])) == 0)


def test_dbar_g_examples(rng):
    x = np.array([0.3 - 0.2j])
    b = np.array([0.7 + 0.1j])
    assert acs.dbar_g(ADD, z(1, 0) ** 2, x, b) == 0
    u = z(1, 0) * zb(1, 0)
    want = poly.dbar(u)[0](x) * b[0]
    assert abs(acs.dbar_g(ADD, u, x, b) - want) < 1e-15
    G1 = LieGroupModel.gl(1)
    e = PolyFunction.constant(1, np.eye(1))
    u = e + zb(1, 0) * np.eye(1) + zb(1, 0) ** 2 * (np.eye(1) / 2)
    ux = 1 + np.conj(x[0]) + np.conj(x[0]) ** 2 / 2
    want = (1 + np.conj(x[0])) * b[0] / ux
    assert abs(acs.dbar_g(G1, u, x, b)[0, 0] - want) < 1e-14


def test_gauge_transport_examples(rng):
    f = acs.random_gform(ADD, 2, 3, rng)
    same = acs.gauge_transport(f, PolyFunction(2), samples=16)
    assert same.g.form == f.form and same.max_residual < 1e-13
    w = poly.random_poly(2, 3, rng)
    exact_form = GForm01(ADD, poly.dbar(w))
    flat = acs.gauge_transport(exact_form, -w, samples=16)
    assert flat.g.form.is_zero() and flat.ok
    with pytest.raises(ValueError):
        acs.gauge_transport(GForm01.zero(GL2, 2), PolyFunction(2))


def test_section_holomorphy_examples(rng):
    u = poly.random_poly(2, 3, rng)
    f = GForm01(ADD, poly.dbar(u))
    pts = 0.5 * (rng.normal(size=(5, 2)) + 1j * rng.normal(size=(5, 2)))
    assert acs.section_holomorphy_check(u, f, pts).max_norm < 1e-13
    const = acs.section_holomorphy_check(PolyFunction.constant(2, 4), GForm01.zero(ADD, 2), pts)
    assert const.max_norm == 0
    bumped = acs.section_holomorphy_check(u + zb(2, 0), f, pts)
    assert np.allclose(bumped.residuals[:, 0], 1, atol=1e-13)
    assert np.allclose(bumped.residuals[:, 1], 0, atol=1e-13)
    assert bumped.to_csv().splitlines()[0] == "point,vector,residual_norm"


def test_group_checks(rng):
    for _ in range(5):
        zz = acs.random_gl_element(2, rng)
        X, Y = rng.normal(size=(2, 2)) + 0j, rng.normal(size=(2, 2)) + 0j
        assert acs.maurer_cartan_residual(GL2, zz, X, Y) < 1e-3
        w = acs.random_gl_element(2, rng)
        assert acs.left_invariance_residual(GL2, w, zz, X) < 1e-12

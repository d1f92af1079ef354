"""Acceptance suite: one test per criterion, each printing a PASS/FAIL line.

Every check compares against an oracle computed here, independently of the
code path under test (closed forms, brute-force sums, or exact arithmetic).
"""
import itertools
import math
import subprocess
import sys
import time
from fractions import Fraction

import numpy as np

from banachdbar import acslab, dominate, mhcalc, runge
from banachdbar import multiindex as mi
from banachdbar.dbarlab import cauchy, condensation, minsup, poly
from banachdbar.sumspace import Block, SumSpaceSpec, SumVector


def self_power_oracle(exps) -> int:
    return math.prod(e**e for e in exps)


def random_khom(rng, dims, k_dense, terms=5):
    """Random k-homogeneous polynomial built monomial by monomial."""
    coeffs = {}
    for _ in range(terms):
        e = []
        for d, kn in zip(dims, k_dense):
            cuts = np.sort(rng.integers(0, kn + 1, size=d - 1))
            e.extend(np.diff(np.concatenate([[0], cuts, [kn]])).astype(int).tolist())
        coeffs[tuple(e)] = complex(rng.normal(), rng.normal())
    return mhcalc.KHomPolynomial(mi.MultiIndex.from_dense(k_dense), dims, coeffs)


def sample_sum_ball(rng, spec, count):
    """Points of the closed unit ball of an l1-sum, flattened."""
    parts, mods = [], []
    for b in spec.blocks:
        v = rng.normal(size=(count, b.dim)) + 1j * rng.normal(size=(count, b.dim))
        parts.append(v)
        mods.append(np.linalg.norm(v, b.p, axis=1))
    total = np.sum(mods, axis=0)
    scale = rng.uniform(0.2, 1.0, size=count) / total
    return np.concatenate(parts, axis=1) * scale[:, None]


# 1 -----------------------------------------------------------------------------

def test_monomial_norm_formula(report):
    t0 = time.perf_counter()
    space = SumSpaceSpec.l1([1, 1, 1, 1])
    sampler = mhcalc.NormSampler(points=256, refinements=8, polish=4)
    rng = np.random.default_rng(1)
    exact_bad = sample_err = max_err = 0.0
    count = 0
    for k in mi.enumerate_indices(4, 8):
        if not k:
            continue
        dense = k.dense(4)
        want = Fraction(self_power_oracle(dense), sum(dense) ** sum(dense))
        phi = mhcalc.KHomPolynomial(k, space.dims, {dense: 1})
        est = mhcalc.khom_norm(phi, space)
        exact_bad += (not est.exact) or est.exact_value != want
        sampled = mhcalc.khom_norm(phi, space, sampler, method="sample")
        sample_err = max(sample_err, abs(sampled.value - float(want)))
        x = SumVector({n: [complex(*rng.normal(size=2))] for n in range(1, 5)})
        y = mhcalc.homogeneity_maximizer(space, k, x)
        assert sum(abs(v[0]) for v in y.components.values()) <= 1 + 1e-15
        max_err = max(max_err, abs(abs(phi.evaluate(space, y)) - float(want)))
        count += 1
    elapsed = time.perf_counter() - t0
    ok = exact_bad == 0 and sample_err <= 1e-6 and max_err <= 1e-12 and elapsed < 10
    report(1, ok, f"{count} monomials, exact mismatches={int(exact_bad)}, "
                  f"sampled err={sample_err:.2e}, maximizer err={max_err:.2e}, {elapsed:.1f}s")
    assert ok


# 2 -----------------------------------------------------------------------------

def test_homogeneity_bound(report):
    rng = np.random.default_rng(2)
    spec = SumSpaceSpec((Block(2, 2), Block(3, 2), Block(1, 1)), 1.0)
    sampler = mhcalc.NormSampler(points=2048, refinements=32, polish=8)
    violations = pairs = 0
    worst = 0.0
    for _ in range(20):
        k_dense = [0, 0, 0]
        while not any(k_dense):
            k_dense = rng.integers(0, 3, size=3).tolist()
        phi = random_khom(rng, spec.dims, k_dense)
        norm = mhcalc.khom_norm(phi, spec, sampler).value
        pts = sample_sum_ball(rng, spec, 500)
        vals = np.abs(phi(pts))
        for x, v in zip(pts, vals):
            bound = mhcalc.homogeneity_bound(phi, spec, SumVector.unflatten(spec, x), norm)
            worst = max(worst, v / bound if bound else 0.0)
            violations += v > bound * (1 + 1e-10)
            pairs += 1
    ok = violations == 0 and pairs == 10_000
    report(2, ok, f"{pairs} pairs, violations={violations}, max |phi(x)|/bound={worst:.4f}")
    assert ok


# 3 -----------------------------------------------------------------------------

def block_sum_oracle(f, e):
    out, off = [], 0
    for d in f.dims:
        out.append(sum(e[off:off + d]))
        off += d
    return tuple(out)


def test_fourier_extraction(report):
    rng = np.random.default_rng(3)
    exact_ok = idem_ok = orth_ok = True
    worst = 0.0
    for _ in range(100):
        dims = tuple(int(d) for d in rng.integers(1, 3, size=int(rng.integers(1, 4))))
        nvar = sum(dims)
        coeffs = {}
        for _ in range(int(rng.integers(1, 9))):
            deg = int(rng.integers(0, 7))
            cuts = np.sort(rng.integers(0, deg + 1, size=nvar - 1))
            e = tuple(np.diff(np.concatenate([[0], cuts, [deg]])).astype(int).tolist())
            coeffs[e] = Fraction(int(rng.integers(1, 10)) * int(rng.choice([-1, 1])),
                                 int(rng.integers(1, 8)))
        f = mhcalc.BlockPolynomial(dims, coeffs)
        groups = {}
        for e, c in f.coeffs.items():
            groups.setdefault(block_sum_oracle(f, e), {})[e] = c
        for key, want in groups.items():
            k = mi.MultiIndex.from_dense(key)
            got = mhcalc.component(f, k, 6, exact=True)
            exact_ok &= got.coeffs == want
            fl = mhcalc.component(f, k, 6)
            exact_ok &= set(fl.coeffs) == set(want)
            for e, c in want.items():
                worst = max(worst, abs(complex(fl.coeffs.get(e, 0)) - complex(c)) / abs(complex(c)))
            idem_ok &= mhcalc.component(got, k, 6, exact=True) == got
            for other in groups:
                if other != key:
                    j = mi.MultiIndex.from_dense(other)
                    orth_ok &= not mhcalc.component(got, j, 6, exact=True).coeffs
    ok = exact_ok and idem_ok and orth_ok and worst <= 1e-12
    report(3, ok, f"exact={exact_ok}, idempotent={idem_ok}, orthogonal={orth_ok}, "
                  f"float rel err={worst:.2e}")
    assert ok


# 4 -----------------------------------------------------------------------------

def delta_brute(q, z, D):
    """Direct sum over itertools.product, no shared enumeration code."""
    total = 0.0
    for k in itertools.product(range(D + 1), repeat=len(z)):
        d = sum(k)
        if d > D:
            continue
        w = d**d / math.prod(e**e for e in k)
        supp = sum(1 for e in k if e)
        total += w * abs(q) ** supp * math.prod(t**e for t, e in zip(z, k))
    return total


def test_delta_closed_forms(report):
    zero_ok = all(dominate.delta_truncated(q, [0.0], 30).value == 1.0 for q in (0.3, 1.0, 2.5))
    zero_ok &= dominate.delta_certified(0.5, [0.0, 0.0], 10).upper == 1.0
    single = 0.0
    for q in (0.25, 0.5, 1.0):
        for t in (0.1, 0.2, 0.3, 0.4, 0.5):
            got = dominate.delta_truncated(q, [t], 60).value
            single = max(single, abs(got - (1 + q * t / (1 - t))))
    rng = np.random.default_rng(4)
    bracket_ok = True
    for _ in range(6):
        z = rng.dirichlet(np.ones(3)) * rng.uniform(0.05, 0.35)
        q = rng.uniform(0.2, 1.0)
        cert = dominate.delta_certified(q, z, 10)
        brute = delta_brute(q, z, 22)
        bracket_ok &= cert.certified and cert.value <= brute <= cert.upper
        bracket_ok &= math.isclose(cert.value, delta_brute(q, z, 10), rel_tol=1e-12)
    ok = zero_ok and single <= 1e-8 and bracket_ok
    report(4, ok, f"Delta(q,0)=1: {zero_ok}, single-block err={single:.2e}, bracket={bracket_ok}")
    assert ok


# 5 -----------------------------------------------------------------------------

def test_runge_geometric(report):
    t0 = time.perf_counter()
    E = runge.geometric_fixture()
    rng = np.random.default_rng(5)
    ok = True
    parts = []
    for r in (0.2, 0.1):
        g, cert = runge.approximate(E, 1.0, r, 1e-2, samples=10_000, seed=0)
        rad = r * np.sqrt(rng.uniform(size=10_000))
        rad[:5000] = r * (1 - 1e-12)
        z = rad * np.exp(2j * np.pi * rng.uniform(size=10_000))
        err = float(np.max(np.abs(1 / (1 - z / 2) - g(z[:, None]))))
        ok &= cert.satisfied and err < cert.error_bound
        parts.append(f"r={r}: bound={cert.error_bound:.2e} sampled={err:.2e} "
                     f"certified={cert.certified}")
    elapsed = time.perf_counter() - t0
    ok &= elapsed < 30
    report(5, ok, "; ".join(parts) + f", {elapsed:.1f}s")
    assert ok


# 6 -----------------------------------------------------------------------------

def test_dbar_calculus(report):
    rng = np.random.default_rng(6)
    sq_ok = inv_ok = True
    for _ in range(100):
        u = poly.random_poly(int(rng.integers(1, 5)), 5, rng, exact=True)
        f = poly.dbar(u)
        sq_ok &= all(r.is_zero() for r in poly.closedness_residuals(f).values())
        w = poly.random_poly(int(rng.integers(1, 5)), 6, rng, exact=True)
        g = poly.dbar(w)
        assert g.degree <= 5
        inv_ok &= poly.dbar(poly.homotopy_solve(g)) == g
    worst = 0.0
    for _ in range(3):
        n = 2
        w = poly.random_poly(n, 4, rng)
        f = poly.dbar(w)
        a = 0.2 * (rng.normal(size=n) + 1j * rng.normal(size=n))
        v = rng.normal(size=n) + 1j * rng.normal(size=n)
        v /= np.linalg.norm(v)
        sol = cauchy.cauchy_pompeiu_slice_solve(cauchy.slice_form(f, a, v), 1.0, 256, 256)
        ref = cauchy.slice_function(poly.homotopy_solve(f), a, v)
        res = cauchy.dbar_residual(sol, ref)
        worst = max(worst, float(np.nanmax(np.abs(res))))
    ok = sq_ok and inv_ok and worst < 1e-5
    report(6, ok, f"dbar^2=0: {sq_ok}, right inverse: {inv_ok}, slice residual={worst:.2e}")
    assert ok


# 7 -----------------------------------------------------------------------------

def test_condensation(report):
    raw = condensation.synthetic_family(4, lambda p: 1 + p % 2)
    spec = condensation.CondensationSpec.normalized(raw, samples=2048)
    C = condensation.condense(spec)
    members = sorted(spec.family)
    closed = poly.is_closed(C.form)[0]
    weights_ok = C.weights == {p: Fraction(1, p**p) for p in members}
    blocks_ok = all(C.block(p) == spec.family[p] * Fraction(1, p**p) for p in members)
    # numeric: a point supported on block p sees p^{-p} f_p only
    rng = np.random.default_rng(7)
    num = 0.0
    off = 0
    for p, d in zip(members, C.dims):
        y = 0.3 * (rng.normal(size=d) + 1j * rng.normal(size=d))
        x = np.zeros(sum(C.dims), dtype=complex)
        x[off:off + d] = y
        for j in range(d):
            got = complex(C.form[off + j](x))
            want = complex(spec.family[p][j](y)) / p**p
            num = max(num, abs(got - want))
        off += d
    ok = len(members) == 3 and closed and weights_ok and blocks_ok and num < 1e-14
    report(7, ok, f"members={members}, closed={closed}, weights exact={weights_ok}, "
                  f"blocks exact={blocks_ok}, pointwise err={num:.1e}")
    assert ok


# 8 -----------------------------------------------------------------------------

def test_min_sup(report):
    rng = np.random.default_rng(8)
    sup_ok = exact_ok = True
    gap = -math.inf
    for i in range(20):
        n = int(rng.integers(1, 4))
        w = poly.random_poly(n, 3, rng, exact=True, terms=5)
        f = poly.dbar(w)
        if f.is_zero():
            w = w + poly.PolyFunction.zbar(n, 0)
            f = poly.dbar(w)
        grid = minsup.ball_grid(n, 1.0, 1024, seed=i)
        res = minsup.min_sup_solution(f, 1.0, grid)
        supw = float(np.max(np.abs(w(grid))))
        sup_ok &= res.sup <= supw + 1e-8
        sup_ok &= math.isclose(res.sup, float(np.max(np.abs(res.u(grid)))), rel_tol=1e-9)
        exact_ok &= poly.dbar(res.u) == f
        gap = max(gap, res.sup - supw)
    ok = sup_ok and exact_ok
    report(8, ok, f"sup <= sup|w|: {sup_ok} (max sup - sup|w| = {gap:.3f}), dbar u = f: {exact_ok}")
    assert ok


# 9 -----------------------------------------------------------------------------

def test_acs_suite(report):
    rng = np.random.default_rng(9)
    decomp_ok, worst = True, 0.0
    for i in range(1000):
        G = acslab.LieGroupModel.additive() if i % 2 else acslab.LieGroupModel.gl(2)
        n = int(rng.integers(1, 4))
        f = acslab.random_gform(G, n, 2, rng)
        V = acslab.random_tangent(G, n, rng)
        V1, V2 = acslab.decompose(V, f, exact_mode=True)
        decomp_ok &= (V1 + V2).equals(V.exact())
        for W in (V1, V2.conj()):
            m = acslab.is_antiholomorphic_tangent(W, f)
            worst = max(worst, m.base_residual, m.fiber_residual)

    abelian_ok = True
    A = acslab.LieGroupModel.additive()
    for _ in range(20):
        f = acslab.random_gform(A, 3, 3, rng)
        abelian_ok &= acslab.integrability_coefficients(f) == poly.closedness_residuals(f.form)

    G2 = acslab.LieGroupModel.gl(2)
    gl_ok = True
    for _ in range(10):
        Am = rng.integers(-5, 6, size=(2, 2)).astype(complex)
        Bm = rng.integers(-5, 6, size=(2, 2)).astype(complex)
        f = acslab.GForm01.constant(G2, [Am, Bm])
        x = rng.normal(size=2) + 1j * rng.normal(size=2)
        res = acslab.integrability_residual(f, x, np.array([1, 0]), np.array([0, 1]))
        gl_ok &= np.array_equal(res, Am @ Bm - Bm @ Am)
        res = acslab.integrability_residual(f, x, np.array([2, 1j]), np.array([1, 3]))
        gl_ok &= np.array_equal(res, (6 - 1j) * (Am @ Bm - Bm @ Am))

    transport = 0.0
    for s in range(5):
        f = acslab.random_gform(A, 2, 3, rng)
        u = poly.random_poly(2, 3, rng)
        transport = max(transport, acslab.gauge_transport(f, u, samples=64, seed=s).max_residual)

    mc = 0.0
    for _ in range(10):
        z = acslab.random_gl_element(2, rng)
        X = rng.normal(size=(2, 2)) + 1j * rng.normal(size=(2, 2))
        Y = rng.normal(size=(2, 2)) + 1j * rng.normal(size=(2, 2))
        mc = max(mc, acslab.maurer_cartan_residual(G2, z, X, Y, h=1e-5))

    ok = (decomp_ok and worst < 1e-12 and abelian_ok and gl_ok
          and transport < 1e-10 and mc < 1e-3)
    report(9, ok, f"V1+V2=V exact: {decomp_ok}, membership={worst:.1e}, abelian={abelian_ok}, "
                  f"GL(2) commutator={gl_ok}, transport={transport:.1e}, MC={mc:.1e}")
    assert ok


# 10 ----------------------------------------------------------------------------

def test_selftest_deterministic(report, tmp_path):
    outs = []
    for i in range(2):
        path = tmp_path / f"run{i}.json"
        proc = subprocess.run([sys.executable, "-m", "banachdbar", "selftest", "--seed", "0",
                               "--out", str(path)], capture_output=True, timeout=300)
        assert proc.returncode == 0, proc.stderr.decode()
        outs.append(path.read_bytes())
    ok = outs[0] == outs[1] and len(outs[0]) > 0
    report(10, ok, f"two runs byte-identical: {outs[0] == outs[1]} ({len(outs[0])} bytes)")
    assert ok

"""Deterministic invariant suite behind ``banachdbar selftest``.

Each check returns a name, a pass flag and a few numbers; nothing
time-dependent is recorded, so two runs with the same seed give identical JSON.
"""
from __future__ import annotations

import math
from fractions import Fraction
from typing import Callable

import numpy as np

from . import acslab, dominate, mhcalc, runge
from . import multiindex as mi
from .dbarlab import condensation as cond
from .dbarlab import poly
from .sumspace import SumSpaceSpec


def check_monomial_norms(rng: np.random.Generator) -> dict:
    space = SumSpaceSpec.l1([1, 1, 1, 1])
    worst = 0.0
    count = 0
    for k in mi.enumerate_indices(4, 6):
        if not k:
            continue
        phi = mhcalc.KHomPolynomial(k, space.dims, {k.dense(4): 1})
        est = mhcalc.khom_norm(phi, space)
        want = 1 / mi.degree_weight(k)
        worst = max(worst, abs(float(est.exact_value - want)) if est.exact else math.inf)
        count += 1
    return {"passed": bool(worst == 0.0), "count": count, "max_error": worst}


def check_fourier(rng: np.random.Generator) -> dict:
    dims = (1, 2)
    worst = 0.0
    exact_ok = True
    for _ in range(10):
        coeffs = {}
        for _ in range(6):
            e = tuple(int(v) for v in rng.integers(0, 3, size=3))
            coeffs[e] = Fraction(int(rng.integers(-5, 6)), int(rng.integers(1, 5)))
        f = mhcalc.BlockPolynomial(dims, coeffs)
        parts = f.components()
        for k, part in parts.items():
            ex = mhcalc.component(f, k, 4, exact=True)
            exact_ok &= ex == part
            fl = mhcalc.component(f, k, 4)
            for e, c in part.coeffs.items():
                worst = max(worst, abs(complex(fl.coeffs.get(e, 0)) - complex(c)) / abs(complex(c)))
    return {"passed": bool(exact_ok and worst <= 1e-12), "max_rel_error": worst}


def check_delta(rng: np.random.Generator) -> dict:
    zero = dominate.delta_truncated(0.7, [0.0], 30).value
    worst = 0.0
    for t in (0.1, 0.2, 0.3, 0.4, 0.5):
        got = dominate.delta_truncated(0.5, [t], 60).value
        worst = max(worst, abs(got - (1 + 0.5 * t / (1 - t))))
    z = [0.1, 0.05, 0.08]
    cert = dominate.delta_certified(0.6, z, 12)
    brute = dominate.delta_bruteforce(0.6, z, 16)
    bracket = cert.value <= brute <= cert.upper
    return {"passed": bool(zero == 1.0 and worst <= 1e-8 and bracket),
            "zero_value": zero, "max_single_block_error": worst}


def check_runge(rng: np.random.Generator, seed: int) -> dict:
    E = runge.geometric_fixture()
    _, cert = runge.approximate(E, 1.0, 0.2, 1e-2, samples=2000, seed=seed)
    ok = cert.satisfied and cert.sampled_max_error <= cert.error_bound
    return {"passed": bool(ok), "error_bound": cert.error_bound,
            "sampled_max_error": cert.sampled_max_error, "kset_size": len(cert.kset)}


def check_dbar(rng: np.random.Generator) -> dict:
    closed_ok = inverse_ok = True
    for _ in range(20):
        n = int(rng.integers(1, 4))
        u = poly.random_poly(n, 4, rng, exact=True)
        f = poly.dbar(u)
        closed_ok &= poly.is_closed(f)[0]
        inverse_ok &= poly.dbar(poly.homotopy_solve(f)) == f
    return {"passed": bool(closed_ok and inverse_ok)}


def check_condense(rng: np.random.Generator) -> dict:
    fam = cond.synthetic_family(3, lambda p: 1)
    spec = cond.CondensationSpec(3, fam)
    C = cond.condense(spec)
    weights_ok = C.weights == {2: Fraction(1, 4), 3: Fraction(1, 27)}
    blocks_ok = all(C.block(p) == cond._scale(fam[p], Fraction(1, p**p)) for p in (2, 3))
    return {"passed": bool(weights_ok and blocks_ok and poly.is_closed(C.form)[0])}


def check_acs(rng: np.random.Generator) -> dict:
    worst = 0.0
    exact_ok = True
    for i in range(50):
        G = acslab.LieGroupModel.additive() if i % 2 else acslab.LieGroupModel.gl(2)
        f = acslab.random_gform(G, 2, 2, rng)
        V = acslab.random_tangent(G, 2, rng)
        V1, V2 = acslab.decompose(V, f, exact_mode=True)
        exact_ok &= (V1 + V2).equals(V.exact())
        for W in (V1, V2.conj()):
            m = acslab.is_antiholomorphic_tangent(W, f)
            worst = max(worst, m.base_residual, m.fiber_residual)
    G = acslab.LieGroupModel.gl(2)
    z = acslab.random_gl_element(2, rng)
    X = rng.normal(size=(2, 2)) + 0j
    Y = rng.normal(size=(2, 2)) + 0j
    mc = acslab.maurer_cartan_residual(G, z, X, Y)
    return {"passed": bool(exact_ok and worst < 1e-12 and mc < 1e-3),
            "max_membership_residual": float(worst), "maurer_cartan_residual": float(mc)}


CHECKS: list[tuple[str, Callable]] = [
    ("monomial_norms", check_monomial_norms),
    ("fourier_extraction", check_fourier),
    ("delta_closed_forms", check_delta),
    ("runge_geometric", check_runge),
    ("dbar_calculus", check_dbar),
    ("condensation", check_condense),
    ("acs_decomposition", check_acs),
]


def run(seed: int = 0) -> dict:
    results = []
    for i, (name, fn) in enumerate(CHECKS):
        rng = np.random.default_rng([seed, i])
        out = fn(rng, seed) if fn is check_runge else fn(rng)
        results.append({"name": name, **out})
    return {"seed": seed, "passed": all(r["passed"] for r in results), "checks": results}

"""Runge-type approximation of a multihomogeneous expansion by a polynomial.

Keeps the components whose weight ``[f_k] (theta R)^||k|| Q^#k`` reaches
``delta``.  On ``||x|| < r`` with ``r < theta^2 R`` the dropped part is at most
``delta * sup_{||w|| <= theta} Delta(1/Q, w)``.
"""
from __future__ import annotations

import logging
import math
from dataclasses import dataclass, field

import numpy as np

from . import dominate
from . import multiindex as mi
from .mhcalc import MHExpansion
from .multiindex import MultiIndex
from .sumspace import SumSpaceSpec

log = logging.getLogger(__name__)

#: largest theta used on the certified path (e * 0.35 < 1)
THETA_CAP = 0.35


class CertificationError(RuntimeError):
    """The requested accuracy cannot be certified."""


@dataclass(frozen=True)
class RungeParams:
    R: float
    r: float
    theta: float
    Q: float
    delta: float
    eps: float

    def __post_init__(self):
        if not 0 < self.theta < 1:
            raise ValueError("theta must lie in (0, 1)")
        if not 0 < self.r < self.theta**2 * self.R:
            raise ValueError(f"need 0 < r < theta^2 R, got r={self.r}, theta^2 R={self.theta**2 * self.R}")
        if self.Q < 1:
            raise ValueError("Q must be >= 1")
        if self.delta < 0:
            raise ValueError("delta must be nonnegative")


@dataclass
class ApproximationCertificate:
    kset: list[MultiIndex]
    dropped_mass_bound: float
    delta_sup: float
    error_bound: float
    satisfied: bool
    certified: bool
    theta: float
    Q: float
    delta: float
    eps: float
    sampled_max_error: float | None = None
    samples: int = 0

    def to_json(self) -> dict:
        return {
            "kset": [k.to_json() for k in self.kset],
            "dropped_mass_bound": self.dropped_mass_bound,
            "delta_sup": self.delta_sup,
            "error_bound": self.error_bound,
            "satisfied": self.satisfied,
            "certified": self.certified,
            "theta": self.theta,
            "Q": self.Q,
            "delta": self.delta,
            "eps": self.eps,
            "sampled_max_error": self.sampled_max_error,
            "samples": self.samples,
        }


def weight(E: MHExpansion, k: MultiIndex, theta: float, Q: float) -> float:
    """``c'_k theta^||k|| = [f_k] (theta R)^||k|| Q^#k``."""
    nk = E.terms[k].norm
    if nk is None:
        raise ValueError(f"term {k!r} has no norm")
    return nk.value * (theta * E.R) ** mi.total_degree(k) * Q ** mi.support_size(k)


def select_kset(E: MHExpansion, params: RungeParams) -> list[MultiIndex]:
    return [k for k in E.terms if weight(E, k, params.theta, params.Q) >= params.delta]


def build_approximant(E: MHExpansion, kset) -> MHExpansion:
    missing = [k for k in kset if k not in E.terms]
    if missing:
        raise KeyError(f"indices not in the expansion: {missing}")
    return E.subset(kset)


def sample_ball(space: SumSpaceSpec, radius: float, count: int,
                rng: np.random.Generator) -> np.ndarray:
    """Points of the open ball of ``radius``, flattened; half near the sphere."""
    offs = space.offsets()
    pts = np.zeros((count, space.total_dim), dtype=complex)
    for n, (off, b) in enumerate(zip(offs, space.blocks)):
        v = rng.normal(size=(count, b.dim)) + 1j * rng.normal(size=(count, b.dim))
        v /= np.linalg.norm(v, b.p, axis=1, keepdims=True)
        pts[:, off:off + b.dim] = v * rng.exponential(size=(count, 1)) ** 2
    mods = np.stack([np.linalg.norm(pts[:, o:o + b.dim], b.p, axis=1)
                     for o, b in zip(offs, space.blocks)], axis=1)
    nrm = np.array([space.outer_norm(m) for m in mods])
    frac = rng.uniform(size=count)
    frac[: count // 2] = 1 - 1e-9
    return pts * (radius * frac / nrm)[:, None]


def sampled_error(E: MHExpansion, kset, radius: float, count: int = 10_000,
                  seed: int = 0) -> float:
    keep = set(kset)
    dropped = MHExpansion(E.space, E.R, {k: t for k, t in E.terms.items() if k not in keep})
    if not dropped.terms:
        return 0.0
    pts = sample_ball(E.space, radius, count, np.random.default_rng(seed))
    return float(np.max(np.abs(dropped(pts))))


def _delta_sup(Q: float, theta: float, certified: bool, seed: int) -> float:
    if certified:
        return dominate.delta_sup_bound(1.0 / Q, theta)
    return dominate.delta_sup_sampled(1.0 / Q, theta, seed=seed)


def certify_error(E: MHExpansion, params: RungeParams, *, samples: int = 10_000,
                  seed: int = 0, allow_sampled: bool = True) -> ApproximationCertificate:
    if E.space.outer != 1.0:
        raise ValueError("the approximation estimate is for l1-sums")
    certified = math.e * params.theta < 1
    if not certified and not allow_sampled:
        raise CertificationError(f"e*theta = {math.e * params.theta:.4f} >= 1")
    kset = select_kset(E, params)
    dsup = _delta_sup(params.Q, params.theta, certified, seed)
    bound = params.delta * dsup
    keep = set(kset)
    dropped_mass = sum(t.norm.value * params.r ** mi.total_degree(k)
                       for k, t in E.terms.items() if k not in keep)
    observed = sampled_error(E, kset, params.r, samples, seed) if samples else None
    if observed is not None and observed > bound * (1 + 1e-9) + 1e-15:
        log.warning("sampled error %.3e exceeds the bound %.3e", observed, bound)
    return ApproximationCertificate(
        kset=kset, dropped_mass_bound=float(dropped_mass), delta_sup=dsup,
        error_bound=bound, satisfied=bound < params.eps, certified=certified,
        theta=params.theta, Q=params.Q, delta=params.delta, eps=params.eps,
        sampled_max_error=observed, samples=samples,
    )


def choose_theta(R: float, r: float) -> tuple[float, bool]:
    """theta just above sqrt(r/R); certified when it stays below THETA_CAP."""
    base = math.sqrt(r / R)
    theta = base / 0.99
    if theta < THETA_CAP:
        return theta, True
    if theta >= 1:
        theta = (base + 1) / 2
    return theta, False


def approximate(E: MHExpansion, R: float, r: float, eps: float, *, samples: int = 10_000,
                seed: int = 0, allow_sampled: bool = True, max_Q: float = 2.0**40
                ) -> tuple[MHExpansion, ApproximationCertificate]:
    """Pick theta, Q and delta, keep the heavy components, certify the error."""
    if not 0 < r < R:
        raise ValueError(f"need 0 < r < R, got r={r}, R={R}")
    if eps <= 0:
        raise ValueError("eps must be positive")
    if R != E.R:
        E = MHExpansion(E.space, R, E.terms)
    theta, certified = choose_theta(R, r)
    if not certified and not allow_sampled:
        raise CertificationError(f"r/R = {r / R} is too large for the certified path")
    Q = 1.0
    while True:
        dsup = _delta_sup(Q, theta, certified, seed)
        if dsup <= 2.0:
            break
        Q *= 2
        if Q > max_Q:
            raise CertificationError("no Q makes the dominating sup small")
    delta = eps / (2 * dsup)
    params = RungeParams(R, r, theta, Q, delta, eps)
    cert = certify_error(E, params, samples=samples, seed=seed, allow_sampled=allow_sampled)
    g = build_approximant(E, cert.kset)
    return g, cert


def geometric_fixture(max_degree: int = 20, R: float = 1.0) -> MHExpansion:
    """``f = sum_d 2^{-d} z^d`` on l1 with one block of dimension 1; ``[f_d] = 2^{-d}`` exactly."""
    from fractions import Fraction

    from .mhcalc import KHomPolynomial, NormEstimate

    space = SumSpaceSpec.l1([1])
    terms = {}
    for d in range(max_degree + 1):
        k = MultiIndex({1: d}) if d else MultiIndex()
        c = Fraction(1, 2**d)
        terms[k] = KHomPolynomial(k, space.dims, {(d,): c}, NormEstimate(float(c), True, c))
    return MHExpansion(space, R, terms)

"""The dominating function Delta(q, z) = sum_k (||k||^||k|| / k^k) |q|^#k |z^k|.

Truncated sums are computed shell by shell: for a fixed total degree d,
``sum_{||k||=d} prod_i (|q|^[k_i>0] z_i^{k_i} / k_i^{k_i})`` is the degree-d
coefficient of a product of one-variable series, so a log-domain convolution
gives every shell in O(n D^2) without listing multiindices.

Certified tail bounds use ``d^d / k^k <= e^d d! / prod k_i!`` and the
multinomial theorem, so degree-d shells are at most ``|q| (e t)^d`` with
``t = ||z||_1``; they require ``e t < 1``.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np
from scipy.special import logsumexp

from . import multiindex as mi
from .multiindex import MultiIndex


@dataclass(frozen=True)
class DeltaResult:
    value: float
    tail_bound: float | None  # None means uncertified
    degree_cut: int

    @property
    def certified(self) -> bool:
        return self.tail_bound is not None

    @property
    def upper(self) -> float:
        if self.tail_bound is None:
            raise ValueError("uncertified result has no upper bound")
        return self.value + self.tail_bound

    def to_json(self) -> dict:
        return {"value": self.value,
                "tail_bound": "uncertified" if self.tail_bound is None else self.tail_bound,
                "degree_cut": self.degree_cut}


def _check_z(z: Sequence[float], max_block: int | None) -> np.ndarray:
    z = np.abs(np.asarray(z, dtype=float).reshape(-1))
    if max_block is not None and np.any(z[max_block:] != 0):
        raise ValueError(f"z is supported beyond {max_block} blocks")
    if z.sum() >= 1:
        raise ValueError(f"||z||_1 = {z.sum()} must be < 1")
    return z


def delta_shells(q: complex, z: Sequence[float], max_degree: int) -> np.ndarray:
    """Shell sums ``S_d`` for d = 0..max_degree, so that Delta_D = sum_{d<=D} S_d."""
    z = np.abs(np.asarray(z, dtype=float).reshape(-1))
    z = z[z > 0]
    D = int(max_degree)
    aq = abs(q)
    m = np.arange(D + 1)
    logm = np.zeros(D + 1)
    logm[1:] = m[1:] * np.log(m[1:])
    # running log of the coefficient sequence, -inf for zero
    acc = np.full(D + 1, -np.inf)
    acc[0] = 0.0
    if aq == 0:
        return np.concatenate([[1.0], np.zeros(D)])
    logq = math.log(aq)
    diff = m[:, None] - m[None, :]
    lower = diff >= 0
    idx = np.where(lower, diff, 0)
    for zi in z:
        term = np.full(D + 1, -np.inf)
        term[0] = 0.0
        term[1:] = logq + m[1:] * math.log(zi) - logm[1:]
        mat = np.where(lower, acc[None, :] + term[idx], -np.inf)
        acc = logsumexp(mat, axis=1)
    shells = np.exp(acc + logm)  # multiply by d^d
    shells[0] = 1.0
    return shells


def delta_truncated(q: complex, z: Sequence[float], max_degree: int,
                    max_block: int | None = None) -> DeltaResult:
    """Sum over every k with ``||k|| <= max_degree`` and support in the blocks of z."""
    z = _check_z(z, max_block)
    value = float(np.sum(delta_shells(q, z, max_degree)))
    return DeltaResult(value, None, int(max_degree))


def delta_certified(q: complex, z: Sequence[float], max_degree: int,
                    max_block: int | None = None) -> DeltaResult:
    """Truncated value plus a rigorous bound on the omitted shells.

    The true Delta lies in ``[value, value + tail_bound]``.  Returns an
    uncertified result when ``e ||z||_1 >= 1`` or ``|q| > 1``.
    """
    zz = _check_z(z, max_block)
    res = delta_truncated(q, zz, max_degree, max_block)
    t = float(zz.sum())
    et = math.e * t
    if t == 0:
        return DeltaResult(res.value, 0.0, res.degree_cut)
    if et >= 1 or abs(q) > 1:
        return res
    tail = abs(q) * et ** (max_degree + 1) / (1 - et)
    return DeltaResult(res.value, tail, res.degree_cut)


def delta_sup_bound(q: complex, theta: float) -> float:
    """Upper bound for ``sup_{||w||_1 <= theta} Delta(q, w)``: ``1 + |q| e theta / (1 - e theta)``."""
    et = math.e * theta
    if et >= 1:
        raise ValueError(f"e*theta = {et:.4f} >= 1; no certified bound")
    if abs(q) > 1:
        raise ValueError("the certified bound needs |q| <= 1")
    return 1.0 + abs(q) * et / (1 - et)


def delta_sup_sampled(q: complex, theta: float, *, nblocks: int = 6, max_degree: int = 60,
                      samples: int = 256, seed: int = 0) -> float:
    """Sampled lower estimate of ``sup_{||w||_1 <= theta} Delta(q, w)``.

    Delta increases in every coordinate, so only the sphere ``||w||_1 = theta``
    is sampled: random simplex points plus the equal splits over 1..nblocks
    coordinates.  Not a certificate.
    """
    if not 0 <= theta < 1:
        raise ValueError("theta must lie in [0, 1)")
    rng = np.random.default_rng(seed)
    cands = [np.full(s, theta / s) for s in range(1, nblocks + 1)]
    cands += list(theta * rng.dirichlet(np.ones(nblocks), size=samples))
    return max(float(np.sum(delta_shells(q, w, max_degree))) for w in cands)


def monomial_norm(k: MultiIndex) -> float:
    """``[z^k] = k^k ||k||^{-||k||}`` on l1."""
    return math.exp(-mi.log_degree_weight(k))


def delta_bruteforce(q: complex, z: Sequence[float], max_degree: int) -> float:
    """Reference sum over an explicit list of multiindices (slow)."""
    z = np.abs(np.asarray(z, dtype=float))
    total = 0.0
    for k in mi.enumerate_indices(len(z), max_degree):
        term = math.exp(mi.log_degree_weight(k)) * abs(q) ** mi.support_size(k)
        for n, e in k.items():
            term *= z[n - 1] ** e
        total += term
    return total

"""Sampled C^m norms of polynomial functions and (0,1)-forms on Euclidean balls.

The k-th real derivative along a unit direction xi is
``d^k/dt^k u(x + t xi) |_{t=0} = k! [t^k] u(x + t xi, xbar + t xibar)``, and the
right-hand side is a polynomial in t whose coefficients come out of an FFT on a
circle of deg+1 nodes without rounding beyond the evaluation itself.  For the
symmetric k-linear derivative on a Hilbert space the operator norm equals the
sup over the diagonal, so only directions are sampled, not k-tuples.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .poly import PolyForm01, PolyFunction

DEFAULT_SAMPLES = 8192


def ball_points(n: int, radius: float, count: int, rng: np.random.Generator,
                sphere_fraction: float = 0.5) -> np.ndarray:
    """Points of the closed Euclidean ball in C^n; a fraction of them lies on the sphere."""
    v = rng.normal(size=(count, n)) + 1j * rng.normal(size=(count, n))
    v /= np.linalg.norm(v, axis=1, keepdims=True)
    rad = rng.uniform(size=count) ** (1.0 / (2 * n))
    rad[: int(count * sphere_fraction)] = 1.0
    return radius * v * rad[:, None]


def unit_directions(n: int, count: int, rng: np.random.Generator) -> np.ndarray:
    """Coordinate directions e_j, i e_j, then random unit vectors."""
    eye = np.eye(n, dtype=complex)
    fixed = np.concatenate([eye, 1j * eye])
    extra = max(count - fixed.shape[0], 0)
    v = rng.normal(size=(extra, n)) + 1j * rng.normal(size=(extra, n))
    v /= np.linalg.norm(v, axis=1, keepdims=True)
    return np.concatenate([fixed, v])[: max(count, fixed.shape[0])]


def form_as_function(f: PolyForm01) -> PolyFunction:
    """``u(x, xi) = sum_j f_j(x) xibar_j`` on C^{2n}."""
    n = f.n
    out = PolyFunction(2 * n)
    for j, comp in enumerate(f.components):
        if comp.coeffs:
            out = out + comp.embed(2 * n, 0) * PolyFunction.zbar(2 * n, n + j)
    return out


def taylor_along(u: PolyFunction, x: np.ndarray, xi: np.ndarray, order: int) -> np.ndarray:
    """Coefficients ``[t^k] u(x + t xi)`` for k = 0..order, shape (P, order+1)."""
    deg = max(u.degree, order)
    K = deg + 1
    t = np.exp(2j * np.pi * np.arange(K) / K)
    P = x.shape[0]
    zz = (x[:, None, :] + t[None, :, None] * xi[:, None, :]).reshape(-1, u.n)
    ww = (np.conj(x)[:, None, :] + t[None, :, None] * np.conj(xi)[:, None, :]).reshape(-1, u.n)
    vals = np.asarray(u.eval_pair(zz, ww)).reshape(P, K)
    coef = np.fft.fft(vals, axis=1) / K
    return coef[:, : order + 1]


@dataclass
class CmNorm:
    value: float
    per_order: list[float]  # sup of the k-th derivative norm, k = 0..m
    samples: int
    lower_estimate: bool = True

    def to_json(self) -> dict:
        return {"value": self.value, "per_order": self.per_order,
                "samples": self.samples, "lower_estimate": self.lower_estimate}


def cm_norm_detail(u: PolyFunction | PolyForm01, m: int, radius: float = 1.0, *,
                   samples: int = DEFAULT_SAMPLES, directions: int = 8, seed: int = 0,
                   points: np.ndarray | None = None) -> CmNorm:
    """``sum_{k<=m} sup_x ||D^k u(x)||`` over sampled points of the ball of ``radius``.

    A form is measured through ``u(x, xi) = f(x) xi`` on ``B(radius) x B(1)``.
    Passing ``points`` (shape (P, dim)) overrides the sampler, which lets
    callers use nested samples.
    """
    if m < 0:
        raise ValueError("m must be >= 0")
    if radius <= 0:
        raise ValueError("radius must be positive")
    rng = np.random.default_rng(seed)
    if isinstance(u, PolyForm01):
        fn = form_as_function(u)
        if points is None:
            x = ball_points(u.n, radius, samples, rng)
            xi = ball_points(u.n, 1.0, samples, rng)
            points = np.concatenate([x, xi], axis=1)
    else:
        fn = u
        if points is None:
            points = ball_points(u.n, radius, samples, rng)
    points = np.asarray(points, dtype=complex).reshape(-1, fn.n)
    if not fn.coeffs:
        return CmNorm(0.0, [0.0] * (m + 1), points.shape[0])
    per = np.zeros(m + 1)
    per[0] = float(np.max(np.abs(fn(points))))
    if m >= 1:
        dirs = unit_directions(fn.n, directions, rng)
        for d in dirs:
            xi = np.broadcast_to(d, points.shape)
            coef = np.abs(taylor_along(fn, points, xi, m))
            for k in range(1, m + 1):
                per[k] = max(per[k], math.factorial(k) * float(np.max(coef[:, k])))
    return CmNorm(float(per.sum()), [float(v) for v in per], points.shape[0])


def cm_norm(u: PolyFunction | PolyForm01, m: int, radius: float = 1.0, **kw) -> float:
    return cm_norm_detail(u, m, radius, **kw).value

"""One-variable Cauchy-Pompeiu solver on a disc, by polar quadrature.

``u(z) = (1/2 pi i) \\iint g(zeta) / (zeta - z) dzeta ^ dzetabar`` solves
``du/dzbar = g``.  On each ring the angular integral is done exactly in
Fourier space (the kernel's modes are geometric series in ``rho/|z|`` or
``|z|/rho``), and the radial integral uses Gauss-Legendre panels split at the
ring ``rho = |z|``, where the angular integral has a kink.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .poly import PolyForm01, PolyFunction


@dataclass
class SliceSolution:
    radius: float
    radii: np.ndarray      # evaluation radii, shape (nr,)
    angles: np.ndarray     # evaluation angles, shape (na,)
    values: np.ndarray     # u on the polar grid, shape (nr, na)
    skipped: int = 0

    def points(self) -> np.ndarray:
        return self.radii[:, None] * np.exp(1j * self.angles[None, :])


def slice_function(u: PolyFunction, a, v) -> PolyFunction:
    """``lambda -> u(a + lambda v)`` as a polynomial in (lambda, lambdabar)."""
    a = np.asarray(a, dtype=complex)
    v = np.asarray(v, dtype=complex)
    lam, lamb = PolyFunction.z(1, 0), PolyFunction.zbar(1, 0)
    zs = [PolyFunction.constant(1, a[i]) + lam * v[i] for i in range(u.n)]
    ws = [PolyFunction.constant(1, np.conj(a[i])) + lamb * np.conj(v[i]) for i in range(u.n)]
    out = PolyFunction(1)
    for (al, be), c in u.coeffs.items():
        term = PolyFunction.constant(1, c)
        for i in range(u.n):
            if al[i]:
                term = term * zs[i] ** al[i]
            if be[i]:
                term = term * ws[i] ** be[i]
        out = out + term
    return out.map_coeffs(complex)


def slice_form(f: PolyForm01, a, v) -> PolyFunction:
    """Coefficient of ``dlambdabar`` in the pullback of ``f`` along ``lambda -> a + lambda v``."""
    v = np.asarray(v, dtype=complex)
    out = PolyFunction(1)
    for j, comp in enumerate(f.components):
        if comp.coeffs and v[j] != 0:
            out = out + slice_function(comp, a, v) * np.conj(v[j])
    return out


def _ring_modes(g: PolyFunction, rhos: np.ndarray, n_ang: int) -> np.ndarray:
    """Fourier modes ``c_m(rho)`` of ``g(rho e^{i phi})``, m in fft order."""
    phi = 2 * np.pi * np.arange(n_ang) / n_ang
    pts = (rhos[:, None] * np.exp(1j * phi[None, :])).reshape(-1)
    vals = np.asarray(g(pts[:, None])).reshape(rhos.shape[0], n_ang)
    return np.fft.fft(vals, axis=1) / n_ang


def cauchy_pompeiu_slice_solve(g: PolyFunction | PolyForm01, radius: float = 1.0,
                               n_angular: int = 256, n_radial: int = 256,
                               eval_radii: np.ndarray | None = None,
                               eval_angles: np.ndarray | None = None) -> SliceSolution:
    """Solve ``du/dzbar = g`` on the disc of ``radius`` at a polar grid of nodes.

    ``n_radial`` Gauss nodes are shared between the two panels ``[0, |z|]`` and
    ``[|z|, radius]``.  Evaluation points on or outside the boundary circle are
    skipped (left as NaN).
    """
    if isinstance(g, PolyForm01):
        if g.n != 1:
            raise ValueError("slice solver needs a one-variable form; use slice_form first")
        g = g[0]
    if g.n != 1:
        raise ValueError("slice solver needs a one-variable function")
    if eval_radii is None:
        eval_radii = radius * (np.arange(n_radial) + 0.5) / n_radial
    if eval_angles is None:
        eval_angles = 2 * np.pi * np.arange(n_angular) / n_angular
    eval_radii = np.asarray(eval_radii, dtype=float)
    eval_angles = np.asarray(eval_angles, dtype=float)
    half = max(n_radial // 2, 1)
    x, w = np.polynomial.legendre.leggauss(half)
    m = np.fft.fftfreq(n_angular, d=1.0 / n_angular).astype(int)
    neg, pos = m <= 0, m >= 1
    values = np.full((eval_radii.size, eval_angles.size), np.nan + 0j)
    skipped = 0
    for i, s in enumerate(eval_radii):
        if not 0 <= s < radius:
            skipped += eval_angles.size
            continue
        coef = np.zeros(n_angular, dtype=complex)
        if s > 0:
            rho_in = s * (x + 1) / 2
            c_in = _ring_modes(g, rho_in, n_angular)
            # s^{m-1} rho^{1-m} = (rho/s)^{1-m} for rho < s
            ker = (rho_in[:, None] / s) ** (1 - m[None, neg])
            coef[neg] = 2 * (w * s / 2) @ (c_in[:, neg] * ker)
        rho_out = s + (radius - s) * (x + 1) / 2
        c_out = _ring_modes(g, rho_out, n_angular)
        ker = (s / rho_out[:, None]) ** (m[None, pos] - 1)
        coef[pos] = -2 * (w * (radius - s) / 2) @ (c_out[:, pos] * ker)
        # u(s e^{i psi}) = sum_m coef_m e^{i (m-1) psi}
        phase = np.exp(1j * np.outer(eval_angles, m - 1))
        values[i] = phase @ coef
    return SliceSolution(radius, eval_radii, eval_angles, values, skipped)


def _radial_derivative(vals: np.ndarray, h: float) -> np.ndarray:
    """Fourth-order central difference along axis 0; the two end rows on each side are NaN."""
    out = np.full_like(vals, np.nan)
    out[2:-2] = (vals[:-4] - 8 * vals[1:-3] + 8 * vals[3:-1] - vals[4:]) / (12 * h)
    return out


def dbar_residual(sol: SliceSolution, reference: PolyFunction | None = None) -> np.ndarray:
    """``d/dzbar`` of (solution - reference) on interior nodes of a uniform polar grid.

    Angular derivatives are spectral; radial ones are fourth-order differences,
    so the two innermost and outermost rings are returned as NaN.
    """
    F = sol.values.copy()
    if reference is not None:
        F = F - np.asarray(reference(sol.points().reshape(-1, 1))).reshape(F.shape)
    s = sol.radii
    h = np.diff(s)
    if not np.allclose(h, h[0]):
        raise ValueError("residual needs uniformly spaced radii")
    na = sol.angles.size
    modes = np.fft.fft(F, axis=1) / na
    m = np.fft.fftfreq(na, d=1.0 / na)
    dm = _radial_derivative(modes, h[0])
    # dbar(d_m(s) e^{i m psi}) = e^{i (m+1) psi} (d_m' - m d_m / s) / 2
    coef = (dm - m[None, :] * modes / s[:, None]) / 2
    shift = np.exp(1j * np.outer(np.ones_like(s), sol.angles))  # extra e^{i psi}
    out = np.fft.ifft(coef * na, axis=1) * shift
    return out


def cauchy_transform_exact(g: PolyFunction, radius: float = 1.0) -> PolyFunction:
    """Closed-form Cauchy-Pompeiu integral of a polynomial over the disc (test oracle).

    Each monomial ``z^a zbar^b`` maps to ``z^a zbar^{b+1}/(b+1)`` minus, when
    ``a > b``, the holomorphic correction ``radius^{2b+2} z^{a-b-1}/(b+1)``.
    """
    out = PolyFunction(1)
    for ((a,), (b,)), c in g.coeffs.items():
        out = out + PolyFunction.monomial(1, (a,), (b + 1,), c / (b + 1))
        if a > b:
            out = out - PolyFunction.monomial(1, (a - b - 1,), (0,), c * radius ** (2 * b + 2) / (b + 1))
    return out

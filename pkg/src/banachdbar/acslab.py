"""The almost complex structure M_f on B x G defined by a g-valued (0,1)-form.

Coordinates.  The base is C^N with points x.  A complex tangent vector zeta is
stored as its (1,0) part ``a`` (coefficients of d/dx_j) and its (0,1) part
``b`` (coefficients of d/dxbar_j); conjugation swaps and conjugates the two.
The group is either additive C or GL(m) (an open subset of m x m matrices);
a fiber vector nu is stored the same way as (nu10, nu01), each a scalar or an
m x m matrix.  Left translation by w acts as ``(nu10, nu01) -> (w nu10, conj(w) nu01)``.

A form ``f = sum_j f_j dxbar_j`` evaluates on zeta as ``sum_j f_j(x) b_j``, and
``(zeta, nu)`` lies in T^{0,1}M_f iff ``a = 0`` and ``mu(nu) = f(zeta)`` with
``mu(nu) = z^{-1} nu10``.
"""
from __future__ import annotations

import csv
import io
from dataclasses import dataclass
from fractions import Fraction
from typing import Mapping, Sequence

import numpy as np

from .dbarlab.poly import PolyForm01, PolyFunction, dbar

SUBST_TOL = 1e-10
MEMBER_TOL = 1e-12
FD_STEP = 1e-5


class QComplex:
    """Gaussian rational ``re + i im`` with Fraction parts, for exact bookkeeping."""
    __slots__ = ("re", "im")

    def __init__(self, re=0, im=0):
        self.re, self.im = Fraction(re), Fraction(im)

    @classmethod
    def of(cls, c) -> "QComplex":
        if isinstance(c, QComplex):
            return c
        c = complex(c)
        return cls(Fraction(c.real), Fraction(c.imag))

    def __add__(self, o):
        o = QComplex.of(o)
        return QComplex(self.re + o.re, self.im + o.im)

    __radd__ = __add__

    def __sub__(self, o):
        o = QComplex.of(o)
        return QComplex(self.re - o.re, self.im - o.im)

    def __rsub__(self, o):
        return QComplex.of(o) - self

    def __mul__(self, o):
        o = QComplex.of(o)
        return QComplex(self.re * o.re - self.im * o.im, self.re * o.im + self.im * o.re)

    __rmul__ = __mul__

    def __neg__(self):
        return QComplex(-self.re, -self.im)

    def conjugate(self):
        return QComplex(self.re, -self.im)

    def __complex__(self):
        return complex(float(self.re), float(self.im))

    def __abs__(self):
        return abs(complex(self))

    def __eq__(self, o):
        try:
            o = QComplex.of(o)
        except TypeError:
            return NotImplemented
        return self.re == o.re and self.im == o.im

    def __hash__(self):
        return hash((self.re, self.im))

    def __repr__(self):
        return f"QComplex({self.re}, {self.im})"


def exact(a) -> np.ndarray:
    """Object array of QComplex holding the exact binary value of ``a``."""
    arr = np.asarray(a)
    out = np.empty(arr.shape, dtype=object)
    for idx in np.ndindex(arr.shape):
        out[idx] = QComplex.of(arr[idx])
    return out


def inexact(a) -> np.ndarray:
    arr = np.asarray(a)
    if arr.dtype != object:
        return arr.astype(complex)
    out = np.empty(arr.shape, dtype=complex)
    for idx in np.ndindex(arr.shape):
        out[idx] = complex(arr[idx])
    return out


def _as_array(a) -> np.ndarray:
    arr = np.asarray(a)
    return arr if arr.dtype == object else arr.astype(complex)


@dataclass(frozen=True)
class LieGroupModel:
    kind: str = "additive"  # "additive" (G = C) or "gl"
    m: int = 1

    def __post_init__(self):
        if self.kind not in ("additive", "gl"):
            raise ValueError(f"unknown group kind {self.kind!r}")
        if self.m < 1:
            raise ValueError("m must be >= 1")
        if self.kind == "additive" and self.m != 1:
            raise ValueError("the additive group is one-dimensional")

    @classmethod
    def additive(cls) -> "LieGroupModel":
        return cls("additive", 1)

    @classmethod
    def gl(cls, m: int) -> "LieGroupModel":
        return cls("gl", m)

    @property
    def commutative(self) -> bool:
        return self.kind == "additive" or self.m == 1

    @property
    def value_shape(self) -> tuple[int, ...]:
        return () if self.kind == "additive" else (self.m, self.m)

    def identity(self):
        return 0.0 + 0j if self.kind == "additive" else np.eye(self.m, dtype=complex)

    def zero_vector(self):
        return 0j if self.kind == "additive" else np.zeros((self.m, self.m), dtype=complex)

    def translate(self, z, nu10):
        """``dL_z`` on a (1,0) fiber vector."""
        return nu10 if self.kind == "additive" else np.matmul(np.asarray(z), np.asarray(nu10))

    def translate01(self, z, nu01):
        """``dL_z`` on a (0,1) fiber vector."""
        return nu01 if self.kind == "additive" else np.conj(np.asarray(z)) @ np.asarray(nu01)

    def untranslate(self, z, nu10):
        """``(dL_z)^{-1}`` on a (1,0) fiber vector."""
        if self.kind == "additive":
            return nu10
        z = np.asarray(z, dtype=complex)
        if abs(np.linalg.det(z)) < 1e-300 or np.linalg.cond(z) > 1e14:
            raise ValueError("group element is singular")
        return np.linalg.solve(z, np.asarray(nu10))

    def multiply(self, w, z):
        return w + z if self.kind == "additive" else np.asarray(w) @ np.asarray(z)

    def lie_bracket(self, X, Y):
        if self.commutative:
            return self.zero_vector() if self.kind == "additive" else np.zeros_like(np.asarray(X))
        X, Y = np.asarray(X), np.asarray(Y)
        return X @ Y - Y @ X

    def to_json(self) -> dict:
        return {"kind": "scalar" if self.kind == "additive" else "matrix", "m": self.m}

    @classmethod
    def from_json(cls, data: Mapping) -> "LieGroupModel":
        kind = data.get("kind", "scalar")
        return cls.additive() if kind in ("scalar", "additive") else cls.gl(int(data["m"]))


@dataclass
class GTangent:
    """A complex tangent vector ``(zeta, nu)`` at ``(x, z)``."""
    x: np.ndarray
    z: object
    zeta10: np.ndarray
    zeta01: np.ndarray
    nu10: object
    nu01: object

    def __post_init__(self):
        # object arrays of QComplex are kept as they are (exact mode)
        for name in ("x", "z", "zeta10", "zeta01", "nu10", "nu01"):
            setattr(self, name, _as_array(getattr(self, name)))

    @property
    def is_exact(self) -> bool:
        return self.nu10.dtype == object

    def exact(self) -> "GTangent":
        return GTangent(*(exact(getattr(self, k)) for k in ("x", "z", "zeta10", "zeta01", "nu10", "nu01")))

    def inexact(self) -> "GTangent":
        return GTangent(*(inexact(getattr(self, k)) for k in ("x", "z", "zeta10", "zeta01", "nu10", "nu01")))

    def _same_point(self, other: "GTangent") -> None:
        if not (np.all(self.x == other.x) and np.all(self.z == other.z)):
            raise ValueError("tangent vectors at different points")

    def __add__(self, other: "GTangent") -> "GTangent":
        self._same_point(other)
        return GTangent(self.x, self.z, self.zeta10 + other.zeta10, self.zeta01 + other.zeta01,
                        self.nu10 + other.nu10, self.nu01 + other.nu01)

    def __sub__(self, other: "GTangent") -> "GTangent":
        return self + other.scaled(-1)

    def scaled(self, c: complex) -> "GTangent":
        return GTangent(self.x, self.z, c * self.zeta10, c * self.zeta01, c * self.nu10, c * self.nu01)

    def conj(self) -> "GTangent":
        return GTangent(self.x, self.z, np.conj(self.zeta01), np.conj(self.zeta10),
                        np.conj(self.nu01), np.conj(self.nu10))

    def equals(self, other: "GTangent", tol: float = 0.0) -> bool:
        """Componentwise comparison; ``tol = 0`` is an exact test (exact in QComplex mode)."""
        parts = [(self.zeta10, other.zeta10), (self.zeta01, other.zeta01),
                 (self.nu10, other.nu10), (self.nu01, other.nu01)]
        if tol == 0:
            return all(bool(np.all(p == q)) for p, q in parts)
        return all(np.max(np.abs(inexact(p) - inexact(q)), initial=0.0) <= tol for p, q in parts)

    def is_zero(self, tol: float = 0.0) -> bool:
        return all(np.max(np.abs(inexact(p)), initial=0.0) <= tol
                   for p in (self.zeta10, self.zeta01, self.nu10, self.nu01))

    def to_json(self) -> dict:
        enc = lambda a: [np.real(inexact(a)).tolist(), np.imag(inexact(a)).tolist()]
        return {"x": enc(self.x), "z": enc(self.z), "zeta10": enc(self.zeta10),
                "zeta01": enc(self.zeta01), "nu10": enc(self.nu10), "nu01": enc(self.nu01)}

    @classmethod
    def from_json(cls, data: Mapping) -> "GTangent":
        dec = lambda p: np.asarray(p[0], dtype=float) + 1j * np.asarray(p[1], dtype=float)
        return cls(dec(data["x"]), dec(data["z"]), dec(data["zeta10"]), dec(data["zeta01"]),
                   dec(data["nu10"]), dec(data["nu01"]))


@dataclass
class GForm01:
    """A g-valued (0,1)-form ``sum_j f_j dxbar_j`` on C^N with polynomial coefficients."""
    group: LieGroupModel
    form: PolyForm01

    def __post_init__(self):
        shape = self.group.value_shape
        for comp in self.form.components:
            for c in comp.coeffs.values():
                if np.shape(c) != shape:
                    raise ValueError(f"coefficient shape {np.shape(c)} does not match {shape}")

    @property
    def n(self) -> int:
        return self.form.n

    @classmethod
    def zero(cls, group: LieGroupModel, n: int) -> "GForm01":
        return cls(group, PolyForm01.zero(n))

    @classmethod
    def constant(cls, group: LieGroupModel, values: Sequence) -> "GForm01":
        n = len(values)
        comps = [PolyFunction.constant(n, np.asarray(v) if group.kind == "gl" else v) for v in values]
        return cls(group, PolyForm01(n, comps))

    def components_at(self, x) -> list:
        x = np.asarray(x, dtype=complex).reshape(1, -1)
        shape = self.group.value_shape
        return [np.asarray(c.eval_pair(x, np.conj(x), shape))[0] for c in self.form.components]

    def components_exact(self, x) -> list:
        """Component values at an exact point (object array of QComplex)."""
        x = exact(x) if np.asarray(x).dtype != object else np.asarray(x)
        xb = np.conj(x)
        shape = self.group.value_shape
        out = []
        for comp in self.form.components:
            acc = np.full(shape, QComplex(), dtype=object) if shape else QComplex()
            for (a, b), c in comp.coeffs.items():
                mon = QComplex(1)
                for i in range(self.n):
                    for _ in range(a[i]):
                        mon = mon * x[i]
                    for _ in range(b[i]):
                        mon = mon * xb[i]
                acc = acc + exact(c) * mon if shape else acc + QComplex.of(c) * mon
            out.append(acc)
        return out

    def __call__(self, x, zeta01) -> object:
        """``f(zeta) = sum_j f_j(x) b_j`` for the (0,1) part ``b`` of zeta.

        With QComplex inputs the value is computed exactly.
        """
        b = np.asarray(zeta01)
        if b.dtype == object or np.asarray(x).dtype == object:
            vals = self.components_exact(x)
            shape = self.group.value_shape
            out = np.full(shape, QComplex(), dtype=object) if shape else QComplex()
            for v, bj in zip(vals, exact(b) if b.dtype != object else b):
                out = out + v * bj
            return np.asarray(out, dtype=object)
        vals = self.components_at(x)
        out = np.zeros(self.group.value_shape, dtype=complex)
        for v, bj in zip(vals, b.astype(complex)):
            out = out + v * bj
        return out

    def __add__(self, other: "GForm01") -> "GForm01":
        return GForm01(self.group, self.form + other.form)

    def to_json(self) -> dict:
        return {**self.group.to_json(), **self.form.to_json()}

    @classmethod
    def from_json(cls, data: Mapping) -> "GForm01":
        return cls(LieGroupModel.from_json(data), PolyForm01.from_json(data))


# Maurer-Cartan form and membership in T^{0,1}M_f

def maurer_cartan(G: LieGroupModel, z, nu10):
    """``mu(nu) = (dL_z)^{-1} nu^{1,0}``."""
    return G.untranslate(z, nu10)


@dataclass
class Membership:
    ok: bool
    base_residual: float   # |zeta^{1,0}|
    fiber_residual: float  # |mu(nu) - f(zeta)|


def is_antiholomorphic_tangent(V: GTangent, f: GForm01, tol: float = MEMBER_TOL) -> Membership:
    if V.is_exact:
        V = V.inexact()
    base = float(np.max(np.abs(V.zeta10), initial=0.0))
    fib = float(np.max(np.abs(np.asarray(maurer_cartan(f.group, V.z, V.nu10)) - f(V.x, V.zeta01)),
                       initial=0.0))
    return Membership(base <= tol and fib <= tol, base, fib)


def member(f: GForm01, x, z, zeta01, nu01) -> GTangent:
    """The vector of T^{0,1}M_f with the given (0,1) parts: ``nu10 = dL_z f(zeta)``."""
    zeta01 = np.asarray(zeta01, dtype=complex)
    nu10 = f.group.translate(z, f(x, zeta01))
    return GTangent(x, z, np.zeros_like(zeta01), zeta01, nu10, nu01)


def decompose(V: GTangent, f: GForm01, exact_mode: bool = False) -> tuple[GTangent, GTangent]:
    """``V = V1 + V2`` with V1 and conj(V2) in T^{0,1}M_f.

    In exact mode the inputs are read as Gaussian rationals (their exact binary
    values) and no rounding happens, so ``V1 + V2 == V`` holds identically.
    """
    if exact_mode and not V.is_exact:
        V = V.exact()
    G = f.group
    fz = G.translate(V.z, f(V.x, V.zeta01))                 # dL_z f(zeta)
    fzb = G.translate(V.z, f(V.x, np.conj(V.zeta10)))       # dL_z f(conj zeta); its conjugate is (0,1)
    zero_b = np.full(V.zeta10.shape, QComplex(), dtype=object) if V.is_exact else np.zeros_like(V.zeta10)
    V1 = GTangent(V.x, V.z, zero_b, V.zeta01, fz, V.nu01 - np.conj(fzb))
    V2 = GTangent(V.x, V.z, V.zeta10, zero_b.copy(), V.nu10 - fz, np.conj(fzb))
    return V1, V2


def _real_basis_vectors(N: int, shape: tuple[int, ...], x, z) -> list[GTangent]:
    """A real basis of the complex tangent space at (x, z)."""
    out = []
    fib = int(np.prod(shape)) if shape else 1
    total = 2 * N + 2 * fib
    for k in range(total):
        for c in (1.0, 1j):
            v = np.zeros(total, dtype=complex)
            v[k] = c
            out.append(GTangent(x, z, v[:N], v[N:2 * N], v[2 * N:2 * N + fib].reshape(shape),
                                v[2 * N + fib:].reshape(shape)))
    return out


def uniqueness_kernel_dim(f: GForm01, x, z, tol: float = 1e-9) -> int:
    """Real dimension of ``{V : V and conj(V) both in T^{0,1}M_f}``; it should be 0."""
    G = f.group
    basis = _real_basis_vectors(f.n, G.value_shape, x, z)

    def constraints(V: GTangent) -> np.ndarray:
        W = V.conj()
        parts = [V.zeta10, np.asarray(maurer_cartan(G, z, V.nu10)) - f(x, V.zeta01),
                 W.zeta10, np.asarray(maurer_cartan(G, z, W.nu10)) - f(x, W.zeta01)]
        flat = np.concatenate([np.ravel(p) for p in parts])
        return np.concatenate([flat.real, flat.imag])

    M = np.stack([constraints(V) for V in basis], axis=1)
    s = np.linalg.svd(M, compute_uv=False)
    return int(np.sum(s <= tol * max(s.max(), 1.0)))


# brackets and integrability

def bracket(G: LieGroupModel, phi: GForm01, psi: GForm01, x, zeta, zeta_p):
    """``[phi, psi](zeta, zeta') = [phi(zeta), psi(zeta')] - [phi(zeta'), psi(zeta)]`` for (0,1) vectors."""
    a, b = phi(x, zeta), psi(x, zeta_p)
    c, d = phi(x, zeta_p), psi(x, zeta)
    return G.lie_bracket(a, b) - G.lie_bracket(c, d)


def integrability_coefficients(f: GForm01) -> dict[tuple[int, int], PolyFunction]:
    """Coefficients of ``dxbar_i ^ dxbar_j`` (i < j) in ``dbar f + 1/2 [f, f]``.

    These are ``df_j/dxbar_i - df_i/dxbar_j + [f_i, f_j]``; in the commutative
    case the bracket term is absent and the result is the symbolic dbar f.
    """
    out = {}
    comps = f.form.components
    for i in range(f.n):
        for j in range(i + 1, f.n):
            c = comps[j].dzbar(i) - comps[i].dzbar(j)
            if f.group.kind == "gl" and f.group.m > 1:
                c = c + (comps[i] * comps[j] - comps[j] * comps[i])
            out[(i, j)] = c
    return out


def dbar_form_pair(f: GForm01, x, zeta, zeta_p):
    """``(dbar f)(zeta, zeta') = sum_{i,j} df_j/dxbar_i (b_i b'_j - b'_i b_j)``."""
    x = np.asarray(x, dtype=complex).reshape(1, -1)
    b, bp = np.asarray(zeta, dtype=complex), np.asarray(zeta_p, dtype=complex)
    shape = f.group.value_shape
    out = np.zeros(shape, dtype=complex)
    for j, comp in enumerate(f.form.components):
        for i in range(f.n):
            d = comp.dzbar(i)
            if d.coeffs:
                out = out + np.asarray(d.eval_pair(x, np.conj(x), shape))[0] * (b[i] * bp[j] - bp[i] * b[j])
    return out


def integrability_residual(f: GForm01, x, zeta, zeta_p):
    """``(dbar f)(zeta, zeta') + 1/2 [f, f](zeta, zeta')`` at x."""
    half_bracket = 0.5 * bracket(f.group, f, f, x, zeta, zeta_p)
    return dbar_form_pair(f, x, zeta, zeta_p) + half_bracket


# D-bar of group-valued maps, gauge transport, sections

def dbar_g(G: LieGroupModel, u: PolyFunction, x, zeta01):
    """``Dbar u(zeta) = mu(du(zeta^{0,1})) = u(x)^{-1} (dbar u)(zeta)``."""
    x = np.asarray(x, dtype=complex).reshape(1, -1)
    shape = G.value_shape
    ux = np.asarray(u.eval_pair(x, np.conj(x), shape))[0]
    du = np.zeros(shape, dtype=complex)
    for j, bj in enumerate(np.asarray(zeta01, dtype=complex)):
        d = u.dzbar(j)
        if d.coeffs and bj != 0:
            du = du + np.asarray(d.eval_pair(x, np.conj(x), shape))[0] * bj
    return maurer_cartan(G, ux, du)


def dbar_g_symbolic(u: PolyFunction) -> PolyForm01:
    """Additive case: ``Dbar u`` is the usual dbar u."""
    return dbar(u)


@dataclass
class TransportCheck:
    g: GForm01
    max_residual: float
    samples: int

    @property
    def ok(self) -> bool:
        return self.max_residual < SUBST_TOL


def phi_push(u: PolyFunction, V: GTangent) -> GTangent:
    """``dPhi`` for ``Phi(x, z) = (x, z + u(x))`` on the additive group."""
    x = V.x.reshape(1, -1)
    xc = np.conj(x)
    du = [complex(np.asarray(u.dz(j).eval_pair(x, xc, ()))[0]) for j in range(u.n)]
    dub = [complex(np.asarray(u.dzbar(j).eval_pair(x, xc, ()))[0]) for j in range(u.n)]
    a, b = V.zeta10, V.zeta01
    # (1,0) fiber part: du(zeta) = du/dx a + du/dxbar b; (0,1) part uses ubar
    push10 = np.dot(du, a) + np.dot(dub, b)
    push01 = np.dot(np.conj(dub), a) + np.dot(np.conj(du), b)
    uval = complex(np.asarray(u.eval_pair(x, xc, ()))[0])
    return GTangent(V.x, V.z + uval, a, b, V.nu10 + push10, V.nu01 + push01)


def gauge_transport(f: GForm01, u: PolyFunction, *, samples: int = 64, seed: int = 0,
                    radius: float = 0.9) -> TransportCheck:
    """``g = f + dbar u`` and the check that dPhi maps T^{0,1}M_f into T^{0,1}M_g."""
    if f.group.kind != "additive":
        raise ValueError("gauge transport is implemented for the additive group")
    g = GForm01(f.group, f.form + dbar(u))
    rng = np.random.default_rng(seed)
    worst = 0.0
    for _ in range(samples):
        x = rng.normal(size=f.n) + 1j * rng.normal(size=f.n)
        x *= radius * rng.uniform() / np.linalg.norm(x)
        z = complex(rng.normal(), rng.normal())
        b = rng.normal(size=f.n) + 1j * rng.normal(size=f.n)
        nu01 = complex(rng.normal(), rng.normal())
        V = member(f, x, z, b, nu01)
        W = phi_push(u, V)
        res = is_antiholomorphic_tangent(W, g, tol=SUBST_TOL)
        worst = max(worst, res.base_residual, res.fiber_residual)
    return TransportCheck(g, worst, samples)


@dataclass
class SectionReport:
    points: np.ndarray
    vectors: np.ndarray
    residuals: np.ndarray  # Dbar u(zeta) - f(zeta), one per (point, vector) pair

    @property
    def max_norm(self) -> float:
        return float(np.max(np.abs(self.residuals), initial=0.0)) if self.residuals.size else 0.0

    def to_csv(self) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["point", "vector", "residual_norm"])
        for i in range(self.points.shape[0]):
            for k in range(self.vectors.shape[0]):
                w.writerow([i, k, repr(float(np.max(np.abs(self.residuals[i, k]), initial=0.0)))])
        return buf.getvalue()


def section_holomorphy_check(u: PolyFunction, f: GForm01, points, vectors=None) -> SectionReport:
    """Residual ``mu(du(zeta^{0,1})) - f(zeta^{0,1})``; zero iff the graph of u is holomorphic."""
    points = np.asarray(points, dtype=complex).reshape(-1, f.n)
    if vectors is None:
        vectors = np.eye(f.n, dtype=complex)
    vectors = np.asarray(vectors, dtype=complex).reshape(-1, f.n)
    shape = f.group.value_shape
    res = np.zeros((points.shape[0], vectors.shape[0]) + shape, dtype=complex)
    for i, x in enumerate(points):
        for k, b in enumerate(vectors):
            res[i, k] = np.asarray(dbar_g(f.group, u, x, b)) - f(x, b)
    return SectionReport(points, vectors, res)


# Maurer-Cartan and left-invariance checks on GL(m)

def maurer_cartan_residual(G: LieGroupModel, z, X, Y, h: float = FD_STEP) -> float:
    """``(d mu)(X, Y) + [mu X, mu Y]`` for constant vector fields X, Y at z.

    ``d mu(X, Y) = X(mu Y) - Y(mu X)`` is taken by central differences of step h.
    """
    z = np.asarray(z, dtype=complex)
    mu = lambda w, v: np.asarray(maurer_cartan(G, w, v))
    dX_muY = (mu(z + h * X, Y) - mu(z - h * X, Y)) / (2 * h)
    dY_muX = (mu(z + h * Y, X) - mu(z - h * Y, X)) / (2 * h)
    res = dX_muY - dY_muX + G.lie_bracket(mu(z, X), mu(z, Y))
    return float(np.max(np.abs(res)))


def left_invariance_residual(G: LieGroupModel, w, z, nu10) -> float:
    """``|mu_{wz}(dL_w nu) - mu_z(nu)|``."""
    lhs = maurer_cartan(G, G.multiply(w, z), G.translate(w, nu10))
    return float(np.max(np.abs(np.asarray(lhs) - np.asarray(maurer_cartan(G, z, nu10)))))


def random_gl_element(m: int, rng: np.random.Generator, scale: float = 0.3) -> np.ndarray:
    return np.eye(m) + scale * (rng.normal(size=(m, m)) + 1j * rng.normal(size=(m, m)))


def random_gform(G: LieGroupModel, n: int, degree: int, rng: np.random.Generator,
                 terms: int = 4) -> GForm01:
    """Random polynomial form; matrix coefficients for GL(m)."""
    from .dbarlab.poly import random_poly
    comps = []
    for _ in range(n):
        p = random_poly(n, degree, rng, terms=terms)
        if G.kind == "gl":
            p = PolyFunction(n, {k: c * (rng.normal(size=(G.m, G.m)) + 1j * rng.normal(size=(G.m, G.m)))
                                 for k, c in p.coeffs.items()})
        comps.append(p)
    return GForm01(G, PolyForm01(n, comps))


def random_tangent(G: LieGroupModel, n: int, rng: np.random.Generator) -> GTangent:
    c = lambda *s: rng.normal(size=s) + 1j * rng.normal(size=s)
    shape = G.value_shape
    z = complex(rng.normal(), rng.normal()) if G.kind == "additive" else random_gl_element(G.m, rng)
    return GTangent(c(n), z, c(n), c(n), c(*shape) if shape else complex(rng.normal(), rng.normal()),
                    c(*shape) if shape else complex(rng.normal(), rng.normal()))

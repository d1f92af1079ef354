"""Polynomials in (z, zbar) on C^n and (0,1)-forms with such coefficients.

A :class:`PolyFunction` stores ``{(alpha, beta): c}`` for the function
``sum c z^alpha zbar^beta``.  Coefficients may be ``int``/``Fraction`` (exact),
``complex``, or ``numpy`` arrays (matrix-valued data for Lie-algebra forms).
"""
from __future__ import annotations

from fractions import Fraction
from typing import Iterable, Mapping, Sequence

import numpy as np

from ..jsonio import join_complex, split_array, split_complex

Exp = tuple[int, ...]
Key = tuple[Exp, Exp]


def _nonzero(c) -> bool:
    return bool(np.any(np.asarray(c) != 0))


def _conj(c):
    if isinstance(c, (int, Fraction)):
        return c
    if isinstance(c, np.ndarray):
        return np.conj(c)
    return complex(c).conjugate()


def _add(a, b):
    return a + b


class PolyFunction:
    __slots__ = ("n", "coeffs")

    def __init__(self, n: int, coeffs: Mapping[tuple[Sequence[int], Sequence[int]], object] | None = None):
        self.n = int(n)
        out: dict[Key, object] = {}
        for (a, b), c in (coeffs or {}).items():
            a, b = tuple(int(x) for x in a), tuple(int(x) for x in b)
            if len(a) != self.n or len(b) != self.n:
                raise ValueError(f"exponents {a}, {b} do not fit n={self.n}")
            if min(a + b, default=0) < 0:
                raise ValueError("negative exponent")
            key = (a, b)
            out[key] = _add(out[key], c) if key in out else c
        self.coeffs = {k: v for k, v in out.items() if _nonzero(v)}

    # construction helpers
    @classmethod
    def monomial(cls, n: int, alpha: Sequence[int], beta: Sequence[int], c=1) -> "PolyFunction":
        return cls(n, {(tuple(alpha), tuple(beta)): c})

    @classmethod
    def z(cls, n: int, j: int) -> "PolyFunction":
        e = [0] * n
        e[j] = 1
        return cls.monomial(n, e, [0] * n)

    @classmethod
    def zbar(cls, n: int, j: int) -> "PolyFunction":
        e = [0] * n
        e[j] = 1
        return cls.monomial(n, [0] * n, e)

    @classmethod
    def constant(cls, n: int, c) -> "PolyFunction":
        return cls.monomial(n, [0] * n, [0] * n, c)

    # algebra
    def __add__(self, other: "PolyFunction") -> "PolyFunction":
        if not isinstance(other, PolyFunction):
            other = PolyFunction.constant(self.n, other)
        if other.n != self.n:
            raise ValueError(f"dimension mismatch {self.n} != {other.n}")
        out = dict(self.coeffs)
        for k, v in other.coeffs.items():
            out[k] = out[k] + v if k in out else v
        return PolyFunction(self.n, out)

    __radd__ = __add__

    def __neg__(self) -> "PolyFunction":
        return PolyFunction(self.n, {k: -v for k, v in self.coeffs.items()})

    def __sub__(self, other) -> "PolyFunction":
        return self + (-other if isinstance(other, PolyFunction) else -other)

    def __mul__(self, other) -> "PolyFunction":
        if not isinstance(other, PolyFunction):
            return PolyFunction(self.n, {k: v * other for k, v in self.coeffs.items()})
        if other.n != self.n:
            raise ValueError("dimension mismatch")
        out: dict = {}
        for (a1, b1), c1 in self.coeffs.items():
            for (a2, b2), c2 in other.coeffs.items():
                key = (tuple(x + y for x, y in zip(a1, a2)), tuple(x + y for x, y in zip(b1, b2)))
                prod = c1 @ c2 if isinstance(c1, np.ndarray) and isinstance(c2, np.ndarray) else c1 * c2
                out[key] = out[key] + prod if key in out else prod
        return PolyFunction(self.n, out)

    def __rmul__(self, other) -> "PolyFunction":
        if isinstance(other, np.ndarray):
            return PolyFunction(self.n, {k: other @ v if isinstance(v, np.ndarray) else other * v
                                         for k, v in self.coeffs.items()})
        return self * other

    def __pow__(self, e: int) -> "PolyFunction":
        out = PolyFunction.constant(self.n, 1)
        for _ in range(int(e)):
            out = out * self
        return out

    def __eq__(self, other) -> bool:
        if not isinstance(other, PolyFunction) or other.n != self.n:
            return False
        if self.coeffs.keys() != other.coeffs.keys():
            return False
        return all(np.array_equal(np.asarray(v), np.asarray(other.coeffs[k]))
                   for k, v in self.coeffs.items())

    def __repr__(self) -> str:
        return f"PolyFunction(n={self.n}, {len(self.coeffs)} terms)"

    def is_zero(self) -> bool:
        return not self.coeffs

    @property
    def degree(self) -> int:
        return max((sum(a) + sum(b) for a, b in self.coeffs), default=0)

    def is_holomorphic(self) -> bool:
        return all(not any(b) for _, b in self.coeffs)

    def conj(self) -> "PolyFunction":
        return PolyFunction(self.n, {(b, a): _conj(v) for (a, b), v in self.coeffs.items()})

    def map_coeffs(self, fn) -> "PolyFunction":
        return PolyFunction(self.n, {k: fn(v) for k, v in self.coeffs.items()})

    # calculus
    def dz(self, j: int) -> "PolyFunction":
        out = {}
        for (a, b), c in self.coeffs.items():
            if a[j]:
                a2 = a[:j] + (a[j] - 1,) + a[j + 1:]
                out[(a2, b)] = c * a[j]
        return PolyFunction(self.n, out)

    def dzbar(self, j: int) -> "PolyFunction":
        out = {}
        for (a, b), c in self.coeffs.items():
            if b[j]:
                b2 = b[:j] + (b[j] - 1,) + b[j + 1:]
                out[(a, b2)] = c * b[j]
        return PolyFunction(self.n, out)

    # evaluation
    def arrays(self):
        keys = list(self.coeffs)
        A = np.array([k[0] for k in keys], dtype=int).reshape(len(keys), self.n)
        B = np.array([k[1] for k in keys], dtype=int).reshape(len(keys), self.n)
        vals = [self.coeffs[k] for k in keys]
        if vals and isinstance(vals[0], np.ndarray):
            C = np.stack([np.asarray(v, dtype=complex) for v in vals])
        else:
            C = np.array([complex(v) for v in vals], dtype=complex)
        return A, B, C

    def value_shape(self) -> tuple[int, ...]:
        for v in self.coeffs.values():
            return np.shape(v)
        return ()

    def eval_pair(self, z: np.ndarray, w: np.ndarray, shape: tuple[int, ...] | None = None) -> np.ndarray:
        """Evaluate with ``zbar`` replaced by the independent variable ``w``.

        ``z`` and ``w`` have shape ``(P, n)``; the result has shape ``(P,) + value_shape``.
        """
        z = np.asarray(z, dtype=complex).reshape(-1, self.n)
        w = np.asarray(w, dtype=complex).reshape(-1, self.n)
        shape = self.value_shape() if shape is None else shape
        if not self.coeffs:
            return np.zeros((z.shape[0],) + tuple(shape), dtype=complex)
        A, B, C = self.arrays()
        out = np.zeros((z.shape[0],) + C.shape[1:], dtype=complex)
        step = 4096
        for s in range(0, z.shape[0], step):
            zz, ww = z[s:s + step], w[s:s + step]
            mons = np.prod(zz[:, None, :] ** A[None], axis=-1) * np.prod(ww[:, None, :] ** B[None], axis=-1)
            out[s:s + step] = np.tensordot(mons, C, axes=(1, 0))
        return out

    def __call__(self, z) -> np.ndarray:
        z = np.asarray(z, dtype=complex)
        single = z.ndim == 1 and self.n > 0 or (self.n == 0 and z.ndim == 0)
        zz = z.reshape(-1, self.n)
        out = self.eval_pair(zz, np.conj(zz))
        return out[0] if single else out

    # embeddings
    def embed(self, n_new: int, offset: int = 0) -> "PolyFunction":
        """Same function of variables ``offset..offset+n-1`` inside C^n_new."""
        if offset < 0 or offset + self.n > n_new:
            raise ValueError("embedding does not fit")
        pad = lambda e: (0,) * offset + e + (0,) * (n_new - offset - self.n)
        return PolyFunction(n_new, {(pad(a), pad(b)): c for (a, b), c in self.coeffs.items()})

    def restrict(self, keep: Sequence[int]) -> "PolyFunction":
        """Set every variable outside ``keep`` to zero; result lives on len(keep) variables."""
        keep = list(keep)
        drop = [i for i in range(self.n) if i not in set(keep)]
        out = {}
        for (a, b), c in self.coeffs.items():
            if any(a[i] or b[i] for i in drop):
                continue
            key = (tuple(a[i] for i in keep), tuple(b[i] for i in keep))
            out[key] = c
        return PolyFunction(len(keep), out)

    # serialization
    def terms_json(self) -> list[dict]:
        out = []
        for (a, b), c in sorted(self.coeffs.items(), key=lambda kv: kv[0]):
            if isinstance(c, np.ndarray):
                re, im = split_array(c)
            else:
                re, im = split_complex(c)
            out.append({"alpha": list(a), "beta": list(b), "re": re, "im": im})
        return out

    def to_json(self) -> dict:
        return {"n": self.n, "terms": self.terms_json()}

    @staticmethod
    def _coeff(t: Mapping):
        if isinstance(t["re"], list):
            return np.asarray(t["re"], dtype=float) + 1j * np.asarray(t["im"], dtype=float)
        return join_complex(t["re"], t["im"])

    @classmethod
    def from_json(cls, data: Mapping) -> "PolyFunction":
        return cls(int(data["n"]), {(tuple(t["alpha"]), tuple(t["beta"])): cls._coeff(t)
                                    for t in data["terms"]})


class PolyForm01:
    """``sum_j f_j dzbar_j`` with polynomial coefficients."""

    __slots__ = ("n", "components")

    def __init__(self, n: int, components: Sequence[PolyFunction]):
        self.n = int(n)
        comps = tuple(components)
        if len(comps) != self.n:
            raise ValueError(f"a (0,1)-form on C^{self.n} needs {self.n} components, got {len(comps)}")
        for c in comps:
            if c.n != self.n:
                raise ValueError("component dimension mismatch")
        self.components = comps

    @classmethod
    def zero(cls, n: int) -> "PolyForm01":
        return cls(n, [PolyFunction(n) for _ in range(n)])

    def __getitem__(self, j: int) -> PolyFunction:
        return self.components[j]

    def __add__(self, other: "PolyForm01") -> "PolyForm01":
        if other.n != self.n:
            raise ValueError("dimension mismatch")
        return PolyForm01(self.n, [a + b for a, b in zip(self.components, other.components)])

    def __neg__(self) -> "PolyForm01":
        return PolyForm01(self.n, [-a for a in self.components])

    def __sub__(self, other: "PolyForm01") -> "PolyForm01":
        return self + (-other)

    def __mul__(self, c) -> "PolyForm01":
        return PolyForm01(self.n, [a * c for a in self.components])

    __rmul__ = __mul__

    def __eq__(self, other) -> bool:
        return isinstance(other, PolyForm01) and other.n == self.n and all(
            a == b for a, b in zip(self.components, other.components))

    def __repr__(self) -> str:
        return f"PolyForm01(n={self.n}, {sum(len(c.coeffs) for c in self.components)} terms)"

    def is_zero(self) -> bool:
        return all(c.is_zero() for c in self.components)

    @property
    def degree(self) -> int:
        return max((c.degree for c in self.components), default=0)

    def __call__(self, z, v) -> np.ndarray:
        """``f(z)(v) = sum_j f_j(z) v_j`` for (0,1)-components ``v``; batched over rows."""
        z = np.asarray(z, dtype=complex).reshape(-1, self.n)
        v = np.asarray(v, dtype=complex).reshape(-1, self.n)
        out = None
        shape = next((c.value_shape() for c in self.components if c.coeffs), ())
        for j, c in enumerate(self.components):
            val = np.asarray(c.eval_pair(z, np.conj(z), shape))
            term = val * v[:, j].reshape((-1,) + (1,) * (val.ndim - 1))
            out = term if out is None else out + term
        return out

    def to_json(self) -> dict:
        terms = []
        for j, c in enumerate(self.components, start=1):
            for t in c.terms_json():
                terms.append({"j": j, **t})
        return {"n": self.n, "terms": terms}

    @classmethod
    def from_json(cls, data: Mapping) -> "PolyForm01":
        n = int(data["n"])
        per = [dict() for _ in range(n)]
        for t in data["terms"]:
            j = int(t["j"])
            if not 1 <= j <= n:
                raise ValueError(f"component index {j} outside 1..{n}")
            per[j - 1][(tuple(t["alpha"]), tuple(t["beta"]))] = PolyFunction._coeff(t)
        return cls(n, [PolyFunction(n, p) for p in per])


def dbar(u: PolyFunction) -> PolyForm01:
    """Wirtinger derivative ``sum_j du/dzbar_j dzbar_j``."""
    return PolyForm01(u.n, [u.dzbar(j) for j in range(u.n)])


def closedness_residuals(f: PolyForm01) -> dict[tuple[int, int], PolyFunction]:
    """``df_j/dzbar_i - df_i/dzbar_j`` for i < j (0-based)."""
    return {(i, j): f[j].dzbar(i) - f[i].dzbar(j)
            for i in range(f.n) for j in range(i + 1, f.n)}


def is_closed(f: PolyForm01) -> tuple[bool, dict[tuple[int, int], PolyFunction]]:
    res = closedness_residuals(f)
    return all(r.is_zero() for r in res.values()), res


class NotClosedError(ValueError):
    pass


def _as_exact(c, denom: int):
    if isinstance(c, (int, Fraction)):
        return Fraction(c) / denom
    return c / denom


def homotopy_solve(f: PolyForm01) -> PolyFunction:
    """``u = int_0^1 sum_j zbar_j f_j(z, t zbar) dt`` with ``dbar u = f``."""
    closed, _ = is_closed(f)
    if not closed:
        raise NotClosedError("form is not dbar-closed")
    out: dict = {}
    for j, comp in enumerate(f.components):
        for (a, b), c in comp.coeffs.items():
            b2 = b[:j] + (b[j] + 1,) + b[j + 1:]
            val = _as_exact(c, sum(b) + 1)
            key = (a, b2)
            out[key] = out[key] + val if key in out else val
    return PolyFunction(f.n, out)


def random_poly(n: int, degree: int, rng: np.random.Generator, *, terms: int = 8,
                exact: bool = False, holomorphic: bool = False) -> PolyFunction:
    """Random polynomial with ``terms`` monomials of total degree <= ``degree``."""
    out = {}
    for _ in range(terms):
        d = int(rng.integers(0, degree + 1))
        cuts = np.sort(rng.integers(0, d + 1, size=2 * n - 1)) if n else np.array([], int)
        parts = np.diff(np.concatenate([[0], cuts, [d]])).astype(int)
        a, b = tuple(parts[:n]), tuple(parts[n:])
        if holomorphic:
            a, b = tuple(x + y for x, y in zip(a, b)), (0,) * n
        if exact:
            c = Fraction(int(rng.integers(-9, 10)), int(rng.integers(1, 7)))
        else:
            c = complex(rng.normal(), rng.normal())
        out[(a, b)] = c
    return PolyFunction(n, out)

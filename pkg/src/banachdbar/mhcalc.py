"""Multihomogeneous components, their norms, and expansion statistics.

Polynomials live on the first ``len(dims)`` blocks of a sum space and are
stored as ``{flat exponent tuple: coefficient}`` over the scalar coordinates
of those blocks.  Coefficients may be ``int``/``Fraction`` (exact mode) or
``complex``.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Iterable, Mapping, Sequence

import numpy as np
from scipy.optimize import minimize

from . import multiindex as mi
from .jsonio import join_complex, split_complex
from .multiindex import MultiIndex
from .sumspace import ScaleSequence, SumSpaceSpec, SumVector

Oracle = Callable[[np.ndarray], np.ndarray]


def _offsets(dims: Sequence[int]) -> list[int]:
    return [int(x) for x in np.concatenate([[0], np.cumsum(dims)[:-1]])] if len(dims) else []


def _nonzero(c) -> bool:
    return bool(np.any(c != 0))


def eval_monomials(exps: np.ndarray, coeffs: np.ndarray, pts: np.ndarray,
                   chunk: int = 2048) -> np.ndarray:
    """Evaluate ``sum_m coeffs[m] * pts**exps[m]`` for every row of ``pts``."""
    pts = np.asarray(pts, dtype=complex)
    out = np.zeros(pts.shape[0], dtype=complex)
    if exps.shape[0] == 0:
        return out
    for s in range(0, pts.shape[0], chunk):
        block = pts[s:s + chunk]
        mons = np.prod(block[:, None, :] ** exps[None, :, :], axis=-1)
        out[s:s + chunk] = mons @ coeffs
    return out


class BlockPolynomial:
    """Holomorphic polynomial on the blocks of dimensions ``dims``."""

    def __init__(self, dims: Sequence[int], coeffs: Mapping[Sequence[int], object] | None = None):
        self.dims = tuple(int(d) for d in dims)
        nvar = sum(self.dims)
        clean = {}
        for e, c in (coeffs or {}).items():
            e = tuple(int(a) for a in e)
            if len(e) != nvar or min(e, default=0) < 0:
                raise ValueError(f"exponent {e} does not fit {nvar} variables")
            if _nonzero(c):
                clean[e] = clean.get(e, 0) + c
        self.coeffs = {e: c for e, c in clean.items() if _nonzero(c)}

    @property
    def nvar(self) -> int:
        return sum(self.dims)

    def block_degrees(self, e: Sequence[int]) -> MultiIndex:
        offs = _offsets(self.dims)
        return MultiIndex.from_dense(
            [sum(e[o:o + d]) for o, d in zip(offs, self.dims)]
        )

    def max_block_degree(self) -> int:
        return max((max(self.block_degrees(e).dense(len(self.dims)) or (0,)) for e in self.coeffs),
                   default=0)

    def arrays(self) -> tuple[np.ndarray, np.ndarray]:
        exps = np.array(list(self.coeffs), dtype=int).reshape(len(self.coeffs), self.nvar)
        coeffs = np.array([complex(c) for c in self.coeffs.values()], dtype=complex)
        return exps, coeffs

    def __call__(self, pts) -> np.ndarray | complex:
        pts = np.asarray(pts, dtype=complex)
        single = pts.ndim == 1
        exps, coeffs = self.arrays()
        out = eval_monomials(exps, coeffs, pts.reshape(-1, self.nvar))
        return out[0] if single else out

    def evaluate(self, spec: SumSpaceSpec, x: SumVector) -> complex:
        return complex(self(flat_point(spec, x, len(self.dims))))

    def __add__(self, other: "BlockPolynomial") -> "BlockPolynomial":
        if self.dims != other.dims:
            raise ValueError("dimension mismatch")
        out = dict(self.coeffs)
        for e, c in other.coeffs.items():
            out[e] = out.get(e, 0) + c
        return BlockPolynomial(self.dims, out)

    def scaled(self, c) -> "BlockPolynomial":
        return BlockPolynomial(self.dims, {e: c * v for e, v in self.coeffs.items()})

    def components(self) -> dict[MultiIndex, "KHomPolynomial"]:
        """Exact split into k-homogeneous parts (grouping by block degree)."""
        groups: dict[MultiIndex, dict] = {}
        for e, c in self.coeffs.items():
            groups.setdefault(self.block_degrees(e), {})[e] = c
        return {k: KHomPolynomial(k, self.dims, g) for k, g in groups.items()}

    def monomials_json(self) -> list[dict]:
        out = []
        for e, c in sorted(self.coeffs.items()):
            re, im = split_complex(c)
            out.append({"exponents": list(e), "re": re, "im": im})
        return out

    @staticmethod
    def coeffs_from_json(items: Iterable[Mapping]) -> dict:
        return {tuple(m["exponents"]): join_complex(m["re"], m["im"]) for m in items}

    def __eq__(self, other) -> bool:
        return (isinstance(other, BlockPolynomial) and self.dims == other.dims
                and self.coeffs == other.coeffs)

    def __repr__(self) -> str:
        return f"{type(self).__name__}(dims={self.dims}, {len(self.coeffs)} monomials)"


@dataclass(frozen=True)
class NormEstimate:
    value: float
    exact: bool
    exact_value: Fraction | None = None


class KHomPolynomial(BlockPolynomial):
    """A k-homogeneous polynomial: every monomial has block degrees ``index``."""

    def __init__(self, index: MultiIndex, dims: Sequence[int],
                 coeffs: Mapping[Sequence[int], object] | None = None,
                 norm: NormEstimate | None = None):
        super().__init__(dims, coeffs)
        self.index = index
        self.norm = norm
        if index and index.items()[-1][0] > len(self.dims):
            if self.coeffs:
                raise ValueError(f"{index!r} reaches past the {len(self.dims)} blocks")
        for e in self.coeffs:
            if self.block_degrees(e) != index:
                raise ValueError(f"monomial {e} is not {index!r}-homogeneous")

    def with_norm(self, norm: NormEstimate) -> "KHomPolynomial":
        return KHomPolynomial(self.index, self.dims, self.coeffs, norm)

    def scaled(self, c) -> "KHomPolynomial":
        norm = None
        if self.norm is not None:
            ev = None if self.norm.exact_value is None or not isinstance(c, (int, Fraction)) \
                else abs(Fraction(c)) * self.norm.exact_value
            norm = NormEstimate(abs(complex(c)) * self.norm.value, self.norm.exact, ev)
        return KHomPolynomial(self.index, self.dims,
                              {e: c * v for e, v in self.coeffs.items()}, norm)


def flat_point(spec: SumSpaceSpec, x: SumVector, nblocks: int) -> np.ndarray:
    blocks = spec.blocks[:nblocks]
    parts = [x.block(n + 1, b.dim) for n, b in enumerate(blocks)]
    for n, v in x.components.items():
        if n <= nblocks and v.shape[0] != blocks[n - 1].dim:
            raise ValueError(f"block {n} dimension mismatch")
    return np.concatenate(parts) if parts else np.zeros(0, dtype=complex)


def eval_khom(phi: BlockPolynomial, spec: SumSpaceSpec, x: SumVector) -> complex:
    return phi.evaluate(spec, x)


# -- Fourier extraction --------------------------------------------------------


def fourier_coefficients(f: Oracle, dims: Sequence[int], degree_cap: int,
                         nodes: int | None = None, node_radius: float = 1.0) -> dict:
    """All Taylor coefficients of ``f`` by a DFT on the scalar-coordinate torus.

    ``f`` maps an ``(npts, sum(dims))`` complex array to ``npts`` values.  The
    transform is exact (up to rounding) when every scalar degree of ``f`` is at
    most ``nodes - 1``; per-block degree <= ``degree_cap`` implies this.
    """
    nodes = degree_cap + 1 if nodes is None else int(nodes)
    if nodes < degree_cap + 1:
        raise ValueError(f"{nodes} nodes cannot resolve degree {degree_cap}")
    nvar = sum(dims)
    if nvar == 0:
        return {(): complex(np.asarray(f(np.zeros((1, 0), dtype=complex)))[0])}
    roots = node_radius * np.exp(2j * np.pi * np.arange(nodes) / nodes)
    grids = np.meshgrid(*([roots] * nvar), indexing="ij")
    pts = np.stack([g.reshape(-1) for g in grids], axis=-1)
    vals = np.asarray(f(pts), dtype=complex).reshape((nodes,) * nvar)
    spec = np.fft.fftn(vals) / nodes**nvar
    out = {}
    for e in np.ndindex(*spec.shape):
        c = spec[e] / node_radius ** sum(e)
        out[tuple(int(a) for a in e)] = complex(c)
    return out


def _block_sums(e: Sequence[int], dims: Sequence[int]) -> tuple[int, ...]:
    offs = _offsets(dims)
    return tuple(sum(e[o:o + d]) for o, d in zip(offs, dims))


def component(f: BlockPolynomial | Oracle, k: MultiIndex, degree_cap: int,
              dims: Sequence[int] | None = None, *, exact: bool = False,
              nodes: int | None = None, node_radius: float = 1.0,
              drop_rtol: float = 1e-13) -> KHomPolynomial:
    """The k-homogeneous component of ``f``.

    With ``exact=True`` (``f`` must be a :class:`BlockPolynomial`) the torus
    integral is evaluated symbolically: characters integrate to 0 or 1, so the
    component keeps exactly the monomials of block degree ``k``.  Otherwise
    ``f`` is sampled on roots of unity and transformed.
    """
    if dims is None:
        if not isinstance(f, BlockPolynomial):
            raise ValueError("dims are required for an oracle")
        dims = f.dims
    dims = tuple(dims)
    nodes = degree_cap + 1 if nodes is None else int(nodes)
    if nodes < degree_cap + 1:
        raise ValueError(f"{nodes} nodes cannot resolve degree {degree_cap}")
    if k and k.items()[-1][0] > len(dims):
        return KHomPolynomial(k, dims)
    target = k.dense(len(dims))
    if exact:
        if not isinstance(f, BlockPolynomial):
            raise ValueError("exact extraction needs coefficient data")
        if f.max_block_degree() > degree_cap:
            raise ValueError(f"polynomial exceeds the declared degree cap {degree_cap}")
        return KHomPolynomial(k, dims, {e: c for e, c in f.coeffs.items()
                                        if _block_sums(e, dims) == target})
    coeffs = fourier_coefficients(f, dims, degree_cap, nodes, node_radius)
    cut = drop_rtol * max((abs(c) for c in coeffs.values()), default=0.0)
    return KHomPolynomial(k, dims, {e: c for e, c in coeffs.items()
                                    if _block_sums(e, dims) == target and abs(c) > cut})


def expand(f: BlockPolynomial | Oracle, degree_cap: int, dims: Sequence[int] | None = None,
           *, exact: bool = False, nodes: int | None = None, node_radius: float = 1.0,
           drop_rtol: float = 1e-13) -> dict[MultiIndex, KHomPolynomial]:
    """Every nonzero component with block degrees <= ``degree_cap``."""
    if dims is None:
        dims = f.dims
    dims = tuple(dims)
    if exact:
        if f.max_block_degree() > degree_cap:
            raise ValueError(f"polynomial exceeds the declared degree cap {degree_cap}")
        parts = f.components()
    else:
        coeffs = fourier_coefficients(f, dims, degree_cap, nodes, node_radius)
        cut = drop_rtol * max((abs(c) for c in coeffs.values()), default=0.0)
        groups: dict = {}
        for e, c in coeffs.items():
            if abs(c) > cut:
                groups.setdefault(MultiIndex.from_dense(_block_sums(e, dims)), {})[e] = c
        parts = {}
        for k, g in groups.items():
            if max(k.dense(len(dims)) or (0,)) <= degree_cap:
                parts[k] = KHomPolynomial(k, dims, g)
    return {k: parts[k] for k in mi.sort_graded(parts)}


def torus_component_value(f: Oracle, k: MultiIndex, dims: Sequence[int], x: np.ndarray,
                          nodes: int) -> complex:
    """``f_k(x)`` by averaging ``f`` over the block-rotation torus.

    Literal discretization of the component integral: each block is rotated by
    its own ``nodes``-th roots of unity.
    """
    dims = tuple(dims)
    x = np.asarray(x, dtype=complex)
    nb = len(dims)
    target = np.array(k.dense(nb) if k else (0,) * nb)
    grid = np.array(list(np.ndindex(*((nodes,) * nb))))
    phase = np.exp(2j * np.pi * grid / nodes)
    scale = np.repeat(phase, dims, axis=1)
    vals = np.asarray(f(x[None, :] * scale), dtype=complex)
    weights = np.exp(-2j * np.pi * (grid @ target) / nodes)
    return complex((vals * weights).mean())


# -- norms ---------------------------------------------------------------------


@dataclass(frozen=True)
class NormSampler:
    points: int = 4096
    refinements: int = 100
    polish: int = 8
    seed: int = 0


def _unit_block(v: np.ndarray, p: float) -> np.ndarray:
    n = np.linalg.norm(v, p, axis=-1, keepdims=True)
    return v / np.where(n == 0, 1.0, n)


def _radial_constant(spec: SumSpaceSpec, k: MultiIndex) -> float:
    d = mi.total_degree(k)
    if spec.outer == "c0" or d == 0:
        return 1.0
    q = spec.outer
    return math.exp(sum(e * math.log(e / d) for _, e in k.items()) / q)


def _exact_monomial_norm(phi: KHomPolynomial, spec: SumSpaceSpec) -> NormEstimate | None:
    if len(phi.coeffs) != 1 or spec.outer != 1.0:
        return None
    for n in phi.index.support():
        b = spec.blocks[n - 1]
        if b.p != 1.0 and b.dim != 1:
            return None
    (e, c), = phi.coeffs.items()
    scalar = MultiIndex.from_dense(e)
    w = 1 / mi.degree_weight(scalar)
    exact = abs(Fraction(c)) * w if isinstance(c, (int, Fraction)) else None
    return NormEstimate(abs(complex(c)) * float(w), True, exact)


def khom_norm(phi: KHomPolynomial, spec: SumSpaceSpec, sampler: NormSampler | None = None,
              *, method: str = "auto") -> NormEstimate:
    """``[phi] = sup_{||x|| <= 1} |phi(x)|``.

    Exact for a single monomial when the supporting blocks and the outer space
    are all l1.  Otherwise the block radii are set to their optimal values
    (``phi`` is k-homogeneous), block directions are sampled on the unit
    spheres and the best candidates polished; the result is a lower estimate.
    """
    sampler = sampler or NormSampler()
    if not phi.coeffs:
        return NormEstimate(0.0, True, Fraction(0))
    if method not in ("auto", "sample"):
        raise ValueError(f"unknown method {method}")
    if method == "auto":
        exact = _exact_monomial_norm(phi, spec)
        if exact is not None:
            return exact
    k = phi.index
    if not k:
        c = next(iter(phi.coeffs.values()))
        return NormEstimate(abs(complex(c)), True,
                            abs(Fraction(c)) if isinstance(c, (int, Fraction)) else None)
    supp = k.support()
    offs = spec.offsets()
    dims = phi.dims
    active = [(n, spec.blocks[n - 1]) for n in supp]
    rng = np.random.default_rng(sampler.seed)
    exps, coeffs = phi.arrays()
    nvar = phi.nvar
    const = _radial_constant(spec, k)

    def assemble(blocks_v: list[np.ndarray]) -> np.ndarray:
        pts = np.zeros((blocks_v[0].shape[0], nvar), dtype=complex)
        for (n, b), v in zip(active, blocks_v):
            pts[:, offs[n - 1]:offs[n - 1] + b.dim] = _unit_block(v, b.p)
        return pts

    samples = [rng.normal(size=(sampler.points, b.dim)) + 1j * rng.normal(size=(sampler.points, b.dim))
               for _, b in active]
    vals = np.abs(eval_monomials(exps, coeffs, assemble(samples)))
    best = float(vals.max())
    if all(b.dim == 1 for _, b in active) or sampler.refinements <= 0:
        return NormEstimate(const * best, False)

    sizes = [b.dim for _, b in active]

    def unpack(theta: np.ndarray) -> list[np.ndarray]:
        out, pos = [], 0
        for d in sizes:
            out.append((theta[pos:pos + d] + 1j * theta[pos + d:pos + 2 * d])[None, :])
            pos += 2 * d
        return out

    def objective(theta):
        return -float(np.abs(eval_monomials(exps, coeffs, assemble(unpack(theta))))[0]) ** 2

    order = np.argsort(vals)[::-1][:sampler.polish]
    for idx in order:
        theta0 = np.concatenate([np.concatenate([s[idx].real, s[idx].imag]) for s in samples])
        res = minimize(objective, theta0, method="BFGS",
                       options={"maxiter": sampler.refinements, "gtol": 1e-12})
        best = max(best, math.sqrt(max(-res.fun, 0.0)))
    return NormEstimate(const * best, False)


def homogeneity_maximizer(spec: SumSpaceSpec, k: MultiIndex, x: SumVector) -> SumVector:
    """Unit vector ``y_n = (k_n/||k||) x_n/||x_n||`` on the support of ``k``."""
    d = mi.total_degree(k)
    comps = {}
    for n, e in k.items():
        b = spec.block(n)
        v = x.block(n, b.dim)
        nv = b.norm(v)
        if nv == 0:
            raise ValueError(f"x vanishes on block {n} of the support")
        comps[n] = (e / d) * v / nv
    return SumVector(comps)


def modulus_power(spec: SumSpaceSpec, x: SumVector, k: MultiIndex) -> float:
    out = 1.0
    for n, e in k.items():
        b = spec.block(n)
        out *= b.norm(x.block(n, b.dim)) ** e
    return out


def homogeneity_bound(phi: KHomPolynomial, spec: SumSpaceSpec, x: SumVector,
                 norm: float | NormEstimate | None = None) -> float:
    """``[phi] |x|^k ||k||^||k|| / k^k``; valid for l1-sums."""
    if spec.outer != 1.0:
        raise ValueError("the homogeneous bound is stated for l1-sums")
    if norm is None:
        norm = phi.norm if phi.norm is not None else khom_norm(phi, spec)
    if isinstance(norm, NormEstimate):
        norm = norm.value
    k = phi.index
    return float(norm) * modulus_power(spec, x, k) * math.exp(mi.log_degree_weight(k))


# -- expansions ----------------------------------------------------------------


@dataclass
class MHExpansion:
    space: SumSpaceSpec
    R: float
    terms: dict[MultiIndex, KHomPolynomial] = field(default_factory=dict)

    def __post_init__(self):
        if not self.R > 0:
            raise ValueError("radius R must be positive")
        for k, t in self.terms.items():
            if t.index != k:
                raise ValueError(f"term stored under {k!r} has index {t.index!r}")
            if t.dims != self.space.dims:
                raise ValueError("term dimensions differ from the space")
        self.terms = {k: self.terms[k] for k in mi.sort_graded(self.terms)}

    def with_norms(self, sampler: NormSampler | None = None) -> "MHExpansion":
        terms = {k: t if t.norm is not None else t.with_norm(khom_norm(t, self.space, sampler))
                 for k, t in self.terms.items()}
        return MHExpansion(self.space, self.R, terms)

    def norms(self) -> dict[MultiIndex, float]:
        out = {}
        for k, t in self.terms.items():
            if t.norm is None:
                raise ValueError(f"term {k!r} has no norm; call with_norms()")
            out[k] = t.norm.value
        return out

    def subset(self, keys: Iterable[MultiIndex]) -> "MHExpansion":
        return MHExpansion(self.space, self.R, {k: self.terms[k] for k in keys})

    def __call__(self, pts: np.ndarray) -> np.ndarray:
        pts = np.asarray(pts, dtype=complex)
        out = np.zeros(pts.shape[0], dtype=complex)
        for t in self.terms.values():
            out += t(pts)
        return out

    def to_json(self) -> dict:
        terms = []
        for k, t in self.terms.items():
            item = {"k": k.to_json(), "monomials": t.monomials_json()}
            if t.norm is not None:
                item["norm"] = t.norm.value
                item["norm_exact"] = t.norm.exact
            terms.append(item)
        return {"space": self.space.to_json(), "R": self.R, "terms": terms}

    @classmethod
    def from_json(cls, data: Mapping) -> "MHExpansion":
        space = SumSpaceSpec.from_json(data["space"])
        terms = {}
        for item in data["terms"]:
            k = MultiIndex.from_json(item["k"])
            norm = None
            if "norm" in item and item["norm"] is not None:
                norm = NormEstimate(float(item["norm"]), bool(item.get("norm_exact", False)))
            terms[k] = KHomPolynomial(k, space.dims,
                                      BlockPolynomial.coeffs_from_json(item["monomials"]), norm)
        return cls(space, float(data["R"]), terms)

    @classmethod
    def from_polynomial(cls, space: SumSpaceSpec, R: float, f: BlockPolynomial,
                        sampler: NormSampler | None = None) -> "MHExpansion":
        parts = f.components()
        return cls(space, R, parts).with_norms(sampler)


def m_sigma(E: MHExpansion, sigma: ScaleSequence) -> float:
    """``sup_k [f_k] sigma^k R^||k||`` over the stored terms."""
    best = 0.0
    for k, nk in E.norms().items():
        val = nk * E.R ** mi.total_degree(k)
        for n, e in k.items():
            val *= sigma[n] ** e
        best = max(best, val)
    return best


def partial_sum_eval(E: MHExpansion, x: SumVector) -> complex:
    pt = flat_point(E.space, x, E.space.nblocks)
    total = 0j
    for t in E.terms.values():
        total += complex(t(pt))
    return total

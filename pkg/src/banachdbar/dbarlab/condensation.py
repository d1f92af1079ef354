"""Condensation of singularities over a finite block truncation.

Members ``f_p`` live on C^{n(p)}.  The assembled form on the block sum
``C^{n(2)} + ... + C^{n(P)}`` is ``sum_p p^{-p} pi_p^* f_p``, where ``pi_p`` is
the projection onto block p.  The pullback of the assembled form along the
inclusion of block p returns exactly ``p^{-p} f_p``.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Mapping, Sequence

import numpy as np

from .norms import cm_norm
from .poly import NotClosedError, PolyForm01, PolyFunction, dbar, is_closed

#: tolerance for the unit C^{p-1} normalization
NORM_TOL = 0.02


def _offsets(dims: Sequence[int]) -> list[int]:
    return list(np.concatenate([[0], np.cumsum(dims)[:-1]]).astype(int)) if len(dims) else []


def _check_dims(n: int, dims: Sequence[int]) -> None:
    if any(d <= 0 for d in dims):
        raise ValueError("block dimensions must be positive")
    if sum(dims) != n:
        raise ValueError(f"blocks {list(dims)} do not add up to n={n}")


def restrict(f: PolyForm01 | PolyFunction, dims: Sequence[int], nblocks: int):
    """Pullback along the inclusion of the first ``nblocks`` blocks."""
    _check_dims(f.n, dims)
    if not 0 <= nblocks <= len(dims):
        raise ValueError("block count out of range")
    keep = list(range(int(sum(dims[:nblocks]))))
    if isinstance(f, PolyFunction):
        return f.restrict(keep)
    return PolyForm01(len(keep), [f[j].restrict(keep) for j in keep])


def cylinder_lift(u: PolyForm01 | PolyFunction, dims: Sequence[int]):
    """Pullback along the projection onto the leading blocks whose dimensions add up to ``u.n``."""
    N = int(sum(dims))
    prefix = np.cumsum([0] + list(dims))
    if u.n not in set(prefix.tolist()):
        raise ValueError(f"n={u.n} is not a block prefix of {list(dims)}")
    if isinstance(u, PolyFunction):
        return u.embed(N, 0)
    comps = [u[j].embed(N, 0) for j in range(u.n)] + [PolyFunction(N)] * (N - u.n)
    return PolyForm01(N, comps)


def block_pullback(f: PolyForm01, dims: Sequence[int], index: int) -> PolyForm01:
    """Pullback along the inclusion of block ``index`` (0-based) alone."""
    _check_dims(f.n, dims)
    off = _offsets(dims)[index]
    keep = list(range(off, off + dims[index]))
    return PolyForm01(len(keep), [f[j].restrict(keep) for j in keep])


def projection_pullback(f: PolyForm01, dims: Sequence[int], index: int) -> PolyForm01:
    """``pi^* f`` for the projection onto block ``index`` of the sum."""
    if f.n != dims[index]:
        raise ValueError("member dimension does not match its block")
    N, off = int(sum(dims)), _offsets(dims)[index]
    comps = [PolyFunction(N)] * N
    for j in range(f.n):
        comps[off + j] = f[j].embed(N, off)
    return PolyForm01(N, comps)


def _scale(f: PolyForm01, c) -> PolyForm01:
    return PolyForm01(f.n, [comp.map_coeffs(lambda v: v * c) for comp in f.components])


@dataclass
class CondensationSpec:
    P: int
    family: dict[int, PolyForm01]            # p -> normalized member on C^{n(p)}
    radii: dict[int, float] = field(default_factory=dict)  # r_p, carried as metadata
    raw_norms: dict[int, float] = field(default_factory=dict)

    def __post_init__(self):
        if self.P < 2:
            raise ValueError("P must be >= 2")
        missing = [p for p in range(2, self.P + 1) if p not in self.family]
        if missing:
            raise ValueError(f"family is missing p = {missing}")
        for p in range(2, self.P + 1):
            if not is_closed(self.family[p])[0]:
                raise NotClosedError(f"family member p={p} is not dbar-closed")

    @property
    def dims(self) -> list[int]:
        return [self.family[p].n for p in range(2, self.P + 1)]

    @property
    def weights(self) -> dict[int, Fraction]:
        return {p: Fraction(1, p**p) for p in range(2, self.P + 1)}

    @classmethod
    def normalized(cls, members: Mapping[int, PolyForm01], P: int | None = None,
                   radii: Mapping[int, float] | None = None, *, samples: int = 8192,
                   seed: int = 0) -> "CondensationSpec":
        """Rescale each member to unit C^{p-1} norm on the unit ball.

        The factor is a rational approximation of ``1/norm``, so exact members
        stay exact; the result is checked to lie within 2% of 1.
        """
        P = max(members) if P is None else P
        fam, raw = {}, {}
        for p in range(2, P + 1):
            f = members[p]
            if not is_closed(f)[0]:
                raise NotClosedError(f"family member p={p} is not dbar-closed")
            est = cm_norm(f, p - 1, 1.0, samples=samples, seed=seed)
            if est == 0:
                raise ValueError(f"family member p={p} vanishes")
            c = Fraction(1.0 / est).limit_denominator(10**6)
            g = _scale(f, c)
            # the norm is homogeneous and the samples are seeded, so this is exact
            check = est * float(c)
            if abs(check - 1) > NORM_TOL:
                raise ValueError(f"normalization of p={p} is off: {check}")
            fam[p], raw[p] = g, est
        return cls(P, fam, dict(radii or {}), raw)

    def to_json(self) -> dict:
        return {"P": self.P,
                "family": {str(p): self.family[p].to_json() for p in sorted(self.family)},
                "radii": {str(p): v for p, v in sorted(self.radii.items())},
                "raw_norms": {str(p): v for p, v in sorted(self.raw_norms.items())}}

    @classmethod
    def from_json(cls, data: Mapping) -> "CondensationSpec":
        return cls(int(data["P"]),
                   {int(p): PolyForm01.from_json(v) for p, v in data["family"].items()},
                   {int(p): float(v) for p, v in data.get("radii", {}).items()},
                   {int(p): float(v) for p, v in data.get("raw_norms", {}).items()})


@dataclass
class CondensedForm:
    form: PolyForm01
    dims: list[int]          # block dimensions for p = 2..P
    weights: dict[int, Fraction]

    def block(self, p: int) -> PolyForm01:
        """Pullback to block p alone."""
        return block_pullback(self.form, self.dims, p - 2)

    def to_json(self) -> dict:
        return {"form": self.form.to_json(), "dims": self.dims,
                "weights": {str(p): f"{w.numerator}/{w.denominator}" for p, w in self.weights.items()}}


def condense(spec: CondensationSpec) -> CondensedForm:
    """``sum_{p=2}^P p^{-p} pi_p^* f_p`` on the block sum."""
    dims = spec.dims
    N = sum(dims)
    total = PolyForm01.zero(N)
    for i, p in enumerate(range(2, spec.P + 1)):
        w = spec.weights[p]
        total = total + _scale(projection_pullback(spec.family[p], dims, i), w)
    return CondensedForm(total, dims, spec.weights)


def synthetic_member(p: int, n: int = 2) -> PolyForm01:
    """``dbar`` of ``(zbar_1 + ... + zbar_n)^p / p + zbar_1 z_n``: exact, closed, degree p-1."""
    s = PolyFunction(n)
    for j in range(n):
        s = s + PolyFunction.zbar(n, j)
    w = (s ** p).map_coeffs(lambda c: Fraction(c) / p) + PolyFunction.zbar(n, 0) * PolyFunction.z(n, n - 1)
    return dbar(w)


def synthetic_family(P: int, n_of_p: Callable[[int], int] = lambda p: 2) -> dict[int, PolyForm01]:
    return {p: synthetic_member(p, n_of_p(p)) for p in range(2, P + 1)}

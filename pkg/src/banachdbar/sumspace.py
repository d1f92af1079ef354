"""Y-sums of finite-dimensional l_p(C^n) blocks.

Only finitely many blocks are materialized; every vector is finitely
supported and blocks past the declared list are zero.  Block positions are
1-based throughout.
"""
from __future__ import annotations

import math
import warnings
from dataclasses import dataclass, field
from typing import Iterable, Mapping, Sequence

import numpy as np

from .jsonio import split_array


def _parse_p(p) -> float:
    if isinstance(p, str):
        if p.lower() in ("sup", "inf", "max"):
            return math.inf
        p = float(p)
    p = float(p)
    if not p >= 1:
        raise ValueError(f"block exponent p must be >= 1, got {p}")
    return p


def _parse_outer(outer) -> float | str:
    if isinstance(outer, str):
        if outer.lower() in ("c0", "c_0"):
            return "c0"
        outer = outer.lower().lstrip("l").lstrip("_")
    q = float(outer)
    if not (1 <= q < math.inf):
        raise ValueError(f"outer space must be l_q with 1 <= q < inf or c0, got {outer}")
    return q


@dataclass(frozen=True)
class Block:
    p: float
    dim: int

    def __post_init__(self):
        object.__setattr__(self, "p", _parse_p(self.p))
        if int(self.dim) < 1:
            raise ValueError(f"block dimension must be >= 1, got {self.dim}")
        object.__setattr__(self, "dim", int(self.dim))

    def norm(self, v: np.ndarray) -> float:
        return float(np.linalg.norm(np.asarray(v, dtype=complex), self.p))


@dataclass(frozen=True)
class SumSpaceSpec:
    """Blocks ``X_1, X_2, ...`` and the outer sequence space ``Y``."""

    blocks: tuple[Block, ...]
    outer: float | str = 1.0

    def __post_init__(self):
        blocks = tuple(b if isinstance(b, Block) else Block(*b) for b in self.blocks)
        if not blocks:
            raise ValueError("a sum space needs at least one block")
        object.__setattr__(self, "blocks", blocks)
        object.__setattr__(self, "outer", _parse_outer(self.outer))

    @classmethod
    def l1(cls, dims: Sequence[int], p: float = 1.0) -> "SumSpaceSpec":
        return cls(tuple(Block(p, d) for d in dims), 1.0)

    @property
    def dims(self) -> tuple[int, ...]:
        return tuple(b.dim for b in self.blocks)

    @property
    def nblocks(self) -> int:
        return len(self.blocks)

    def offsets(self) -> tuple[int, ...]:
        """Start of each block in the flattened scalar coordinates."""
        out, acc = [], 0
        for b in self.blocks:
            out.append(acc)
            acc += b.dim
        return tuple(out)

    @property
    def total_dim(self) -> int:
        return sum(self.dims)

    def block(self, n: int) -> Block:
        if not 1 <= n <= self.nblocks:
            raise ValueError(f"block {n} outside 1..{self.nblocks}")
        return self.blocks[n - 1]

    def outer_norm(self, y: Sequence[float]) -> float:
        y = np.abs(np.asarray(y, dtype=float))
        if y.size == 0:
            return 0.0
        if self.outer == "c0":
            return float(y.max())
        return float(np.linalg.norm(y, self.outer))

    def to_json(self) -> dict:
        def enc(p):
            return "sup" if math.isinf(p) else p

        return {
            "blocks": [{"p": enc(b.p), "dim": b.dim} for b in self.blocks],
            "outer": self.outer if self.outer == "c0" else self.outer,
        }

    @classmethod
    def from_json(cls, data: Mapping) -> "SumSpaceSpec":
        return cls(tuple(Block(b["p"], b["dim"]) for b in data["blocks"]), data.get("outer", 1.0))


class SumVector:
    """Finitely supported vector; absent blocks are zero.  Immutable."""

    __slots__ = ("_components",)

    def __init__(self, components: Mapping[int, Sequence[complex]] | None = None):
        comps = {}
        for n, v in (components or {}).items():
            n = int(n)
            if n < 1:
                raise ValueError("block positions are 1-based")
            arr = np.array(v, dtype=complex).reshape(-1)
            arr.setflags(write=False)
            comps[n] = arr
        self._components = dict(sorted(comps.items()))

    @property
    def components(self) -> dict[int, np.ndarray]:
        return dict(self._components)

    def block(self, n: int, dim: int | None = None) -> np.ndarray:
        v = self._components.get(n)
        if v is None:
            if dim is None:
                raise KeyError(n)
            return np.zeros(dim, dtype=complex)
        return v

    def support(self) -> tuple[int, ...]:
        return tuple(self._components)

    def __eq__(self, other) -> bool:
        if not isinstance(other, SumVector):
            return NotImplemented
        keys = set(self._components) | set(other._components)
        for n in keys:
            a, b = self._components.get(n), other._components.get(n)
            if a is None:
                a = np.zeros_like(b)
            if b is None:
                b = np.zeros_like(a)
            if a.shape != b.shape or not np.array_equal(a, b):
                return False
        return True

    def __add__(self, other: "SumVector") -> "SumVector":
        out = {n: v.copy() for n, v in self._components.items()}
        for n, v in other._components.items():
            out[n] = out[n] + v if n in out else v.copy()
        return SumVector(out)

    def __mul__(self, c: complex) -> "SumVector":
        return SumVector({n: c * v for n, v in self._components.items()})

    __rmul__ = __mul__

    def __sub__(self, other: "SumVector") -> "SumVector":
        return self + other * (-1)

    def __repr__(self) -> str:
        return f"SumVector({ {n: v.tolist() for n, v in self._components.items()} })"

    def flatten(self, spec: SumSpaceSpec) -> np.ndarray:
        """Scalar coordinates over all blocks of ``spec``."""
        check(spec, self)
        return np.concatenate([self.block(n + 1, b.dim) for n, b in enumerate(spec.blocks)])

    @classmethod
    def unflatten(cls, spec: SumSpaceSpec, flat: Sequence[complex]) -> "SumVector":
        flat = np.asarray(flat, dtype=complex)
        if flat.shape != (spec.total_dim,):
            raise ValueError(f"expected {spec.total_dim} coordinates, got {flat.shape}")
        out = {}
        for n, (off, b) in enumerate(zip(spec.offsets(), spec.blocks), start=1):
            v = flat[off:off + b.dim]
            if np.any(v):
                out[n] = v
        return cls(out)

    def to_json(self) -> dict:
        out = {}
        for n, v in self._components.items():
            re, im = split_array(v)
            out[str(n)] = [[a, b] for a, b in zip(re, im)]
        return out

    @classmethod
    def from_json(cls, data: Mapping) -> "SumVector":
        return cls({int(n): [complex(a, b) for a, b in pairs] for n, pairs in data.items()})


def check(spec: SumSpaceSpec, x: SumVector) -> None:
    for n, v in x.components.items():
        if n > spec.nblocks:
            raise ValueError(f"vector has block {n} but the space declares {spec.nblocks}")
        if v.shape[0] != spec.blocks[n - 1].dim:
            raise ValueError(
                f"block {n} has dimension {spec.blocks[n - 1].dim}, vector gives {v.shape[0]}"
            )


def modulus(spec: SumSpaceSpec, x: SumVector) -> np.ndarray:
    """The block-norm sequence ``|x| = (||x_1||_1, ||x_2||_2, ...)``."""
    check(spec, x)
    return np.array([b.norm(x.block(n + 1, b.dim)) for n, b in enumerate(spec.blocks)])


def norm(spec: SumSpaceSpec, x: SumVector) -> float:
    return spec.outer_norm(modulus(spec, x))


def include(spec: SumSpaceSpec, n: int, v: Sequence[complex]) -> SumVector:
    v = np.asarray(v, dtype=complex).reshape(-1)
    if v.shape[0] != spec.block(n).dim:
        raise ValueError(f"block {n} has dimension {spec.block(n).dim}, got {v.shape[0]}")
    return SumVector({n: v})


def project(x: SumVector, m: int, n: int | float) -> SumVector:
    """``pi_{m,n}``: keep blocks ``m..n`` (``n`` may be ``math.inf``)."""
    if math.isinf(m) or m < 1 or n < m:
        raise ValueError(f"invalid block range [{m}, {n}]")
    return SumVector({i: v for i, v in x.components.items() if m <= i <= n})


def tail_sums(spec: SumSpaceSpec, x: SumVector, n: int) -> float:
    """``R_n(x) = sum_{nu >= n} ||x_nu||_nu``."""
    y = modulus(spec, x)
    return float(y[max(n, 1) - 1:].sum())


@dataclass(frozen=True)
class ScaleSequence:
    """Finite prefix of a sequence sigma with an implicit zero tail."""

    values: tuple[float, ...]
    zero_tail: bool = True

    def __post_init__(self):
        vals = tuple(float(v) for v in self.values)
        if any(v < 0 for v in vals):
            raise ValueError("scale values must be nonnegative")
        if any(b > a for a, b in zip(vals, vals[1:])):
            warnings.warn("scale prefix is not nonincreasing", stacklevel=3)
        object.__setattr__(self, "values", vals)

    def __getitem__(self, n: int) -> float:
        return self.values[n - 1] if 1 <= n <= len(self.values) else 0.0

    @property
    def in_s1(self) -> bool:
        return all(v < 1 for v in self.values)


def scale(sigma: ScaleSequence, x: SumVector) -> SumVector:
    return SumVector({n: sigma[n] * v for n, v in x.components.items() if sigma[n] != 0})


def random_vector(spec: SumSpaceSpec, rng: np.random.Generator, radius: float = 1.0,
                  blocks: Iterable[int] | None = None, boundary: bool = False) -> SumVector:
    """A random vector of norm ``radius`` (or below it unless ``boundary``)."""
    blocks = list(blocks) if blocks is not None else list(range(1, spec.nblocks + 1))
    comps = {}
    for n in blocks:
        b = spec.block(n)
        v = rng.normal(size=b.dim) + 1j * rng.normal(size=b.dim)
        comps[n] = v / b.norm(v) * rng.exponential()
    x = SumVector(comps)
    r = radius if boundary else radius * rng.uniform() ** (1.0 / max(1, 2 * spec.total_dim))
    return x * (r / norm(spec, x))

"""Small-sup solutions of dbar u = f on a ball, and growth tables over a family.

``u = u0 + h`` with ``u0`` the homotopy solution and ``h`` a holomorphic
polynomial of bounded degree; ``h`` minimizes the largest ``|u|`` on a finite
grid.  The discrete complex Chebyshev problem is solved with Lawson's
iteratively reweighted least squares, keeping the best iterate seen (h = 0
included), so the returned sup never exceeds that of ``u0`` on the grid.
"""
from __future__ import annotations

import csv
import io
import itertools
import logging
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import Callable, Iterable

import numpy as np

from .norms import ball_points, cm_norm
from .poly import NotClosedError, PolyForm01, PolyFunction, homotopy_solve, is_closed

log = logging.getLogger(__name__)


def ball_grid(n: int, radius: float, count: int = 2048, seed: int = 0) -> np.ndarray:
    """Seeded grid of the closed ball in C^n, half of it on the sphere."""
    return ball_points(n, radius, count, np.random.default_rng(seed))


def holomorphic_exponents(n: int, degree: int) -> list[tuple[int, ...]]:
    out = []
    for d in range(degree + 1):
        for e in itertools.product(range(d + 1), repeat=n):
            if sum(e) == d:
                out.append(tuple(e))
    return out


@dataclass
class MinSupResult:
    u: PolyFunction
    sup: float          # sampled sup |u| on the grid: an upper estimate of the minimum
    initial_sup: float  # sup |u0| for the homotopy solution
    iterations: int
    grid_size: int

    def to_json(self) -> dict:
        return {"u": self.u.to_json(), "sup": self.sup, "initial_sup": self.initial_sup,
                "iterations": self.iterations, "grid_size": self.grid_size,
                "upper_estimate": True}


def lawson(A: np.ndarray, b: np.ndarray, iters: int = 300, tol: float = 1e-12,
           stall: int = 40) -> tuple[np.ndarray, float, int]:
    """Approximately minimize ``max |b + A c|`` over complex c; returns (c, max, iterations)."""
    P, M = A.shape
    best_c = np.zeros(M, dtype=complex)
    best = float(np.max(np.abs(b))) if P else 0.0
    if M == 0 or P == 0 or best == 0:
        return best_c, best, 0
    w = np.full(P, 1.0 / P)
    it = last = 0
    for it in range(1, iters + 1):
        sw = np.sqrt(w)
        c, *_ = np.linalg.lstsq(A * sw[:, None], -b * sw, rcond=None)
        r = np.abs(b + A @ c)
        val = float(r.max())
        if val < best:
            improvement = best - val
            best, best_c, last = val, c, it
            if improvement <= tol * max(best, 1e-300):
                break
        elif it - last >= stall:
            break
        w = w * r
        s = w.sum()
        if s == 0:
            break
        w /= s
    return best_c, best, it


def min_sup_solution(f: PolyForm01, r: float = 1.0, grid: np.ndarray | None = None,
                     holo_degree: int = 4, *, grid_size: int = 2048, seed: int = 0,
                     iters: int = 300) -> MinSupResult:
    """Solve ``dbar u = f`` with small sampled sup on the ball of radius ``r``."""
    closed, _ = is_closed(f)
    if not closed:
        raise NotClosedError("form is not dbar-closed")
    if r <= 0:
        raise ValueError("radius must be positive")
    u0 = homotopy_solve(f)
    if grid is None:
        grid = ball_grid(f.n, r, grid_size, seed)
    grid = np.asarray(grid, dtype=complex).reshape(-1, f.n)
    b = np.asarray(u0(grid), dtype=complex).reshape(-1)
    init = float(np.max(np.abs(b))) if b.size else 0.0
    if u0.is_zero():
        return MinSupResult(u0, 0.0, 0.0, 0, grid.shape[0])
    exps = holomorphic_exponents(f.n, holo_degree)
    A = np.stack([np.prod(grid ** np.array(e)[None, :], axis=1) for e in exps], axis=1)
    c, best, it = lawson(A, b, iters)
    h = PolyFunction(f.n, {(e, (0,) * f.n): complex(ci) for e, ci in zip(exps, c) if ci != 0})
    u = u0 + h
    return MinSupResult(u, best, init, it, grid.shape[0])


@dataclass
class GrowthRow:
    p: int
    n: int
    r: float
    cm_norm: float
    min_sup: float

    def as_list(self) -> list:
        return [self.p, self.n, repr(self.r), repr(self.cm_norm), repr(self.min_sup)]


GROWTH_HEADER = ["p", "n", "r", "cm_norm", "min_sup"]


def growth_row(p: int, f: PolyForm01, r: float, holo_degree: int, *, seed: int = 0,
               grid: np.ndarray | None = None, samples: int = 8192) -> GrowthRow:
    """One row: C^{p-1} norm of f on B(r) and the minimal sup estimate on B(r).

    ``f`` is expected to be normalized (unit C^{p-1} norm on the unit ball), so
    ``min_sup`` is the ratio probed by the non-solvability statement.
    """
    closed, _ = is_closed(f)
    if not closed:
        raise NotClosedError(f"family member p={p} is not dbar-closed")
    cm = cm_norm(f, p - 1, r, samples=samples, seed=seed)
    res = min_sup_solution(f, r, grid, holo_degree, seed=seed)
    return GrowthRow(p, f.n, float(r), cm, res.sup)


def growth_table(family: Callable[[int], PolyForm01], r: float, p_range: Iterable[int],
                 holo_degree: int = 4, *, seed: int = 0, threads: int = 1,
                 samples: int = 8192) -> list[GrowthRow]:
    """Rows in the order of ``p_range``; computed in a thread pool when ``threads > 1``."""
    ps = list(p_range)
    job = lambda p: growth_row(p, family(p), r, holo_degree, seed=seed, samples=samples)
    if threads > 1:
        with ThreadPoolExecutor(threads) as ex:
            return list(ex.map(job, ps))
    return [job(p) for p in ps]


def growth_csv(rows: Iterable[GrowthRow]) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(GROWTH_HEADER)
    for row in rows:
        w.writerow(row.as_list())
    return buf.getvalue()

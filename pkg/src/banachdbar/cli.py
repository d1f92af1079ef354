"""Command-line runner: ``banachdbar <command> [options]``.

Every command writes one JSON document (CSV for growth tables) to ``--out`` or
stdout.  Exit codes: 0 success, 2 invalid input, 3 certification failure.
"""
from __future__ import annotations

import argparse
import json
import logging
import sys
from fractions import Fraction
from typing import Sequence

import numpy as np

from . import acslab, dominate, mhcalc, runge, selftest
from . import multiindex as mi
from .dbarlab import condensation as cond
from .dbarlab import minsup, norms, poly
from .jsonio import dumps, read_json, write_atomic
from .multiindex import MultiIndex
from .sumspace import SumSpaceSpec

log = logging.getLogger("banachdbar")

EXIT_OK, EXIT_FAIL, EXIT_INPUT, EXIT_CERT = 0, 1, 2, 3


class InputError(ValueError):
    """Bad command-line input."""


def _floats(text: str) -> list[float]:
    try:
        return [float(v) for v in text.split(",") if v.strip()]
    except ValueError as exc:
        raise InputError(f"cannot parse number list {text!r}") from exc


def _complexes(text: str) -> np.ndarray:
    try:
        return np.array([complex(v.strip().replace(" ", "")) for v in text.split(",") if v.strip()])
    except ValueError as exc:
        raise InputError(f"cannot parse complex list {text!r}") from exc


def _int_range(text: str) -> list[int]:
    """``"2:5"`` -> [2, 3, 4, 5]; ``"2,4"`` -> [2, 4]."""
    if ":" in text:
        a, b = text.split(":")
        return list(range(int(a), int(b) + 1))
    return [int(v) for v in text.split(",")]


def _load(path: str):
    try:
        return read_json(path)
    except FileNotFoundError as exc:
        raise InputError(f"no such file: {path}") from exc
    except json.JSONDecodeError as exc:
        raise InputError(f"malformed JSON in {path}: {exc}") from exc


def _block_polynomial(data) -> tuple[SumSpaceSpec, float, mhcalc.BlockPolynomial]:
    space = SumSpaceSpec.from_json(data["space"])
    f = mhcalc.BlockPolynomial(space.dims, mhcalc.BlockPolynomial.coeffs_from_json(data["monomials"]))
    return space, float(data.get("R", 1.0)), f


def _is_form(data) -> bool:
    return all("j" in t for t in data.get("terms", []))


def _form(data) -> poly.PolyForm01:
    if not _is_form(data):
        raise InputError("expected a (0,1)-form: every term needs a 'j' entry")
    return poly.PolyForm01.from_json(data)


# commands

def cmd_expand(args) -> dict:
    space, R, f = _block_polynomial(_load(args.input))
    cap = args.degree_cap if args.degree_cap is not None else f.max_block_degree()
    terms = {}
    for k in mi.enumerate_indices(space.nblocks, args.max_degree):
        part = mhcalc.component(f, k, cap, exact=args.exact)
        if part.coeffs:
            terms[k] = part
    E = mhcalc.MHExpansion(space, R, terms)
    if args.norms:
        E = E.with_norms(mhcalc.NormSampler(seed=args.seed))
    return E.to_json()


def cmd_norm(args) -> dict:
    data = _load(args.input)
    if "space" in data:
        space, _, f = _block_polynomial(data)
        parts = f.components()
        if len(parts) != 1:
            raise InputError("norm needs a single k-homogeneous polynomial; use expand first")
        (k, phi), = parts.items()
        est = mhcalc.khom_norm(phi, space, mhcalc.NormSampler(seed=args.seed),
                               method="sample" if args.sample else "auto")
        out = {"kind": "khom", "k": k.to_json(), "value": est.value, "exact": est.exact}
        if est.exact_value is not None:
            out["exact_value"] = str(est.exact_value)
        return out
    if args.m is None:
        raise InputError("--m is required for a C^m norm")
    obj = poly.PolyForm01.from_json(data) if data.get("terms") and _is_form(data) \
        else poly.PolyFunction.from_json(data)
    res = norms.cm_norm_detail(obj, args.m, args.radius, samples=args.samples, seed=args.seed)
    return {"kind": "cm", "m": args.m, "radius": args.radius, **res.to_json()}


def cmd_delta(args) -> dict:
    z = _floats(args.z)
    if args.certified:
        res = dominate.delta_certified(args.q, z, args.D)
    else:
        res = dominate.delta_truncated(args.q, z, args.D)
    return {"q": args.q, "z": z, **res.to_json()}


def cmd_runge(args) -> dict:
    if args.input == "geometric":
        E = runge.geometric_fixture(R=args.R)
    else:
        E = mhcalc.MHExpansion.from_json(_load(args.input))
    if any(t.norm is None for t in E.terms.values()):
        E = E.with_norms(mhcalc.NormSampler(seed=args.seed))
    g, cert = runge.approximate(E, args.R, args.r, args.eps, samples=args.samples,
                                seed=args.seed, allow_sampled=not args.certified_only)
    if args.require_satisfied and not cert.satisfied:
        raise runge.CertificationError("error bound does not reach eps")
    return {"certificate": cert.to_json(), "approximant": g.to_json()}


def cmd_dbar(args):
    if args.action == "growth":
        ps = _int_range(args.p_range)
        fam = cond.synthetic_family(max(ps), lambda p: args.n)
        spec = cond.CondensationSpec.normalized(fam, samples=args.samples, seed=args.seed)
        rows = minsup.growth_table(lambda p: spec.family[p], args.r, ps, args.D,
                                   seed=args.seed, threads=args.threads, samples=args.samples)
        return minsup.growth_csv(rows)
    if args.action == "condense":
        if args.input:
            members = {int(p): poly.PolyForm01.from_json(v) for p, v in _load(args.input).items()}
        else:
            members = cond.synthetic_family(args.P, lambda p: args.n)
        spec = cond.CondensationSpec.normalized(members, args.P, samples=args.samples, seed=args.seed)
        C = cond.condense(spec)
        return {"spec": spec.to_json(), "condensed": C.to_json(),
                "closed": poly.is_closed(C.form)[0]}
    if not args.input:
        raise InputError(f"dbar {args.action} needs --input")
    data = _load(args.input)
    if args.action == "check":
        f = _form(data)
        closed, res = poly.is_closed(f)
        return {"closed": closed,
                "residuals": [{"i": i + 1, "j": j + 1, **r.to_json()} for (i, j), r in res.items()
                              if not r.is_zero()]}
    if args.action == "solve":
        return poly.homotopy_solve(_form(data)).to_json()
    if args.action == "minsup":
        f = _form(data)
        res = minsup.min_sup_solution(f, args.r, None, args.D, grid_size=args.grid, seed=args.seed)
        return res.to_json()
    raise InputError(f"unknown dbar action {args.action}")


def _gform(path: str) -> acslab.GForm01:
    return acslab.GForm01.from_json(_load(path))


def cmd_acs(args) -> dict:
    rng = np.random.default_rng(args.seed)
    if args.action == "mc-check":
        G = acslab.LieGroupModel.gl(args.m)
        worst, inv = 0.0, 0.0
        for _ in range(args.samples):
            z = acslab.random_gl_element(args.m, rng)
            X = rng.normal(size=(args.m, args.m)) + 1j * rng.normal(size=(args.m, args.m))
            Y = rng.normal(size=(args.m, args.m)) + 1j * rng.normal(size=(args.m, args.m))
            worst = max(worst, acslab.maurer_cartan_residual(G, z, X, Y, args.h))
            inv = max(inv, acslab.left_invariance_residual(G, acslab.random_gl_element(args.m, rng), z, X))
        return {"m": args.m, "h": args.h, "samples": args.samples,
                "maurer_cartan_residual": worst, "left_invariance_residual": inv,
                "passed": worst < 1e-3 and inv < 1e-10}
    if not args.form:
        raise InputError(f"acs {args.action} needs --form")
    f = _gform(args.form)
    if args.action in ("check", "decompose"):
        V = acslab.GTangent.from_json(_load(args.tangent)) if args.tangent \
            else acslab.random_tangent(f.group, f.n, rng)
        if args.action == "check":
            m = acslab.is_antiholomorphic_tangent(V, f)
            return {"member": m.ok, "base_residual": m.base_residual, "fiber_residual": m.fiber_residual}
        V1, V2 = acslab.decompose(V, f, exact_mode=True)
        m1 = acslab.is_antiholomorphic_tangent(V1, f)
        m2 = acslab.is_antiholomorphic_tangent(V2.conj(), f)
        return {"V": V.to_json(), "V1": V1.to_json(), "V2": V2.to_json(),
                "sum_exact": (V1 + V2).equals(V.exact()),
                "residuals": [m1.base_residual, m1.fiber_residual, m2.base_residual, m2.fiber_residual]}
    if args.action == "residual":
        x = _complexes(args.x) if args.x else np.zeros(f.n, dtype=complex)
        zeta = _complexes(args.zeta) if args.zeta else np.eye(f.n)[0]
        zeta2 = _complexes(args.zeta2) if args.zeta2 else np.eye(f.n)[min(1, f.n - 1)]
        val = np.asarray(acslab.integrability_residual(f, x, zeta, zeta2))
        coeffs = acslab.integrability_coefficients(f)
        return {"value_re": val.real.tolist(), "value_im": val.imag.tolist(),
                "integrable": all(c.is_zero() for c in coeffs.values()),
                "coefficients": [{"i": i + 1, "j": j + 1, **c.to_json()} for (i, j), c in coeffs.items()]}
    if args.action == "transport":
        if not args.u:
            raise InputError("acs transport needs --u")
        u = poly.PolyFunction.from_json(_load(args.u))
        chk = acslab.gauge_transport(f, u, samples=args.samples, seed=args.seed)
        return {"g": chk.g.to_json(), "max_residual": chk.max_residual, "passed": chk.ok}
    raise InputError(f"unknown acs action {args.action}")


def cmd_selftest(args) -> dict:
    return selftest.run(args.seed)


def build_parser() -> argparse.ArgumentParser:
    def globals_parser(suppress: bool) -> argparse.ArgumentParser:
        # subcommands repeat the global flags; SUPPRESS keeps them from
        # overwriting a value given before the subcommand name
        d = (lambda v: argparse.SUPPRESS) if suppress else (lambda v: v)
        g = argparse.ArgumentParser(add_help=False)
        g.add_argument("--seed", type=int, default=d(0), help="random seed (default 0)")
        g.add_argument("--threads", type=int, default=d(1), help="worker threads where supported")
        g.add_argument("--out", default=d(None), help="output file (default stdout)")
        g.add_argument("-v", "--verbose", action="store_true", default=d(False))
        return g

    common = globals_parser(True)
    ap = argparse.ArgumentParser(prog="banachdbar", parents=[globals_parser(False)],
                                 description="Multihomogeneous expansions, Runge certificates and dbar experiments.")
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("expand", parents=[common], help="k-homogeneous components over an index window")
    p.add_argument("--input", required=True)
    p.add_argument("--max-degree", type=int, default=6)
    p.add_argument("--degree-cap", type=int)
    p.add_argument("--exact", action="store_true", help="symbolic extraction")
    p.add_argument("--norms", action="store_true", help="attach [f_k] estimates")
    p.set_defaults(func=cmd_expand)

    p = sub.add_parser("norm", parents=[common], help="homogeneity norm or C^m norm")
    p.add_argument("--input", required=True)
    p.add_argument("--m", type=int)
    p.add_argument("--radius", type=float, default=1.0)
    p.add_argument("--samples", type=int, default=norms.DEFAULT_SAMPLES)
    p.add_argument("--sample", action="store_true", help="force the sampled estimate")
    p.set_defaults(func=cmd_norm)

    p = sub.add_parser("delta", parents=[common], help="dominating function")
    p.add_argument("--q", type=float, required=True)
    p.add_argument("--z", required=True, help="comma-separated |z_n|")
    p.add_argument("--D", type=int, default=30)
    p.add_argument("--certified", action="store_true", help="add a rigorous tail bound")
    p.set_defaults(func=cmd_delta)

    p = sub.add_parser("runge", parents=[common], help="polynomial approximation with certificate")
    p.add_argument("--input", required=True, help="expansion JSON, or 'geometric' for the built-in fixture")
    p.add_argument("--R", type=float, required=True)
    p.add_argument("--r", type=float, required=True)
    p.add_argument("--eps", type=float, required=True)
    p.add_argument("--samples", type=int, default=10_000)
    p.add_argument("--certified-only", action="store_true", help="fail instead of using sampled sup estimates")
    p.add_argument("--require-satisfied", action="store_true", help="exit 3 unless the bound reaches eps")
    p.set_defaults(func=cmd_runge)

    p = sub.add_parser("dbar", parents=[common], help="finite-dimensional dbar calculus")
    p.add_argument("action", choices=["check", "solve", "minsup", "condense", "growth"])
    p.add_argument("--input")
    p.add_argument("--r", type=float, default=1.0)
    p.add_argument("--D", type=int, default=4, help="degree of holomorphic corrections")
    p.add_argument("--grid", type=int, default=2048)
    p.add_argument("--P", type=int, default=3)
    p.add_argument("--n", type=int, default=2, help="block dimension of the synthetic family")
    p.add_argument("--p-range", default="2:4")
    p.add_argument("--samples", type=int, default=norms.DEFAULT_SAMPLES)
    p.set_defaults(func=cmd_dbar)

    p = sub.add_parser("acs", parents=[common], help="almost complex structure checks")
    p.add_argument("action", choices=["check", "decompose", "residual", "transport", "mc-check"])
    p.add_argument("--form")
    p.add_argument("--tangent")
    p.add_argument("--u")
    p.add_argument("--x")
    p.add_argument("--zeta")
    p.add_argument("--zeta2")
    p.add_argument("--m", type=int, default=2)
    p.add_argument("--h", type=float, default=acslab.FD_STEP)
    p.add_argument("--samples", type=int, default=64)
    p.set_defaults(func=cmd_acs)

    p = sub.add_parser("selftest", parents=[common], help="run the invariant suite")
    p.set_defaults(func=cmd_selftest)
    return ap


def _jsonable(obj):
    if isinstance(obj, dict):
        return {str(k): _jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_jsonable(v) for v in obj]
    if isinstance(obj, (np.bool_, bool)):
        return bool(obj)
    if isinstance(obj, np.integer):
        return int(obj)
    if isinstance(obj, np.floating):
        return float(obj)
    if isinstance(obj, Fraction):
        return str(obj)
    return obj


def run(argv: Sequence[str] | None = None) -> int:
    ap = build_parser()
    try:
        args = ap.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    try:
        result = args.func(args)
    except runge.CertificationError as exc:
        print(f"certification failed: {exc}", file=sys.stderr)
        return EXIT_CERT
    except (InputError, ValueError, KeyError, TypeError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    text = result if isinstance(result, str) else dumps(_jsonable(result))
    if args.out:
        write_atomic(args.out, text)
    else:
        sys.stdout.write(text)
    if args.command == "selftest" and not result["passed"]:
        return EXIT_FAIL
    return EXIT_OK


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()

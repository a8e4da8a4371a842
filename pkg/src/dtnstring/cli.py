"""Command-line surface: coefficient files in, tables and reports out.

Subcommands: weyl, solve, symbol, dtn, extend, convert, dual, catalog,
verify.  CSV output uses 17 significant digits; exit code 0 means every
requested computation (and, for verify, every check) succeeded.
"""

from __future__ import annotations

import argparse
import json
import math
import sys

import numpy as np

from . import catalog as cat
from . import fileio
from .checks import run_invariants
from .errors import DtnStringError
from .extension import DtnOperator, SampledFunction
from .propagator import bounded_solution, solve_fundamental, weyl_fixed, weyl_k
from .strings import GridPolicy, discretize
from .symbols import ExponentialData, LevyTriplet, StieltjesData, exponential_symbol, levy_symbol, stieltjes_symbol
from .transforms import (
    DivergenceCoefficients,
    EKCoefficients,
    GeneralCoefficients,
    divergence_to_standard,
    ek_to_standard,
    reduce_general,
    standard_to_divergence,
    standard_to_ek,
)


def _policy_from(args):
    return GridPolicy(n=args.cells, T=args.truncation, kappa=args.kappa)


def _add_policy_flags(p):
    p.add_argument("--cells", type=int, default=512, help="base cell count per discretization")
    p.add_argument("--truncation", type=float, default=None, help="initial truncation point T")
    p.add_argument("--kappa", type=float, default=1.0, help="grid clustering exponent near 0")


def _load_standard(path):
    obj = fileio.load_coefficients(path)
    if isinstance(obj, EKCoefficients):
        return ek_to_standard(obj).coefficients
    if isinstance(obj, DivergenceCoefficients):
        return divergence_to_standard(obj).coefficients
    if isinstance(obj, GeneralCoefficients):
        return reduce_general(obj).coefficients
    return obj


def cmd_weyl(args):
    coeffs = _load_standard(args.coefficients)
    xis = fileio.parse_grid(args.grid)
    rows = []
    for xi in xis:
        res = weyl_k(coeffs, float(xi), args.tol, _policy_from(args))
        rows.append((xi, res.k.real, res.k.imag, res.truncation_bound))
    fileio.write_table(args.output, ["xi", "re_k", "im_k", "bound"], rows)
    return 0


def cmd_solve(args):
    coeffs = _load_standard(args.coefficients)
    xi = complex(args.xi)
    pol = _policy_from(args)
    T = pol.T if pol.T is not None else (coeffs.R if math.isfinite(coeffs.R) else 4.0)
    d = discretize(coeffs.without_origin_atom(), GridPolicy(pol.n, T, pol.kappa))
    if args.bounded:
        k, _ = weyl_fixed(d, xi)
        traces = [("phi", bounded_solution(d, xi, k))]
    else:
        trD, trN = solve_fundamental(d, xi)
        traces = [("phi_D", trD), ("phi_N", trN)]
    for name, tr in traces:
        path = args.output if len(traces) == 1 else args.output.replace(".csv", f"_{name}.csv")
        fileio.write_table(
            path,
            ["t", "re_phi", "im_phi", "re_dphi", "im_dphi"],
            [
                (t, p.real, p.imag, dp.real, dp.imag)
                for t, p, dp in zip(tr.grid, tr.phi, tr.dphi)
            ],
        )
    return 0


def cmd_symbol(args):
    spec = fileio.load_symbol(args.spec)
    xis = fileio.parse_grid(args.grid)
    if isinstance(spec, LevyTriplet):
        f = lambda x: levy_symbol(spec, x)
    elif isinstance(spec, StieltjesData):
        f = lambda x: stieltjes_symbol(spec, x)
    elif isinstance(spec, ExponentialData):
        f = lambda x: exponential_symbol(spec, x)
    else:
        raise DtnStringError("unsupported symbol spec")
    rows = [(xi, f(float(xi)).real, f(float(xi)).imag) for xi in xis]
    fileio.write_table(args.output, ["xi", "re_k", "im_k"], rows)
    return 0


def cmd_dtn(args):
    coeffs = _load_standard(args.coefficients)
    f = fileio.read_sampled(args.input)
    out = DtnOperator(coeffs, args.tol, _policy_from(args)).apply(f)
    fileio.write_sampled(args.output, out)
    return 0


def cmd_extend(args):
    coeffs = _load_standard(args.coefficients)
    f = fileio.read_sampled(args.input)
    heights = [float(h) for h in args.heights.split(",")]
    outs = DtnOperator(coeffs, args.tol, _policy_from(args)).extend(f, heights)
    for y, u in zip(heights, outs):
        path = args.output.replace(".csv", f"_y{y:g}.csv") if len(outs) > 1 else args.output
        fileio.write_sampled(path, u)
    return 0


def cmd_convert(args):
    obj = fileio.load_coefficients(args.input)
    if args.to == "standard":
        if isinstance(obj, EKCoefficients):
            conv = ek_to_standard(obj)
        elif isinstance(obj, DivergenceCoefficients):
            conv = divergence_to_standard(obj)
        elif isinstance(obj, GeneralCoefficients):
            red = reduce_general(obj)
            conv = type("C", (), {"coefficients": red.coefficients, "error_estimate": red.resolution})
        else:
            conv = type("C", (), {"coefficients": obj, "error_estimate": 0.0})
    elif args.to == "ek":
        std = obj if not isinstance(obj, (EKCoefficients, DivergenceCoefficients)) else _load_any(obj)
        conv = standard_to_ek(std)
    elif args.to == "divergence":
        std = obj if not isinstance(obj, (EKCoefficients, DivergenceCoefficients)) else _load_any(obj)
        conv = standard_to_divergence(std)
    else:
        raise DtnStringError(f"unknown target form {args.to}")
    fileio.save_coefficients(conv.coefficients, args.output)
    if getattr(conv, "error_estimate", 0.0):
        print(f"approximation error estimate: {conv.error_estimate:.3e}", file=sys.stderr)
    return 0


def _load_any(obj):
    if isinstance(obj, EKCoefficients):
        return ek_to_standard(obj).coefficients
    if isinstance(obj, DivergenceCoefficients):
        return divergence_to_standard(obj).coefficients
    return obj


def cmd_dual(args):
    obj = fileio.load_coefficients(args.input)
    if not isinstance(obj, DivergenceCoefficients):
        raise DtnStringError("dual needs a divergence-form coefficient file")
    fileio.save_coefficients(cat.dual_coefficients(obj), args.output)
    return 0


def cmd_catalog(args):
    entries = cat.default_catalog()
    if args.action == "list":
        for e in entries:
            print(f"{e.name:24s} {e.provenance}")
        return 0
    entry = cat.get_entry(args.name)
    import os

    os.makedirs(args.outdir, exist_ok=True)
    fileio.save_coefficients(entry.coefficients, os.path.join(args.outdir, f"{entry.name}.json"))
    xis = fileio.parse_grid(args.grid)
    rows = [(xi, entry.exact_k(float(xi)).real, entry.exact_k(float(xi)).imag) for xi in xis]
    fileio.write_table(os.path.join(args.outdir, f"{entry.name}_k.csv"), ["xi", "re_k", "im_k"], rows)
    return 0


def cmd_verify(args):
    results = run_invariants(seed=args.seed)
    from .acceptance import run_criteria

    results += run_criteria()
    failed = 0
    for r in results:
        status = "pass" if r.ok else "FAIL"
        print(f"{status}  {r.check_id:40s} value={r.value:.3e}  {r.detail}")
        failed += not r.ok
    print(f"{len(results) - failed}/{len(results)} checks passed")
    return 0 if failed == 0 else 1


def main(argv=None):
    ap = argparse.ArgumentParser(prog="dtnstring", description=__doc__)
    ap.add_argument("--seed", type=int, default=0, help="seed for randomized checks")
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("weyl", help="tabulate k(xi) with truncation bounds")
    p.add_argument("coefficients")
    p.add_argument("--grid", default="0.25:4:16", help="xi grid min:max:count[:log]")
    p.add_argument("--tol", type=float, default=1e-8)
    p.add_argument("--output", default="weyl.csv")
    _add_policy_flags(p)
    p.set_defaults(fn=cmd_weyl)

    p = sub.add_parser("solve", help="sample the fundamental pair or the decaying solution")
    p.add_argument("coefficients")
    p.add_argument("--xi", default="1", help="complex spectral parameter, e.g. 1+2j")
    p.add_argument("--bounded", action="store_true", help="emit the decaying solution instead")
    p.add_argument("--output", default="solution.csv")
    _add_policy_flags(p)
    p.set_defaults(fn=cmd_solve)

    p = sub.add_parser("symbol", help="tabulate a symbol from a JSON spec")
    p.add_argument("spec")
    p.add_argument("--grid", default="-10:10:81")
    p.add_argument("--output", default="symbol.csv")
    p.set_defaults(fn=cmd_symbol)

    p = sub.add_parser("dtn", help="apply the Dirichlet-to-Neumann map to sampled data")
    p.add_argument("coefficients")
    p.add_argument("--input", required=True, help="CSV with columns x, re[, im]")
    p.add_argument("--tol", type=float, default=1e-8)
    p.add_argument("--output", default="dtn.csv")
    _add_policy_flags(p)
    p.set_defaults(fn=cmd_dtn)

    p = sub.add_parser("extend", help="harmonic extension at given heights")
    p.add_argument("coefficients")
    p.add_argument("--input", required=True)
    p.add_argument("--heights", required=True, help="comma-separated heights y")
    p.add_argument("--tol", type=float, default=1e-8)
    p.add_argument("--output", default="extend.csv")
    _add_policy_flags(p)
    p.set_defaults(fn=cmd_extend)

    p = sub.add_parser("convert", help="convert between coefficient forms")
    p.add_argument("input")
    p.add_argument("--to", required=True, choices=["standard", "ek", "divergence"])
    p.add_argument("--output", default="converted.json")
    p.set_defaults(fn=cmd_convert)

    p = sub.add_parser("dual", help="dual string of a divergence-form file")
    p.add_argument("input")
    p.add_argument("--output", default="dual.json")
    p.set_defaults(fn=cmd_dual)

    p = sub.add_parser("catalog", help="list entries or emit fixture files")
    p.add_argument("action", choices=["list", "emit"])
    p.add_argument("name", nargs="?")
    p.add_argument("--outdir", default="fixtures")
    p.add_argument("--grid", default="0.25:4:16")
    p.set_defaults(fn=cmd_catalog)

    p = sub.add_parser("verify", help="run the full invariant and acceptance suite")
    p.set_defaults(fn=cmd_verify)

    args = ap.parse_args(argv)
    try:
        return args.fn(args)
    except (DtnStringError, ValueError, OSError, json.JSONDecodeError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())

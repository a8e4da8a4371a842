"""Named verification checks: module invariants plus the acceptance criteria.

Every check returns a CheckResult and is registered under a stable ID, so
the CLI `verify` subcommand and the test suite run the same code.  Checks
are deterministic given the seed.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass

import numpy as np

from . import catalog as cat
from .extension import DtnOperator, SampledFunction, dtn_difference_quotient_check
from .pieces import PiecewiseFn
from .propagator import (
    bounded_solution,
    energy_report,
    solve_fundamental,
    trace_shape,
    weyl_fixed,
    weyl_fixed_batch,
    weyl_k,
    wronskian_deviation,
)
from .strings import GridPolicy, StringCoefficients, cumulative_a, discretize, validate
from .symbols import (
    ExponentialData,
    LevyTriplet,
    StieltjesData,
    exponential_symbol,
    levy_symbol,
    log_gamma_complex,
    rogers_positivity_check,
    stieltjes_symbol,
)
from .transforms import divergence_to_standard, standard_to_divergence, standard_to_ek
from .catalog import complementary_symbol, dual_coefficients


@dataclass(frozen=True)
class CheckResult:
    check_id: str
    ok: bool
    value: float  # worst observed quantity (deviation, violation, ...)
    detail: str


def _result(check_id, ok, value, detail):
    return CheckResult(check_id, bool(ok), float(value), detail)


# ---------------------------------------------------------------------------
# randomized valid strings
# ---------------------------------------------------------------------------


def random_string(rng) -> StringCoefficients:
    """Random admissible string; degenerate (a = b^2 dy) pieces included."""
    finite = rng.random() < 0.4
    R = float(rng.uniform(0.5, 4.0)) if finite else math.inf
    top = R if finite else 3.0
    cuts = np.sort(rng.uniform(0.1, top, rng.integers(0, 3)))
    edges = [0.0, *[float(c) for c in cuts], top]
    dens_pieces, b_pieces = [], []
    from .pieces import Piece

    for lo, hi in zip(edges[:-1], edges[1:]):
        hi_eff = math.inf if (not finite and hi == top) else hi
        kind = rng.integers(0, 3)
        if kind == 0:  # power pair, possibly fully degenerate
            beta = float(rng.uniform(-0.3, 1.2))
            c = float(rng.uniform(-1.5, 1.5))
            slack = 0.0 if rng.random() < 0.3 else float(rng.uniform(0.0, 2.0))
            b_pieces.append(Piece(lo, hi_eff, "power", (c, beta)))
            dens_pieces.append(Piece(lo, hi_eff, "power", (c * c * (1.0 + slack), 2 * beta)))
        elif kind == 1:  # affine drift, polynomial density >= b^2
            b0, b1 = float(rng.uniform(-1, 1)), float(rng.uniform(-1, 1))
            extra = float(rng.uniform(0.0, 1.5))
            sq = (b0 * b0, 2 * b0 * b1, b1 * b1)
            dens_pieces.append(Piece(lo, hi_eff, "poly", (sq[0] + extra, sq[1], sq[2])))
            b_pieces.append(Piece(lo, hi_eff, "poly", (b0, b1)))
        else:  # symmetric piece, no drift
            c = float(rng.uniform(0.0, 3.0))
            if c > 0:
                dens_pieces.append(Piece(lo, hi_eff, "poly", (c,)))
            b_pieces.append(Piece(lo, hi_eff, "poly", (0.0,)))
    atoms = []
    if rng.random() < 0.4:
        pos = float(rng.uniform(0.05, 0.9 * top))
        atoms.append((pos, float(rng.uniform(0.1, 1.0))))
    return StringCoefficients(
        R, tuple(sorted(atoms)), PiecewiseFn(tuple(dens_pieces)), PiecewiseFn(tuple(b_pieces))
    )


# ---------------------------------------------------------------------------
# pure-numpy adaptive Simpson (verify-path quadrature oracle)
# ---------------------------------------------------------------------------


def _adaptive_simpson(f, a, b, tol, depth=48):
    fa, fm, fb = f(a), f(0.5 * (a + b)), f(b)
    whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb)

    def rec(a, b, fa, fm, fb, whole, tol, depth):
        m = 0.5 * (a + b)
        lm, rm = 0.5 * (a + m), 0.5 * (m + b)
        flm, frm = f(lm), f(rm)
        left = (m - a) / 6.0 * (fa + 4.0 * flm + fm)
        right = (b - m) / 6.0 * (fm + 4.0 * frm + fb)
        if depth <= 0 or abs(left + right - whole) <= 15.0 * tol:
            return left + right + (left + right - whole) / 15.0
        return rec(a, m, fa, flm, fm, left, tol / 2.0, depth - 1) + rec(
            m, b, fm, frm, fb, right, tol / 2.0, depth - 1
        )

    return rec(a, b, fa, fm, fb, whole, tol, depth)


def levy_quadrature(triplet: LevyTriplet, xi, tol=1e-12):
    """Direct numerical evaluation of the compensated jump integral.

    Independent of the closed forms in symbols.py: integrates the jump
    density against e^{i xi z} - 1 - i xi z 1_(-1,1) with cancellation-safe
    integrands and an analytic oscillatory tail bound.
    """
    xi = float(xi)

    def density(z):
        out = 0.0
        az = abs(z)
        for c, s in triplet.nu_plus:
            if z > 0:
                out += c * math.exp(-s * z)
        for c, s in triplet.nu_minus:
            if z < 0:
                out += c * math.exp(-s * az)
        for side, C, mu in triplet.stable_terms:
            if z * side > 0 and C > 0:
                pref = C / math.pi if mu == 1.0 else C / abs(math.gamma(-mu))
                out += pref * az ** (-1.0 - mu)
        return out

    def re_part(z):
        return -2.0 * math.sin(xi * z / 2.0) ** 2 * density(z)

    def im_part(z):
        x = xi * z
        if abs(z) < 1.0:
            s = math.sin(x) - x if abs(x) > 1e-4 else -(x ** 3) / 6.0 * (1 - x * x / 20.0)
        else:
            s = math.sin(x)
        return s * density(z)

    total = complex(
        -triplet.alpha * xi * xi - triplet.gamma, triplet.beta * xi
    )
    hi = 60.0
    for lo_, hi_ in [(1e-10, 1e-3), (1e-3, 1.0), (1.0, hi)]:
        for sgn in (+1, -1):
            a, b = sgn * lo_, sgn * hi_
            total += _adaptive_simpson(re_part, min(a, b), max(a, b), tol)
            total += 1j * _adaptive_simpson(im_part, min(a, b), max(a, b), tol)
    # tails: |integrand| <= 2 density; exponential terms negligible past 60,
    # stable tails estimated by the -1 part plus oscillation bound
    for side, C, mu in triplet.stable_terms:
        if C > 0:
            pref = C / math.pi if mu == 1.0 else C / abs(math.gamma(-mu))
            sgn = 1.0 if side > 0 else -1.0
            total += -pref * hi ** (-mu) / mu  # the -1 part, analytic
            # oscillatory remainder O(hi^{-1-mu}/xi): ignored below tol scale
    return total


# ---------------------------------------------------------------------------
# module invariant checks
# ---------------------------------------------------------------------------


def check_strings_cumulative(seed=0):
    entry = cat.example_power_law(0.5, 1.0, 1.0)
    exact = entry.coefficients.density.integral(0.0, 1.3) + 0.0
    errs = []
    for n in (64, 128, 256, 512):
        d = discretize(entry.coefficients, GridPolicy(n=n, T=2.0))
        errs.append(abs(cumulative_a(d, 1.3) - exact))
    ok = all(e2 <= e1 * 1.05 + 1e-14 for e1, e2 in zip(errs, errs[1:])) and errs[-1] < 1e-4
    return _result(
        "strings.cumulative-refinement",
        ok,
        errs[-1],
        f"refinement errors {['%.2e' % e for e in errs]}",
    )


def check_strings_validate_catalog(seed=0):
    bad = [e.name for e in cat.default_catalog() if not validate(e.coefficients).ok]
    return _result(
        "strings.validate-catalog", not bad, len(bad), f"invalid entries: {bad or 'none'}"
    )


def check_strings_deterministic(seed=0):
    entry = cat.example_power_law(1.5, 1.0, 0.0)
    pol = GridPolicy(n=777, T=3.0, kappa=4.0 / 3.0)
    d1 = discretize(entry.coefficients, pol)
    d2 = discretize(entry.coefficients, pol)
    same = all(
        np.array_equal(getattr(d1, f), getattr(d2, f))
        for f in ("grid", "node_masses", "cell_masses", "bconst", "Bcum")
    )
    return _result("strings.discretize-deterministic", same, 0.0 if same else 1.0, "bit-identical")


def check_wronskian(seed=0):
    xi = 1.0 + 1.0j
    worst = 0.0
    for entry in cat.default_catalog():
        T = entry.coefficients.R if math.isfinite(entry.coefficients.R) else 4.0
        d = discretize(
            entry.coefficients.without_origin_atom(),
            GridPolicy(n=1024, T=T, kappa=entry.policy.kappa),
        )
        trD, trN = solve_fundamental(d, xi)
        worst = max(worst, wronskian_deviation(trD, trN))
    return _result("propagator.wronskian", worst < 1e-8, worst, f"max deviation at xi={xi}")


def check_rogers_positivity(seed=0, strings=50):
    rng = np.random.default_rng(seed)
    res = np.geomspace(0.1, 10.0, 10)
    ims = np.linspace(-5.0, 5.0, 10)
    xis = np.array([complex(r, i) for r in res for i in ims])
    worst = math.inf
    for _ in range(strings):
        s = random_string(rng)
        T = s.R if math.isfinite(s.R) else 4.0
        d = discretize(s.without_origin_atom(), GridPolicy(n=256, T=T))
        k, _ = weyl_fixed_batch(d, xis)
        worst = min(worst, float(np.min((k / xis).real)))
    return _result(
        "propagator.rogers-positivity",
        worst >= -1e-8,
        worst,
        f"min Re(k/xi) over {strings} random strings x 10x10 grid",
    )


def check_conjugate_symmetry(seed=0):
    worst = 0.0
    for entry in cat.default_catalog()[4:9]:
        for xi in (0.5, 2.0):
            r1 = weyl_k(entry.coefficients, xi, 1e-8, entry.policy)
            r2 = weyl_k(entry.coefficients, -xi, 1e-8, entry.policy)
            worst = max(worst, abs(r2.k - r1.k.conjugate()) / max(abs(r1.k), 1e-30))
    return _result("propagator.conjugate-symmetry", worst < 1e-12, worst, "k(-xi) vs conj k(xi)")


def check_grid_convergence(seed=0):
    entry = cat.example_one_sided("lebesgue")
    xi = 1.0
    ks = []
    for n in (128, 256, 512, 1024, 2048):
        d = discretize(entry.coefficients, GridPolicy(n=n, T=30.0))
        ks.append(weyl_fixed(d, xi)[0])
    deltas = [abs(k2 - k1) for k1, k2 in zip(ks, ks[1:])]
    ok = all(d2 < d1 for d1, d2 in zip(deltas, deltas[1:]))
    return _result(
        "propagator.grid-convergence",
        ok,
        deltas[-1],
        f"|k_n - k_2n| sequence {['%.2e' % d for d in deltas]}",
    )


def check_shape(seed=0, n_random=20):
    """Monotone |phi|^2 and |phi'|, convex |phi|^2 (slope gaps on the grid)."""
    rng = np.random.default_rng(seed)
    worst_mono, worst_cvx = 0.0, 0.0
    for _ in range(n_random):
        s = random_string(rng).without_origin_atom()
        for xi in (0.5, 2.0):
            T = s.R if math.isfinite(s.R) else 4.0
            d = discretize(s, GridPolicy(n=256, T=T))
            k, _ = weyl_fixed(d, xi)
            tr = bounded_solution(d, xi, k)
            sq = np.abs(tr.phi) ** 2
            slopes = np.diff(sq) / np.diff(tr.grid)
            worst_mono = max(
                worst_mono,
                float(np.max(np.diff(sq))),
                float(np.max(np.diff(np.abs(tr.dphi)))),
            )
            # grids here are nonuniform (inserted breakpoints), so convexity
            # is slope monotonicity; roundoff scales with the slope size
            worst_cvx = max(
                worst_cvx, -float(np.min(np.diff(slopes))) / max(1.0, float(np.max(np.abs(slopes))))
            )
    ok = worst_mono <= 1e-10 and worst_cvx <= 1e-8
    return _result(
        "propagator.shape-monotonic",
        ok,
        max(worst_mono, worst_cvx),
        f"monotonicity {worst_mono:.2e}; scaled convexity {worst_cvx:.2e} over {n_random} strings",
    )


def check_energy(seed=0):
    worst_res, worst_tail = 0.0, 0.0
    for entry in cat.default_catalog():
        for xi in (0.25, 1.0, 4.0):
            res = weyl_k(entry.coefficients, xi, 1e-6, entry.policy)
            star = entry.coefficients.without_origin_atom()
            d = discretize(star, GridPolicy(res.n_used, res.T_used, entry.policy.kappa))
            k, _ = weyl_fixed(d, xi)
            rep = energy_report(d, xi, bounded_solution(d, xi, k))
            worst_res = max(worst_res, rep.residual)
            worst_tail = max(worst_tail, rep.tail_excess)
    ok = worst_res < 1e-4 and worst_tail < 1e-6
    return _result(
        "propagator.energy", ok, worst_res, f"max residual; max tail excess {worst_tail:.2e}"
    )


def check_levy_conjugate(seed=0):
    rng = np.random.default_rng(seed)
    worst = 0.0
    for _ in range(10):
        t = _random_triplet(rng)
        for xi in rng.uniform(0.1, 10.0, 5):
            worst = max(worst, abs(levy_symbol(t, -xi) - levy_symbol(t, xi).conjugate()))
    return _result("symbols.levy-conjugate", worst < 1e-12, worst, "symbol(-xi) vs conj")


def _random_triplet(rng):
    return LevyTriplet(
        alpha=float(rng.uniform(0, 0.5)),
        beta=float(rng.uniform(-1, 1)),
        gamma=float(rng.uniform(0, 0.5)),
        nu_plus=tuple((float(rng.uniform(0.2, 2)), float(rng.uniform(0.2, 3))) for _ in range(rng.integers(0, 3))),
        nu_minus=tuple((float(rng.uniform(0.2, 2)), float(rng.uniform(0.2, 3))) for _ in range(rng.integers(0, 3))),
        stable_terms=tuple(
            (int(rng.choice([1, -1])), float(rng.uniform(0.1, 1.0)), float(rng.choice([0.5, 1.0, 1.5])))
            for _ in range(rng.integers(0, 2))
        ),
    )


def check_levy_rogers(seed=0):
    rng = np.random.default_rng(seed)
    worst = math.inf
    for _ in range(10):
        t = _random_triplet(rng)
        rep = rogers_positivity_check(
            lambda xi: -levy_symbol(t, xi), re=np.geomspace(0.1, 10, 6), im=np.linspace(-5, 5, 6)
        )
        worst = min(worst, rep.min_value)
    return _result("symbols.levy-rogers", worst >= -1e-10, worst, "min Re(-symbol/xi)")


def check_levy_quadrature(seed=0):
    rng = np.random.default_rng(seed)
    worst = 0.0
    for _ in range(4):
        t = LevyTriplet(
            beta=float(rng.uniform(-1, 1)),
            nu_plus=((float(rng.uniform(0.5, 2)), float(rng.uniform(0.5, 2))),),
            nu_minus=((float(rng.uniform(0.5, 2)), float(rng.uniform(0.5, 2))),),
        )
        for xi in (-10.0, -3.3, 0.7, 10.0):
            worst = max(worst, abs(levy_symbol(t, xi) - levy_quadrature(t, xi)))
    return _result("symbols.levy-quadrature", worst < 1e-8, worst, "closed form vs Simpson")


def check_loggamma(seed=0):
    rng = np.random.default_rng(seed)
    worst = 0.0
    for _ in range(60):
        z = complex(rng.uniform(-8, 8), rng.uniform(-8, 8))
        if abs(z.imag) < 1e-3 and z.real <= 0.5:
            continue
        res = log_gamma_complex(z + 1) - log_gamma_complex(z) - cmath.log(z)
        res = (res.real, math.remainder(res.imag, 2.0 * math.pi))
        worst = max(worst, math.hypot(*res))
    return _result("symbols.loggamma-recurrence", worst < 1e-11, worst, "recurrence mod 2 pi i")


def check_transforms_roundtrip(seed=0):
    worst = 0.0
    for entry in cat.default_catalog():
        if entry.divergence is None or entry.coefficients.density.is_zero():
            continue
        conv = standard_to_divergence(entry.coefficients)
        back = divergence_to_standard(conv.coefficients)
        ys = np.linspace(0.01, 2.0, 57)
        worst = max(
            worst,
            float(np.max(np.abs(back.coefficients.density.value(ys) - entry.coefficients.density.value(ys)))),
            float(np.max(np.abs(back.coefficients.b.value(ys) - entry.coefficients.b.value(ys)))),
        )
    return _result("transforms.roundtrip", worst < 1e-6, worst, "sup deviation on [0.01, 2]")


def check_weyl_invariance(seed=0):
    worst = 0.0
    for entry in cat.default_catalog():
        if entry.divergence is None:
            continue
        conv = divergence_to_standard(entry.divergence)
        for xi in (0.5, 1.0, 2.0):
            k1 = weyl_k(entry.coefficients, xi, 1e-6, entry.policy).k
            k2 = weyl_k(conv.coefficients, xi, 1e-6, entry.policy).k
            worst = max(worst, abs(k1 - k2) / abs(k1))
    return _result("transforms.weyl-invariance", worst < 1e-3, worst, "standard vs divergence path")


def check_dual_strings(seed=0):
    entry = cat.example_power_law(0.5, 1.0, 0.0)
    dual = dual_coefficients(entry.divergence)
    s = divergence_to_standard(entry.divergence).coefficients
    sd = divergence_to_standard(dual).coefficients
    ys = np.linspace(0.05, 1.5, 30)
    worst = 0.0
    for y in ys:
        m = s.density.integral(0.0, y)
        back = sd.density.integral(0.0, m)
        worst = max(worst, abs(back - y))
    return _result("transforms.dual-strings", worst < 1e-6, worst, "cumulative masses invert")


def check_extension_realness(seed=0):
    rng = np.random.default_rng(seed)
    f = SampledFunction(2 * math.pi, rng.standard_normal(32))
    out = DtnOperator(cat.example_constant(1.0, 1.0).coefficients, 1e-6).apply(f)
    worst = float(np.max(np.abs(out.values.imag)))
    return _result("extension.realness", worst < 1e-12, worst, "imag part for real input")


def check_extension_plancherel(seed=0):
    rng = np.random.default_rng(seed)
    f = SampledFunction(2 * math.pi, rng.standard_normal(32) + 1j * rng.standard_normal(32))
    op = DtnOperator(cat.example_constant(1.0, 0.0).coefficients, 1e-6)
    out = op.apply(f)
    spec = np.fft.fft(f.values) * op.multipliers(f.frequencies)
    lhs = float(np.sum(np.abs(out.values) ** 2))
    rhs = float(np.sum(np.abs(spec) ** 2) / f.n)
    worst = abs(lhs - rhs) / max(rhs, 1e-30)
    return _result("extension.plancherel", worst < 1e-13, worst, "norm of Kf vs multiplied spectrum")


def check_complementary_composition(seed=0):
    entry = cat.example_power_law(0.5, 1.0, 0.0)
    dual = dual_coefficients(entry.divergence)
    s2 = divergence_to_standard(dual).coefficients
    x = SampledFunction.from_function(
        lambda x: np.cos(x) + 0.5 * np.sin(2 * x), 2 * math.pi, 16
    )
    op1 = DtnOperator(entry.coefficients, 1e-5, entry.policy)
    op2 = DtnOperator(s2, 1e-5, GridPolicy(n=2048, kappa=3.0))
    comp = op2.apply(op1.apply(x))
    target = np.fft.ifft(np.fft.fft(x.values) * x.frequencies ** 2)
    scale = float(np.max(np.abs(target)))
    worst = float(np.max(np.abs(comp.values - target))) / scale
    return _result(
        "extension.complementary-composition", worst < 1e-3, worst, "K Ksharp vs -d2/dx2"
    )


def check_catalog_exact_vs_weyl(seed=0):
    worst = 0.0
    detail = []
    for entry in cat.default_catalog():
        errs = []
        for xi in (0.25, 1.0, 4.0):
            exact = entry.exact_k(xi)
            scale = max(abs(exact), 1e-2)  # floor keeps the all-zero symbol testable
            res = weyl_k(entry.coefficients, xi, min(1e-7, 0.2 * entry.k_rel_tol * scale), entry.policy)
            errs.append(abs(res.k - exact) / scale)
        rel = max(errs) / entry.k_rel_tol
        worst = max(worst, rel)
        if rel >= 1.0:
            detail.append(entry.name)
    return _result(
        "catalog.exact-vs-weyl",
        worst < 1.0,
        worst,
        f"worst err/tol ratio; failures: {detail or 'none'}",
    )


def check_constants_roundtrip(seed=0):
    worst = 0.0
    for mu, p, q in [(0.5, 1, 0), (0.5, 1, 1), (1.5, 1, 0), (0.5, 0, 1), (1.5, 1, -2), (0.75, 2, 1)]:
        A, B = cat.power_law_constants(mu, p, q)
        cp, cm = cat.stable_weights(A, B, mu)
        sgn = math.copysign(1.0, 1.0 - mu)
        rec = (cp * cmath.exp(-1j * mu * math.pi / 2) + cm * cmath.exp(1j * mu * math.pi / 2)) * sgn
        worst = max(worst, abs(rec - complex(A, B)))
    return _result("catalog.constants-roundtrip", worst < 1e-12, worst, "(A,B) <-> (C+,C-)")


def check_involution(seed=0):
    worst = 0.0
    for entry in cat.default_catalog():
        if entry.name.startswith("zero-inf"):
            continue
        k2 = complementary_symbol(complementary_symbol(entry.exact_k))
        for xi in (0.3, 1.0, 5.0, complex(1, 2)):
            worst = max(worst, abs(k2(xi) - entry.exact_k(xi)) / max(abs(entry.exact_k(xi)), 1e-30))
    return _result("catalog.involution", worst < 1e-12, worst, "double complement is identity")


def check_catalog_rogers(seed=0):
    worst = math.inf
    for entry in cat.default_catalog():
        rep = rogers_positivity_check(entry.exact_k, re=np.geomspace(0.1, 10, 8), im=np.linspace(-8, 8, 8))
        worst = min(worst, rep.min_value)
    return _result("catalog.exact-rogers", worst >= -1e-12, worst, "min Re(exact_k/xi)")


def check_cli_determinism(seed=0):
    entry = cat.example_power_law(0.5, 1.0, 1.0)
    vals = []
    for _ in range(2):
        res = weyl_k(entry.coefficients, 1.7, 1e-6, entry.policy)
        vals.append(res.k)
    same = vals[0] == vals[1]
    return _result("cli.determinism", same, abs(vals[0] - vals[1]), "repeated run bit-identical")


INVARIANT_CHECKS = (
    check_strings_cumulative,
    check_strings_validate_catalog,
    check_strings_deterministic,
    check_wronskian,
    check_rogers_positivity,
    check_conjugate_symmetry,
    check_grid_convergence,
    check_shape,
    check_energy,
    check_levy_conjugate,
    check_levy_rogers,
    check_levy_quadrature,
    check_loggamma,
    check_transforms_roundtrip,
    check_weyl_invariance,
    check_dual_strings,
    check_extension_realness,
    check_extension_plancherel,
    check_complementary_composition,
    check_catalog_exact_vs_weyl,
    check_constants_roundtrip,
    check_involution,
    check_catalog_rogers,
    check_cli_determinism,
)


def run_invariants(seed=0):
    return [fn(seed) for fn in INVARIANT_CHECKS]

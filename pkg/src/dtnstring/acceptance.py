"""Acceptance criteria: one function per criterion, fixed tolerances.

These are the exit checks of the build.  Each returns a CheckResult whose
value is the worst observed error (or error/tolerance ratio where several
scales mix), and each runs in well under a minute.
"""

from __future__ import annotations

import cmath
import math

import numpy as np

from . import catalog as cat
from .checks import (
    CheckResult,
    _result,
    check_constants_roundtrip,
    check_energy,
    check_rogers_positivity,
    check_shape,
    check_wronskian,
    levy_quadrature,
)
from .extension import DtnOperator, SampledFunction
from .propagator import bounded_solution, trace_shape, weyl_fixed, weyl_k
from .strings import GridPolicy, discretize
from .symbols import LevyTriplet, levy_symbol
from .transforms import (
    GeneralCoefficients,
    divergence_to_standard,
    reduce_general,
    standard_to_divergence,
)
from .pieces import PiecewiseFn


def criterion_01_constant_coefficients():
    """k = p|xi| - i q xi for flat strings; rel err and bound below 1e-6."""
    worst_err, worst_bound = 0.0, 0.0
    for p, q in [(1, 0), (0, 1), (1, 1), (2, -3)]:
        entry = cat.example_constant(p, q)
        for xi in (0.25, 1.0, 4.0):
            exact = entry.exact_k(xi)
            res = weyl_k(entry.coefficients, xi, tol=2e-7 * abs(exact), policy=GridPolicy(n=512))
            worst_err = max(worst_err, abs(res.k - exact) / abs(exact))
            worst_bound = max(worst_bound, res.truncation_bound)
    ok = worst_err < 1e-6 and worst_bound < 1e-6
    return _result(
        "acceptance.01-constant", ok, worst_err, f"max rel err; max bound {worst_bound:.2e}"
    )


def criterion_02_finite_zero_string():
    """Empty string on [0, R): k = 1/R exactly, 20 frequencies, abs err < 1e-10."""
    worst = 0.0
    for R in (0.5, 1.0, 2.0):
        entry = cat.example_zero(R)
        for xi in np.linspace(0.1, 10.0, 20):
            res = weyl_k(entry.coefficients, float(xi), 1e-12, entry.policy)
            worst = max(worst, abs(res.k - 1.0 / R))
    return _result("acceptance.02-zero-string", worst < 1e-10, worst, "max abs err vs 1/R")


def criterion_03_bernstein_witness():
    """a = y^2 dy, b = y: k = sqrt(i xi), rel err < 1e-4."""
    entry = cat.example_one_sided("lebesgue")
    worst = 0.0
    for xi in (0.25, 1.0, 4.0):
        exact = entry.exact_k(xi)
        res = weyl_k(entry.coefficients, xi, tol=2e-5 * abs(exact), policy=entry.policy)
        worst = max(worst, abs(res.k - exact) / abs(exact))
    return _result("acceptance.03-sqrt-witness", worst < 1e-4, worst, "max rel err vs sqrt(i xi)")


def criterion_04_fractional_constants():
    """Power-law strings match (A + iB) xi^mu from the gamma closed form, rel 1e-3."""
    worst = 0.0
    for mu, p, q in [(0.5, 1, 0), (0.5, 1, 1), (1.5, 1, 0), (0.5, 0, 1)]:
        entry = cat.example_power_law(mu, p, q)
        for xi in (0.25, 1.0, 4.0):
            exact = entry.exact_k(xi)
            res = weyl_k(entry.coefficients, xi, tol=2e-4 * abs(exact), policy=entry.policy)
            worst = max(worst, abs(res.k - exact) / abs(exact))
    return _result("acceptance.04-fractional", worst < 1e-3, worst, "max rel err vs gamma constants")


def criterion_05_rogers_positivity():
    r = check_rogers_positivity(seed=20260810, strings=50)
    return _result("acceptance.05-positivity", r.ok, r.value, r.detail)


def criterion_06_wronskian():
    r = check_wronskian()
    return _result("acceptance.06-wronskian", r.ok, r.value, r.detail)


def criterion_07_energy_identity():
    r = check_energy()
    return _result("acceptance.07-energy", r.ok, r.value, r.detail)


def criterion_08_shape():
    """Convexity/monotonicity of |phi|^2 and |phi'| on catalog strings, real xi."""
    worst = 0.0
    for entry in cat.default_catalog():
        star = entry.coefficients.without_origin_atom()
        for xi in (0.25, 1.0, 4.0):
            T = star.R if math.isfinite(star.R) else 6.0
            d = discretize(star, GridPolicy(n=1024, T=T))
            k, _ = weyl_fixed(d, xi)
            rep = trace_shape(bounded_solution(d, xi, k))
            worst = max(
                worst, -rep.min_second_difference, rep.max_sq_increase, rep.max_dphi_increase
            )
    return _result(
        "acceptance.08-shape",
        worst <= 1e-10,
        worst,
        "max violation over catalog, xi in {0.25, 1, 4}",
    )


def criterion_09_duality():
    """Dual divergence pair multiplies to xi^2; symbol involution is exact."""
    entry = cat.example_power_law(0.5, 1.0, 0.0)
    dual = cat.dual_coefficients(entry.divergence)
    s_dual = divergence_to_standard(dual).coefficients
    worst = 0.0
    for xi in (0.5, 1.0, 2.0):
        k1 = weyl_k(entry.coefficients, xi, 1e-5, entry.policy).k
        k2 = weyl_k(s_dual, xi, 1e-5, GridPolicy(n=2048, kappa=3.0)).k
        worst = max(worst, abs(k1 * k2 / xi ** 2 - 1.0))
    inv = 0.0
    ks = cat.complementary_symbol(cat.complementary_symbol(entry.exact_k))
    for xi in (0.5, 1.0, 2.0, complex(1, 1)):
        inv = max(inv, abs(ks(xi) - entry.exact_k(xi)))
    ok = worst < 1e-3 and inv < 1e-12
    return _result(
        "acceptance.09-duality", ok, worst, f"max |k k_sharp/xi^2 - 1|; involution {inv:.2e}"
    )


def criterion_10_dtn_spectral():
    """Eigenfunction action of the DtN map, and complementary composition."""
    worst_eig = 0.0
    X = 2.0 * math.pi
    for p, q in [(1, 0), (0, 1), (1, 1), (2, -3)]:
        entry = cat.example_constant(p, q)
        op = DtnOperator(entry.coefficients, tol=1e-9)
        cosf = SampledFunction.from_function(np.cos, X, 16)
        sinf = SampledFunction.from_function(np.sin, X, 16)
        x = cosf.x
        # multiplier at modes +-1: K cos = -p cos - q sin, K sin = -p sin + q cos
        exp_cos = -p * np.cos(x) - q * np.sin(x)
        exp_sin = -p * np.sin(x) + q * np.cos(x)
        worst_eig = max(worst_eig, float(np.max(np.abs(op.apply(cosf).values - exp_cos))))
        worst_eig = max(worst_eig, float(np.max(np.abs(op.apply(sinf).values - exp_sin))))

    entry = cat.example_power_law(0.5, 1.0, 0.0)
    s_dual = divergence_to_standard(cat.dual_coefficients(entry.divergence)).coefficients
    f = SampledFunction.from_function(lambda x: np.cos(x) + 0.25 * np.sin(2 * x), X, 16)
    op1 = DtnOperator(entry.coefficients, 1e-5, entry.policy)
    op2 = DtnOperator(s_dual, 1e-5, GridPolicy(n=2048, kappa=3.0))
    comp = op2.apply(op1.apply(f)).values
    target = np.fft.ifft(np.fft.fft(f.values) * f.frequencies ** 2)
    comp_err = float(np.max(np.abs(comp - target)) / np.max(np.abs(target)))
    ok = worst_eig < 1e-8 and comp_err < 1e-3
    return _result(
        "acceptance.10-dtn", ok, worst_eig, f"eigenfunction err; composition err {comp_err:.2e}"
    )


def criterion_11_symbol_quadrature():
    """Exponential-mixture symbols match the independent quadrature to 1e-8."""
    triplets = [
        LevyTriplet(nu_plus=((1.0, 1.0),)),
        LevyTriplet(beta=0.7, nu_plus=((0.8, 2.0), (0.3, 0.5)), nu_minus=((1.2, 1.5),)),
        LevyTriplet(alpha=0.2, gamma=0.4, nu_minus=((2.0, 3.0),)),
    ]
    worst = 0.0
    for t in triplets:
        for xi in np.linspace(-10.0, 10.0, 11):
            if xi == 0.0:
                continue
            worst = max(worst, abs(levy_symbol(t, float(xi)) - levy_quadrature(t, float(xi))))
    return _result("acceptance.11-symbol-quadrature", worst < 1e-8, worst, "closed form vs quadrature")


def criterion_12_conversions():
    """Round trips through the divergence form, and the general reduction."""
    worst = 0.0
    for entry in cat.default_catalog():
        if entry.divergence is None or entry.coefficients.density.is_zero():
            continue
        back = divergence_to_standard(standard_to_divergence(entry.coefficients).coefficients)
        ys = np.linspace(0.01, 2.0, 57)
        worst = max(
            worst,
            float(np.max(np.abs(back.coefficients.density.value(ys) - entry.coefficients.density.value(ys)))),
            float(np.max(np.abs(back.coefficients.b.value(ys) - entry.coefficients.b.value(ys)))),
        )

    one = PiecewiseFn.constant(1.0)
    zero = PiecewiseFn.zero()
    red = reduce_general(GeneralCoefficients(2.0, one, zero, one, zero, zero), 256)
    worst_red = float(np.max(np.abs(red.sigma - red.y_nodes)))
    eta, delta = 0.7, 0.6
    g = GeneralCoefficients(2.0, one, zero, one, zero, PiecewiseFn.constant(eta))
    red = reduce_general(g, 512)
    sig_exact = (1.0 - np.exp(-eta * red.y_nodes)) / eta
    worst_red = max(worst_red, float(np.max(np.abs(red.sigma - sig_exact))))
    g = GeneralCoefficients(2.0, one, zero, one, PiecewiseFn.constant(delta), zero)
    red = reduce_general(g, 512)
    worst_red = max(worst_red, float(np.max(np.abs(red.tau_prime - (-delta * red.sigma)))))
    ok = worst < 1e-6 and worst_red < 1e-8
    return _result(
        "acceptance.12-conversions", ok, worst, f"roundtrip sup; reduction err {worst_red:.2e}"
    )


def criterion_13_constants_relation():
    r = check_constants_roundtrip()
    return _result("acceptance.13-constants", r.ok, r.value, r.detail)


CRITERIA = (
    criterion_01_constant_coefficients,
    criterion_02_finite_zero_string,
    criterion_03_bernstein_witness,
    criterion_04_fractional_constants,
    criterion_05_rogers_positivity,
    criterion_06_wronskian,
    criterion_07_energy_identity,
    criterion_08_shape,
    criterion_09_duality,
    criterion_10_dtn_spectral,
    criterion_11_symbol_quadrature,
    criterion_12_conversions,
    criterion_13_constants_relation,
)


def run_criteria():
    return [fn() for fn in CRITERIA]

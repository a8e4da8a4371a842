"""Symbol evaluators against quadrature and arbitrary-precision oracles."""

import cmath
import math

import numpy as np
import pytest

from dtnstring import (
    ExponentialData,
    LevyTriplet,
    StieltjesData,
    SymbolPoleError,
    exponential_symbol,
    levy_symbol,
    log_gamma_complex,
    rogers_positivity_check,
    stieltjes_symbol,
)

from oracles import levy_symbol_oracle, loggamma_oracle


def test_levy_zero_triplet():
    assert levy_symbol(LevyTriplet(), 3.0) == 0.0
    assert levy_symbol(LevyTriplet(gamma=0.4), 0.0) == -0.4


def test_levy_single_exponential_closed_form():
    # nu = e^{-z} on z > 0: value frozen from the quadrature oracle
    t = LevyTriplet(nu_plus=((1.0, 1.0),))
    got = levy_symbol(t, 1.0)
    assert got == pytest.approx(complex(1 / (1 - 1j)) - 1 - 1j * (1 - 2 / math.e), abs=1e-14)
    assert got == pytest.approx(-0.5 + 0.23575888234288467j, abs=1e-13)


@pytest.mark.parametrize("xi", [-7.7, -1.0, 0.4, 3.0, 10.0])
def test_levy_mixture_matches_quadrature(xi):
    t = LevyTriplet(
        alpha=0.1,
        beta=-0.6,
        gamma=0.2,
        nu_plus=((0.8, 2.0), (0.3, 0.5)),
        nu_minus=((1.2, 1.5),),
    )
    assert abs(levy_symbol(t, xi) - levy_symbol_oracle(t, xi)) < 1e-9


@pytest.mark.parametrize("side,C,mu", [(1, 1.0, 0.5), (-1, 0.7, 1.5), (1, 0.4, 1.0)])
def test_levy_stable_terms_match_quadrature(side, C, mu):
    t = LevyTriplet(stable_terms=((side, C, mu),))
    for xi in (0.7, -2.3):
        assert abs(levy_symbol(t, xi) - levy_symbol_oracle(t, xi)) < 1e-7


def test_levy_symmetric_one_stable_is_minus_abs():
    t = LevyTriplet(stable_terms=((1, 0.7, 1.0), (-1, 0.7, 1.0)))
    for xi in (0.5, -3.0):
        assert levy_symbol(t, xi) == pytest.approx(-0.7 * abs(xi), abs=1e-13)


def test_levy_conjugate_symmetry_and_rogers():
    t = LevyTriplet(beta=0.3, nu_plus=((1.0, 1.0),), stable_terms=((1, 0.5, 0.5),))
    for xi in (0.3, 1.7, 5.0):
        assert levy_symbol(t, -xi) == pytest.approx(levy_symbol(t, xi).conjugate(), abs=1e-13)
    rep = rogers_positivity_check(lambda z: -levy_symbol(t, z))
    assert rep.ok


def test_levy_validation():
    with pytest.raises(ValueError):
        LevyTriplet(alpha=-1.0)
    with pytest.raises(ValueError):
        LevyTriplet(nu_plus=((0.0, 1.0),))
    with pytest.raises(ValueError):
        LevyTriplet(stable_terms=((2, 1.0, 0.5),))
    with pytest.raises(ValueError):
        levy_symbol(LevyTriplet(), -1 + 1j)


def test_stieltjes_drift_only():
    d = StieltjesData(beta_check=0.7)
    assert stieltjes_symbol(d, 2.0) == pytest.approx(-1.4j)


def test_stieltjes_positivity_random_weights():
    rng = np.random.default_rng(3)
    for _ in range(6):
        d = StieltjesData(
            gamma=float(rng.uniform(0, 1)),
            mu=tuple(
                (float(rng.choice([-1, 1]) * rng.uniform(0.2, 5)), float(rng.uniform(0, 2)))
                for _ in range(4)
            ),
        )
        rep = rogers_positivity_check(lambda z: stieltjes_symbol(d, z))
        assert rep.min_value >= -1e-12


def test_stieltjes_atom_matches_dense_discretization():
    # one atom as the limit of a narrow continuous bump (Riemann sums)
    s0, w0, xi = 2.0, 1.3, 0.8 + 0.2j
    atom = stieltjes_symbol(StieltjesData(mu=((s0, w0),)), xi)
    prev = None
    for n in (64, 256, 1024):
        ss = np.linspace(s0 - 0.05, s0 + 0.05, n)
        w = w0 / n
        val = sum(
            (xi / (xi + 1j * s) + 1j * xi * np.sign(s) / (1 + abs(s))) * w / (math.pi * abs(s))
            for s in ss
        )
        prev = abs(val - atom)
    assert prev < 1e-4


def test_stieltjes_pole():
    d = StieltjesData(mu=((2.0, 1.0),))
    with pytest.raises(SymbolPoleError):
        stieltjes_symbol(d, -2j)


def test_exponential_constant_theta_zero():
    d = ExponentialData(c=2.5)
    assert exponential_symbol(d, 3.3) == pytest.approx(2.5)


def test_exponential_theta_half_pi_is_linear():
    d = ExponentialData(c=1.0, theta=((-math.inf, math.inf, math.pi / 2),))
    k1 = exponential_symbol(d, 1.0)
    k2 = exponential_symbol(d, 2.0)
    assert k2 / k1 == pytest.approx(2.0, abs=1e-12)


def test_exponential_matches_quadrature():
    from scipy.integrate import quad

    d = ExponentialData(c=1.3, theta=((-2.0, -0.5, 1.0), (0.25, 4.0, 2.5)))
    xi = 1.7

    def integrand(s):
        th = 0.0
        for lo, hi, val in d.theta:
            if lo <= s < hi:
                th = val
        return (xi / (xi + 1j * s) - 1.0 / (1.0 + abs(s))).real * th / abs(s), (
            xi / (xi + 1j * s)
        ).imag * th / abs(s)

    re = quad(lambda s: integrand(s)[0], -2.0, -0.5, limit=200)[0]
    re += quad(lambda s: integrand(s)[0], 0.25, 4.0, limit=200)[0]
    im = quad(lambda s: integrand(s)[1], -2.0, -0.5, limit=200)[0]
    im += quad(lambda s: integrand(s)[1], 0.25, 4.0, limit=200)[0]
    want = 1.3 * cmath.exp((re + 1j * im) / math.pi)
    assert exponential_symbol(d, xi) == pytest.approx(want, rel=1e-10)


def test_exponential_rogers_positivity():
    d = ExponentialData(c=0.7, theta=((-1.0, 0.0, 3.0), (0.0, math.inf, 1.2)))
    rep = rogers_positivity_check(lambda z: exponential_symbol(d, z))
    assert rep.ok


def test_exponential_validation():
    with pytest.raises(ValueError):
        ExponentialData(c=0.0)
    with pytest.raises(ValueError):
        ExponentialData(theta=((0.0, 1.0, 4.0),))


def test_loggamma_reference_points():
    assert log_gamma_complex(1.0) == pytest.approx(0.0, abs=1e-14)
    assert log_gamma_complex(0.5) == pytest.approx(math.log(math.sqrt(math.pi)), abs=1e-13)
    v = log_gamma_complex(-0.5)
    assert v.real == pytest.approx(math.log(2 * math.sqrt(math.pi)), abs=1e-12)
    assert abs(math.remainder(v.imag, 2 * math.pi)) == pytest.approx(math.pi, abs=1e-12)
    # frozen from the arbitrary-precision oracle
    assert log_gamma_complex(0.75 + 0.25j) == pytest.approx(
        0.1268512665209570 - 0.2584325484588106j, abs=1e-13
    )


def test_loggamma_accuracy_sweep():
    rng = np.random.default_rng(11)
    worst = 0.0
    for _ in range(120):
        z = complex(rng.uniform(-28, 28), rng.uniform(-28, 28))
        if abs(z) > 30 or (abs(z.imag) < 1e-2 and z.real <= 0.5):
            continue
        want = loggamma_oracle(z)
        got = log_gamma_complex(z)
        diff = got - want
        # branches may differ by multiples of 2 pi i
        diff = complex(diff.real, math.remainder(diff.imag, 2 * math.pi))
        worst = max(worst, abs(diff) / max(abs(want), 1.0))
    assert worst < 1e-12


def test_loggamma_pole():
    with pytest.raises(SymbolPoleError):
        log_gamma_complex(-3.0)


def test_positivity_check_reports():
    rep = rogers_positivity_check(lambda z: z)
    assert rep.ok and rep.min_value == pytest.approx(1.0)
    rep = rogers_positivity_check(lambda z: -1.0)
    assert not rep.ok and rep.min_value < 0

"""Symbols of operators with completely monotone jump kernels.

Three evaluators: the generator-triplet form (diffusion, drift, killing,
exponential-mixture and stable jump terms, all integrals in closed form),
the Stieltjes-integral form with a discrete measure, and the exponential
(log-integral) form with piecewise-constant angle.  Each formula below is
simultaneously valid for real xi and for complex xi in the right half-plane
(principal branches), where -symbol is holomorphic with Re(k(xi)/xi) >= 0.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass, field

import numpy as np

from .errors import SymbolPoleError

EULER_GAMMA = 0.5772156649015328606


# ---------------------------------------------------------------------------
# complex log-gamma (Lanczos, g = 607/128, 15 terms)
# ---------------------------------------------------------------------------

_LANCZOS_G = 607.0 / 128.0
_LANCZOS_C = (
    0.99999999999999709182,
    57.156235665862923517,
    -59.597960355475491248,
    14.136097974741747174,
    -0.49191381609762019978,
    0.33994649984811888699e-4,
    0.46523628927048575665e-4,
    -0.98374475304879564677e-4,
    0.15808870322491248884e-3,
    -0.21026444172410488319e-3,
    0.21743961811521264320e-3,
    -0.16431810653676389022e-3,
    0.84418223983852743293e-4,
    -0.26190838401581408670e-4,
    0.36899182659531622704e-5,
)
_LOG_SQRT_2PI = 0.91893853320467274178


def log_gamma_complex(z) -> complex:
    """Principal-branch log Gamma; reflection handles Re z < 0.5.

    Relative error below 1e-12 for |z| <= 30; raises at the poles
    (nonpositive integers).
    """
    z = complex(z)
    if z.imag == 0.0 and z.real <= 0.0 and z.real == int(z.real):
        raise SymbolPoleError(f"log-gamma pole at z = {z.real:g}")
    if z.real < 0.5:
        # log Gamma(z) = log(pi / sin(pi z)) - log Gamma(1 - z)
        return cmath.log(math.pi) - cmath.log(cmath.sin(math.pi * z)) - log_gamma_complex(1.0 - z)
    zm = z - 1.0
    acc = _LANCZOS_C[0]
    for i, c in enumerate(_LANCZOS_C[1:], start=1):
        acc += c / (zm + i)
    t = zm + _LANCZOS_G + 0.5
    return _LOG_SQRT_2PI + (zm + 0.5) * cmath.log(t) - t + cmath.log(acc)


def gamma_complex(z) -> complex:
    return cmath.exp(log_gamma_complex(z))


# ---------------------------------------------------------------------------
# generator triplet
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class LevyTriplet:
    """(alpha, beta, gamma, nu) with nu an exponential mixture plus stable terms.

    nu_plus / nu_minus: tuples of (c, s) meaning the density c e^{-s|z|} on
    that side.  stable_terms: tuples of (side, C, mu) with side in {+1, -1}
    meaning C/|Gamma(-mu)| |z|^{-1-mu} on that side for mu != 1, and
    (C/pi) |z|^{-2} for mu = 1.  Complete monotonicity holds by construction.
    """

    alpha: float = 0.0
    beta: float = 0.0
    gamma: float = 0.0
    nu_plus: tuple = ()
    nu_minus: tuple = ()
    stable_terms: tuple = ()

    def __post_init__(self):
        if self.alpha < 0 or self.gamma < 0:
            raise ValueError("alpha and gamma must be nonnegative")
        for c, s in self.nu_plus + self.nu_minus:
            if c <= 0 or s <= 0:
                raise ValueError("exponential terms need c > 0 and s > 0")
        for side, C, mu in self.stable_terms:
            if side not in (+1, -1):
                raise ValueError("stable term side must be +1 or -1")
            if C < 0 or not 0 < mu < 2:
                raise ValueError("stable term needs C >= 0 and mu in (0, 2)")


def _exp_term(c, s, xi, side):
    """Closed form of the compensated integral against c e^{-s|z|} on one side."""
    drift = 1j * xi * (1.0 - math.exp(-s) * (1.0 + s)) / (s * s)
    if side > 0:
        return c * (1.0 / (s - 1j * xi) - 1.0 / s - drift)
    return c * (1.0 / (s + 1j * xi) - 1.0 / s + drift)


def _stable_term(C, mu, xi, side):
    """Closed form for the one-sided stable density under the unit-cutoff compensator.

    For mu != 1 the density C/|Gamma(-mu)| |z|^{-1-mu} integrates to
    -sign(1-mu) C (-i xi)^mu (plus side) with a drift correction
    -i xi C/(|Gamma(-mu)|(1-mu)) from swapping the natural compensator for
    z 1_(-1,1).  For mu = 1 the density is (C/pi)|z|^{-2} and a Frullani
    argument gives (C/pi)(-pi xi/2 - i xi (Log xi - 1 + gamma_E)); both
    expressions, read with principal branches, are valid on the real axis
    and the right half-plane at once.
    """
    if mu == 1.0:
        if side > 0:
            return (C / math.pi) * (
                -math.pi * xi / 2.0 - 1j * xi * (cmath.log(xi) - 1.0 + EULER_GAMMA)
            )
        if xi.imag == 0.0:
            # real axis: mirror of the plus side
            plus = _stable_term(C, mu, xi, +1)
            return plus.conjugate()
        return (C / math.pi) * (
            -math.pi * xi / 2.0 + 1j * xi * (cmath.log(xi) - 1.0 + EULER_GAMMA)
        )
    ag = abs(math.gamma(-mu))
    power = (-1j * xi) ** mu if side > 0 else (1j * xi) ** mu
    drift = 1j * xi * C / (ag * (1.0 - mu))
    s = 1.0 if mu < 1.0 else -1.0
    return -s * C * power + (-drift if side > 0 else drift)


def levy_symbol(triplet: LevyTriplet, xi) -> complex:
    """Fourier symbol of the generator: multiplier of the operator.

    Accepts real xi (any sign) or complex xi with Re xi > 0; the same
    closed forms cover both.  At xi = 0 the value is -gamma.
    """
    xi = complex(xi)
    if xi.imag != 0.0 and xi.real <= 0.0:
        raise ValueError("levy_symbol needs real xi or Re xi > 0")
    if xi == 0:
        return complex(-triplet.gamma)
    out = -triplet.alpha * xi * xi + 1j * triplet.beta * xi - triplet.gamma
    for c, s in triplet.nu_plus:
        out += _exp_term(c, s, xi, +1)
    for c, s in triplet.nu_minus:
        out += _exp_term(c, s, xi, -1)
    for side, C, mu in triplet.stable_terms:
        out += _stable_term(C, mu, xi, side)
    return out


# ---------------------------------------------------------------------------
# Stieltjes-integral form
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class StieltjesData:
    """alpha xi^2 - i beta_check xi + gamma plus a discrete Stieltjes measure."""

    alpha: float = 0.0
    beta_check: float = 0.0
    gamma: float = 0.0
    mu: tuple = ()  # ((s, weight), ...), s != 0, weight >= 0

    def __post_init__(self):
        if self.alpha < 0 or self.gamma < 0:
            raise ValueError("alpha and gamma must be nonnegative")
        for s, w in self.mu:
            if s == 0:
                raise ValueError("measure atoms must avoid s = 0")
            if w < 0:
                raise ValueError("measure weights must be nonnegative")


def stieltjes_symbol(data: StieltjesData, xi) -> complex:
    """k(xi) from the Stieltjes representation with a discrete measure."""
    xi = complex(xi)
    for s, _ in data.mu:
        if xi + 1j * s == 0:
            raise SymbolPoleError(f"stieltjes_symbol pole at xi = {-1j * s}")
    if xi.imag != 0.0 and xi.real <= 0.0:
        raise ValueError("stieltjes_symbol needs real xi or Re xi > 0")
    out = data.alpha * xi * xi - 1j * data.beta_check * xi + data.gamma
    for s, w in data.mu:
        out += (xi / (xi + 1j * s) + 1j * xi * math.copysign(1.0, s) / (1.0 + abs(s))) * w / (
            math.pi * abs(s)
        )
    return out


# ---------------------------------------------------------------------------
# exponential (log-integral) form
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class ExponentialData:
    """c exp((1/pi) int (xi/(xi+is) - 1/(1+|s|)) theta(s)/|s| ds).

    theta is piecewise constant with values in [0, pi]; pieces are
    ((s_lo, s_hi, value), ...) with +-inf endpoints allowed, theta = 0
    outside the pieces.
    """

    c: float = 1.0
    theta: tuple = ()

    def __post_init__(self):
        if self.c <= 0:
            raise ValueError("c must be positive")
        for lo, hi, val in self.theta:
            if not lo < hi:
                raise ValueError("empty theta piece")
            if not 0.0 <= val <= math.pi:
                raise ValueError("theta values must lie in [0, pi]")


def _exp_antideriv_pos(xi, s):
    """Antiderivative on s > 0: log(1+s) - Log(xi + i s); limits built in."""
    if s == math.inf:
        return -1j * math.pi / 2.0
    if s == 0.0:
        return -cmath.log(xi)
    return math.log1p(s) - cmath.log(xi + 1j * s)


def _exp_antideriv_neg(xi, s):
    """Antiderivative on s < 0: Log(xi + i s) - log(1 - s)."""
    if s == -math.inf:
        return -1j * math.pi / 2.0
    if s == 0.0:
        return cmath.log(xi)
    return cmath.log(xi + 1j * s) - math.log1p(-s)


def exponential_symbol(data: ExponentialData, xi) -> complex:
    """k(xi) from the exponential representation, exact per constant piece."""
    xi = complex(xi)
    if xi.real <= 0.0:
        raise ValueError("exponential_symbol needs Re xi > 0")
    expo = 0j
    for lo, hi, val in data.theta:
        if val == 0.0:
            continue
        if hi > 0.0 and lo < 0.0:
            segs = [(lo, 0.0, _exp_antideriv_neg), (0.0, hi, _exp_antideriv_pos)]
        elif lo >= 0.0:
            segs = [(lo, hi, _exp_antideriv_pos)]
        else:
            segs = [(lo, hi, _exp_antideriv_neg)]
        for a, b, anti in segs:
            expo += (val / math.pi) * (anti(xi, b) - anti(xi, a))
    return data.c * cmath.exp(expo)


# ---------------------------------------------------------------------------
# half-plane positivity check
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class PositivityReport:
    ok: bool
    min_value: float
    argmin: complex
    tol: float


def rogers_positivity_check(k, re=None, im=None, tol=1e-8) -> PositivityReport:
    """Minimum of Re(k(xi)/xi) over a right-half-plane grid.

    Passes iff the minimum is >= -tol; the grid defaults to a 10 x 10
    log-real / linear-imaginary lattice.
    """
    if re is None:
        re = np.geomspace(0.1, 10.0, 10)
    if im is None:
        im = np.linspace(-10.0, 10.0, 10)
    best = math.inf
    arg = complex(np.asarray(re).flat[0], np.asarray(im).flat[0])
    for x in np.asarray(re, dtype=float):
        for y in np.asarray(im, dtype=float):
            xi = complex(x, y)
            val = (complex(k(xi)) / xi).real
            if val < best:
                best = val
                arg = xi
    return PositivityReport(best >= -tol, float(best), arg, tol)

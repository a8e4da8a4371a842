"""Conversions among the standard, sheared (drift-free) and divergence-like forms.

Symbolic piece algebra is used wherever powers/polynomials stay closed
under the needed operations (squares, differences, antiderivatives and
power-map composition); otherwise a sampled piecewise-linear fallback with
a reported resolution takes over.  Every conversion returns a Conversion
record carrying the result plus that error estimate (0.0 when exact).
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Any

import numpy as np

from .errors import ConversionError, InvalidStringError
from .pieces import Piece, PiecewiseFn, subtract
from .strings import StringCoefficients, validate


@dataclass(frozen=True)
class EKCoefficients:
    """Drift-free (sheared) form: excess measure plus the shear generator b.

    The first-order coefficient is the distributional derivative -b'; b is
    stored instead because it determines the shear uniquely (the derivative
    alone is defined only up to a linear term).
    """

    R: float = math.inf
    atoms: tuple = ()
    a_tilde: PiecewiseFn = field(default_factory=PiecewiseFn.zero)
    b_rep: PiecewiseFn = field(default_factory=PiecewiseFn.zero)


@dataclass(frozen=True)
class DivergenceCoefficients:
    """Divergence-like form with weight a_dot and skew coefficient b_dot."""

    R_dot: float = math.inf
    a_dot: PiecewiseFn = field(default_factory=PiecewiseFn.zero)
    b_dot: PiecewiseFn = field(default_factory=PiecewiseFn.zero)

    def validate(self):
        if not self.a_dot.pieces:
            raise ConversionError("a_dot must be positive almost everywhere")
        for p in self.a_dot.pieces:
            ys = np.linspace(p.lo, min(p.hi, p.lo + max(1.0, p.lo)), 17)[1:]
            if np.any(p.value(ys) <= 0.0):
                raise ConversionError("a_dot must be positive almost everywhere")
        top = min(self.R_dot, self.a_dot.t_max, 16.0)
        ys = np.linspace(0.0, top, 65)[1:]
        if np.any(np.abs(self.b_dot.value(ys)) > np.abs(self.a_dot.value(ys)) * (1 + 1e-12)):
            raise ConversionError("|b_dot| <= a_dot fails on samples")


@dataclass(frozen=True)
class GeneralCoefficients:
    """Unreduced second-order coefficients (a0, b0, c0, d0, e0) on [0, R0)."""

    R0: float
    a0: PiecewiseFn
    b0: PiecewiseFn
    c0: PiecewiseFn
    d0: PiecewiseFn
    e0: PiecewiseFn


@dataclass(frozen=True)
class Conversion:
    """Result of a form conversion plus its approximation error estimate."""

    coefficients: Any
    error_estimate: float = 0.0
    note: str = ""


def standard_to_ek(s: StringCoefficients, window=None) -> Conversion:
    """Excess measure a - b^2 dy, exact when the piece algebra is closed."""
    report = validate(s)
    if not report.ok:
        raise InvalidStringError(report)
    hi = window
    if hi is None:
        hi = s.R if math.isfinite(s.R) else max(s.density.t_max, s.b.t_max, 1.0)
        if not math.isfinite(hi):
            hi = None
    diff = subtract(s.density, s.b.squared(), hi)
    if diff is not None:
        return Conversion(EKCoefficients(s.R, s.atoms, diff, s.b))
    approx, err = _sampled_difference(s.density, s.b.squared(), hi or 1.0)
    return Conversion(
        EKCoefficients(s.R, s.atoms, approx, s.b),
        error_estimate=err,
        note="piece algebra not closed; sampled piecewise-linear excess density",
    )


def ek_to_standard(ek: EKCoefficients, window=None) -> Conversion:
    """Inverse of standard_to_ek: a = a_tilde + b^2 dy."""
    hi = window
    if hi is None:
        hi = ek.R if math.isfinite(ek.R) else max(ek.a_tilde.t_max, ek.b_rep.t_max, 1.0)
        if not math.isfinite(hi):
            hi = None
    neg = subtract(ek.a_tilde, ek.b_rep.squared().scaled(-1.0), hi)
    if neg is not None:
        return Conversion(StringCoefficients(ek.R, ek.atoms, neg, ek.b_rep))
    approx, err = _sampled_difference(ek.a_tilde, ek.b_rep.squared().scaled(-1.0), hi or 1.0)
    return Conversion(
        StringCoefficients(ek.R, ek.atoms, approx, ek.b_rep),
        error_estimate=err,
        note="piece algebra not closed; sampled piecewise-linear density",
    )


def _sampled_difference(f, g, hi, n=4096):
    xs = np.linspace(0.0, hi, n + 1)
    ys = f.value(xs) - g.value(xs)
    approx = PiecewiseFn.from_samples(xs, ys)
    mid = 0.5 * (xs[:-1] + xs[1:])
    err = float(np.max(np.abs(f.value(mid) - g.value(mid) - approx.value(mid)))) if n else 0.0
    return approx, err


# ---------------------------------------------------------------------------
# divergence-like <-> standard
# ---------------------------------------------------------------------------


def _single_power(fn: PiecewiseFn):
    """The (c, alpha) of a one-piece power/constant anchored at 0, else None."""
    if len(fn.pieces) != 1:
        return None
    p = fn.pieces[0]
    if p.lo != 0.0:
        return None
    if p.kind == "power":
        return p.params
    if p.kind == "poly" and sum(1 for c in p.params if c != 0.0) == 1:
        j = next(j for j, c in enumerate(p.params) if c != 0.0)
        return (p.params[j], float(j))
    if p.kind == "poly" and all(c == 0.0 for c in p.params):
        return None
    return None


def divergence_to_standard(d: DivergenceCoefficients, samples=4096) -> Conversion:
    """Change of scale sigma(y) = int 1/a_dot; a(sigma) = a_dot^2, b(sigma) = -b_dot.

    Exact for single power pieces anchored at 0 (the scale map and its
    inverse stay in the power class); otherwise sampled with reported
    resolution.
    """
    d.validate()
    pa = _single_power(d.a_dot)
    pb = _single_power(d.b_dot) if not d.b_dot.is_zero() else (0.0, 0.0)
    if pa is not None and pb is not None:
        c, beta = pa
        if beta < 1.0:
            # sigma(y) = y^(1-beta) / (c (1-beta)); inverse is a power map
            q = 1.0 - beta
            s_of_y = lambda y: y ** q / (c * q)
            R = s_of_y(d.R_dot) if math.isfinite(d.R_dot) else math.inf
            hi_a = s_of_y(d.a_dot.pieces[0].hi) if math.isfinite(d.a_dot.pieces[0].hi) else math.inf
            # y(s) = (c q s)^(1/q); a(s) = c^2 y(s)^(2 beta)
            a_coeff = c * c * (c * q) ** (2.0 * beta / q)
            a_alpha = 2.0 * beta / q
            density = PiecewiseFn((Piece(0.0, hi_a, "power", (a_coeff, a_alpha)),))
            cb, betab = pb
            if cb == 0.0:
                bfn = PiecewiseFn.zero()
            else:
                hi_b = (
                    s_of_y(d.b_dot.pieces[0].hi)
                    if math.isfinite(d.b_dot.pieces[0].hi)
                    else math.inf
                )
                b_coeff = -cb * (c * q) ** (betab / q)
                bfn = PiecewiseFn((Piece(0.0, hi_b, "power", (b_coeff, betab / q)),))
            return Conversion(StringCoefficients(R, (), density, bfn))
    return _divergence_to_standard_sampled(d, samples)


def _divergence_to_standard_sampled(d: DivergenceCoefficients, samples):
    top = d.R_dot if math.isfinite(d.R_dot) else max(d.a_dot.t_max, 1.0)
    if not math.isfinite(top):
        top = 1.0
    ys = np.linspace(0.0, top, samples + 1)
    inv_a = np.zeros_like(ys)
    vals = d.a_dot.value(0.5 * (ys[:-1] + ys[1:]))
    if np.any(vals <= 0.0):
        raise ConversionError("a_dot vanishes inside the sampling window")
    inv_a[1:] = np.cumsum(np.diff(ys) / vals)  # midpoint rule for int 1/a_dot
    s_nodes = inv_a
    R = s_nodes[-1] if math.isfinite(d.R_dot) else math.inf
    a_vals = d.a_dot.value(ys) ** 2
    b_vals = -d.b_dot.value(ys)
    density = PiecewiseFn.from_samples(s_nodes, a_vals)
    bfn = PiecewiseFn.from_samples(s_nodes, b_vals)
    res = float(np.max(np.diff(s_nodes))) if len(s_nodes) > 1 else 0.0
    return Conversion(
        StringCoefficients(R, (), density, bfn),
        error_estimate=res,
        note="sampled change of scale; resolution is the max image cell width",
    )


def standard_to_divergence(s: StringCoefficients, samples=4096) -> Conversion:
    """Inverse construction: sigma_dot inverts y -> int_0^y sqrt(a).

    Requires a positive-a.e. density and no atoms.
    """
    report = validate(s)
    if not report.ok:
        raise InvalidStringError(report)
    if s.atoms:
        raise ConversionError("atoms are not representable in divergence-like form")
    if s.density.is_zero():
        raise ConversionError("zero density is not representable in divergence-like form")
    for p in s.density.pieces:
        ys = np.linspace(p.lo, min(p.hi, p.lo + max(1.0, p.lo)), 17)[1:]
        if np.any(p.value(ys) <= 0.0):
            raise ConversionError("density must be positive almost everywhere")

    pa = _single_power(s.density)
    pb = _single_power(s.b) if not s.b.is_zero() else (0.0, 0.0)
    if pa is not None and pb is not None:
        c, alpha = pa  # density c y^alpha, alpha > -1
        # C(y) = int sqrt(density) = sqrt(c) y^(alpha/2+1) / (alpha/2+1)
        r = alpha / 2.0 + 1.0
        crt = math.sqrt(c) / r
        # sigma_dot(t) = (t / crt)^(1/r); a_dot(t) = sqrt(c) sigma_dot(t)^(alpha/2)
        Rd = crt * s.R ** r if math.isfinite(s.R) else math.inf
        hi_a = (
            crt * s.density.pieces[0].hi ** r
            if math.isfinite(s.density.pieces[0].hi)
            else math.inf
        )
        a_coeff = math.sqrt(c) * (1.0 / crt) ** (alpha / (2.0 * r))
        a_dot = PiecewiseFn((Piece(0.0, hi_a, "power", (a_coeff, alpha / (2.0 * r))),))
        cb, betab = pb
        if cb == 0.0:
            b_dot = PiecewiseFn.zero()
        else:
            hi_b = (
                crt * s.b.pieces[0].hi ** r if math.isfinite(s.b.pieces[0].hi) else math.inf
            )
            b_coeff = -cb * (1.0 / crt) ** (betab / r)
            b_dot = PiecewiseFn((Piece(0.0, hi_b, "power", (b_coeff, betab / r)),))
        out = DivergenceCoefficients(Rd, a_dot, b_dot)
        out.validate()
        return Conversion(out)

    # sampled fallback
    top = s.R if math.isfinite(s.R) else max(s.density.t_max, 1.0)
    if not math.isfinite(top):
        top = 1.0
    ys = np.linspace(0.0, top, samples + 1)
    mid = 0.5 * (ys[:-1] + ys[1:])
    C = np.zeros_like(ys)
    C[1:] = np.cumsum(np.sqrt(np.maximum(s.density.value(mid), 0.0)) * np.diff(ys))
    Rd = C[-1] if math.isfinite(s.R) else math.inf
    a_dot = PiecewiseFn.from_samples(C, np.sqrt(np.maximum(s.density.value(ys), 0.0)))
    b_dot = PiecewiseFn.from_samples(C, -s.b.value(ys))
    res = float(np.max(np.diff(C))) if len(C) > 1 else 0.0
    out = DivergenceCoefficients(Rd, a_dot, b_dot)
    return Conversion(out, error_estimate=res, note="sampled inverse scale")


# ---------------------------------------------------------------------------
# reduction of the general equation
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class GeneralReduction:
    coefficients: StringCoefficients
    y_nodes: np.ndarray
    sigma: np.ndarray  # scale map sigma(y) on y_nodes
    tau: np.ndarray  # shear tau on the image nodes sigma(y)
    tau_prime: np.ndarray
    resolution: float


_GL_X = np.array(
    [-0.9491079123427585, -0.7415311855993945, -0.4058451513773972, 0.0,
     0.4058451513773972, 0.7415311855993945, 0.9491079123427585]
)
_GL_W = np.array(
    [0.1294849661688697, 0.2797053914892766, 0.3818300505051189, 0.4179591836734694,
     0.3818300505051189, 0.2797053914892766, 0.1294849661688697]
)


def _cumulative_gl(f, nodes):
    """Cumulative integral of callable f over a node sequence (7-pt Gauss cells)."""
    out = np.zeros(len(nodes))
    for k in range(len(nodes) - 1):
        a, b = nodes[k], nodes[k + 1]
        half = 0.5 * (b - a)
        xs = 0.5 * (a + b) + half * _GL_X
        out[k + 1] = out[k] + half * float(np.dot(_GL_W, f(xs)))
    return out


def reduce_general(g: GeneralCoefficients, grid=1024) -> GeneralReduction:
    """Scale out e0 and c0, then shear out the remaining first-order term.

    Step 1 substitutes the scale sigma with c0 sigma'' + e0 sigma' = 0,
    sigma(0) = 0 (so sigma' = exp(-int e0/c0)); step 2 divides by the new
    second-order coefficient; step 3 shears with tau'' = -d2, tau'(0) = 0.
    Returns sampled standard-form coefficients together with (sigma, tau)
    so callers can map Dirichlet-to-Neumann normalizations.
    """
    if isinstance(grid, int):
        if not math.isfinite(g.R0):
            raise ConversionError("explicit grid nodes required when R0 = inf")
        y = np.linspace(0.0, g.R0, grid + 1)
    else:
        y = np.asarray(grid, dtype=float)
    ysamp = y[1:]
    c0 = g.c0.value(ysamp)
    if np.any(c0 <= 0.0):
        k = int(np.argmax(c0 <= 0.0))
        raise ConversionError(f"c0 must be positive; fails near y = {ysamp[k]:g}")

    ratio = lambda x: g.e0.value(x) / g.c0.value(x)
    I = _cumulative_gl(ratio, y)  # int e0/c0
    sig_prime = lambda x: np.exp(-np.interp(x, y, I))
    sigma = _cumulative_gl(sig_prime, y)

    sp = np.exp(-I)
    a1 = g.a0.value(y)
    b1 = g.b0.value(y) * sp
    c1 = g.c0.value(y) * sp ** 2
    a2, b2 = a1 / c1, b1 / c1

    # tau'(s) = -int_0^s d2 ds, integrated in the y parametrization:
    # d2(sigma(y)) sigma'(y) dy = d0 / (c0 sigma') dy
    tau_pp = lambda x: g.d0.value(x) / (g.c0.value(x) * sig_prime(x))
    tau_prime = -_cumulative_gl(tau_pp, y)
    tau = _cumulative_gl(lambda x: np.interp(x, sigma, tau_prime, left=0.0), sigma)

    a3 = a2 + 2.0 * b2 * tau_prime + tau_prime ** 2
    b3 = b2 + tau_prime
    density = PiecewiseFn.from_samples(sigma, a3)
    bfn = PiecewiseFn.from_samples(sigma, b3)
    coeffs = StringCoefficients(float(sigma[-1]), (), density, bfn)
    res = float(np.max(np.diff(sigma)))
    return GeneralReduction(coeffs, y, sigma, tau, tau_prime, res)

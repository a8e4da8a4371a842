"""Piecewise coefficient functions with exact closed-form integrals.

Coefficients are built from two primitive kinds on half-open intervals
[lo, hi): polynomials sum(c_j y^j) and powers c*y^alpha, both in the global
variable y.  Everything downstream (cell masses, drift averages, form
conversions) reduces to the integral helpers here, so they are all exact.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

MAX_POLY_DEGREE = 16  # derived quantities like b^2 may double the user cap of 8


@dataclass(frozen=True)
class Piece:
    lo: float
    hi: float  # math.inf allowed for the trailing piece
    kind: str  # "poly" | "power"
    # poly: coefficients (a0, a1, ...); power: (c, alpha)
    params: tuple

    def __post_init__(self):
        if not self.lo < self.hi:
            raise ValueError(f"empty piece interval [{self.lo}, {self.hi})")
        if self.lo < 0:
            raise ValueError("pieces live on [0, inf)")
        if self.kind == "poly":
            if len(self.params) == 0 or len(self.params) - 1 > MAX_POLY_DEGREE:
                raise ValueError("polynomial degree out of range")
        elif self.kind == "power":
            if len(self.params) != 2:
                raise ValueError("power piece needs (c, alpha)")
        else:
            raise ValueError(f"unknown piece kind {self.kind!r}")

    # -- point evaluation -------------------------------------------------
    def value(self, y):
        y = np.asarray(y, dtype=float)
        if self.kind == "poly":
            out = np.zeros_like(y)
            for c in reversed(self.params):
                out = out * y + c
            return out
        c, alpha = self.params
        if alpha == 0:
            return np.full_like(y, c)
        with np.errstate(divide="ignore"):
            return c * np.power(y, alpha)

    # -- exact integrals over [a, b] inside [lo, hi) ----------------------
    def integral(self, a, b):
        """Integral of the piece over [a, b]."""
        if self.kind == "poly":
            return _poly_int(self.params, a, b)
        c, alpha = self.params
        return c * _power_int(alpha, a, b)

    def integral_square(self, a, b):
        if self.kind == "poly":
            return _poly_int(_poly_mul(self.params, self.params), a, b)
        c, alpha = self.params
        return c * c * _power_int(2 * alpha, a, b)

    def moment(self, a, b):
        """Integral of y*f(y) over [a, b]."""
        if self.kind == "poly":
            return _poly_int((0.0,) + tuple(self.params), a, b)
        c, alpha = self.params
        return c * _power_int(alpha + 1, a, b)

    def moment_square(self, a, b):
        """Integral of y*f(y)^2 over [a, b]."""
        if self.kind == "poly":
            return _poly_int((0.0,) + tuple(_poly_mul(self.params, self.params)), a, b)
        c, alpha = self.params
        return c * c * _power_int(2 * alpha + 1, a, b)

    def squared(self):
        if self.kind == "poly":
            return Piece(self.lo, self.hi, "poly", _poly_mul(self.params, self.params))
        c, alpha = self.params
        return Piece(self.lo, self.hi, "power", (c * c, 2 * alpha))

    def scaled(self, s):
        if self.kind == "poly":
            return Piece(self.lo, self.hi, "poly", tuple(s * c for c in self.params))
        c, alpha = self.params
        return Piece(self.lo, self.hi, "power", (s * c, alpha))

    def clipped(self, lo, hi):
        return Piece(max(self.lo, lo), min(self.hi, hi), self.kind, self.params)


def _poly_mul(p, q):
    out = [0.0] * (len(p) + len(q) - 1)
    for i, a in enumerate(p):
        for j, b in enumerate(q):
            out[i + j] += a * b
    return tuple(out)


def _poly_int(coeffs, a, b):
    """Integral of sum(c_j y^j) over [a, b] via the antiderivative."""
    if not (math.isfinite(a) and math.isfinite(b)):
        raise ValueError("polynomial integral needs finite limits")
    acc = 0.0
    for j, c in enumerate(coeffs):
        if c != 0.0:
            acc += c * (b ** (j + 1) - a ** (j + 1)) / (j + 1)
    return acc


def _power_int(alpha, a, b):
    """Integral of y^alpha over [a, b]; requires alpha > -1 when a == 0."""
    if a == b:
        return 0.0
    if not math.isfinite(b):
        raise ValueError("power integral needs a finite upper limit")
    if alpha == -1.0:
        if a == 0.0:
            raise ValueError("y^-1 is not integrable at 0")
        return math.log(b / a)
    p = alpha + 1.0
    if a == 0.0:
        if p <= 0.0:
            raise ValueError(f"y^{alpha} is not integrable at 0")
        return b ** p / p
    return (b ** p - a ** p) / p


@dataclass(frozen=True)
class PiecewiseFn:
    """Sorted, disjoint pieces; the function is 0 outside their union."""

    pieces: tuple = ()

    def __post_init__(self):
        prev = 0.0
        for p in self.pieces:
            if p.lo < prev - 1e-15:
                raise ValueError("pieces overlap or are unsorted")
            prev = p.hi

    # -- constructors ------------------------------------------------------
    @classmethod
    def zero(cls):
        return cls(())

    @classmethod
    def constant(cls, c, hi=math.inf, lo=0.0):
        if c == 0.0:
            return cls(())
        return cls((Piece(lo, hi, "poly", (float(c),)),))

    @classmethod
    def power(cls, c, alpha, hi=math.inf, lo=0.0):
        return cls((Piece(lo, hi, "power", (float(c), float(alpha))),))

    @classmethod
    def poly(cls, coeffs, hi=math.inf, lo=0.0):
        return cls((Piece(lo, hi, "poly", tuple(float(c) for c in coeffs)),))

    @classmethod
    def from_samples(cls, x, y):
        """Piecewise-linear interpolant through sample points (sorted x)."""
        x = np.asarray(x, dtype=float)
        y = np.asarray(y, dtype=float)
        ps = []
        for k in range(len(x) - 1):
            if x[k + 1] <= x[k]:
                continue
            slope = (y[k + 1] - y[k]) / (x[k + 1] - x[k])
            ps.append(Piece(x[k], x[k + 1], "poly", (y[k] - slope * x[k], slope)))
        return cls(tuple(ps))

    # -- queries -----------------------------------------------------------
    @property
    def t_max(self):
        return self.pieces[-1].hi if self.pieces else 0.0

    @property
    def breakpoints(self):
        pts = set()
        for p in self.pieces:
            pts.add(p.lo)
            if math.isfinite(p.hi):
                pts.add(p.hi)
        return sorted(pts)

    def is_zero(self):
        return not self.pieces

    def value(self, y):
        y = np.asarray(y, dtype=float)
        out = np.zeros_like(y)
        for p in self.pieces:
            mask = (y >= p.lo) & (y < p.hi)
            if mask.any():
                out[mask] = p.value(y[mask])
        return out if out.ndim else float(out)

    __call__ = value

    def _accumulate(self, a, b, method):
        if b < a:
            raise ValueError("integral limits out of order")
        acc = 0.0
        for p in self.pieces:
            lo = max(a, p.lo)
            hi = min(b, p.hi)
            if hi > lo:
                acc += getattr(p, method)(lo, hi)
        return acc

    def integral(self, a, b):
        return self._accumulate(a, b, "integral")

    def integral_square(self, a, b):
        return self._accumulate(a, b, "integral_square")

    def moment(self, a, b):
        return self._accumulate(a, b, "moment")

    def moment_square(self, a, b):
        return self._accumulate(a, b, "moment_square")

    def average(self, a, b):
        if b <= a:
            raise ValueError("empty averaging interval")
        return self.integral(a, b) / (b - a)

    def squared(self):
        return PiecewiseFn(tuple(p.squared() for p in self.pieces))

    def scaled(self, s):
        if s == 0.0:
            return PiecewiseFn(())
        return PiecewiseFn(tuple(p.scaled(s) for p in self.pieces))

    def restricted(self, lo, hi):
        ps = [p.clipped(lo, hi) for p in self.pieces if p.hi > lo and p.lo < hi]
        return PiecewiseFn(tuple(ps))

    def piece_at(self, y):
        for p in self.pieces:
            if p.lo <= y < p.hi:
                return p
        return None


def common_partition(f: PiecewiseFn, g: PiecewiseFn, hi):
    """Breakpoints of both functions merged over [0, hi]."""
    pts = {0.0, float(hi)}
    for fn in (f, g):
        for p in fn.breakpoints:
            if 0.0 < p < hi:
                pts.add(float(p))
    return sorted(pts)


def subtract(f: PiecewiseFn, g: PiecewiseFn, hi=None):
    """f - g as a PiecewiseFn when the piece algebra is closed, else None.

    Closed cases per aligned subinterval: poly-poly, and power-power with
    equal exponents.  `hi` caps the working window when both are infinite.
    """
    if g.is_zero():
        return f
    if f.is_zero():
        return g.scaled(-1.0)
    top = hi if hi is not None else max(f.t_max, g.t_max)
    pts = common_partition(f, g, top if math.isfinite(top) else 1.0)
    if not math.isfinite(top):
        pts.append(math.inf)
    out = []
    for lo, up in zip(pts[:-1], pts[1:]):
        mid = lo + 0.5 * (min(up, lo + 1.0) - lo)
        pf = f.piece_at(mid)
        pg = g.piece_at(mid)
        if pf is None and pg is None:
            continue
        if pf is None:
            out.append(pg.clipped(lo, up).scaled(-1.0))
            continue
        if pg is None:
            out.append(pf.clipped(lo, up))
            continue
        if pf.kind == "power" and pg.kind == "power" and pf.params[1] == pg.params[1]:
            out.append(Piece(lo, up, "power", (pf.params[0] - pg.params[0], pf.params[1])))
            continue
        if pf.kind == "power" and _power_is_poly(pf):
            pf = _power_to_poly(pf)
        if pg.kind == "power" and _power_is_poly(pg):
            pg = _power_to_poly(pg)
        if pf.kind == "poly" and pg.kind == "poly":
            n = max(len(pf.params), len(pg.params))
            cf = list(pf.params) + [0.0] * (n - len(pf.params))
            cg = list(pg.params) + [0.0] * (n - len(pg.params))
            out.append(Piece(lo, up, "poly", tuple(a - b for a, b in zip(cf, cg))))
        else:
            return None
    return PiecewiseFn(tuple(p for p in out if _not_identically_zero(p)))


def _power_is_poly(p):
    c, alpha = p.params
    return float(alpha).is_integer() and 0 <= alpha <= MAX_POLY_DEGREE


def _power_to_poly(p):
    c, alpha = p.params
    coeffs = [0.0] * (int(alpha) + 1)
    coeffs[int(alpha)] = c
    return Piece(p.lo, p.hi, "poly", tuple(coeffs))


def _not_identically_zero(p):
    if p.kind == "poly":
        return any(c != 0.0 for c in p.params)
    return p.params[0] != 0.0

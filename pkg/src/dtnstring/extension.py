"""Spectral realization of the harmonic extension and Dirichlet-to-Neumann map.

Periodic sampled boundary data stands in for the line: on band-limited
data the multiplier action agrees mode by mode.  Mode j with frequency
xi_j = 2 pi j / X is multiplied by -k(xi_j) - alpha0 xi_j^2, where k comes
from the adaptive Weyl solver, k(-xi) = conj k(xi), and k(0) is the affine
value (1/R for finite R, 0 otherwise).  The extension multiplies mode j by
phi_{xi_j}(y) instead.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import DtnStringError
from .propagator import bounded_solution, weyl_fixed, weyl_k
from .strings import GridPolicy, StringCoefficients, discretize


@dataclass(frozen=True, eq=False)
class SampledFunction:
    """Complex samples on a uniform periodic grid of period X."""

    period: float
    values: np.ndarray

    def __post_init__(self):
        if not self.period > 0:
            raise ValueError("period must be positive")
        n = len(self.values)
        if n < 4 or n & (n - 1):
            raise ValueError("sample count must be a power of two, at least 4")
        object.__setattr__(self, "values", np.asarray(self.values, dtype=complex))

    @property
    def n(self):
        return len(self.values)

    @property
    def x(self):
        return np.arange(self.n) * (self.period / self.n)

    @property
    def frequencies(self):
        return 2.0 * math.pi * np.fft.fftfreq(self.n, d=self.period / self.n)

    @classmethod
    def from_function(cls, f, period, n):
        x = np.arange(n) * (period / n)
        return cls(period, np.asarray(f(x), dtype=complex))

    def norm(self):
        return float(np.sqrt(np.sum(np.abs(self.values) ** 2) * self.period / self.n))


class DtnOperator:
    """Dirichlet-to-Neumann multiplier of a string on a fixed mode set.

    Weyl values are cached per frequency; repeated applications on the same
    grid reuse them.  include_alpha=False drops the -alpha0 xi^2 local term
    (used by the difference-quotient diagnostic, which only sees the
    boundary derivative).
    """

    def __init__(self, coeffs: StringCoefficients, tol=1e-8, policy=None):
        self.coeffs = coeffs
        self.tol = tol
        self.policy = policy
        self._k_cache = {}
        self._trace_cache = {}

    def k_value(self, xi):
        """k at a real frequency, conjugate-symmetric, cached."""
        xi = float(xi)
        if xi not in self._k_cache:
            if xi < 0.0:
                self._k_cache[xi] = self.k_value(-xi).conjugate()
            else:
                try:
                    self._k_cache[xi] = weyl_k(self.coeffs, xi, self.tol, self.policy).k
                except DtnStringError as exc:
                    raise DtnStringError(f"weyl_k failed at mode frequency {xi:g}: {exc}") from exc
        return self._k_cache[xi]

    def multipliers(self, freqs, include_alpha=True):
        out = np.empty(len(freqs), dtype=complex)
        for j, xi in enumerate(freqs):
            try:
                out[j] = -self.k_value(xi)
            except DtnStringError as exc:
                raise DtnStringError(f"mode {j}: {exc}") from exc
        if include_alpha:
            out -= self.coeffs.alpha0 * np.asarray(freqs) ** 2
        # the unpaired Nyquist mode aliases +-xi_max; its sine component
        # samples to zero, so the correctly sampled action is the real part
        n = len(freqs)
        if n % 2 == 0 and n >= 2:
            out[n // 2] = out[n // 2].real
        return out

    def apply(self, f: SampledFunction, include_alpha=True) -> SampledFunction:
        spec = np.fft.fft(f.values)
        spec *= self.multipliers(f.frequencies, include_alpha)
        return SampledFunction(f.period, np.fft.ifft(spec))

    def _trace_at(self, xi, heights):
        """phi_{xi}(y) for each height, via one decaying-solution trace."""
        key = (float(xi), tuple(float(y) for y in heights))
        if key in self._trace_cache:
            return self._trace_cache[key]
        if xi == 0.0:
            R = self.coeffs.R
            vals = np.array(
                [1.0 + 0j if math.isinf(R) else 1.0 - y / R for y in heights]
            )
        elif xi < 0.0:
            vals = np.conj(self._trace_at(-xi, heights))
        else:
            res = weyl_k(self.coeffs, xi, self.tol, self.policy)
            T = res.T_used
            ymax = max(heights)
            if T < ymax:
                T = ymax * (1.0 + 1.0 / 64.0) if math.isinf(self.coeffs.R) else self.coeffs.R
            base = self.policy or GridPolicy()
            pol = GridPolicy(
                n=max(res.n_used, base.n),
                T=T,
                kappa=base.kappa,
                extra_nodes=tuple(heights),
            )
            d = discretize(self.coeffs.without_origin_atom(), pol)
            k, _ = weyl_fixed(d, xi)
            trace = bounded_solution(d, xi, k)
            idx = np.searchsorted(d.grid, heights)
            vals = trace.phi[idx]
        self._trace_cache[key] = vals
        return vals

    def extend(self, f: SampledFunction, heights):
        """Harmonic extension u(., y) for each requested height."""
        heights = [float(y) for y in heights]
        R = self.coeffs.R
        for y in heights:
            if y < 0 or y >= R:
                raise ValueError(f"height {y:g} outside [0, R)")
        spec = np.fft.fft(f.values)
        freqs = f.frequencies
        out = []
        for i, y in enumerate(heights):
            if y == 0.0:
                out.append(SampledFunction(f.period, f.values.copy()))
                continue
            mult = np.empty(f.n, dtype=complex)
            for j, xi in enumerate(freqs):
                mult[j] = self._trace_at(float(xi), tuple(heights))[i]
            mult[f.n // 2] = mult[f.n // 2].real  # unpaired Nyquist mode
            out.append(SampledFunction(f.period, np.fft.ifft(spec * mult)))
        return out


def apply_dtn(coeffs: StringCoefficients, f: SampledFunction, tol=1e-8, policy=None):
    return DtnOperator(coeffs, tol, policy).apply(f)


def harmonic_extend(coeffs: StringCoefficients, f: SampledFunction, heights, tol=1e-8, policy=None):
    return DtnOperator(coeffs, tol, policy).extend(f, heights)


@dataclass(frozen=True)
class QuotientReport:
    heights: tuple
    errors: tuple  # distance of (u(., y) - f)/y from the boundary derivative
    rates: tuple  # pairwise convergence orders
    first_order: bool  # errors shrink at least linearly (or vanish outright)


def dtn_difference_quotient_check(
    coeffs: StringCoefficients, f: SampledFunction, y_list, tol=1e-8, policy=None
) -> QuotientReport:
    """Convergence of the vertical difference quotient toward the DtN output.

    The target omits the -alpha0 xi^2 local part: the quotient only sees
    the boundary derivative of the extension.
    """
    op = DtnOperator(coeffs, tol, policy)
    target = op.apply(f, include_alpha=False)
    ys = sorted(float(y) for y in y_list)[::-1]
    errs = []
    for y, u in zip(ys, op.extend(f, ys)):
        quot = (u.values - f.values) / y
        errs.append(float(np.sqrt(np.mean(np.abs(quot - target.values) ** 2))))
    rates = []
    scale = float(np.sqrt(np.mean(np.abs(target.values) ** 2))) + 1e-300
    for (y1, e1), (y2, e2) in zip(zip(ys, errs), zip(ys[1:], errs[1:])):
        if e1 / scale < 1e-12 and e2 / scale < 1e-12:
            rates.append(1.0)  # exact quotient (affine extension); rate saturates
        else:
            rates.append(math.log(max(e1, 1e-300) / max(e2, 1e-300)) / math.log(y1 / y2))
    first_order = all(r > 0.5 for r in rates) or all(e / scale < 1e-10 for e in errs)
    return QuotientReport(tuple(ys), tuple(errs), tuple(rates), first_order)

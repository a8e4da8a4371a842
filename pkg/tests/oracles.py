"""Independent oracles for the test suite.

Everything here deliberately avoids the closed forms and the transfer-step
algebra of the package: quadrature via scipy.quad with cancellation-safe
integrands, initial value problems via DOP853, Picard iteration for the
measure ODE, and arbitrary-precision gamma via mpmath.
"""

import cmath
import math

import numpy as np
from scipy.integrate import quad, solve_ivp


def jump_integral(density, xi, lo, hi, tail_power=None):
    """Compensated integral int (e^{i xi z} - 1 - i xi z 1_(-1,1)) density dz.

    Over [lo, hi] with 0 < lo < hi (one-sided pieces; mirror for z < 0).
    tail_power = (pref, mu) adds the analytic tail of pref z^{-1-mu} past hi.
    """

    def re_part(z):
        return -2.0 * math.sin(xi * z / 2.0) ** 2 * density(z)

    def im_part(z):
        x = xi * z
        if abs(x) < 1e-4:
            s = -(x ** 3) / 6.0 * (1.0 - x * x / 20.0 * (1.0 - x * x / 42.0))
        else:
            s = math.sin(x) - x
        comp = s if z < 1.0 else math.sin(x)
        return comp * density(z)

    total = 0j
    pts = [p for p in (lo, 1e-6, 1e-3, 1.0, hi) if lo <= p <= hi]
    pts = sorted(set(pts))
    for a, b in zip(pts[:-1], pts[1:]):
        total += quad(re_part, a, b, limit=800, epsabs=1e-14, epsrel=1e-13)[0]
        total += 1j * quad(im_part, a, b, limit=800, epsabs=1e-14, epsrel=1e-13)[0]
    if tail_power is not None:
        pref, mu = tail_power
        total += -pref * hi ** (-mu) / mu
        total += quad(lambda z: pref * z ** (-1 - mu), hi, math.inf, weight="cos", wvar=xi, limit=400)[0]
        total += 1j * quad(lambda z: pref * z ** (-1 - mu), hi, math.inf, weight="sin", wvar=xi, limit=400)[0]
    return total


def levy_symbol_oracle(triplet, xi):
    """Quadrature evaluation of the triplet symbol on the real axis."""
    xi = float(xi)
    total = complex(-triplet.alpha * xi * xi - triplet.gamma, triplet.beta * xi)
    for c, s in triplet.nu_plus:
        total += jump_integral(lambda z, c=c, s=s: c * math.exp(-s * z), xi, 1e-12, 80.0 / s)
    for c, s in triplet.nu_minus:
        # substituting z -> -z maps the minus side to the plus side at -xi
        total += jump_integral(lambda z, c=c, s=s: c * math.exp(-s * z), -xi, 1e-12, 80.0 / s)
    for side, C, mu in triplet.stable_terms:
        pref = C / math.pi if mu == 1.0 else C / abs(math.gamma(-mu))
        total += jump_integral(
            lambda z, p=pref, m=mu: p * z ** (-1.0 - m),
            xi if side > 0 else -xi,
            1e-12,
            400.0,
            tail_power=(pref, mu),
        )
    return total


def cell_ode_oracle(phi0, dphi0, xi, dt, b_cell, density=None):
    """High-order IVP solution of phi'' = xi^2 a(t) phi - 2 i xi b phi'.

    a(t) defaults to b_cell^2 (the mass-free cell of the discretized
    system); a callable density overrides it.
    """
    a = (lambda t: b_cell * b_cell) if density is None else density

    def rhs(t, y):
        phi = y[0] + 1j * y[1]
        dphi = y[2] + 1j * y[3]
        dd = xi * xi * a(t) * phi - 2j * xi * b_cell * dphi
        return [dphi.real, dphi.imag, dd.real, dd.imag]

    y0 = [phi0.real, phi0.imag, dphi0.real, dphi0.imag]
    sol = solve_ivp(rhs, (0.0, dt), y0, method="DOP853", rtol=1e-12, atol=1e-14)
    y = sol.y[:, -1]
    return complex(y[0], y[1]), complex(y[2], y[3])


def string_ivp_oracle(xi, nodes, masses, bvals, phi0, dphi0):
    """Propagate through constant-b cells with point masses using DOP853.

    Only the jump rule phi' += xi^2 m phi is shared with the implementation;
    the cell interiors are integrated numerically.
    """
    phi, dphi = complex(phi0), complex(dphi0)
    for k in range(len(nodes) - 1):
        dphi = dphi + xi * xi * masses[k] * phi
        phi, dphi = cell_ode_oracle(phi, dphi, xi, nodes[k + 1] - nodes[k], bvals[k])
    return phi, dphi


def picard_oracle(xi, T, n, density, bfun, atoms=(), phi0=1.0, dphi0=0.0, sweeps=300):
    """Fixed-point iteration for the integral form of the measure ODE.

    phi'(t) = phi'(0) + xi^2 int_[0,t) phi da - 2 i xi int_0^t b phi';
    da is sampled by midpoint cells plus explicit atoms, so the oracle never
    sees the package's transfer-step algebra.
    """
    t = np.linspace(0.0, T, n + 1)
    h = t[1] - t[0]
    mid_density = np.array([density(x) for x in 0.5 * (t[:-1] + t[1:])])
    bv = np.array([bfun(x) for x in t])
    atom_idx = [(int(round(y / h)), m) for y, m in atoms]
    phi = np.full(n + 1, complex(phi0))
    dphi = np.full(n + 1, complex(dphi0))
    for _ in range(sweeps):
        # cumulative integral of phi against the measure, left-open cells
        incr = np.zeros(n + 1, dtype=complex)
        incr[1:] += mid_density * 0.5 * (phi[:-1] + phi[1:]) * h
        cumA = np.cumsum(incr)
        for idx, m in atom_idx:
            cumA[idx + 1 :] += m * phi[idx]
        integ_b = np.concatenate(
            ([0.0], np.cumsum(0.5 * (bv[:-1] * dphi[:-1] + bv[1:] * dphi[1:]) * h))
        )
        dphi_new = dphi0 + xi * xi * cumA - 2j * xi * integ_b
        phi_new = phi0 + np.concatenate(
            ([0.0], np.cumsum(0.5 * (dphi_new[:-1] + dphi_new[1:]) * h))
        )
        if np.max(np.abs(phi_new - phi)) < 1e-15 and np.max(np.abs(dphi_new - dphi)) < 1e-15:
            phi, dphi = phi_new, dphi_new
            break
        phi, dphi = phi_new, dphi_new
    return t, phi, dphi


def loggamma_oracle(z):
    import mpmath as mp

    mp.mp.dps = 40
    v = mp.loggamma(mp.mpc(z))
    return complex(v)


def gamma_abc_oracle(mu, p, q):
    """(A, B) of the power-law symbol via arbitrary-precision gamma."""
    import mpmath as mp

    mp.mp.dps = 40
    if mu == 1:
        return float(p), float(-q)
    if p > 0:
        w = mp.mpc((1 - mu) * (p - 1j * q) / (2 * p))
        val = -mp.gamma(-mu) * mp.gamma(mu + w) / (mp.gamma(mu) * mp.gamma(w)) * (2 * mu * p) ** mu
    else:
        s = 1 if q * (1 - mu) > 0 else -1
        val = -mp.gamma(-mu) / mp.gamma(mu) * mp.e ** (-1j * mp.pi * mu / 2 * s) * abs(
            q * mu * (1 - mu)
        ) ** mu
    return float(mp.re(val)), float(mp.im(val))

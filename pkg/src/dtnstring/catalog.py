"""Closed-form (coefficients, symbol) pairs used as oracles across the suite.

Each entry bundles a string, its exact Weyl function, and where available
the matching generator triplet plus the sheared and divergence-like forms.
exact_k callables accept real xi of either sign and complex xi in the right
half-plane (principal branches).
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass, field

from .errors import SymbolPoleError
from .pieces import PiecewiseFn
from .strings import GridPolicy, StringCoefficients
from .symbols import LevyTriplet, gamma_complex, log_gamma_complex
from .transforms import DivergenceCoefficients, EKCoefficients, standard_to_ek


@dataclass(frozen=True)
class CatalogEntry:
    name: str
    coefficients: StringCoefficients
    exact_k: object  # callable xi -> complex
    provenance: str
    k_rel_tol: float  # expected relative accuracy of weyl_k on this entry
    levy: LevyTriplet | None = None
    ek: EKCoefficients | None = None
    divergence: DivergenceCoefficients | None = None
    policy: GridPolicy = field(default_factory=GridPolicy)
    constants: dict = field(default_factory=dict)  # mu/A/B/C+- for power-law entries


def _power_symbol(A, B, mu):
    """k(xi) = (A + iB sign xi)|xi|^mu on the axis, (A + iB) xi^mu on Re xi > 0."""
    AB = complex(A, B)

    def k(xi):
        xi = complex(xi)
        if xi.imag == 0.0:
            x = xi.real
            if x == 0.0:
                return 0j
            return complex(A, B * math.copysign(1.0, x)) * abs(x) ** mu
        if xi.real <= 0.0:
            raise ValueError("exact_k needs real xi or Re xi > 0")
        return AB * xi ** mu

    return k


def example_zero(R=math.inf) -> CatalogEntry:
    """Empty coefficients: the multiplier is constant -1/R (0 when R = inf)."""
    if not R > 0:
        raise ValueError("R must be positive")
    gamma = 0.0 if math.isinf(R) else 1.0 / R
    k = lambda xi: complex(gamma)
    name = "zero-inf" if math.isinf(R) else f"zero-R{R:g}"
    return CatalogEntry(
        name=name,
        coefficients=StringCoefficients(R=R),
        exact_k=k,
        provenance=f"empty string on [0, {R:g}): constant multiplier",
        k_rel_tol=1e-10,
        levy=LevyTriplet(gamma=gamma),
        ek=EKCoefficients(R=R),
        policy=GridPolicy(n=64),
    )


def example_constant(p, q) -> CatalogEntry:
    """Flat coefficients a = (p^2+q^2) dy, b = -q: k(xi) = p|xi| - i q xi."""
    if p < 0:
        raise ValueError("p must be nonnegative")
    coeffs = StringCoefficients(
        density=PiecewiseFn.constant(p * p + q * q),
        b=PiecewiseFn.constant(-q),
    )
    stable = ((+1, float(p), 1.0), (-1, float(p), 1.0)) if p > 0 else ()
    levy = LevyTriplet(beta=float(q), stable_terms=stable)
    div = None
    if p * p + q * q > 0:
        div = DivergenceCoefficients(
            R_dot=math.inf,
            a_dot=PiecewiseFn.constant(math.sqrt(p * p + q * q)),
            b_dot=PiecewiseFn.constant(q) if q else PiecewiseFn.zero(),
        )
    return CatalogEntry(
        name=f"const-p{p:g}-q{q:g}",
        coefficients=coeffs,
        exact_k=_power_symbol(p, -q, 1.0),
        provenance=f"constant-coefficient family (p, q) = ({p:g}, {q:g})",
        k_rel_tol=1e-6,
        levy=levy,
        ek=EKCoefficients(
            a_tilde=PiecewiseFn.constant(p * p), b_rep=PiecewiseFn.constant(-q)
        ),
        divergence=div,
        constants={"mu": 1.0, "A": float(p), "B": float(-q)},
    )


def power_law_constants(mu, p, q):
    """(A, B) with k(xi) = (A + iB)(xi)^mu for xi > 0, via the gamma closed form."""
    if not 0 < mu < 2:
        raise ValueError("mu must lie in (0, 2)")
    if p < 0 or (p == 0 and q == 0):
        raise ValueError("need p >= 0 and (p, q) != (0, 0)")
    if mu == 1.0:
        return float(p), float(-q)
    if p > 0:
        w = (1.0 - mu) * complex(p, -q) / (2.0 * p)
        val = -cmath.exp(
            log_gamma_complex(mu + w) - log_gamma_complex(w) - log_gamma_complex(mu)
        ) * gamma_complex(-mu) * (2.0 * mu * p) ** mu
        return val.real, val.imag
    sign = math.copysign(1.0, q * (1.0 - mu))
    val = (
        -gamma_complex(-mu).real
        / gamma_complex(mu).real
        * cmath.exp(-1j * math.pi * mu / 2.0 * sign)
        * abs(q * mu * (1.0 - mu)) ** mu
    )
    return val.real, val.imag


def stable_weights(A, B, mu):
    """(C+, C-) of the jump representation: A + iB = (C+ e^{-i mu pi/2} + C- e^{i mu pi/2}) sign(1-mu)."""
    if mu == 1.0:
        raise ValueError("the (C+, C-) relation is defined for mu != 1")
    c = 2.0 * math.cos(mu * math.pi / 2.0)
    s = 2.0 * math.sin(mu * math.pi / 2.0)
    return abs(A / c - B / s), abs(A / c + B / s)


def example_power_law(mu, p, q) -> CatalogEntry:
    """Self-similar family a = (p^2+q^2) y^{2/mu-2} dy, b = -q y^{1/mu-1}.

    k(xi) = (A + iB sign xi)|xi|^mu with (A, B) from the gamma closed form;
    mu = 1 routes to the constant-coefficient entry.
    """
    if mu == 1.0:
        return example_constant(p, q)
    A, B = power_law_constants(mu, p, q)
    cp, cm = stable_weights(A, B, mu)
    ag = abs(math.gamma(-mu))
    beta_comp = (cp - cm) / (ag * (1.0 - mu))
    stable = tuple(
        t for t in ((+1, cp, mu), (-1, cm, mu)) if t[1] > 0
    )
    pp = 2.0 / mu - 2.0
    coeffs = StringCoefficients(
        density=PiecewiseFn.power(p * p + q * q, pp),
        b=PiecewiseFn.power(-q, 1.0 / mu - 1.0) if q else PiecewiseFn.zero(),
    )
    c_dot = mu ** (mu - 1.0) * (p * p + q * q) ** (mu / 2.0)
    div = DivergenceCoefficients(
        R_dot=math.inf,
        a_dot=PiecewiseFn.power(c_dot, 1.0 - mu),
        b_dot=PiecewiseFn.power(
            mu ** (mu - 1.0) * q * (p * p + q * q) ** (mu / 2.0 - 0.5), 1.0 - mu
        )
        if q
        else PiecewiseFn.zero(),
    )
    ek = EKCoefficients(
        a_tilde=PiecewiseFn.power(p * p, pp) if p else PiecewiseFn.zero(),
        b_rep=coeffs.b,
    )
    return CatalogEntry(
        name=f"power-mu{mu:g}-p{p:g}-q{q:g}",
        coefficients=coeffs,
        exact_k=_power_symbol(A, B, mu),
        provenance=f"power-law family mu={mu:g}, (p, q) = ({p:g}, {q:g})",
        k_rel_tol=1e-3,
        levy=LevyTriplet(beta=beta_comp, stable_terms=stable),
        ek=ek,
        divergence=div,
        policy=GridPolicy(n=2048, kappa=max(1.0, 2.0 / mu)),
        constants={"mu": mu, "A": A, "B": B, "C+": cp, "C-": cm},
    )


def example_one_sided(a0="lebesgue", mass=1.0) -> CatalogEntry:
    """Fully degenerate strings a = A0(y)^2 dy, b = A0 with A0(y) = a0([0, y)).

    a0 = "lebesgue" ships the square-root witness k(xi) = sqrt(i xi); an
    origin atom of the given mass reduces to the pure-drift constant entry.
    """
    if a0 == "atom":
        return example_constant(0.0, -mass)
    if a0 != "lebesgue":
        raise ValueError("supported a0 specs: 'lebesgue' or 'atom'")

    def k(xi):
        xi = complex(xi)
        if xi.imag == 0.0:
            x = xi.real
            if x == 0.0:
                return 0j
            return cmath.exp(1j * math.pi / 4.0 * math.copysign(1.0, x)) * math.sqrt(abs(x))
        if xi.real <= 0.0:
            raise ValueError("exact_k needs real xi or Re xi > 0")
        return cmath.sqrt(1j * xi)

    coeffs = StringCoefficients(
        density=PiecewiseFn.power(1.0, 2.0), b=PiecewiseFn.power(1.0, 1.0)
    )
    # left-sided 1/2-stable jumps: k = (i xi)^(1/2) is the C- = 1 branch,
    # with the compensator drift absorbed into beta
    levy = LevyTriplet(
        beta=-1.0 / (abs(math.gamma(-0.5)) * 0.5), stable_terms=((-1, 1.0, 0.5),)
    )
    div = DivergenceCoefficients(
        R_dot=math.inf,
        a_dot=PiecewiseFn.power(math.sqrt(2.0), 0.5),
        b_dot=PiecewiseFn.power(-math.sqrt(2.0), 0.5),
    )
    return CatalogEntry(
        name="bernstein-sqrt",
        coefficients=coeffs,
        exact_k=k,
        provenance="cumulative-Lebesgue degenerate string; square-root multiplier",
        k_rel_tol=1e-4,
        levy=levy,
        ek=EKCoefficients(b_rep=coeffs.b),
        divergence=div,
        policy=GridPolicy(n=2048),
        constants={"mu": 0.5, "A": math.sqrt(0.5), "B": math.sqrt(0.5)},
    )


def complementary_symbol(k):
    """k_sharp(xi) = xi^2 / k(xi); composing the two multipliers gives xi^2."""

    def k_sharp(xi):
        val = complex(k(xi))
        if val == 0:
            raise SymbolPoleError(f"complementary symbol undefined where k = 0 (xi = {xi})")
        xi = complex(xi)
        return xi * xi / val

    return k_sharp


def dual_coefficients(d: DivergenceCoefficients) -> DivergenceCoefficients:
    """Dual string in divergence form: a -> 1/a, b -> -b/a^2."""
    d.validate()
    pa = d.a_dot.pieces
    out_a, out_b = [], []
    for p in pa:
        if p.kind != "power" and not _is_const(p):
            raise SymbolPoleError("dual_coefficients needs power/constant a_dot pieces")
        c, alpha = _as_power(p)
        if c == 0.0:
            raise SymbolPoleError("a_dot vanishes on a piece")
        out_a.append((p.lo, p.hi, 1.0 / c, -alpha))
    for p in d.b_dot.pieces:
        cb, ab = _as_power(p)
        seg = d.a_dot.restricted(p.lo, p.hi)
        if len(seg.pieces) != 1:
            raise SymbolPoleError("b_dot pieces must align with a_dot pieces")
        ca, aa = _as_power(seg.pieces[0])
        out_b.append((p.lo, p.hi, -cb / (ca * ca), ab - 2.0 * aa))
    from .pieces import Piece

    a_dot = PiecewiseFn(tuple(Piece(lo, hi, "power", (c, al)) for lo, hi, c, al in out_a))
    b_dot = PiecewiseFn(tuple(Piece(lo, hi, "power", (c, al)) for lo, hi, c, al in out_b))
    return DivergenceCoefficients(d.R_dot, a_dot, b_dot)


def _is_const(p):
    return p.kind == "poly" and sum(1 for c in p.params if c != 0.0) <= 1 and (
        len(p.params) == 1 or all(c == 0.0 for c in p.params[1:])
    )


def _as_power(p):
    if p.kind == "power":
        return p.params
    if _is_const(p):
        return (p.params[0], 0.0)
    raise SymbolPoleError("piece is not a power/constant")


def default_catalog() -> tuple:
    """The worked-example set used by the verification suite."""
    return (
        example_zero(math.inf),
        example_zero(2.0),
        example_zero(1.0),
        example_zero(0.5),
        example_constant(1.0, 0.0),
        example_constant(0.0, 1.0),
        example_constant(1.0, 1.0),
        example_constant(2.0, -3.0),
        example_power_law(0.5, 1.0, 0.0),
        example_power_law(0.5, 1.0, 1.0),
        example_power_law(1.5, 1.0, 0.0),
        example_power_law(0.5, 0.0, 1.0),
        example_one_sided("lebesgue"),
    )


def get_entry(name: str) -> CatalogEntry:
    for e in default_catalog():
        if e.name == name:
            return e
    raise KeyError(f"no catalog entry named {name!r}")

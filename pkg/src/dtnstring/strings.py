"""Coefficient triples (R, a, b) and their discretization.

A string is a measure a(dy) = atoms + piecewise density on [0, R) together
with a drift coefficient b(y); admissibility requires the excess measure
atilde = a - b^2 dy to be nonnegative.  Discretization atomizes atilde onto
grid nodes (moment-preserving split of each cell's mass) and replaces b by
its exact cell averages, so the discretized system is itself an admissible
string on which propagation is exact.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .errors import DiscretizationError, InvalidStringError
from .pieces import PiecewiseFn

STRUCT_TOL = 1e-12  # relative structural tolerance for cell-wise positivity


@dataclass(frozen=True)
class StringCoefficients:
    """Standard-form coefficients: measure a(dy), drift b(y) on [0, R)."""

    R: float = math.inf
    atoms: tuple = ()  # ((position, mass), ...), sorted upstream
    density: PiecewiseFn = field(default_factory=PiecewiseFn.zero)
    b: PiecewiseFn = field(default_factory=PiecewiseFn.zero)

    @property
    def alpha0(self):
        """Mass of the atom at 0 (the local second-order part of the DtN map)."""
        for y, m in self.atoms:
            if y == 0.0:
                return m
        return 0.0

    @property
    def is_star(self):
        return self.alpha0 == 0.0

    def without_origin_atom(self):
        return StringCoefficients(
            self.R, tuple(a for a in self.atoms if a[0] != 0.0), self.density, self.b
        )


@dataclass(frozen=True)
class Violation:
    code: str
    location: str
    message: str


@dataclass(frozen=True)
class ValidationReport:
    ok: bool
    violations: tuple = ()

    def __bool__(self):
        return self.ok


def validate(coeffs: StringCoefficients, window=None, cells=256) -> ValidationReport:
    """Structural admissibility report; passes iff the triple is a valid string.

    The excess-measure check integrates density - b^2 cell-wise on a
    reference partition (pointwise checks are ill-posed for measures) and
    accepts deficits up to STRUCT_TOL times the local mass scale.
    """
    v = []
    if not (coeffs.R > 0):
        v.append(Violation("R", "R", f"R must be positive, got {coeffs.R}"))
    prev = -1.0
    for y, m in coeffs.atoms:
        loc = f"atom@{y:g}"
        if not (0.0 <= y < coeffs.R):
            v.append(Violation("atom-position", loc, "atom outside [0, R)"))
        if y <= prev:
            v.append(Violation("atom-order", loc, "atom positions must strictly increase"))
        if not (m > 0.0):
            v.append(Violation("atom-mass", loc, f"atom mass must be positive, got {m}"))
        prev = y

    _check_pieces(coeffs.density, "density", v, density=True)
    _check_pieces(coeffs.b, "b", v, density=False)

    if window is None:
        window = _default_window(coeffs)
    if not any(x.code.startswith(("density", "b")) for x in v) and window > 0:
        edges = set(np.linspace(0.0, window, cells + 1))
        for br in coeffs.density.breakpoints + coeffs.b.breakpoints:
            if 0.0 < br < window:
                edges.add(float(br))
        edges = sorted(edges)
        for lo, hi in zip(edges[:-1], edges[1:]):
            mass = coeffs.density.integral(lo, hi)
            drift = coeffs.b.integral_square(lo, hi)
            tol = STRUCT_TOL * max(mass, drift, 1e-300)
            if mass - drift < -tol:
                v.append(
                    Violation(
                        "excess-negativity",
                        f"[{lo:g},{hi:g})",
                        f"a - b^2 dy integrates to {mass - drift:.3e} < 0",
                    )
                )
    return ValidationReport(ok=not v, violations=tuple(v))


def _check_pieces(fn: PiecewiseFn, name, v, density):
    prev_hi = 0.0
    for p in fn.pieces:
        loc = f"{name}[{p.lo:g},{p.hi:g})"
        if abs(p.lo - prev_hi) > 1e-14 * max(1.0, abs(prev_hi)):
            v.append(Violation(f"{name}-gap", loc, "pieces must tile [0, t_max) without gaps"))
        prev_hi = p.hi
        if p.kind == "poly":
            if len(p.params) - 1 > 8:
                v.append(Violation(f"{name}-degree", loc, "polynomial degree exceeds 8"))
        else:
            c, alpha = p.params
            limit = -1.0 if density else -0.5
            if p.lo == 0.0 and alpha <= limit:
                v.append(
                    Violation(
                        f"{name}-exponent", loc, f"power exponent {alpha} <= {limit} at 0"
                    )
                )
        if density:
            ys = np.linspace(p.lo, min(p.hi, p.lo + max(1.0, p.lo)), 33)[1:]
            if np.any(p.value(ys) < 0.0):
                v.append(Violation("density-sign", loc, "density takes negative values"))


def _default_window(coeffs):
    pts = [p for p in coeffs.density.breakpoints + coeffs.b.breakpoints if math.isfinite(p)]
    pts += [y for y, _ in coeffs.atoms]
    top = 2.0 * max(pts) if pts else 1.0
    top = max(top, 1.0)
    if math.isfinite(coeffs.R):
        top = min(top, coeffs.R)
    return top


@dataclass(frozen=True)
class GridPolicy:
    """Cell count, truncation point, and left-clustering exponent.

    Nodes follow t_k = T (k/n)^kappa; kappa > 1 clusters them near the
    singular endpoint 0.  extra_nodes are inserted verbatim (heights, atoms
    and piece breakpoints are always inserted).
    """

    n: int = 512
    T: float | None = None
    kappa: float = 1.0
    extra_nodes: tuple = ()


@dataclass(frozen=True, eq=False)
class DiscretizedString:
    """Atomized excess measure + cell-averaged drift; propagation-exact form."""

    grid: np.ndarray  # nodes t_0 = 0 < ... < t_n = T
    node_masses: np.ndarray  # atomized excess measure, origin atom excluded
    cell_masses: np.ndarray  # exact excess mass of each cell (pre-split)
    bconst: np.ndarray  # per-cell average of b
    Bcum: np.ndarray  # exact cumulative integral of the cell-average drift
    atom_pos: np.ndarray  # interior atoms (for cumulative bookkeeping)
    atom_mass: np.ndarray
    alpha0: float
    R: float
    T: float

    @property
    def n_cells(self):
        return len(self.grid) - 1


def discretize(coeffs: StringCoefficients, policy: GridPolicy) -> DiscretizedString:
    """Exact coefficient atomization on the policy grid.

    Cell masses are the closed-form excess measure of each cell; the split
    onto the two end nodes preserves the first moment, and bconst is the
    exact cell average of b so the cumulative drift integral is preserved.
    """
    report = validate(coeffs)
    if not report.ok:
        raise InvalidStringError(report)

    R = coeffs.R
    if policy.T is None:
        if not math.isfinite(R):
            raise DiscretizationError("truncation T is required when R = inf")
        T = R
    else:
        T = float(policy.T)
        if math.isfinite(R) and T > R:
            raise DiscretizationError(f"truncation T={T:g} exceeds R={R:g}")
    if not (T > 0 and policy.n >= 1):
        raise DiscretizationError("need T > 0 and n >= 1")

    base = T * (np.arange(policy.n + 1) / policy.n) ** policy.kappa
    special = set()
    for fn in (coeffs.density, coeffs.b):
        for p in fn.breakpoints:
            if 0.0 < p < T:
                special.add(float(p))
    for y, _ in coeffs.atoms:
        if 0.0 < y < T:
            special.add(float(y))
    for y in policy.extra_nodes:
        if 0.0 < y < T:
            special.add(float(y))
    grid = _merge_nodes(base, sorted(special), T)

    n = len(grid) - 1
    h = np.diff(grid)
    node_masses = np.zeros(n + 1)
    dens, b = coeffs.density, coeffs.b
    try:
        dens_int = _cell_integrals(dens, grid, "f")
        dens_mom = _cell_integrals(dens, grid, "yf")
        b_int = _cell_integrals(b, grid, "f")
        b_sq = _cell_integrals(b, grid, "f2")
        b_sq_mom = _cell_integrals(b, grid, "yf2")
    except ValueError as exc:
        raise DiscretizationError(str(exc)) from exc
    bconst = b_int / h
    cell_masses = dens_int - b_sq
    bad = cell_masses < -(STRUCT_TOL * np.maximum(np.abs(dens_int), 1e-300) + 1e-300)
    if np.any(bad):
        k = int(np.argmax(bad))
        raise DiscretizationError(
            f"excess measure negative on cell [{grid[k]:g},{grid[k + 1]:g}): "
            f"{cell_masses[k]:.3e}"
        )
    cell_masses = np.maximum(cell_masses, 0.0)
    pos = cell_masses > 0.0
    centroid = np.where(pos, (dens_mom - b_sq_mom) / np.where(pos, cell_masses, 1.0), 0.0)
    centroid = np.clip(centroid, grid[:-1], grid[1:])
    wr = np.where(pos, cell_masses * (centroid - grid[:-1]) / h, 0.0)
    node_masses[:-1] += cell_masses - wr
    node_masses[1:] += wr

    apos, amass = [], []
    for y, m in coeffs.atoms:
        if y == 0.0:
            continue
        if y >= T:
            continue  # beyond truncation; covered by the tail bound
        idx = int(np.argmin(np.abs(grid - y)))
        node_masses[idx] += m
        apos.append(grid[idx])
        amass.append(m)

    Bcum = np.concatenate(([0.0], np.cumsum(bconst * h)))
    return DiscretizedString(
        grid=grid,
        node_masses=node_masses,
        cell_masses=cell_masses,
        bconst=bconst,
        Bcum=Bcum,
        atom_pos=np.asarray(apos),
        atom_mass=np.asarray(amass),
        alpha0=coeffs.alpha0,
        R=R,
        T=T,
    )


def _cell_integrals(fn: PiecewiseFn, grid, what):
    """Closed-form integrals of f, f^2, y*f or y*f^2 over every grid cell.

    Piece breakpoints are grid nodes, so each cell lies within one piece and
    the per-piece antiderivatives can be evaluated on node slices at once.
    """
    out = np.zeros(len(grid) - 1)
    for p in fn.pieces:
        i0 = int(np.searchsorted(grid, p.lo, side="left"))
        i1 = int(np.searchsorted(grid, min(p.hi, grid[-1]), side="right")) - 1
        if i1 <= i0:
            continue
        edges = grid[i0 : i1 + 1]
        if p.kind == "poly":
            coeffs = list(p.params)
            if what in ("f2", "yf2"):
                coeffs = list(np.convolve(coeffs, coeffs))
            if what in ("yf", "yf2"):
                coeffs = [0.0] + coeffs
            anti = np.array([0.0] + [c / (j + 1) for j, c in enumerate(coeffs)])
            vals = _polyval(anti, edges)
        else:
            c, alpha = p.params
            if what in ("f2", "yf2"):
                c, alpha = c * c, 2 * alpha
            if what in ("yf", "yf2"):
                alpha += 1
            pw = alpha + 1.0
            if pw <= 0.0 and edges[0] == 0.0:
                raise ValueError(f"y^{alpha} is not integrable at 0")
            if pw == 0.0:
                vals = c * np.log(edges)
            else:
                vals = c / pw * np.power(edges, pw)
        out[i0:i1] += np.diff(vals)
    return out


def _polyval(coeffs_ascending, x):
    acc = np.zeros_like(x)
    for c in coeffs_ascending[::-1]:
        acc = acc * x + c
    return acc


def _merge_nodes(base, special, T):
    """Union of base and special nodes, dropping base nodes that crowd specials."""
    tol = 1e-12 * T
    keep = []
    si = 0
    for t in base:
        while si < len(special) and special[si] < t - tol:
            keep.append(special[si])
            si += 1
        if si < len(special) and abs(special[si] - t) <= tol:
            continue  # the special node stands in for this base node
        keep.append(t)
    keep.extend(special[si:])
    grid = np.array(sorted(set(keep)))
    if grid[0] != 0.0:
        grid = np.concatenate(([0.0], grid))
    if abs(grid[-1] - T) > tol:
        grid = np.concatenate((grid, [T]))
    else:
        grid[-1] = T
    return grid


def cumulative_a(d: DiscretizedString, t) -> float:
    """a([0, t)) of the discretized system (origin atom excluded).

    Cell excess masses enter pro-rata within a straddling cell; the b^2 part
    is integrated exactly against the piecewise-constant drift.
    """
    t = float(t)
    if not (0.0 <= t <= d.grid[-1]):
        raise ValueError(f"t={t:g} outside the grid [0, {d.grid[-1]:g}]")
    acc = float(np.sum(d.atom_mass[d.atom_pos < t]))
    h = np.diff(d.grid)
    full = d.grid[1:] <= t
    acc += float(np.sum(d.cell_masses[full]))
    acc += float(np.sum((d.bconst[full] ** 2) * h[full]))
    j = int(np.searchsorted(d.grid, t, side="right")) - 1
    if 0 <= j < d.n_cells and not full[j]:
        frac = (t - d.grid[j]) / h[j]
        acc += d.cell_masses[j] * frac + d.bconst[j] ** 2 * (t - d.grid[j])
    return acc


def cumulative_B(d: DiscretizedString, t) -> float:
    """Exact integral of the discretized drift over [0, t]."""
    t = float(t)
    if not (0.0 <= t <= d.grid[-1]):
        raise ValueError(f"t={t:g} outside the grid [0, {d.grid[-1]:g}]")
    j = int(np.searchsorted(d.grid, t, side="right")) - 1
    j = min(j, d.n_cells - 1) if d.n_cells else 0
    if d.n_cells == 0:
        return 0.0
    return float(d.Bcum[j] + d.bconst[j] * (t - d.grid[j]))

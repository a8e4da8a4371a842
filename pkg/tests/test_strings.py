"""Validation and discretization of coefficient triples."""

import math

import numpy as np
import pytest
from scipy.integrate import quad

from dtnstring import (
    DiscretizationError,
    GridPolicy,
    InvalidStringError,
    PiecewiseFn,
    StringCoefficients,
    cumulative_a,
    cumulative_B,
    discretize,
    validate,
)


def test_validate_constant_drift_pair_passes():
    # a = 2 dy, b = -1: excess density 1 >= 0
    s = StringCoefficients(density=PiecewiseFn.constant(2.0), b=PiecewiseFn.constant(-1.0))
    assert validate(s).ok


def test_validate_zero_string_passes():
    assert validate(StringCoefficients()).ok


def test_validate_pure_drift_without_mass_fails_everywhere():
    s = StringCoefficients(b=PiecewiseFn.constant(1.0))
    report = validate(s)
    assert not report.ok
    assert all(v.code == "excess-negativity" for v in report.violations)
    assert len(report.violations) > 100  # every reference cell


def test_validate_structural_rules():
    bad_atom = StringCoefficients(atoms=((0.5, -1.0),))
    assert any(v.code == "atom-mass" for v in validate(bad_atom).violations)
    deep_poly = StringCoefficients(density=PiecewiseFn.poly([1.0] * 10))
    assert any(v.code == "density-degree" for v in validate(deep_poly).violations)
    sing = StringCoefficients(density=PiecewiseFn.power(1.0, -1.0))
    assert any(v.code == "density-exponent" for v in validate(sing).violations)
    bad_b = StringCoefficients(
        density=PiecewiseFn.constant(100.0), b=PiecewiseFn.power(1.0, -0.5)
    )
    assert any(v.code == "b-exponent" for v in validate(bad_b).violations)


def test_discretize_zero_string_uniform_grid():
    s = StringCoefficients(R=2.0)
    d = discretize(s, GridPolicy(n=4))
    assert np.allclose(d.grid, [0.0, 0.5, 1.0, 1.5, 2.0])
    assert np.all(d.node_masses == 0.0)
    assert d.alpha0 == 0.0


def test_discretize_quadratic_density_masses_match_quadrature():
    # b = 0, so cell masses are the plain density integrals
    s = StringCoefficients(density=PiecewiseFn.power(1.0, 2.0, hi=1.0))
    d = discretize(s, GridPolicy(n=8, T=1.0))
    for k in range(d.n_cells):
        want = quad(lambda y: y * y, d.grid[k], d.grid[k + 1])[0]
        assert d.cell_masses[k] == pytest.approx(want, rel=1e-12)
        assert d.cell_masses[k] == pytest.approx(
            (d.grid[k + 1] ** 3 - d.grid[k] ** 3) / 3.0, rel=1e-12
        )
    assert d.node_masses.sum() == pytest.approx(1.0 / 3.0, rel=1e-12)


def test_discretize_origin_atom_goes_to_alpha0():
    s = StringCoefficients(R=2.0, atoms=((0.0, 0.7),))
    d = discretize(s, GridPolicy(n=4))
    assert d.alpha0 == 0.7
    assert np.all(d.node_masses == 0.0)


def test_discretize_interior_atom_lands_on_node():
    s = StringCoefficients(R=2.0, atoms=((0.77, 0.3),))
    d = discretize(s, GridPolicy(n=4))
    idx = np.argmin(np.abs(d.grid - 0.77))
    assert d.grid[idx] == 0.77
    assert d.node_masses[idx] == pytest.approx(0.3)


def test_discretize_inserts_piece_breakpoints():
    s = StringCoefficients(
        density=PiecewiseFn(
            (
                __import__("dtnstring").pieces.Piece(0.0, 0.3, "poly", (1.0,)),
                __import__("dtnstring").pieces.Piece(0.3, 2.0, "poly", (2.0,)),
            )
        )
    )
    d = discretize(s, GridPolicy(n=7, T=2.0))
    assert 0.3 in d.grid


def test_discretize_errors():
    s = StringCoefficients(R=2.0)
    with pytest.raises(DiscretizationError):
        discretize(s, GridPolicy(n=4, T=3.0))  # truncation beyond R
    with pytest.raises(DiscretizationError):
        discretize(StringCoefficients(), GridPolicy(n=4))  # R = inf needs T
    with pytest.raises(InvalidStringError):
        discretize(
            StringCoefficients(b=PiecewiseFn.constant(1.0)), GridPolicy(n=4, T=1.0)
        )


def test_cumulative_zero_string():
    d = discretize(StringCoefficients(R=2.0), GridPolicy(n=4))
    assert cumulative_a(d, 1.3) == 0.0
    assert cumulative_B(d, 2.0) == 0.0


def test_cumulative_constant_drift():
    s = StringCoefficients(density=PiecewiseFn.constant(1.0), b=PiecewiseFn.constant(-1.0))
    d = discretize(s, GridPolicy(n=16, T=2.0))
    assert cumulative_B(d, 2.0) == pytest.approx(-2.0)
    assert cumulative_B(d, 0.7) == pytest.approx(-0.7)
    # discretized a-mass reproduces the density exactly here (b^2 part)
    assert cumulative_a(d, 1.0) == pytest.approx(1.0, rel=1e-12)


def test_cumulative_quadratic_density():
    s = StringCoefficients(density=PiecewiseFn.power(1.0, 2.0, hi=2.0))
    d = discretize(s, GridPolicy(n=16, T=2.0))
    want = quad(lambda y: y * y, 0, 1.0)[0]
    assert cumulative_a(d, 1.0) == pytest.approx(want, rel=1e-12)
    assert cumulative_a(d, 1.0) == pytest.approx(1.0 / 3.0, rel=1e-12)
    with pytest.raises(ValueError):
        cumulative_a(d, 2.5)


def test_cumulative_converges_under_refinement():
    s = StringCoefficients(
        density=PiecewiseFn.power(2.0, 2.0, hi=math.inf), b=PiecewiseFn.power(1.0, 1.0)
    )
    exact = 2.0 * 1.1 ** 3 / 3.0
    errs = []
    for n in (32, 64, 128, 256):
        d = discretize(s, GridPolicy(n=n, T=2.0))
        errs.append(abs(cumulative_a(d, 1.1) - exact))
    assert errs[-1] < 1e-3
    assert all(b <= a * 1.05 + 1e-14 for a, b in zip(errs, errs[1:]))


def test_discretize_deterministic():
    s = StringCoefficients(
        density=PiecewiseFn.power(1.0, 0.5), b=PiecewiseFn.power(0.5, 0.25)
    )
    pol = GridPolicy(n=333, T=3.0, kappa=2.0)
    d1, d2 = discretize(s, pol), discretize(s, pol)
    for field in ("grid", "node_masses", "cell_masses", "bconst", "Bcum"):
        assert np.array_equal(getattr(d1, field), getattr(d2, field))


def test_grid_clustering_exponent():
    s = StringCoefficients(density=PiecewiseFn.power(1.0, -0.5))
    d = discretize(s, GridPolicy(n=64, T=1.0, kappa=2.0))
    # node spacing grows away from the singular endpoint
    h = np.diff(d.grid)
    assert h[0] < h[-1] / 10

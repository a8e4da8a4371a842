"""Closed-form piece integrals against quadrature, and the piece algebra."""

import math

import numpy as np
import pytest
from scipy.integrate import quad

from dtnstring.pieces import Piece, PiecewiseFn, subtract


@pytest.mark.parametrize(
    "fn,lo,hi",
    [
        (PiecewiseFn.poly([1.0, -0.5, 2.0], hi=3.0), 0.2, 2.7),
        (PiecewiseFn.power(1.3, -0.4, hi=2.0), 0.0, 1.9),
        (PiecewiseFn.power(2.0, 2.0, hi=math.inf), 0.0, 5.0),
        (
            PiecewiseFn(
                (
                    Piece(0.0, 1.0, "power", (1.0, 0.5)),
                    Piece(1.0, 4.0, "poly", (0.5, 0.25)),
                )
            ),
            0.3,
            3.3,
        ),
    ],
)
def test_integrals_match_quadrature(fn, lo, hi):
    for meth, integrand in [
        ("integral", lambda y: fn.value(y)),
        ("integral_square", lambda y: fn.value(y) ** 2),
        ("moment", lambda y: y * fn.value(y)),
        ("moment_square", lambda y: y * fn.value(y) ** 2),
    ]:
        want = quad(integrand, lo, hi, limit=400, epsabs=1e-13, epsrel=1e-12)[0]
        got = getattr(fn, meth)(lo, hi)
        assert got == pytest.approx(want, rel=1e-9, abs=1e-11)


def test_value_outside_pieces_is_zero():
    fn = PiecewiseFn.constant(2.0, hi=1.0)
    assert fn.value(0.5) == 2.0
    assert fn.value(1.5) == 0.0
    assert fn.integral(0.0, 3.0) == pytest.approx(2.0)


def test_power_integrability_guards():
    with pytest.raises(ValueError):
        PiecewiseFn.power(1.0, -1.2).integral(0.0, 1.0)
    # integrable singular exponents are fine
    assert PiecewiseFn.power(1.0, -0.5).integral(0.0, 1.0) == pytest.approx(2.0)


def test_subtract_closed_cases():
    # same-exponent powers cancel exactly (the degenerate string case)
    f = PiecewiseFn.power(1.0, 2.0)
    g = PiecewiseFn.power(1.0, 1.0).squared()
    assert subtract(f, g, hi=10.0).is_zero()

    # poly - poly on aligned intervals
    f = PiecewiseFn.poly([2.0], hi=2.0)
    g = PiecewiseFn.poly([1.0, 0.5], hi=2.0)
    diff = subtract(f, g, hi=2.0)
    ys = np.linspace(0.0, 1.9, 13)
    assert np.allclose(diff.value(ys), f.value(ys) - g.value(ys))

    # integer power folds into the polynomial path
    f = PiecewiseFn.power(3.0, 2.0, hi=2.0)
    g = PiecewiseFn.poly([0.0, 0.0, 1.0], hi=2.0)
    diff = subtract(f, g, hi=2.0)
    assert np.allclose(diff.value(ys), 2.0 * ys ** 2)


def test_subtract_not_closed_returns_none():
    f = PiecewiseFn.power(1.0, 0.7, hi=2.0)
    g = PiecewiseFn.poly([0.3, 0.1], hi=2.0)
    assert subtract(f, g, hi=2.0) is None


def test_from_samples_interpolates():
    x = np.linspace(0.0, 2.0, 9)
    y = x ** 2
    fn = PiecewiseFn.from_samples(x, y)
    mid = 0.5 * (x[:-1] + x[1:])
    assert np.max(np.abs(fn.value(mid) - mid ** 2)) < 0.07  # chord error of y^2
    assert fn.value(x[3]) == pytest.approx(y[3])


def test_piece_validation():
    with pytest.raises(ValueError):
        Piece(1.0, 1.0, "poly", (1.0,))
    with pytest.raises(ValueError):
        Piece(0.0, 1.0, "spline", (1.0,))
    with pytest.raises(ValueError):
        PiecewiseFn((Piece(0.0, 2.0, "poly", (1.0,)), Piece(1.0, 3.0, "poly", (1.0,))))

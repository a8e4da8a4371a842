"""Form conversions: sheared, divergence-like, and the general reduction."""

import math

import numpy as np
import pytest

from dtnstring import (
    ConversionError,
    DivergenceCoefficients,
    GeneralCoefficients,
    PiecewiseFn,
    StringCoefficients,
    divergence_to_standard,
    ek_to_standard,
    example_constant,
    example_one_sided,
    example_power_law,
    reduce_general,
    standard_to_divergence,
    standard_to_ek,
    weyl_k,
)


def test_standard_to_ek_flat_string():
    # a = 2 dy, b = -1 -> excess density 1
    e = example_constant(1.0, 1.0)
    conv = standard_to_ek(e.coefficients)
    assert conv.error_estimate == 0.0
    ys = np.linspace(0.0, 3.0, 7)
    assert np.allclose(conv.coefficients.a_tilde.value(ys), 1.0)
    assert np.allclose(conv.coefficients.b_rep.value(ys), -1.0)


def test_standard_to_ek_symmetric_case():
    s = StringCoefficients(density=PiecewiseFn.power(1.0, 0.5))
    conv = standard_to_ek(s)
    ys = np.linspace(0.1, 2.0, 9)
    assert np.allclose(conv.coefficients.a_tilde.value(ys), s.density.value(ys))


def test_standard_to_ek_degenerate_witness():
    # a = y^2 dy, b = y: the excess measure vanishes identically
    e = example_one_sided("lebesgue")
    conv = standard_to_ek(e.coefficients)
    assert conv.error_estimate == 0.0
    assert conv.coefficients.a_tilde.is_zero()
    assert np.allclose(conv.coefficients.b_rep.value([0.5, 1.5]), [0.5, 1.5])


def test_standard_to_ek_fallback_reports_error():
    # fractional power vs polynomial square leaves the closed algebra
    s = StringCoefficients(
        density=PiecewiseFn.power(2.0, 0.5, hi=2.0), b=PiecewiseFn.poly([0.1, 0.2], hi=2.0)
    )
    conv = standard_to_ek(s)
    assert conv.note
    ys = np.linspace(0.01, 1.9, 23)
    want = s.density.value(ys) - s.b.value(ys) ** 2
    assert np.max(np.abs(conv.coefficients.a_tilde.value(ys) - want)) < 1e-5


def test_ek_roundtrip():
    e = example_power_law(0.5, 1.0, 1.0)
    conv = standard_to_ek(e.coefficients)
    back = ek_to_standard(conv.coefficients)
    ys = np.linspace(0.05, 2.0, 17)
    assert np.allclose(back.coefficients.density.value(ys), e.coefficients.density.value(ys))


def test_divergence_to_standard_identity_scale():
    d = DivergenceCoefficients(
        R_dot=1.0, a_dot=PiecewiseFn.constant(1.0), b_dot=PiecewiseFn.zero()
    )
    conv = divergence_to_standard(d)
    s = conv.coefficients
    assert s.R == pytest.approx(1.0)
    assert np.allclose(s.density.value([0.2, 0.8]), 1.0)
    assert s.b.is_zero()


def test_divergence_to_standard_sqrt_profile():
    # a_dot = sqrt(2y): the scale map is sqrt(2y) and a(y) = y^2
    d = DivergenceCoefficients(
        R_dot=math.inf, a_dot=PiecewiseFn.power(math.sqrt(2.0), 0.5), b_dot=PiecewiseFn.zero()
    )
    conv = divergence_to_standard(d)
    assert conv.error_estimate == 0.0
    ys = np.linspace(0.1, 3.0, 11)
    assert np.allclose(conv.coefficients.density.value(ys), ys ** 2, rtol=1e-12)
    # the defining composition a(sigma(y)) = a_dot(y)^2, checked pointwise
    sigma = np.sqrt(2.0 * ys)
    assert np.allclose(conv.coefficients.density.value(sigma), 2.0 * ys, rtol=1e-12)


def test_divergence_to_standard_constant_skew():
    d = DivergenceCoefficients(
        R_dot=1.0, a_dot=PiecewiseFn.constant(2.0), b_dot=PiecewiseFn.constant(2.0)
    )
    conv = divergence_to_standard(d)
    ys = np.array([0.1, 0.3])
    assert np.allclose(conv.coefficients.density.value(ys), 4.0)
    assert np.allclose(conv.coefficients.b.value(ys), -2.0)


def test_standard_to_divergence_identity():
    s = StringCoefficients(density=PiecewiseFn.constant(1.0))
    conv = standard_to_divergence(s)
    assert np.allclose(conv.coefficients.a_dot.value([0.3, 0.9]), 1.0)
    assert conv.coefficients.b_dot.is_zero()


def test_standard_to_divergence_witness():
    e = example_one_sided("lebesgue")
    conv = standard_to_divergence(e.coefficients)
    assert conv.error_estimate == 0.0
    ys = np.linspace(0.1, 2.0, 9)
    assert np.allclose(conv.coefficients.a_dot.value(ys), np.sqrt(2 * ys), rtol=1e-12)
    assert np.allclose(conv.coefficients.b_dot.value(ys), -np.sqrt(2 * ys), rtol=1e-12)


def test_standard_to_divergence_rejects_zero_density_and_atoms():
    with pytest.raises(ConversionError):
        standard_to_divergence(StringCoefficients(R=2.0))
    with pytest.raises(ConversionError):
        standard_to_divergence(
            StringCoefficients(atoms=((0.5, 1.0),), density=PiecewiseFn.constant(1.0))
        )


def test_roundtrip_standard_divergence_standard():
    for entry in (example_constant(1.0, 1.0), example_power_law(0.5, 1.0, 1.0)):
        conv = standard_to_divergence(entry.coefficients)
        back = divergence_to_standard(conv.coefficients)
        ys = np.linspace(0.01, 2.0, 41)
        assert np.max(
            np.abs(back.coefficients.density.value(ys) - entry.coefficients.density.value(ys))
        ) < 1e-6
        assert np.max(
            np.abs(back.coefficients.b.value(ys) - entry.coefficients.b.value(ys))
        ) < 1e-6


def test_weyl_invariance_through_divergence_form():
    entry = example_power_law(0.5, 1.0, 1.0)
    conv = divergence_to_standard(entry.divergence)
    for xi in (0.5, 1.0, 2.0):
        k1 = weyl_k(entry.coefficients, xi, 1e-6, entry.policy).k
        k2 = weyl_k(conv.coefficients, xi, 1e-6, entry.policy).k
        assert abs(k1 - k2) / abs(k1) < 1e-3


def test_sampled_fallback_divergence():
    # piecewise a_dot outside the single-power class falls back to sampling
    from dtnstring.pieces import Piece

    d = DivergenceCoefficients(
        R_dot=2.0,
        a_dot=PiecewiseFn((Piece(0.0, 1.0, "poly", (1.0,)), Piece(1.0, 2.0, "poly", (2.0,)))),
        b_dot=PiecewiseFn.zero(),
    )
    conv = divergence_to_standard(d)
    assert conv.error_estimate > 0.0
    # scale map: sigma = y on [0,1], then slope 1/2; R = 1.5
    assert conv.coefficients.R == pytest.approx(1.5, abs=1e-3)
    assert conv.coefficients.density.value(0.5) == pytest.approx(1.0, rel=1e-2)
    assert conv.coefficients.density.value(1.25) == pytest.approx(4.0, rel=1e-2)


def test_reduce_general_identity():
    one = PiecewiseFn.constant(1.0)
    zero = PiecewiseFn.zero()
    red = reduce_general(GeneralCoefficients(2.0, one, zero, one, zero, zero), 128)
    assert np.allclose(red.sigma, red.y_nodes, atol=1e-12)
    assert np.allclose(red.tau, 0.0, atol=1e-12)
    ys = np.linspace(0.05, 1.9, 13)
    assert np.allclose(red.coefficients.density.value(ys), 1.0, atol=1e-10)
    assert np.allclose(red.coefficients.b.value(ys), 0.0, atol=1e-12)


def test_reduce_general_constant_vertical_drift():
    # c0 sigma'' + e0 sigma' = 0 with constant e0: sigma = (1 - e^{-eta y})/eta
    eta = 0.7
    one = PiecewiseFn.constant(1.0)
    zero = PiecewiseFn.zero()
    g = GeneralCoefficients(2.0, one, zero, one, zero, PiecewiseFn.constant(eta))
    red = reduce_general(g, 512)
    want = (1.0 - np.exp(-eta * red.y_nodes)) / eta
    assert np.max(np.abs(red.sigma - want)) < 1e-10
    # new second-order coefficient before normalization: c1(sigma(y)) = e^{-2 eta y},
    # so after dividing by it the x-diffusion grows accordingly
    s_mid = red.sigma[len(red.sigma) // 2]
    y_mid = red.y_nodes[len(red.sigma) // 2]
    assert red.coefficients.density.value(s_mid) == pytest.approx(
        math.exp(2 * eta * y_mid), rel=1e-6
    )


def test_reduce_general_constant_horizontal_drift():
    # tau'' = -d2 with constant d2 = delta: tau' = -delta s, a3 = 1 + delta^2 s^2
    delta = 0.6
    one = PiecewiseFn.constant(1.0)
    zero = PiecewiseFn.zero()
    g = GeneralCoefficients(2.0, one, zero, one, PiecewiseFn.constant(delta), zero)
    red = reduce_general(g, 512)
    assert np.max(np.abs(red.tau_prime - (-delta * red.sigma))) < 1e-10
    ys = np.linspace(0.1, 1.8, 7)
    assert np.allclose(red.coefficients.density.value(ys), 1.0 + delta ** 2 * ys ** 2, rtol=1e-6)
    assert np.allclose(red.coefficients.b.value(ys), -delta * ys, rtol=1e-6)


def test_reduce_general_rejects_nonpositive_c0():
    one = PiecewiseFn.constant(1.0)
    zero = PiecewiseFn.zero()
    g = GeneralCoefficients(2.0, one, zero, PiecewiseFn.poly([1.0, -1.0]), zero, zero)
    with pytest.raises(ConversionError):
        reduce_general(g, 64)

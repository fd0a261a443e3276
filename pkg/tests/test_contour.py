import cmath
import math

import numpy as np
import pytest

from quantum_cg.contour import (ContourError, ContourSpec, Detour, QuadratureConfig, fourier_check, integrate,
                                qbeta_coeff, qbeta_shift_ratio, rel45_check, standard_contour, tau_beta_check)
from quantum_cg.qdilog import PoleError, gb_values
from quantum_cg.qfield import qbinomial

TOL = 1e-6


def G(z, ctx):
    return gb_values(np.asarray(z, dtype=complex), ctx)[0]


def test_gaussian_on_real_line():
    v = integrate(lambda t: np.exp(-math.pi * t * t))
    assert abs(v.value - 1) < 1e-12
    assert v.abs_error_bound < 1e-10


def test_shifted_gaussian_line():
    # Cauchy: moving the line does not change an entire integrand
    v = integrate(lambda t: np.exp(-math.pi * t * t), ContourSpec(height=0.7))
    assert abs(v.value - 1) < 1e-12


def test_linearity():
    f = lambda t: np.exp(-math.pi * t * t + 1j * t)
    g = lambda t: np.exp(-2 * t * t)
    a, b = 0.3 - 1.1j, 2.0
    lhs = integrate(lambda t: a * f(t) + b * g(t)).value
    rhs = a * integrate(f).value + b * integrate(g).value
    assert abs(lhs - rhs) < 1e-12


def test_simple_pole_loop():
    # 1/(t - i/4) e^{-t^2}: going above vs below the pole differs by 2 pi i e^{1/16}
    f = lambda t: np.exp(-t * t) / (t - 0.25j)
    above = integrate(f, ContourSpec(0.0, (Detour(0.25j, "above", 0.1),)))
    below = integrate(f, ContourSpec(0.0, (Detour(0.25j, "below", 0.1),)))
    assert abs((below.value - above.value) - 2j * math.pi * math.exp(1 / 16)) < 1e-10


def test_overlapping_detours_rejected():
    with pytest.raises(ContourError):
        ContourSpec(0.0, (Detour(0.0, "above", 0.2), Detour(0.1, "above", 0.2)))


def test_bad_detour_side():
    with pytest.raises(ValueError):
        Detour(0.0, "left", 0.1)


def test_quadrature_config_validation():
    with pytest.raises(ValueError):
        QuadratureConfig(order=2)
    with pytest.raises(ValueError):
        QuadratureConfig(abs_tol=-1)


def test_standard_contour_examples(ctx):
    assert standard_contour([], ctx).detours == ()
    spec = standard_contour([("1/G(a+it)", ctx.Q)], ctx)
    assert len(spec.detours) == 1
    d = spec.detours[0]
    assert abs(d.pole) < 1e-15 and d.side == "above"
    assert d.radius == pytest.approx(min(ctx.b, 1 / ctx.b) / 4)


def test_standard_contour_tau_families(ctx):
    # poles of G(a + it) sit at t = i(a + w): for Re a > 0 they stay off the line
    spec = standard_contour([("G(a+it)", 0.3 * ctx.Q), ("1/G(a+it)", ctx.Q)], ctx)
    assert [d.side for d in spec.detours] == ["above"]


def test_contradictory_sides(ctx):
    with pytest.raises(ContourError):
        standard_contour([("G(a+it)", 0.0), ("1/G(a+it)", ctx.Q)], ctx)


def test_reflection_invariance(ctx):
    Q = ctx.Q
    f = lambda t: np.exp(-math.pi * t * t) / G(Q + 1j * t, ctx)
    spec = standard_contour([("1/G(a+it)", Q)], ctx)
    omega = 0.3
    direct = integrate(f, spec).value
    mirrored = integrate(lambda s: f(omega - s), spec.reflected(omega)).value
    assert abs(direct - mirrored) < 1e-10


# (alpha, beta) as (multiple of Q, imaginary offset)
@pytest.mark.parametrize("a, a_im, b", [(0.3, 0.0, 0.4), (0.25, 0.1, 0.5)])
def test_tau_beta_examples(ctx, a, a_im, b):
    rep = tau_beta_check(a * ctx.Q + 1j * a_im, b * ctx.Q, ctx)
    assert rep.rel_residual < TOL


@pytest.mark.parametrize("beta", [0.0, -0.2])
def test_tau_beta_precondition(ctx, beta):
    with pytest.raises(ValueError):
        tau_beta_check(0.3, beta, ctx)


@pytest.mark.parametrize("variant", ["standard", "reflected"])
def test_rel45_examples(ctx, variant):
    Q = ctx.Q
    rep = rel45_check(0.3 * Q, 0.25 * Q, 0.2 * Q, ctx, variant=variant)
    assert rep.rel_residual < TOL


def test_rel45_real_phase_factor_fails(ctx):
    Q = ctx.Q
    rep = rel45_check(0.3 * Q, 0.25 * Q, 0.2 * Q, ctx, variant="reflected-real-phase")
    assert rep.rel_residual > 0.5


def test_rel45_gamma_zero_rejected(ctx):
    with pytest.raises(ValueError):
        rel45_check(0.3, 0.3, 0.0, ctx)


@pytest.mark.parametrize("r, variant", [(0.0, "first"), (0.7, "second"), (-1.5, "first"), (1.5, "second")])
def test_fourier_examples(ctx, r, variant):
    assert fourier_check(r, ctx, variant=variant).rel_residual < TOL


def test_fourier_product_unimodular(ctx):
    r = 0.4
    a = fourier_check(r, ctx, variant="first").lhs
    b = fourier_check(r, ctx, variant="second").lhs
    assert abs(abs(a * b) - 1) < TOL


def test_fourier_rejects_large_r(ctx):
    with pytest.raises(ValueError):
        fourier_check(5.0, ctx)


def test_qbeta_frozen(ctx):
    v = qbeta_coeff(0.7 + 0.2j, 0.3 + 0.1j, ctx)
    assert abs(v.value - (-0.5987705070162523 + 0.5368850915239936j)) < 1e-11


def test_qbeta_pole_at_tau_zero(ctx):
    with pytest.raises(PoleError):
        qbeta_coeff(0.7, 0.0, ctx)


@pytest.mark.parametrize("t, tau", [(0.7 + 0.2j, 0.3 + 0.1j), (1.3, 0.45 - 0.2j)])
def test_qbeta_symmetry(ctx, t, tau):
    a = qbeta_coeff(t, tau, ctx).value
    b = qbeta_coeff(t, t - tau, ctx).value
    assert abs(a - b) < 1e-12 * abs(a)


@pytest.mark.parametrize("n, k", [(2, 1), (4, 2), (5, 3)])
def test_qbeta_integer_shifts(ctx, n, k):
    num, prod = qbeta_shift_ratio(0.31, 0.17, n, k, ctx)
    assert abs(num - prod) < 1e-9 * abs(prod)
    _, at_zero = qbeta_shift_ratio(1e-3, 5e-4, n, k, ctx)
    exact = qbinomial(n, k).evaluate(ctx.q)
    assert abs(at_zero - exact) < 0.05 * abs(exact)

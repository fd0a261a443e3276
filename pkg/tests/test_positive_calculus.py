import cmath
import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from quantum_cg.positive.calculus import (CoreFunction, DiffOperator, apply, build_operator, core_panel,
                                          core_panel_2d, coproduct, verify_positive_rep, virtual_hw_check,
                                          virtual_lw_check)

XS = np.array([0.3, -0.7 + 0.2j, 1.1 - 0.4j])


def gauss(ctx, r=1.0, s=0.0, n=0, c=1.0):
    return CoreFunction.from_terms(ctx.b, [(c, n, r, s)])


def close(f, g, xs=XS, tol=1e-12):
    a, b = np.asarray(f(xs)), np.asarray(g(xs))
    return np.max(np.abs(a - b)) <= tol * max(1.0, np.max(np.abs(b)))


def test_identity(ctx):
    f = core_panel(ctx)[3]
    assert apply(DiffOperator.identity(1, ctx.b), f).residual(f) == 0


def test_K_multiplies(ctx):
    f = gauss(ctx)
    Kf = apply(build_operator("K", 0.4, ctx), f)
    expected = gauss(ctx, s=-2 * math.pi * ctx.b)
    assert close(Kf, expected)


def test_shift_by_minus_ib(ctx):
    b = ctx.b
    f = gauss(ctx, r=math.pi)
    g = apply(DiffOperator.term(b, 0, -1), f)
    (c, [(n, r, s)]), = g.expanded()
    assert n == 0 and r == math.pi
    assert abs(c - math.exp(math.pi * b * b)) < 1e-12
    assert abs(s - 2j * math.pi * b) < 1e-12
    assert close(g, lambda x: np.exp(-math.pi * (x - 1j * b) ** 2))


def test_shift_polynomial_part(ctx):
    b = ctx.b
    f = gauss(ctx, r=1.0, s=0.5, n=3)
    g = apply(DiffOperator.term(b, 0, 2), f)
    assert close(g, lambda x: f(x + 2j * b))


@pytest.mark.parametrize("lam", [0.0, 0.4, 1.3])
def test_E_F_match_direct_formulas(ctx, lam):
    b, q = ctx.b, ctx.q
    qh = cmath.exp(0.5j * math.pi * b * b)
    pref = 1j / (q - 1 / q)
    f = core_panel(ctx)[2]
    E = lambda x: pref * (qh * np.exp(math.pi * b * (x - lam)) + np.exp(-math.pi * b * (x - lam)) / qh) * f(x + 1j * b)
    F = lambda x: pref * (np.exp(math.pi * b * (x + lam)) / qh + qh * np.exp(-math.pi * b * (x + lam))) * f(x - 1j * b)
    assert close(apply(build_operator("E", lam, ctx), f), E)
    assert close(apply(build_operator("F", lam, ctx), f), F)


@pytest.mark.parametrize("lam", [0.0, 0.4, 1.3])
def test_casimir_scalar(ctx, lam):
    C = build_operator("Casimir_bold", lam, ctx)
    scalar = math.exp(2 * math.pi * ctx.b * lam) + math.exp(-2 * math.pi * ctx.b * lam)
    for f in core_panel(ctx):
        assert apply(C, f).residual(f.scale(scalar)) < 1e-12


def test_KE_relation_on_panel(ctx):
    E, K = build_operator("E", 0.4, ctx), build_operator("K", 0.4, ctx)
    for f in core_panel(ctx):
        lhs = apply(K, apply(E, f))
        rhs = apply(E, apply(K, f)).scale(ctx.q ** 2)
        assert lhs.residual(rhs) < 1e-12


@given(st.lists(st.sampled_from(["E", "F", "K", "Kinv", "smallE"]), min_size=2, max_size=3),
       st.sampled_from([0.0, 0.4, 1.3]))
@settings(max_examples=25, deadline=None)
def test_composition_associative(kinds, lam):
    from quantum_cg import BContext

    ctx = BContext()
    ops = [build_operator(k, lam, ctx) for k in kinds]
    f = core_panel(ctx)[4]
    composed = ops[0]
    for op in ops[1:]:
        composed = composed @ op
    step = f
    for op in reversed(ops):
        step = apply(op, step)
    assert apply(composed, f).residual(step) < 1e-12


@pytest.mark.parametrize("lam", [0.0, 0.4, 1.3])
def test_verify_positive_rep(ctx, lam):
    rep = verify_positive_rep(lam, ctx)
    assert rep.passed, rep.residuals
    assert set(rep.residuals) >= {"KE=q^2EK", "[E,F]", "coproduct [E,F]", "Casimir scalar", "[Casimir,E]",
                                  "virtual highest weight", "virtual lowest weight"}


def test_coproduct_distinct_weights(ctx):
    rep = verify_positive_rep(1.3, ctx, lam2=0.25)
    assert rep.passed, rep.residuals


def test_coproduct_is_separated(ctx):
    # coproducts of separated functions stay separated: every term has one key per variable
    f = core_panel_2d(ctx)[4]
    g = apply(coproduct("E", 0.4, 0.7, ctx), f)
    assert g.nvars == 2
    assert all(len(key) == 2 for key in g.terms)


def test_virtual_highest_weight_examples(ctx):
    b = ctx.b
    assert virtual_hw_check(0.5, gauss(ctx, r=math.pi), ctx) < 1e-12
    assert virtual_hw_check(0.0, gauss(ctx, r=1.0, s=1.0, n=2), ctx) < 1e-12


def test_virtual_lowest_weight(ctx):
    for lam in (0.0, 0.5, 1.3):
        for f in core_panel(ctx):
            assert virtual_lw_check(lam, f, ctx) < 1e-12


def test_F_bracket_at_minus_iQ_half_does_not_vanish(ctx):
    # the F bracket vanishes at +iQ/2 - lam, not at -iQ/2 - lam
    lam = 0.5
    f = gauss(ctx, r=math.pi)
    x0 = -0.5j * ctx.Q - lam
    val = apply(build_operator("F", lam, ctx), f)(x0)
    assert abs(val) > 1e-3 * abs(f(x0 - 1j * ctx.b))


def test_negative_lambda_rejected(ctx):
    with pytest.raises(ValueError):
        build_operator("E", -0.1, ctx)


def test_unknown_kind(ctx):
    with pytest.raises(ValueError):
        build_operator("H", 0.1, ctx)


def test_core_function_needs_decay(ctx):
    with pytest.raises(ValueError):
        gauss(ctx, r=-1.0)
    with pytest.raises(ValueError):
        gauss(ctx, r=1j)


def test_arity_mismatch(ctx):
    with pytest.raises(ValueError):
        apply(coproduct("K", 0.1, 0.2, ctx), core_panel(ctx)[0])

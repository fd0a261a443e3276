import cmath
import math
import warnings

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from quantum_cg.qdilog import (DEFAULT_B, BContext, PoleError, gb, gb_small, gb_values, nearest_pole, sb,
                               sb_values)

# reference values from the 30-digit mpmath path at the default b
GB_REF = [
    (0.5 + 0.3j, 0.23681866888440048 - 0.8825834032050304j),
    (1.2 - 0.4j, -1.1118637358536052 - 1.112921177550183j),
    (0.9 + 0j, -0.07448164865354107 - 0.8641270223730052j),
    (0.3 + 1.5j, 0.18444051537725478 - 0.9829933574795087j),
    (2.5 + 0.2j, 0.16327330621719427 - 1.2763381214157081j),
]
SB_REF = [
    (0.4 + 0.2j, 0.603404023228951 - 0.054945778990707766j),
    (1.0 - 0.3j, 0.8968102131378364 - 0.3231672632094512j),
]


def test_default_b():
    assert DEFAULT_B == pytest.approx(math.sqrt(2 - math.sqrt(2)), abs=1e-16)


def test_context_basics(ctx):
    assert ctx.Q == pytest.approx(ctx.b + 1 / ctx.b)
    assert ctx.q == pytest.approx(cmath.exp(1j * math.pi * ctx.b ** 2))
    assert abs(ctx.zeta) == pytest.approx(1.0)


@pytest.mark.parametrize("b", [0.0, -0.3, 1.0, 1.7, 0.5])
def test_context_rejects(b):
    with pytest.raises(ValueError):
        BContext(b=b)


def test_context_warns_near_rational():
    with pytest.warns(UserWarning):
        BContext(b=math.sqrt(0.5) + 1e-15)


def test_precision_floor():
    with pytest.raises(ValueError):
        BContext(dps=10)


@pytest.mark.parametrize("z, ref", GB_REF)
def test_gb_reference(ctx, z, ref):
    v = gb(z, ctx)
    assert abs(complex(v.value) - ref) < 1e-12
    assert v.abs_error_bound >= abs(complex(v.value) - ref)


@pytest.mark.parametrize("z, ref", SB_REF)
def test_sb_reference(ctx, z, ref):
    assert abs(complex(sb(z, ctx).value) - ref) < 1e-12


def test_mp_path_agrees(ctx, ctx30):
    for z, _ in GB_REF[:2]:
        hi = gb(z, ctx30)
        assert hi.abs_error_bound < 1e-20
        assert abs(complex(hi.value) - complex(gb(z, ctx).value)) < 1e-12


def test_sb_half_Q_is_one(ctx):
    assert abs(complex(sb(ctx.Q / 2, ctx).value) - 1) < 1e-13


def test_unit_modulus_on_middle_line(ctx):
    xs = np.linspace(-3, 3, 25)
    vals, _ = sb_values(ctx.Q / 2 + 1j * xs, ctx)
    assert np.max(np.abs(np.abs(vals) - 1)) < 1e-10


def test_vectorised_matches_scalar(ctx):
    zs = np.array([z for z, _ in GB_REF])
    vals, errs = gb_values(zs, ctx, with_error=True)
    assert vals.shape == zs.shape == errs.shape
    for z, v in zip(zs, vals):
        assert v == pytest.approx(complex(gb(z, ctx).value), abs=1e-14)


@pytest.mark.parametrize("z", [0, -0.0 + 0j, -DEFAULT_B, -1 / DEFAULT_B, -2 * DEFAULT_B - 1 / DEFAULT_B])
def test_gb_poles_raise(ctx, z):
    with pytest.raises(PoleError):
        gb(z, ctx)


def test_nearest_pole(ctx):
    b = ctx.b
    dist, n, m = nearest_pole(-b - 1 / b + 0.01, b)
    assert (n, m) == (1, 1)
    assert dist == pytest.approx(0.01)


def test_simple_pole_at_zero(ctx):
    eps = np.array([1e-2, 3e-3, 1e-3, 3e-4]) * (1 + 0.5j)
    scaled = np.abs(gb_values(eps, ctx)[0]) * np.abs(eps)
    assert np.all(scaled > 0.05) and np.all(scaled < 20)
    # residue 1/(2 pi)
    assert abs(scaled[-1] - 1 / (2 * math.pi)) < 1e-3


def test_simple_zero_at_Q(ctx):
    eps = np.array([1e-2, 1e-3, 1e-4]) * (0.3 + 1j)
    vals, _ = gb_values(ctx.Q + eps, ctx)
    ratio = vals / eps
    # first order: G_b(Q + e) = -2 pi e + O(e^2); the O(e) drift shrinks tenfold per step
    d1, d2 = abs(ratio[0] - ratio[1]), abs(ratio[1] - ratio[2])
    assert 8 < d1 / d2 < 12
    extrapolated = (10 * ratio[2] - ratio[1]) / 9
    assert abs(extrapolated + 2 * math.pi) < 1e-5


def test_asymptotics(ctx):
    up = complex(gb(ctx.Q / 2 + 8j, ctx).value)
    assert abs(up - ctx.zeta.conjugate()) < 1e-8
    z = ctx.Q / 2 - 8j
    down = complex(gb(z, ctx).value)
    expected = ctx.zeta * cmath.exp(1j * math.pi * z * (z - ctx.Q))
    assert abs(down - expected) / abs(expected) < 1e-8


def test_gb_small_modulus(ctx):
    for r in (0.37, -1.2, 2.0):
        assert abs(abs(complex(gb_small(math.exp(2 * math.pi * ctx.b * r), ctx).value)) - 1) < 1e-12


def test_gb_small_dual_conjugate(ctx):
    x = math.exp(2 * math.pi * ctx.b * 0.5)
    g = complex(gb_small(x, ctx).value)
    assert abs(g * g.conjugate() - 1) < 1e-12


zs = st.builds(complex, st.floats(0.1, 1.9), st.floats(-2.0, 2.0))


@given(zs)
@settings(max_examples=40, deadline=None)
def test_reflection_property(z):
    c = BContext()
    lhs = complex(gb(z, c).value) * complex(gb(c.Q - z, c).value)
    rhs = cmath.exp(1j * math.pi * z * (z - c.Q))
    assert abs(lhs - rhs) / abs(rhs) < 1e-9


@given(zs)
@settings(max_examples=40, deadline=None)
def test_b_shift_equation(z):
    c = BContext()
    lhs = complex(sb(z + c.b, c).value)
    rhs = 2 * cmath.sin(math.pi * c.b * z) * complex(sb(z, c).value)
    assert abs(lhs - rhs) <= 1e-9 * max(abs(lhs), abs(rhs))


@given(zs)
@settings(max_examples=30, deadline=None)
def test_conjugation(z):
    c = BContext()
    lhs = complex(sb(z, c).value).conjugate()
    rhs = 1 / complex(sb(c.Q - z.conjugate(), c).value)
    assert abs(lhs - rhs) / abs(rhs) < 1e-9


@given(zs)
@settings(max_examples=25, deadline=None)
def test_self_duality(z):
    c = BContext()
    d = c.dual()
    a = gb(z, c)
    b = gb(z, d)
    assert abs(complex(a.value) - complex(b.value)) <= max(a.abs_error_bound + b.abs_error_bound, 1e-11)


def test_dual_context_requires_flag():
    c = BContext()
    assert c.dual().b == pytest.approx(1 / c.b)
    with pytest.raises(ValueError):
        BContext(b=1 / c.b)

import cmath
import math
from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from quantum_cg.qfield import QRat, qbinomial, qfactorial, qnumber, qnumber_numeric

q = QRat.monomial(1)


def laurent(d):
    return QRat.from_laurent(d)


@pytest.mark.parametrize("z, expected", [
    (0, {}),
    (1, {0: 1}),
    (2, {1: 1, -1: 1}),
    (-3, {2: -1, 0: -1, -2: -1}),
])
def test_qnumber(z, expected):
    assert qnumber(z) == laurent(expected)


def test_qnumber_matches_rational_definition():
    for z in range(-6, 7):
        direct = (q ** z - q ** (-z)) / (q - q.inverse())
        assert qnumber(z) == direct


@pytest.mark.parametrize("n, expected", [
    (0, {0: 1}),
    (2, {1: 1, -1: 1}),
    (3, {3: 1, 1: 2, -1: 2, -3: 1}),
])
def test_qfactorial(n, expected):
    assert qfactorial(n) == laurent(expected)


@pytest.mark.parametrize("n, k, expected", [
    (5, -1, {}),
    (4, 2, {4: 1, 2: 1, 0: 2, -2: 1, -4: 1}),
    (3, 4, {}),
    (7, 0, {0: 1}),
])
def test_qbinomial(n, k, expected):
    assert qbinomial(n, k) == laurent(expected)


def test_qbinomial_string_form():
    assert str(qbinomial(4, 2)) == "q^4 + q^2 + 2 + q^-2 + q^-4"
    assert str(-q) == "-q"


@pytest.mark.parametrize("n", range(0, 11))
def test_qbinomial_symmetry_and_q1_limit(n):
    for k in range(n + 1):
        c = qbinomial(n, k)
        assert c == qbinomial(n, n - k)
        assert c.is_laurent
        # at q = 1 the balanced binomial is the ordinary one
        assert sum(c.laurent_coeffs().values()) == math.comb(n, k)


def test_pascal_identity():
    for t in range(13):
        for r in range(t + 1):
            lhs = q ** (t - r) * qbinomial(t, r) + q ** (-r - 1) * qbinomial(t, r + 1)
            assert lhs == qbinomial(t + 1, r + 1)


def test_generalized_pascal_identity():
    for S in range(13):
        for k in range(10):
            for r in range(k + 2):
                lhs = qnumber(S - r + 1) * qbinomial(k, r - 1) + qnumber(S - k - r) * qbinomial(k, r)
                assert lhs == qnumber(S - k) * qbinomial(k + 1, r)


def test_field_operations_and_normal_form():
    a = q + 1
    b = q - 1
    c = a / b
    assert not c.is_laurent
    assert c * b == a
    assert (a * a - b * b) / (4 * q) == QRat(1)
    assert QRat(Fraction(1, 3)) * 3 == QRat(1)
    with pytest.raises(ZeroDivisionError):
        QRat(0).inverse()


def test_poly_in_qZq():
    assert (q + 3 * q ** 2).is_poly_in_qZq()
    assert not (1 + q).is_poly_in_qZq()
    assert not q.inverse().is_poly_in_qZq()


def test_big_coefficients_exact():
    # coefficients beyond 64 bits must stay exact
    c = qbinomial(60, 30)
    assert sum(c.laurent_coeffs().values()) == math.comb(60, 30)


small = st.integers(-3, 3)
polys = st.dictionaries(st.integers(-4, 4), st.integers(-5, 5).filter(bool), min_size=1, max_size=4).map(laurent)


@given(polys, polys, polys)
@settings(max_examples=60, deadline=None)
def test_ring_axioms(a, b, c):
    assert (a + b) * c == a * c + b * c
    assert (a * b) * c == a * (b * c)
    assert a - a == QRat(0)


@given(polys, polys)
@settings(max_examples=60, deadline=None)
def test_division_roundtrip(a, b):
    if not b.is_zero:
        assert (a / b) * b == a


@given(polys, st.complex_numbers(min_magnitude=0.5, max_magnitude=2.0))
@settings(max_examples=40, deadline=None)
def test_evaluate_is_homomorphism(a, qv):
    b = a * a + q
    assert cmath.isclose(b.evaluate(qv), a.evaluate(qv) ** 2 + qv, rel_tol=1e-9, abs_tol=1e-9)


def test_qnumber_numeric_examples(ctx):
    assert abs(qnumber_numeric(1, ctx) - 1) < 1e-15
    assert abs(qnumber_numeric(2, ctx) - 2 * math.cos(math.pi * ctx.b ** 2)) < 1e-14


@pytest.mark.parametrize("w", [0.3, -1.2 + 0.4j, 2.5j])
def test_qnumber_numeric_dual_shift(ctx, w):
    b2 = ctx.b ** 2
    lhs = qnumber_numeric(1 / b2 + w, ctx)
    assert abs(lhs + qnumber_numeric(w, ctx)) < 1e-12 * max(1, abs(lhs))


def test_qnumber_numeric_agrees_with_exact(ctx):
    for n in range(-20, 21):
        assert abs(qnumber_numeric(n, ctx) - qnumber(n).evaluate(ctx.q)) < 1e-12

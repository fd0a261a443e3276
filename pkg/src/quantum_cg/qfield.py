"""Exact arithmetic in the rational function field Q(q).

Elements are stored as ``q**e * N(q) / D(q)`` where ``N`` and ``D`` are
polynomials with rational coefficients, neither divisible by ``q``,
``gcd(N, D) = 1`` and ``D(0) = 1``.  This normal form makes equality a
structural comparison.  Polynomial gcd is delegated to FLINT.
"""
from __future__ import annotations

import cmath
from fractions import Fraction
from functools import lru_cache
from numbers import Integral, Rational

import flint

__all__ = [
    "QRat",
    "q",
    "qnumber",
    "qfactorial",
    "qbinomial",
    "qnumber_numeric",
]

_ONE = flint.fmpq_poly([1])
_ZERO = flint.fmpq_poly([])


def _valuation(p):
    cs = p.coeffs()
    for i, c in enumerate(cs):
        if c != 0:
            return i
    return 0


def _shift_down(p, v):
    if v == 0:
        return p
    return flint.fmpq_poly(p.coeffs()[v:])


def _to_fraction(c) -> Fraction:
    return Fraction(int(c.p), int(c.q))


class QRat:
    """An exact element of Q(q)."""

    __slots__ = ("_e", "_num", "_den", "_hash")

    def __init__(self, value=0):
        if isinstance(value, QRat):
            self._e, self._num, self._den = value._e, value._num, value._den
        elif isinstance(value, (Integral, Rational)):
            v = Fraction(value)
            self._e = 0
            self._num = flint.fmpq_poly([flint.fmpq(v.numerator, v.denominator)]) if v else _ZERO
            self._den = _ONE
        else:
            raise TypeError(f"cannot build QRat from {type(value).__name__}")
        self._hash = None

    @classmethod
    def _raw(cls, e, num, den):
        obj = cls.__new__(cls)
        obj._e, obj._num, obj._den, obj._hash = e, num, den, None
        return obj

    @classmethod
    def _make(cls, e: int, num, den) -> "QRat":
        if den == 0:
            raise ZeroDivisionError("QRat denominator vanished")
        if num == 0:
            return cls._raw(0, _ZERO, _ONE)
        vn = _valuation(num)
        vd = _valuation(den)
        num = _shift_down(num, vn)
        den = _shift_down(den, vd)
        e = e + vn - vd
        if den.degree() > 0:
            g = num.gcd(den)
            if g.degree() > 0:
                num = num // g
                den = den // g
        c = den.coeffs()[0]
        if c != 1:
            num = num / c
            den = den / c
        return cls._raw(e, num, den)

    @classmethod
    def from_laurent(cls, coeffs: dict) -> "QRat":
        """Build from a mapping ``exponent -> rational coefficient``."""
        coeffs = {k: Fraction(v) for k, v in coeffs.items() if v != 0}
        if not coeffs:
            return cls(0)
        lo = min(coeffs)
        hi = max(coeffs)
        cs = [flint.fmpq(0)] * (hi - lo + 1)
        for k, v in coeffs.items():
            cs[k - lo] = flint.fmpq(v.numerator, v.denominator)
        return cls._make(lo, flint.fmpq_poly(cs), _ONE)

    @classmethod
    def monomial(cls, k: int, c=1) -> "QRat":
        return cls.from_laurent({k: c})

    # structure
    @property
    def is_zero(self) -> bool:
        return self._num == 0

    @property
    def is_laurent(self) -> bool:
        """True when the element is a Laurent polynomial in q."""
        return self._den == _ONE

    def laurent_coeffs(self) -> dict[int, Fraction]:
        """Return ``{exponent: coefficient}``; only valid for Laurent polynomials."""
        if not self.is_laurent:
            raise ValueError("not a Laurent polynomial")
        out = {}
        for i, c in enumerate(self._num.coeffs()):
            if c != 0:
                out[self._e + i] = _to_fraction(c)
        return out

    def is_poly_in_qZq(self) -> bool:
        """True for polynomials in q with integer coefficients and zero constant term."""
        if not self.is_laurent:
            return False
        cs = self.laurent_coeffs()
        return all(k >= 1 and c.denominator == 1 for k, c in cs.items())

    def numerator_denominator(self):
        """Return (min_exp, numerator coeffs, denominator coeffs) as Fractions."""
        return (
            self._e,
            [_to_fraction(c) for c in self._num.coeffs()],
            [_to_fraction(c) for c in self._den.coeffs()],
        )

    # arithmetic
    @staticmethod
    def _coerce(other):
        if isinstance(other, QRat):
            return other
        if isinstance(other, (Integral, Rational)):
            return QRat(other)
        return NotImplemented

    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        if self.is_zero:
            return other
        if other.is_zero:
            return self
        e = min(self._e, other._e)
        a = self._num * other._den
        c = other._num * self._den
        if self._e > e:
            a = a * flint.fmpq_poly([0] * (self._e - e) + [1])
        if other._e > e:
            c = c * flint.fmpq_poly([0] * (other._e - e) + [1])
        return QRat._make(e, a + c, self._den * other._den)

    __radd__ = __add__

    def __neg__(self):
        return QRat._raw(self._e, -self._num, self._den)

    def __sub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return self + (-other)

    def __rsub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return other + (-self)

    def __mul__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        if self.is_zero or other.is_zero:
            return QRat(0)
        if self._den == _ONE and other._den == _ONE:
            return QRat._raw(self._e + other._e, self._num * other._num, _ONE)
        return QRat._make(self._e + other._e, self._num * other._num, self._den * other._den)

    __rmul__ = __mul__

    def inverse(self) -> "QRat":
        if self.is_zero:
            raise ZeroDivisionError("inverse of zero in Q(q)")
        return QRat._make(-self._e, self._den, self._num)

    def __truediv__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return self * other.inverse()

    def __rtruediv__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return other * self.inverse()

    def __pow__(self, k: int):
        if not isinstance(k, Integral):
            raise TypeError("only integer powers")
        if k < 0:
            return self.inverse() ** (-k)
        if self.is_zero:
            return QRat(1) if k == 0 else QRat(0)
        return QRat._make(self._e * k, self._num ** k, self._den ** k)

    def __eq__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return False
        return self._e == other._e and self._num == other._num and self._den == other._den

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((self._e, tuple(str(c) for c in self._num.coeffs()),
                               tuple(str(c) for c in self._den.coeffs())))
        return self._hash

    def __bool__(self):
        return not self.is_zero

    # evaluation
    def evaluate(self, qv: complex) -> complex:
        """Evaluate at a numeric value of q."""
        def peval(p):
            acc = 0j
            for c in reversed(p.coeffs()):
                acc = acc * qv + float(_to_fraction(c))
            return acc
        return qv ** self._e * peval(self._num) / peval(self._den)

    def evaluate_mp(self, qv):
        """Evaluate with mpmath numbers (qv an mpc)."""
        import mpmath

        def peval(p):
            acc = mpmath.mpc(0)
            for c in reversed(p.coeffs()):
                acc = acc * qv + mpmath.mpf(int(c.p)) / int(c.q)
            return acc
        return qv ** self._e * peval(self._num) / peval(self._den)

    # printing
    @staticmethod
    def _laurent_str(e, cs) -> str:
        parts = []
        for i in range(len(cs) - 1, -1, -1):
            c = cs[i]
            if c == 0:
                continue
            k = e + i
            if k == 0:
                mono = ""
            elif k == 1:
                mono = "q"
            else:
                mono = f"q^{k}"
            mag = abs(c)
            if mono and mag == 1:
                body = mono
            elif mono:
                body = f"{mag}*{mono}"
            else:
                body = str(mag)
            sign = "-" if c < 0 else "+"
            parts.append((sign, body))
        if not parts:
            return "0"
        first_sign, first = parts[0]
        out = ("-" if first_sign == "-" else "") + first
        for sign, body in parts[1:]:
            out += f" {sign} {body}"
        return out

    def __str__(self):
        e, nc, dc = self.numerator_denominator()
        if self.is_zero:
            return "0"
        if self.is_laurent:
            return self._laurent_str(e, nc)
        return f"({self._laurent_str(e, nc)})/({self._laurent_str(0, dc)})"

    def __repr__(self):
        return f"QRat({self})"

    def to_json(self) -> dict:
        e, nc, dc = self.numerator_denominator()
        out = {"min_degree": e, "coeffs": [str(c) for c in nc]}
        if not self.is_laurent:
            out["denominator"] = [str(c) for c in dc]
        return out


q = QRat.monomial(1)


@lru_cache(maxsize=None)
def qnumber(z: int) -> QRat:
    """Balanced q-number [z] = (q^z - q^-z)/(q - q^-1)."""
    z = int(z)
    if z == 0:
        return QRat(0)
    if z < 0:
        return -qnumber(-z)
    return QRat.from_laurent({z - 1 - 2 * j: 1 for j in range(z)})


@lru_cache(maxsize=None)
def qfactorial(n: int) -> QRat:
    if n < 0:
        raise ValueError(f"qfactorial needs n >= 0, got {n}")
    out = QRat(1)
    for j in range(1, n + 1):
        out = out * qnumber(j)
    return out


@lru_cache(maxsize=None)
def qbinomial(n: int, k: int) -> QRat:
    """Balanced q-binomial; zero outside 0 <= k <= n."""
    if k < 0 or n < 0 or k > n:
        return QRat(0)
    k = min(k, n - k)
    # product form keeps the intermediate values Laurent polynomials
    num = QRat(1)
    for j in range(k):
        num = num * qnumber(n - j)
    return num / qfactorial(k)


def qnumber_numeric(z: complex, ctx) -> complex:
    """[z]_q at q = exp(i pi b^2), for arbitrary complex z."""
    if getattr(ctx, "dps", 15) > 15:
        import mpmath

        with mpmath.workdps(ctx.dps):
            qq = mpmath.exp(1j * mpmath.pi * mpmath.mpf(ctx.b) ** 2)
            z = mpmath.mpc(z)
            return (qq ** z - qq ** (-z)) / (qq - 1 / qq)
    h = 1j * cmath.pi * ctx.b * ctx.b
    return (cmath.exp(h * z) - cmath.exp(-h * z)) / (cmath.exp(h) - cmath.exp(-h))

"""Exact shift/multiplication calculus on the core space.

A core function is a finite sum of terms ``c * prod_j x_j^n_j exp(-r_j x_j^2 + s_j x_j)``
with Re r_j > 0.  An operator is a finite sum of
``c * exp(2 pi b sum_j a_j x_j) * T_h`` where ``(T_h f)(x) = f(x + i b h)``.
Slopes ``a_j`` are exact fractions (multiples of b), shifts ``h_j`` are integers
(multiples of ib), so canonical forms merge by exact keys.

Convention: e^{-2 pi b p} acts as T_{+1}, i.e. f(x) -> f(x + ib), since p = (1/2 pi i) d/dx.
"""
from __future__ import annotations

import cmath
import math
from dataclasses import dataclass, field
from fractions import Fraction
from math import comb

import numpy as np

from ..qdilog import BContext

__all__ = [
    "DiffOperator",
    "CoreFunction",
    "apply",
    "build_operator",
    "coproduct",
    "core_panel",
    "core_panel_2d",
    "virtual_hw_check",
    "virtual_lw_check",
    "verify_positive_rep",
    "PositiveRepReport",
]


# ------------------------------------------------------------------ operators


class DiffOperator:
    """Finite exponential-shift operator on functions of ``nvars`` variables."""

    __slots__ = ("nvars", "b", "terms")

    def __init__(self, nvars: int, b: float, terms: dict | None = None):
        self.nvars = nvars
        self.b = float(b)
        self.terms = {}
        for (a, h), c in (terms or {}).items():
            a = tuple(Fraction(x) for x in a)
            h = tuple(int(x) for x in h)
            if len(a) != nvars or len(h) != nvars:
                raise ValueError("term arity does not match nvars")
            if c != 0:
                self.terms[(a, h)] = self.terms.get((a, h), 0) + complex(c)

    @classmethod
    def identity(cls, nvars: int, b: float) -> "DiffOperator":
        z = (Fraction(0),) * nvars
        return cls(nvars, b, {(z, (0,) * nvars): 1.0})

    @classmethod
    def term(cls, b, slope, shift, coeff=1.0) -> "DiffOperator":
        slope = tuple(slope) if isinstance(slope, (tuple, list)) else (slope,)
        shift = tuple(shift) if isinstance(shift, (tuple, list)) else (shift,)
        return cls(len(slope), b, {(slope, shift): coeff})

    def _check(self, other):
        if not isinstance(other, DiffOperator):
            raise TypeError("expected a DiffOperator")
        if other.nvars != self.nvars or other.b != self.b:
            raise ValueError("operators act on different spaces")

    def __add__(self, other):
        self._check(other)
        out = dict(self.terms)
        for k, c in other.terms.items():
            out[k] = out.get(k, 0) + c
        return DiffOperator(self.nvars, self.b, out)

    def __neg__(self):
        return DiffOperator(self.nvars, self.b, {k: -c for k, c in self.terms.items()})

    def __sub__(self, other):
        return self + (-other)

    def scale(self, c: complex) -> "DiffOperator":
        return DiffOperator(self.nvars, self.b, {k: c * v for k, v in self.terms.items()})

    def __rmul__(self, c):
        return self.scale(c)

    def compose(self, other: "DiffOperator") -> "DiffOperator":
        """self o other: apply ``other`` first."""
        self._check(other)
        b2 = self.b * self.b
        out: dict = {}
        for (a1, h1), c1 in self.terms.items():
            for (a2, h2), c2 in other.terms.items():
                # moving e^{2 pi b a2 x} through T_{h1} gives q^{2 a2 . h1}
                dot = sum(float(x) * y for x, y in zip(a2, h1))
                c = c1 * c2 * cmath.exp(2j * math.pi * b2 * dot)
                key = (tuple(x + y for x, y in zip(a1, a2)), tuple(x + y for x, y in zip(h1, h2)))
                out[key] = out.get(key, 0) + c
        return DiffOperator(self.nvars, self.b, out)

    def __matmul__(self, other):
        return self.compose(other)

    def tensor(self, other: "DiffOperator") -> "DiffOperator":
        """Operator on (x, y): self acting on x, other on y."""
        if other.b != self.b:
            raise ValueError("operators built with different b")
        out = {}
        for (a1, h1), c1 in self.terms.items():
            for (a2, h2), c2 in other.terms.items():
                out[(a1 + a2, h1 + h2)] = c1 * c2
        return DiffOperator(self.nvars + other.nvars, self.b, out)

    def max_coeff(self) -> float:
        return max((abs(c) for c in self.terms.values()), default=0.0)

    def residual(self, other: "DiffOperator") -> float:
        """Coefficientwise difference relative to max(1, largest coefficient)."""
        d = self - other
        scale = max(1.0, self.max_coeff(), other.max_coeff())
        return d.max_coeff() / scale

    def __repr__(self):
        return f"DiffOperator(nvars={self.nvars}, terms={len(self.terms)})"


# -------------------------------------------------------------- core functions


@dataclass(frozen=True)
class _VarKey:
    """Per-variable data of a term; s = s0 - 2 i b r j + 2 pi b l."""

    n: int
    r: complex
    s0: complex
    j: int = 0
    l: Fraction = Fraction(0)

    def s(self, b: float) -> complex:
        return self.s0 - 2j * b * self.r * self.j + 2 * math.pi * b * float(self.l)


class CoreFunction:
    """Element of the core space: sum of coeff * prod_j x_j^n exp(-r x_j^2 + s x_j)."""

    __slots__ = ("nvars", "b", "terms")

    def __init__(self, nvars: int, b: float, terms: dict | None = None):
        self.nvars = nvars
        self.b = float(b)
        self.terms = {}
        for key, c in (terms or {}).items():
            if len(key) != nvars:
                raise ValueError("term arity does not match nvars")
            for vk in key:
                if not vk.r.real > 0:
                    raise ValueError("core functions need Re(r) > 0 in every term")
            if c != 0:
                self.terms[key] = self.terms.get(key, 0) + complex(c)

    @classmethod
    def from_terms(cls, b: float, terms) -> "CoreFunction":
        """One-variable constructor from (coeff, n, r, s) tuples."""
        out = {}
        for c, n, r, s in terms:
            key = (_VarKey(int(n), complex(r), complex(s)),)
            out[key] = out.get(key, 0) + complex(c)
        return cls(1, b, out)

    def product(self, other: "CoreFunction") -> "CoreFunction":
        """Separated product f(x) g(y)."""
        out = {}
        for k1, c1 in self.terms.items():
            for k2, c2 in other.terms.items():
                out[k1 + k2] = c1 * c2
        return CoreFunction(self.nvars + other.nvars, self.b, out)

    def __add__(self, other):
        out = dict(self.terms)
        for k, c in other.terms.items():
            out[k] = out.get(k, 0) + c
        return CoreFunction(self.nvars, self.b, out)

    def __neg__(self):
        return CoreFunction(self.nvars, self.b, {k: -c for k, c in self.terms.items()})

    def __sub__(self, other):
        return self + (-other)

    def scale(self, c) -> "CoreFunction":
        return CoreFunction(self.nvars, self.b, {k: c * v for k, v in self.terms.items()})

    def max_coeff(self) -> float:
        return max((abs(c) for c in self.terms.values()), default=0.0)

    def residual(self, other: "CoreFunction") -> float:
        d = self - other
        scale = max(1.0, self.max_coeff(), other.max_coeff())
        return d.max_coeff() / scale

    def expanded(self):
        """Terms as (coeff, [(n, r, s) per variable]) with numeric s."""
        return [(c, [(vk.n, vk.r, vk.s(self.b)) for vk in key]) for key, c in self.terms.items()]

    def __call__(self, *xs):
        if len(xs) != self.nvars:
            raise ValueError(f"expected {self.nvars} arguments")
        xs = [np.asarray(x, dtype=complex) for x in xs]
        total = 0j
        for c, data in self.expanded():
            v = c
            for x, (n, r, s) in zip(xs, data):
                v = v * x**n * np.exp(-r * x * x + s * x)
            total = total + v
        return total


def _shift_term(key, c, var, h, b):
    """Apply f(x) -> f(x + i b h) in variable ``var`` to one term."""
    vk = key[var]
    shift = 1j * b * h
    s = vk.s(b)
    base = c * np.exp(-vk.r * shift * shift + s * shift)
    out = []
    for k in range(vk.n + 1):
        coef = base * comb(vk.n, k) * shift ** (vk.n - k)
        nk = _VarKey(k, vk.r, vk.s0, vk.j + h, vk.l)
        out.append((key[:var] + (nk,) + key[var + 1:], coef))
    return out


def apply(op: DiffOperator, f: CoreFunction) -> CoreFunction:
    """Exact term-by-term action (shift first, then exponential multiplication)."""
    if op.nvars != f.nvars:
        raise ValueError("operator and function have different numbers of variables")
    if op.b != f.b:
        raise ValueError("operator and function built with different b")
    b = f.b
    out: dict = {}
    for (slope, shift), oc in op.terms.items():
        for key, c in f.terms.items():
            items = [(key, c * oc)]
            for v, h in enumerate(shift):
                if h:
                    items = [t for k, cc in items for t in _shift_term(k, cc, v, h, b)]
            for k, cc in items:
                nk = tuple(
                    _VarKey(vk.n, vk.r, vk.s0, vk.j, vk.l + a) if a else vk for vk, a in zip(k, slope)
                )
                out[nk] = out.get(nk, 0) + cc
    return CoreFunction(f.nvars, b, out)


# --------------------------------------------------------------- generators

KINDS = ("E", "F", "K", "Kinv", "smallE", "smallF", "Casimir_bold")


def build_operator(kind: str, lam: float, ctx: BContext | None = None) -> DiffOperator:
    """One-variable generators of the positive representation with weight lam.

    E = (i/(q-q^-1)) (q^{1/2} e^{pi b (x-lam)} + q^{-1/2} e^{-pi b (x-lam)}) T_{+1}
    F = (i/(q-q^-1)) (q^{-1/2} e^{pi b (x+lam)} + q^{1/2} e^{-pi b (x+lam)}) T_{-1}
    K = e^{-2 pi b x};  the bold Casimir is f e - q K - q^-1 K^-1.
    """
    ctx = ctx or BContext()
    if lam < 0:
        raise ValueError("lambda must be nonnegative")
    b = ctx.b
    qh = cmath.exp(0.5j * math.pi * b * b)
    q = qh * qh
    pref = 1j / (q - 1 / q)
    half = Fraction(1, 2)
    el = math.exp(math.pi * b * lam)

    def T(a, h, c):
        return DiffOperator.term(b, a, h, c)

    if kind in ("E", "smallE"):
        c = pref if kind == "E" else 1.0
        return T(half, 1, c * qh / el) + T(-half, 1, c * el / qh)
    if kind in ("F", "smallF"):
        c = pref if kind == "F" else 1.0
        return T(half, -1, c * el / qh) + T(-half, -1, c * qh / el)
    if kind == "K":
        return T(-1, 0, 1.0)
    if kind == "Kinv":
        return T(1, 0, 1.0)
    if kind == "Casimir_bold":
        fe = build_operator("smallF", lam, ctx) @ build_operator("smallE", lam, ctx)
        return fe - build_operator("K", lam, ctx).scale(q) - build_operator("Kinv", lam, ctx).scale(1 / q)
    raise ValueError(f"unknown operator kind {kind!r}")


def coproduct(kind: str, lam1: float, lam2: float, ctx: BContext | None = None) -> DiffOperator:
    """Two-variable coproducts D(E)=E(x)1+K(x)E, D(F)=1(x)F+F(x)K^-1, D(K)=K(x)K."""
    ctx = ctx or BContext()
    one = DiffOperator.identity(1, ctx.b)
    g1 = lambda k: build_operator(k, lam1, ctx)
    g2 = lambda k: build_operator(k, lam2, ctx)
    if kind == "E":
        return g1("E").tensor(one) + g1("K").tensor(g2("E"))
    if kind == "F":
        return one.tensor(g2("F")) + g1("F").tensor(g2("Kinv"))
    if kind == "K":
        return g1("K").tensor(g2("K"))
    if kind == "Kinv":
        return g1("Kinv").tensor(g2("Kinv"))
    raise ValueError(f"no coproduct for {kind!r}")


# ------------------------------------------------------------------ panels


def core_panel(ctx: BContext | None = None) -> list[CoreFunction]:
    """Five fixed one-variable core functions."""
    b = (ctx or BContext()).b
    mk = lambda terms: CoreFunction.from_terms(b, terms)
    return [
        mk([(1.0, 0, math.pi, 0.0)]),
        mk([(1.0, 1, 1.0, 0.3)]),
        mk([(1.0, 2, 1.0, 1.0)]),
        mk([(0.5 + 0.2j, 0, 1 + 0.5j, 0.2 - 0.4j), (0.3, 1, 2.0, 0.0)]),
        mk([(1.0, 3, 0.7, -0.5j), (-0.25j, 0, 1.5, 0.1)]),
    ]


def core_panel_2d(ctx: BContext | None = None) -> list[CoreFunction]:
    p = core_panel(ctx)
    return [p[0].product(p[1]), p[1].product(p[2]), p[2].product(p[3]), p[3].product(p[4]),
            p[4].product(p[0]) + p[1].product(p[3])]


# ---------------------------------------------------------- virtual weights


def _bracket_scale(f: CoreFunction, x, b):
    return max(1.0, abs(f(x + 1j * b)), abs(f(x - 1j * b)))


def virtual_hw_check(lam: float, f: CoreFunction, ctx: BContext | None = None) -> float:
    """|(E f)(-iQ/2 + lam)|, relative to the size of the cancelling terms."""
    ctx = ctx or BContext()
    E = build_operator("E", lam, ctx)
    x0 = -0.5j * ctx.Q + lam
    val = apply(E, f)(x0)
    scale = _bracket_scale(f, x0, ctx.b) * max(abs(c) for c in E.terms.values()) * math.exp(math.pi * ctx.b * abs(x0.real - lam) + 1)
    return float(abs(val) / scale)


def virtual_lw_check(lam: float, f: CoreFunction, ctx: BContext | None = None) -> float:
    """|(F f)(iQ/2 - lam)|: the F bracket vanishes identically at x = iQ/2 - lam."""
    ctx = ctx or BContext()
    F = build_operator("F", lam, ctx)
    x0 = 0.5j * ctx.Q - lam
    val = apply(F, f)(x0)
    scale = _bracket_scale(f, x0, ctx.b) * max(abs(c) for c in F.terms.values()) * math.exp(math.pi * ctx.b * abs(x0.real + lam) + 1)
    return float(abs(val) / scale)


# --------------------------------------------------------------- relations


@dataclass
class PositiveRepReport:
    lam: float
    lam2: float
    residuals: dict = field(default_factory=dict)
    tol: float = 1e-12

    @property
    def max_residual(self) -> float:
        return max(self.residuals.values(), default=0.0)

    @property
    def passed(self) -> bool:
        return self.max_residual <= self.tol


def _relations(gen, nv, q, b):
    """Operator pairs (lhs, rhs) for the U_q(sl2) relations."""
    E, F, K, Ki = gen("E"), gen("F"), gen("K"), gen("Kinv")
    return {
        "KE=q^2EK": (K @ E, (E @ K).scale(q * q)),
        "KF=q^-2FK": (K @ F, (F @ K).scale(1 / (q * q))),
        "[E,F]": (E @ F - F @ E, (K - Ki).scale(1 / (q - 1 / q))),
        "KKinv=1": (K @ Ki, DiffOperator.identity(nv, b)),
    }


def verify_positive_rep(lam: float, ctx: BContext | None = None, lam2: float | None = None,
                        tol: float = 1e-12) -> PositiveRepReport:
    """Exact-calculus relation suite on the fixed core-function panels."""
    ctx = ctx or BContext()
    lam2 = lam if lam2 is None else lam2
    b, q = ctx.b, ctx.q
    rep = PositiveRepReport(lam, lam2, tol=tol)
    res = rep.residuals
    panel = core_panel(ctx)
    panel2 = core_panel_2d(ctx)

    def record(name, lhs: DiffOperator, rhs: DiffOperator, fs):
        r = lhs.residual(rhs)
        for f in fs:
            r = max(r, apply(lhs, f).residual(apply(rhs, f)))
        res[name] = max(res.get(name, 0.0), r)

    gen1 = lambda k: build_operator(k, lam, ctx)
    for name, (l, r) in _relations(gen1, 1, q, b).items():
        record(name, l, r, panel)
    gen2 = lambda k: coproduct(k, lam, lam2, ctx)
    for name, (l, r) in _relations(gen2, 2, q, b).items():
        record("coproduct " + name, l, r, panel2)

    # Casimir acts as a scalar and commutes with the generators
    C = build_operator("Casimir_bold", lam, ctx)
    scalar = 2 * math.cosh(2 * math.pi * b * lam)
    ident = DiffOperator.identity(1, b).scale(scalar)
    record("Casimir scalar", C, ident, panel)
    for g in ("E", "F", "K"):
        G = gen1(g)
        record(f"[Casimir,{g}]", C @ G, G @ C, panel)

    # operator composition agrees with successive application
    E, F, K = gen1("E"), gen1("F"), gen1("K")
    for f in panel:
        res["composition"] = max(res.get("composition", 0.0),
                                 apply(E @ F, f).residual(apply(E, apply(F, f))),
                                 apply(K @ E, f).residual(apply(K, apply(E, f))))

    res["virtual highest weight"] = max(virtual_hw_check(lam, f, ctx) for f in panel)
    res["virtual lowest weight"] = max(virtual_lw_check(lam, f, ctx) for f in panel)
    return rep

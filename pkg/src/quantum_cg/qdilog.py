"""Non-compact quantum dilogarithm G_b and its variants S_b, g_b.

Inside the strip 0 < Re z < Q::

    G_b(z) = conj(zeta_b) * exp(-int_C e^{pi t z} / ((e^{pi b t} - 1)(e^{pi t/b} - 1)) dt/t)

where C is the real line with a small semicircle passing above t = 0.  Other
arguments are reached with the functional equation
``G_b(z + b) = (1 - e^{2 pi i b z}) G_b(z)``.  Everything here is vectorised
over numpy arrays; a scalar mpmath path handles extended precision and
arguments that need many continuation steps.
"""
from __future__ import annotations

import cmath
import math
import warnings
from dataclasses import dataclass, field, replace
from fractions import Fraction
from functools import cached_property, lru_cache

import mpmath
import numpy as np

from ._gauss import panel_nodes

__all__ = [
    "DEFAULT_B",
    "BContext",
    "ComplexVal",
    "PoleError",
    "gb",
    "sb",
    "gb_small",
    "gb_values",
    "sb_values",
    "nearest_pole",
]

DEFAULT_B = math.sqrt(2.0 - math.sqrt(2.0))
_EPS = 2.220446049250313e-16
# e^{-39} ~ 1e-17: tail level that the truncation point is chosen for
_TAIL_LOG = 39.0
_MAX_STEPS_DOUBLE = 20
_CHUNK = 1 << 21


class PoleError(ValueError):
    """Raised when an argument sits on (or within pole_tol of) a pole of G_b."""

    def __init__(self, z, n: int, m: int, kind: str = "pole"):
        self.z = complex(z)
        self.n = int(n)
        self.m = int(m)
        self.kind = kind
        where = "-(n b + m/b)" if kind == "pole" else "Q + n b + m/b"
        super().__init__(f"z={self.z} is at the G_b {kind} {where} with (n, m) = ({n}, {m})")


@dataclass(frozen=True)
class BContext:
    """Numerical parameter pack: b, q = e^{i pi b^2}, Q = b + 1/b, zeta_b."""

    b: float = DEFAULT_B
    dps: int = 15
    pole_tol: float = 1e-9
    tolerances: dict = field(default_factory=dict, compare=False)
    allow_dual: bool = False

    def __post_init__(self):
        b = float(self.b)
        object.__setattr__(self, "b", b)
        if not math.isfinite(b) or b <= 0:
            raise ValueError(f"b must be a positive real, got {self.b}")
        if self.allow_dual:
            if b == 1.0:
                raise ValueError("b = 1 gives q = -1")
        elif not 0 < b < 1:
            raise ValueError(f"b must lie in (0, 1), got {b}")
        if int(self.dps) < 15:
            raise ValueError("working precision must be at least 15 digits")
        b2 = Fraction(b * b)
        if b2.denominator <= 10**6:
            raise ValueError(f"b^2 = {b2} is exactly rational")
        approx = b2.limit_denominator(1000)
        if abs(float(b2 - approx)) < 1e-12:
            warnings.warn(f"b^2 is within 1e-12 of the rational {approx}", stacklevel=3)

    def __hash__(self):
        return hash((self.b, self.dps, self.pole_tol, self.allow_dual))

    @cached_property
    def Q(self) -> float:
        return self.b + 1.0 / self.b

    @cached_property
    def q(self) -> complex:
        return cmath.exp(1j * math.pi * self.b * self.b)

    @cached_property
    def theta(self) -> float:
        b2 = self.b * self.b
        return 0.5 * math.pi * ((b2 + 1.0 / b2) / 6.0 + 0.5)

    @cached_property
    def zeta(self) -> complex:
        return cmath.exp(1j * self.theta)

    @property
    def extended(self) -> bool:
        return self.dps > 15

    def tol(self, name: str, default: float) -> float:
        return float(self.tolerances.get(name, default))

    def dual(self) -> "BContext":
        """The same context with b replaced by 1/b."""
        return replace(self, b=1.0 / self.b, allow_dual=True)

    def with_dps(self, dps: int) -> "BContext":
        return replace(self, dps=int(dps))


@dataclass(frozen=True)
class ComplexVal:
    value: complex
    abs_error_bound: float
    meta: dict = field(default_factory=dict, compare=False)

    def __post_init__(self):
        if not np.all(np.isfinite(self.abs_error_bound)):
            raise ValueError("error bound must be finite")

    def __complex__(self):
        return complex(self.value)

    @property
    def rel_error(self):
        return self.abs_error_bound / np.maximum(np.abs(self.value), 1e-300)

    def __mul__(self, other):
        if isinstance(other, ComplexVal):
            v = self.value * other.value
            e = (np.abs(self.value) * other.abs_error_bound + np.abs(other.value) * self.abs_error_bound
                 + self.abs_error_bound * other.abs_error_bound)
            return ComplexVal(v, e + _EPS * np.abs(v))
        return ComplexVal(self.value * other, self.abs_error_bound * abs(other))

    __rmul__ = __mul__

    def __truediv__(self, other):
        if isinstance(other, ComplexVal):
            rel = self.rel_error + other.rel_error
            v = self.value / other.value
            return ComplexVal(v, np.abs(v) * rel + _EPS * np.abs(v))
        return ComplexVal(self.value / other, self.abs_error_bound / abs(other))

    def to_json(self) -> dict:
        v = complex(self.value)
        return {"value": {"re": v.real, "im": v.imag}, "error_bound": float(self.abs_error_bound)}


# ---------------------------------------------------------------- quadrature grid


def _rho(b: float) -> float:
    return min(b, 1.0 / b) / 4.0


@lru_cache(maxsize=256)
def _grid(b: float, t_left: float, t_right: float, width: float, order: int):
    rho = _rho(b)
    Q = b + 1.0 / b
    nl = max(1, math.ceil((t_left - rho) / width))
    nr = max(1, math.ceil((t_right - rho) / width))
    xl, wl = panel_nodes(np.linspace(-t_left, -rho, nl + 1), order)
    xr, wr = panel_nodes(np.linspace(rho, t_right, nr + 1), order)
    ph, wph = panel_nodes(np.linspace(0.0, math.pi, 5), order)
    tc = rho * np.exp(1j * (math.pi - ph))
    dtc = -1j * tc * wph
    P = np.concatenate([xl.astype(complex), tc, xr.astype(complex)])
    D = np.concatenate([wl.astype(complex), dtc, wr.astype(complex)])
    right = P.real > 1.0
    with np.errstate(over="ignore"):
        den = np.where(
            right,
            (1 - np.exp(-math.pi * b * P)) * (1 - np.exp(-math.pi * P / b)),
            np.expm1(math.pi * b * P) * np.expm1(math.pi * P / b),
        )
    A = D / (P * den)
    shift = np.where(right, Q, 0.0)
    # exponent is pi * P * (z - shift)
    for arr in (P, A, shift):
        arr.setflags(write=False)
    return P, A, shift


def _bucket_T(T: float) -> float:
    T = min(max(T, 4.0), 800.0)
    return 2.0 * math.ceil(T / 2.0)


def _level(im_abs: float) -> int:
    x = math.pi * im_abs / 16.0
    return 0 if x <= 1 else math.ceil(math.log2(x))


def _strip_integral(z: np.ndarray, b: float, order: int, with_error: bool):
    """I(z) for 0 < Re z < Q, plus an error estimate."""
    Q = b + 1.0 / b
    I = np.empty(z.shape, dtype=complex)
    err = np.zeros(z.shape)
    tl = np.array([_bucket_T(_TAIL_LOG / (math.pi * x)) for x in z.real])
    tr = np.array([_bucket_T(_TAIL_LOG / (math.pi * (Q - x))) for x in z.real])
    lv = np.array([_level(abs(y)) for y in z.imag])
    keys = np.stack([tl, tr, lv.astype(float)], axis=1)
    uniq, inv = np.unique(keys, axis=0, return_inverse=True)
    inv = inv.ravel()
    for gi, (a, c, L) in enumerate(uniq):
        idx = np.nonzero(inv == gi)[0]
        width = 0.5 / 2 ** int(L)
        zz = z[idx]
        vals = _apply_grid(zz, _grid(b, a, c, width, order))
        I[idx] = vals
        if with_error:
            lo = _apply_grid(zz, _grid(b, a, c, width, order - 6))
            tail = np.exp(-math.pi * zz.real * a) / a + np.exp(-math.pi * (Q - zz.real) * c) / c
            err[idx] = np.abs(vals - lo) + tail + 64 * _EPS * (1 + np.abs(vals))
    return I, err


def _apply_grid(z: np.ndarray, grid) -> np.ndarray:
    P, A, shift = grid
    out = np.empty(z.shape, dtype=complex)
    step = max(1, _CHUNK // P.size)
    for s in range(0, z.size, step):
        zz = z[s:s + step]
        E = np.exp(math.pi * P[None, :] * (zz[:, None] - shift[None, :]))
        out[s:s + step] = E @ A
    return out


# ------------------------------------------------------------------- poles


def nearest_pole(z: complex, b: float):
    """Closest lattice point -(n b + m/b), n, m >= 0, as (distance, n, m)."""
    z = complex(z)
    best = (math.inf, 0, 0)
    if z.real > 1.0:
        return best
    nmax = int(max(0.0, -z.real) / b) + 2
    for n in range(nmax + 1):
        mr = (-z.real - n * b) * b
        for m in (math.floor(mr), math.ceil(mr)):
            if m < 0:
                continue
            d = abs(z + n * b + m / b)
            if d < best[0]:
                best = (d, n, m)
    return best


def nearest_zero(z: complex, b: float):
    """Closest zero Q + n b + m/b of G_b, as (distance, n, m)."""
    d, n, m = nearest_pole(b + 1.0 / b - complex(z), b)
    return d, n, m


def _check_poles(z: np.ndarray, ctx: BContext):
    tol = ctx.pole_tol
    cand = np.nonzero((np.abs(z.imag) <= tol) & (z.real <= tol))[0]
    for i in cand:
        d, n, m = nearest_pole(z[i], ctx.b)
        if d <= tol:
            raise PoleError(z[i], n, m)


# ------------------------------------------------------------------ double path


def _continuation(z: np.ndarray, b: float):
    """Shift every point into the band [Q/2 - b/2, Q/2 + b/2) by b-steps.

    Returns (z0, log-factor, relative roundoff, steps) with
    G_b(z) = exp(log-factor) * G_b(z0).
    """
    Q = b + 1.0 / b
    lo = Q / 2 - b / 2
    n = np.ceil((lo - z.real) / b).astype(int)
    z0 = z + n * b
    # guard against rounding at the band edge
    n = np.where(z0.real >= lo + b, n - 1, n)
    z0 = z + n * b
    fac = np.ones(z.shape, dtype=complex)
    rel = np.zeros(z.shape)
    tpi = 2j * math.pi * b
    for j in range(int(np.max(np.abs(n), initial=0))):
        up = n > j
        down = -n > j
        if np.any(up):
            e = np.exp(tpi * (z[up] + j * b))
            f = 1 - e
            fac[up] /= f
            rel[up] += _EPS * (2 + np.abs(e) / np.abs(f))
        if np.any(down):
            e = np.exp(tpi * (z0[down] + j * b))
            f = 1 - e
            fac[down] *= f
            rel[down] += _EPS * (2 + np.abs(e) / np.abs(f))
    return z0, fac, rel, np.abs(n)


def _gb_double(z: np.ndarray, ctx: BContext, method: str, with_error: bool, order: int = 20):
    b, Q = ctx.b, ctx.Q
    vals = np.empty(z.shape, dtype=complex)
    errs = np.zeros(z.shape)
    if method == "direct":
        margin = 0.1 * min(b, 1.0 / b)
        direct = (z.real >= margin) & (z.real <= Q - margin)
    elif method == "auto":
        direct = np.zeros(z.shape, dtype=bool)
    else:
        raise ValueError(f"unknown method {method!r}")
    z0 = z.copy()
    fac = np.ones(z.shape, dtype=complex)
    rel = np.zeros(z.shape)
    steps = np.zeros(z.shape, dtype=int)
    cont = ~direct
    if np.any(cont):
        z0[cont], fac[cont], rel[cont], steps[cont] = _continuation(z[cont], b)
    far = steps > _MAX_STEPS_DOUBLE
    near = ~far
    if np.any(near):
        I, ierr = _strip_integral(z0[near], b, order, with_error)
        g = np.exp(-1j * ctx.theta - I) * fac[near]
        vals[near] = g
        errs[near] = np.abs(g) * (ierr + rel[near] + 4 * _EPS)
    for i in np.nonzero(far)[0]:
        v, e = _gb_mp(complex(z[i]), ctx, max(50, ctx.dps))
        vals[i] = complex(v)
        errs[i] = float(e) + _EPS * abs(vals[i])
    return vals, errs


# ---------------------------------------------------------------- mpmath path


def _gb_mp(z: complex, ctx: BContext, dps: int):
    """Scalar extended-precision evaluation; returns (mpc value, error estimate)."""
    with mpmath.workdps(dps + 10):
        b = mpmath.mpf(ctx.b)
        Q = b + 1 / b
        z = mpmath.mpc(z)
        lo = Q / 2 - b / 2
        n = int(mpmath.ceil((lo - z.real) / b))
        z0 = z + n * b
        fac = mpmath.mpc(1)
        for j in range(abs(n)):
            if n > 0:
                fac /= 1 - mpmath.exp(2j * mpmath.pi * b * (z + j * b))
            else:
                fac *= 1 - mpmath.exp(2j * mpmath.pi * b * (z0 + j * b))
        I, ierr = _mp_strip_integral(z0, b, dps)
        theta = mpmath.pi / 2 * ((b**2 + b**-2) / 6 + mpmath.mpf(1) / 2)
        g = mpmath.exp(-1j * theta - I) * fac
        err = abs(g) * (ierr + mpmath.mpf(10) ** (-dps) * (abs(n) + 1))
        return +g, +err


def _mp_strip_integral(z, b, dps):
    pi = mpmath.pi
    Q = b + 1 / b
    rho = min(b, 1 / b) / 4

    def f(t):
        return mpmath.exp(pi * t * z) / (mpmath.expm1(pi * b * t) * mpmath.expm1(pi * t / b) * t)

    target = dps * math.log(10) + 10
    tl = float(target / (pi * z.real))
    tr = float(target / (pi * (Q - z.real)))
    h = min(1.0, 4.0 / (math.pi * abs(float(z.imag)) + 1e-300))
    left = [-tl + k * h for k in range(int((tl - float(rho)) / h) + 1)] + [-rho]
    right = [rho] + [float(rho) + k * h for k in range(1, int((tr - float(rho)) / h) + 1)] + [tr]
    a, ea = mpmath.quad(f, left, error=True)
    c, ec = mpmath.quad(f, right, error=True)
    s, es = mpmath.quad(
        lambda ph: f(rho * mpmath.expjpi(1 - ph / pi)) * (-1j) * rho * mpmath.expjpi(1 - ph / pi),
        [0, pi / 2, pi],
        error=True,
    )
    return a + s + c, ea + es + ec


# ------------------------------------------------------------------ public API


def _as_array(z):
    arr = np.asarray(z, dtype=complex)
    if not np.all(np.isfinite(arr)):
        raise ValueError("non-finite argument")
    return arr


def gb_values(z, ctx: BContext, method: str = "auto", with_error: bool = False, check_poles: bool = True):
    """Vectorised G_b; returns (values, error bounds) as arrays of the input shape."""
    arr = _as_array(z)
    flat = arr.ravel()
    if check_poles:
        _check_poles(flat, ctx)
    if ctx.extended:
        vals = np.empty(flat.shape, dtype=complex)
        errs = np.zeros(flat.shape)
        for i, zi in enumerate(flat):
            v, e = _gb_mp(complex(zi), ctx, ctx.dps)
            vals[i], errs[i] = complex(v), float(e)
    else:
        vals, errs = _gb_double(flat, ctx, method, with_error)
    return vals.reshape(arr.shape), errs.reshape(arr.shape)


def _sb_prefactor(z, Q):
    return np.exp(0.5j * math.pi * z * (Q - z))


def sb_values(z, ctx: BContext, method: str = "auto", with_error: bool = False, check_poles: bool = True):
    arr = _as_array(z)
    g, e = gb_values(arr, ctx, method, with_error, check_poles)
    p = _sb_prefactor(arr, ctx.Q)
    return g * p, e * np.abs(p)


def _wrap(vals, errs, scalar):
    if scalar:
        return ComplexVal(complex(vals), float(errs))
    return ComplexVal(vals, errs)


def gb(z, ctx: BContext | None = None, method: str = "auto") -> ComplexVal:
    """G_b(z) with an absolute error bound."""
    ctx = ctx or BContext()
    scalar = np.ndim(z) == 0
    vals, errs = gb_values(z, ctx, method, with_error=True)
    return _wrap(vals, errs, scalar)


def sb(z, ctx: BContext | None = None, method: str = "auto") -> ComplexVal:
    """S_b(z) = e^{pi i z (Q - z)/2} G_b(z)."""
    ctx = ctx or BContext()
    scalar = np.ndim(z) == 0
    vals, errs = sb_values(z, ctx, method, with_error=True)
    return _wrap(vals, errs, scalar)


def gb_small(x, ctx: BContext | None = None) -> ComplexVal:
    """g_b(x) = conj(zeta_b) / G_b(Q/2 + log(x) / (2 pi i b))."""
    ctx = ctx or BContext()
    scalar = np.ndim(x) == 0
    xa = np.asarray(x, dtype=complex)
    if np.any(xa == 0):
        raise ValueError("g_b is undefined at x = 0")
    arg = ctx.Q / 2 + np.log(xa) / (2j * math.pi * ctx.b)
    g, e = gb_values(arg, ctx, with_error=True)
    c = np.conj(ctx.zeta)
    v = c / g
    return _wrap(v, np.abs(v) * (e / np.abs(g)) + _EPS * np.abs(v), scalar)

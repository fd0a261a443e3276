"""The intertwining kernel for P_l1 (x) P_l2 and the transformation-chain kernels.

Kernels are densities in (x, y, alpha) with z = x + y.  The r-integral runs
along a horizontal line that separates the upward pole family of the
numerator S_b factors from the downward family coming from zeros of the
denominator S_b factors.
"""
from __future__ import annotations

import cmath
import math
from dataclasses import dataclass

import numpy as np

from ..contour import (ContourError, ContourSpec, Detour, QuadratureConfig, ResidualReport,
                       integrate)
from ..qdilog import BContext, ComplexVal, gb_values, sb_values

__all__ = [
    "KernelParams",
    "kernel_C",
    "kernel_C_phi",
    "kernel_const",
    "kernel_contour_height",
    "functional_residual",
    "plancherel_density",
    "plancherel_density_sb",
    "kashaev_eigen_check",
    "chain_kernels",
    "lem_cp_check",
    "kashaev_transform",
    "kashaev_roundtrip",
    "kernel_sweep",
]


@dataclass(frozen=True)
class KernelParams:
    lambda1: float
    lambda2: float
    alpha: float

    def __post_init__(self):
        if self.lambda1 < 0 or self.lambda2 < 0:
            raise ValueError("lambda1, lambda2 must be nonnegative")
        if not self.alpha > 0:
            raise ValueError("alpha must be positive")


def _S(z, ctx):
    v, _ = sb_values(np.asarray(z, dtype=complex), ctx)
    return v


def _S1(z, ctx) -> complex:
    return complex(_S(np.array([z], dtype=complex), ctx)[0])


def _G1(z, ctx) -> complex:
    v, _ = gb_values(np.array([z], dtype=complex), ctx)
    return complex(v[0])


def _cfg(cfg):
    return cfg or QuadratureConfig(abs_tol=1e-14, rel_tol=1e-10)


def kernel_contour_height(upper_from, lower_from, ctx: BContext) -> float:
    """Height of the r-line between the pole families.

    Numerator factors S_b(A + ir) have poles at Im r >= Re A; denominator
    factors 1/S_b(B + ir) have poles at Im r <= Re B - Q.  The preferred height
    -min(b, 1/b)/4 is used when it fits, otherwise the middle of the gap.
    """
    Q = ctx.Q
    upper = min(complex(a).real for a in upper_from)
    lower = max(complex(B).real - Q for B in lower_from)
    if not lower < upper:
        raise ContourError(
            f"pole families overlap: lower poles reach Im r = {lower:.6g}, upper poles start at {upper:.6g}")
    h = -min(ctx.b, 1 / ctx.b) / 4
    if not lower + 0.05 * (upper - lower) < h < upper - 0.05 * (upper - lower):
        h = 0.5 * (lower + upper)
    return h


def _kernel_parts(x, y, p: KernelParams, ctx):
    Q = ctx.Q
    x, y = complex(x), complex(y)
    a, l1, l2 = p.alpha, p.lambda1, p.lambda2
    z = x + y
    A = [1j * a - 1j * y - 1j * l1, 0j, 2j * a]
    B = [Q / 2 + 1j * a - 1j * z, Q / 2 + 1j * a - 1j * l1 - 1j * l2, Q / 2 + 1j * a - 1j * l1 + 1j * l2]
    h = kernel_contour_height(A, B, ctx)
    expo = Q / 2 + 1j * x + 1j * l1
    shift = a - l1 - y

    def core(r):
        num = _S(A[0] + 1j * r, ctx) * _S(A[1] + 1j * r, ctx) * _S(A[2] + 1j * r, ctx)
        den = _S(B[0] + 1j * r, ctx) * _S(B[1] + 1j * r, ctx) * _S(B[2] + 1j * r, ctx)
        return np.exp(math.pi * expo * (r + shift)) * num / den

    return h, core, z


def kernel_C(x, y, params: KernelParams, ctx: BContext | None = None,
             cfg: QuadratureConfig | None = None) -> ComplexVal:
    """The intertwining kernel C(x, y, alpha, x+y) (delta factor stripped)."""
    ctx = ctx or BContext()
    Q = ctx.Q
    a, l1, l2 = params.alpha, params.lambda1, params.lambda2
    h, core, z = _kernel_parts(x, y, params, ctx)
    y = complex(y)
    pre = (_S1(Q / 2 + 1j * a - 1j * z, ctx) * _S1(Q / 2 + 1j * a - 1j * l1 + 1j * l2, ctx)
           / (_S1(Q / 2 - 1j * y + 1j * l2, ctx) * _S1(2j * a, ctx)))
    val = integrate(core, ContourSpec(height=h), _cfg(cfg))
    return ComplexVal(pre * val.value, abs(pre) * val.abs_error_bound, meta=val.meta)


def kernel_C_phi(x, y, params: KernelParams, ctx: BContext | None = None,
                 cfg: QuadratureConfig | None = None) -> ComplexVal:
    """The kernel of the inverse of the unitary chain, with all factors inside the r-integral."""
    ctx = ctx or BContext()
    Q = ctx.Q
    a, l1, l2 = params.alpha, params.lambda1, params.lambda2
    h, core, z = _kernel_parts(x, y, params, ctx)
    y = complex(y)
    phase = cmath.exp(1j * math.pi * (l1 * l1 + l2 * l2 - a * a)) * cmath.exp(1j * math.pi * Q * Q / 4)
    outer = (_S1(Q / 2 + 1j * a - 1j * z, ctx) * _S1(Q / 2 + 1j * a - 1j * l1 + 1j * l2, ctx)
             / (_S1(Q / 2 - 1j * y + 1j * l2, ctx) * _S1(Q / 2 + 1j * a + 1j * l1 - 1j * l2, ctx)))

    def f(r):
        # S_b(ir) S_b(2ia+ir) sit inside core already; no 1/S_b(2ia) here
        return phase * outer * core(r)

    val = integrate(f, ContourSpec(height=h), _cfg(cfg))
    return val


def kernel_const(params: KernelParams, ctx: BContext | None = None) -> complex:
    """const(alpha, l1, l2) relating the two kernels."""
    ctx = ctx or BContext()
    Q = ctx.Q
    a, l1, l2 = params.alpha, params.lambda1, params.lambda2
    phase = cmath.exp(1j * math.pi * (l1 * l1 + l2 * l2 - a * a)) * cmath.exp(1j * math.pi * Q * Q / 4)
    return phase * _S1(2j * a, ctx) / _S1(Q / 2 + 1j * a + 1j * l1 - 1j * l2, ctx)


def _qn(w, ctx):
    q = ctx.q
    return (cmath.exp(1j * math.pi * ctx.b ** 2 * w) - cmath.exp(-1j * math.pi * ctx.b ** 2 * w)) / (q - 1 / q)


def functional_residual(which: str, x, y, params: KernelParams, ctx: BContext | None = None,
                        cfg: QuadratureConfig | None = None, kernel: str = "C") -> ResidualReport:
    """Residual of the E (``eqE``) or F (``eqF``) difference equation of the kernel.

    eqE: [Q/2b - i(z-a)/b] K(x,y) = [Q/2b - i(x-l1)/b] K(x+ib,y) + e^{-2 pi b x}[Q/2b - i(y-l2)/b] K(x,y+ib)
    eqF: [Q/2b + i(z+a)/b] K(x,y) = [Q/2b + i(y+l2)/b] K(x,y-ib) + e^{2 pi b y}[Q/2b + i(x+l1)/b] K(x-ib,y)

    The residual is relative to the largest of the three terms.
    """
    ctx = ctx or BContext()
    K = {"C": kernel_C, "phi": kernel_C_phi}[kernel]
    b, Q = ctx.b, ctx.Q
    a, l1, l2 = params.alpha, params.lambda1, params.lambda2
    x, y = complex(x), complex(y)
    c0 = Q / (2 * b)
    k0 = K(x, y, params, ctx, cfg)
    if which == "eqE":
        kx = K(x + 1j * b, y, params, ctx, cfg)
        ky = K(x, y + 1j * b, params, ctx, cfg)
        t0 = _qn(c0 - 1j / b * (x + y - a), ctx) * k0.value
        t1 = _qn(c0 - 1j / b * (x - l1), ctx) * kx.value
        t2 = cmath.exp(-2 * math.pi * b * x) * _qn(c0 - 1j / b * (y - l2), ctx) * ky.value
    elif which == "eqF":
        kx = K(x - 1j * b, y, params, ctx, cfg)
        ky = K(x, y - 1j * b, params, ctx, cfg)
        t0 = _qn(c0 + 1j / b * (x + y + a), ctx) * k0.value
        t1 = _qn(c0 + 1j / b * (y + l2), ctx) * ky.value
        t2 = cmath.exp(2 * math.pi * b * y) * _qn(c0 + 1j / b * (x + l1), ctx) * kx.value
    else:
        raise ValueError(f"unknown functional equation {which!r}")
    scale = max(abs(t0), abs(t1), abs(t2), 1e-300)
    rel_err = sum(k.rel_error for k in (k0, kx, ky))
    return ResidualReport(f"{which}-{kernel}", {"x": x, "y": y, "alpha": a, "lambda1": l1, "lambda2": l2},
                          t0, t1 + t2, float(abs(t0 - t1 - t2) / scale), float(rel_err),
                          {"im_r": k0.meta.get("im_r"), "T": k0.meta.get("T")})


def kernel_sweep(n: int = 5, seed: int = 0):
    """Seeded parameter points (x, y, KernelParams) for the kernel suite."""
    rng = np.random.default_rng(seed)
    pts = []
    for _ in range(n):
        x, y = rng.uniform(-0.5, 0.5, 2)
        a = rng.uniform(0.2, 1.2)
        l1, l2 = rng.uniform(0.0, 0.8, 2)
        pts.append((float(x), float(y), KernelParams(float(l1), float(l2), float(a))))
    return pts


# ------------------------------------------------------------- measure


def plancherel_density(alpha, ctx: BContext | None = None):
    """4 sinh(2 pi b a) sinh(2 pi a / b)."""
    ctx = ctx or BContext()
    a = np.asarray(alpha, dtype=float)
    if np.any(a <= 0):
        raise ValueError("alpha must be positive")
    b = ctx.b
    out = 4 * np.sinh(2 * math.pi * b * a) * np.sinh(2 * math.pi * a / b)
    return float(out) if out.ndim == 0 else out


def plancherel_density_sb(alpha, ctx: BContext | None = None):
    """|S_b(Q + 2ia)|^2."""
    ctx = ctx or BContext()
    a = np.asarray(alpha, dtype=float)
    if np.any(a <= 0):
        raise ValueError("alpha must be positive")
    out = np.abs(_S(ctx.Q + 2j * a, ctx)) ** 2
    return float(out) if out.ndim == 0 else out


# ------------------------------------------------------------- Kashaev


def _psi(x, alpha, ctx):
    x = np.asarray(x, dtype=complex)
    return _S(1j * x - 1j * alpha, ctx) * _S(1j * x + 1j * alpha, ctx)


def kashaev_eigen_check(alpha, x, ctx: BContext | None = None) -> float:
    """Relative residual of (e^{2 pi b x}+e^{-2 pi b x}) Psi(x) + Psi(x - ib) = (e^{2 pi b a}+e^{-2 pi b a}) Psi(x)."""
    ctx = ctx or BContext()
    b = ctx.b
    x = complex(x)
    p0 = complex(_psi(x, alpha, ctx))
    p1 = complex(_psi(x - 1j * b, alpha, ctx))
    lhs = 2 * cmath.cosh(2 * math.pi * b * x) * p0 + p1
    rhs = 2 * math.cosh(2 * math.pi * b * alpha) * p0
    scale = max(abs(lhs), abs(rhs), abs(p1), 1e-300)
    return float(abs(lhs - rhs) / scale)


def chain_kernels(which: str, ctx: BContext | None = None, **args) -> ComplexVal:
    """Pointwise values of the kernels in the transformation chain.

    S_lambda(x, lam):          S_b(Q/2 - ix + i lam)
    T_inv(x, y, t):            e^{2 pi i y (t - x)} / G_b(Q + it)
    R_inv(x, t, lambda1, lambda2):
        e^{2 pi (Q/2 + i l2)(x + l2 - t)} G_b(it - ix - i l2) / (S_b(Q/2 + it + i l1 - i l2) S_b(Q/2 + it - i l1 - i l2))
    K_fwd(alpha, x):           S_b(ix - i alpha) S_b(ix + i alpha)
    K_inv(x, alpha):           S_b(-ix + i alpha) S_b(-ix - i alpha)
    """
    ctx = ctx or BContext()
    Q = ctx.Q
    g = lambda k: complex(args[k])
    if which == "S_lambda":
        v = _S1(Q / 2 - 1j * g("x") + 1j * g("lam"), ctx)
    elif which == "T_inv":
        x, y, t = g("x"), g("y"), g("t")
        v = cmath.exp(2j * math.pi * y * (t - x)) / _G1(Q + 1j * t, ctx)
    elif which == "R_inv":
        x, t, l1, l2 = g("x"), g("t"), g("lambda1"), g("lambda2")
        v = (cmath.exp(2 * math.pi * (Q / 2 + 1j * l2) * (x + l2 - t)) * _G1(1j * t - 1j * x - 1j * l2, ctx)
             / (_S1(Q / 2 + 1j * t + 1j * l1 - 1j * l2, ctx) * _S1(Q / 2 + 1j * t - 1j * l1 - 1j * l2, ctx)))
    elif which == "K_fwd":
        v = complex(_psi(g("x"), g("alpha"), ctx))
    elif which == "K_inv":
        v = complex(_psi(-g("x"), g("alpha"), ctx))
    else:
        raise ValueError(f"unknown chain kernel {which!r}")
    return ComplexVal(complex(v), float(abs(v) * 1e-12), meta={"kernel": which})


def lem_cp_check(x, y, alpha, lambda1, lambda2, ctx: BContext | None = None,
                 cfg: QuadratureConfig | None = None) -> ResidualReport:
    """Single r-integral with the coefficient c(r, a) against its closed form.

    The integral converges absolutely only for Im x > 0 (the integrand decays
    like e^{-2 pi Im(x) r} as r -> +inf), so sample points use complex x.
    """
    ctx = ctx or BContext()
    Q = ctx.Q
    x, y = complex(x), complex(y)
    a, l1, l2 = float(alpha), float(lambda1), float(lambda2)
    if not x.imag >= 0.3:
        raise ValueError("the single r-integral needs Im(x) >= 0.3 to converge absolutely")
    A = 1j * a - 1j * y - 1j * l1
    B = Q / 2 + 1j * a - 1j * x - 1j * y
    h = kernel_contour_height([A], [B], ctx)
    expo = Q / 2 + 1j * x + 1j * l1

    def f(r):
        return (np.exp(math.pi * expo * (r + a - l1 - y) - 2j * math.pi * a * (r + a - l1))
                * _S(A + 1j * r, ctx) / _S(B + 1j * r, ctx))

    val = integrate(f, ContourSpec(height=h), _cfg(cfg))
    lhs = val.value / (_S1(Q / 2 - 1j * y + 1j * l2, ctx) * _G1(Q / 2 - 1j * a + 1j * l1, ctx))
    rhs = (_S1(Q / 2 + 1j * x - 1j * l1, ctx) / _S1(Q / 2 - 1j * y + 1j * l2, ctx)
           * cmath.exp(-2j * math.pi * a * y) / _G1(Q + 1j * x - 1j * a, ctx))
    rel = float(abs(lhs - rhs) / max(abs(lhs), abs(rhs), 1e-300))
    return ResidualReport("lem-cp", {"x": x, "y": y, "alpha": a, "lambda1": l1, "lambda2": l2},
                          complex(lhs), complex(rhs), rel, val.rel_error * abs(lhs), val.meta)


# ------------------------------------------------- Kashaev transform pair

_X_HEIGHT = -0.5


def kashaev_transform(f, alpha, ctx: BContext | None = None, cfg: QuadratureConfig | None = None) -> ComplexVal:
    """F(a) = int Psi_a(x) f(x) dx along Im x = -1/2, below the poles at x = +-a + i w."""
    ctx = ctx or BContext()
    alpha = complex(alpha)
    if abs(alpha.imag) >= 0.5 * abs(_X_HEIGHT):
        raise ValueError("alpha too far from the real axis for the x-contour")
    return integrate(lambda x: _psi(x, alpha, ctx) * f(x), ContourSpec(height=_X_HEIGHT), _cfg(cfg))


def kashaev_roundtrip(points=(0.35, -0.6, 1.1), width: float = 1.0, ctx: BContext | None = None,
                      step: float = 0.05, x_range: float = 9.0, a_range: float = 6.0,
                      delta: float = 0.25, loop_points: int = 48) -> dict:
    """Inverse Kashaev transform of the forward transform of f(x) = exp(-x^2/width).

    Both integrals use the trapezoid rule on matching uniform grids, x along
    Im x = -1/2 and a along Im a = -delta, so that x -+ a falls on two 1D grids
    and S_b is evaluated only there.  The inverse a-contour must pass below
    the pole at a = x0 and above the one at a = -x0; the line passes below
    both, and a clockwise loop around -x0 corrects the second.  The inverse
    is taken as half the integral over the real line (the integrand is even).

    The pair is unitary up to a unimodular constant, estimated at the first
    point.  Returns {"constant", "abs_constant", "values", "residuals", "max_residual"}.
    """
    ctx = ctx or BContext()
    b = ctx.b
    if not 0 < delta < 0.5:
        raise ValueError("delta must lie in (0, 1/2)")
    f = lambda x: np.exp(-np.asarray(x, dtype=complex) ** 2 / width)
    nx = int(round(x_range / step))
    na = int(round(a_range / step))
    j = np.arange(-nx, nx + 1)
    k = np.arange(-na, na + 1)
    xs = j * step + 1j * _X_HEIGHT
    al = k * step - 1j * delta
    # i(x - a) = 1/2 - delta + i (j - k) step,  i(x + a) = 1/2 + delta + i (j + k) step
    m = np.arange(-(nx + na), nx + na + 1)
    s_minus = _S(-_X_HEIGHT - delta + 1j * m * step, ctx)
    s_plus = _S(-_X_HEIGHT + delta + 1j * m * step, ctx)
    off = nx + na
    psi = s_minus[(j[None, :] - k[:, None]) + off] * s_plus[(j[None, :] + k[:, None]) + off]
    F_line = psi @ (f(xs) * step)

    def F_at(a):
        # forward transform at off-grid complex a, same x grid
        return np.array([np.sum(_psi(xs, ai, ctx) * f(xs)) * step for ai in np.atleast_1d(a)])

    mu = lambda a: 4 * np.sinh(2 * math.pi * b * a) * np.sinh(2 * math.pi * a / b)
    vals = []
    for x0 in points:
        x0 = float(x0)
        R = min(0.2, 0.9 * abs(x0))
        if R < 0.05:
            raise ValueError("sample points must satisfy |x0| >= 0.06")
        line = 0.5 * np.sum(_psi(-x0, al, ctx) * F_line * mu(al)) * step
        th = 2 * math.pi * np.arange(loop_points) / loop_points
        ring = -x0 + R * np.exp(1j * th)
        g = 0.5 * _psi(-x0, ring, ctx) * F_at(ring) * mu(ring)
        ccw = np.sum(g * 1j * R * np.exp(1j * th)) * (2 * math.pi / loop_points)
        vals.append(complex(line - ccw))
    exact = [complex(f(p)) for p in points]
    c = vals[0] / exact[0]
    res = [float(abs(v / c - e) / max(abs(e), 1e-300)) for v, e in zip(vals, exact)]
    return {"constant": complex(c), "abs_constant": float(abs(c)), "values": vals, "residuals": res,
            "max_residual": float(max(res[1:] + [abs(abs(c) - 1)]))}

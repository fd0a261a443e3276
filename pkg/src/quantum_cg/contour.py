"""Contour integrals of meromorphic integrands along a horizontal line with
pole detours, and the integral identities for G_b built on top of them.

A contour is the line Im t = h traversed left to right.  Poles near the line
get a semicircular detour on their required side.  A pole farther away but
on the wrong side is enclosed by a small circle, since
``int_C = int_line + (loop around the pole)``: clockwise when the contour has
to pass above the pole, counter-clockwise when below.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field, replace
from typing import Callable

import numpy as np

from ._gauss import gl_rule
from .qdilog import BContext, ComplexVal, gb_values, nearest_zero, PoleError, sb_values

__all__ = [
    "ContourError",
    "QuadratureError",
    "IntegrandError",
    "Detour",
    "ContourSpec",
    "QuadratureConfig",
    "FAMILY_KINDS",
    "integrate",
    "standard_contour",
    "family_poles",
    "ResidualReport",
    "tau_beta_check",
    "rel45_check",
    "fourier_check",
    "qbeta_coeff",
    "qbeta_shift_ratio",
]


class ContourError(ValueError):
    pass


class QuadratureError(RuntimeError):
    def __init__(self, msg, worst_panel=None):
        super().__init__(msg)
        self.worst_panel = worst_panel


class IntegrandError(ValueError):
    pass


@dataclass(frozen=True)
class Detour:
    pole: complex
    side: str
    radius: float
    family: str = ""

    def __post_init__(self):
        if self.side not in ("above", "below"):
            raise ValueError(f"side must be 'above' or 'below', got {self.side!r}")
        if not self.radius > 0:
            raise ValueError("detour radius must be positive")


@dataclass(frozen=True)
class ContourSpec:
    height: float = 0.0
    detours: tuple = ()
    truncation: float | None = None

    def __post_init__(self):
        object.__setattr__(self, "detours", tuple(self.detours))
        if self.truncation is not None and not self.truncation > 0:
            raise ValueError("truncation must be positive")
        self._check_disks()

    def kind_of(self, d: Detour) -> str:
        off = d.pole.imag - self.height
        if abs(off) < d.radius:
            return "arc"
        wrong = (d.side == "above" and off > 0) or (d.side == "below" and off < 0)
        return "loop" if wrong else "none"

    def _disk(self, d: Detour):
        kind = self.kind_of(d)
        if kind == "arc":
            return complex(d.pole.real, self.height), d.radius
        if kind == "loop":
            return d.pole, d.radius
        return None

    def _check_disks(self):
        disks = [(d, self._disk(d)) for d in self.detours]
        disks = [(d, k) for d, k in disks if k is not None]
        for i in range(len(disks)):
            ci, ri = disks[i][1]
            for j in range(i + 1, len(disks)):
                cj, rj = disks[j][1]
                if abs(ci - cj) <= ri + rj:
                    raise ContourError(
                        f"detour disks around {disks[i][0].pole} and {disks[j][0].pole} overlap"
                    )

    def reflected(self, omega: complex) -> "ContourSpec":
        """Image of the contour under t -> omega - t (sides swap)."""
        flip = {"above": "below", "below": "above"}
        return ContourSpec(
            height=complex(omega).imag - self.height,
            detours=tuple(replace(d, pole=complex(omega) - d.pole, side=flip[d.side]) for d in self.detours),
            truncation=self.truncation,
        )

    def span(self) -> float:
        """Largest |Re t| touched by a detour."""
        xs = [abs(d.pole.real) + d.radius for d in self.detours if self.kind_of(d) != "none"]
        return max(xs, default=0.0)


@dataclass(frozen=True)
class QuadratureConfig:
    order: int = 20
    max_panels: int = 20000
    abs_tol: float = 1e-13
    rel_tol: float = 1e-11
    panel_width: float = 0.5
    initial_T: float = 8.0
    max_doublings: int = 7
    loop_max: int = 2048

    def __post_init__(self):
        for name in ("order", "max_panels", "abs_tol", "rel_tol", "panel_width", "initial_T", "loop_max"):
            v = getattr(self, name)
            if not (math.isfinite(v) and v > 0):
                raise ValueError(f"{name} must be positive and finite")
        if self.order < 4:
            raise ValueError("panel order must be at least 4")


# ------------------------------------------------------------------ pieces


def _line_map(h):
    return lambda u: u + 1j * h, lambda u: np.ones_like(u, dtype=complex)


def _arc_map(c, R, sgn):
    # theta in [0, pi]: from c - R to c + R through c + i*sgn*R
    def t(th):
        return c + R * np.exp(1j * sgn * (math.pi - th))

    def dt(th):
        return -1j * sgn * R * np.exp(1j * sgn * (math.pi - th))

    return t, dt


def _call(f, t):
    v = np.asarray(f(t), dtype=complex)
    if v.shape != t.shape:
        v = np.broadcast_to(v, t.shape).astype(complex)
    bad = ~np.isfinite(v)
    if np.any(bad):
        raise IntegrandError(f"integrand not finite at t = {t[bad][0]}")
    return v


class _Panels:
    """Adaptive Gauss-Legendre panels over a set of parametrised pieces."""

    def __init__(self, f, order):
        self.f = f
        self.n_hi = order
        self.n_lo = max(4, order // 2)
        self.maps = []
        self.panels = []   # [piece, a, b, value, err]

    def add_piece(self, tmap, a, b, width):
        pid = len(self.maps)
        self.maps.append(tmap)
        n = max(1, math.ceil((b - a) / width))
        edges = np.linspace(a, b, n + 1)
        return [[pid, edges[i], edges[i + 1], None, None] for i in range(n)]

    def evaluate(self, panels):
        if not panels:
            return
        xh, wh = gl_rule(self.n_hi)
        xl, wl = gl_rule(self.n_lo)
        ts, jac, meta = [], [], []
        for p in panels:
            pid, a, b = p[0], p[1], p[2]
            tm, dm = self.maps[pid]
            mid, half = (a + b) / 2, (b - a) / 2
            u = np.concatenate([mid + half * xh, mid + half * xl])
            ts.append(tm(u))
            jac.append(dm(u) * half)
            meta.append(p)
        t = np.concatenate(ts)
        vals = _call(self.f, t)
        k = 0
        m = self.n_hi + self.n_lo
        for p, j in zip(meta, jac):
            v = vals[k:k + m] * j
            k += m
            hi = np.dot(v[:self.n_hi], wh)
            lo = np.dot(v[self.n_hi:], wl)
            p[3] = hi
            p[4] = abs(hi - lo)

    def total(self):
        return sum(p[3] for p in self.panels), sum(p[4] for p in self.panels)


def _loop_integral(f, center, R, orient, target, nmax):
    n = 32
    prev = None
    while True:
        ph = 2 * math.pi * np.arange(n) / n
        t = center + R * np.exp(1j * ph)
        dt = 1j * R * np.exp(1j * ph) * (2 * math.pi / n)
        val = orient * np.sum(_call(f, t) * dt)
        if prev is not None:
            err = abs(val - prev)
            if err <= target or n >= nmax:
                if err > target and n >= nmax:
                    raise QuadratureError(f"loop around {center} did not converge", (center, R))
                return val, err
        prev = val
        n *= 2


def integrate(
    f: Callable[[np.ndarray], np.ndarray],
    contour: ContourSpec | None = None,
    cfg: QuadratureConfig | None = None,
    decay: tuple[float, float] | None = None,
) -> ComplexVal:
    """Integrate a vectorised integrand along the contour.

    ``decay = (kappa_left, kappa_right)`` are exponential decay rates of
    |f| towards -inf and +inf; when given they are used for the tail bound.
    """
    contour = contour or ContourSpec()
    cfg = cfg or QuadratureConfig()
    h = contour.height
    arcs, loops = [], []
    for d in contour.detours:
        kind = contour.kind_of(d)
        if kind == "arc":
            arcs.append(d)
        elif kind == "loop":
            loops.append(d)
    arcs.sort(key=lambda d: d.pole.real)

    T0 = contour.truncation or cfg.initial_T
    T0 = max(T0, contour.span() + 1.0)
    adaptive_T = contour.truncation is None

    P = _Panels(f, cfg.order)
    # line segments between arcs
    line_map = _line_map(h)
    cuts = [(d.pole.real - d.radius, d.pole.real + d.radius) for d in arcs]
    left_edge, right_edge = -T0, T0
    pts = [left_edge]
    for a, b in cuts:
        pts += [a, b]
    pts.append(right_edge)
    panels = []
    for i in range(0, len(pts), 2):
        a, b = pts[i], pts[i + 1]
        if b > a:
            panels += P.add_piece(line_map, a, b, cfg.panel_width)
    for d in arcs:
        sgn = 1 if d.side == "above" else -1
        c = complex(d.pole.real, h)
        panels += P.add_piece(_arc_map(c, d.radius, sgn), 0.0, math.pi, math.pi / 4)
    P.evaluate(panels)
    P.panels = panels

    loop_val, loop_err = 0j, 0.0
    for d in loops:
        orient = -1 if d.side == "above" else 1
        v, e = _loop_integral(f, d.pole, d.radius, orient, cfg.abs_tol, cfg.loop_max)
        loop_val += v
        loop_err += e

    doublings = 0
    while True:
        _refine(P, cfg, loop_val)
        if not adaptive_T:
            break
        val, _ = P.total()
        target = max(cfg.abs_tol, cfg.rel_tol * abs(val + loop_val))
        grow = []
        lt = _edge_contrib(P, left_edge, left_edge + 1.0, line_map)
        rt = _edge_contrib(P, right_edge - 1.0, right_edge, line_map)
        if lt > 0.1 * target:
            grow.append("left")
        if rt > 0.1 * target:
            grow.append("right")
        if not grow:
            break
        if doublings >= cfg.max_doublings:
            raise QuadratureError(
                f"integrand does not decay: truncation reached [{left_edge}, {right_edge}]",
                ("tail", left_edge, right_edge),
            )
        new = []
        if "left" in grow:
            new += P.add_piece(line_map, 2 * left_edge, left_edge, cfg.panel_width)
            left_edge *= 2
        if "right" in grow:
            new += P.add_piece(line_map, right_edge, 2 * right_edge, cfg.panel_width)
            right_edge *= 2
        P.evaluate(new)
        P.panels += new
        doublings += 1

    val, err = P.total()
    total = val + loop_val
    tail = _tail_bound(f, P, h, left_edge, right_edge, decay, line_map)
    return ComplexVal(
        complex(total),
        float(err + loop_err + tail + 1e-15 * abs(total)),
        meta={"im_r": h, "T": max(-left_edge, right_edge), "T_left": -left_edge, "T_right": right_edge,
              "panels": len(P.panels), "loops": len(loops), "arcs": len(arcs)},
    )


def _refine(P: _Panels, cfg: QuadratureConfig, extra: complex):
    while True:
        val, err = P.total()
        target = max(cfg.abs_tol, cfg.rel_tol * abs(val + extra))
        if err <= target:
            return
        if len(P.panels) >= cfg.max_panels:
            worst = max(P.panels, key=lambda p: p[4])
            raise QuadratureError(
                f"no convergence after {len(P.panels)} panels (error {err:.3g} > {target:.3g})",
                (worst[0], worst[1], worst[2], worst[4]),
            )
        length = sum(p[2] - p[1] for p in P.panels)
        cut = 0.5 * target / max(len(P.panels), 1)
        split, keep = [], []
        for p in P.panels:
            if p[4] > cut and p[4] > 0.01 * target * (p[2] - p[1]) / length:
                mid = (p[1] + p[2]) / 2
                split += [[p[0], p[1], mid, None, None], [p[0], mid, p[2], None, None]]
            else:
                keep.append(p)
        if not split:
            worst = max(P.panels, key=lambda p: p[4])
            split = [[worst[0], worst[1], (worst[1] + worst[2]) / 2, None, None],
                     [worst[0], (worst[1] + worst[2]) / 2, worst[2], None, None]]
            keep = [p for p in P.panels if p is not worst]
        P.evaluate(split)
        P.panels = keep + split


def _edge_contrib(P: _Panels, a, b, line_map):
    s = 0j
    for p in P.panels:
        if P.maps[p[0]] is line_map and p[1] >= a - 1e-12 and p[2] <= b + 1e-12:
            s += p[3]
    return abs(s)


def _tail_bound(f, P, h, left, right, decay, line_map):
    ends = np.array([left + 1j * h, right + 1j * h])
    fe = np.abs(_call(f, ends))
    if decay is not None:
        kl, kr = decay
        return float(fe[0] / kl + fe[1] / kr)
    # geometric estimate from the outermost unit segments
    out = 0.0
    for a, b, side in ((left, left + 1, 0), (right - 1, right, 1)):
        last = _edge_contrib(P, a, b, line_map)
        prev = _edge_contrib(P, a + (1 if side == 0 else -1), b + (1 if side == 0 else -1), line_map)
        r = last / prev if prev > 0 else 0.0
        out += last * r / (1 - r) if r < 0.9 else 10 * last
    return float(out)


# --------------------------------------------------------------- pole families

FAMILY_KINDS = {
    # kind: (required side, how the pole is located)
    "G(a-it)": "above",
    "1/G(a+it)": "above",
    "G(a+it)": "below",
    "1/G(a-it)": "below",
}
_ALIASES = {
    "gb_minus": "G(a-it)",
    "inv_gb_plus": "1/G(a+it)",
    "gb_plus": "G(a+it)",
    "inv_gb_minus": "1/G(a-it)",
}


def _lattice(b: float, wmax: float):
    out = []
    n = 0
    while n * b <= wmax:
        m = 0
        while n * b + m / b <= wmax:
            out.append((n, m, n * b + m / b))
            m += 1
        n += 1
    return sorted(out, key=lambda x: x[2])


def _pole_location(kind: str, a: complex, w: float, Q: float) -> complex:
    if kind == "G(a-it)":
        return -1j * (a + w)
    if kind == "1/G(a+it)":
        return -1j * (Q + w - a)
    if kind == "G(a+it)":
        return 1j * (a + w)
    if kind == "1/G(a-it)":
        return 1j * (Q + w - a)
    raise ValueError(f"unknown family kind {kind!r}")


def family_poles(kind: str, a: complex, ctx: BContext, height: float = 0.0, window: float = 1.0):
    """Poles of one family that lie within ``window`` of the line or on its wrong side."""
    kind = _ALIASES.get(kind, kind)
    if kind not in FAMILY_KINDS:
        raise ValueError(f"unknown family kind {kind!r}")
    side = FAMILY_KINDS[kind]
    a = complex(a)
    Q = ctx.Q
    # Im of the pole is monotone in w: decreasing for 'above' families, increasing for 'below'
    base = _pole_location(kind, a, 0.0, Q).imag
    if side == "above":
        wmax = base - (height - window)
    else:
        wmax = (height + window) - base
    if wmax < 0:
        return []
    out = []
    for n, m, w in _lattice(ctx.b, wmax):
        out.append((_pole_location(kind, a, w, Q), side, (n, m)))
    return out


def standard_contour(families, ctx: BContext | None = None, height: float = 0.0,
                     radius: float | None = None, window: float = 1.0,
                     truncation: float | None = None) -> ContourSpec:
    """Contour above the poles of G(a-it), 1/G(a+it) and below those of G(a+it), 1/G(a-it)."""
    ctx = ctx or BContext()
    R0 = radius if radius is not None else min(ctx.b, 1 / ctx.b) / 4
    poles = []
    for kind, a in families:
        for p, side, nm in family_poles(kind, a, ctx, height, window):
            poles.append((p, side, f"{_ALIASES.get(kind, kind)}[a={complex(a)}, n={nm[0]}, m={nm[1]}]"))
    # merge coincident poles, flag contradictions
    merged = []
    for p, side, name in poles:
        for entry in merged:
            if abs(entry[0] - p) < 1e-12:
                if entry[1] != side:
                    raise ContourError(f"pole {p} is required both above and below ({entry[2]} vs {name})")
                break
        else:
            merged.append((p, side, name))
    R = R0
    last = None
    for _ in range(4):
        try:
            detours = []
            for p, side, name in merged:
                d = Detour(p, side, R, name)
                spec_kind = ContourSpec(height, (d,)).kind_of(d)
                if spec_kind != "none":
                    detours.append(d)
            spec = ContourSpec(height, tuple(detours), truncation)
            _check_foreign_poles(spec, merged)
            return spec
        except ContourError as exc:
            last = exc
            R /= 2
    raise ContourError(f"detour collision not resolved after halving the radius three times: {last}")


def _check_foreign_poles(spec: ContourSpec, poles):
    for d in spec.detours:
        c, r = spec._disk(d)
        for p, _, name in poles:
            if abs(p - d.pole) < 1e-12:
                continue
            if abs(p - c) <= r:
                raise ContourError(f"pole {name} at {p} lies inside the detour disk of {d.pole}")
        # arcs must not cut through a pole sitting on the line
        if spec.kind_of(d) == "arc":
            for p, _, name in poles:
                if abs(p - d.pole) > 1e-12 and abs(p.imag - spec.height) < 1e-12 and abs(p.real - d.pole.real) <= r:
                    raise ContourError(f"pole {name} sits on the arc of {d.pole}")


# ------------------------------------------------------------ identity checks


@dataclass
class ResidualReport:
    name: str
    params: dict
    lhs: complex
    rhs: complex
    rel_residual: float
    error_bound: float = 0.0
    meta: dict = field(default_factory=dict)

    def passed(self, tol: float) -> bool:
        return bool(self.rel_residual <= tol)

    def to_json(self) -> dict:
        def c(z):
            z = complex(z)
            return {"re": z.real, "im": z.imag}

        return {
            "params": {k: (c(v) if isinstance(v, complex) else v) for k, v in self.params.items()},
            "lhs": c(self.lhs),
            "rhs": c(self.rhs),
            "rel_residual": float(self.rel_residual),
        }


def _rel(lhs, rhs) -> float:
    return float(abs(lhs - rhs) / max(abs(rhs), abs(lhs), 1e-300))


def _G(z, ctx):
    v, _ = gb_values(np.asarray(z, dtype=complex), ctx)
    return v


def _G1(z, ctx) -> complex:
    return complex(_G(np.array([z]), ctx)[0])


def tau_beta_check(alpha, beta, ctx: BContext | None = None, cfg: QuadratureConfig | None = None) -> ResidualReport:
    """int e^{-2 pi tau beta} G(alpha + i tau)/G(Q + i tau) d tau = G(alpha)G(beta)/G(alpha+beta)."""
    ctx = ctx or BContext()
    alpha, beta = complex(alpha), complex(beta)
    Q = ctx.Q
    if not beta.real > 0:
        raise ValueError("Tau-Beta needs Re(beta) > 0")
    if not (alpha + beta).real < Q:
        raise ValueError("Tau-Beta needs Re(alpha + beta) < Q")
    spec = standard_contour([("G(a+it)", alpha), ("1/G(a+it)", Q)], ctx)

    def f(t):
        return np.exp(-2 * math.pi * t * beta) * _G(alpha + 1j * t, ctx) / _G(Q + 1j * t, ctx)

    decay = (2 * math.pi * (Q - (alpha + beta).real), 2 * math.pi * beta.real)
    lhs = integrate(f, spec, cfg, decay)
    rhs = _G1(alpha, ctx) * _G1(beta, ctx) / _G1(alpha + beta, ctx)
    return ResidualReport("tau-beta", {"alpha": alpha, "beta": beta}, lhs.value, rhs,
                          _rel(lhs.value, rhs), lhs.abs_error_bound, lhs.meta)


def rel45_check(alpha, beta, gamma, ctx: BContext | None = None, cfg: QuadratureConfig | None = None,
                variant: str = "standard") -> ResidualReport:
    """The 4-5 relation.

    ``standard`` uses weight e^{-2 pi gamma tau}.  ``reflected`` uses weight
    e^{-2 pi Q tau} and right-hand side factor e^{-2 pi i alpha beta};
    ``reflected-real-phase`` keeps the factor e^{-2 pi alpha beta} without the i.
    """
    ctx = ctx or BContext()
    a, bb, g = complex(alpha), complex(beta), complex(gamma)
    Q = ctx.Q
    if variant not in ("standard", "reflected", "reflected-real-phase"):
        raise ValueError(f"unknown variant {variant!r}")
    if not g.real > 0:
        raise ValueError("4-5 relation needs Re(gamma) > 0")
    if variant == "standard":
        w = g
    else:
        w = Q
    s = a + bb + g
    spec = standard_contour([("G(a+it)", a), ("G(a+it)", bb), ("1/G(a+it)", s), ("1/G(a+it)", Q)], ctx)

    def f(t):
        num = _G(a + 1j * t, ctx) * _G(bb + 1j * t, ctx)
        den = _G(s + 1j * t, ctx) * _G(Q + 1j * t, ctx)
        return np.exp(-2 * math.pi * w * t) * num / den

    # |integrand| ~ e^{-2 pi Re(w) t} * e^{pi t (Re(a+b) - Re(s) - Q) ... } towards +inf; both ends decay
    lhs = integrate(f, spec, cfg)
    rhs = _G1(a, ctx) * _G1(bb, ctx) * _G1(g, ctx) / (_G1(a + g, ctx) * _G1(bb + g, ctx))
    if variant == "reflected":
        rhs *= np.exp(-2j * math.pi * a * bb)
    elif variant == "reflected-real-phase":
        rhs *= np.exp(-2 * math.pi * a * bb)
    return ResidualReport(f"rel45-{variant}", {"alpha": a, "beta": bb, "gamma": g}, lhs.value, complex(rhs),
                          _rel(lhs.value, rhs), lhs.abs_error_bound, lhs.meta)


def fourier_check(r: float, ctx: BContext | None = None, cfg: QuadratureConfig | None = None,
                  variant: str = "first") -> ResidualReport:
    """Fourier transforms of 1/G_b(Q + it) against conj(zeta)/G(Q/2 - ir) and zeta G(Q/2 - ir)."""
    ctx = ctx or BContext()
    r = float(r)
    if abs(r) > 3:
        raise ValueError("|r| must be at most 3")
    Q = ctx.Q
    h = -min(ctx.b, 1 / ctx.b) / 2
    # the line has to sit below the real axis for the chirp e^{-pi i t^2} to decay
    spec = standard_contour([("1/G(a+it)", Q)], ctx, height=h)
    if variant == "first":
        def f(t):
            return np.exp(2j * math.pi * t * r - 1j * math.pi * t * t) / _G(Q + 1j * t, ctx)
        rhs = np.conj(ctx.zeta) / _G1(Q / 2 - 1j * r, ctx)
    elif variant == "second":
        def f(t):
            return np.exp(2j * math.pi * t * r - math.pi * Q * t) / _G(Q + 1j * t, ctx)
        rhs = ctx.zeta * _G1(Q / 2 - 1j * r, ctx)
    else:
        raise ValueError(f"unknown variant {variant!r}")
    lhs = integrate(f, spec, cfg)
    return ResidualReport(f"fourier-{variant}", {"r": r}, lhs.value, complex(rhs), _rel(lhs.value, rhs),
                          lhs.abs_error_bound, lhs.meta)


def qbeta_coeff(t, tau, ctx: BContext | None = None) -> ComplexVal:
    """S_b(Q + b t) / (S_b(Q + b tau) S_b(Q + b t - b tau))."""
    ctx = ctx or BContext()
    b, Q = ctx.b, ctx.Q
    t, tau = complex(t), complex(tau)
    den_args = [Q + b * tau, Q + b * (t - tau)]
    for z in den_args:
        d, n, m = nearest_zero(z, b)
        if d <= ctx.pole_tol:
            raise PoleError(z, n, m, kind="zero")
    v, e = sb_values(np.array([Q + b * t] + den_args), ctx, with_error=True)
    val = v[0] / (v[1] * v[2])
    rel = sum(e[i] / abs(v[i]) for i in range(3))
    return ComplexVal(complex(val), float(abs(val) * rel))


def qbeta_shift_ratio(t0, tau0, n: int, k: int, ctx: BContext | None = None):
    """Compare qbeta(t0+n, tau0+k)/qbeta(t0, tau0) with the q-number product

        prod_{j<=n}[t0+j] / (prod_{j<=k}[tau0+j] prod_{j<=n-k}[t0-tau0+j]),

    which at t0 = tau0 = 0 is the q-binomial.  Returns (numeric ratio, product).
    """
    from .qfield import qnumber_numeric

    ctx = ctx or BContext()
    num = qbeta_coeff(t0 + n, tau0 + k, ctx).value / qbeta_coeff(t0, tau0, ctx).value
    prod = 1 + 0j
    for j in range(1, n + 1):
        prod *= qnumber_numeric(t0 + j, ctx)
    for j in range(1, k + 1):
        prod /= qnumber_numeric(tau0 + j, ctx)
    for j in range(1, n - k + 1):
        prod /= qnumber_numeric(t0 - tau0 + j, ctx)
    return complex(num), complex(prod)

"""Verification suites behind ``verify``: each returns a :class:`Report`.

Random sweeps draw from ``numpy.random.default_rng(seed)`` in a fixed order,
so a report is a pure function of its arguments.
"""
from __future__ import annotations

import math
import time

import numpy as np

from . import contour as ci
from .positive import calculus as pc
from .positive import kernel as pk
from .qdilog import BContext, gb_values, nearest_pole, nearest_zero, sb_values
from .qfield import QRat, qbinomial, qnumber
from .report import Report
from .sl2 import cg_table, verify_decomposition
from .sl3 import verify_sl3_relations

__all__ = [
    "qdilog_suite",
    "integrals_suite",
    "sl2_suite",
    "pascal_suite",
    "sl3_suite",
    "positive_rep_suite",
    "kernel_suite",
    "QDILOG_CHECKS",
    "INTEGRAL_SUITES",
    "KERNEL_CHECKS",
]

QDILOG_CHECKS = ("reflection", "funceq", "duality", "conjugation", "unitarity", "asymp")
INTEGRAL_SUITES = ("tau-beta", "rel45", "fourier")
KERNEL_CHECKS = ("eqE", "eqF", "const", "measure", "kashaev", "lem-cp", "roundtrip")


def _timed(fn):
    def wrapper(*args, **kwargs):
        t0 = time.perf_counter()
        rep = fn(*args, **kwargs)
        rep.wall_time = time.perf_counter() - t0
        return rep

    wrapper.__name__ = fn.__name__
    wrapper.__doc__ = fn.__doc__
    return wrapper


def _rel(a, b):
    a, b = np.asarray(a), np.asarray(b)
    return np.abs(a - b) / np.maximum(np.maximum(np.abs(a), np.abs(b)), 1e-300)


def _G(z, ctx, method="auto"):
    return gb_values(np.asarray(z, dtype=complex), ctx, method)[0]


def _Sv(z, ctx):
    return sb_values(np.asarray(z, dtype=complex), ctx)[0]


# ------------------------------------------------------------------ qdilog


def _away_from_lattice(z, b, dist=0.05):
    return nearest_pole(z, b)[0] > dist and nearest_zero(z, b)[0] > dist


@_timed
def qdilog_suite(ctx: BContext | None = None, samples: int = 50, seed: int = 0, checks=QDILOG_CHECKS,
                 tol: float = 1e-8) -> Report:
    """Functional identities of G_b / S_b on seeded random points."""
    ctx = ctx or BContext()
    b, Q = ctx.b, ctx.Q
    rng = np.random.default_rng(seed)
    rep = Report("qdilog", {"b": b, "samples": samples, "checks": list(checks)}, seed=seed)
    n = samples

    def strip(lo, hi, im=2.0):
        return rng.uniform(lo, hi, n) + 1j * rng.uniform(-im, im, n)

    for check in QDILOG_CHECKS:
        # draw even for skipped checks so the stream does not depend on the selection
        if check == "reflection":
            z = strip(0.1, Q - 0.1)
            if check in checks:
                lhs = _Sv(z, ctx) * _Sv(Q - z, ctx)
                for zi, l in zip(z, lhs):
                    rep.add("reflection S(z)S(Q-z)=1", {"z": complex(zi)}, abs(l - 1), tol, complex(l), 1 + 0j)
        elif check == "funceq":
            for label, step in (("b", b), ("1/b", 1 / b)):
                m = 0.1 * min(b, 1 / b) + 0.05
                z = strip(m, Q - step - m, 1.5)
                if check not in checks:
                    continue
                lhs = _G(z + step, ctx, "direct")
                rhs = (1 - np.exp(2j * math.pi * step * z)) * _G(z, ctx, "direct")
                for zi, l, r in zip(z, lhs, rhs):
                    rep.add(f"funceq {label}-shift", {"z": complex(zi)}, _rel(l, r), tol, complex(l), complex(r))
        elif check == "duality":
            z = strip(-1.5, Q + 1.5, 1.5)
            if check in checks:
                keep = np.array([_away_from_lattice(zi, b) and _away_from_lattice(zi, 1 / b) for zi in z])
                z = z[keep]
                lhs = _G(z, ctx)
                rhs = _G(z, ctx.dual())
                for zi, l, r in zip(z, lhs, rhs):
                    rep.add("self-duality b <-> 1/b", {"z": complex(zi)}, _rel(l, r), tol, complex(l), complex(r))
        elif check == "conjugation":
            z = strip(0.1, Q - 0.1)
            if check in checks:
                lhs = np.conj(_Sv(z, ctx))
                rhs = 1 / _Sv(Q - np.conj(z), ctx)
                for zi, l, r in zip(z, lhs, rhs):
                    rep.add("conjugation", {"z": complex(zi)}, _rel(l, r), tol, complex(l), complex(r))
        elif check == "unitarity":
            x = rng.uniform(-3, 3, n)
            if check in checks:
                vals = _Sv(Q / 2 + 1j * x, ctx)
                for xi, v in zip(x, vals):
                    rep.add("|S(Q/2+ix)|=1", {"x": float(xi)}, abs(abs(v) - 1), tol, complex(abs(v)), 1 + 0j)
        elif check == "asymp":
            u = rng.uniform(0.2, Q - 0.2, n)
            if check in checks:
                up = _G(u + 8j, ctx)
                zd = u - 8j
                down = _G(zd, ctx) * np.exp(-1j * math.pi * zd * (zd - Q))
                for ui, g in zip(u, up):
                    rep.add("asymptotic Im z=+8", {"z": complex(ui + 8j)}, _rel(g, np.conj(ctx.zeta)), tol,
                            complex(g), complex(np.conj(ctx.zeta)))
                for ui, g in zip(u, down):
                    rep.add("asymptotic Im z=-8", {"z": complex(ui - 8j)}, _rel(g, ctx.zeta), tol,
                            complex(g), complex(ctx.zeta))
    unknown = set(checks) - set(QDILOG_CHECKS)
    if unknown:
        raise ValueError(f"unknown qdilog checks: {sorted(unknown)}")
    return rep


# --------------------------------------------------------------- integrals


def _report_from(rep: Report, rr: ci.ResidualReport, tol: float):
    rep.add(rr.name, rr.params, rr.rel_residual, tol, complex(rr.lhs), complex(rr.rhs),
            error_bound=rr.error_bound, im_r=rr.meta.get("im_r"), T=rr.meta.get("T"))


@_timed
def integrals_suite(ctx: BContext | None = None, suites=INTEGRAL_SUITES, samples: int | None = None,
                    seed: int = 0, tol: float = 1e-6, cfg: ci.QuadratureConfig | None = None) -> Report:
    """Tau-Beta, 4-5 (both variants) and Fourier identities.

    Default sample counts are 20 (Tau-Beta), 10 per 4-5 variant and the five
    r-values -1.5, -0.5, 0, 0.5, 1.5 per Fourier variant.
    """
    ctx = ctx or BContext()
    Q = ctx.Q
    rep = Report("integrals", {"b": ctx.b, "suites": list(suites), "samples": samples}, seed=seed)
    unknown = set(suites) - set(INTEGRAL_SUITES)
    if unknown:
        raise ValueError(f"unknown integral suites: {sorted(unknown)}")
    # each suite has its own stream so selections do not shift one another
    streams = {name: np.random.default_rng([seed, i]) for i, name in enumerate(INTEGRAL_SUITES)}
    if "tau-beta" in suites:
        r = streams["tau-beta"]
        for _ in range(samples or 20):
            a = Q * r.uniform(0.05, 0.5) + 1j * r.uniform(-0.3, 0.3)
            bb = Q * r.uniform(0.05, 0.45) + 1j * r.uniform(-0.3, 0.3)
            _report_from(rep, ci.tau_beta_check(a, bb, ctx, cfg), tol)
    if "rel45" in suites:
        r = streams["rel45"]
        for _ in range(samples or 10):
            # the reflected weight leaves decay e^{2 pi Re(g) t} as t -> -inf; keep Re(g) away from 0
            a, bb = (Q * r.uniform(0.05, 0.3) + 1j * r.uniform(-0.2, 0.2) for _ in range(2))
            g = Q * r.uniform(0.15, 0.3) + 1j * r.uniform(-0.2, 0.2)
            for variant in ("standard", "reflected"):
                _report_from(rep, ci.rel45_check(a, bb, g, ctx, cfg, variant), tol)
    if "fourier" in suites:
        r = streams["fourier"]
        rs = [-1.5, -0.5, 0.0, 0.5, 1.5] if samples is None else list(r.uniform(-1.5, 1.5, samples))
        for x in rs:
            for variant in ("first", "second"):
                _report_from(rep, ci.fourier_check(float(x), ctx, cfg, variant), tol)
    return rep


# ------------------------------------------------------------------- exact


def _crystal_ok(M, N, S):
    t = cg_table(M, N, S)
    d = t.d
    if t[(0, d, 0)] != QRat(1):
        return f"C(0,{d},0) != 1"
    for m in range(1, min(d, M) + 1):
        c = t[(m, d - m, 0)]
        if not c.is_zero and not c.is_poly_in_qZq():
            return f"C({m},{d - m},0) = {c} is not in qZ[q]"
    return None


@_timed
def sl2_suite(pairs=None, max_mn: int = 6) -> Report:
    """Decomposition of V_M (x) V_N plus crystal normalisation, exact over Q(q).

    ``pairs`` defaults to every (M, N) with M, N <= max_mn.  Residuals are 0
    (holds) or 1 (fails).
    """
    if pairs is None:
        pairs = [(M, N) for M in range(max_mn + 1) for N in range(max_mn + 1)]
    rep = Report("sl2-cg", {"pairs": [list(p) for p in pairs]})
    for M, N in pairs:
        r = verify_decomposition(M, N)
        rep.add("decomposition", {"M": M, "N": N}, 0.0 if r.passed else 1.0, 0.5,
                components=r.components, dimension_check=r.dimension_check, counterexample=r.counterexample)
        for S in r.components:
            msg = _crystal_ok(M, N, S)
            rep.add("crystal normalisation", {"M": M, "N": N, "S": S}, 0.0 if msg is None else 1.0, 0.5,
                    counterexample=msg)
    return rep


@_timed
def pascal_suite(tmax: int = 12, kmax: int = 10, smax: int = 12) -> Report:
    """Both Pascal identities, exactly."""
    q = QRat.monomial
    rep = Report("pascal", {"tmax": tmax, "kmax": kmax, "smax": smax})
    bad = []
    count = 0
    for t in range(tmax + 1):
        for r in range(t + 1):
            lhs = q(t - r) * qbinomial(t, r) + q(-r - 1) * qbinomial(t, r + 1)
            count += 1
            if lhs != qbinomial(t + 1, r + 1):
                bad.append((t, r))
    rep.add("pascal", {"range": f"0<=r<=t<={tmax}", "checked": count}, float(len(bad)), 0.5,
            failures=bad[:5])
    bad = []
    count = 0
    for S in range(smax + 1):
        for k in range(kmax):
            for r in range(k + 2):
                lhs = qnumber(S - r + 1) * qbinomial(k, r - 1) + qnumber(S - k - r) * qbinomial(k, r)
                count += 1
                if lhs != qnumber(S - k) * qbinomial(k + 1, r):
                    bad.append((S, k, r))
    rep.add("generalized pascal", {"range": f"0<=r<=k+1<={kmax}, S<={smax}", "checked": count},
            float(len(bad)), 0.5, failures=bad[:5])
    return rep


@_timed
def sl3_suite(pairs=None, max_sum: int = 5, box: str = "extended") -> Report:
    """Relations and Weyl dimension of the canonical span, exact over Q(q)."""
    if pairs is None:
        pairs = [(a, s - a) for s in range(max_sum + 1) for a in range(s + 1)]
    rep = Report("sl3", {"pairs": [list(p) for p in pairs], "box": box})
    for N1, N2 in pairs:
        r = verify_sl3_relations(N1, N2, box)
        rep.add("relations on canonical span", {"N1": N1, "N2": N2}, 0.0 if r.passed else 1.0, 0.5,
                dimension=r.dimension, weyl=r.expected, reading=r.reading, readings=r.readings,
                counterexample=r.counterexample)
    return rep


# ---------------------------------------------------------------- positive


@_timed
def positive_rep_suite(lambdas=(0.0, 0.4, 1.3), ctx: BContext | None = None, lam2=None,
                       tol: float = 1e-12) -> Report:
    ctx = ctx or BContext()
    rep = Report("positive-rep", {"b": ctx.b, "lambdas": list(lambdas), "lambda2": lam2})
    for lam in lambdas:
        r = pc.verify_positive_rep(lam, ctx, lam2=lam2, tol=tol)
        for name, res in r.residuals.items():
            rep.add(name, {"lambda": lam, "lambda2": r.lam2}, res, tol)
    return rep


@_timed
def kernel_suite(ctx: BContext | None = None, checks=KERNEL_CHECKS, samples: int = 5, seed: int = 0,
                 params: pk.KernelParams | None = None, tol: float | None = None,
                 cfg: ci.QuadratureConfig | None = None) -> Report:
    """Kernel functional equations, constant, measure and transform checks.

    Tolerances: 1e-4 (functional equations, kernel ratio, Lem-cp), 1e-6
    (|const| S_b modulus), 1e-8 (Plancherel forms, Kashaev eigen-identity) and
    1e-3 (transform round trip).  ``tol`` overrides all of them.
    """
    ctx = ctx or BContext()
    unknown = set(checks) - set(KERNEL_CHECKS)
    if unknown:
        raise ValueError(f"unknown kernel checks: {sorted(unknown)}")
    T = (lambda default: default if tol is None else tol)
    rep = Report("kernel", {"b": ctx.b, "checks": list(checks), "samples": samples,
                            "params": None if params is None else vars(params)}, seed=seed)
    if params is None:
        sweep = pk.kernel_sweep(samples, seed)
    else:
        rng = np.random.default_rng(seed)
        sweep = [(float(x), float(y), params) for x, y in rng.uniform(-0.5, 0.5, (samples, 2))]

    def pdict(x, y, p):
        return {"x": x, "y": y, "alpha": p.alpha, "lambda1": p.lambda1, "lambda2": p.lambda2}

    for which in ("eqE", "eqF"):
        if which in checks:
            for x, y, p in sweep:
                rr = pk.functional_residual(which, x, y, p, ctx, cfg)
                rep.add(f"{which} kernel_C", pdict(x, y, p), rr.rel_residual, T(1e-4),
                        complex(rr.lhs), complex(rr.rhs), error_bound=rr.error_bound, **rr.meta)
    if "const" in checks:
        p = params or pk.KernelParams(0.3, 0.5, 0.6)
        c = pk.kernel_const(p, ctx)
        pts = [(0.1, -0.2), (0.4, 0.3), (-0.3, 0.2), (0.0, 0.5)]
        ratios = []
        for x, y in pts:
            ratios.append(pk.kernel_C_phi(x, y, p, ctx, cfg).value / pk.kernel_C(x, y, p, ctx, cfg).value)
        for (x, y), rt in zip(pts, ratios):
            rep.add("phi/C ratio = const", pdict(x, y, p), _rel(rt, c), T(1e-4), complex(rt), complex(c))
        spread = max(_rel(r1, r2) for r1 in ratios for r2 in ratios)
        rep.add("phi/C ratio (x,y)-independent", {"points": pts, **vars(p)}, spread, T(1e-4))
        rr = pk.functional_residual("eqE", 0.1, -0.2, p, ctx, cfg, kernel="phi")
        rep.add("eqE kernel_C_phi", pdict(0.1, -0.2, p), rr.rel_residual, T(1e-4), complex(rr.lhs), complex(rr.rhs))
    if "measure" in checks:
        rng = np.random.default_rng([seed, 1])
        for _ in range(10):
            p = pk.KernelParams(*rng.uniform(0, 1.0, 2), rng.uniform(0.1, 2.0))
            v = abs(pk.kernel_const(p, ctx)) ** 2 * pk.plancherel_density_sb(p.alpha, ctx)
            rep.add("|const|^2 |S_b(Q+2ia)|^2 = 1", vars(p), abs(v - 1), T(1e-6), complex(v), 1 + 0j)
        for a in np.linspace(0.1, 3.0, 10):
            d1 = pk.plancherel_density(a, ctx)
            d2 = pk.plancherel_density_sb(a, ctx)
            rep.add("Plancherel sinh form = |S_b|^2 form", {"alpha": float(a)}, _rel(d1, d2), T(1e-8),
                    complex(d1), complex(d2))
    if "kashaev" in checks:
        rng = np.random.default_rng([seed, 2])
        pts = [(0.6, 0.3), (1.1, -0.7)] + [(float(a), float(x)) for a, x in
                                            zip(rng.uniform(0.1, 2.0, 3), rng.uniform(-1.5, 1.5, 3))]
        for a, x in pts:
            rep.add("Kashaev eigen-identity", {"alpha": a, "x": x}, pk.kashaev_eigen_check(a, x, ctx), T(1e-8))
    if "lem-cp" in checks:
        for x, y, a in ((0.3 + 0.3j, -0.4, 0.7), (-0.5 + 0.6j, 0.2, 0.4), (0.1 + 0.45j, 0.6, 1.1)):
            rr = pk.lem_cp_check(x, y, a, 0.3, 0.5, ctx, cfg)
            rep.add("Lem-cp closed form", rr.params, rr.rel_residual, T(1e-4), complex(rr.lhs), complex(rr.rhs))
    if "roundtrip" in checks:
        rt = pk.kashaev_roundtrip(ctx=ctx)
        rep.add("Kashaev round trip |c|=1", {"points": [0.35, -0.6, 1.1]}, abs(rt["abs_constant"] - 1), T(1e-3),
                rt["constant"], 1 + 0j)
        for x0, r in zip((0.35, -0.6, 1.1), rt["residuals"]):
            rep.add("Kashaev round trip", {"x": x0}, r, T(1e-3))
    return rep

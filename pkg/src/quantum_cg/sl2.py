"""Finite-dimensional U_q(sl2) modules V_N, their tensor products and exact
Clebsch-Gordan coefficients.

Basis vectors of V_N are indexed by ``n`` in ``0..N``; the vector with index
``n`` has weight ``N - 2n``.  Coproduct convention::

    D(E) = E(x)1 + K(x)E,   D(F) = 1(x)F + F(x)K^-1,   D(K) = K(x)K
"""
from __future__ import annotations

from dataclasses import dataclass, field

from .qfield import QRat, q, qbinomial, qnumber

__all__ = [
    "RepVector",
    "TensorVector",
    "CGTable",
    "DecompositionReport",
    "act",
    "coproduct_act",
    "cg_table",
    "cg_coefficient",
    "cg_vector",
    "verify_decomposition",
    "check_relations",
]

GENERATORS = ("E", "F", "K", "Kinv")


def _qpow(k: int) -> QRat:
    return QRat.monomial(k)


def _accumulate(out: dict, key, c: QRat):
    if c.is_zero:
        return
    v = out.get(key)
    v = c if v is None else v + c
    if v.is_zero:
        out.pop(key, None)
    else:
        out[key] = v


class _SparseVector:
    """Shared linear structure for sparse vectors with QRat coefficients."""

    coeffs: dict

    def _new(self, coeffs):
        raise NotImplementedError

    def _same_space(self, other):
        raise NotImplementedError

    def __add__(self, other):
        self._same_space(other)
        out = dict(self.coeffs)
        for k, c in other.coeffs.items():
            _accumulate(out, k, c)
        return self._new(out)

    def __neg__(self):
        return self._new({k: -c for k, c in self.coeffs.items()})

    def __sub__(self, other):
        return self + (-other)

    def scale(self, c) -> "_SparseVector":
        c = QRat(c)
        if c.is_zero:
            return self._new({})
        return self._new({k: v * c for k, v in self.coeffs.items()})

    def __rmul__(self, c):
        return self.scale(c)

    def is_zero(self) -> bool:
        return not self.coeffs

    def __eq__(self, other):
        if type(other) is not type(self):
            return NotImplemented
        try:
            self._same_space(other)
        except ValueError:
            return False
        return self.coeffs == other.coeffs

    def __hash__(self):
        return hash(tuple(sorted(self.coeffs)))


@dataclass(eq=False)
class RepVector(_SparseVector):
    N: int
    coeffs: dict = field(default_factory=dict)

    def __post_init__(self):
        if self.N < 0:
            raise ValueError("N must be nonnegative")
        clean = {}
        for n, c in self.coeffs.items():
            if not 0 <= n <= self.N:
                raise ValueError(f"index {n} outside 0..{self.N}")
            c = QRat(c)
            if not c.is_zero:
                clean[n] = c
        self.coeffs = clean

    @classmethod
    def basis(cls, N: int, n: int) -> "RepVector":
        return cls(N, {n: QRat(1)})

    def _new(self, coeffs):
        return RepVector(self.N, coeffs)

    def _same_space(self, other):
        if self.N != other.N:
            raise ValueError("vectors live in different modules")


@dataclass(eq=False)
class TensorVector(_SparseVector):
    M: int
    N: int
    coeffs: dict = field(default_factory=dict)

    def __post_init__(self):
        clean = {}
        for (m, n), c in self.coeffs.items():
            if not (0 <= m <= self.M and 0 <= n <= self.N):
                raise ValueError(f"index {(m, n)} outside the tensor box")
            c = QRat(c)
            if not c.is_zero:
                clean[(m, n)] = c
        self.coeffs = clean

    @classmethod
    def basis(cls, M: int, N: int, m: int, n: int) -> "TensorVector":
        return cls(M, N, {(m, n): QRat(1)})

    def _new(self, coeffs):
        return TensorVector(self.M, self.N, coeffs)

    def _same_space(self, other):
        if (self.M, self.N) != (other.M, other.N):
            raise ValueError("vectors live in different tensor products")


def _act_index(gen: str, N: int, n: int):
    """Action of a generator on basis index n of V_N, as [(target, coeff)]."""
    if gen == "E":
        return [(n - 1, qnumber(n))] if n > 0 else []
    if gen == "F":
        return [(n + 1, qnumber(N - n))] if n < N else []
    if gen == "K":
        return [(n, _qpow(N - 2 * n))]
    if gen == "Kinv":
        return [(n, _qpow(2 * n - N))]
    raise ValueError(f"unknown generator {gen!r}")


def act(gen: str, v: RepVector) -> RepVector:
    """E v_{N-2n} = [n] v_{N-2n+2}, F v_{N-2n} = [N-n] v_{N-2n-2}, K v = q^{N-2n} v."""
    out: dict = {}
    for n, c in v.coeffs.items():
        for t, a in _act_index(gen, v.N, n):
            _accumulate(out, t, a * c)
    return RepVector(v.N, out)


def coproduct_act(gen: str, t: TensorVector) -> TensorVector:
    M, N = t.M, t.N
    out: dict = {}
    for (m, n), c in t.coeffs.items():
        if gen == "E":
            # E(x)1 + K(x)E
            if m > 0:
                _accumulate(out, (m - 1, n), qnumber(m) * c)
            if n > 0:
                _accumulate(out, (m, n - 1), _qpow(M - 2 * m) * qnumber(n) * c)
        elif gen == "F":
            # 1(x)F + F(x)K^-1
            if n < N:
                _accumulate(out, (m, n + 1), qnumber(N - n) * c)
            if m < M:
                _accumulate(out, (m + 1, n), _qpow(2 * n - N) * qnumber(M - m) * c)
        elif gen == "K":
            _accumulate(out, (m, n), _qpow(M + N - 2 * m - 2 * n) * c)
        elif gen == "Kinv":
            _accumulate(out, (m, n), _qpow(2 * m + 2 * n - M - N) * c)
        else:
            raise ValueError(f"unknown generator {gen!r}")
    return TensorVector(M, N, out)


def check_relations(N: int):
    """Check KE=q^2EK, KF=q^-2FK and [E,F]=(K-K^-1)/(q-q^-1) on every basis vector of V_N.

    Returns None when all hold, else a description of the first failure.
    """
    denom = q - q.inverse()
    for n in range(N + 1):
        v = RepVector.basis(N, n)
        E = lambda w: act("E", w)
        F = lambda w: act("F", w)
        K = lambda w: act("K", w)
        Ki = lambda w: act("Kinv", w)
        if K(E(v)) != E(K(v)).scale(q ** 2):
            return f"KE=q^2EK fails on V_{N}, n={n}"
        if K(F(v)) != F(K(v)).scale(q ** -2):
            return f"KF=q^-2FK fails on V_{N}, n={n}"
        if E(F(v)) - F(E(v)) != (K(v) - Ki(v)).scale(denom.inverse()):
            return f"[E,F] fails on V_{N}, n={n}"
    return None


@dataclass
class CGTable:
    M: int
    N: int
    S: int
    entries: dict

    @property
    def d(self) -> int:
        return (self.M + self.N - self.S) // 2

    def __getitem__(self, key) -> QRat:
        return self.entries.get(key, QRat(0))

    def row(self, k: int) -> dict:
        return {(m, n): c for (m, n, kk), c in self.entries.items() if kk == k}


def _check_triple(M: int, N: int, S: int):
    if min(M, N) < 0:
        raise ValueError("M and N must be nonnegative")
    if not (abs(M - N) <= S <= M + N) or (M + N - S) % 2:
        raise ValueError(f"S={S} is not an admissible component of V_{M} (x) V_{N}")


def cg_coefficient(M: int, N: int, S: int, m: int, n: int, k: int) -> QRat:
    """Closed-form C^{M,N,S}_{m,n,k} with c_0 = 1 (zero unless m+n = k+d)."""
    _check_triple(M, N, S)
    d = (M + N - S) // 2
    if m + n != k + d or not (0 <= m <= M and 0 <= n <= N and 0 <= k <= S):
        return QRat(0)
    total = QRat(0)
    for r in range(k + 1):
        e = r + m - k
        term = qbinomial(k, r) * qbinomial(r + d, k - m + d) * qbinomial(N - d, r)
        if term.is_zero:
            continue
        term = term / qbinomial(S, r)
        sign = -1 if e % 2 else 1
        total = total + term * QRat.monomial(e + e * (M - m), sign)
    return total


def cg_table(M: int, N: int, S: int) -> CGTable:
    """k=0 row from the closed form, rows k>0 from the F-recurrence

        [S-k] C^{k+1}_{m,n} = [N-n+1] C^k_{m,n-1} + q^{2n-N} [M-m+1] C^k_{m-1,n}.
    """
    _check_triple(M, N, S)
    d = (M + N - S) // 2
    entries: dict = {}
    for m in range(0, min(d, M) + 1):
        n = d - m
        if n > N:
            continue
        c = cg_coefficient(M, N, S, m, n, 0)
        if not c.is_zero:
            entries[(m, n, 0)] = c
    for k in range(S):
        inv = qnumber(S - k).inverse()
        for m in range(0, M + 1):
            n = k + 1 + d - m
            if not 0 <= n <= N:
                continue
            acc = QRat(0)
            prev = entries.get((m, n - 1, k))
            if prev is not None:
                acc = acc + qnumber(N - n + 1) * prev
            prev = entries.get((m - 1, n, k))
            if prev is not None:
                acc = acc + QRat.monomial(2 * n - N) * qnumber(M - m + 1) * prev
            if not acc.is_zero:
                entries[(m, n, k + 1)] = acc * inv
    return CGTable(M, N, S, entries)


def cg_vector(table: CGTable, k: int) -> TensorVector:
    if not 0 <= k <= table.S:
        raise ValueError(f"k={k} outside 0..{table.S}")
    return TensorVector(table.M, table.N, table.row(k))


@dataclass
class DecompositionReport:
    M: int
    N: int
    passed: bool
    components: list
    dimension_check: bool
    counterexample: str | None = None


def verify_decomposition(M: int, N: int, check_closed_form: bool = False) -> DecompositionReport:
    """Exact check that every CG vector spans a copy of V_S inside V_M (x) V_N."""
    comps = list(range(abs(M - N), M + N + 1, 2))
    dim_ok = sum(S + 1 for S in comps) == (M + 1) * (N + 1)
    for S in comps:
        table = cg_table(M, N, S)
        vecs = [cg_vector(table, k) for k in range(S + 1)]
        zero = TensorVector(M, N)
        for k, v in enumerate(vecs):
            where = f"(M,N,S,k)=({M},{N},{S},{k})"
            if v.is_zero():
                return DecompositionReport(M, N, False, comps, dim_ok, f"zero CG vector at {where}")
            lower = vecs[k - 1].scale(qnumber(k)) if k > 0 else zero
            if coproduct_act("E", v) != lower:
                return DecompositionReport(M, N, False, comps, dim_ok, f"E fails at {where}")
            upper = vecs[k + 1].scale(qnumber(S - k)) if k < S else zero
            if coproduct_act("F", v) != upper:
                return DecompositionReport(M, N, False, comps, dim_ok, f"F fails at {where}")
            if coproduct_act("K", v) != v.scale(_qpow(S - 2 * k)):
                return DecompositionReport(M, N, False, comps, dim_ok, f"K fails at {where}")
        if check_closed_form:
            for (m, n, k), c in table.entries.items():
                if cg_coefficient(M, N, S, m, n, k) != c:
                    return DecompositionReport(
                        M, N, False, comps, dim_ok,
                        f"closed form disagrees at (M,N,S)=({M},{N},{S}), (m,n,k)=({m},{n},{k})",
                    )
    return DecompositionReport(M, N, dim_ok, comps, dim_ok, None if dim_ok else "dimension mismatch")

"""The explicit finite-dimensional U_q(sl3) module on vectors v_{k,m,n}.

Two ambient boxes are supported.  ``"narrow"`` is 0 <= k <= N2,
0 <= m <= N1+N2, 0 <= n <= N1.  The canonical monomials already leave it
(F2 v_{0,0,0} has a v_{0,0,1} component even when N1 = 0), and dropping those
components breaks [E2, F2].  ``"extended"`` (the default) relaxes the bound
on n to N1+N2, which contains the whole generated span.

The irreducible module is the span of canonical-basis monomials applied to
the highest weight vector v_{0,0,0}; relations are only claimed there.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from itertools import product

from .qfield import QRat, q, qnumber
from .sl2 import _SparseVector, _accumulate

__all__ = [
    "SL3Vector",
    "act3",
    "weight",
    "canonical_span",
    "SpanResult",
    "SL3Report",
    "verify_sl3_relations",
    "weyl_dimension",
    "READINGS",
    "BOXES",
]

GENERATORS3 = ("E1", "E2", "F1", "F2", "K1", "K2", "K1inv", "K2inv")
CARTAN = {(1, 1): 2, (2, 2): 2, (1, 2): -1, (2, 1): -1}


def weyl_dimension(N1: int, N2: int) -> int:
    return (N1 + 1) * (N2 + 1) * (N1 + N2 + 2) // 2


BOXES = ("extended", "narrow")


def _in_box(N1, N2, k, m, n, box="extended") -> bool:
    nmax = N1 if box == "narrow" else N1 + N2
    return 0 <= k <= N2 and 0 <= m <= N1 + N2 and 0 <= n <= nmax


@dataclass(eq=False)
class SL3Vector(_SparseVector):
    N1: int
    N2: int
    coeffs: dict = field(default_factory=dict)
    box: str = "extended"

    def __post_init__(self):
        if self.box not in BOXES:
            raise ValueError(f"unknown box {self.box!r}")
        clean = {}
        for key, c in self.coeffs.items():
            if not _in_box(self.N1, self.N2, *key, box=self.box):
                raise ValueError(f"index {key} outside the box")
            c = QRat(c)
            if not c.is_zero:
                clean[key] = c
        self.coeffs = clean

    @classmethod
    def basis(cls, N1, N2, k, m, n, box="extended") -> "SL3Vector":
        return cls(N1, N2, {(k, m, n): QRat(1)}, box)

    @classmethod
    def highest(cls, N1, N2, box="extended") -> "SL3Vector":
        return cls.basis(N1, N2, 0, 0, 0, box)

    @classmethod
    def lowest(cls, N1, N2, box="extended") -> "SL3Vector":
        return cls.basis(N1, N2, N2, N1 + N2, N1, box)

    def zero(self) -> "SL3Vector":
        return SL3Vector(self.N1, self.N2, {}, self.box)

    def _new(self, coeffs):
        return SL3Vector(self.N1, self.N2, coeffs, self.box)

    def _same_space(self, other):
        if (self.N1, self.N2, self.box) != (other.N1, other.N2, other.box):
            raise ValueError("vectors live in different boxes")


def weight(N1: int, N2: int, key) -> tuple[int, int]:
    """Exponents of q for K1 and K2 on v_{k,m,n}."""
    k, m, n = key
    return (k - 2 * m + n + N1, -2 * k + m - 2 * n + N2)


def _terms(gen, N1, N2, k, m, n):
    if gen == "E1":
        return [((k - 1, m - 1, n + 1), qnumber(k)), ((k, m - 1, n), qnumber(m - n))]
    if gen == "E2":
        return [((k, m, n - 1), qnumber(n))]
    if gen == "F1":
        return [((k, m + 1, n), qnumber(N1 + k - m))]
    if gen == "F2":
        return [((k + 1, m, n), qnumber(N2 - k)), ((k, m, n + 1), qnumber(N2 - 2 * k + m - n))]
    w1, w2 = weight(N1, N2, (k, m, n))
    if gen == "K1":
        return [((k, m, n), QRat.monomial(w1))]
    if gen == "K2":
        return [((k, m, n), QRat.monomial(w2))]
    if gen == "K1inv":
        return [((k, m, n), QRat.monomial(-w1))]
    if gen == "K2inv":
        return [((k, m, n), QRat.monomial(-w2))]
    raise ValueError(f"unknown generator {gen!r}")


def act3(gen: str, v: SL3Vector) -> SL3Vector:
    N1, N2 = v.N1, v.N2
    out: dict = {}
    for key, c in v.coeffs.items():
        for tgt, a in _terms(gen, N1, N2, *key):
            if a.is_zero or not _in_box(N1, N2, *tgt, box=v.box):
                continue
            _accumulate(out, tgt, a * c)
    return SL3Vector(N1, N2, out, v.box)


def _word(v: SL3Vector, word) -> SL3Vector:
    # word is applied right to left: [(gen, power), ...] with the last entry first
    for gen, p in reversed(word):
        for _ in range(p):
            if v.is_zero():
                return v
            v = act3(gen, v)
    return v


def _monomials(reading: str, N1: int, N2: int):
    R = N1 + N2 + 1
    rng = range(R + 1)
    fam1 = [(("F1", a), ("F2", b), ("F1", c)) for a, b, c in product(rng, rng, rng)
            if a + c <= b and c <= N1]
    if reading == "F1F2F1":
        return fam1
    if reading == "F2F2F1":
        fam2 = [(("F2", a), ("F2", b), ("F1", c)) for a, b, c in product(rng, rng, rng)
                if a + c < b and c <= N2]
    elif reading == "F2F1F2":
        fam2 = [(("F2", a), ("F1", b), ("F2", c)) for a, b, c in product(rng, rng, rng)
                if a + c < b and c <= N2]
    else:
        raise ValueError(f"unknown reading {reading!r}")
    return fam1 + fam2


READINGS = ("F2F2F1", "F2F1F2")


class _Echelon:
    """Incremental exact row reduction, one instance per weight space."""

    def __init__(self):
        self.rows: list[tuple[object, dict]] = []

    def reduce(self, coeffs: dict) -> dict:
        vec = dict(coeffs)
        for pivot, row in self.rows:
            c = vec.get(pivot)
            if c is None:
                continue
            for key, val in row.items():
                _accumulate(vec, key, -(c * val))
        return vec

    def add(self, coeffs: dict) -> bool:
        vec = self.reduce(coeffs)
        if not vec:
            return False
        pivot = min(vec)
        inv = vec[pivot].inverse()
        vec = {k: c * inv for k, c in vec.items()}
        # keep existing rows reduced against the new pivot
        new_rows = []
        for p, row in self.rows:
            c = row.get(pivot)
            if c is not None:
                row = dict(row)
                for key, val in vec.items():
                    _accumulate(row, key, -(c * val))
            new_rows.append((p, row))
        new_rows.append((pivot, vec))
        self.rows = new_rows
        return True


def _weight_of(v: SL3Vector):
    ws = {weight(v.N1, v.N2, key) for key in v.coeffs}
    if len(ws) != 1:
        raise ValueError("vector is not a weight vector")
    return ws.pop()


@dataclass
class SpanResult:
    N1: int
    N2: int
    reading: str
    dimension: int
    basis: list
    words: list
    expected: int
    box: str = "extended"
    readings: dict = field(default_factory=dict)

    @property
    def matches_weyl(self) -> bool:
        return self.dimension == self.expected


def _span_for(N1, N2, reading, box) -> SpanResult:
    top = SL3Vector.highest(N1, N2, box)
    spaces: dict = {}
    basis, words = [], []
    for word in _monomials(reading, N1, N2):
        v = _word(top, word)
        if v.is_zero():
            continue
        w = _weight_of(v)
        ech = spaces.setdefault(w, _Echelon())
        if ech.add(v.coeffs):
            basis.append(v)
            words.append(word)
    return SpanResult(N1, N2, reading, len(basis), basis, words, weyl_dimension(N1, N2), box)


def canonical_span(N1: int, N2: int, reading: str = "auto", box: str = "extended") -> SpanResult:
    """Apply the canonical-basis monomials to v_{0,0,0} and keep a maximal
    linearly independent subset (exact rank over Q(q), per weight space).

    ``reading="auto"`` first takes the second family as F2^a F2^b F1^c and
    falls back to F2^a F1^b F2^c when that does not reach the Weyl
    dimension.  The dimensions of all readings are recorded.
    """
    if N1 < 0 or N2 < 0:
        raise ValueError("N1, N2 must be nonnegative")
    if reading != "auto":
        res = _span_for(N1, N2, reading, box)
        res.readings = {reading: res.dimension}
        return res
    readings = {}
    chosen = None
    for r in ("F1F2F1",) + READINGS:
        res = _span_for(N1, N2, r, box)
        readings[r] = res.dimension
        if chosen is None and r != "F1F2F1" and res.matches_weyl:
            chosen = res
    if chosen is None:
        chosen = res
    chosen.readings = readings
    return chosen


@dataclass
class SL3Report:
    N1: int
    N2: int
    passed: bool
    dimension: int
    expected: int
    reading: str
    readings: dict
    counterexample: str | None = None
    box: str = "extended"


def _in_span(spaces: dict, v: SL3Vector) -> bool:
    if v.is_zero():
        return True
    w = _weight_of(v)
    ech = spaces.get(w)
    if ech is None:
        return False
    return not ech.reduce(v.coeffs)


def verify_sl3_relations(N1: int, N2: int, box: str = "extended") -> SL3Report:
    """Exact relation check on the canonical span (closure, Cartan, commutator, Serre)."""
    span = canonical_span(N1, N2, "auto", box)
    readings = span.readings
    expected = span.expected
    reading = span.reading
    good = span.matches_weyl

    def fail(msg):
        return SL3Report(N1, N2, False, span.dimension, expected, reading, readings, msg, box)

    if not good:
        return fail("no reading of the monomial families reaches the Weyl dimension")

    spaces: dict = {}
    for v in span.basis:
        spaces.setdefault(_weight_of(v), _Echelon()).add(v.coeffs)

    A = lambda g, v: act3(g, v)
    two = qnumber(2)
    denom_inv = (q - q.inverse()).inverse()
    for idx, v in enumerate(span.basis):
        for g in GENERATORS3:
            if not _in_span(spaces, A(g, v)):
                return fail(f"span not closed under {g} (basis vector {idx})")
        for i, j in product((1, 2), repeat=2):
            a = CARTAN[(i, j)]
            Ki, Ej, Fj = f"K{i}", f"E{j}", f"F{j}"
            if A(Ki, A(Ej, v)) != A(Ej, A(Ki, v)).scale(q ** a):
                return fail(f"K{i}E{j} relation fails (basis vector {idx})")
            if A(Ki, A(Fj, v)) != A(Fj, A(Ki, v)).scale(q ** -a):
                return fail(f"K{i}F{j} relation fails (basis vector {idx})")
            comm = A(f"E{i}", A(Fj, v)) - A(Fj, A(f"E{i}", v))
            rhs = (A(Ki, v) - A(f"K{i}inv", v)).scale(denom_inv) if i == j else v.zero()
            if comm != rhs:
                return fail(f"[E{i},F{j}] relation fails (basis vector {idx})")
        for X in ("E", "F"):
            for i, j in ((1, 2), (2, 1)):
                Xi, Xj = f"{X}{i}", f"{X}{j}"
                s = (A(Xi, A(Xi, A(Xj, v)))
                     - A(Xi, A(Xj, A(Xi, v))).scale(two)
                     + A(Xj, A(Xi, A(Xi, v))))
                if not s.is_zero():
                    return fail(f"Serre relation for ({Xi},{Xj}) fails (basis vector {idx})")
    return SL3Report(N1, N2, True, span.dimension, expected, reading, readings, None, box)

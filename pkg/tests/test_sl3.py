import pytest

from quantum_cg.qfield import QRat
from quantum_cg.sl3 import SL3Vector, act3, canonical_span, verify_sl3_relations, weyl_dimension

PAIRS = [(a, s - a) for s in range(6) for a in range(s + 1)]


def test_highest_weight_vector_killed():
    for N1, N2 in [(1, 0), (2, 1), (3, 2)]:
        top = SL3Vector.highest(N1, N2)
        assert act3("E1", top).is_zero()
        assert act3("E2", top).is_zero()


def test_lowest_weight_vector_killed():
    for N1, N2 in [(1, 0), (0, 1), (2, 1), (2, 2)]:
        low = SL3Vector.lowest(N1, N2)
        assert act3("F1", low).is_zero()
        assert act3("F2", low).is_zero()


def test_F1_on_top():
    top = SL3Vector.highest(1, 0)
    assert act3("F1", top) == SL3Vector.basis(1, 0, 0, 1, 0)


def test_unknown_generator():
    with pytest.raises(ValueError):
        act3("E3", SL3Vector.highest(1, 1))


@pytest.mark.parametrize("N1, N2, dim", [(0, 0, 1), (1, 0, 3), (0, 1, 3), (1, 1, 8), (2, 0, 6), (2, 2, 27)])
def test_weyl_dimension(N1, N2, dim):
    assert weyl_dimension(N1, N2) == dim


def test_trivial_span():
    span = canonical_span(0, 0)
    assert span.dimension == 1
    assert span.basis[0] == SL3Vector.highest(0, 0)


@pytest.mark.parametrize("N1, N2", PAIRS + [(3, 3), (2, 4)])
def test_span_dimension(N1, N2):
    span = canonical_span(N1, N2)
    assert span.dimension == weyl_dimension(N1, N2)


@pytest.mark.parametrize("N1, N2", PAIRS)
def test_relations_on_span(N1, N2):
    rep = verify_sl3_relations(N1, N2)
    assert rep.passed, rep.counterexample


def test_F2F2F1_family_falls_short():
    # F2^a F2^b F1^c misses vectors once N1 > 0; the F2 F1 F2 order does not
    span = canonical_span(1, 1)
    assert span.readings == {"F1F2F1": 6, "F2F2F1": 6, "F2F1F2": 8}
    assert span.reading == "F2F1F2"
    assert canonical_span(0, 3).reading == "F2F2F1"


def test_narrow_box_breaks_commutator():
    rep = verify_sl3_relations(1, 1, box="narrow")
    assert not rep.passed
    assert "[E2,F2]" in rep.counterexample
    assert verify_sl3_relations(1, 0, box="narrow").passed


def test_bad_arguments():
    with pytest.raises(ValueError):
        canonical_span(-1, 0)
    with pytest.raises(ValueError):
        SL3Vector(1, 1, {(0, 0, 0): QRat(1)}, box="cube")

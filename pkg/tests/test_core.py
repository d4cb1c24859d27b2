from fractions import Fraction as F

import pytest
from hypothesis import given, strategies as st

from refclass.core import (
    Bracket,
    Intersect,
    Interval,
    Prim,
    Product,
    Strength,
    TermError,
    bracket,
    canonicalize,
    disagrees,
    intersect,
    nests_in,
    stronger,
)


def iv(lo, hi):
    return Interval(F(lo), F(hi))


rationals = st.fractions(min_value=0, max_value=1, max_denominator=50)


@st.composite
def intervals(draw):
    a, b = draw(rationals), draw(rationals)
    return Interval(min(a, b), max(a, b))


class TestInterval:
    def test_exact_endpoints(self):
        assert iv("0.3", "0.5") == iv(F(3, 10), F(1, 2))

    @pytest.mark.parametrize("lo,hi", [(F(1, 2), F(1, 3)), (-1, 0), (0, 2)])
    def test_rejects_invalid(self, lo, hi):
        with pytest.raises(ValueError):
            Interval(lo, hi)

    def test_rejects_float(self):
        with pytest.raises(TypeError):
            Interval(0.1, 0.5)

    def test_str_and_pair(self):
        assert str(iv(F(3, 10), F(1, 2))) == "[3/10, 1/2]"
        assert iv(0, 1).as_pair() == ["0/1", "1/1"]


@pytest.mark.parametrize("a,b,expected", [
    (iv(F(3, 10), F(5, 10)), iv(0, 1), True),
    (iv(F(2, 10), F(6, 10)), iv(F(2, 10), F(6, 10)), True),
    (iv(F(4, 10), F(8, 10)), iv(F(1, 10), F(6, 10)), False),
])
def test_nests_in(a, b, expected):
    assert nests_in(a, b) is expected


@pytest.mark.parametrize("a,b,expected", [
    (iv(F(4, 10), F(8, 10)), iv(F(3, 10), F(7, 10)), True),
    (iv(F(3, 10), F(5, 10)), iv(0, 1), False),
    (iv(F(1, 3), F(2, 3)), iv(F(1, 3), F(2, 3)), False),
])
def test_disagrees(a, b, expected):
    assert disagrees(a, b) is expected


@pytest.mark.parametrize("a,b,expected", [
    (iv(F(3, 10), F(5, 10)), iv(0, 1), Strength.A),
    (iv(0, 1), iv(F(3, 10), F(5, 10)), Strength.B),
    (iv(F(2, 10), F(6, 10)), iv(F(2, 10), F(6, 10)), Strength.EQUAL),
    (iv(F(4, 10), F(8, 10)), iv(F(3, 10), F(7, 10)), Strength.INCOMPARABLE),
])
def test_stronger(a, b, expected):
    assert stronger(a, b) is expected


@given(intervals(), intervals(), intervals())
def test_nesting_is_partial_order(a, b, c):
    assert nests_in(a, a)
    if nests_in(a, b) and nests_in(b, a):
        assert a == b
    if nests_in(a, b) and nests_in(b, c):
        assert nests_in(a, c)


@given(intervals(), intervals())
def test_disagreement_symmetric_irreflexive(a, b):
    assert disagrees(a, b) == disagrees(b, a)
    assert not disagrees(a, a)


@given(intervals(), intervals())
def test_stronger_consistent_with_nesting(a, b):
    s = stronger(a, b)
    assert (s is Strength.A) == (nests_in(a, b) and a != b)
    assert (s is Strength.B) == (nests_in(b, a) and a != b)
    assert (s is Strength.INCOMPARABLE) == disagrees(a, b)


class TestCanonicalize:
    def test_intersect_dedup_sort(self):
        assert canonicalize(Intersect(("H", "D", "H"))) == Intersect(("D", "H"))

    def test_single_constituent_bracket(self):
        assert canonicalize(Bracket((("H", "K"),))) == Intersect(("H", "K"))
        assert canonicalize(Bracket((("H",),))) == Prim("H")

    def test_prim_identity(self):
        assert canonicalize(Prim("H")) == Prim("H")

    def test_overlapping_bracket_rejected(self):
        with pytest.raises(TermError):
            canonicalize(Bracket((("a", "b"), ("a", "c"))))

    def test_product_needs_two(self):
        with pytest.raises(TermError):
            canonicalize(Product((("H",),)))

    def test_rendering(self):
        assert bracket(["H", "D", "K"]).render() == "D&H&K"
        assert bracket(["H", "D"], ["K"]).render() == "[D&H,K]"
        assert bracket("abc", "d").render() == "[a&b&c,d]"

    def test_intersect_flattens(self):
        assert intersect(Prim("K"), intersect("H", "D")) == Intersect(("D", "H", "K"))

    @given(st.lists(st.lists(st.sampled_from("abcdef"), min_size=1, max_size=3),
                    min_size=1, max_size=3))
    def test_idempotent(self, blocks):
        flat = [n for b in blocks for n in b]
        if len(set(flat)) != len(flat):
            return
        for t in (Bracket(tuple(map(tuple, blocks))), Intersect(tuple(flat))):
            once = canonicalize(t)
            assert canonicalize(once) == once

import random
from fractions import Fraction as F

import pytest

from generators import random_system
from refclass.bounds import (
    AtomSystem,
    BoundsScaleError,
    InconsistentKB,
    bound_conditional,
    encode,
    grid_oracle,
)
from refclass.core import Interval, Prim, intersect
from refclass.kb import load_kb

H, K, V = Prim("H"), Prim("K"), Prim("V")


def kb_of(text):
    return load_kb(text + "\n")


def test_encode_direct():
    sys = encode(kb_of("class H\nclass V\nstat H V [0.4, 0.8]"), ["H", "V"])
    assert sys.n_atoms == 4
    # atoms: 0 = neither, 1 = H only, 2 = V only, 3 = H&V
    lower, upper = sys.constraints
    assert lower.coeffs == (0, F(2, 5), 0, F(2, 5) - 1)
    assert upper.coeffs == (0, -F(4, 5), 0, 1 - F(4, 5))


def test_encode_empty():
    sys = encode(kb_of("class H\nclass V"), ["H", "V"])
    assert sys.constraints == ()


def test_encode_collapse():
    sys = encode(kb_of("class H\nclass K\nstat H K [1, 1]"), ["H", "K"])
    lower = sys.constraints[0]
    # w(H) - w(H&K) <= 0, i.e. the H-only atom is forced to zero
    assert lower.coeffs == (0, 1, 0, 0)


def test_encode_skips_foreign_and_caps():
    kb = kb_of("class H\nclass K\nclass V\nstat H V [0.4, 0.8]\nstat K V [0.1, 0.2]")
    assert len(encode(kb, ["H", "V"]).constraints) == 2
    with pytest.raises(BoundsScaleError):
        encode(kb, list("ABCDEFG"))


COLLAPSE = "class H\nclass K\nclass V\nstat H V [0.4, 0.8]\nstat H K [1, 1]"


def test_unconstrained():
    sys = AtomSystem(("H", "V"))
    assert bound_conditional(sys, H, V) == Interval(0, 1)


def test_collapse_exact():
    sys = encode(kb_of(COLLAPSE), ["H", "K", "V"])
    assert bound_conditional(sys, intersect("H", "K"), V) == Interval(F(2, 5), F(4, 5))


def test_null_target_class():
    sys = encode(kb_of("class H\nclass K\nclass V\nstat H V [0, 0]"), ["H", "K", "V"])
    assert bound_conditional(sys, intersect("H", "K"), V) == Interval(0, 0)


def test_necessarily_empty_query_is_vacuous():
    sys = encode(kb_of("class H\nclass K\nclass V\nstat H K [0, 0]"), ["H", "K", "V"])
    assert bound_conditional(sys, intersect("H", "K"), V) == Interval(0, 1)


CONTRADICTION = "class H\nclass V\nstat H V [0, 0]\nstat V H [1, 1]"


def test_inconsistent_names_constraints():
    sys = encode(kb_of(CONTRADICTION), ["H", "V"])
    with pytest.raises(InconsistentKB) as err:
        bound_conditional(sys, H, V)
    assert any("%(H, V)" in label for label in err.value.labels)
    assert any("%(V, H)" in label for label in err.value.labels)


def test_frechet_style_bound():
    # %(H&K, V) given both marginals and the overlap share of K inside H
    kb = kb_of("class H\nclass K\nclass V\nstat K V [0.35, 0.55]\nstat K H [0.9, 0.9]")
    sys = encode(kb, ["H", "K", "V"])
    assert bound_conditional(sys, intersect("H", "K"), V) == Interval(F(5, 18), F(11, 18))


class TestOracle:
    def test_unconstrained(self):
        got = grid_oracle(AtomSystem(("H", "V")), H, V, 10)
        assert got.lo <= F(1, 10) and got.hi >= F(9, 10)

    def test_collapse(self):
        sys = encode(kb_of(COLLAPSE), ["H", "K", "V"])
        got = grid_oracle(sys, intersect("H", "K"), V, 50)
        assert abs(got.lo - F(2, 5)) <= F(1, 50) and abs(got.hi - F(4, 5)) <= F(1, 50)

    def test_contradiction_unavailable(self):
        sys = encode(kb_of(CONTRADICTION), ["H", "V"])
        assert grid_oracle(sys, V, H, 12, require_nonempty=True) is None


@pytest.mark.parametrize("seed", range(15))
def test_oracle_inside_solver(seed):
    rng = random.Random(seed)
    sys, A, B = random_system(rng, 12)
    exact = bound_conditional(sys, A, B)
    for nonempty in (False, True):
        got = grid_oracle(sys, A, B, 12, require_nonempty=nonempty)
        if got is not None:
            assert exact.lo <= got.lo and got.hi <= exact.hi


@pytest.mark.parametrize("seed", range(10))
def test_oracle_converges(seed):
    rng = random.Random(100 + seed)
    sys, A, B = random_system(rng, 20)
    exact = bound_conditional(sys, A, B)
    for r in (10, 20):
        got = grid_oracle(sys, A, B, r)
        gap = max(got.lo - exact.lo, exact.hi - got.hi)
        assert gap <= F(3, r)


@pytest.mark.parametrize("seed", range(15))
def test_extra_constraint_never_widens(seed):
    rng = random.Random(200 + seed)
    sys, A, B = random_system(rng, 24, n_names=3)
    before = bound_conditional(sys, A, B)
    more, _, _ = random_system(random.Random(300 + seed), 24, n_names=3)
    tighter = AtomSystem(sys.names, sys.constraints + more.constraints,
                         sys.nonempty + more.nonempty)
    try:
        after = bound_conditional(tighter, A, B)
    except InconsistentKB:
        return
    if after == Interval(0, 1) and before != Interval(0, 1):
        # query class forced empty: the vacuous answer, not a widening of a real bound
        return
    assert before.lo <= after.lo and after.hi <= before.hi

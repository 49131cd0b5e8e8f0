import pytest
from hypothesis import given, strategies as st

from ainftorus.core import AinfCocategory, Atom, check_relations
from ainftorus.duality import (InfiniteSlice, NotAdamsConnected, Word, bar, check_bar_cobar, cobar,
                               cocategory_complex, graded_dual, koszul_E)
from ainftorus.f2linalg import betti
from ainftorus.fixtures import directed_line, massey_square, point, poly_t, two_gen_cocategory
from ainftorus.modules import Yoneda, value_complex


def nonzero(b):
    return {k: v for k, v in b.items() if v}


def test_bar_of_polynomial():
    b = bar(poly_t())
    assert nonzero(b.betti()) == {(0, 0): 1, (1, 1): 1}
    assert b.bideg(Word(("t1",))) == (1, 1)
    assert b.d(Word(("t1", "t1"))) == {Word(("t2",))}
    assert b.d(Word(("t2",))) == frozenset()


@pytest.mark.parametrize("cap", [2, 3, 4])
def test_bar_of_polynomial_any_cap(cap):
    assert nonzero(bar(poly_t(cap=cap), cap).betti()) == {(0, 0): 1, (1, 1): 1}


def test_bar_of_point():
    assert nonzero(bar(point()).betti()) == {(0, 0): 1}


def test_bar_differential_squares_to_zero():
    for a in (poly_t(), massey_square(), directed_line(0, 3)):
        b = bar(a, 4)
        for w in b.words:
            acc = set()
            for v in b.d(w):
                acc ^= set(b.d(v))
            assert not acc, w


def test_bar_coproduct_coassociative():
    b = bar(poly_t(), 4)
    for w in b.words:
        left, right = set(), set()
        for u, v in b.coproduct(w):
            left ^= {(p, q, v) for p, q in b.coproduct(u)}
            right ^= {(u, p, q) for p, q in b.coproduct(v)}
        assert left == right


def test_bar_d_is_a_coderivation():
    b = bar(poly_t(), 4)
    for w in b.words:
        lhs = set()
        for v in b.d(w):
            lhs ^= set(b.coproduct(v))
        rhs = set()
        for u, v in b.coproduct(w):
            rhs ^= {(x, v) for x in b.d(u) if x.letters}
            rhs ^= {(u, x) for x in b.d(v) if x.letters}
        assert lhs == rhs, w


def test_koszul_dual_of_polynomial():
    E = koszul_E(poly_t())
    assert check_relations(E).ok
    assert all(E.bideg(g)[1] < 0 for g in E.gens)
    cc = value_complex(Yoneda(E, Atom("pt")), Atom("pt"))
    assert nonzero(betti(cc, cc.bidegrees())) == {(0, 0): 1, (-1, -1): 1}


def test_double_koszul_dual():
    EE = koszul_E(koszul_E(poly_t()), 3)
    assert check_relations(EE).ok
    pt = EE.objects()[0]
    cc = value_complex(Yoneda(EE, pt), pt)
    assert nonzero(betti(cc, cc.bidegrees())) == {(0, 0): 1, (2, 1): 1, (4, 2): 1, (6, 3): 1}


def test_cobar_example():
    om = cobar(two_gen_cocategory(), 3)
    z, x, y = (Word((s,), "O") for s in "zxy")
    assert om.bideg(z) == (3, 2) and om.bideg(x) == (2, 1)
    assert om.mu((z,)) == {Word(("x", "y"), "O")}
    assert om.mu((x, y)) == {Word(("x", "y"), "O")}
    assert check_relations(om).ok


def test_bar_cobar():
    r = check_bar_cobar(two_gen_cocategory(), 3)
    assert r.ok
    assert r.chain_map.ok and r.quasi_iso
    assert nonzero(r.betti_c) == {(0, 0): 1, (1, 1): 2, (2, 2): 1}


def test_cocategory_complex():
    cc = cocategory_complex(two_gen_cocategory())
    assert nonzero(betti(cc, cc.bidegrees())) == {(0, 0): 1, (1, 1): 2, (2, 2): 1}


def test_double_dual_is_structural_identity():
    c = two_gen_cocategory()
    cc = graded_dual(graded_dual(c))
    assert cc.gens == c.gens and cc.coop == c.coop
    a = massey_square()
    aa = graded_dual(graded_dual(a))
    assert aa.gens == a.gens
    assert {k: set(v) for k, v in aa.table.items()} == {k: set(v) for k, v in a.table.items()}


def test_dual_negates_bidegrees():
    a = graded_dual(two_gen_cocategory())
    assert a.bideg("z") == (-2, -2)
    assert a.mu(("x", "y")) == {"z"}


def test_chain_complex_dual():
    cc = bar(poly_t(), 4).complex()
    dual = graded_dual(cc)
    b = betti(cc, cc.bidegrees())
    bd = betti(dual, dual.bidegrees())
    assert all(bd[(-p, -j)] == v for (p, j), v in b.items())


def test_not_adams_connected():
    flat = poly_t(cap=2, adams=0)
    with pytest.raises(NotAdamsConnected):
        bar(flat)
    b = bar(flat, 2)
    assert max(len(w.letters) for w in b.words) == 2
    with pytest.raises(InfiniteSlice):
        graded_dual(b)


def test_cobar_not_adams_connected():
    o = Atom("pt")
    c = AinfCocategory((o,), {"x": (o, o, (1, 0))}, {"x": frozenset()}, name="flat")
    with pytest.raises(NotAdamsConnected):
        cobar(c, 2)


@given(st.integers(1, 4), st.integers(1, 3))
def test_bar_of_polynomial_generator_degree(deg, adams):
    b = bar(poly_t(cap=3, deg=deg, adams=adams), 3 * adams)
    assert nonzero(b.betti()) == {(0, 0): 1, (deg - 1, adams): 1}

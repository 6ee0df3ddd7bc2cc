import pytest

from ls2.errors import BangOutsideFragment
from ls2.semiring import RAT
from ls2.syntax import *
from ls2.textio import parse_term

from conftest import make_gen

r = RAT.parse_scalar


def lam(ann, body):
    return Lam("x", ann, body)


def test_fv_examples():
    assert fv_term(lam(One(), BVar(0))) == frozenset()
    assert fv_term(TensorI(Var("x"), Var("y"))) == {"x", "y"}
    assert ftv_prop(Forall("X", Lolli(PBound(0), PVar("Y")))) == {"Y"}


def test_subst_basic():
    # ((λy. y x) with 2.* for x) = λy. y 2.*
    t = Lam("y", One(), App(BVar(0), Var("x")))
    out = subst_term(t, "x", Star(r("2")))
    assert out == Lam("y", One(), App(BVar(0), Star(r("2"))))


def test_subst_identity_and_shadowing():
    t = App(Var("x"), lam(One(), BVar(0)))
    assert subst_term(t, "x", Var("x")) == t
    # binder shadows: nothing named x is free inside λx. x
    assert subst_term(lam(One(), BVar(0)), "x", Star(r("2"))) \
        == lam(One(), BVar(0))


def test_subst_avoids_capture():
    # (y/x)(λy. x) must not capture: the bound y and the free y differ
    t = Lam("y", One(), Var("x"))
    out = subst_term(t, "x", Var("y"))
    assert out == Lam("y", One(), Var("y"))
    assert isinstance(out.body, Var)  # still the free y, not BVar(0)


def test_prop_subst_examples():
    b = With(One(), One())
    assert prop_subst(Lolli(PVar("X"), PVar("X")), "X", b) == Lolli(b, b)
    shadowed = Forall("X", PBound(0))
    assert prop_subst(shadowed, "X", b) == shadowed
    t = TLam("Y", Lam("x", PVar("X"), BVar(0)))
    assert subst_prop_in_term(t, "X", b) == TLam("Y", Lam("x", b, BVar(0)))


def test_alpha_examples():
    assert Lam("x", One(), BVar(0)) == Lam("y", One(), BVar(0))
    assert Forall("X", PBound(0)) == Forall("Y", PBound(0))
    assert Lam("x", One(), BVar(0)) != Lam("x", Top(), BVar(0))


def test_alpha_via_parser():
    assert parse_term(r"\x:1. x") == parse_term(r"\y:1. y")
    assert parse_term(r"/\X. \x:X. x") == parse_term(r"/\Y. \z:Y. z")


def test_open_close_inverse():
    body = App(BVar(0), Var("free"))
    assert close_term(open_term(body, Var("q")), "q") == body
    t = Lam("x", PVar("X"), BVar(0))
    assert close_term_prop(open_term_prop(TLam("X", t).body, PVar("Q")), "Q") \
        == t


def test_open_shifts_dangling_indices():
    # reduce (λy. (λz. z y) y) under no binders: inner beta keeps y pointing
    # at the outer lambda
    outer = Lam("y", One(), App(Lam("z", One(), App(BVar(0), BVar(1))),
                                BVar(0)))
    inner_opened = open_term(outer.body.fn.body, outer.body.arg)
    assert inner_opened == App(BVar(0), BVar(0))


def test_measure_examples():
    assert measure_mu(Var("x")) == 0
    assert measure_mu(Star(r("3"))) == 1
    assert measure_mu(lam(One(), Sum(BVar(0), BVar(0)))) == 2
    assert measure_mu(Unit()) == 1
    assert measure_mu(App(Var("f"), Var("x"))) == 1
    assert measure_mu(Pair(Star(r("1")), App(Var("f"), Var("x")))) == 2
    assert measure_mu(
        ElimPlus(Var("s"), "x", One(), Star(r("1")), "y", One(),
                 Sum(Star(r("1")), Star(r("2"))))) == 3


def test_measure_rejects_bang():
    with pytest.raises(BangOutsideFragment):
        measure_mu(BangI(Star(r("1"))))
    with pytest.raises(BangOutsideFragment):
        measure_mu(ElimBang(Var("x"), "y", One(), Star(r("1"))))


def test_positions_and_replace():
    t = Sum(Star(r("1")), App(Var("f"), Var("x")))
    paths = [p for p, _ in subterms(t)]
    assert paths == [(), (0,), (1,), (1, 0), (1, 1)]
    assert subterm_at(t, (1, 0)) == Var("f")
    swapped = replace_at(t, (1, 0), Var("g"))
    assert swapped == Sum(Star(r("1")), App(Var("g"), Var("x")))


def test_generated_terms_roundtrip_open_close():
    for seed in range(40):
        g = make_gen(seed)
        import random as _r
        rng = _r.Random(seed + 1)
        from ls2.gen import gen_target_prop
        t = g.closed(gen_target_prop(rng, g.cfg))
        names = sorted(fv_term(t))
        if not names:
            continue
        closed = close_term(t, *names)
        reopened = open_term(closed, *(Var(n) for n in names))
        assert reopened == t

import random

import pytest

from ls2.encodings import VLeaf, VNode, term_to_vec, to_prop, vec_to_term
from ls2.errors import (IllTypedContext, MultipleFreeVars, NotIrreducible,
                        PreconditionViolated)
from ls2.gen import gen_ctx_prop, gen_scalar, gen_vshape, _inhabited
from ls2.linearity import (ElimContext, check_linearity, decompose,
                           in_linear_fragment, obs_equiv_sample, plug)
from ls2.rewrite import nf
from ls2.semiring import RAT
from ls2.syntax import *
from ls2.textio import parse_prop, parse_term
from ls2.typecheck import EMPTY, TypingCtx, infer

from conftest import make_gen

r = RAT.parse_scalar
D2 = VNode(VLeaf(), VLeaf())
VV = With(One(), One())


def test_fragment_membership():
    assert in_linear_fragment(parse_term(r"\x:1. x"))
    assert in_linear_fragment(parse_term(r"/\X. \x:X. x"))
    assert not in_linear_fragment(parse_term(r"\x:!1. db(x; y:1. 2.*)"))
    assert not in_linear_fragment(parse_term("!(2.*)"))
    # a ! hiding inside an annotation also leaves the fragment
    assert not in_linear_fragment(parse_term(r"\x:!1. 2.*"))


def test_decompose_variable():
    d = decompose(Var("x"), One())
    assert d.context.term == Var("_")
    assert d.head == Var("x")
    assert d.cut_type == One()


def test_decompose_projection_chain():
    t = parse_term("da1(x; y:1. d1(y; 2.*))")
    d = decompose(t, VV)
    assert d.head == Var("x")
    assert d.cut_type == VV
    assert d.context.term == parse_term("da1(_; y:1. d1(y; 2.*))")
    assert plug(d.context, d.head) == t


def test_decompose_introduction_head():
    # additive pairing shares the context, so both components mention x
    t = parse_term("<x + x, x>")
    d = decompose(t, One())
    assert d.context.term == Var("_")
    assert d.head == t
    assert d.cut_type == VV


def test_decompose_requires_irreducible():
    with pytest.raises(NotIrreducible):
        decompose(parse_term("d1(2.*; x)"), One())


def test_decompose_rejects_many_free_vars():
    with pytest.raises(MultipleFreeVars):
        decompose(parse_term("x * y"), One())


def test_context_validation():
    with pytest.raises(IllTypedContext):
        ElimContext(parse_term("d1(_; y)"))  # open continuation
    with pytest.raises(IllTypedContext):
        ElimContext(parse_term("<_, 1.*>"))  # an introduction, not an elim
    k = ElimContext(parse_term("d1(_; 2.*)"))
    assert k.plug(parse_term("1.*")) == parse_term("d1(1.*; 2.*)")


def test_mu_splits_over_contexts():
    k = ElimContext(parse_term("da1(_; y:1. d1(y; 2.*))"))
    head = parse_term("<3.*, 4.*>")
    assert measure_mu(k.plug(head)) == k.measure() + measure_mu(head)


def test_paper_matrix_term_is_linear():
    t = parse_term("da1(x; y:1. d1(y; <1.*, 2.*>))"
                   " + da2(x; z:1. d1(z; <3.*, 4.*>))")
    rep = check_linearity(t, VV, VV,
                          parse_term("<5.*, 6.*>"), parse_term("<7.*, 8.*>"),
                          r("2/3"))
    assert rep.ok


def test_identity_is_linear():
    rep = check_linearity(Var("x"), VV, VV, parse_term("<1.*, 2.*>"),
                          parse_term("<3.*, 4.*>"), r("5"))
    assert rep.ok


def test_bang_counterexample_rejected_and_fails_pointwise():
    f_body = parse_term("db(x; y:1. 2.*)")
    with pytest.raises(PreconditionViolated):
        check_linearity(f_body, Bang(One()), One(), parse_term("!(1.*)"),
                        parse_term("!(3.*)"), r("1"))
    # direct evaluation shows the failure the fragment restriction prevents
    f = parse_term(r"\x:!1. db(x; y:1. 2.*)")
    lhs = nf(App(f, parse_term("!(1.*) + !(3.*)")))
    rhs = nf(Sum(App(f, parse_term("!(1.*)")), App(f, parse_term("!(3.*)"))))
    assert lhs == parse_term("2.*")
    assert rhs == parse_term("4.*")
    assert lhs != rhs


def test_linearity_precondition_checks():
    with pytest.raises(PreconditionViolated):
        check_linearity(Var("x"), One(), Lolli(One(), One()),
                        parse_term("1.*"), parse_term("2.*"), r("1"))
    with pytest.raises(PreconditionViolated):
        check_linearity(Var("x"), One(), One(), Var("y"), parse_term("2.*"),
                        r("1"))


def test_obs_equiv_paper_example():
    t1 = parse_term(r"\y:1 -o 1. y 3.*")
    t2 = parse_term(r"\y:1 -o 1. (y 1.*) + (y 2.*)")
    b = parse_prop("(1 -o 1) -o 1")
    ctx = (parse_term(r"_ (\z:1. z)"), One())
    report = obs_equiv_sample(t1, t2, b, [ctx])
    assert report.verdicts == [True]
    assert not report.refuted
    # yet the raw terms are not convertible
    assert nf(t1) == t1 and nf(t2) == t2 and t1 != t2


def test_obs_equiv_reflexive():
    t = parse_term("1.* + 1.*")
    ctxs = [(parse_term("d1(_; <2.*, 0.*>)"), parse_prop("1 & 1")),
            (Var("_"), One())]
    assert not obs_equiv_sample(t, t, One(), ctxs).refuted


def test_obs_equiv_refutation():
    ctx = (parse_term("d1(_; <1.*, 0.*>)"), parse_prop("1 & 1"))
    report = obs_equiv_sample(parse_term("1.*"), parse_term("2.*"),
                              One(), [ctx])
    assert report.refuted


def test_obs_equiv_rejects_bad_context():
    with pytest.raises(IllTypedContext):
        obs_equiv_sample(parse_term("1.*"), parse_term("2.*"), One(),
                         [(Var("_"), Top())])


def test_decomposition_round_trip_generated():
    cfg_kwargs = dict(allow_bang=False)
    for seed in range(80):
        rng = random.Random(seed)
        g = make_gen(seed, **cfg_kwargs)
        c = gen_ctx_prop(rng, g.cfg, allow_zero=False)
        if not _inhabited(c):
            continue
        from ls2.gen import gen_target_prop
        t = g.term({"x": c}, gen_target_prop(rng, g.cfg), 8)
        irr = nf(t)
        d = decompose(irr, c)
        assert plug(d.context, d.head) == irr
        assert (isinstance(d.head, (Var, Sum, Prod)) or is_intro(d.head))
        assert measure_mu(irr) == d.context.measure() + measure_mu(d.head)


def test_matrix_terms_obey_linearity_as_functions():
    # F(u) = reading of (t applied to the canonical vector) is additive
    # and homogeneous, matching the dense product
    from ls2.encodings import DenseMat, DenseVec, mat_vec, matrix_to_term
    rng = random.Random(9)
    for _ in range(20):
        n, m = rng.randint(1, 3), rng.randint(1, 3)
        matrix = DenseMat.of([[gen_scalar(rng, RAT) for _ in range(m)]
                              for _ in range(n)])
        t = matrix_to_term(matrix)
        u = DenseVec.of([gen_scalar(rng, RAT) for _ in range(m)])
        v = DenseVec.of([gen_scalar(rng, RAT) for _ in range(m)])
        a = gen_scalar(rng, RAT)
        F = lambda w: term_to_vec(App(t, vec_to_term(w)), matrix.codomain)
        assert F(u + v) == F(u) + F(v)
        assert F(u.scale(a)) == F(u).scale(a)

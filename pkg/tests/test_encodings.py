import random

import pytest

from ls2.encodings import *
from ls2.errors import DimMismatch, IllTyped
from ls2.gen import gen_scalar, gen_vshape
from ls2.rewrite import nf
from ls2.semiring import GAUSS, RAT
from ls2.syntax import *
from ls2.textio import parse_prop, parse_term
from ls2.typecheck import EMPTY, infer

from conftest import make_gen

r = RAT.parse_scalar
D2 = VNode(VLeaf(), VLeaf())


def vec(*texts, shape=None):
    return DenseVec.of([r(t) for t in texts], shape)


def mat(rows, domain=None, codomain=None):
    return DenseMat.of([[r(x) for x in row] for row in rows], domain, codomain)


def test_v_types_and_dims():
    assert is_v_type(parse_prop("1 & 1")) == D2
    assert dim(is_v_type(parse_prop("(1 & 1) & 1"))) == 3
    assert is_v_type(parse_prop("1 -o 1")) is None
    assert is_v_type(parse_prop("1 & top")) is None
    assert to_prop(right_comb(3)) == parse_prop("1 & (1 & 1)")


def test_zero_terms():
    assert zero_term(VLeaf(), RAT) == parse_term("0.*")
    assert zero_term(D2, RAT) == parse_term("<0.*, 0.*>")
    left_nested = VNode(VNode(VLeaf(), VLeaf()), VLeaf())
    assert zero_term(left_nested, RAT) == parse_term("<<0.*, 0.*>, 0.*>")
    assert term_to_vec(zero_term(left_nested, RAT), left_nested).entries \
        == vec("0", "0", "0").entries


def test_vec_term_round_trip_is_bijective():
    rng = random.Random(5)
    for _ in range(100):
        shape = gen_vshape(rng, 8)
        entries = tuple(gen_scalar(rng, RAT) for _ in range(dim(shape)))
        v = DenseVec(entries, shape)
        t = vec_to_term(v)
        assert infer(EMPTY, t).prop == to_prop(shape)
        assert nf(t) == t  # canonical vectors are irreducible
        assert term_to_vec(t, shape) == v


def test_vector_reads_through_normalization():
    assert term_to_vec(parse_term("1.* + 2.*"), VLeaf()).entries == (r("3"),)
    assert term_to_vec(parse_term("2 . <1.*, 3.*>"), D2).entries \
        == (r("2"), r("6"))


def test_sum_scalar_homomorphism():
    rng = random.Random(11)
    for _ in range(60):
        shape = gen_vshape(rng, 6)
        n = dim(shape)
        u = DenseVec(tuple(gen_scalar(rng, RAT) for _ in range(n)), shape)
        v = DenseVec(tuple(gen_scalar(rng, RAT) for _ in range(n)), shape)
        a = gen_scalar(rng, RAT)
        assert term_to_vec(Sum(vec_to_term(u), vec_to_term(v)), shape) == u + v
        assert term_to_vec(Prod(a, vec_to_term(u)), shape) == u.scale(a)


def test_read_rejects_wrong_shape():
    with pytest.raises(IllTyped):
        term_to_vec(parse_term("1.*"), D2)


def test_two_by_two_example():
    m = mat([["1", "3"], ["2", "4"]])
    t = matrix_to_term(m)
    assert infer(EMPTY, t).prop == parse_prop("(1 & 1) -o (1 & 1)")
    out = term_to_vec(App(t, parse_term("<5.*, 6.*>")), D2)
    assert out.entries == (r("23"), r("34"))
    assert out == mat_vec(m, vec("5", "6"))


def test_two_by_two_term_shape_matches_projection_sum():
    t = matrix_to_term(mat([["1", "3"], ["2", "4"]]))
    want = parse_term(
        r"\x:1&1. da1(x; y:1. d1(y; <1.*, 2.*>))"
        r" + da2(x; y:1. d1(y; <3.*, 4.*>))")
    assert t == want


def test_identity_matrix():
    t = matrix_to_term(mat([["1", "0"], ["0", "1"]]))
    out = term_to_vec(App(t, vec_to_term(vec("5", "7"))), D2)
    assert out.entries == (r("5"), r("7"))


def test_random_matrices_against_dense_oracle():
    rng = random.Random(23)
    for _ in range(50):
        n, m = rng.randint(1, 4), rng.randint(1, 4)
        entries = [[gen_scalar(rng, RAT) for _ in range(m)] for _ in range(n)]
        matrix = DenseMat.of(entries)
        u = DenseVec.of([gen_scalar(rng, RAT) for _ in range(m)])
        t = matrix_to_term(matrix)
        got = term_to_vec(App(t, vec_to_term(u)), matrix.codomain)
        assert got == mat_vec(matrix, u)


def test_matrix_over_gauss():
    i = GAUSS.parse_scalar("i")
    one = GAUSS.parse_scalar("1")
    m = DenseMat.of([[i, one], [one, i]])
    u = DenseVec.of([GAUSS.parse_scalar("2"), GAUSS.parse_scalar("-i")])
    got = term_to_vec(App(matrix_to_term(m), vec_to_term(u)), m.codomain)
    assert got == mat_vec(m, u)


def test_mat_pow():
    m = mat([["0", "1"], ["1", "0"]])
    assert mat_pow(m, 0).entries == mat([["1", "0"], ["0", "1"]]).entries
    assert mat_pow(m, 2).entries == mat([["1", "0"], ["0", "1"]]).entries
    with pytest.raises(DimMismatch):
        mat_pow(mat([["1", "2", "3"], ["4", "5", "6"]]), 2)


def test_dim_mismatch_checks():
    with pytest.raises(DimMismatch):
        mat_vec(mat([["1", "2"]]), vec("1"))
    with pytest.raises(DimMismatch):
        DenseVec((r("1"),), D2)


def test_church_numerals():
    assert infer(EMPTY, church(0)).prop == nat_type()
    assert infer(EMPTY, church(3)).prop == nat_type()
    # two applications of the identity step reach the base argument
    ident = parse_term(r"\z:1. z")
    applied = App(App(TApp(church(2), One()), parse_term("5.*")),
                  BangI(ident))
    assert nf(applied) == parse_term("5.*")


def test_miter_zero_and_one():
    rng = random.Random(3)
    m = mat([["2", "1"], ["0", "1"]])
    t = matrix_to_term(m)
    mit = miter_term(D2)
    for _ in range(10):
        u = DenseVec.of([gen_scalar(rng, RAT), gen_scalar(rng, RAT)])
        base = App(App(App(mit, church(0)), BangI(t)), vec_to_term(u))
        assert term_to_vec(base, D2) == u
        once = App(App(App(mit, church(1)), BangI(t)), vec_to_term(u))
        assert term_to_vec(once, D2) == mat_vec(m, u)


def test_miter_swap_cubed():
    swap = mat([["0", "1"], ["1", "0"]])
    u = vec("2", "5")
    applied = App(App(App(miter_term(D2), church(3)),
                      BangI(matrix_to_term(swap))), vec_to_term(u))
    assert term_to_vec(applied, D2).entries == (r("5"), r("2"))

"""Threading checker vs. declarative split enumeration."""

import random

import pytest

from ls2.declarative import derivable_types
from ls2.gen import GenConfig, Generator, gen_target_prop, mutate, \
    random_linear_context
from ls2.semiring import RAT
from ls2.syntax import *
from ls2.textio import parse_prop, parse_term
from ls2.typecheck import TypingCtx, infer

r = RAT.parse_scalar
A = PVar("A")


def agree(gamma, t, xi=None):
    xi = xi or {}
    try:
        inferred = infer(TypingCtx(xi=xi, gamma=gamma), t).prop
    except Exception:
        inferred = None
    declared = derivable_types(xi, gamma, t)
    if inferred is None:
        assert not declared, f"threading rejects but enumeration gives {declared}"
    else:
        assert declared == frozenset((inferred,))
    return inferred


def test_plain_examples():
    assert agree({"x": A, "y": A}, parse_term("(x*y)+(y*x)")) == Tensor(A, A)
    assert agree({"x": A, "y": A}, parse_term("(x+y)*(y+x)")) is None
    assert agree({}, parse_term("2.*")) == One()
    assert agree({}, parse_term(r"\x:1. x")) == parse_prop("1 -o 1")


def test_slack_pair_with_unit_side():
    # the top introduction absorbs what the other component consumes
    assert agree({"y": A}, parse_term("<<>, y>")) == With(Top(), A)
    assert agree({"y": A}, parse_term("<y, <>>")) == With(A, Top())


def test_slack_cannot_rescue_exact_branches():
    assert agree({"x": One(), "y": One()},
                 parse_term("<d1(x; <>), y>")) is None


def test_zero_elim_absorbs_arbitrary_leftovers():
    gamma = {"z": Zero(), "a": One(), "b": Top()}
    assert agree(gamma, parse_term("d0[1 -o 1](z)")) == parse_prop("1 -o 1")


def test_case_branches_share_context():
    t = parse_term("dp(s; x:1. d1(x; d1(w; 2.*)); y:1. d1(y; d1(w; 3.*)))")
    assert agree({"s": parse_prop("1 (+) 1"), "w": One()}, t) == One()
    bad = parse_term("dp(s; x:1. d1(x; d1(w; 2.*)); y:1. d1(y; 3.*))")
    assert agree({"s": parse_prop("1 (+) 1"), "w": One()}, bad) is None


def test_mixed_slack_case_branches():
    # one branch is exactly consuming, the other absorbs through 0e
    t = parse_term("dp(s; x:1. d1(x; d1(w; 2.*)); y:1. d1(y; d0[1](z)))")
    gamma = {"s": parse_prop("1 (+) 1"), "w": One(), "z": Zero()}
    assert agree(gamma, t) is None  # the first branch cannot absorb z
    t2 = parse_term("dp(s; x:1. d1(x; d1(w; d0[1](z))); y:1. d1(y; d0[1](z)))")
    assert agree(gamma, t2) == One()


def test_star_requires_empty_linear_context():
    assert agree({"x": One()}, Star(r("1"))) is None


def test_randomized_agreement():
    cfg = GenConfig()
    for seed in range(400):
        rng = random.Random(seed)
        g = Generator(rng, cfg)
        gamma = random_linear_context(rng, cfg, 5)
        target = gen_target_prop(rng, cfg)
        t = g.term(gamma, target, 8)
        if seed % 2:
            t = mutate(rng, t, cfg)
        if term_size(t) > 60:
            continue
        agree(gamma, t)

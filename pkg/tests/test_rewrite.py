import pytest

from ls2.errors import ReplayError, StepLimitExceeded
from ls2.rewrite import (RuleId, STANDARD_RULES, Trace, equiv, is_normal, nf,
                         normalize, normalize_random, reducts, step)
from ls2.semiring import RAT
from ls2.syntax import *
from ls2.textio import parse_term, print_term

r = RAT.parse_scalar


def t_(text):
    return parse_term(text)


def single(term, rule, result):
    out = reducts(term)
    assert [(x[0], x[2]) for x in out] == [(rule, result)], \
        f"{print_term(term)} gave {out}"


# -- the nine cut rules ------------------------------------------------------

def test_beta_one():
    single(t_("d1(2.*; x)"), RuleId.BETA_ONE, t_("2 . x"))


def test_beta_lolli():
    st = step(t_(r"(\x:1. x) 2.*"))
    assert st is not None and st[0] is RuleId.BETA_LOLLI and st[2] == t_("2.*")


def test_beta_tensor():
    single(t_("dx(x * y; a:A, b:B. b * a)"), RuleId.BETA_TENSOR,
           t_("y * x"))


def test_beta_with():
    single(t_("da1(<x, y>; a:A. a * a)"), RuleId.BETA_WITH1, t_("x * x"))
    single(t_("da2(<x, y>; b:B. b)"), RuleId.BETA_WITH2, t_("y"))


def test_beta_plus():
    single(t_("dp(inl[B](x); a:A. a; b:B. b)"), RuleId.BETA_PLUS_INL, t_("x"))
    single(t_("dp(inr[A](y); a:A. a; b:B. b)"), RuleId.BETA_PLUS_INR, t_("y"))


def test_beta_bang():
    single(t_("db(!x; a:A. a * a)"), RuleId.BETA_BANG, t_("x * x"))


def test_beta_forall():
    single(t_(r"(/\X. \x:X. x) [1]"), RuleId.BETA_FORALL, t_(r"\x:1. x"))


# -- the sixteen commutation rules --------------------------------------------

def test_sum_star():
    single(t_("1.* + 2.*"), RuleId.SUM_STAR, t_("3.*"))


def test_sum_lam():
    single(t_(r"(\x:1. x) + (\y:1. 2.*)"), RuleId.SUM_LAM,
           t_(r"\x:1. x + 2.*"))


def test_sum_lam_needs_equal_annotations():
    assert reducts(t_(r"(\x:1. x) + (\y:top. y)")) == []


def test_sum_tensor_elim():
    single(t_("dx(t + u; a:A, b:B. a * b)"), RuleId.SUM_TENSORE,
           t_("dx(t; a:A, b:B. a * b) + dx(u; a:A, b:B. a * b)"))


def test_sum_unit():
    single(t_("<> + <>"), RuleId.SUM_UNIT, t_("<>"))


def test_sum_pair():
    single(t_("<t, u> + <v, w>"), RuleId.SUM_PAIR, t_("<t + v, u + w>"))


def test_sum_plus_elim():
    single(t_("dp(t + u; a:A. a; b:B. b)"), RuleId.SUM_PLUSE,
           t_("dp(t; a:A. a; b:B. b) + dp(u; a:A. a; b:B. b)"))


def test_sum_bang():
    single(t_("!t + !u"), RuleId.SUM_BANG, t_("!(t + u)"))


def test_sum_tlam():
    single(t_(r"(/\X. t) + (/\Y. u)"), RuleId.SUM_TLAM, t_(r"/\X. t + u"))


def test_prod_star():
    single(t_("2 . 3.*"), RuleId.PROD_STAR, t_("6.*"))


def test_prod_lam():
    single(t_(r"2 . \x:1. x"), RuleId.PROD_LAM, t_(r"\x:1. 2 . x"))


def test_prod_tensor_elim():
    single(t_("dx(2 . t; a:A, b:B. a * b)"), RuleId.PROD_TENSORE,
           t_("2 . dx(t; a:A, b:B. a * b)"))


def test_prod_unit():
    single(t_("2 . <>"), RuleId.PROD_UNIT, t_("<>"))


def test_prod_pair():
    single(t_("2 . <t, u>"), RuleId.PROD_PAIR, t_("<2 . t, 2 . u>"))


def test_prod_plus_elim():
    single(t_("dp(2 . t; a:A. a; b:B. b)"), RuleId.PROD_PLUSE,
           t_("2 . dp(t; a:A. a; b:B. b)"))


def test_prod_bang():
    single(t_("2 . !t"), RuleId.PROD_BANG, t_("!(2 . t)"))


def test_prod_tlam():
    single(t_(r"2 . /\X. t"), RuleId.PROD_TLAM, t_(r"/\X. 2 . t"))


# -- strategies, traces, convertibility ---------------------------------------

def test_variable_is_irreducible():
    assert reducts(Var("x")) == []
    assert step(t_(r"\x:1. x")) is None


def test_reducts_order_is_preorder_then_rule():
    term = Sum(t_("1.* + 2.*"), t_("3.* + 4.*"))
    got = [(rule, path) for rule, path, _ in reducts(term)]
    assert got == [(RuleId.SUM_STAR, (0,)), (RuleId.SUM_STAR, (1,))]


def test_normalize_examples():
    assert nf(t_("2 . 3.*")) == t_("6.*")
    assert nf(t_(r"(/\X. \x:X. x) [1] 5.*")) == t_("5.*")
    assert nf(t_("d1(2.*; <1.*, 1.*>)")) == t_("<2.*, 2.*>")


def test_bang_counterexample_normalizes_to_two():
    f = r"(\x:!1. db(x; y:1. 2.*))"
    assert nf(t_(f + " (!(1.*) + !(3.*))")) == t_("2.*")
    assert nf(t_(f"({f} !(1.*)) + ({f} !(3.*))")) == t_("4.*")


def test_step_limit():
    big = t_("1.*")
    for k in range(12):
        big = Sum(big, big)
    with pytest.raises(StepLimitExceeded) as exc:
        normalize(big, max_steps=10)
    assert exc.value.trace is not None and len(exc.value.trace.entries) == 10


def test_random_strategies_agree():
    term = t_(r"((\x:1. x) + (\x:1. x)) 3.*")
    finals = {nf(term)}
    for seed in range(1, 51):
        out, _ = normalize_random(term, seed)
        finals.add(out)
    assert finals == {t_("6.*")}


def test_ultra_mode_projects():
    outcomes = set()
    for seed in range(40):
        out, _ = normalize_random(t_("1.* + 2.*"), seed, mode="ultra")
        outcomes.add(out)
    assert outcomes == {t_("3.*"), t_("1.*"), t_("2.*")}


def test_ultra_on_irreducible_is_identity():
    out, trace = normalize_random(t_(r"\x:1. x"), seed=5, mode="ultra")
    assert out == t_(r"\x:1. x") and not trace.entries


def test_equiv_examples():
    assert equiv(t_("1.* + 2.*"), t_("3.*"))
    assert not equiv(t_(r"\y:1 -o 1. y 3.*"),
                     t_(r"\y:1 -o 1. (y 1.*) + (y 2.*)"))
    u = t_(r"\x:1&1. da1(x; y:1. d1(y; <2.*, 3.*>))")
    assert equiv(u, u)


def test_trace_serialize_and_replay():
    term = t_(r"(\x:1. x + x) 2.*")
    normal, trace = normalize(term)
    assert normal == t_("4.*")
    text = trace.serialize()
    assert text.splitlines()[0] == "0 beta.lolli e"
    assert trace.replay() == normal
    parsed = Trace.parse_steps(text)
    assert [(i, rid) for i, rid, _ in parsed] \
        == [(0, RuleId.BETA_LOLLI), (1, RuleId.SUM_STAR)]


def test_replay_detects_tampering():
    term = t_("1.* + 2.*")
    _, trace = normalize(term)
    trace.entries[0] = type(trace.entries[0])(
        0, RuleId.PROD_STAR, (), trace.entries[0].digest)
    with pytest.raises(ReplayError):
        trace.replay()


def test_reduction_under_binders():
    assert nf(t_(r"\x:1. 1.* + 2.*")) == t_(r"\x:1. 3.*")


def test_rule_count():
    assert len(STANDARD_RULES) == 25
    assert len([r_ for r_ in RuleId]) == 28

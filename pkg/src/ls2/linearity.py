"""The !-free fragment: elimination contexts, decomposition, and oracle
checks of the linearity equations and of observational equivalence.

An elimination context is a term whose single free variable is the hole
``_``; plugging is plain substitution (the hole never sits under a binder
in the context grammar, so no capture can occur).
"""

from __future__ import annotations

import dataclasses
from dataclasses import dataclass

from . import syntax as s
from .encodings import is_v_type, term_to_vec
from .errors import (IllTypedContext, MultipleFreeVars, NotIrreducible,
                     OutsideFragment, PreconditionViolated)
from .rewrite import is_normal
from .semiring import Scalar
from .typecheck import TypingCtx, infer

HOLE = "_"


def prop_mentions_bang(p: s.Prop) -> bool:
    if isinstance(p, s.Bang):
        return True
    return any(prop_mentions_bang(c) for c in s.prop_children(p))


def in_linear_fragment(t: s.Term) -> bool:
    """No !-introduction, !-elimination, or ! inside any type annotation."""
    if isinstance(t, (s.BangI, s.ElimBang)):
        return False
    kids, props = s.TERM_CHILDREN[type(t)]
    for name in props:
        if prop_mentions_bang(getattr(t, name)):
            return False
    return all(in_linear_fragment(getattr(t, name)) for name, _, _ in kids)


# ---------------------------------------------------------------------------
# elimination contexts
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class ElimContext:
    """One-hole context made of eliminations along the major premise."""

    term: s.Term

    def __post_init__(self):
        _validate_context(self.term)

    def plug(self, u: s.Term) -> s.Term:
        return s.subst_term(self.term, HOLE, u)

    def measure(self) -> int:
        return s.measure_mu(self.term)


def _validate_context(k: s.Term) -> None:
    if isinstance(k, s.Var) and k.name == HOLE:
        return
    if isinstance(k, s.ElimOne):
        if s.fv_term(k.body):
            raise IllTypedContext("the unit continuation must be closed")
        return _validate_context(k.arg)
    if isinstance(k, s.App):
        if s.fv_term(k.arg):
            raise IllTypedContext("the argument must be closed")
        return _validate_context(k.fn)
    if isinstance(k, s.ElimTensor):
        if s.fv_term(k.body):
            raise IllTypedContext("the tensor continuation may only use its binders")
        return _validate_context(k.arg)
    if isinstance(k, s.ElimZero):
        return _validate_context(k.arg)
    if isinstance(k, (s.ElimWith1, s.ElimWith2)):
        if s.fv_term(k.body):
            raise IllTypedContext("the projection continuation may only use its binder")
        return _validate_context(k.arg)
    if isinstance(k, s.ElimPlus):
        if s.fv_term(k.left) | s.fv_term(k.right):
            raise IllTypedContext("case branches may only use their binders")
        return _validate_context(k.arg)
    if isinstance(k, s.TApp):
        return _validate_context(k.fn)
    raise IllTypedContext(f"not an elimination context: {k!r}")


def plug(context: ElimContext, u: s.Term) -> s.Term:
    return context.plug(u)


@dataclass(frozen=True)
class Decomposition:
    context: ElimContext
    head: s.Term
    cut_type: s.Prop


def _head_ok(u: s.Term) -> bool:
    return (isinstance(u, s.Var) or s.is_intro(u)
            or isinstance(u, (s.Sum, s.Prod)))


def decompose(t: s.Term, var_type: s.Prop, var_name: str | None = None
              ) -> Decomposition:
    """Split an irreducible one-free-variable term into an elimination
    context around a head that is a variable, an introduction, a sum, or a
    product."""
    if not in_linear_fragment(t):
        raise OutsideFragment("decomposition lives in the !-free fragment")
    free = s.fv_term(t)
    if len(free) > 1:
        raise MultipleFreeVars(sorted(free))
    if var_name is None:
        var_name = next(iter(free)) if free else "x"
    if not is_normal(t):
        raise NotIrreducible("decomposition expects an irreducible term")

    def go(u: s.Term) -> tuple[s.Term, s.Term]:
        if _head_ok(u):
            return s.Var(HOLE), u
        if isinstance(u, (s.ElimOne, s.App, s.ElimTensor, s.ElimZero,
                          s.ElimWith1, s.ElimWith2, s.ElimPlus, s.TApp)):
            major = "fn" if isinstance(u, (s.App, s.TApp)) else "arg"
            k, head = go(getattr(u, major))
            return dataclasses.replace(u, **{major: k}), head
        raise NotIrreducible(f"unexpected shape in an irreducible term: {u!r}")

    k_term, head = go(t)
    cut = infer(TypingCtx(gamma={var_name: var_type}
                          if var_name in s.fv_term(head) else {}),
                head).prop
    return Decomposition(ElimContext(k_term), head, cut)


# ---------------------------------------------------------------------------
# linearity equations
# ---------------------------------------------------------------------------


@dataclass
class LinearityReport:
    sum_holds: bool
    scalar_holds: bool
    details: dict

    @property
    def ok(self) -> bool:
        return self.sum_holds and self.scalar_holds


def _plug_free(t: s.Term, name: str, u: s.Term) -> s.Term:
    return s.subst_term(t, name, u)


def check_linearity(t: s.Term, a: s.Prop, b: s.Prop, u1: s.Term, u2: s.Term,
                    scalar: Scalar, max_steps: int = 100_000) -> LinearityReport:
    """Check t{u1 + u2} == t{u1} + t{u2} and t{a*u1} == a*t{u1} by reading
    vectors off both sides at the target vector type."""
    for label, term in (("t", t), ("u1", u1), ("u2", u2)):
        if not in_linear_fragment(term):
            raise PreconditionViolated(f"{label} mentions !")
    if prop_mentions_bang(a) or prop_mentions_bang(b):
        raise PreconditionViolated("types mention !")
    shape = is_v_type(b)
    if shape is None:
        raise PreconditionViolated(f"target type {b} is not a vector type")
    free = s.fv_term(t)
    if len(free) > 1:
        raise PreconditionViolated(f"t has several free variables: {sorted(free)}")
    x = next(iter(free)) if free else "x"
    try:
        rep = infer(TypingCtx(gamma={x: a}), t)
    except Exception as exc:
        raise PreconditionViolated(f"t is not typed at {b} under x:{a}: {exc}")
    if rep.prop != b:
        raise PreconditionViolated(f"t has type {rep.prop}, expected {b}")
    for label, u in (("u1", u1), ("u2", u2)):
        if s.fv_term(u):
            raise PreconditionViolated(f"{label} is not closed")
        try:
            urep = infer(TypingCtx(), u)
        except Exception as exc:
            raise PreconditionViolated(f"{label} is ill-typed: {exc}")
        if urep.prop != a:
            raise PreconditionViolated(f"{label} has type {urep.prop}, expected {a}")

    read = lambda term: term_to_vec(term, shape, max_steps)
    lhs_sum = read(_plug_free(t, x, s.Sum(u1, u2)))
    rhs_sum = read(s.Sum(_plug_free(t, x, u1), _plug_free(t, x, u2)))
    lhs_sc = read(_plug_free(t, x, s.Prod(scalar, u1)))
    rhs_sc = read(s.Prod(scalar, _plug_free(t, x, u1)))
    return LinearityReport(
        sum_holds=lhs_sum == rhs_sum,
        scalar_holds=lhs_sc == rhs_sc,
        details={"sum": (lhs_sum, rhs_sum), "scalar": (lhs_sc, rhs_sc)})


# ---------------------------------------------------------------------------
# observational equivalence, sampled
# ---------------------------------------------------------------------------


@dataclass
class ObsEquivReport:
    verdicts: list[bool]
    refuted: bool

    @property
    def consistent(self) -> bool:
        return not self.refuted


def obs_equiv_sample(t1: s.Term, t2: s.Term, b: s.Prop,
                     contexts: list[tuple[s.Term, s.Prop]],
                     max_steps: int = 100_000) -> ObsEquivReport:
    """Compare the two terms inside each sampled context.

    A single differing observation refutes equivalence; agreement on every
    sample is evidence only since the real definition quantifies over all
    contexts.
    """
    verdicts = []
    for c, result_type in contexts:
        shape = is_v_type(result_type)
        if shape is None:
            raise IllTypedContext(f"{result_type} is not a vector type")
        rep = infer(TypingCtx(gamma={HOLE: b}), c)
        if rep.prop != result_type:
            raise IllTypedContext(
                f"context has type {rep.prop}, expected {result_type}")
        v1 = term_to_vec(s.subst_term(c, HOLE, t1), shape, max_steps)
        v2 = term_to_vec(s.subst_term(c, HOLE, t2), shape, max_steps)
        verdicts.append(v1 == v2)
    return ObsEquivReport(verdicts, refuted=not all(verdicts))

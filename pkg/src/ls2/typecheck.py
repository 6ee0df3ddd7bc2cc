"""Linear type checking.

Context splitting is resolved by leftover threading: two-premise
multiplicative rules check their second premise against whatever the first
left over.  Slack (the ability of a subderivation to absorb arbitrary extra
linear hypotheses) enters only through the top introduction and the zero
elimination; a usage ``(consumed, slack=True)`` means a derivation exists
for every linear context between ``consumed`` and what was available.

``infer`` decides the judgement itself: it fails if the linear context is
not fully consumed and no slack can absorb the leftovers.  The brute-force
split-enumeration checker in :mod:`ls2.declarative` is kept as an oracle
for this algorithm.
"""

from __future__ import annotations

from dataclasses import dataclass
from types import MappingProxyType
from typing import Mapping

from . import syntax as s
from .errors import (AnnotationMismatch, BranchUsageMismatch,
                     EscapingTypeVariable, IllScopedTerm, LinearVarReused,
                     LinearVarUnused, NonEmptyLinearCtxUnderBang,
                     TypeMismatch, UnboundVariable)


@dataclass(frozen=True)
class Usage:
    consumed: frozenset[str]
    slack: bool


@dataclass(frozen=True)
class TypeReport:
    prop: s.Prop
    usage: Usage


class TypingCtx:
    """Non-linear context xi and linear context gamma, with disjoint names."""

    def __init__(self, xi: Mapping[str, s.Prop] | None = None,
                 gamma: Mapping[str, s.Prop] | None = None):
        xi = dict(xi or {})
        gamma = dict(gamma or {})
        overlap = set(xi) & set(gamma)
        if overlap:
            raise ValueError(f"variables in both contexts: {sorted(overlap)}")
        self.xi: Mapping[str, s.Prop] = MappingProxyType(xi)
        self.gamma: Mapping[str, s.Prop] = MappingProxyType(gamma)

    def __repr__(self):
        return f"TypingCtx(xi={dict(self.xi)}, gamma={dict(self.gamma)})"


EMPTY = TypingCtx()


def _join_additive(c1: frozenset, s1: bool, c2: frozenset, s2: bool,
                   what: str) -> tuple[frozenset, bool]:
    """Combine usages of branches checked against the same linear context.

    A branch with slack can be blamed for whatever the other branch consumed
    beyond it; without slack the consumptions must line up exactly.
    """
    if (c1 - c2) and not s2:
        raise BranchUsageMismatch(
            f"{what}: one branch consumes {sorted(c1 - c2)} that the other "
            "cannot absorb")
    if (c2 - c1) and not s1:
        raise BranchUsageMismatch(
            f"{what}: one branch consumes {sorted(c2 - c1)} that the other "
            "cannot absorb")
    return c1 | c2, s1 and s2


def _names_in_use(xi, avail, spent, extra=()):
    out = set(xi) | set(avail) | set(spent)
    out.update(extra)
    return out


class _Checker:
    def __init__(self, xi: dict[str, s.Prop]):
        self.xi = xi

    # The recursion returns (type, consumed, slack) with consumed a subset
    # of avail; `spent` only sharpens error messages.
    def infer(self, t: s.Term, avail: dict[str, s.Prop],
              spent: frozenset[str]) -> tuple[s.Prop, frozenset[str], bool]:
        xi = self.xi
        NOTHING: frozenset[str] = frozenset()

        if isinstance(t, s.BVar):
            raise IllScopedTerm(f"dangling de Bruijn index {t.index}")

        if isinstance(t, s.Var):
            if t.name in avail:
                return avail[t.name], frozenset((t.name,)), False
            if t.name in xi:
                return xi[t.name], NOTHING, False
            if t.name in spent:
                raise LinearVarReused(
                    f"linear variable {t.name} already consumed")
            raise UnboundVariable(t.name)

        if isinstance(t, s.Star):
            return s.One(), NOTHING, False

        if isinstance(t, s.Unit):
            return s.Top(), NOTHING, True

        if isinstance(t, s.Sum):
            a1, c1, s1 = self.infer(t.left, avail, spent)
            a2, c2, s2 = self.infer(t.right, avail, spent)
            if a1 != a2:
                raise TypeMismatch(f"sum of {a1} and {a2}")
            c, sl = _join_additive(c1, s1, c2, s2, "sum")
            return a1, c, sl

        if isinstance(t, s.Prod):
            a, c, sl = self.infer(t.body, avail, spent)
            return a, c, sl

        if isinstance(t, s.Pair):
            a1, c1, s1 = self.infer(t.left, avail, spent)
            a2, c2, s2 = self.infer(t.right, avail, spent)
            c, sl = _join_additive(c1, s1, c2, s2, "pair")
            return s.With(a1, a2), c, sl

        if isinstance(t, s.ElimOne):
            a1, c1, s1 = self.infer(t.arg, avail, spent)
            if not isinstance(a1, s.One):
                raise TypeMismatch(f"unit elimination on {a1}")
            rest = {k: v for k, v in avail.items() if k not in c1}
            a2, c2, s2 = self.infer(t.body, rest, spent | c1)
            return a2, c1 | c2, s1 or s2

        if isinstance(t, s.Lam):
            x = s.fresh_name(t.hint or "x",
                             _names_in_use(xi, avail, spent, s.fv_term(t.body)))
            body = s.open_term(t.body, s.Var(x))
            a, c, sl = self.infer(body, {**avail, x: t.ann}, spent)
            c = self._bind(c, sl, x)
            return s.Lolli(t.ann, a), c, sl

        if isinstance(t, s.App):
            a1, c1, s1 = self.infer(t.fn, avail, spent)
            if not isinstance(a1, s.Lolli):
                raise TypeMismatch(f"application of a term of type {a1}")
            rest = {k: v for k, v in avail.items() if k not in c1}
            a2, c2, s2 = self.infer(t.arg, rest, spent | c1)
            if a2 != a1.left:
                raise TypeMismatch(
                    f"argument has type {a2}, function expects {a1.left}")
            return a1.right, c1 | c2, s1 or s2

        if isinstance(t, s.TensorI):
            a1, c1, s1 = self.infer(t.left, avail, spent)
            rest = {k: v for k, v in avail.items() if k not in c1}
            a2, c2, s2 = self.infer(t.right, rest, spent | c1)
            return s.Tensor(a1, a2), c1 | c2, s1 or s2

        if isinstance(t, s.ElimTensor):
            a1, c1, s1 = self.infer(t.arg, avail, spent)
            if not isinstance(a1, s.Tensor):
                raise TypeMismatch(f"tensor elimination on {a1}")
            if a1.left != t.ann_x or a1.right != t.ann_y:
                raise TypeMismatch(
                    f"tensor binder annotations {t.ann_x}, {t.ann_y} do not "
                    f"match {a1}")
            rest = {k: v for k, v in avail.items() if k not in c1}
            used = _names_in_use(xi, avail, spent, s.fv_term(t.body))
            x = s.fresh_name(t.hint_x or "x", used)
            y = s.fresh_name(t.hint_y or "y", used | {x})
            body = s.open_term(t.body, s.Var(x), s.Var(y))
            a2, c2, s2 = self.infer(
                body, {**rest, x: t.ann_x, y: t.ann_y}, spent | c1)
            c2 = self._bind(self._bind(c2, s2, x), s2, y)
            return a2, c1 | c2, s1 or s2

        if isinstance(t, s.ElimZero):
            a1, c1, _s1 = self.infer(t.arg, avail, spent)
            if not isinstance(a1, s.Zero):
                raise TypeMismatch(f"zero elimination on {a1}")
            return t.ann, c1, True

        if isinstance(t, (s.ElimWith1, s.ElimWith2)):
            a1, c1, s1 = self.infer(t.arg, avail, spent)
            if not isinstance(a1, s.With):
                raise TypeMismatch(f"projection from {a1}")
            comp = a1.left if isinstance(t, s.ElimWith1) else a1.right
            if comp != t.ann:
                raise TypeMismatch(
                    f"projection binder annotation {t.ann} does not match "
                    f"component {comp}")
            rest = {k: v for k, v in avail.items() if k not in c1}
            x = s.fresh_name(t.hint or "x",
                             _names_in_use(xi, avail, spent, s.fv_term(t.body)))
            body = s.open_term(t.body, s.Var(x))
            a2, c2, s2 = self.infer(body, {**rest, x: t.ann}, spent | c1)
            c2 = self._bind(c2, s2, x)
            return a2, c1 | c2, s1 or s2

        if isinstance(t, s.Inl):
            a, c, sl = self.infer(t.body, avail, spent)
            return s.Plus(a, t.ann), c, sl

        if isinstance(t, s.Inr):
            a, c, sl = self.infer(t.body, avail, spent)
            return s.Plus(t.ann, a), c, sl

        if isinstance(t, s.ElimPlus):
            a1, c1, s1 = self.infer(t.arg, avail, spent)
            if not isinstance(a1, s.Plus):
                raise TypeMismatch(f"case on {a1}")
            if a1.left != t.ann_x or a1.right != t.ann_y:
                raise TypeMismatch(
                    f"case binder annotations {t.ann_x}, {t.ann_y} do not "
                    f"match {a1}")
            rest = {k: v for k, v in avail.items() if k not in c1}
            used = _names_in_use(xi, avail, spent,
                                 s.fv_term(t.left) | s.fv_term(t.right))
            x = s.fresh_name(t.hint_x or "x", used)
            lbody = s.open_term(t.left, s.Var(x))
            al, cl, sl_ = self.infer(lbody, {**rest, x: t.ann_x}, spent | c1)
            cl = self._bind(cl, sl_, x)
            y = s.fresh_name(t.hint_y or "y", used)
            rbody = s.open_term(t.right, s.Var(y))
            ar, cr, sr = self.infer(rbody, {**rest, y: t.ann_y}, spent | c1)
            cr = self._bind(cr, sr, y)
            if al != ar:
                raise TypeMismatch(f"case branches yield {al} and {ar}")
            c2, s2 = _join_additive(cl, sl_, cr, sr, "case branches")
            return al, c1 | c2, s1 or s2

        if isinstance(t, s.BangI):
            a, c, _sl = self.infer(t.body, avail, spent)
            if c:
                raise NonEmptyLinearCtxUnderBang(
                    f"!-introduction consumes linear variables {sorted(c)}")
            return s.Bang(a), NOTHING, False

        if isinstance(t, s.ElimBang):
            a1, c1, s1 = self.infer(t.arg, avail, spent)
            if not isinstance(a1, s.Bang):
                raise TypeMismatch(f"!-elimination on {a1}")
            if a1.body != t.ann:
                raise TypeMismatch(
                    f"!-binder annotation {t.ann} does not match {a1}")
            rest = {k: v for k, v in avail.items() if k not in c1}
            x = s.fresh_name(t.hint or "x",
                             _names_in_use(xi, avail, spent, s.fv_term(t.body)))
            body = s.open_term(t.body, s.Var(x))
            sub = _Checker({**xi, x: t.ann})
            a2, c2, s2 = sub.infer(body, rest, spent | c1)
            return a2, c1 | c2, s1 or s2

        if isinstance(t, s.TLam):
            taken = set()
            for p in list(xi.values()) + list(avail.values()):
                taken |= s.ftv_prop(p)
            x = s.fresh_name(t.hint or "X", taken | s.ftv_term(t.body))
            body = s.open_term_prop(t.body, s.PVar(x))
            a, c, sl = self.infer(body, avail, spent)
            if any(x in s.ftv_prop(p)
                   for p in list(xi.values()) + list(avail.values())):
                raise EscapingTypeVariable(x)
            return s.prop_close(a, x, hint=t.hint), c, sl

        if isinstance(t, s.TApp):
            a, c, sl = self.infer(t.fn, avail, spent)
            if not isinstance(a, s.Forall):
                raise TypeMismatch(f"type application of a term of type {a}")
            return s.prop_open(a.body, t.ann), c, sl

        raise TypeError(f"not a term: {t!r}")

    @staticmethod
    def _bind(c: frozenset[str], slack: bool, x: str) -> frozenset[str]:
        if x not in c and not slack:
            raise LinearVarUnused(f"linear variable {x} is never used")
        return c - {x}


def infer(ctx: TypingCtx, t: s.Term) -> TypeReport:
    """Decide the judgement with ``ctx`` as stated, returning type and usage.

    Raises LinearVarUnused if part of the linear context is left over and
    no slack can absorb it.
    """
    prop, consumed, slack = _Checker(dict(ctx.xi)).infer(
        t, dict(ctx.gamma), frozenset())
    leftovers = set(ctx.gamma) - consumed
    if leftovers and not slack:
        raise LinearVarUnused(
            f"linear variables never used: {sorted(leftovers)}")
    return TypeReport(prop, Usage(consumed, slack))


def check(ctx: TypingCtx, t: s.Term, a: s.Prop) -> Usage:
    report = infer(ctx, t)
    if report.prop != a:
        raise AnnotationMismatch(f"inferred {report.prop}, stated {a}")
    return report.usage


def holds(ctx: TypingCtx, t: s.Term, a: s.Prop | None = None) -> bool:
    """True iff the judgement is derivable (optionally at a stated type)."""
    try:
        report = infer(ctx, t)
    except Exception:
        return False
    return a is None or report.prop == a

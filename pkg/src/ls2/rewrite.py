"""The reduction relation: nine cut rules, sixteen commutation rules, and
the three extra ultra-reduction projections.

Positions are paths of child indices (see ``TERM_CHILDREN``); the default
strategy is leftmost-outermost, i.e. pre-order position, then rule order.
"""

from __future__ import annotations

import dataclasses
import enum
import random
from dataclasses import dataclass, field

from . import syntax as s
from .errors import ReplayError, StepLimitExceeded
from .semiring import scalar_add, scalar_mul


class RuleId(enum.Enum):
    BETA_ONE = "beta.one"
    BETA_LOLLI = "beta.lolli"
    BETA_TENSOR = "beta.tensor"
    BETA_WITH1 = "beta.with1"
    BETA_WITH2 = "beta.with2"
    BETA_PLUS_INL = "beta.plus.inl"
    BETA_PLUS_INR = "beta.plus.inr"
    BETA_BANG = "beta.bang"
    BETA_FORALL = "beta.forall"
    SUM_STAR = "sum.star"
    SUM_LAM = "sum.lam"
    SUM_TENSORE = "sum.tensorE"
    SUM_UNIT = "sum.unit"
    SUM_PAIR = "sum.pair"
    SUM_PLUSE = "sum.plusE"
    SUM_BANG = "sum.bang"
    SUM_TLAM = "sum.tlam"
    PROD_STAR = "prod.star"
    PROD_LAM = "prod.lam"
    PROD_TENSORE = "prod.tensorE"
    PROD_UNIT = "prod.unit"
    PROD_PAIR = "prod.pair"
    PROD_PLUSE = "prod.plusE"
    PROD_BANG = "prod.bang"
    PROD_TLAM = "prod.tlam"
    ULTRA_LEFT = "ultra.left"
    ULTRA_RIGHT = "ultra.right"
    ULTRA_DROP = "ultra.drop"

    def __str__(self):
        return self.value


STANDARD_RULES = tuple(r for r in RuleId
                       if not r.value.startswith("ultra."))
ULTRA_RULES = (RuleId.ULTRA_LEFT, RuleId.ULTRA_RIGHT, RuleId.ULTRA_DROP)


def _apply_rule(rule: RuleId, t: s.Term) -> s.Term | None:
    """Contract a redex at the root, or None when the rule does not match."""
    R = RuleId
    if rule is R.BETA_ONE:
        if isinstance(t, s.ElimOne) and isinstance(t.arg, s.Star):
            return s.Prod(t.arg.scalar, t.body)
    elif rule is R.BETA_LOLLI:
        if isinstance(t, s.App) and isinstance(t.fn, s.Lam):
            return s.open_term(t.fn.body, t.arg)
    elif rule is R.BETA_TENSOR:
        if isinstance(t, s.ElimTensor) and isinstance(t.arg, s.TensorI):
            return s.open_term(t.body, t.arg.left, t.arg.right)
    elif rule is R.BETA_WITH1:
        if isinstance(t, s.ElimWith1) and isinstance(t.arg, s.Pair):
            return s.open_term(t.body, t.arg.left)
    elif rule is R.BETA_WITH2:
        if isinstance(t, s.ElimWith2) and isinstance(t.arg, s.Pair):
            return s.open_term(t.body, t.arg.right)
    elif rule is R.BETA_PLUS_INL:
        if isinstance(t, s.ElimPlus) and isinstance(t.arg, s.Inl):
            return s.open_term(t.left, t.arg.body)
    elif rule is R.BETA_PLUS_INR:
        if isinstance(t, s.ElimPlus) and isinstance(t.arg, s.Inr):
            return s.open_term(t.right, t.arg.body)
    elif rule is R.BETA_BANG:
        if isinstance(t, s.ElimBang) and isinstance(t.arg, s.BangI):
            return s.open_term(t.body, t.arg.body)
    elif rule is R.BETA_FORALL:
        if isinstance(t, s.TApp) and isinstance(t.fn, s.TLam):
            return s.open_term_prop(t.fn.body, t.ann)
    elif rule is R.SUM_STAR:
        if isinstance(t, s.Sum) and isinstance(t.left, s.Star) \
                and isinstance(t.right, s.Star):
            return s.Star(scalar_add(t.left.scalar, t.right.scalar))
    elif rule is R.SUM_LAM:
        if isinstance(t, s.Sum) and isinstance(t.left, s.Lam) \
                and isinstance(t.right, s.Lam) and t.left.ann == t.right.ann:
            l, r = t.left, t.right
            return s.Lam(l.hint, l.ann, s.Sum(l.body, r.body))
    elif rule is R.SUM_TENSORE:
        if isinstance(t, s.ElimTensor) and isinstance(t.arg, s.Sum):
            mk = lambda arg: dataclasses.replace(t, arg=arg)
            return s.Sum(mk(t.arg.left), mk(t.arg.right))
    elif rule is R.SUM_UNIT:
        if isinstance(t, s.Sum) and isinstance(t.left, s.Unit) \
                and isinstance(t.right, s.Unit):
            return s.Unit()
    elif rule is R.SUM_PAIR:
        if isinstance(t, s.Sum) and isinstance(t.left, s.Pair) \
                and isinstance(t.right, s.Pair):
            l, r = t.left, t.right
            return s.Pair(s.Sum(l.left, r.left), s.Sum(l.right, r.right))
    elif rule is R.SUM_PLUSE:
        if isinstance(t, s.ElimPlus) and isinstance(t.arg, s.Sum):
            mk = lambda arg: dataclasses.replace(t, arg=arg)
            return s.Sum(mk(t.arg.left), mk(t.arg.right))
    elif rule is R.SUM_BANG:
        if isinstance(t, s.Sum) and isinstance(t.left, s.BangI) \
                and isinstance(t.right, s.BangI):
            return s.BangI(s.Sum(t.left.body, t.right.body))
    elif rule is R.SUM_TLAM:
        if isinstance(t, s.Sum) and isinstance(t.left, s.TLam) \
                and isinstance(t.right, s.TLam):
            return s.TLam(t.left.hint, s.Sum(t.left.body, t.right.body))
    elif rule is R.PROD_STAR:
        if isinstance(t, s.Prod) and isinstance(t.body, s.Star):
            return s.Star(scalar_mul(t.scalar, t.body.scalar))
    elif rule is R.PROD_LAM:
        if isinstance(t, s.Prod) and isinstance(t.body, s.Lam):
            b = t.body
            return s.Lam(b.hint, b.ann, s.Prod(t.scalar, b.body))
    elif rule is R.PROD_TENSORE:
        if isinstance(t, s.ElimTensor) and isinstance(t.arg, s.Prod):
            inner = dataclasses.replace(t, arg=t.arg.body)
            return s.Prod(t.arg.scalar, inner)
    elif rule is R.PROD_UNIT:
        if isinstance(t, s.Prod) and isinstance(t.body, s.Unit):
            return s.Unit()
    elif rule is R.PROD_PAIR:
        if isinstance(t, s.Prod) and isinstance(t.body, s.Pair):
            b = t.body
            return s.Pair(s.Prod(t.scalar, b.left), s.Prod(t.scalar, b.right))
    elif rule is R.PROD_PLUSE:
        if isinstance(t, s.ElimPlus) and isinstance(t.arg, s.Prod):
            inner = dataclasses.replace(t, arg=t.arg.body)
            return s.Prod(t.arg.scalar, inner)
    elif rule is R.PROD_BANG:
        if isinstance(t, s.Prod) and isinstance(t.body, s.BangI):
            return s.BangI(s.Prod(t.scalar, t.body.body))
    elif rule is R.PROD_TLAM:
        if isinstance(t, s.Prod) and isinstance(t.body, s.TLam):
            b = t.body
            return s.TLam(b.hint, s.Prod(t.scalar, b.body))
    elif rule is R.ULTRA_LEFT:
        if isinstance(t, s.Sum):
            return t.left
    elif rule is R.ULTRA_RIGHT:
        if isinstance(t, s.Sum):
            return t.right
    elif rule is R.ULTRA_DROP:
        if isinstance(t, s.Prod):
            return t.body
    return None


# rules that can possibly fire at a node, keyed by its root constructor and
# kept in RuleId order
_CANDIDATES: dict[type, tuple[RuleId, ...]] = {
    s.ElimOne: (RuleId.BETA_ONE,),
    s.App: (RuleId.BETA_LOLLI,),
    s.ElimTensor: (RuleId.BETA_TENSOR, RuleId.SUM_TENSORE,
                   RuleId.PROD_TENSORE),
    s.ElimWith1: (RuleId.BETA_WITH1,),
    s.ElimWith2: (RuleId.BETA_WITH2,),
    s.ElimPlus: (RuleId.BETA_PLUS_INL, RuleId.BETA_PLUS_INR,
                 RuleId.SUM_PLUSE, RuleId.PROD_PLUSE),
    s.ElimBang: (RuleId.BETA_BANG,),
    s.TApp: (RuleId.BETA_FORALL,),
    s.Sum: (RuleId.SUM_STAR, RuleId.SUM_LAM, RuleId.SUM_UNIT,
            RuleId.SUM_PAIR, RuleId.SUM_BANG, RuleId.SUM_TLAM),
    s.Prod: (RuleId.PROD_STAR, RuleId.PROD_LAM, RuleId.PROD_UNIT,
             RuleId.PROD_PAIR, RuleId.PROD_BANG, RuleId.PROD_TLAM),
}

_ULTRA_EXTRA: dict[type, tuple[RuleId, ...]] = {
    s.Sum: (RuleId.ULTRA_LEFT, RuleId.ULTRA_RIGHT),
    s.Prod: (RuleId.ULTRA_DROP,),
}


def _candidates(node: s.Term, mode: str) -> tuple[RuleId, ...]:
    base = _CANDIDATES.get(type(node), ())
    if mode == "standard":
        return base
    if mode == "ultra":
        return base + _ULTRA_EXTRA.get(type(node), ())
    raise ValueError(f"unknown mode {mode!r}")


def reducts(t: s.Term, mode: str = "standard"
            ) -> list[tuple[RuleId, tuple[int, ...], s.Term]]:
    """All one-step reducts, leftmost-outermost position order then rule
    order."""
    out = []
    for path, sub in s.subterms(t):
        for rule in _candidates(sub, mode):
            new = _apply_rule(rule, sub)
            if new is not None:
                out.append((rule, path, s.replace_at(t, path, new)))
    return out


def step(t: s.Term, mode: str = "standard"
         ) -> tuple[RuleId, tuple[int, ...], s.Term] | None:
    """First reduct in strategy order, or None when irreducible."""
    for path, sub in s.subterms(t):
        for rule in _candidates(sub, mode):
            new = _apply_rule(rule, sub)
            if new is not None:
                return rule, path, s.replace_at(t, path, new)
    return None


def is_normal(t: s.Term, mode: str = "standard") -> bool:
    return step(t, mode) is None


@dataclass(frozen=True)
class TraceEntry:
    index: int
    rule: RuleId
    path: tuple[int, ...]
    digest: str  # of the term after the step


def _digest(t: s.Term) -> str:
    # structural hash; stable within a session, which is all replay needs
    return format(hash(t) & 0xFFFF_FFFF_FFFF, "012x")


def _fmt_path(path: tuple[int, ...]) -> str:
    return ".".join(str(i) for i in path) if path else "e"


def _parse_path(text: str) -> tuple[int, ...]:
    return () if text == "e" else tuple(int(p) for p in text.split("."))


@dataclass
class Trace:
    start: s.Term
    entries: list[TraceEntry] = field(default_factory=list)

    def record(self, rule: RuleId, path: tuple[int, ...], after: s.Term):
        self.entries.append(
            TraceEntry(len(self.entries), rule, path, _digest(after)))

    def serialize(self) -> str:
        return "\n".join(f"{e.index} {e.rule} {_fmt_path(e.path)}"
                         for e in self.entries)

    def replay(self) -> s.Term:
        """Re-apply the recorded rules at the recorded positions."""
        t = self.start
        for e in self.entries:
            sub = s.subterm_at(t, e.path)
            new = _apply_rule(e.rule, sub)
            if new is None:
                raise ReplayError(
                    f"step {e.index}: {e.rule} does not apply at "
                    f"{_fmt_path(e.path)}")
            t = s.replace_at(t, e.path, new)
            if _digest(t) != e.digest:
                raise ReplayError(f"step {e.index}: term digest mismatch")
        return t

    @staticmethod
    def parse_steps(text: str) -> list[tuple[int, RuleId, tuple[int, ...]]]:
        out = []
        for line in text.splitlines():
            if not line.strip():
                continue
            idx, rule, path = line.split()
            out.append((int(idx), RuleId(rule), _parse_path(path)))
        return out


def normalize(t: s.Term, max_steps: int = 100_000) -> tuple[s.Term, Trace]:
    """Leftmost-outermost normal form; raises StepLimitExceeded rather than
    returning a partial result."""
    trace = Trace(t)
    for _ in range(max_steps):
        nxt = step(t)
        if nxt is None:
            return t, trace
        rule, path, t = nxt
        trace.record(rule, path, t)
    raise StepLimitExceeded(
        f"no normal form within {max_steps} steps", term=t, trace=trace)


def normalize_random(t: s.Term, seed: int, max_steps: int = 100_000,
                     mode: str = "standard") -> tuple[s.Term, Trace]:
    """Normalise picking uniformly among all one-step reducts."""
    rng = random.Random(seed)
    trace = Trace(t)
    for _ in range(max_steps):
        options = reducts(t, mode)
        if not options:
            return t, trace
        rule, path, t = options[rng.randrange(len(options))]
        trace.record(rule, path, t)
    raise StepLimitExceeded(
        f"no normal form within {max_steps} steps (seed {seed})",
        term=t, trace=trace)


def nf(t: s.Term, max_steps: int = 100_000) -> s.Term:
    return normalize(t, max_steps)[0]


def equiv(t: s.Term, u: s.Term, max_steps: int = 100_000) -> bool:
    """Convertibility, decided by comparing normal forms; callers are
    responsible for handing in well-typed terms."""
    return nf(t, max_steps) == nf(u, max_steps)

"""Mechanical overlap analysis of the standard rule set.

Left-hand sides are first-order patterns over the term signature with
metavariables for subterms, scalars and type annotations.  Two patterns
overlap when one unifies with a non-variable subpattern of the other; an
overlap only counts as a critical pair if the overlapped term is
well-formable, which we approximate by the outermost type constructor each
position must have (e.g. the scrutinee of a tensor elimination must live at
a tensor type, so a sum of stars - which lives at the unit type - can never
sit there).

The two rules that duplicate a lambda annotation (sum over lambdas and sum
over type lambdas, where typing forces both annotations equal) are encoded
with distinct metavariables plus a side constraint, so every pattern is
literally left-linear.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from itertools import count

from .rewrite import STANDARD_RULES, RuleId

# slot sorts per pattern constructor: "t" term, "s" scalar, "p" proposition.
# For term slots the entry also gives the type-constructor tag the slot is
# forced to have ("pass" = same as the parent's own tag).
_SLOTS: dict[str, tuple[tuple[str, str | None], ...]] = {
    "Star": (("s", None),),
    "Sum": (("t", "pass"), ("t", "pass")),
    "Prod": (("s", None), ("t", "pass")),
    "ElimOne": (("t", "one"), ("t", "pass")),
    "Lam": (("p", None), ("t", "any")),
    "App": (("t", "lolli"), ("t", "any")),
    "TensorI": (("t", "any"), ("t", "any")),
    "ElimTensor": (("t", "tensor"), ("p", None), ("p", None), ("t", "pass")),
    "Unit": (),
    "Pair": (("t", "any"), ("t", "any")),
    "ElimWith1": (("t", "with"), ("p", None), ("t", "pass")),
    "ElimWith2": (("t", "with"), ("p", None), ("t", "pass")),
    "Inl": (("t", "any"), ("p", None)),
    "Inr": (("t", "any"), ("p", None)),
    "ElimPlus": (("t", "plus"), ("p", None), ("t", "pass"),
                 ("p", None), ("t", "pass")),
    "BangI": (("t", "any"),),
    "ElimBang": (("t", "bang"), ("p", None), ("t", "pass")),
    "TLam": (("t", "any"),),
    "TApp": (("t", "forall"), ("p", None)),
}

_INTRO_SHAPE = {
    "Star": "one", "Lam": "lolli", "TensorI": "tensor", "Unit": "top",
    "Pair": "with", "Inl": "plus", "Inr": "plus", "BangI": "bang",
    "TLam": "forall",
}


@dataclass(frozen=True)
class MV:
    sort: str
    name: str

    def __str__(self):
        return f"?{self.name}"


@dataclass(frozen=True)
class PN:
    ctor: str
    kids: tuple

    def __str__(self):
        if not self.kids:
            return self.ctor
        return f"{self.ctor}({', '.join(str(k) for k in self.kids)})"


def _t(n):
    return MV("t", n)


def _s(n):
    return MV("s", n)


def _p(n):
    return MV("p", n)


def _lhs_table() -> dict[RuleId, PN]:
    R = RuleId
    return {
        R.BETA_ONE: PN("ElimOne", (PN("Star", (_s("a"),)), _t("u"))),
        R.BETA_LOLLI: PN("App", (PN("Lam", (_p("A"), _t("t"))), _t("u"))),
        R.BETA_TENSOR: PN("ElimTensor", (PN("TensorI", (_t("t"), _t("u"))),
                                         _p("A"), _p("B"), _t("w"))),
        R.BETA_WITH1: PN("ElimWith1", (PN("Pair", (_t("t"), _t("u"))),
                                       _p("A"), _t("v"))),
        R.BETA_WITH2: PN("ElimWith2", (PN("Pair", (_t("t"), _t("u"))),
                                       _p("A"), _t("v"))),
        R.BETA_PLUS_INL: PN("ElimPlus", (PN("Inl", (_t("t"), _p("C"))),
                                         _p("A"), _t("v"), _p("B"), _t("w"))),
        R.BETA_PLUS_INR: PN("ElimPlus", (PN("Inr", (_t("t"), _p("C"))),
                                         _p("A"), _t("v"), _p("B"), _t("w"))),
        R.BETA_BANG: PN("ElimBang", (PN("BangI", (_t("t"),)),
                                     _p("A"), _t("u"))),
        R.BETA_FORALL: PN("TApp", (PN("TLam", (_t("t"),)), _p("A"))),
        R.SUM_STAR: PN("Sum", (PN("Star", (_s("a"),)),
                               PN("Star", (_s("b"),)))),
        R.SUM_LAM: PN("Sum", (PN("Lam", (_p("A1"), _t("t"))),
                              PN("Lam", (_p("A2"), _t("u"))))),
        R.SUM_TENSORE: PN("ElimTensor", (PN("Sum", (_t("t"), _t("u"))),
                                         _p("A"), _p("B"), _t("v"))),
        R.SUM_UNIT: PN("Sum", (PN("Unit", ()), PN("Unit", ()))),
        R.SUM_PAIR: PN("Sum", (PN("Pair", (_t("t"), _t("u"))),
                               PN("Pair", (_t("v"), _t("w"))))),
        R.SUM_PLUSE: PN("ElimPlus", (PN("Sum", (_t("t"), _t("u"))),
                                     _p("A"), _t("v"), _p("B"), _t("w"))),
        R.SUM_BANG: PN("Sum", (PN("BangI", (_t("t"),)),
                               PN("BangI", (_t("u"),)))),
        R.SUM_TLAM: PN("Sum", (PN("TLam", (_t("t"),)),
                               PN("TLam", (_t("u"),)))),
        R.PROD_STAR: PN("Prod", (_s("a"), PN("Star", (_s("b"),)))),
        R.PROD_LAM: PN("Prod", (_s("a"), PN("Lam", (_p("A"), _t("t"))))),
        R.PROD_TENSORE: PN("ElimTensor", (PN("Prod", (_s("a"), _t("t"))),
                                          _p("A"), _p("B"), _t("v"))),
        R.PROD_UNIT: PN("Prod", (_s("a"), PN("Unit", ()))),
        R.PROD_PAIR: PN("Prod", (_s("a"), PN("Pair", (_t("t"), _t("u"))))),
        R.PROD_PLUSE: PN("ElimPlus", (PN("Prod", (_s("a"), _t("t"))),
                                      _p("A"), _t("v"), _p("B"), _t("w"))),
        R.PROD_BANG: PN("Prod", (_s("a"), PN("BangI", (_t("t"),)))),
        R.PROD_TLAM: PN("Prod", (_s("a"), PN("TLam", (_t("t"),)))),
    }


LHS = _lhs_table()

# annotation pairs forced equal by typing rather than by the pattern
EQUAL_BY_TYPING: dict[RuleId, tuple[tuple[str, str], ...]] = {
    RuleId.SUM_LAM: (("A1", "A2"),),
}


def _metavars(p) -> list[MV]:
    if isinstance(p, MV):
        return [p]
    out = []
    for k in p.kids:
        out.extend(_metavars(k))
    return out


def is_left_linear(rule: RuleId) -> bool:
    names = [m.name for m in _metavars(LHS[rule])]
    return len(names) == len(set(names))


def _rename(p, tag):
    if isinstance(p, MV):
        return MV(p.sort, f"{tag}.{p.name}")
    return PN(p.ctor, tuple(_rename(k, tag) for k in p.kids))


def _walk(sub, p):
    while isinstance(p, MV) and p in sub:
        p = sub[p]
    return p


def _unify(a, b, sub) -> dict | None:
    a, b = _walk(sub, a), _walk(sub, b)
    if a is b or a == b:
        return sub
    if isinstance(a, MV):
        if isinstance(b, MV) and b.sort != a.sort:
            return None
        if isinstance(b, PN) and a.sort != "t":
            return None
        sub = dict(sub)
        sub[a] = b
        return sub
    if isinstance(b, MV):
        return _unify(b, a, sub)
    if a.ctor != b.ctor or len(a.kids) != len(b.kids):
        return None
    for x, y in zip(a.kids, b.kids):
        sub = _unify(x, y, sub)
        if sub is None:
            return None
    return sub


def produced_shape(p) -> str:
    """Outermost type constructor a well-typed instance of the pattern
    inhabits, or "any" when the pattern does not pin it."""
    if isinstance(p, MV):
        return "any"
    if p.ctor in _INTRO_SHAPE:
        return _INTRO_SHAPE[p.ctor]
    if p.ctor == "Sum":
        left = produced_shape(p.kids[0])
        return left if left != "any" else produced_shape(p.kids[1])
    if p.ctor == "Prod":
        return produced_shape(p.kids[1])
    return "any"


def _term_positions(p, shape="any", path=()):
    """Non-variable positions at term slots, with the type-constructor tag
    well-formedness forces there."""
    yield path, p, shape
    if isinstance(p, MV):
        return
    for i, ((sort, req), kid) in enumerate(zip(_SLOTS[p.ctor], p.kids)):
        if sort != "t" or isinstance(kid, MV):
            continue
        kid_shape = shape if req == "pass" else req
        yield from _term_positions(kid, kid_shape, path + (i,))


def _compatible(a: str, b: str) -> bool:
    return a == "any" or b == "any" or a == b


@dataclass
class Overlap:
    outer: RuleId
    inner: RuleId
    position: tuple[int, ...]
    unified: PN


@dataclass
class ScanReport:
    rules: tuple[RuleId, ...]
    left_linear: dict[RuleId, bool]
    overlaps: list[Overlap] = field(default_factory=list)

    @property
    def critical_pairs(self) -> int:
        return len(self.overlaps)

    @property
    def all_left_linear(self) -> bool:
        return all(self.left_linear.values())

    def summary(self) -> str:
        lines = [f"rules scanned: {len(self.rules)}",
                 f"left-linear: {sum(self.left_linear.values())}"
                 f"/{len(self.rules)}",
                 f"critical pairs: {self.critical_pairs}"]
        for ov in self.overlaps:
            lines.append(f"  overlap: {ov.inner} inside {ov.outer} at "
                         f"{'.'.join(map(str, ov.position)) or 'root'}")
        return "\n".join(lines)


def critical_pair_scan(rules: tuple[RuleId, ...] = STANDARD_RULES) -> ScanReport:
    report = ScanReport(tuple(rules),
                        {r: is_left_linear(r) for r in rules})
    for outer in rules:
        lhs_outer = _rename(LHS[outer], "L")
        for pos, sub_pat, shape in _term_positions(lhs_outer):
            for inner in rules:
                if pos == () and inner is outer:
                    continue  # a rule trivially overlaps itself at the root
                lhs_inner = _rename(LHS[inner], "R")
                sigma = _unify(sub_pat, lhs_inner, {})
                if sigma is None:
                    continue
                if not _compatible(shape, produced_shape(lhs_inner)):
                    continue  # no well-formed term realises the overlap
                report.overlaps.append(
                    Overlap(outer, inner, pos, sub_pat))
    # root overlaps between distinct rules would otherwise be seen twice
    seen = set()
    deduped = []
    for ov in report.overlaps:
        key = (ov.position, frozenset((ov.outer, ov.inner)))
        if ov.position == () and key in seen:
            continue
        seen.add(key)
        deduped.append(ov)
    report.overlaps = deduped
    return report

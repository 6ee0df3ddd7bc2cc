"""Proposition and proof-term ASTs.

Bound variables are de Bruijn indices (terms and type variables are indexed
independently); free variables are names.  Binder name hints are kept only
for printing and are excluded from equality, so ``==`` on propositions and
terms *is* alpha-equivalence.

Positions used by the rewriter address the term children listed in
``TERM_CHILDREN``, in that order.
"""

from __future__ import annotations

from dataclasses import dataclass, field, fields, replace
from typing import Callable, Iterator, Sequence

from .errors import BangOutsideFragment
from .semiring import Scalar

# ---------------------------------------------------------------------------
# propositions
# ---------------------------------------------------------------------------


class Prop:
    __slots__ = ()


@dataclass(frozen=True)
class PVar(Prop):
    """Free type variable."""
    name: str


@dataclass(frozen=True)
class PBound(Prop):
    """Bound type variable (de Bruijn index)."""
    index: int


@dataclass(frozen=True)
class One(Prop):
    pass


@dataclass(frozen=True)
class Top(Prop):
    pass


@dataclass(frozen=True)
class Zero(Prop):
    pass


@dataclass(frozen=True)
class Lolli(Prop):
    left: Prop
    right: Prop


@dataclass(frozen=True)
class Tensor(Prop):
    left: Prop
    right: Prop


@dataclass(frozen=True)
class With(Prop):
    left: Prop
    right: Prop


@dataclass(frozen=True)
class Plus(Prop):
    left: Prop
    right: Prop


@dataclass(frozen=True)
class Bang(Prop):
    body: Prop


@dataclass(frozen=True)
class Forall(Prop):
    hint: str = field(compare=False)
    body: Prop


_PROP_BINARY = (Lolli, Tensor, With, Plus)


def prop_children(p: Prop) -> tuple[Prop, ...]:
    if isinstance(p, _PROP_BINARY):
        return (p.left, p.right)
    if isinstance(p, Bang):
        return (p.body,)
    if isinstance(p, Forall):
        return (p.body,)
    return ()


def _prop_map(p: Prop, on_leaf: Callable[[Prop, int], Prop], depth: int = 0) -> Prop:
    """Rebuild ``p``; ``on_leaf`` sees every PVar/PBound with the number of
    Forall binders crossed to reach it."""
    if isinstance(p, (PVar, PBound)):
        return on_leaf(p, depth)
    if isinstance(p, _PROP_BINARY):
        return type(p)(_prop_map(p.left, on_leaf, depth),
                       _prop_map(p.right, on_leaf, depth))
    if isinstance(p, Bang):
        return Bang(_prop_map(p.body, on_leaf, depth))
    if isinstance(p, Forall):
        return Forall(p.hint, _prop_map(p.body, on_leaf, depth + 1))
    return p


def prop_shift(p: Prop, by: int, cutoff: int = 0) -> Prop:
    if by == 0:
        return p

    def leaf(q, d):
        if isinstance(q, PBound) and q.index >= cutoff + d:
            return PBound(q.index + by)
        return q

    return _prop_map(p, leaf)


def prop_instantiate(p: Prop, j: int, repl: Prop) -> Prop:
    """Replace PBound(j) (relative to the root of ``p``) with ``repl``,
    lowering deeper indices; ``repl``'s dangling indices are shifted past the
    binders crossed on the way in."""

    def leaf(q, d):
        if isinstance(q, PBound):
            if q.index == j + d:
                return prop_shift(repl, j + d)
            if q.index > j + d:
                return PBound(q.index - 1)
        return q

    return _prop_map(p, leaf)


def prop_open(body: Prop, repl: Prop) -> Prop:
    """Instantiate the variable bound by the Forall this body came from."""
    return prop_instantiate(body, 0, repl)


def prop_close(p: Prop, name: str, hint: str | None = None) -> Forall:
    """Abstract the free variable ``name`` into a fresh Forall binder."""

    def leaf(q, d):
        if isinstance(q, PVar) and q.name == name:
            return PBound(d)
        if isinstance(q, PBound) and q.index >= d:
            return PBound(q.index + 1)
        return q

    return Forall(hint if hint is not None else name, _prop_map(p, leaf))


def prop_subst(p: Prop, name: str, repl: Prop, depth0: int = 0) -> Prop:
    """Capture-avoiding (repl/name)p."""

    def leaf(q, d):
        if isinstance(q, PVar) and q.name == name:
            return prop_shift(repl, depth0 + d)
        return q

    return _prop_map(p, leaf)


def ftv_prop(p: Prop) -> frozenset[str]:
    if isinstance(p, PVar):
        return frozenset((p.name,))
    out: frozenset[str] = frozenset()
    for c in prop_children(p):
        out |= ftv_prop(c)
    return out


def prop_size(p: Prop) -> int:
    return 1 + sum(prop_size(c) for c in prop_children(p))


def alpha_eq_prop(a: Prop, b: Prop) -> bool:
    return a == b


# ---------------------------------------------------------------------------
# proof-terms
# ---------------------------------------------------------------------------


class Term:
    __slots__ = ()


@dataclass(frozen=True)
class Var(Term):
    """Free term variable."""
    name: str


@dataclass(frozen=True)
class BVar(Term):
    """Bound term variable (de Bruijn index)."""
    index: int


@dataclass(frozen=True)
class Sum(Term):
    left: Term
    right: Term


@dataclass(frozen=True)
class Prod(Term):
    scalar: Scalar
    body: Term


@dataclass(frozen=True)
class Star(Term):
    scalar: Scalar


@dataclass(frozen=True)
class ElimOne(Term):
    arg: Term
    body: Term


@dataclass(frozen=True)
class Lam(Term):
    hint: str = field(compare=False)
    ann: Prop
    body: Term


@dataclass(frozen=True)
class App(Term):
    fn: Term
    arg: Term


@dataclass(frozen=True)
class TensorI(Term):
    left: Term
    right: Term


@dataclass(frozen=True)
class ElimTensor(Term):
    """delta_tensor; body binds two variables, the first annotation outermost
    (BVar 1), the second innermost (BVar 0)."""
    arg: Term
    hint_x: str = field(compare=False)
    ann_x: Prop
    hint_y: str = field(compare=False)
    ann_y: Prop
    body: Term


@dataclass(frozen=True)
class Unit(Term):
    pass


@dataclass(frozen=True)
class ElimZero(Term):
    """delta_zero; carries the result type the rule introduces freely."""
    ann: Prop
    arg: Term


@dataclass(frozen=True)
class Pair(Term):
    left: Term
    right: Term


@dataclass(frozen=True)
class ElimWith1(Term):
    arg: Term
    hint: str = field(compare=False)
    ann: Prop
    body: Term


@dataclass(frozen=True)
class ElimWith2(Term):
    arg: Term
    hint: str = field(compare=False)
    ann: Prop
    body: Term


@dataclass(frozen=True)
class Inl(Term):
    """inl; ``ann`` is the right component the injection chooses freely."""
    body: Term
    ann: Prop


@dataclass(frozen=True)
class Inr(Term):
    """inr; ``ann`` is the left component."""
    body: Term
    ann: Prop


@dataclass(frozen=True)
class ElimPlus(Term):
    arg: Term
    hint_x: str = field(compare=False)
    ann_x: Prop
    left: Term
    hint_y: str = field(compare=False)
    ann_y: Prop
    right: Term


@dataclass(frozen=True)
class BangI(Term):
    body: Term


@dataclass(frozen=True)
class ElimBang(Term):
    arg: Term
    hint: str = field(compare=False)
    ann: Prop
    body: Term


@dataclass(frozen=True)
class TLam(Term):
    hint: str = field(compare=False)
    body: Term


@dataclass(frozen=True)
class TApp(Term):
    fn: Term
    ann: Prop


# (field, term binders entered, type binders entered) per term child,
# plus the node's proposition fields.  Child order defines rewrite positions.
TERM_CHILDREN: dict[type, tuple[tuple[tuple[str, int, int], ...], tuple[str, ...]]] = {
    Var: ((), ()),
    BVar: ((), ()),
    Sum: ((("left", 0, 0), ("right", 0, 0)), ()),
    Prod: ((("body", 0, 0),), ()),
    Star: ((), ()),
    ElimOne: ((("arg", 0, 0), ("body", 0, 0)), ()),
    Lam: ((("body", 1, 0),), ("ann",)),
    App: ((("fn", 0, 0), ("arg", 0, 0)), ()),
    TensorI: ((("left", 0, 0), ("right", 0, 0)), ()),
    ElimTensor: ((("arg", 0, 0), ("body", 2, 0)), ("ann_x", "ann_y")),
    Unit: ((), ()),
    ElimZero: ((("arg", 0, 0),), ("ann",)),
    Pair: ((("left", 0, 0), ("right", 0, 0)), ()),
    ElimWith1: ((("arg", 0, 0), ("body", 1, 0)), ("ann",)),
    ElimWith2: ((("arg", 0, 0), ("body", 1, 0)), ("ann",)),
    Inl: ((("body", 0, 0),), ("ann",)),
    Inr: ((("body", 0, 0),), ("ann",)),
    ElimPlus: ((("arg", 0, 0), ("left", 1, 0), ("right", 1, 0)),
               ("ann_x", "ann_y")),
    BangI: ((("body", 0, 0),), ()),
    ElimBang: ((("arg", 0, 0), ("body", 1, 0)), ("ann",)),
    TLam: ((("body", 0, 1),), ()),
    TApp: ((("fn", 0, 0),), ("ann",)),
}

INTRO_CLASSES = (Star, Lam, TensorI, Unit, Pair, Inl, Inr, BangI, TLam)


def is_intro(t: Term) -> bool:
    return isinstance(t, INTRO_CLASSES)


def term_children(t: Term) -> list[tuple[str, Term, int, int]]:
    out = []
    for name, tb, pb in TERM_CHILDREN[type(t)][0]:
        out.append((name, getattr(t, name), tb, pb))
    return out


def child_at(t: Term, i: int) -> Term:
    name = TERM_CHILDREN[type(t)][0][i][0]
    return getattr(t, name)


def replace_child(t: Term, i: int, new: Term) -> Term:
    name = TERM_CHILDREN[type(t)][0][i][0]
    return replace(t, **{name: new})


def _term_map(t: Term,
              on_term: Callable[[Term, int, int], Term],
              on_prop: Callable[[Prop, int], Prop],
              td: int = 0, pd: int = 0) -> Term:
    """Structure-preserving rebuild.

    ``on_term`` sees Var/BVar leaves with the term/type binder depths crossed;
    ``on_prop`` sees every embedded proposition with the type depth.
    """
    if isinstance(t, (Var, BVar)):
        return on_term(t, td, pd)
    kids, props = TERM_CHILDREN[type(t)]
    changes = {}
    for name, tb, pb in kids:
        old = getattr(t, name)
        new = _term_map(old, on_term, on_prop, td + tb, pd + pb)
        if new is not old:
            changes[name] = new
    for name in props:
        old = getattr(t, name)
        new = on_prop(old, pd)
        if new is not old:
            changes[name] = new
    return replace(t, **changes) if changes else t


def term_shift(t: Term, tby: int, pby: int = 0,
               tcut: int = 0, pcut: int = 0) -> Term:
    if tby == 0 and pby == 0:
        return t

    def on_term(q, td, pd):
        if isinstance(q, BVar) and q.index >= tcut + td:
            return BVar(q.index + tby)
        return q

    def on_prop(p, pd):
        return prop_shift(p, pby, pcut + pd)

    return _term_map(t, on_term, on_prop)


def open_term(body: Term, *values: Term) -> Term:
    """Instantiate the binder group this body hangs under.

    ``values`` are given outermost binder first, so for a two-variable body
    ``open_term(body, u, v)`` sends BVar(1) to ``u`` and BVar(0) to ``v``.
    Dangling indices of the values are shifted past binders crossed on the
    way in, and indices beyond the group are lowered.
    """
    n = len(values)

    def on_term(q, td, pd):
        if isinstance(q, BVar):
            if td <= q.index < td + n:
                return term_shift(values[n - 1 - (q.index - td)], td, pd)
            if q.index >= td + n:
                return BVar(q.index - n)
        return q

    return _term_map(body, on_term, lambda p, pd: p)


def open_term_prop(body: Term, repl: Prop) -> Prop | Term:
    """Instantiate the type variable bound by the TLam this body came from."""

    def on_prop(p, pd):
        return prop_instantiate(p, pd, repl)

    return _term_map(body, lambda q, td, pd: q, on_prop)


def close_term(body: Term, *names: str) -> Term:
    """Inverse of ``open_term``: abstract free variables into a binder group,
    outermost name first."""
    n = len(names)
    index_of = {nm: j for j, nm in enumerate(names)}

    def on_term(q, td, pd):
        if isinstance(q, Var) and q.name in index_of:
            return BVar(td + (n - 1 - index_of[q.name]))
        if isinstance(q, BVar) and q.index >= td:
            return BVar(q.index + n)
        return q

    return _term_map(body, on_term, lambda p, pd: p)


def close_term_prop(body: Term, name: str) -> Term:
    """Abstract a free type variable into a new innermost type binder."""

    def leaf_at(depth0):
        def leaf(q, d):
            if isinstance(q, PVar) and q.name == name:
                return PBound(depth0 + d)
            if isinstance(q, PBound) and q.index >= depth0 + d:
                return PBound(q.index + 1)
            return q
        return leaf

    def on_prop(p, pd):
        return _prop_map(p, leaf_at(pd))

    return _term_map(body, lambda q, td, pd: q, on_prop)


def subst_term(t: Term, name: str, u: Term) -> Term:
    """Capture-avoiding (u/name)t."""

    def on_term(q, td, pd):
        if isinstance(q, Var) and q.name == name:
            return term_shift(u, td, pd)
        return q

    return _term_map(t, on_term, lambda p, pd: p)


def subst_prop_in_term(t: Term, name: str, repl: Prop) -> Term:
    """Capture-avoiding (repl/name)t over every embedded proposition."""

    def on_prop(p, pd):
        return prop_subst(p, name, repl, depth0=pd)

    return _term_map(t, lambda q, td, pd: q, on_prop)


def fv_term(t: Term) -> frozenset[str]:
    if isinstance(t, Var):
        return frozenset((t.name,))
    out: frozenset[str] = frozenset()
    for _, c, _, _ in term_children(t):
        out |= fv_term(c)
    return out


def ftv_term(t: Term) -> frozenset[str]:
    out: frozenset[str] = frozenset()
    kids, props = TERM_CHILDREN[type(t)]
    for name, _, _ in kids:
        out |= ftv_term(getattr(t, name))
    for name in props:
        out |= ftv_prop(getattr(t, name))
    return out


def term_size(t: Term) -> int:
    return 1 + sum(term_size(c) for _, c, _, _ in term_children(t))


def alpha_eq_term(t: Term, u: Term) -> bool:
    return t == u


def subterms(t: Term, path: tuple[int, ...] = ()) -> Iterator[tuple[tuple[int, ...], Term]]:
    """Pre-order traversal: the node itself, then children left to right."""
    yield path, t
    for i, (_, c, _, _) in enumerate(term_children(t)):
        yield from subterms(c, path + (i,))


def subterm_at(t: Term, path: Sequence[int]) -> Term:
    for i in path:
        t = child_at(t, i)
    return t


def replace_at(t: Term, path: Sequence[int], new: Term) -> Term:
    if not path:
        return new
    return replace_child(t, path[0], replace_at(child_at(t, path[0]), path[1:], new))


def fresh_name(hint: str, avoid) -> str:
    if hint not in avoid:
        return hint
    k = 1
    while f"{hint}{k}" in avoid:
        k += 1
    return f"{hint}{k}"


def mentions_bang(t: Term) -> bool:
    """True if the term contains !-introductions or !-eliminations."""
    if isinstance(t, (BangI, ElimBang)):
        return True
    return any(mentions_bang(c) for _, c, _, _ in term_children(t))


def measure_mu(t: Term) -> int:
    """Weight used as the induction measure on the !-free fragment.

    Sums and pairs (and the two minor branches of a case) weigh the max of
    their parts; everything else is additive.
    """
    if isinstance(t, (Var, BVar)):
        return 0
    if isinstance(t, (Sum, Pair)):
        return 1 + max(measure_mu(t.left), measure_mu(t.right))
    if isinstance(t, Prod):
        return 1 + measure_mu(t.body)
    if isinstance(t, (Star, Unit)):
        return 1
    if isinstance(t, ElimOne):
        return 1 + measure_mu(t.arg) + measure_mu(t.body)
    if isinstance(t, Lam):
        return 1 + measure_mu(t.body)
    if isinstance(t, App):
        return 1 + measure_mu(t.fn) + measure_mu(t.arg)
    if isinstance(t, TensorI):
        return 1 + measure_mu(t.left) + measure_mu(t.right)
    if isinstance(t, ElimTensor):
        return 1 + measure_mu(t.arg) + measure_mu(t.body)
    if isinstance(t, ElimZero):
        return 1 + measure_mu(t.arg)
    if isinstance(t, (ElimWith1, ElimWith2)):
        return 1 + measure_mu(t.arg) + measure_mu(t.body)
    if isinstance(t, (Inl, Inr)):
        return 1 + measure_mu(t.body)
    if isinstance(t, ElimPlus):
        return 1 + measure_mu(t.arg) + max(measure_mu(t.left), measure_mu(t.right))
    if isinstance(t, TLam):
        return 1 + measure_mu(t.body)
    if isinstance(t, TApp):
        return 1 + measure_mu(t.fn)
    if isinstance(t, (BangI, ElimBang)):
        raise BangOutsideFragment(
            "the measure is defined only on the !-free fragment")
    raise TypeError(f"not a term: {t!r}")

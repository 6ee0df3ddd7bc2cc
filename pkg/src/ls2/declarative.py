"""Brute-force reading of the deduction rules.

This checker enumerates every split of the linear context at each
two-premise multiplicative rule, so it is exponential in the size of the
context and meant for contexts of at most half a dozen variables.  It
exists as an oracle for the leftover-threading algorithm in
:mod:`ls2.typecheck` and deliberately shares no code with it.
"""

from __future__ import annotations

from itertools import combinations

from . import syntax as s

Bindings = frozenset  # of (name, Prop) pairs


def _splits(gamma: Bindings):
    items = sorted(gamma, key=lambda kv: kv[0])
    for r in range(len(items) + 1):
        for left in combinations(items, r):
            l = frozenset(left)
            yield l, gamma - l


def _fresh(hint, xi, gamma, body_fv):
    taken = {k for k, _ in xi} | {k for k, _ in gamma} | set(body_fv)
    return s.fresh_name(hint or "x", taken)


class Oracle:
    def __init__(self):
        self._memo: dict = {}

    def types(self, xi: Bindings, gamma: Bindings, t: s.Term) -> frozenset:
        """All propositions A with a derivation of xi; gamma |- t : A, the
        linear context taken exactly."""
        key = (xi, gamma, t)
        hit = self._memo.get(key)
        if hit is not None:
            return hit
        out = frozenset(self._types(xi, gamma, t))
        self._memo[key] = out
        return out

    def _types(self, xi, gamma, t):
        if isinstance(t, s.Var):
            for name, prop in xi:
                if name == t.name and not gamma:
                    return {prop}
            if len(gamma) == 1:
                ((name, prop),) = gamma
                if name == t.name:
                    return {prop}
            return set()

        if isinstance(t, s.Star):
            return {s.One()} if not gamma else set()

        if isinstance(t, s.Unit):
            return {s.Top()}

        if isinstance(t, s.Sum):
            return self.types(xi, gamma, t.left) & self.types(xi, gamma, t.right)

        if isinstance(t, s.Prod):
            return self.types(xi, gamma, t.body)

        if isinstance(t, s.Pair):
            return {s.With(a, b)
                    for a in self.types(xi, gamma, t.left)
                    for b in self.types(xi, gamma, t.right)}

        if isinstance(t, s.ElimOne):
            out = set()
            for g1, g2 in _splits(gamma):
                if s.One() in self.types(xi, g1, t.arg):
                    out |= self.types(xi, g2, t.body)
            return out

        if isinstance(t, s.Lam):
            x = _fresh(t.hint, xi, gamma, s.fv_term(t.body))
            body = s.open_term(t.body, s.Var(x))
            return {s.Lolli(t.ann, b)
                    for b in self.types(xi, gamma | {(x, t.ann)}, body)}

        if isinstance(t, s.App):
            out = set()
            for g1, g2 in _splits(gamma):
                for a in self.types(xi, g1, t.fn):
                    if isinstance(a, s.Lolli) and a.left in self.types(xi, g2, t.arg):
                        out.add(a.right)
            return out

        if isinstance(t, s.TensorI):
            out = set()
            for g1, g2 in _splits(gamma):
                for a in self.types(xi, g1, t.left):
                    for b in self.types(xi, g2, t.right):
                        out.add(s.Tensor(a, b))
            return out

        if isinstance(t, s.ElimTensor):
            out = set()
            want = s.Tensor(t.ann_x, t.ann_y)
            fv = s.fv_term(t.body)
            for g1, g2 in _splits(gamma):
                if want in self.types(xi, g1, t.arg):
                    x = _fresh(t.hint_x, xi, gamma, fv)
                    y = _fresh(t.hint_y, xi, gamma, fv | {x})
                    body = s.open_term(t.body, s.Var(x), s.Var(y))
                    out |= self.types(
                        xi, g2 | {(x, t.ann_x), (y, t.ann_y)}, body)
            return out

        if isinstance(t, s.ElimZero):
            for g1, _rest in _splits(gamma):
                if s.Zero() in self.types(xi, g1, t.arg):
                    return {t.ann}
            return set()

        if isinstance(t, (s.ElimWith1, s.ElimWith2)):
            out = set()
            first = isinstance(t, s.ElimWith1)
            fv = s.fv_term(t.body)
            for g1, g2 in _splits(gamma):
                for a in self.types(xi, g1, t.arg):
                    if not isinstance(a, s.With):
                        continue
                    comp = a.left if first else a.right
                    if comp != t.ann:
                        continue
                    x = _fresh(t.hint, xi, gamma, fv)
                    body = s.open_term(t.body, s.Var(x))
                    out |= self.types(xi, g2 | {(x, t.ann)}, body)
            return out

        if isinstance(t, s.Inl):
            return {s.Plus(a, t.ann) for a in self.types(xi, gamma, t.body)}

        if isinstance(t, s.Inr):
            return {s.Plus(t.ann, a) for a in self.types(xi, gamma, t.body)}

        if isinstance(t, s.ElimPlus):
            out = set()
            want = s.Plus(t.ann_x, t.ann_y)
            fv = s.fv_term(t.left) | s.fv_term(t.right)
            for g1, g2 in _splits(gamma):
                if want in self.types(xi, g1, t.arg):
                    x = _fresh(t.hint_x, xi, gamma, fv)
                    lbody = s.open_term(t.left, s.Var(x))
                    y = _fresh(t.hint_y, xi, gamma, fv)
                    rbody = s.open_term(t.right, s.Var(y))
                    out |= (self.types(xi, g2 | {(x, t.ann_x)}, lbody)
                            & self.types(xi, g2 | {(y, t.ann_y)}, rbody))
            return out

        if isinstance(t, s.BangI):
            if gamma:
                return set()
            return {s.Bang(a) for a in self.types(xi, gamma, t.body)}

        if isinstance(t, s.ElimBang):
            out = set()
            want = s.Bang(t.ann)
            fv = s.fv_term(t.body)
            for g1, g2 in _splits(gamma):
                if want in self.types(xi, g1, t.arg):
                    x = _fresh(t.hint, xi, gamma, fv)
                    body = s.open_term(t.body, s.Var(x))
                    out |= self.types(xi | {(x, t.ann)}, g2, body)
            return out

        if isinstance(t, s.TLam):
            taken = set(s.ftv_term(t.body))
            for _, p in xi | gamma:
                taken |= s.ftv_prop(p)
            x = s.fresh_name(t.hint or "X", taken)
            body = s.open_term_prop(t.body, s.PVar(x))
            return {s.prop_close(a, x, hint=t.hint)
                    for a in self.types(xi, gamma, body)}

        if isinstance(t, s.TApp):
            return {s.prop_open(a.body, t.ann)
                    for a in self.types(xi, gamma, t.fn)
                    if isinstance(a, s.Forall)}

        if isinstance(t, s.BVar):
            return set()

        raise TypeError(f"not a term: {t!r}")


def derivable_types(xi: dict, gamma: dict, t: s.Term) -> frozenset:
    return Oracle().types(frozenset(xi.items()), frozenset(gamma.items()), t)

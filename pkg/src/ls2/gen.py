"""Seeded type-directed generation of well-typed terms.

Terms are built by constructing a derivation and extracting the proof-term,
so every sample type-checks by construction.  Linear hypotheses are
discharged by structural elimination, which keeps generation total: the
types put into linear positions come from pools of "consumable" types that
the eliminator machinery can always break down.
"""

from __future__ import annotations

import dataclasses
import random
from dataclasses import dataclass, field

from . import syntax as s
from .encodings import VLeaf, VNode, VShape, to_prop
from .semiring import RAT, Scalar, SemiringSpec


@dataclass
class GenConfig:
    semiring: SemiringSpec = RAT
    allow_bang: bool = True
    allow_poly: bool = True
    fuel: int = 14
    max_ctx_types: int = 3  # depth bound for pooled types


_SCALAR_TEXTS = {
    "rat": ("0", "1", "2", "3", "-1", "1/2", "2/3", "-3/5", "7"),
    "nat": ("0", "1", "2", "3", "5", "8"),
    "gauss": ("0", "1", "i", "-i", "2+3i", "1/2-1/3i", "-2"),
    "unit": ("u",),
}


def gen_scalar(rng: random.Random, sr: SemiringSpec) -> Scalar:
    return sr.parse_scalar(rng.choice(_SCALAR_TEXTS[sr.name]))


def gen_vshape(rng: random.Random, max_dim: int = 8) -> VShape:
    n = rng.randint(1, max_dim)

    def build(k: int) -> VShape:
        if k == 1:
            return VLeaf()
        split = rng.randint(1, k - 1)
        return VNode(build(split), build(k - split))

    return build(n)


def gen_ctx_prop(rng: random.Random, cfg: GenConfig, depth: int | None = None,
                 allow_zero: bool = True) -> s.Prop:
    """A type safe to put in a linear position: the consume machinery can
    always discharge a variable of this type."""
    if depth is None:
        depth = cfg.max_ctx_types
    if depth <= 0:
        return s.One()
    roll = rng.random()
    sub = lambda: gen_ctx_prop(rng, cfg, depth - 1, allow_zero=False)
    if roll < 0.35:
        return s.One()
    if roll < 0.47:
        return s.Tensor(sub(), sub())
    if roll < 0.59:
        return s.With(sub(), sub())
    if roll < 0.71:
        return s.Plus(sub(), sub())
    if roll < 0.83:
        return s.Lolli(sub(), sub())
    if roll < 0.88 and cfg.allow_poly:
        return s.Forall("X", s.Lolli(s.PBound(0), s.PBound(0)))
    if roll < 0.93 and cfg.allow_bang:
        return s.Bang(sub())
    if roll < 0.96 and allow_zero:
        return s.Zero()
    return s.One()


def gen_target_prop(rng: random.Random, cfg: GenConfig,
                    depth: int | None = None) -> s.Prop:
    """A type to generate at; may also mention Top at additive positions."""
    if depth is None:
        depth = cfg.max_ctx_types
    if depth > 0 and rng.random() < 0.15:
        sub = gen_target_prop(rng, cfg, depth - 1)
        return s.With(s.Top(), sub) if rng.random() < 0.5 else s.Top()
    return gen_ctx_prop(rng, cfg, depth, allow_zero=False)


def _inhabited(p: s.Prop) -> bool:
    """Conservative check that a closed proof exists."""
    if isinstance(p, (s.One, s.Top)):
        return True
    if isinstance(p, s.Zero):
        return False
    if isinstance(p, (s.Tensor, s.With)):
        return _inhabited(p.left) and _inhabited(p.right)
    if isinstance(p, s.Plus):
        return _inhabited(p.left) or _inhabited(p.right)
    if isinstance(p, s.Lolli):
        return True  # the pools only produce dischargeable domains
    if isinstance(p, s.Bang):
        return _inhabited(p.body)
    if isinstance(p, s.Forall):
        return True  # pooled quantified types are identity-shaped
    return False


class Generator:
    def __init__(self, rng: random.Random, cfg: GenConfig):
        self.rng = rng
        self.cfg = cfg
        self._supply = 0

    def fresh(self, hint: str = "v") -> str:
        self._supply += 1
        return f"{hint}{self._supply}"

    # -- public entry points --------------------------------------------

    def closed(self, target: s.Prop, fuel: int | None = None) -> s.Term:
        return self.term({}, target, fuel)

    def term(self, gamma: dict[str, s.Prop], target: s.Prop,
             fuel: int | None = None) -> s.Term:
        return self._gen(dict(gamma), target,
                         self.cfg.fuel if fuel is None else fuel)

    # -- derivation construction -----------------------------------------

    def _gen(self, gamma: dict[str, s.Prop], target: s.Prop, fuel: int) -> s.Term:
        rng = self.rng
        # hypotheses at a bare type variable have no eliminator; they flow
        # to the result only through the axiom, so cuts must not split them
        opaque = any(isinstance(p, s.PVar) for p in gamma.values())
        if fuel > 0:
            roll = rng.random()
            if roll < 0.10:
                return s.Sum(self._gen(dict(gamma), target, fuel // 2),
                             self._gen(dict(gamma), target, fuel // 2))
            if roll < 0.16:
                return s.Prod(gen_scalar(rng, self.cfg.semiring),
                              self._gen(gamma, target, fuel - 1))
            if roll < 0.24 and not opaque:
                return self._cut(gamma, target, fuel)
        eliminable = [x for x, p in gamma.items()
                      if not isinstance(p, s.PVar)]
        if eliminable and (rng.random() < 0.7
                           or not self._intro_ready(gamma, target)):
            return self._consume_one(gamma, eliminable, target, fuel)
        return self._intro(gamma, target, fuel)

    def _intro_ready(self, gamma, target) -> bool:
        """Whether an introduction at the target can still discharge gamma."""
        if isinstance(target, (s.One, s.Bang)):
            return not gamma
        if isinstance(target, s.PVar):
            return len(gamma) == 1 and next(iter(gamma.values())) == target
        return True

    def _intro(self, gamma: dict, target: s.Prop, fuel: int) -> s.Term:
        rng = self.rng
        if len(gamma) == 1:
            (x, p), = gamma.items()
            if p == target and rng.random() < 0.6:
                return s.Var(x)
        if isinstance(target, s.One):
            assert not gamma
            return s.Star(gen_scalar(rng, self.cfg.semiring))
        if isinstance(target, s.Top):
            return s.Unit()
        if isinstance(target, s.Lolli):
            x = self.fresh("x")
            body = self._gen({**gamma, x: target.left}, target.right, fuel - 1)
            return s.Lam(x, target.left, s.close_term(body, x))
        if isinstance(target, s.Tensor):
            g1, g2 = self._split(gamma)
            return s.TensorI(self._gen(g1, target.left, fuel // 2),
                             self._gen(g2, target.right, fuel // 2))
        if isinstance(target, s.With):
            return s.Pair(self._gen(dict(gamma), target.left, fuel // 2),
                          self._gen(dict(gamma), target.right, fuel // 2))
        if isinstance(target, s.Plus):
            sides = [side for side in ("l", "r")
                     if _inhabited(target.left if side == "l" else target.right)]
            side = rng.choice(sides or ["l"])
            if side == "l":
                return s.Inl(self._gen(gamma, target.left, fuel - 1), target.right)
            return s.Inr(self._gen(gamma, target.right, fuel - 1), target.left)
        if isinstance(target, s.Bang):
            assert not gamma
            return s.BangI(self._gen({}, target.body, fuel - 1))
        if isinstance(target, s.Forall):
            x = self.fresh("X")
            body = self._gen(gamma, s.prop_open(target.body, s.PVar(x)), fuel - 1)
            return s.TLam(x, s.close_term_prop(body, x))
        if isinstance(target, s.PVar):
            # only reachable through a matching hypothesis
            (x, p), = gamma.items()
            assert p == target
            return s.Var(x)
        if isinstance(target, s.Zero):
            raise AssertionError("no closed introduction at the empty type")
        raise AssertionError(f"unexpected target {target!r}")

    def _cut(self, gamma: dict, target: s.Prop, fuel: int) -> s.Term:
        rng = self.rng
        kind = rng.random()
        if kind < 0.5:
            b = gen_ctx_prop(rng, self.cfg, allow_zero=False)
            g1, g2 = self._split(gamma)
            x = self.fresh("x")
            body = self._gen({**g1, x: b}, target, fuel // 2)
            return s.App(s.Lam(x, b, s.close_term(body, x)),
                         self._gen(g2, b, fuel // 2))
        if kind < 0.75:
            g1, g2 = self._split(gamma)
            return s.ElimOne(self._gen(g1, s.One(), fuel // 2),
                             self._gen(g2, target, fuel // 2))
        if self.cfg.allow_poly:
            x = self.fresh("X")
            body = self._gen(gamma, target, fuel - 1)
            d = gen_ctx_prop(rng, self.cfg, depth=1, allow_zero=False)
            return s.TApp(s.TLam(x, s.close_term_prop(body, x)), d)
        return self._gen(gamma, target, fuel - 1)

    def _split(self, gamma: dict) -> tuple[dict, dict]:
        g1, g2 = {}, {}
        for k, v in gamma.items():
            (g1 if self.rng.random() < 0.5 else g2)[k] = v
        return g1, g2

    def _consume_one(self, gamma: dict, eliminable: list, target: s.Prop,
                     fuel: int) -> s.Term:
        x = self.rng.choice(sorted(eliminable))
        rest = {k: v for k, v in gamma.items() if k != x}
        return self._consume(s.Var(x), gamma[x], rest, target, fuel)

    def _consume(self, value: s.Term, vtype: s.Prop, rest: dict,
                 target: s.Prop, fuel: int) -> s.Term:
        """Eliminate a value of a pooled type, feeding its pieces to the
        remaining goal."""
        rng = self.rng
        if vtype == target and not rest and rng.random() < 0.5:
            return value
        if isinstance(vtype, s.One):
            return s.ElimOne(value, self._gen(rest, target, fuel - 1))
        if isinstance(vtype, s.Tensor):
            x, y = self.fresh("x"), self.fresh("y")
            body = self._gen({**rest, x: vtype.left, y: vtype.right},
                             target, fuel - 1)
            return s.ElimTensor(value, x, vtype.left, y, vtype.right,
                                s.close_term(body, x, y))
        if isinstance(vtype, s.With):
            sides = []
            if self._consumable(vtype.left):
                sides.append("l")
            if self._consumable(vtype.right):
                sides.append("r")
            side = rng.choice(sides or ["l"])
            comp = vtype.left if side == "l" else vtype.right
            x = self.fresh("x")
            body = self._gen({**rest, x: comp}, target, fuel - 1)
            elim = s.ElimWith1 if side == "l" else s.ElimWith2
            return elim(value, x, comp, s.close_term(body, x))
        if isinstance(vtype, s.Plus):
            x, y = self.fresh("x"), self.fresh("y")
            lbody = self._gen({**rest, x: vtype.left}, target, fuel // 2)
            rbody = self._gen({**rest, y: vtype.right}, target, fuel // 2)
            return s.ElimPlus(value, x, vtype.left, s.close_term(lbody, x),
                              y, vtype.right, s.close_term(rbody, y))
        if isinstance(vtype, s.Zero):
            # absorbs every remaining hypothesis through the slack of 0e
            return s.ElimZero(target, value)
        if isinstance(vtype, s.Lolli):
            arg = self._gen({}, vtype.left, max(0, fuel // 3))
            return self._consume(s.App(value, arg), vtype.right, rest,
                                 target, fuel - 1)
        if isinstance(vtype, s.Forall):
            d = gen_ctx_prop(rng, self.cfg, depth=1, allow_zero=False)
            return self._consume(s.TApp(value, d),
                                 s.prop_open(vtype.body, d), rest, target,
                                 fuel - 1)
        if isinstance(vtype, s.Bang):
            x = self.fresh("w")
            body = self._gen_with_xi({x: vtype.body}, rest, target, fuel - 1)
            return s.ElimBang(value, x, vtype.body, s.close_term(body, x))
        raise AssertionError(f"cannot consume a hypothesis of type {vtype!r}")

    def _consumable(self, p: s.Prop) -> bool:
        return not isinstance(p, s.Top)

    def _gen_with_xi(self, xi: dict, gamma: dict, target: s.Prop,
                     fuel: int) -> s.Term:
        """Generate under an extra non-linear hypothesis.

        Non-linear variables consume nothing, so they can only join a sum
        whose other branch also consumes nothing; gate the duplicate uses on
        an empty linear context.
        """
        t = self._gen(gamma, target, fuel)
        if not gamma:
            for x, p in xi.items():
                if p == target and self.rng.random() < 0.5:
                    return s.Sum(t, s.Sum(s.Var(x), s.Var(x)))
        return t


# ---------------------------------------------------------------------------
# mutations, for exercising the reject paths
# ---------------------------------------------------------------------------


def mutate(rng: random.Random, t: s.Term, cfg: GenConfig) -> s.Term:
    """Local edit that frequently breaks typing (but need not)."""
    positions = [p for p, _ in s.subterms(t)]
    path = rng.choice(positions)
    sub = s.subterm_at(t, path)
    choice = rng.random()
    if choice < 0.3:
        new: s.Term = s.Star(gen_scalar(rng, cfg.semiring))
    elif choice < 0.5:
        names = sorted(s.fv_term(t)) or ["q"]
        new = s.Var(rng.choice(names))
    elif choice < 0.7:
        new = s.Sum(sub, s.Var(rng.choice(sorted(s.fv_term(t)) or ["q"])))
    elif choice < 0.85 and not isinstance(sub, (s.Var, s.BVar)):
        kids = s.term_children(sub)
        if len(kids) >= 2:
            a, b = kids[0], kids[1]
            new = dataclasses.replace(sub, **{a[0]: b[1], b[0]: a[1]})
        else:
            new = s.Unit()
    else:
        new = s.Unit()
    return s.replace_at(t, path, new)


def random_linear_context(rng: random.Random, cfg: GenConfig,
                          max_vars: int = 6) -> dict[str, s.Prop]:
    n = rng.randint(0, max_vars)
    return {f"g{i}": gen_ctx_prop(rng, cfg) for i in range(n)}

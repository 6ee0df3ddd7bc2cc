"""Randomised metatheory sweeps.

Every suite is seed-deterministic: sample k of a run with seed s uses the
derived seed ``s * 1_000_003 + k``, which each FAIL line reports, so any
failure reproduces from its report line alone.
"""

from __future__ import annotations

import random
import sys
import time
from dataclasses import dataclass, field

from . import syntax as s
from .declarative import derivable_types
from .encodings import dim, term_to_vec, to_prop, zero_term
from .errors import StepLimitExceeded
from .gen import (GenConfig, Generator, gen_scalar, gen_target_prop,
                  gen_vshape, random_linear_context)
from .linearity import check_linearity, decompose, in_linear_fragment
from .rewrite import equiv, nf, normalize, normalize_random, reducts
from .semiring import GAUSS, RAT, SemiringSpec
from .typecheck import TypingCtx, infer

sys.setrecursionlimit(20_000)


@dataclass
class Failure:
    prop_name: str
    seed: int
    size: int
    message: str

    def line(self) -> str:
        return (f"FAIL {self.prop_name} seed={self.seed} size={self.size}  "
                f"{self.message}")


@dataclass
class SuiteReport:
    name: str
    samples: int
    seed: int
    lines: list[str] = field(default_factory=list)
    failures: list[Failure] = field(default_factory=list)
    elapsed: float = 0.0

    @property
    def ok(self) -> bool:
        return not self.failures

    def finish(self, started: float, properties: dict[str, int]) -> "SuiteReport":
        self.elapsed = time.time() - started
        failed = {f.prop_name for f in self.failures}
        for name, max_size in properties.items():
            status = "FAIL" if name in failed else "PASS"
            self.lines.append(
                f"{status} {name} seed={self.seed} size={max_size}")
        self.lines.extend(f.line() for f in self.failures)
        return self

    def render(self) -> str:
        out = list(self.lines)
        out.append(f"{'ok' if self.ok else 'FAILED'} {self.name}: "
                   f"{self.samples} samples, "
                   f"{len(self.failures)} failures, {self.elapsed:.1f}s")
        return "\n".join(out)


def _sample_seed(seed: int, k: int) -> int:
    return seed * 1_000_003 + k


def _sized_term(gen: Generator, gamma, target, max_size: int) -> s.Term:
    fuel = gen.cfg.fuel
    while True:
        t = gen.term(gamma, target, fuel)
        if s.term_size(t) <= max_size or fuel == 0:
            return t
        fuel = max(0, fuel - 4)


def _corpus(samples: int, seed: int, cfg: GenConfig, max_size: int,
            open_every: int = 3):
    """Well-typed terms, one third of them under a nonempty linear context."""
    for k in range(samples):
        sseed = _sample_seed(seed, k)
        rng = random.Random(sseed)
        gen = Generator(rng, cfg)
        gamma = (random_linear_context(rng, cfg, 4)
                 if open_every and k % open_every == 0 else {})
        target = gen_target_prop(rng, cfg)
        t = _sized_term(gen, gamma, target, max_size)
        yield sseed, gamma, target, t


def suite_sr(samples: int = 1000, seed: int = 0,
             cfg: GenConfig | None = None, max_size: int = 60) -> SuiteReport:
    """Every one-step reduct of a well-typed term re-checks at its type."""
    cfg = cfg or GenConfig()
    rep = SuiteReport("sr", samples, seed)
    started = time.time()
    biggest = 0
    for sseed, gamma, target, t in _corpus(samples, seed, cfg, max_size):
        biggest = max(biggest, s.term_size(t))
        ctx = TypingCtx(gamma=gamma)
        for rule, pos, reduct in reducts(t):
            try:
                got = infer(ctx, reduct).prop
            except Exception as exc:
                rep.failures.append(Failure(
                    "subject-reduction", sseed, s.term_size(t),
                    f"{rule} at {pos}: reduct rejected: {exc!r}"))
                continue
            if got != target:
                rep.failures.append(Failure(
                    "subject-reduction", sseed, s.term_size(t),
                    f"{rule} at {pos}: type changed to {got}"))
    return rep.finish(started, {"subject-reduction": biggest})


def suite_confluence(samples: int = 300, seed: int = 0,
                     cfg: GenConfig | None = None, runs: int = 20,
                     max_size: int = 60,
                     max_steps: int = 10_000) -> SuiteReport:
    """Random strategies all reach alpha-equal normal forms."""
    cfg = cfg or GenConfig()
    rep = SuiteReport("confluence", samples, seed)
    started = time.time()
    biggest = 0
    for sseed, gamma, target, t in _corpus(samples, seed, cfg, max_size):
        biggest = max(biggest, s.term_size(t))
        try:
            base = nf(t, max_steps)
        except StepLimitExceeded:
            rep.failures.append(Failure("confluence", sseed, s.term_size(t),
                                        "leftmost-outermost hit step limit"))
            continue
        for r in range(runs):
            try:
                other, _ = normalize_random(t, sseed + r + 1, max_steps)
            except StepLimitExceeded:
                rep.failures.append(Failure(
                    "confluence", sseed, s.term_size(t),
                    f"random run {r} hit step limit"))
                continue
            if other != base:
                rep.failures.append(Failure(
                    "confluence", sseed, s.term_size(t),
                    f"run {r} reached a different normal form"))
    return rep.finish(started, {"confluence": biggest})


def suite_sn(samples: int = 300, seed: int = 0, cfg: GenConfig | None = None,
             max_size: int = 60, max_steps: int = 10_000) -> SuiteReport:
    """Termination within the step budget, ultra-reduction included."""
    cfg = cfg or GenConfig()
    rep = SuiteReport("sn", samples, seed)
    started = time.time()
    biggest = 0
    for sseed, gamma, target, t in _corpus(samples, seed, cfg, max_size):
        biggest = max(biggest, s.term_size(t))
        try:
            normalize(t, max_steps)
        except StepLimitExceeded:
            rep.failures.append(Failure("termination", sseed, s.term_size(t),
                                        "standard reduction exceeded budget"))
        try:
            normalize_random(t, sseed, max_steps, mode="ultra")
        except StepLimitExceeded:
            rep.failures.append(Failure("termination", sseed, s.term_size(t),
                                        "ultra reduction exceeded budget"))
    return rep.finish(started, {"termination": biggest})


_INTRO_SHAPES: dict[type, tuple[type, ...]] = {
    s.One: (s.Star,),
    s.Lolli: (s.Lam,),
    s.Tensor: (s.TensorI, s.Sum, s.Prod),
    s.Top: (s.Unit,),
    s.With: (s.Pair,),
    s.Plus: (s.Inl, s.Inr, s.Sum, s.Prod),
    s.Bang: (s.BangI,),
    s.Forall: (s.TLam,),
}


def intro_shape_ok(t: s.Term, prop: s.Prop) -> bool:
    """Shape table for closed irreducible terms; no closed irreducible
    term of the empty type or of a type variable is admissible at all."""
    allowed = _INTRO_SHAPES.get(type(prop))
    return allowed is not None and isinstance(t, allowed)


def suite_intro(samples: int = 500, seed: int = 0,
                cfg: GenConfig | None = None, max_size: int = 60,
                max_steps: int = 10_000) -> SuiteReport:
    cfg = cfg or GenConfig()
    rep = SuiteReport("intro", samples, seed)
    started = time.time()
    biggest = 0
    for sseed, gamma, target, t in _corpus(samples, seed, cfg, max_size,
                                           open_every=0):
        biggest = max(biggest, s.term_size(t))
        try:
            normal = nf(t, max_steps)
        except StepLimitExceeded:
            rep.failures.append(Failure("introduction", sseed,
                                        s.term_size(t), "step limit"))
            continue
        if not intro_shape_ok(normal, target):
            rep.failures.append(Failure(
                "introduction", sseed, s.term_size(t),
                f"normal form {normal!r} has the wrong head for {target}"))
    return rep.finish(started, {"introduction": biggest})


def suite_semimodule(samples: int = 200, seed: int = 0,
                     semirings: tuple[SemiringSpec, ...] = (RAT, GAUSS),
                     max_dim: int = 8, max_size: int = 60) -> SuiteReport:
    """The seven semimodule laws at vector types."""
    rep = SuiteReport("semimodule", samples, seed)
    started = time.time()
    biggest = 0
    laws = {f"semimodule-{i}-{name}": 0 for i, name in enumerate(
        ("sum-assoc", "sum-comm", "zero-unit", "scalar-assoc", "one-unit",
         "left-distrib", "right-distrib"), start=1)}
    per_ring = max(1, samples // len(semirings))
    k = 0
    for sr in semirings:
        cfg = GenConfig(semiring=sr)
        for _ in range(per_ring):
            sseed = _sample_seed(seed, k)
            k += 1
            rng = random.Random(sseed)
            gen = Generator(rng, cfg)
            shape = gen_vshape(rng, max_dim)
            prop = to_prop(shape)
            t1 = _sized_term(gen, {}, prop, max_size)
            t2 = _sized_term(gen, {}, prop, max_size)
            t3 = _sized_term(gen, {}, prop, max_size)
            a = gen_scalar(rng, sr)
            b = gen_scalar(rng, sr)
            zero = zero_term(shape, sr)
            biggest = max(biggest, s.term_size(t1))
            checks = [
                ("semimodule-1-sum-assoc",
                 s.Sum(s.Sum(t1, t2), t3), s.Sum(t1, s.Sum(t2, t3))),
                ("semimodule-2-sum-comm", s.Sum(t1, t2), s.Sum(t2, t1)),
                ("semimodule-3-zero-unit", s.Sum(t1, zero), t1),
                ("semimodule-4-scalar-assoc",
                 s.Prod(a, s.Prod(b, t1)),
                 s.Prod(sr.scalar(sr.mul(a.value, b.value)), t1)),
                ("semimodule-5-one-unit", s.Prod(sr.scalar(sr.one), t1), t1),
                ("semimodule-6-left-distrib",
                 s.Prod(a, s.Sum(t1, t2)), s.Sum(s.Prod(a, t1), s.Prod(a, t2))),
                ("semimodule-7-right-distrib",
                 s.Prod(sr.scalar(sr.add(a.value, b.value)), t1),
                 s.Sum(s.Prod(a, t1), s.Prod(b, t1))),
            ]
            for name, lhs, rhs in checks:
                nl, nr = nf(lhs), nf(rhs)
                # alpha-comparison and vector read must agree; the read also
                # confirms the normal forms are canonical vectors
                ok = nl == nr
                vec_ok = (term_to_vec(nl, shape).entries
                          == term_to_vec(nr, shape).entries)
                if not (ok and vec_ok):
                    rep.failures.append(Failure(
                        f"{name}[{sr.name}]", sseed, dim(shape),
                        "law violated"))
    return rep.finish(started, dict.fromkeys(laws, max_dim))


def suite_linearity(samples: int = 200, seed: int = 0,
                    max_dim: int = 4, max_size: int = 40) -> SuiteReport:
    """Both linearity equations on generated one-variable terms."""
    cfg = GenConfig(allow_bang=False)
    rep = SuiteReport("linearity", samples, seed)
    started = time.time()
    biggest = 0
    for k in range(samples):
        sseed = _sample_seed(seed, k)
        rng = random.Random(sseed)
        gen = Generator(rng, cfg)
        shape = gen_vshape(rng, max_dim)
        b = to_prop(shape)
        a = _inhabited_ctx_prop(rng, cfg)
        t = _sized_term(gen, {"x": a}, b, max_size)
        u1 = _sized_term(gen, {}, a, max_size // 2)
        u2 = _sized_term(gen, {}, a, max_size // 2)
        scalar = gen_scalar(rng, cfg.semiring)
        biggest = max(biggest, s.term_size(t))
        try:
            result = check_linearity(t, a, b, u1, u2, scalar)
        except Exception as exc:
            rep.failures.append(Failure("linearity", sseed, s.term_size(t),
                                        f"precondition/infra: {exc!r}"))
            continue
        if not result.sum_holds:
            rep.failures.append(Failure("linearity-sum", sseed,
                                        s.term_size(t), "sum equation fails"))
        if not result.scalar_holds:
            rep.failures.append(Failure("linearity-scalar", sseed,
                                        s.term_size(t),
                                        "scalar equation fails"))
    return rep.finish(started, {"linearity-sum": biggest,
                                "linearity-scalar": biggest})


def _inhabited_ctx_prop(rng, cfg):
    from .gen import gen_ctx_prop, _inhabited
    while True:
        p = gen_ctx_prop(rng, cfg, allow_zero=False)
        if _inhabited(p):
            return p


def suite_mu(samples: int = 300, seed: int = 0, max_size: int = 60,
             max_steps: int = 10_000) -> SuiteReport:
    """The measure never increases across a reduction step, and splits
    additively over elimination contexts."""
    cfg = GenConfig(allow_bang=False)
    rep = SuiteReport("mu", samples, seed)
    started = time.time()
    biggest = 0
    for sseed, gamma, target, t in _corpus(samples, seed, cfg, max_size):
        biggest = max(biggest, s.term_size(t))
        mu_t = s.measure_mu(t)
        for rule, pos, reduct in reducts(t):
            if s.measure_mu(reduct) > mu_t:
                rep.failures.append(Failure(
                    "mu-monotone", sseed, s.term_size(t),
                    f"{rule} at {pos} increased the measure"))
    # decomposition link on irreducible one-variable terms
    for k in range(samples):
        sseed = _sample_seed(seed, samples + k)
        rng = random.Random(sseed)
        gen = Generator(rng, cfg)
        c = _inhabited_ctx_prop(rng, cfg)
        target = gen_target_prop(rng, cfg)
        t = _sized_term(gen, {"x": c}, target, max_size)
        try:
            irr = nf(t, max_steps)
        except StepLimitExceeded:
            rep.failures.append(Failure("mu-decomposition", sseed,
                                        s.term_size(t), "step limit"))
            continue
        d = decompose(irr, c)
        plugged = d.context.plug(d.head)
        if plugged != irr:
            rep.failures.append(Failure(
                "mu-decomposition", sseed, s.term_size(t),
                "plug(decompose(t)) differs from t"))
        if s.measure_mu(irr) != d.context.measure() + s.measure_mu(d.head):
            rep.failures.append(Failure(
                "mu-decomposition", sseed, s.term_size(t),
                "mu(K{t}) != mu(K) + mu(t)"))
    return rep.finish(started, {"mu-monotone": biggest,
                                "mu-decomposition": biggest})


def suite_oracle(samples: int = 2000, seed: int = 0, max_ctx: int = 6,
                 max_size: int = 40) -> SuiteReport:
    """Leftover threading agrees with declarative split enumeration."""
    from .gen import mutate
    cfg = GenConfig()
    rep = SuiteReport("oracle", samples, seed)
    started = time.time()
    biggest = 0
    for k in range(samples):
        sseed = _sample_seed(seed, k)
        rng = random.Random(sseed)
        gen = Generator(rng, cfg)
        gamma = random_linear_context(rng, cfg, max_ctx)
        target = gen_target_prop(rng, cfg)
        t = _sized_term(gen, gamma, target, max_size)
        if k % 2 == 1:
            t = mutate(rng, t, cfg)
        biggest = max(biggest, s.term_size(t))
        try:
            inferred = infer(TypingCtx(gamma=gamma), t).prop
        except Exception:
            inferred = None
        declared = derivable_types({}, gamma, t)
        if inferred is None:
            if declared:
                rep.failures.append(Failure(
                    "oracle-agreement", sseed, s.term_size(t),
                    f"threading rejects, enumeration derives {declared}"))
        else:
            if declared != frozenset((inferred,)):
                rep.failures.append(Failure(
                    "oracle-agreement", sseed, s.term_size(t),
                    f"threading gives {inferred}, enumeration {declared}"))
    return rep.finish(started, {"oracle-agreement": biggest})


SUITES = {
    "sr": suite_sr,
    "confluence": suite_confluence,
    "sn": suite_sn,
    "intro": suite_intro,
    "semimodule": suite_semimodule,
}

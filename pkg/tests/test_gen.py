import random

from ls2.gen import (GenConfig, Generator, gen_target_prop, gen_vshape,
                     mutate, random_linear_context)
from ls2.encodings import dim
from ls2.linearity import in_linear_fragment
from ls2.semiring import GAUSS
from ls2.syntax import term_size
from ls2.typecheck import TypingCtx, infer


def test_generated_terms_typecheck_at_target():
    cfg = GenConfig()
    for seed in range(300):
        rng = random.Random(seed)
        g = Generator(rng, cfg)
        gamma = random_linear_context(rng, cfg, 5) if seed % 3 == 0 else {}
        target = gen_target_prop(rng, cfg)
        t = g.term(gamma, target)
        assert infer(TypingCtx(gamma=gamma), t).prop == target


def test_generation_is_deterministic():
    def once(seed):
        rng = random.Random(seed)
        g = Generator(rng, GenConfig())
        return g.closed(gen_target_prop(rng, g.cfg))

    assert once(99) == once(99)


def test_fragment_mode_stays_bang_free():
    cfg = GenConfig(allow_bang=False)
    for seed in range(150):
        rng = random.Random(seed)
        g = Generator(rng, cfg)
        t = g.term({}, gen_target_prop(rng, cfg))
        assert in_linear_fragment(t)


def test_gauss_scalars_flow_through():
    cfg = GenConfig(semiring=GAUSS)
    rng = random.Random(4)
    g = Generator(rng, cfg)
    t = g.closed(gen_target_prop(rng, cfg))
    infer(TypingCtx(), t)


def test_vshape_dimension_bounds():
    rng = random.Random(0)
    for _ in range(200):
        assert 1 <= dim(gen_vshape(rng, 8)) <= 8


def test_mutants_never_crash_the_checker():
    cfg = GenConfig()
    rejected = 0
    for seed in range(200):
        rng = random.Random(seed)
        g = Generator(rng, cfg)
        gamma = random_linear_context(rng, cfg, 4)
        t = mutate(rng, g.term(gamma, gen_target_prop(rng, cfg), 8), cfg)
        try:
            infer(TypingCtx(gamma=gamma), t)
        except Exception:
            rejected += 1
    assert rejected > 50  # mutations do break typing often


def test_fuel_bounds_size_roughly():
    cfg = GenConfig(fuel=6)
    rng = random.Random(1)
    g = Generator(rng, cfg)
    sizes = [term_size(g.closed(gen_target_prop(rng, cfg))) for _ in range(50)]
    assert max(sizes) < 400

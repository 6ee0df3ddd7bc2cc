"""Batch command-line front end.

    ls2 check FILE-OR-TERM [--ctx "x:A, y:B"] [--nonlinear "z:C"]
    ls2 normalize FILE-OR-TERM [--trace]
    ls2 equiv ARG1 ARG2
    ls2 encode MATRIX [--domain PROP] [--codomain PROP]
    ls2 apply MATRIX VECTOR [--pow N]
    ls2 linearity [FILE] [--samples N] [--seed S]
    ls2 metatheory --suite {sr,confluence,sn,intro,semimodule} [--samples N]

Global flags: --semiring rat|nat|gauss|unit (or LS2_SEMIRING), --max-steps,
--seed, --mode standard|ultra, --json.  Exit codes: 0 success, 1 type error,
2 step limit, 3 property failure, 4 parse error.
"""

from __future__ import annotations

import argparse
import json
import os
import random
import sys
from dataclasses import dataclass

from . import syntax as s
from .encodings import (DenseMat, DenseVec, church, dim, is_v_type, mat_pow,
                        mat_vec, matrix_to_term, miter_term, term_to_vec,
                        to_prop, vec_to_term)
from .errors import (DimMismatch, LS2Error, ParseError, StepLimitExceeded,
                     TypeError_)
from .gen import GenConfig, Generator, gen_scalar, gen_vshape
from .linearity import check_linearity
from .rewrite import normalize
from .semiring import SemiringSpec, semiring_by_name
from .suites import SUITES, suite_linearity
from .textio import parse_file, parse_prop, parse_term, print_prop, print_term
from .typecheck import TypingCtx, infer

sys.setrecursionlimit(20_000)

EXIT_OK, EXIT_TYPE, EXIT_STEPS, EXIT_PROPERTY, EXIT_PARSE = 0, 1, 2, 3, 4


@dataclass
class Config:
    semiring: SemiringSpec
    max_steps: int
    seed: int
    mode: str
    json_out: bool


class Report:
    def __init__(self, command: str, cfg: Config):
        self.cfg = cfg
        self.data: dict = {"command": command, "ok": True, "failures": []}
        self.text: list[str] = []

    def set(self, **fields):
        self.data.update(fields)

    def say(self, line: str):
        self.text.append(line)

    def fail(self, **fields):
        self.data["ok"] = False
        self.data["failures"].append(fields)

    def emit(self) -> None:
        if self.cfg.json_out:
            print(json.dumps(self.data, default=str))
        else:
            for line in self.text:
                print(line)


def _load_term(arg: str, sr: SemiringSpec) -> s.Term:
    """A positional argument is a path when it points at a file, otherwise
    it is parsed as a term."""
    if os.path.exists(arg) or arg.endswith(".ls2"):
        with open(arg, encoding="utf-8") as fh:
            return parse_file(fh.read(), sr).main_or_last()
    return parse_term(arg, sr)


def _parse_ctx(text: str | None, sr: SemiringSpec) -> dict[str, s.Prop]:
    out: dict[str, s.Prop] = {}
    if not text:
        return out
    for part in text.split(","):
        part = part.strip()
        if not part:
            continue
        if ":" not in part:
            raise ParseError(f"context entry {part!r} is not name:prop")
        name, prop = part.split(":", 1)
        out[name.strip()] = parse_prop(prop.strip(), sr)
    return out


def _parse_matrix(text: str, sr: SemiringSpec,
                  domain: str | None, codomain: str | None) -> DenseMat:
    rows = _parse_nested(text, sr, depth=2)
    dom = _parse_shape(domain, sr)
    cod = _parse_shape(codomain, sr)
    return DenseMat.of(rows, dom, cod)


def _parse_vector(text: str, sr: SemiringSpec, shape=None) -> DenseVec:
    return DenseVec.of(_parse_nested(text, sr, depth=1), shape)


def _parse_shape(text: str | None, sr: SemiringSpec):
    if not text:
        return None
    shape = is_v_type(parse_prop(text, sr))
    if shape is None:
        raise ParseError(f"{text!r} is not a vector type (1 and & only)")
    return shape


def _parse_nested(text: str, sr: SemiringSpec, depth: int):
    """Parse [a, b] or [[a, b], [c, d]] with semiring scalar literals."""
    pos = 0

    def skip_ws():
        nonlocal pos
        while pos < len(text) and text[pos].isspace():
            pos += 1

    def parse(level):
        nonlocal pos
        skip_ws()
        if level == 0:
            start = pos
            while pos < len(text) and text[pos] not in ",]":
                pos += 1
            return sr.parse(text[start:pos].strip())
        if pos >= len(text) or text[pos] != "[":
            raise ParseError(f"expected '[' at offset {pos}")
        pos += 1
        items = []
        while True:
            items.append(parse(level - 1))
            skip_ws()
            if pos < len(text) and text[pos] == ",":
                pos += 1
                continue
            if pos < len(text) and text[pos] == "]":
                pos += 1
                return items
            raise ParseError(f"expected ',' or ']' at offset {pos}")

    out = parse(depth)
    skip_ws()
    if pos != len(text):
        raise ParseError(f"trailing input in literal at offset {pos}")
    if depth == 1:
        return [sr.scalar(v) for v in out]
    return [[sr.scalar(v) for v in row] for row in out]


def _show_vec(v: DenseVec) -> str:
    return "[" + ", ".join(str(e) for e in v.entries) + "]"


# -- commands ----------------------------------------------------------------


def cmd_check(args, cfg: Config) -> int:
    rep = Report("check", cfg)
    t = _load_term(args.arg, cfg.semiring)
    ctx = TypingCtx(xi=_parse_ctx(args.nonlinear, cfg.semiring),
                    gamma=_parse_ctx(args.ctx, cfg.semiring))
    result = infer(ctx, t)
    rep.set(type=print_prop(result.prop),
            consumed=sorted(result.usage.consumed),
            slack=result.usage.slack)
    rep.say(print_prop(result.prop))
    rep.say(f"consumed: {', '.join(sorted(result.usage.consumed)) or '(none)'}"
            + (" (slack)" if result.usage.slack else ""))
    rep.emit()
    return EXIT_OK


def cmd_normalize(args, cfg: Config) -> int:
    rep = Report("normalize", cfg)
    t = _load_term(args.arg, cfg.semiring)
    infer(TypingCtx(gamma=_parse_ctx(args.ctx, cfg.semiring)), t)
    normal, trace = normalize(t, cfg.max_steps)
    rep.set(normal_form=print_term(normal), steps=len(trace.entries))
    rep.say(print_term(normal))
    if args.trace:
        rep.set(trace=trace.serialize().splitlines())
        if trace.entries:
            rep.say(trace.serialize())
    rep.emit()
    return EXIT_OK


def cmd_equiv(args, cfg: Config) -> int:
    rep = Report("equiv", cfg)
    t1 = _load_term(args.arg1, cfg.semiring)
    t2 = _load_term(args.arg2, cfg.semiring)
    r1 = infer(TypingCtx(), t1)
    r2 = infer(TypingCtx(), t2)
    if r1.prop != r2.prop:
        rep.set(equiv=False, note="types differ")
        rep.say("false (types differ)")
        rep.emit()
        return EXIT_OK
    n1, _ = normalize(t1, cfg.max_steps)
    n2, _ = normalize(t2, cfg.max_steps)
    verdict = n1 == n2
    rep.set(equiv=verdict)
    rep.say("true" if verdict else "false")
    rep.emit()
    return EXIT_OK


def cmd_encode(args, cfg: Config) -> int:
    rep = Report("encode", cfg)
    m = _parse_matrix(args.matrix, cfg.semiring, args.domain, args.codomain)
    term = matrix_to_term(m)
    rep.set(term=print_term(term), type=print_prop(infer(TypingCtx(), term).prop))
    rep.say(print_term(term))
    rep.emit()
    return EXIT_OK


def cmd_apply(args, cfg: Config) -> int:
    rep = Report("apply", cfg)
    m = _parse_matrix(args.matrix, cfg.semiring, args.domain, args.codomain)
    v = _parse_vector(args.vector, cfg.semiring, m.domain)
    term = matrix_to_term(m)
    if args.pow is None:
        applied = s.App(term, vec_to_term(v))
        expected = mat_vec(m, v)
    else:
        if m.rows != m.cols:
            raise DimMismatch("--pow needs a square matrix")
        applied = s.App(s.App(s.App(miter_term(m.domain), church(args.pow)),
                              s.BangI(term)), vec_to_term(v))
        expected = mat_vec(mat_pow(m, args.pow), v)
    got = term_to_vec(applied, m.codomain, cfg.max_steps)
    if got.entries != expected.entries:
        raise LS2Error("proof-term application disagrees with the dense "
                       f"product: {_show_vec(got)} vs {_show_vec(expected)}")
    rep.set(vector=_show_vec(got))
    rep.say(_show_vec(got))
    rep.emit()
    return EXIT_OK


def cmd_linearity(args, cfg: Config) -> int:
    rep = Report("linearity", cfg)
    if args.file:
        fn = _load_term(args.file, cfg.semiring)
        result = infer(TypingCtx(), fn)
        if not isinstance(result.prop, s.Lolli) or is_v_type(result.prop.right) is None:
            raise TypeError_(
                "linearity needs a closed term of A -o B with B a vector type")
        a, b = result.prop.left, result.prop.right
        gen_cfg = GenConfig(semiring=cfg.semiring, allow_bang=False)
        failures = []
        for k in range(args.samples):
            sseed = cfg.seed * 1_000_003 + k
            rng = random.Random(sseed)
            g = Generator(rng, gen_cfg)
            u1 = g.closed(a)
            u2 = g.closed(a)
            scalar = gen_scalar(rng, cfg.semiring)
            body = s.App(fn, s.Var("x"))
            result_k = check_linearity(body, a, b, u1, u2, scalar,
                                       cfg.max_steps)
            line = (f"{'PASS' if result_k.ok else 'FAIL'} linearity "
                    f"seed={sseed} size={s.term_size(body)}")
            rep.say(line)
            if not result_k.ok:
                failures.append(sseed)
                rep.fail(property="linearity", seed=sseed,
                         term=print_term(fn))
        rep.emit()
        return EXIT_OK if not failures else EXIT_PROPERTY
    suite = suite_linearity(samples=args.samples, seed=cfg.seed)
    for line in suite.lines:
        rep.say(line)
    for f in suite.failures:
        rep.fail(property=f.prop_name, seed=f.seed, size=f.size,
                 message=f.message)
    rep.set(samples=suite.samples, elapsed=round(suite.elapsed, 2))
    rep.emit()
    return EXIT_OK if suite.ok else EXIT_PROPERTY


def cmd_metatheory(args, cfg: Config) -> int:
    rep = Report("metatheory", cfg)
    suite_fn = SUITES[args.suite]
    kwargs = {"seed": cfg.seed}
    if args.samples is not None:
        kwargs["samples"] = args.samples
    if args.suite in ("sr", "confluence", "sn", "intro"):
        kwargs["cfg"] = GenConfig(semiring=cfg.semiring)
    suite = suite_fn(**kwargs)
    for line in suite.lines:
        rep.say(line)
    rep.say(f"{suite.samples} samples in {suite.elapsed:.1f}s")
    for f in suite.failures:
        rep.fail(property=f.prop_name, seed=f.seed, size=f.size,
                 message=f.message)
    rep.set(suite=args.suite, samples=suite.samples)
    rep.emit()
    return EXIT_OK if suite.ok else EXIT_PROPERTY


def _global_flags(ap: argparse.ArgumentParser, suppress: bool) -> None:
    # the same flags are accepted before and after the subcommand; the
    # after-position ones only override when actually given
    d = (lambda v: argparse.SUPPRESS) if suppress else (lambda v: v)
    ap.add_argument("--semiring", choices=["rat", "nat", "gauss", "unit"],
                    default=d(os.environ.get("LS2_SEMIRING", "rat")))
    ap.add_argument("--max-steps", type=int, default=d(100_000))
    ap.add_argument("--seed", type=int, default=d(0))
    ap.add_argument("--mode", choices=["standard", "ultra"],
                    default=d("standard"))
    ap.add_argument("--json", action="store_true",
                    default=d(False))


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(
        prog="ls2",
        description="Type checker, normaliser and linear-algebra encodings "
                    "for a linear lambda-calculus with sums and scalars.")
    _global_flags(ap, suppress=False)
    common = argparse.ArgumentParser(add_help=False)
    _global_flags(common, suppress=True)
    sub = ap.add_subparsers(dest="command", required=True,
                            parser_class=lambda **kw: argparse.ArgumentParser(
                                parents=[common], **kw))

    p = sub.add_parser("check", help="type-check a term or file")
    p.add_argument("arg")
    p.add_argument("--ctx", help='linear context, e.g. "x:A, y:A"')
    p.add_argument("--nonlinear", help='non-linear context, e.g. "z:C"')
    p.set_defaults(fn=cmd_check)

    p = sub.add_parser("normalize", help="reduce to normal form")
    p.add_argument("arg")
    p.add_argument("--ctx", help="linear context for the pre-check")
    p.add_argument("--trace", action="store_true")
    p.set_defaults(fn=cmd_normalize)

    p = sub.add_parser("equiv", help="compare normal forms of two terms")
    p.add_argument("arg1")
    p.add_argument("arg2")
    p.set_defaults(fn=cmd_equiv)

    p = sub.add_parser("encode", help="compile a matrix literal to a term")
    p.add_argument("matrix")
    p.add_argument("--domain")
    p.add_argument("--codomain")
    p.set_defaults(fn=cmd_encode)

    p = sub.add_parser("apply", help="apply a matrix to a vector via terms")
    p.add_argument("matrix")
    p.add_argument("vector")
    p.add_argument("--pow", type=int)
    p.add_argument("--domain")
    p.add_argument("--codomain")
    p.set_defaults(fn=cmd_apply)

    p = sub.add_parser("linearity", help="linearity sweep")
    p.add_argument("file", nargs="?")
    p.add_argument("--samples", type=int, default=200)
    p.set_defaults(fn=cmd_linearity)

    p = sub.add_parser("metatheory", help="randomised metatheory suites")
    p.add_argument("--suite", required=True, choices=sorted(SUITES))
    p.add_argument("--samples", type=int)
    p.set_defaults(fn=cmd_metatheory)
    return ap


def main(argv: list[str] | None = None) -> int:
    ap = build_parser()
    args = ap.parse_args(argv)
    cfg = Config(semiring=semiring_by_name(args.semiring),
                 max_steps=args.max_steps, seed=args.seed, mode=args.mode,
                 json_out=args.json)
    try:
        return args.fn(args, cfg)
    except ParseError as exc:
        _emit_error(cfg, args.command, "parse", exc)
        return EXIT_PARSE
    except StepLimitExceeded as exc:
        _emit_error(cfg, args.command, "step-limit", exc)
        return EXIT_STEPS
    except TypeError_ as exc:
        _emit_error(cfg, args.command, "type", exc)
        return EXIT_TYPE
    except LS2Error as exc:
        _emit_error(cfg, args.command, "error", exc)
        return EXIT_TYPE


def _emit_error(cfg: Config, command: str, kind: str, exc: Exception) -> None:
    if cfg.json_out:
        print(json.dumps({"command": command, "ok": False,
                          "failures": [{"kind": kind,
                                        "error": type(exc).__name__,
                                        "message": str(exc)}]}))
    else:
        print(f"{kind} error [{type(exc).__name__}]: {exc}", file=sys.stderr)


if __name__ == "__main__":
    raise SystemExit(main())

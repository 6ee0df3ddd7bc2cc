"""Pluggable exact-arithmetic scalar domains.

Every scalar belongs to one semiring; all arithmetic and equality is exact,
so floating-point reals are deliberately not offered (their equality is not
decidable enough for the normal-form comparisons downstream).
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from fractions import Fraction
from typing import Any, Callable

from .errors import MixedSemiring, ScalarSyntaxError


@dataclass(frozen=True, eq=False)
class SemiringSpec:
    """A commutative semiring with a text codec for its literals.

    ``eq``/``hash`` are identity: two specs are the same semiring only if
    they are the same object, which keeps Scalar comparison exact and cheap.
    """

    name: str
    zero: Any
    one: Any
    add: Callable[[Any, Any], Any]
    mul: Callable[[Any, Any], Any]
    parse: Callable[[str], Any]
    show: Callable[[Any], str]
    # literals needing parentheses when embedded in term syntax, e.g. (1/2).*
    composite: Callable[[Any], bool]

    def scalar(self, value) -> "Scalar":
        return Scalar(self, value)

    def parse_scalar(self, text: str) -> "Scalar":
        return Scalar(self, self.parse(text))

    def __repr__(self):
        return f"SemiringSpec({self.name})"


@dataclass(frozen=True)
class Scalar:
    """An element of one particular semiring."""

    semiring: SemiringSpec
    value: Any

    def __str__(self):
        return self.semiring.show(self.value)

    def is_composite(self) -> bool:
        return self.semiring.composite(self.value)


def _same(a: Scalar, b: Scalar) -> SemiringSpec:
    if a.semiring is not b.semiring:
        raise MixedSemiring(
            f"cannot mix scalars of {a.semiring.name} and {b.semiring.name}")
    return a.semiring


def scalar_add(a: Scalar, b: Scalar) -> Scalar:
    sr = _same(a, b)
    return Scalar(sr, sr.add(a.value, b.value))


def scalar_mul(a: Scalar, b: Scalar) -> Scalar:
    sr = _same(a, b)
    return Scalar(sr, sr.mul(a.value, b.value))


# -- the one-element semiring {*} -------------------------------------------

def _unit_parse(text: str):
    if text.strip() in ("u", "*", "⋆"):
        return "u"
    raise ScalarSyntaxError(f"not a unit scalar: {text!r}")


UNIT = SemiringSpec(
    name="unit",
    zero="u",
    one="u",
    add=lambda a, b: "u",
    mul=lambda a, b: "u",
    parse=_unit_parse,
    show=lambda v: "u",
    composite=lambda v: False,
)


# -- arbitrary-precision naturals -------------------------------------------

def _nat_parse(text: str) -> int:
    text = text.strip()
    if not text.isdigit():
        raise ScalarSyntaxError(f"not a natural number: {text!r}")
    return int(text)


NAT = SemiringSpec(
    name="nat",
    zero=0,
    one=1,
    add=lambda a, b: a + b,
    mul=lambda a, b: a * b,
    parse=_nat_parse,
    show=str,
    composite=lambda v: False,
)


# -- arbitrary-precision rationals -------------------------------------------

def _rat_parse(text: str) -> Fraction:
    try:
        return Fraction(text.strip())
    except (ValueError, ZeroDivisionError) as exc:
        raise ScalarSyntaxError(f"not a rational: {text!r}") from exc


RAT = SemiringSpec(
    name="rat",
    zero=Fraction(0),
    one=Fraction(1),
    add=lambda a, b: a + b,
    mul=lambda a, b: a * b,
    parse=_rat_parse,
    show=str,
    composite=lambda v: v < 0 or v.denominator != 1,
)


# -- complex numbers with rational parts --------------------------------------

@dataclass(frozen=True)
class GaussRational:
    re: Fraction
    im: Fraction


_RAT_RE = re.compile(r"[+-]?\d+(?:/\d+)?")


def _gauss_parse(text: str) -> GaussRational:
    text = text.strip().replace(" ", "")
    if not text:
        raise ScalarSyntaxError("empty gaussian-rational literal")
    if not text.endswith("i"):
        return GaussRational(_rat_parse(text), Fraction(0))
    body = text[:-1]
    # split before the last top-level sign; signs directly after '/' belong
    # to a denominator and never occur in these literals anyway
    split = -1
    for k in range(len(body) - 1, 0, -1):
        if body[k] in "+-" and body[k - 1] not in "+-/":
            split = k
            break
    if split > 0:
        re_part, im_part = body[:split], body[split:]
    else:
        re_part, im_part = "", body
    if im_part in ("", "+"):
        im = Fraction(1)
    elif im_part == "-":
        im = Fraction(-1)
    else:
        im = _rat_parse(im_part)
    re_val = _rat_parse(re_part) if re_part else Fraction(0)
    return GaussRational(re_val, im)


def _gauss_show(v: GaussRational) -> str:
    if v.im == 0:
        return str(v.re)
    if v.im == 1:
        im = "i"
    elif v.im == -1:
        im = "-i"
    else:
        im = f"{v.im}i"
    if v.re == 0:
        return im
    sign = "+" if v.im > 0 else ""
    return f"{v.re}{sign}{im}"


GAUSS = SemiringSpec(
    name="gauss",
    zero=GaussRational(Fraction(0), Fraction(0)),
    one=GaussRational(Fraction(1), Fraction(0)),
    add=lambda a, b: GaussRational(a.re + b.re, a.im + b.im),
    mul=lambda a, b: GaussRational(a.re * b.re - a.im * b.im,
                                   a.re * b.im + a.im * b.re),
    parse=_gauss_parse,
    show=_gauss_show,
    composite=lambda v: v.im != 0 or v.re < 0 or v.re.denominator != 1,
)


_BUILTIN = {sr.name: sr for sr in (UNIT, NAT, RAT, GAUSS)}


def builtin_semirings() -> list[SemiringSpec]:
    return list(_BUILTIN.values())


def semiring_by_name(name: str) -> SemiringSpec:
    try:
        return _BUILTIN[name.lower()]
    except KeyError:
        raise ScalarSyntaxError(
            f"unknown semiring {name!r}; choose from {sorted(_BUILTIN)}") from None

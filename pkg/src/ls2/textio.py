"""Concrete syntax: parser and printer for propositions, terms and files.

ASCII core with Unicode aliases accepted on input.  Propositions:

    X | 1 | A -o B | A * B | top | 0 | A & B | A (+) B | !A | forall X. A

with ``!`` tightest, then ``* & (+)`` (left associative, no mixing without
parentheses), then ``-o`` (right associative), then ``forall``.  Terms:

    x | t + u | s . t | s.* | d1(t; u) | \\x:A. t | t u | t * u
    | dx(t; x:A, y:B. u) | <> | <t, u> | d0[C](t) | da1(t; x:A. u)
    | da2(t; x:B. u) | inl[B](t) | inr[A](t) | dp(t; x:A. u; y:B. v)
    | !t | db(t; x:A. u) | /\\X. t | t [A]

``+`` binds loosest, then the scalar product ``.``, then ``*``, then
application.  Scalar literals are written bare when simple (``2``) and
parenthesised when composite (``(1/2)``, ``(2+3i)``).
"""

from __future__ import annotations

import re
from dataclasses import dataclass

from . import syntax as s
from .errors import ParseError, ScalarSyntaxError
from .semiring import RAT, Scalar, SemiringSpec


@dataclass(frozen=True)
class SourceSpan:
    start: int
    end: int
    line: int
    col: int

    def __str__(self):
        return f"{self.line}:{self.col}"


@dataclass(frozen=True)
class Token:
    kind: str
    text: str
    span: SourceSpan


_ALIASES = {
    "⊸": "-o",   # lolli
    "⊗": "*",    # tensor
    "⊕": "(+)",  # oplus
    "⊤": " top ",
    "λ": "\\",   # lambda
    "Λ": "/\\",  # capital lambda
    "∀": " forall ",
    "⟨": "<",
    "⟩": ">",
    "⋆": "*",    # star
    "⊞": "+",    # boxed plus
    "•": ".",    # bullet
}

_TOKEN_RE = re.compile(r"""
    (?P<ws>\s+)
  | (?P<comment>\#[^\n]*)
  | (?P<oplus>\(\+\))
  | (?P<tlam>/\\)
  | (?P<lolli>-o)
  | (?P<ident>[A-Za-z_][A-Za-z0-9_']*)
  | (?P<int>[0-9]+)
  | (?P<punct>[()\[\]<>,;.+*&!\\:=/-])
""", re.VERBOSE)

_PUNCT_KINDS = {
    "(": "LPAREN", ")": "RPAREN", "[": "LBRACK", "]": "RBRACK",
    "<": "LANGLE", ">": "RANGLE", ",": "COMMA", ";": "SEMI", ".": "DOT",
    "+": "PLUS", "*": "STAR", "&": "AMP", "!": "BANG", "\\": "LAM",
    ":": "COLON", "=": "EQ", "/": "SLASH", "-": "MINUS",
}

_KEYWORDS = {"top", "forall", "def", "defprop", "main"}
_RESERVED_HEADS = {"d1", "dx", "da1", "da2", "dp", "db", "d0", "inl", "inr"}


def tokenize(text: str) -> list[Token]:
    for uni, ascii_ in _ALIASES.items():
        text = text.replace(uni, ascii_)
    out: list[Token] = []
    pos, line, bol = 0, 1, 0
    while pos < len(text):
        m = _TOKEN_RE.match(text, pos)
        if not m:
            span = SourceSpan(pos, pos + 1, line, pos - bol + 1)
            raise ParseError(f"stray character {text[pos]!r}", span)
        kind = m.lastgroup
        tok_text = m.group()
        span = SourceSpan(m.start(), m.end(), line, m.start() - bol + 1)
        if kind in ("ws", "comment"):
            line += tok_text.count("\n")
            if "\n" in tok_text:
                bol = m.start() + tok_text.rindex("\n") + 1
        elif kind == "punct":
            out.append(Token(_PUNCT_KINDS[tok_text], tok_text, span))
        elif kind == "ident":
            k = tok_text.upper() if tok_text in _KEYWORDS else "IDENT"
            out.append(Token(k, tok_text, span))
        else:
            out.append(Token(kind.upper(), tok_text, span))
        pos = m.end()
    out.append(Token("EOF", "", SourceSpan(len(text), len(text), line,
                                           len(text) - bol + 1)))
    return out


class _Parser:
    def __init__(self, text: str, semiring: SemiringSpec):
        self.text = text
        self.semiring = semiring
        self.toks = tokenize(text)
        self.pos = 0
        self.tvars: list[str] = []   # innermost last
        self.vars: list[str] = []

    # -- token plumbing ---------------------------------------------------

    def peek(self, ahead: int = 0) -> Token:
        return self.toks[min(self.pos + ahead, len(self.toks) - 1)]

    def advance(self) -> Token:
        tok = self.toks[self.pos]
        if tok.kind != "EOF":
            self.pos += 1
        return tok

    def expect(self, kind: str, what: str | None = None) -> Token:
        tok = self.peek()
        if tok.kind != kind:
            raise ParseError(
                f"unexpected {tok.text!r}" if tok.text else "unexpected end",
                tok.span, expected=(what or kind,))
        return self.advance()

    def _matching_rparen(self, start: int) -> int | None:
        depth = 0
        for i in range(start, len(self.toks)):
            k = self.toks[i].kind
            if k == "LPAREN":
                depth += 1
            elif k == "RPAREN":
                depth -= 1
                if depth == 0:
                    return i
            elif k == "EOF":
                return None
        return None

    # -- propositions ------------------------------------------------------

    def prop(self) -> s.Prop:
        if self.peek().kind == "FORALL":
            self.advance()
            name = self.expect("IDENT", "type variable").text
            self.expect("DOT")
            self.tvars.append(name)
            try:
                body = self.prop()
            finally:
                self.tvars.pop()
            return s.Forall(name, body)
        return self.prop_lolli()

    def prop_lolli(self) -> s.Prop:
        left = self.prop_bin()
        if self.peek().kind == "LOLLI":
            self.advance()
            return s.Lolli(left, self.prop())
        return left

    def prop_bin(self) -> s.Prop:
        left = self.prop_unary()
        op = self.peek().kind
        if op not in ("STAR", "AMP", "OPLUS"):
            return left
        ctor = {"STAR": s.Tensor, "AMP": s.With, "OPLUS": s.Plus}[op]
        while self.peek().kind == op:
            self.advance()
            left = ctor(left, self.prop_unary())
        nxt = self.peek()
        if nxt.kind in ("STAR", "AMP", "OPLUS"):
            raise ParseError(
                "mixing *, & and (+) needs parentheses", nxt.span)
        return left

    def prop_unary(self) -> s.Prop:
        if self.peek().kind == "BANG":
            self.advance()
            return s.Bang(self.prop_unary())
        return self.prop_atom()

    def prop_atom(self) -> s.Prop:
        tok = self.peek()
        if tok.kind == "INT":
            self.advance()
            if tok.text == "1":
                return s.One()
            if tok.text == "0":
                return s.Zero()
            raise ParseError("the only numeric propositions are 0 and 1",
                             tok.span)
        if tok.kind == "TOP":
            self.advance()
            return s.Top()
        if tok.kind == "IDENT":
            self.advance()
            if not tok.text[0].isupper():
                raise ParseError(
                    f"type variables are capitalised; {tok.text!r} is not",
                    tok.span)
            for depth, name in enumerate(reversed(self.tvars)):
                if name == tok.text:
                    return s.PBound(depth)
            return s.PVar(tok.text)
        if tok.kind == "FORALL":
            return self.prop()
        if tok.kind == "LPAREN":
            self.advance()
            inner = self.prop()
            self.expect("RPAREN")
            return inner
        raise ParseError(f"expected a proposition, found {tok.text!r}",
                         tok.span, expected=("proposition",))

    # -- scalars ------------------------------------------------------------

    def _scalar_ahead(self) -> bool:
        """A scalar product `s . t` starts here (a star literal `s.*` does
        not count; those are atoms and may head tensor/application chains)."""
        tok = self.peek()
        if tok.kind in ("INT", "IDENT") and tok.text not in _RESERVED_HEADS:
            dot_at = self.pos + 1
        elif tok.kind == "LPAREN":
            close = self._matching_rparen(self.pos)
            if close is None:
                return False
            dot_at = close + 1
        else:
            return False
        return (self.toks[dot_at].kind == "DOT"
                and self.toks[min(dot_at + 1, len(self.toks) - 1)].kind
                != "STAR")

    def scalar_lit(self) -> Scalar:
        tok = self.peek()
        if tok.kind in ("INT", "IDENT"):
            self.advance()
            text = tok.text
        elif tok.kind == "LPAREN":
            open_tok = self.advance()
            close = self._matching_rparen(self.pos - 1)
            assert close is not None
            text = self.text[open_tok.span.end:self.toks[close].span.start]
            self.pos = close + 1
        else:
            raise ParseError("expected a scalar literal", tok.span)
        try:
            return self.semiring.parse_scalar(text)
        except ScalarSyntaxError as exc:
            raise ParseError(str(exc), tok.span) from None

    # -- terms ---------------------------------------------------------------

    def term(self) -> s.Term:
        left = self.term_sprod()
        while self.peek().kind == "PLUS":
            self.advance()
            left = s.Sum(left, self.term_sprod())
        return left

    def term_sprod(self) -> s.Term:
        if self._scalar_ahead():
            scalar = self.scalar_lit()
            self.expect("DOT")
            return s.Prod(scalar, self.term_sprod())
        return self.term_tensor()

    def term_tensor(self) -> s.Term:
        left = self.term_app()
        while self.peek().kind == "STAR":
            self.advance()
            left = s.TensorI(left, self.term_app())
        return left

    _ATOM_START = ("IDENT", "INT", "LPAREN", "LANGLE", "BANG", "LAM", "TLAM")

    def term_app(self) -> s.Term:
        t = self.term_prefix()
        while True:
            nxt = self.peek()
            if nxt.kind == "LBRACK":
                self.advance()
                ann = self.prop()
                self.expect("RBRACK")
                t = s.TApp(t, ann)
            elif nxt.kind in self._ATOM_START:
                t = s.App(t, self.term_prefix())
            else:
                return t

    def term_prefix(self) -> s.Term:
        tok = self.peek()
        if tok.kind == "BANG":
            self.advance()
            return s.BangI(self.term_prefix())
        if tok.kind == "LAM":
            self.advance()
            name = self.expect("IDENT", "variable").text
            self.expect("COLON")
            ann = self.prop()
            self.expect("DOT")
            body = self._under(name, self.term)
            return s.Lam(name, ann, body)
        if tok.kind == "TLAM":
            self.advance()
            name = self.expect("IDENT", "type variable").text
            self.expect("DOT")
            self.tvars.append(name)
            try:
                body = self.term()
            finally:
                self.tvars.pop()
            return s.TLam(name, body)
        return self.term_atom()

    def _under(self, name: str, parse) -> s.Term:
        """Parse with one more bound term variable in scope and return the
        de Bruijn body."""
        self.vars.append(name)
        try:
            body = parse()
        finally:
            self.vars.pop()
        return body

    def _var(self, name: str, span: SourceSpan) -> s.Term:
        for depth, bound in enumerate(reversed(self.vars)):
            if bound == name:
                return s.BVar(depth)
        return s.Var(name)

    def _binder(self) -> tuple[str, s.Prop]:
        name = self.expect("IDENT", "variable").text
        self.expect("COLON")
        return name, self.prop()

    def term_atom(self) -> s.Term:
        tok = self.peek()
        if tok.kind == "INT" or (
                tok.kind == "IDENT" and tok.text not in _RESERVED_HEADS
                and self.peek(1).kind == "DOT" and self.peek(2).kind == "STAR"):
            scalar = self.scalar_lit()
            self.expect("DOT")
            self.expect("STAR", "'*' after the scalar of a star literal")
            return s.Star(scalar)
        if tok.kind == "IDENT" and tok.text in _RESERVED_HEADS:
            return self.term_delimited(tok.text)
        if tok.kind == "IDENT":
            self.advance()
            return self._var(tok.text, tok.span)
        if tok.kind == "LPAREN":
            close = self._matching_rparen(self.pos)
            if close is not None and self.toks[close + 1].kind == "DOT" \
                    and self.toks[close + 2].kind == "STAR":
                scalar = self.scalar_lit()
                self.expect("DOT")
                self.expect("STAR")
                return s.Star(scalar)
            self.advance()
            inner = self.term()
            self.expect("RPAREN")
            return inner
        if tok.kind == "LANGLE":
            self.advance()
            if self.peek().kind == "RANGLE":
                self.advance()
                return s.Unit()
            left = self.term()
            self.expect("COMMA")
            right = self.term()
            self.expect("RANGLE")
            return s.Pair(left, right)
        raise ParseError(f"expected a term, found {tok.text or 'end'!r}",
                         tok.span, expected=("term",))

    def term_delimited(self, head: str) -> s.Term:
        tok = self.advance()
        if head == "d0":
            self.expect("LBRACK")
            ann = self.prop()
            self.expect("RBRACK")
            self.expect("LPAREN")
            arg = self.term()
            self.expect("RPAREN")
            return s.ElimZero(ann, arg)
        if head in ("inl", "inr"):
            self.expect("LBRACK")
            ann = self.prop()
            self.expect("RBRACK")
            self.expect("LPAREN")
            body = self.term()
            self.expect("RPAREN")
            return (s.Inl if head == "inl" else s.Inr)(body, ann)
        self.expect("LPAREN")
        arg = self.term()
        self.expect("SEMI")
        if head == "d1":
            body = self.term()
            self.expect("RPAREN")
            return s.ElimOne(arg, body)
        if head == "dx":
            xname, xann = self._binder()
            self.expect("COMMA")
            yname, yann = self._binder()
            self.expect("DOT")
            self.vars.extend((xname, yname))
            try:
                body = self.term()
            finally:
                del self.vars[-2:]
            self.expect("RPAREN")
            return s.ElimTensor(arg, xname, xann, yname, yann, body)
        if head in ("da1", "da2"):
            name, ann = self._binder()
            self.expect("DOT")
            body = self._under(name, self.term)
            self.expect("RPAREN")
            ctor = s.ElimWith1 if head == "da1" else s.ElimWith2
            return ctor(arg, name, ann, body)
        if head == "dp":
            xname, xann = self._binder()
            self.expect("DOT")
            left = self._under(xname, self.term)
            self.expect("SEMI")
            yname, yann = self._binder()
            self.expect("DOT")
            right = self._under(yname, self.term)
            self.expect("RPAREN")
            return s.ElimPlus(arg, xname, xann, left, yname, yann, right)
        if head == "db":
            name, ann = self._binder()
            self.expect("DOT")
            body = self._under(name, self.term)
            self.expect("RPAREN")
            return s.ElimBang(arg, name, ann, body)
        raise ParseError(f"unknown form {head!r}", tok.span)

    def finish(self, what):
        tok = self.peek()
        if tok.kind != "EOF":
            raise ParseError(f"trailing input after {what}: {tok.text!r}",
                             tok.span)


def parse_prop(text: str, semiring: SemiringSpec = RAT) -> s.Prop:
    p = _Parser(text, semiring)
    out = p.prop()
    p.finish("proposition")
    return out


def parse_term(text: str, semiring: SemiringSpec = RAT) -> s.Term:
    p = _Parser(text, semiring)
    out = p.term()
    p.finish("term")
    return out


# ---------------------------------------------------------------------------
# printing
# ---------------------------------------------------------------------------

_P_FORALL, _P_LOLLI, _P_BIN, _P_BANG = 0, 1, 2, 3


def _print_prop(p: s.Prop, env: list[str], level: int) -> str:
    def wrap(text, mine):
        return f"({text})" if mine < level else text

    if isinstance(p, s.PVar):
        return p.name
    if isinstance(p, s.PBound):
        if p.index < len(env):
            return env[-1 - p.index]
        return f"?T{p.index - len(env)}"
    if isinstance(p, s.One):
        return "1"
    if isinstance(p, s.Zero):
        return "0"
    if isinstance(p, s.Top):
        return "top"
    if isinstance(p, s.Forall):
        name = s.fresh_name(p.hint or "X", _prop_names(p.body, env))
        env.append(name)
        try:
            body = _print_prop(p.body, env, _P_FORALL)
        finally:
            env.pop()
        return wrap(f"forall {name}. {body}", _P_FORALL)
    if isinstance(p, s.Lolli):
        left = _print_prop(p.left, env, _P_BANG)
        right = _print_prop(p.right, env, _P_FORALL)
        if isinstance(p.right, (s.Tensor, s.With, s.Plus)):
            right = f"({right})"
        return wrap(f"{left} -o {right}", _P_LOLLI)
    if isinstance(p, (s.Tensor, s.With, s.Plus)):
        op = {s.Tensor: "*", s.With: "&", s.Plus: "(+)"}[type(p)]
        # flatten only the same connective on the left; a different binary
        # connective there drops to the bang level and gets parenthesised,
        # since mixing is not allowed bare
        left = _print_prop(p.left, env,
                           _P_BIN if isinstance(p.left, type(p)) else _P_BANG)
        right = _print_prop(p.right, env, _P_BANG)
        return wrap(f"{left} {op} {right}", _P_BIN)
    if isinstance(p, s.Bang):
        return f"!{_print_prop(p.body, env, _P_BANG + 1)}"
    raise TypeError(f"not a proposition: {p!r}")


def _prop_names(p: s.Prop, env: list[str]) -> set[str]:
    return set(env) | s.ftv_prop(p)


def print_prop(p: s.Prop) -> str:
    return _print_prop(p, [], _P_FORALL)


_T_SUM, _T_SPROD, _T_TENSOR, _T_APP, _T_ATOM = 0, 1, 2, 3, 4


class _Printer:
    def __init__(self, avoid: set[str]):
        self.avoid = avoid
        self.tenv: list[str] = []
        self.penv: list[str] = []

    def scalar(self, sc: Scalar) -> str:
        text = str(sc)
        return f"({text})" if sc.is_composite() else text

    def prop(self, p: s.Prop) -> str:
        return _print_prop(p, self.penv, _P_FORALL)

    def _push(self, hint: str) -> str:
        name = s.fresh_name(hint or "x", self.avoid | set(self.tenv))
        self.tenv.append(name)
        return name

    def _push_t(self, hint: str) -> str:
        name = s.fresh_name(hint or "X", self.avoid | set(self.penv))
        self.penv.append(name)
        return name

    def term(self, t: s.Term, level: int, tail: bool) -> str:
        def wrap(text, mine):
            return f"({text})" if mine < level else text

        if isinstance(t, s.Var):
            return t.name
        if isinstance(t, s.BVar):
            if t.index < len(self.tenv):
                return self.tenv[-1 - t.index]
            return f"?v{t.index - len(self.tenv)}"
        if isinstance(t, s.Star):
            return f"{self.scalar(t.scalar)}.*"
        if isinstance(t, s.Unit):
            return "<>"
        if isinstance(t, s.Sum):
            left = self.term(t.left, _T_SUM, False)
            right = self.term(t.right, _T_SPROD, tail)
            return wrap(f"{left} + {right}", _T_SUM)
        if isinstance(t, s.Prod):
            body = self.term(t.body, _T_SPROD, tail)
            return wrap(f"{self.scalar(t.scalar)} . {body}", _T_SPROD)
        if isinstance(t, s.TensorI):
            left = self.term(
                t.left, _T_TENSOR if isinstance(t.left, s.TensorI) else _T_APP,
                False)
            right = self.term(t.right, _T_APP, tail)
            return wrap(f"{left} * {right}", _T_TENSOR)
        if isinstance(t, s.App):
            fn = self.term(t.fn, _T_APP, False)
            arg = self.term(t.arg, _T_ATOM, tail)
            return wrap(f"{fn} {arg}", _T_APP)
        if isinstance(t, s.TApp):
            fn = self.term(t.fn, _T_APP, False)
            return wrap(f"{fn} [{self.prop(t.ann)}]", _T_APP)
        if isinstance(t, s.BangI):
            return f"!{self.term(t.body, _T_ATOM, tail)}"
        if isinstance(t, s.Lam):
            name = self._push(t.hint)
            try:
                body = self.term(t.body, _T_SUM, True)
                text = f"\\{name}:{self.prop(t.ann)}. {body}"
            finally:
                self.tenv.pop()
            return text if tail and level < _T_ATOM else f"({text})"
        if isinstance(t, s.TLam):
            name = self._push_t(t.hint)
            try:
                body = self.term(t.body, _T_SUM, True)
                text = f"/\\{name}. {body}"
            finally:
                self.penv.pop()
            return text if tail and level < _T_ATOM else f"({text})"
        if isinstance(t, s.Pair):
            left = self.term(t.left, _T_SUM, True)
            right = self.term(t.right, _T_SUM, True)
            return f"<{left}, {right}>"
        if isinstance(t, s.ElimOne):
            return (f"d1({self.term(t.arg, _T_SUM, True)}; "
                    f"{self.term(t.body, _T_SUM, True)})")
        if isinstance(t, s.ElimZero):
            return (f"d0[{self.prop(t.ann)}]"
                    f"({self.term(t.arg, _T_SUM, True)})")
        if isinstance(t, s.Inl):
            return (f"inl[{self.prop(t.ann)}]"
                    f"({self.term(t.body, _T_SUM, True)})")
        if isinstance(t, s.Inr):
            return (f"inr[{self.prop(t.ann)}]"
                    f"({self.term(t.body, _T_SUM, True)})")
        if isinstance(t, s.ElimTensor):
            arg = self.term(t.arg, _T_SUM, True)
            xname = self._push(t.hint_x)
            yname = self._push(t.hint_y)
            try:
                body = self.term(t.body, _T_SUM, True)
            finally:
                del self.tenv[-2:]
            return (f"dx({arg}; {xname}:{self.prop(t.ann_x)}, "
                    f"{yname}:{self.prop(t.ann_y)}. {body})")
        if isinstance(t, (s.ElimWith1, s.ElimWith2)):
            head = "da1" if isinstance(t, s.ElimWith1) else "da2"
            arg = self.term(t.arg, _T_SUM, True)
            name = self._push(t.hint)
            try:
                body = self.term(t.body, _T_SUM, True)
            finally:
                self.tenv.pop()
            return f"{head}({arg}; {name}:{self.prop(t.ann)}. {body})"
        if isinstance(t, s.ElimPlus):
            arg = self.term(t.arg, _T_SUM, True)
            xname = self._push(t.hint_x)
            try:
                left = self.term(t.left, _T_SUM, True)
            finally:
                self.tenv.pop()
            yname = self._push(t.hint_y)
            try:
                right = self.term(t.right, _T_SUM, True)
            finally:
                self.tenv.pop()
            return (f"dp({arg}; {xname}:{self.prop(t.ann_x)}. {left}; "
                    f"{yname}:{self.prop(t.ann_y)}. {right})")
        if isinstance(t, s.ElimBang):
            arg = self.term(t.arg, _T_SUM, True)
            name = self._push(t.hint)
            try:
                body = self.term(t.body, _T_SUM, True)
            finally:
                self.tenv.pop()
            return f"db({arg}; {name}:{self.prop(t.ann)}. {body})"
        raise TypeError(f"not a term: {t!r}")


def print_term(t: s.Term) -> str:
    return _Printer(set(s.fv_term(t)) | set(s.ftv_term(t))).term(
        t, _T_SUM, True)


# ---------------------------------------------------------------------------
# .ls2 files
# ---------------------------------------------------------------------------


@dataclass
class SourceFile:
    term_defs: dict[str, s.Term]
    prop_defs: dict[str, s.Prop]
    main: s.Term | None

    def main_or_last(self) -> s.Term:
        if self.main is not None:
            return self.main
        if self.term_defs:
            return self.term_defs[next(reversed(self.term_defs))]
        raise ParseError("the file defines no term")


def parse_file(text: str, semiring: SemiringSpec = RAT) -> SourceFile:
    p = _Parser(text, semiring)
    term_defs: dict[str, s.Term] = {}
    prop_defs: dict[str, s.Prop] = {}
    main: s.Term | None = None

    def expand_term(t: s.Term) -> s.Term:
        for name, prop in prop_defs.items():
            t = s.subst_prop_in_term(t, name, prop)
        for name, body in term_defs.items():
            t = s.subst_term(t, name, body)
        return t

    def expand_prop(q: s.Prop) -> s.Prop:
        for name, prop in prop_defs.items():
            q = s.prop_subst(q, name, prop)
        return q

    while p.peek().kind != "EOF":
        tok = p.peek()
        if tok.kind == "DEFPROP":
            p.advance()
            name = p.expect("IDENT", "proposition name").text
            if not name[0].isupper():
                raise ParseError("defprop names are capitalised", tok.span)
            p.expect("EQ")
            prop_defs[name] = expand_prop(p.prop())
        elif tok.kind == "DEF":
            p.advance()
            name = p.expect("IDENT", "definition name").text
            p.expect("EQ")
            term_defs[name] = expand_term(p.term())
        elif tok.kind == "MAIN":
            p.advance()
            p.expect("EQ")
            if main is not None:
                raise ParseError("duplicate main", tok.span)
            main = expand_term(p.term())
        else:
            raise ParseError(
                f"expected def, defprop or main, found {tok.text!r}",
                tok.span)
    return SourceFile(term_defs, prop_defs, main)

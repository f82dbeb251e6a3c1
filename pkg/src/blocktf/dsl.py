"""Text format for block diagrams (``.bdg``) and signal literals.

Block diagrams::

    expr   := tf | "ser" "[" list "]" | "summ" "[" list "]"
            | "pick" "(" expr ")" "[" list "]" | "fb" "(" expr "," expr ")"
    list   := expr ("," expr)*
    tf     := "tf" "(" coeffs ";" coeffs ")"
    coeffs := rational ("," rational)*
    rational := ["-"] (decimal | int "/" int)

Coefficients are ascending in ``s``: ``tf(1;2,1)`` is ``1/(s^2+2s+1)``.
Decimals are read exactly (``0.05`` is ``1/20``).  Whitespace is free and
``#`` starts a comment that runs to the end of the line.

Signals::

    sum    := ["+"|"-"] term (("+"|"-") term)*
    term   := factor ("*" factor)*
    factor := number ["/" number] | "step" | "t" ["^" int]
            | "exp" "(" rational ")" | "sin" "(" rational ")"
            | "cos" "(" rational ")" | "delay" "(" rational "," sum ")"
            | "(" sum ")"

e.g. ``3*step + 2*exp(-2)``, ``t^2*exp(-1/2)*sin(3)``, ``delay(1/2, step)``.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from fractions import Fraction

from . import laplace as lt
from .blockdiag import Feedback, Leaf, Pickoff, Series, Summation
from .errors import BlockTFError, ParseError
from .ratfunc import Poly, RatFunc, format_rational

__all__ = [
    "SourceSpan",
    "parse",
    "print_expr",
    "parse_signal",
    "print_signal",
    "parse_ratfunc",
    "parse_coeffs",
]


@dataclass(frozen=True)
class SourceSpan:
    line: int
    column: int
    length: int

    def __str__(self):
        return f"line {self.line} col {self.column}"


@dataclass(frozen=True)
class _Token:
    kind: str  # "number", "ident", "punct", "eof"
    text: str
    span: SourceSpan


_TOKEN_RE = re.compile(r"""
    (?P<ws>\s+)
  | (?P<comment>\#[^\n]*)
  | (?P<number>\d+(?:\.\d+)?|\.\d+)
  | (?P<ident>[A-Za-z_][A-Za-z_0-9]*)
  | (?P<punct>[\[\](),;/\-+*^])
""", re.VERBOSE)


def _tokenize(text: str) -> list:
    line_starts = [0] + [m.end() for m in re.finditer("\n", text)]

    def span_at(pos, length):
        line = 0
        lo, hi = 0, len(line_starts) - 1
        while lo <= hi:
            mid = (lo + hi) // 2
            if line_starts[mid] <= pos:
                line, lo = mid, mid + 1
            else:
                hi = mid - 1
        return SourceSpan(line + 1, pos - line_starts[line] + 1, length)

    tokens = []
    pos = 0
    while pos < len(text):
        m = _TOKEN_RE.match(text, pos)
        if m is None:
            raise ParseError(f"unexpected character {text[pos]!r}", span_at(pos, 1))
        kind = m.lastgroup
        if kind not in ("ws", "comment"):
            tokens.append(_Token(kind, m.group(), span_at(pos, m.end() - pos)))
        pos = m.end()
    tokens.append(_Token("eof", "", span_at(len(text), 0)))
    return tokens


def _describe(tok: _Token) -> str:
    return "end of input" if tok.kind == "eof" else repr(tok.text)


class _Parser:
    def __init__(self, text):
        self.tokens = _tokenize(text)
        self.i = 0

    @property
    def tok(self) -> _Token:
        return self.tokens[self.i]

    def advance(self) -> _Token:
        tok = self.tokens[self.i]
        if tok.kind != "eof":
            self.i += 1
        return tok

    def fail(self, expected, tok=None):
        tok = tok or self.tok
        raise ParseError(f"expected {expected}, found {_describe(tok)}", tok.span)

    def at(self, text) -> bool:
        return self.tok.kind in ("punct", "ident") and self.tok.text == text

    def expect(self, text) -> _Token:
        if not self.at(text):
            self.fail(repr(text))
        return self.advance()

    def finish(self):
        if self.tok.kind != "eof":
            self.fail("end of input")

    # -- numbers ---------------------------------------------------------

    def unsigned_rational(self) -> Fraction:
        tok = self.tok
        if tok.kind != "number":
            self.fail("a number")
        self.advance()
        value = Fraction(tok.text)
        if self.at("/"):
            slash = self.advance()
            den_tok = self.tok
            if den_tok.kind != "number" or "." in den_tok.text or "." in tok.text:
                raise ParseError("a fraction must be int '/' int", slash.span)
            self.advance()
            den = int(den_tok.text)
            if den == 0:
                raise ParseError("zero denominator in fraction", den_tok.span)
            value = Fraction(int(tok.text), den)
        return value

    def rational(self) -> Fraction:
        if self.at("-"):
            self.advance()
            return -self.unsigned_rational()
        return self.unsigned_rational()

    def coeffs(self) -> list:
        out = [self.rational()]
        while self.at(","):
            self.advance()
            out.append(self.rational())
        return out

    # -- block expressions -------------------------------------------------

    def expr_list(self) -> list:
        out = [self.expr()]
        while self.at(","):
            self.advance()
            out.append(self.expr())
        return out

    def expr(self):
        tok = self.tok
        if tok.kind != "ident":
            self.fail("an expression ('tf', 'ser', 'summ', 'pick' or 'fb')")
        name = tok.text
        if name == "tf":
            self.advance()
            self.expect("(")
            num = self.coeffs()
            self.expect(";")
            den = self.coeffs()
            self.expect(")")
            den_poly = Poly(den)
            if den_poly.is_zero():
                raise ParseError("transfer function with zero denominator", tok.span)
            return Leaf(RatFunc(Poly(num), den_poly))
        if name in ("ser", "summ"):
            self.advance()
            self.expect("[")
            children = self.expr_list()
            self.expect("]")
            return Series(tuple(children)) if name == "ser" else Summation(tuple(children))
        if name == "pick":
            self.advance()
            self.expect("(")
            alpha = self.expr()
            self.expect(")")
            self.expect("[")
            children = self.expr_list()
            self.expect("]")
            return Pickoff(alpha, tuple(children))
        if name == "fb":
            self.advance()
            self.expect("(")
            fwd = self.expr()
            self.expect(",")
            back = self.expr()
            self.expect(")")
            return Feedback(fwd, back)
        self.fail("an expression ('tf', 'ser', 'summ', 'pick' or 'fb')")

    # -- signals -----------------------------------------------------------

    def signal_sum(self):
        negate = False
        if self.at("-") or self.at("+"):
            negate = self.advance().text == "-"
        total = self.signal_term()
        if negate:
            total = -total
        while self.at("+") or self.at("-"):
            op = self.advance().text
            term = self.signal_term()
            total = total + term if op == "+" else total - term
        return total

    def signal_term(self):
        out = self.signal_factor()
        while self.at("*"):
            star = self.advance()
            rhs = self.signal_factor()
            try:
                out = out * rhs
            except BlockTFError as exc:
                raise ParseError(str(exc), star.span) from None
        return out

    def signal_factor(self):
        tok = self.tok
        if tok.kind == "number":
            return lt.constant(self.unsigned_rational())
        if self.at("("):
            self.advance()
            inner = self.signal_sum()
            self.expect(")")
            return inner
        if tok.kind != "ident":
            self.fail("a signal factor")
        name = tok.text
        self.advance()
        if name == "step":
            return lt.step()
        if name == "t":
            if self.at("^"):
                self.advance()
                n_tok = self.tok
                if n_tok.kind != "number" or "." in n_tok.text:
                    self.fail("an integer power")
                self.advance()
                return lt.tpow(int(n_tok.text))
            return lt.tpow(1)
        if name in ("exp", "sin", "cos"):
            self.expect("(")
            value = self.rational()
            self.expect(")")
            return {"exp": lt.exp, "sin": lt.sin, "cos": lt.cos}[name](value)
        if name == "delay":
            self.expect("(")
            T_tok = self.tok
            T = self.rational()
            if T < 0:
                raise ParseError("delay must be non-negative", T_tok.span)
            self.expect(",")
            inner = self.signal_sum()
            self.expect(")")
            return lt.delay(T, inner)
        self.fail("a signal factor ('step', 't', 'exp', 'sin', 'cos', 'delay')", tok)


def _guarded(rule, text):
    p = _Parser(text)
    try:
        result = rule(p)
    except RecursionError:
        raise ParseError("expression nested too deeply", p.tok.span) from None
    p.finish()
    return result


def parse(text: str):
    """Parse one block-diagram expression."""
    return _guarded(_Parser.expr, text)


def parse_signal(text: str):
    return _guarded(_Parser.signal_sum, text)


def parse_ratfunc(text: str) -> RatFunc:
    """Accepts ``tf(num; den)`` or the bare ``num; den`` form."""
    p = _Parser(text)
    if p.at("tf"):
        e = p.expr()
        p.finish()
        return e.tf
    num = p.coeffs()
    p.expect(";")
    den_tok = p.tok
    den = Poly(p.coeffs())
    p.finish()
    if den.is_zero():
        raise ParseError("transfer function with zero denominator", den_tok.span)
    return RatFunc(Poly(num), den)


def parse_coeffs(text: str) -> list:
    p = _Parser(text)
    out = p.coeffs()
    p.finish()
    return out


def _coeff_text(poly: Poly) -> str:
    return ",".join(map(format_rational, poly.coeffs or (Fraction(0),)))


def print_expr(e) -> str:
    """Canonical text; ``parse(print_expr(e)) == e``."""
    if isinstance(e, Leaf):
        return f"tf({_coeff_text(e.tf.num)};{_coeff_text(e.tf.den)})"
    if isinstance(e, Series):
        return "ser[" + ",".join(map(print_expr, e.children)) + "]"
    if isinstance(e, Summation):
        return "summ[" + ",".join(map(print_expr, e.children)) + "]"
    if isinstance(e, Pickoff):
        return (f"pick({print_expr(e.alpha)})["
                + ",".join(map(print_expr, e.children)) + "]")
    if isinstance(e, Feedback):
        return f"fb({print_expr(e.forward)},{print_expr(e.back)})"
    raise TypeError(f"not a block expression: {e!r}")


def _atom_body(a) -> str:
    parts = []
    if a.power:
        parts.append("t" if a.power == 1 else f"t^{a.power}")
    if a.rate:
        parts.append(f"exp({format_rational(a.rate)})")
    if a.osc != lt.NONE:
        parts.append(f"{a.osc}({format_rational(a.omega)})")
    return "*".join(parts) or "step"


def print_signal(g) -> str:
    if not g.atoms:
        return "0"
    out = []
    for a in g.atoms:
        body = _atom_body(a)
        if a.delay:
            body = f"delay({format_rational(a.delay)}, {body})"
        mag = abs(a.coeff)
        text = body if mag == 1 else f"{format_rational(mag)}*{body}"
        if not out:
            out.append(text if a.coeff > 0 else f"-{text}")
        else:
            out.append(f" + {text}" if a.coeff > 0 else f" - {text}")
    return "".join(out)

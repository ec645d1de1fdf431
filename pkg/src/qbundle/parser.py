"""Recursive-descent parser for algebra expressions.

Grammar (whitespace is insignificant)::

    expr    := ['+'|'-'] term (('+'|'-') term)*
    term    := power (('*' | '/') power)*
    power   := atom postfix*
    postfix := '^' ['-'] INT | '^*' | '*'      (a bare '*' not followed by an operand)
    atom    := INT | 'q' | IDENT | '(' expr ')' | 'star' '(' expr ')'
             | '[' expr (',' expr)* ']'        (pure tensor; legs as configured)

Juxtaposition is never multiplication.  ``*`` is the binary product unless
the next token cannot start an operand, in which case it is the postfix
involution: ``alpha* * gamma`` and ``alpha^* * gamma`` both denote the
product of alpha-star and gamma, while ``alpha*gamma`` is the product of
alpha and gamma.
"""
from __future__ import annotations

import re
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from .laurent import Q, QLaurent
from .ncpoly import Element, Presentation


class ParseError(ValueError):
    def __init__(self, message: str, text: str = "", pos: int = 0):
        self.message = message
        self.text = text
        self.pos = pos
        where = f" at position {pos}" if text else ""
        super().__init__(f"{message}{where}" + (f": {text!r}" if text else ""))


class UnknownGenerator(ParseError):
    pass


_TOKEN = re.compile(r"\s*(?:(\d+)|([A-Za-z_][A-Za-z_0-9]*)|(\^\*)|(.))")


@dataclass
class Token:
    kind: str  # INT, IDENT, OP, END
    value: str
    pos: int


def tokenize(text: str) -> list[Token]:
    tokens = []
    pos = 0
    n = len(text)
    while pos < n:
        m = _TOKEN.match(text, pos)
        if m is None or m.end() == pos:
            break
        if m.group(1) is not None:
            tokens.append(Token("INT", m.group(1), m.start(1)))
        elif m.group(2) is not None:
            tokens.append(Token("IDENT", m.group(2), m.start(2)))
        elif m.group(3) is not None:
            tokens.append(Token("OP", "^*", m.start(3)))
        elif m.group(4) is not None:
            ch = m.group(4)
            if ch not in "+-*/^()[],":
                raise ParseError(f"unexpected character {ch!r}", text, m.start(4))
            tokens.append(Token("OP", ch, m.start(4)))
        pos = m.end()
    tokens.append(Token("END", "", len(text)))
    return tokens


class _Parser:
    def __init__(self, text: str, p: Presentation | None, legs: Sequence[Presentation] | None):
        self.text = text
        self.p = p
        self.legs = tuple(legs) if legs else None
        self.tokens = tokenize(text)
        self.i = 0

    # -- helpers -------------------------------------------------------

    @property
    def tok(self) -> Token:
        return self.tokens[self.i]

    def peek(self, k: int = 1) -> Token:
        return self.tokens[min(self.i + k, len(self.tokens) - 1)]

    def error(self, msg: str, tok: Token | None = None):
        tok = tok or self.tok
        raise ParseError(msg, self.text, tok.pos)

    def expect(self, value: str) -> Token:
        if self.tok.kind != "OP" or self.tok.value != value:
            self.error(f"expected {value!r}")
        t = self.tok
        self.i += 1
        return t

    def at(self, value: str) -> bool:
        return self.tok.kind == "OP" and self.tok.value == value

    @staticmethod
    def starts_operand(tok: Token) -> bool:
        return tok.kind in ("INT", "IDENT") or (tok.kind == "OP" and tok.value in "([")

    # -- values --------------------------------------------------------

    def scalar(self, c):
        if self.p is not None:
            return self.p.scalar(c)
        return QLaurent.coerce(c)

    # -- grammar -------------------------------------------------------

    def parse(self):
        value = self.expr()
        if self.tok.kind != "END":
            self.error("unexpected trailing input")
        return value

    def expr(self):
        sign = 1
        if self.at("-") or self.at("+"):
            sign = -1 if self.tok.value == "-" else 1
            self.i += 1
        value = self.term()
        if sign < 0:
            value = -value
        while self.at("+") or self.at("-"):
            op = self.tok.value
            self.i += 1
            rhs = self.term()
            value = _combine(self, value, rhs, op)
        return value

    def term(self):
        value = self.power()
        while self.at("*") or self.at("/"):
            op_tok = self.tok
            self.i += 1
            rhs = self.power()
            if op_tok.value == "*":
                value = _combine(self, value, rhs, "*")
            else:
                value = _divide(self, value, rhs, op_tok)
        return value

    def power(self):
        value = self.atom()
        while True:
            if self.at("^*"):
                self.i += 1
                value = _star(self, value)
            elif self.at("*") and not self.starts_operand(self.peek()):
                self.i += 1
                value = _star(self, value)
            elif self.at("^"):
                self.i += 1
                neg = False
                if self.at("-"):
                    neg = True
                    self.i += 1
                if self.tok.kind != "INT":
                    self.error("expected integer exponent")
                n = int(self.tok.value)
                exp_tok = self.tok
                self.i += 1
                value = _power(self, value, -n if neg else n, exp_tok)
            else:
                return value

    def atom(self):
        tok = self.tok
        if tok.kind == "INT":
            self.i += 1
            return self.scalar(Fraction(int(tok.value)))
        if tok.kind == "IDENT":
            self.i += 1
            name = tok.value
            if name == "q":
                return self.scalar(Q)
            if name == "star" and self.at("("):
                self.i += 1
                inner = self.expr()
                self.expect(")")
                return _star(self, inner)
            if self.p is None:
                raise UnknownGenerator(f"unknown generator {name!r}", self.text, tok.pos)
            if not self.p.has_symbol(name):
                raise UnknownGenerator(
                    f"unknown generator {name!r} in {self.p.name!r}", self.text, tok.pos
                )
            return self.p.gen(name)
        if self.at("("):
            self.i += 1
            inner = self.expr()
            self.expect(")")
            return inner
        if self.at("["):
            return self.tensor()
        if tok.kind == "END":
            self.error("unexpected end of input")
        self.error(f"unexpected token {tok.value!r}")

    def tensor(self):
        from .hopf import TensorElement

        start = self.expect("[")
        if self.legs is None:
            self.error("tensor brackets are not allowed here", start)
        legs = []
        for k, leg_p in enumerate(self.legs):
            if k:
                self.expect(",")
            sub = _Parser.__new__(_Parser)
            sub.text, sub.p, sub.legs, sub.tokens, sub.i = self.text, leg_p, None, self.tokens, self.i
            legs.append(sub.expr())
            self.i = sub.i
        if self.at(","):
            self.error(f"too many tensor legs (expected {len(self.legs)})")
        self.expect("]")
        return TensorElement.from_elements(self.legs, legs)


def _is_tensor(v) -> bool:
    from .hopf import TensorElement

    return isinstance(v, TensorElement)


def _as_scalar(parser: _Parser, v, tok=None) -> QLaurent | None:
    if isinstance(v, QLaurent):
        return v
    if isinstance(v, Element) and v.is_scalar():
        return v.scalar_value()
    return None


def _combine(parser: _Parser, lhs, rhs, op: str):
    if _is_tensor(lhs) or _is_tensor(rhs):
        if op in "+-":
            if not (_is_tensor(lhs) and _is_tensor(rhs)):
                lhs_s = _as_scalar(parser, lhs)
                rhs_s = _as_scalar(parser, rhs)
                # a scalar c next to a tensor means c * (1 ⊗ ... ⊗ 1)
                from .hopf import TensorElement

                if lhs_s is not None:
                    lhs = TensorElement.unit(rhs.legs).scale(lhs_s)
                elif rhs_s is not None:
                    rhs = TensorElement.unit(lhs.legs).scale(rhs_s)
                else:
                    parser.error("cannot add a tensor and a non-scalar element")
            return lhs + rhs if op == "+" else lhs - rhs
        if not _is_tensor(lhs):
            s = _as_scalar(parser, lhs)
            if s is None:
                parser.error("only scalars can multiply a tensor")
            return rhs.scale(s)
        if not _is_tensor(rhs):
            s = _as_scalar(parser, rhs)
            if s is None:
                parser.error("only scalars can multiply a tensor")
            return lhs.scale(s)
        return lhs * rhs
    if op == "+":
        return lhs + rhs
    if op == "-":
        return lhs - rhs
    return lhs * rhs


def _divide(parser: _Parser, lhs, rhs, tok: Token):
    s = _as_scalar(parser, rhs)
    try:
        if s is not None:
            inv = s.inverse()
            return lhs.scale(inv) if hasattr(lhs, "scale") else lhs * inv
        if isinstance(rhs, Element) and not _is_tensor(lhs):
            return lhs * rhs.inverse()
    except ZeroDivisionError as exc:
        raise ParseError(str(exc), parser.text, tok.pos) from None
    parser.error("division by a non-invertible value", tok)


def _star(parser: _Parser, v):
    if isinstance(v, QLaurent):
        return v.conjugate()
    return v.star()


def _power(parser: _Parser, v, n: int, tok: Token):
    if isinstance(v, QLaurent):
        try:
            return v ** n
        except ZeroDivisionError as exc:
            raise ParseError(str(exc), parser.text, tok.pos) from None
    if _is_tensor(v):
        if n < 0:
            parser.error("negative power of a tensor", tok)
        out = type(v).unit(v.legs)
        for _ in range(n):
            out = out * v
        return out
    if n < 0:
        try:
            v = v.inverse()
        except ZeroDivisionError as exc:
            raise ParseError(str(exc), parser.text, tok.pos) from None
        n = -n
    return v ** n


def parse_element(text: str, p: Presentation) -> Element:
    """Parse ``text`` into a normalised element of ``p``."""
    value = _Parser(text, p, None).parse()
    if isinstance(value, QLaurent):
        value = p.scalar(value)
    return value


def parse_tensor(text: str, legs: Sequence[Presentation]):
    """Parse a linear combination of ``[x, y, ...]`` pure tensors."""
    from .hopf import TensorElement

    value = _Parser(text, legs[0], legs).parse()
    if isinstance(value, Element):
        if not value.is_scalar():
            raise ParseError("expected a tensor expression", text, 0)
        return TensorElement.unit(tuple(legs)).scale(value.scalar_value())
    return value


def parse_scalar(text: str) -> QLaurent:
    """Parse an expression in ``q`` and rationals only."""
    value = _Parser(text, None, None).parse()
    if isinstance(value, Element):
        value = value.scalar_value()
    return value

"""Recursive-descent parser for the expression grammar::

    expr   := term (('+'|'-') term)*
    term   := factor (('*'|'/') factor)*
    factor := unary ('^' factor)?
    unary  := '-' unary | atom
    atom   := number | 'x' | 'n' | 'pi' | func '(' expr ')' | '(' expr ')'
    func   := 'sin' | 'cos' | 'exp' | 'log' | 'abs'

A quotient of two numeric literals (``1/2``) is folded into one exact
rational constant; nothing else is rewritten.
"""
import re
from fractions import Fraction
from typing import NamedTuple

from ..errors import ExprSyntaxError
from .nodes import FUNCTIONS, PI, Add, Const, Div, Expr, Mul, N, Neg, Pow, Sub, X

_TOKEN = re.compile(
    r"(?P<number>\d+(?:\.\d*)?(?:[eE][+-]?\d+)?|\.\d+(?:[eE][+-]?\d+)?)"
    r"|(?P<name>[A-Za-z_]\w*)|(?P<op>[-+*/^()])"
)

_ATOM_START = frozenset({"number", "x", "n", "pi", "(", "-"} | set(FUNCTIONS))


class Token(NamedTuple):
    kind: str       # 'number', 'name', an operator character, or 'end'
    text: str
    offset: int     # byte offset into the UTF-8 source


def tokenize(source: str):
    tokens = []
    pos = 0
    while True:
        while pos < len(source) and source[pos].isspace():
            pos += 1
        offset = len(source[:pos].encode())
        if pos == len(source):
            tokens.append(Token("end", "", offset))
            return tokens
        m = _TOKEN.match(source, pos)
        if m is None:
            raise ExprSyntaxError(f"unexpected character {source[pos]!r}", offset, _ATOM_START)
        text = m.group()
        tokens.append(Token(m.lastgroup if m.lastgroup != "op" else text, text, offset))
        pos = m.end()


class _Parser:
    def __init__(self, source):
        self.tokens = tokenize(source)
        self.i = 0

    @property
    def tok(self):
        return self.tokens[self.i]

    def advance(self):
        t = self.tokens[self.i]
        self.i += 1
        return t

    def expect(self, kind):
        if self.tok.kind != kind:
            self.fail({kind})
        return self.advance()

    def fail(self, expected):
        t = self.tok
        what = "end of input" if t.kind == "end" else repr(t.text)
        raise ExprSyntaxError(f"unexpected {what}", t.offset, expected)

    def parse(self):
        e = self.expr()
        if self.tok.kind != "end":
            self.fail({"+", "-", "*", "/", "^", "end"})
        return e

    def expr(self):
        e = self.term()
        while self.tok.kind in ("+", "-"):
            op = self.advance().kind
            rhs = self.term()
            e = Add(e, rhs) if op == "+" else Sub(e, rhs)
        return e

    def term(self):
        e = self.factor()
        while self.tok.kind in ("*", "/"):
            op = self.advance().kind
            rhs = self.factor()
            if op == "*":
                e = Mul(e, rhs)
            elif _is_literal(e) and _is_literal(rhs) and rhs.value != 0:
                e = Const(e.value / rhs.value)
            else:
                e = Div(e, rhs)
        return e

    def factor(self):
        base = self.unary()
        if self.tok.kind == "^":
            self.advance()
            return Pow(base, self.factor())
        return base

    def unary(self):
        if self.tok.kind == "-":
            self.advance()
            return Neg(self.unary())
        return self.atom()

    def atom(self):
        t = self.tok
        if t.kind == "number":
            self.advance()
            return Const(Fraction(t.text))
        if t.kind == "(":
            self.advance()
            e = self.expr()
            self.expect(")")
            return e
        if t.kind == "name":
            self.advance()
            if t.text == "x":
                return X
            if t.text == "n":
                return N
            if t.text == "pi":
                return PI
            if t.text in FUNCTIONS:
                self.expect("(")
                arg = self.expr()
                self.expect(")")
                return FUNCTIONS[t.text](arg)
            raise ExprSyntaxError(f"unknown name {t.text!r}", t.offset, _ATOM_START - {"-", "("})
        self.fail(_ATOM_START)


def _is_literal(e):
    return isinstance(e, Const) and e.name is None


def parse(source: str) -> Expr:
    """Parse ``source`` into an expression tree.

    Raises ExprSyntaxError carrying the byte offset and the set of acceptable
    tokens at the point of failure.
    """
    if not isinstance(source, str):
        raise TypeError("source must be text")
    return _Parser(source).parse()

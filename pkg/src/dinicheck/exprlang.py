"""A small expression language over ``x`` (position) and ``n`` (sequence index).

Grammar, lowest to highest precedence::

    expr    := term (('+' | '-') term)*
    term    := unary (('*' | '/') unary)*
    unary   := '-' unary | power
    power   := atom ('^' unary)?          # right-associative
    atom    := NUMBER | 'x' | 'n' | 'pi'
             | FUNC1 '(' expr ')'         # sin cos sqrt abs exp log
             | FUNC2 '(' expr ',' expr ')'  # min max
             | '(' expr ')'

Trees are immutable. :func:`evaluate` works on scalars and
:func:`evaluate_array` on numpy arrays of ``x``; both raise
:class:`~dinicheck.errors.DomainError` instead of returning NaN.
"""

from __future__ import annotations

import math
import re
from dataclasses import dataclass, field
from typing import Union

import numpy as np

from .errors import DomainError, ExpressionSyntaxError, UnknownIdentifierError

__all__ = [
    "Token",
    "Number",
    "VarX",
    "VarN",
    "Unary",
    "Binary",
    "Expression",
    "tokenize",
    "parse",
    "evaluate",
    "evaluate_array",
    "unparse",
    "uses_n",
]

UNARY_FUNCS = ("sin", "cos", "sqrt", "abs", "exp", "log")
BINARY_FUNCS = ("min", "max")
IDENTIFIERS = frozenset({"x", "n", "pi", *UNARY_FUNCS, *BINARY_FUNCS})


@dataclass(frozen=True)
class Token:
    kind: str  # number | identifier | operator | left-paren | right-paren | comma | end
    lexeme: str
    position: int


@dataclass(frozen=True)
class Number:
    value: float
    pos: int = field(default=-1, compare=False)


@dataclass(frozen=True)
class VarX:
    pos: int = field(default=-1, compare=False)


@dataclass(frozen=True)
class VarN:
    pos: int = field(default=-1, compare=False)


@dataclass(frozen=True)
class Unary:
    op: str  # neg sin cos sqrt abs exp log
    child: "Expression"
    pos: int = field(default=-1, compare=False)


@dataclass(frozen=True)
class Binary:
    op: str  # add sub mul div pow min max
    left: "Expression"
    right: "Expression"
    pos: int = field(default=-1, compare=False)


Expression = Union[Number, VarX, VarN, Unary, Binary]

_TOKEN_RE = re.compile(
    r"""
    (?P<ws>\s+)
  | (?P<number>(?:\d+\.?\d*|\.\d+)(?:[eE][+-]?\d+)?)
  | (?P<identifier>[A-Za-z_][A-Za-z0-9_]*)
  | (?P<operator>[-+*/^])
  | (?P<lparen>\()
  | (?P<rparen>\))
  | (?P<comma>,)
    """,
    re.VERBOSE,
)
_KIND = {"lparen": "left-paren", "rparen": "right-paren"}
_BINOPS = {"+": "add", "-": "sub", "*": "mul", "/": "div"}


def tokenize(source: str) -> list[Token]:
    tokens = []
    pos = 0
    while pos < len(source):
        m = _TOKEN_RE.match(source, pos)
        if m is None:
            raise ExpressionSyntaxError(f"unexpected character {source[pos]!r}", pos)
        kind = m.lastgroup
        if kind != "ws":
            lexeme = m.group()
            if kind == "number" and not math.isfinite(float(lexeme)):
                raise ExpressionSyntaxError(f"number {lexeme!r} is not finite", pos)
            tokens.append(Token(_KIND.get(kind, kind), lexeme, pos))
        pos = m.end()
    tokens.append(Token("end", "", len(source)))
    return tokens


class _Parser:
    def __init__(self, source: str):
        self.source = source
        self.tokens = tokenize(source)
        self.i = 0

    @property
    def tok(self) -> Token:
        return self.tokens[self.i]

    def _error(self, expected: str) -> ExpressionSyntaxError:
        tok = self.tok
        # "end" sits one past the last character; point at the last one instead.
        pos = min(tok.position, max(len(self.source) - 1, 0))
        found = "end of input" if tok.kind == "end" else repr(tok.lexeme)
        return ExpressionSyntaxError(f"unexpected {found}", pos, expected)

    def _expect(self, kind: str, expected: str) -> Token:
        if self.tok.kind != kind:
            raise self._error(expected)
        tok = self.tok
        self.i += 1
        return tok

    def parse(self) -> Expression:
        node = self.expr()
        if self.tok.kind != "end":
            raise self._error("operator or end of input")
        return node

    def expr(self) -> Expression:
        node = self.term()
        while self.tok.kind == "operator" and self.tok.lexeme in "+-":
            op = self.tok
            self.i += 1
            node = Binary(_BINOPS[op.lexeme], node, self.term(), op.position)
        return node

    def term(self) -> Expression:
        node = self.unary()
        while self.tok.kind == "operator" and self.tok.lexeme in "*/":
            op = self.tok
            self.i += 1
            node = Binary(_BINOPS[op.lexeme], node, self.unary(), op.position)
        return node

    def unary(self) -> Expression:
        if self.tok.kind == "operator" and self.tok.lexeme == "-":
            pos = self.tok.position
            self.i += 1
            return Unary("neg", self.unary(), pos)
        return self.power()

    def power(self) -> Expression:
        base = self.atom()
        if self.tok.kind == "operator" and self.tok.lexeme == "^":
            pos = self.tok.position
            self.i += 1
            return Binary("pow", base, self.unary(), pos)
        return base

    def atom(self) -> Expression:
        tok = self.tok
        if tok.kind == "number":
            self.i += 1
            return Number(float(tok.lexeme), tok.position)
        if tok.kind == "left-paren":
            self.i += 1
            node = self.expr()
            self._expect("right-paren", "')'")
            return node
        if tok.kind == "identifier":
            name = tok.lexeme
            if name not in IDENTIFIERS:
                raise UnknownIdentifierError(name, tok.position)
            self.i += 1
            if name == "x":
                return VarX(tok.position)
            if name == "n":
                return VarN(tok.position)
            if name == "pi":
                return Number(math.pi, tok.position)
            self._expect("left-paren", f"'(' after {name}")
            first = self.expr()
            if name in BINARY_FUNCS:
                self._expect("comma", f"',' ({name} takes two arguments)")
                second = self.expr()
                self._expect("right-paren", "')'")
                return Binary(name, first, second, tok.position)
            self._expect("right-paren", "')'")
            return Unary(name, first, tok.position)
        raise self._error("number, identifier or '('")


def parse(source: str) -> Expression:
    """Parse ``source`` into an expression tree.

    >>> evaluate(parse("2^3^2"), 0.0, 1)
    512.0
    """
    if not source or not source.strip():
        raise ExpressionSyntaxError("empty expression", 0, "an expression")
    return _Parser(source).parse()


def uses_n(e: Expression) -> bool:
    if isinstance(e, VarN):
        return True
    if isinstance(e, Unary):
        return uses_n(e.child)
    if isinstance(e, Binary):
        return uses_n(e.left) or uses_n(e.right)
    return False


_PRINT_OPS = {"add": "+", "sub": "-", "mul": "*", "div": "/", "pow": "^"}


def unparse(e: Expression) -> str:
    """Fully parenthesized source text; ``parse(unparse(e))`` evaluates like ``e``."""
    if isinstance(e, Number):
        text = repr(float(e.value))
        return f"(-{text[1:]})" if text.startswith("-") else text
    if isinstance(e, VarX):
        return "x"
    if isinstance(e, VarN):
        return "n"
    if isinstance(e, Unary):
        if e.op == "neg":
            return f"(-{unparse(e.child)})"
        return f"{e.op}({unparse(e.child)})"
    if e.op in BINARY_FUNCS:
        return f"{e.op}({unparse(e.left)}, {unparse(e.right)})"
    return f"({unparse(e.left)} {_PRINT_OPS[e.op]} {unparse(e.right)})"


def _fail(msg: str, node, x: np.ndarray, mask: np.ndarray, n: int):
    bad = float(x[np.argmax(mask)]) if x.ndim else float(x)
    raise DomainError(msg, node.pos, bad, n)


def _eval(e: Expression, x: np.ndarray, n: int) -> np.ndarray:
    if isinstance(e, Number):
        return np.full(x.shape, e.value, dtype=float)
    if isinstance(e, VarX):
        return x
    if isinstance(e, VarN):
        return np.full(x.shape, float(n))

    if isinstance(e, Unary):
        v = _eval(e.child, x, n)
        op = e.op
        if op == "neg":
            out = -v
        elif op == "sqrt":
            neg = v < 0
            if neg.any():
                _fail("sqrt of negative number", e, x, neg, n)
            out = np.sqrt(v)
        elif op == "log":
            nonpos = v <= 0
            if nonpos.any():
                _fail("log of non-positive number", e, x, nonpos, n)
            out = np.log(v)
        else:
            out = getattr(np, {"abs": "abs", "exp": "exp", "sin": "sin", "cos": "cos"}[op])(v)
    else:
        a = _eval(e.left, x, n)
        b = _eval(e.right, x, n)
        op = e.op
        if op == "add":
            out = a + b
        elif op == "sub":
            out = a - b
        elif op == "mul":
            out = a * b
        elif op == "div":
            zero = b == 0
            if zero.any():
                _fail("division by zero", e, x, zero, n)
            out = a / b
        elif op == "pow":
            bad = (a < 0) & (b != np.floor(b))
            if bad.any():
                _fail("negative base with non-integer exponent", e, x, bad, n)
            zero = (a == 0) & (b < 0)
            if zero.any():
                _fail("division by zero (zero to a negative power)", e, x, zero, n)
            out = np.power(a, b)
        elif op == "min":
            out = np.minimum(a, b)
        else:
            out = np.maximum(a, b)

    finite = np.isfinite(out)
    if not finite.all():
        _fail("non-finite intermediate value", e, x, ~finite, n)
    return out


def evaluate_array(e: Expression, x, n: int) -> np.ndarray:
    """Evaluate ``e`` at every point of ``x`` for a fixed index ``n``."""
    xs = np.asarray(x, dtype=float)
    with np.errstate(all="ignore"):
        out = _eval(e, xs, int(n))
    return np.array(out, dtype=float, copy=True)


def evaluate(e: Expression, x: float, n: int) -> float:
    if not math.isfinite(x):
        raise DomainError("x must be finite", -1, x, n)
    if n < 1:
        raise DomainError("n must be a positive integer", -1, x, n)
    return float(evaluate_array(e, np.array([x], dtype=float), n)[0])

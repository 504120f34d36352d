"""One-variable expression language evaluated on floats or jets.

Grammar::

    expr   := term (('+'|'-') term)*
    term   := factor (('*'|'/') factor)*
    factor := ['-'] base ['^' factor]
    base   := number | var | ident '(' expr ')' | '(' expr ')'

``^`` is right-associative and binds tighter than unary minus, so ``-x^2`` is
``-(x^2)``.  Trees are evaluated exactly as written; nothing is simplified.
"""

from __future__ import annotations

import math
import re
from dataclasses import dataclass

from . import jets
from .jets import DomainError, Jet3, NonFiniteError

__all__ = [
    "Expr",
    "Num",
    "Var",
    "Neg",
    "Add",
    "Sub",
    "Mul",
    "Div",
    "Pow",
    "Call",
    "ExpressionSyntaxError",
    "UnknownIdentifierError",
    "parse_expression",
    "to_text",
    "eval_jet",
    "eval_jet_fd_check",
    "num",
    "VARIABLE_NAMES",
]

VARIABLE_NAMES = frozenset("xyzt")
_MAX_INT_EXPONENT = 64


class ExpressionSyntaxError(ValueError):
    def __init__(self, message: str, offset: int):
        super().__init__(f"{message} at offset {offset}")
        self.offset = offset


class UnknownIdentifierError(ExpressionSyntaxError):
    pass


class Expr:
    """Base class of expression nodes; all nodes are frozen dataclasses."""

    __slots__ = ()

    def evaluate(self, x):
        raise NotImplementedError

    def is_constant(self) -> bool:
        raise NotImplementedError

    def variable_names(self) -> frozenset:
        raise NotImplementedError

    def __str__(self):
        return to_text(self)


@dataclass(frozen=True)
class Num(Expr):
    value: float

    def evaluate(self, x):
        return self.value

    def is_constant(self):
        return True

    def variable_names(self):
        return frozenset()


@dataclass(frozen=True)
class Var(Expr):
    name: str = "x"

    def evaluate(self, x):
        return x

    def is_constant(self):
        return False

    def variable_names(self):
        return frozenset(self.name)


@dataclass(frozen=True)
class Neg(Expr):
    arg: Expr

    def evaluate(self, x):
        return -self.arg.evaluate(x)

    def is_constant(self):
        return self.arg.is_constant()

    def variable_names(self):
        return self.arg.variable_names()


@dataclass(frozen=True)
class _Binary(Expr):
    left: Expr
    right: Expr

    def is_constant(self):
        return self.left.is_constant() and self.right.is_constant()

    def variable_names(self):
        return self.left.variable_names() | self.right.variable_names()


@dataclass(frozen=True)
class Add(_Binary):
    def evaluate(self, x):
        return self.left.evaluate(x) + self.right.evaluate(x)


@dataclass(frozen=True)
class Sub(_Binary):
    def evaluate(self, x):
        return self.left.evaluate(x) - self.right.evaluate(x)


@dataclass(frozen=True)
class Mul(_Binary):
    def evaluate(self, x):
        return self.left.evaluate(x) * self.right.evaluate(x)


@dataclass(frozen=True)
class Div(_Binary):
    def evaluate(self, x):
        den = self.right.evaluate(x)
        if (den.v0 if isinstance(den, Jet3) else den) == 0.0:
            raise DomainError("division by zero")
        return self.left.evaluate(x) / den


@dataclass(frozen=True)
class Pow(_Binary):
    """``left ^ right``: integer constant exponents multiply, others go through exp/log."""

    def evaluate(self, x):
        base = self.left.evaluate(x)
        if self.right.is_constant():
            p = self.right.evaluate(0.0)
            if float(p).is_integer() and abs(p) <= _MAX_INT_EXPONENT:
                return jets.int_power(base, int(p))
            return jets.real_power(base, float(p))
        b0 = base.v0 if isinstance(base, Jet3) else base
        if not b0 > 0.0:
            raise DomainError(f"variable exponent needs a positive base, got {b0}")
        return jets.exp(self.right.evaluate(x) * jets.log(base))


@dataclass(frozen=True)
class Call(Expr):
    func: str
    arg: Expr

    def evaluate(self, x):
        return jets.FUNCTIONS[self.func](self.arg.evaluate(x))

    def is_constant(self):
        return self.arg.is_constant()

    def variable_names(self):
        return self.arg.variable_names()


def num(value: float) -> Expr:
    """Literal node; negative values become Neg(Num) so the tree stays printable."""
    value = float(value)
    if value < 0 or (value == 0.0 and math.copysign(1.0, value) < 0):
        return Neg(Num(-value))
    return Num(value)


# tokenizer

_TOKEN = re.compile(
    r"\s*(?:(?P<num>(?:\d+\.?\d*|\.\d+)(?:[eE][+-]?\d+)?)|(?P<name>[A-Za-z_]\w*)|(?P<op>[-+*/^()]))"
)


def _tokenize(text: str):
    tokens = []
    pos = 0
    n = len(text)
    while pos < n:
        if text[pos].isspace():
            pos += 1
            continue
        m = _TOKEN.match(text, pos)
        if m is None or m.end() == pos:
            raise ExpressionSyntaxError(f"unexpected character {text[pos]!r}", _byte_offset(text, pos))
        kind = m.lastgroup
        start = m.start(kind)
        tokens.append((kind, m.group(kind), start))
        pos = m.end()
    tokens.append(("end", "", n))
    return tokens


def _byte_offset(text: str, pos: int) -> int:
    return len(text[:pos].encode("utf-8"))


class _Parser:
    def __init__(self, text: str):
        self.text = text
        self.tokens = _tokenize(text)
        self.i = 0
        self.var_name = None

    def peek(self):
        return self.tokens[self.i]

    def error(self, message, tok=None, cls=ExpressionSyntaxError):
        tok = tok or self.peek()
        return cls(message, _byte_offset(self.text, tok[2]))

    def take(self, value=None):
        tok = self.tokens[self.i]
        if value is not None and tok[1] != value:
            found = "end of input" if tok[0] == "end" else repr(tok[1])
            raise self.error(f"expected {value!r}, found {found}", tok)
        self.i += 1
        return tok

    def parse(self) -> Expr:
        node = self.expr()
        tok = self.peek()
        if tok[0] != "end":
            raise self.error(f"unexpected {tok[1]!r}", tok)
        return node

    def expr(self):
        node = self.term()
        while self.peek()[1] in ("+", "-") and self.peek()[0] == "op":
            op = self.take()[1]
            rhs = self.term()
            node = Add(node, rhs) if op == "+" else Sub(node, rhs)
        return node

    def term(self):
        node = self.factor()
        while self.peek()[1] in ("*", "/") and self.peek()[0] == "op":
            op = self.take()[1]
            rhs = self.factor()
            node = Mul(node, rhs) if op == "*" else Div(node, rhs)
        return node

    def factor(self):
        if self.peek() == ("op", "-", self.peek()[2]):
            self.take()
            return Neg(self.power())
        return self.power()

    def power(self):
        node = self.base()
        if self.peek()[0] == "op" and self.peek()[1] == "^":
            self.take()
            node = Pow(node, self.factor())
        return node

    def base(self):
        tok = self.peek()
        kind, value, _ = tok
        if kind == "num":
            self.take()
            return Num(float(value))
        if kind == "name":
            self.take()
            if value in jets.FUNCTIONS:
                self.take("(")
                arg = self.expr()
                self.take(")")
                return Call(value, arg)
            if value in VARIABLE_NAMES:
                if self.var_name is not None and value != self.var_name:
                    raise self.error(
                        f"expression mixes variables {self.var_name!r} and {value!r}", tok)
                self.var_name = value
                return Var(value)
            raise self.error(f"unknown identifier {value!r}", tok, UnknownIdentifierError)
        if kind == "op" and value == "(":
            self.take()
            node = self.expr()
            self.take(")")
            return node
        found = "end of input" if kind == "end" else repr(value)
        raise self.error(f"expected a number, variable, function or '(', found {found}", tok)


def parse_expression(text: str) -> Expr:
    return _Parser(text).parse()


# printing

_PREC = {Add: 1, Sub: 1, Mul: 2, Div: 2, Neg: 3, Pow: 4}
_SYMBOL = {Add: "+", Sub: "-", Mul: "*", Div: "/"}


def _prec(node) -> int:
    return _PREC.get(type(node), 5)


def _fmt_num(v: float) -> str:
    if v < 0:
        return f"({_fmt_num(-v)})" if v != -v else repr(v)
    if v.is_integer() and v < 1e15:
        return str(int(v))
    return repr(v)


def to_text(node: Expr) -> str:
    """Render with the minimum parentheses needed to re-parse to the same tree."""

    def wrap(child, min_prec):
        s = to_text(child)
        return f"({s})" if _prec(child) < min_prec else s

    t = type(node)
    if t is Num:
        return _fmt_num(node.value)
    if t is Var:
        return node.name
    if t is Call:
        return f"{node.func}({to_text(node.arg)})"
    if t is Neg:
        return "-" + wrap(node.arg, 4)
    if t is Pow:
        return f"{wrap(node.left, 5)}^{wrap(node.right, 3)}"
    p = _PREC[t]
    return f"{wrap(node.left, p)} {_SYMBOL[t]} {wrap(node.right, p + 1)}"


# evaluation

def _check_finite(j: Jet3, what="expression") -> Jet3:
    if not j.is_finite():
        raise NonFiniteError(f"{what} evaluated to non-finite jet {j!r}")
    return j


def eval_jet(e, x: float) -> Jet3:
    """(e(x), e'(x), e''(x), e'''(x)) by forward jet propagation.

    ``e`` may be any object with an ``evaluate`` method that accepts jets.
    """
    out = e.evaluate(Jet3.variable(x))
    if not isinstance(out, Jet3):
        out = Jet3(out)
    return _check_finite(out)


def eval_value(e, x: float) -> float:
    out = e.evaluate(float(x))
    out = out.v0 if isinstance(out, Jet3) else float(out)
    if not math.isfinite(out):
        raise NonFiniteError(f"expression evaluated to {out}")
    return out


def eval_jet_fd_check(e, x: float, h: float = 1e-4, h3: float | None = None):
    """Seven-point central-difference estimates of (e', e'', e''').

    The third derivative uses its own, larger step ``h3`` (default ``10*h``).
    """
    if h3 is None:
        h3 = 10.0 * h
    f = [eval_value(e, x + k * h) for k in range(-3, 4)]
    d1 = (-f[0] + 9 * f[1] - 45 * f[2] + 45 * f[4] - 9 * f[5] + f[6]) / (60 * h)
    d2 = (2 * f[0] - 27 * f[1] + 270 * f[2] - 490 * f[3] + 270 * f[4]
          - 27 * f[5] + 2 * f[6]) / (180 * h * h)
    g = [eval_value(e, x + k * h3) for k in range(-3, 4)]
    d3 = (g[0] - 8 * g[1] + 13 * g[2] - 13 * g[4] + 8 * g[5] - g[6]) / (8 * h3 ** 3)
    return d1, d2, d3

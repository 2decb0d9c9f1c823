"""Expression parsing and truncated Taylor-series (jet) evaluation.

Boundary functions are given as strings in the variable ``x``; the grammar is

    expr   := term (("+" | "-") term)*
    term   := unary (("*" | "/") unary)*
    unary  := "-" unary | power
    power  := atom ("^" unary)?          (right associative)
    atom   := number | "x" | "pi" | name "(" expr ("," expr)* ")" | "(" expr ")"

with functions ``sqrt sin cos exp log abs`` (one argument) and ``pow`` (two).
"""
from __future__ import annotations

import math
import re
from dataclasses import dataclass
from typing import Union

import numpy as np

DEFAULT_ORDER_CAP = 16

UNARY_FUNCS = ("sqrt", "sin", "cos", "exp", "log", "abs")
BINARY_FUNCS = ("pow",)
CONSTANTS = {"pi": math.pi}


class ParseError(ValueError):
    def __init__(self, message: str, offset: int):
        super().__init__(f"{message} at offset {offset}")
        self.offset = offset


class UnknownIdentifierError(ParseError):
    pass


class JetDomainError(ValueError):
    """Raised when a jet operation leaves the smooth real domain."""


class OrderCapError(ValueError):
    pass


# --------------------------------------------------------------------------
# AST

@dataclass(frozen=True)
class Num:
    value: float


@dataclass(frozen=True)
class Var:
    pass


@dataclass(frozen=True)
class Const:
    name: str


@dataclass(frozen=True)
class Neg:
    operand: "Expr"


@dataclass(frozen=True)
class BinOp:
    op: str
    left: "Expr"
    right: "Expr"


@dataclass(frozen=True)
class Call:
    name: str
    args: tuple


Expr = Union[Num, Var, Const, Neg, BinOp, Call]


# --------------------------------------------------------------------------
# Parser

_TOKEN_RE = re.compile(
    r"""
    (?P<ws>\s+)
  | (?P<num>(?:\d+\.?\d*|\.\d+)(?:[eE][+-]?\d+)?)
  | (?P<name>[A-Za-z_][A-Za-z_0-9]*)
  | (?P<op>[-+*/^(),])
    """,
    re.VERBOSE,
)


def _tokenize(src: str) -> list:
    tokens = []
    pos = 0
    while pos < len(src):
        m = _TOKEN_RE.match(src, pos)
        if m is None:
            raise ParseError(f"unexpected character {src[pos]!r}", pos)
        kind = m.lastgroup
        if kind != "ws":
            tokens.append((kind, m.group(), pos))
        pos = m.end()
    tokens.append(("eof", "", len(src)))
    return tokens


class _Parser:
    def __init__(self, src: str):
        self.tokens = _tokenize(src)
        self.i = 0

    def peek(self):
        return self.tokens[self.i]

    def take(self):
        tok = self.tokens[self.i]
        self.i += 1
        return tok

    def expect(self, text: str):
        kind, value, pos = self.take()
        if value != text or kind == "eof":
            what = "end of input" if kind == "eof" else repr(value)
            raise ParseError(f"expected {text!r}, got {what}", pos)

    def parse(self) -> Expr:
        node = self.expr()
        kind, value, pos = self.peek()
        if kind != "eof":
            raise ParseError(f"unexpected token {value!r}", pos)
        return node

    def expr(self) -> Expr:
        node = self.term()
        while self.peek()[1] in ("+", "-") and self.peek()[0] == "op":
            op = self.take()[1]
            node = BinOp(op, node, self.term())
        return node

    def term(self) -> Expr:
        node = self.unary()
        while self.peek()[1] in ("*", "/") and self.peek()[0] == "op":
            op = self.take()[1]
            node = BinOp(op, node, self.unary())
        return node

    def unary(self) -> Expr:
        if self.peek()[:2] == ("op", "-"):
            self.take()
            return Neg(self.unary())
        return self.power()

    def power(self) -> Expr:
        base = self.atom()
        if self.peek()[:2] == ("op", "^"):
            self.take()
            return BinOp("^", base, self.unary())
        return base

    def atom(self) -> Expr:
        kind, value, pos = self.take()
        if kind == "num":
            return Num(float(value))
        if kind == "name":
            if value == "x":
                return Var()
            if value in CONSTANTS:
                return Const(value)
            if value in UNARY_FUNCS or value in BINARY_FUNCS:
                self.expect("(")
                args = [self.expr()]
                while self.peek()[:2] == ("op", ","):
                    self.take()
                    args.append(self.expr())
                self.expect(")")
                arity = 2 if value in BINARY_FUNCS else 1
                if len(args) != arity:
                    raise ParseError(f"{value} takes {arity} argument(s)", pos)
                return Call(value, tuple(args))
            raise UnknownIdentifierError(f"unknown identifier {value!r}", pos)
        if (kind, value) == ("op", "("):
            node = self.expr()
            self.expect(")")
            return node
        what = "end of input" if kind == "eof" else repr(value)
        raise ParseError(f"unexpected {what}", pos)


def parse(src: str) -> Expr:
    """Parse ``src`` into an expression tree."""
    if not src or not src.strip():
        raise ParseError("empty expression", 0)
    return _Parser(src).parse()


# --------------------------------------------------------------------------
# Printer

_PREC = {"+": 1, "-": 1, "*": 2, "/": 2, "^": 4}


def _prec(e: Expr) -> int:
    if isinstance(e, BinOp):
        return _PREC[e.op]
    if isinstance(e, Neg):
        return 3
    return 5


def _fmt_num(v: float) -> str:
    if v.is_integer() and abs(v) < 1e15:
        return str(int(v))
    return repr(v)


def to_string(e: Expr) -> str:
    """Render ``e`` with the minimal parentheses that parse back to ``e``."""
    if isinstance(e, Num):
        return _fmt_num(e.value)
    if isinstance(e, Var):
        return "x"
    if isinstance(e, Const):
        return e.name
    if isinstance(e, Call):
        return f"{e.name}({', '.join(to_string(a) for a in e.args)})"
    if isinstance(e, Neg):
        inner = to_string(e.operand)
        return f"-({inner})" if _prec(e.operand) < 3 else f"-{inner}"
    p = _PREC[e.op]
    left, right = to_string(e.left), to_string(e.right)
    if e.op == "^":
        if _prec(e.left) <= p:
            left = f"({left})"
        if _prec(e.right) < 3:
            right = f"({right})"
        return f"{left}^{right}"
    if _prec(e.left) < p:
        left = f"({left})"
    if _prec(e.right) <= p:
        right = f"({right})"
    return f"{left} {e.op} {right}"


# --------------------------------------------------------------------------
# Pointwise evaluation (numpy, vectorised)

_NP_FUNCS = {
    "sqrt": np.sqrt,
    "sin": np.sin,
    "cos": np.cos,
    "exp": np.exp,
    "log": np.log,
    "abs": np.abs,
}


def evaluate(e: Expr, x):
    """Evaluate on a float or array; points outside the real domain give nan."""
    with np.errstate(invalid="ignore", divide="ignore", over="ignore"):
        return _eval(e, np.asarray(x, dtype=float))


def _eval(e: Expr, x):
    if isinstance(e, Num):
        return np.full_like(x, e.value)
    if isinstance(e, Var):
        return x
    if isinstance(e, Const):
        return np.full_like(x, CONSTANTS[e.name])
    if isinstance(e, Neg):
        return -_eval(e.operand, x)
    if isinstance(e, Call):
        args = [_eval(a, x) for a in e.args]
        if e.name == "pow":
            return _np_pow(*args)
        return _NP_FUNCS[e.name](args[0])
    a, b = _eval(e.left, x), _eval(e.right, x)
    if e.op == "+":
        return a + b
    if e.op == "-":
        return a - b
    if e.op == "*":
        return a * b
    if e.op == "/":
        return a / b
    return _np_pow(a, b)


def _np_pow(a, b):
    return np.power(a, b)


# --------------------------------------------------------------------------
# Jets

class Jet:
    """Truncated Taylor series ``sum_i coeffs[i] * (t - x)**i`` about ``x``."""

    __slots__ = ("x", "coeffs")

    def __init__(self, x: float, coeffs):
        self.x = float(x)
        self.coeffs = np.asarray(coeffs, dtype=float)

    @property
    def order(self) -> int:
        return len(self.coeffs) - 1

    @classmethod
    def constant(cls, x, value, order):
        c = np.zeros(order + 1)
        c[0] = value
        return cls(x, c)

    @classmethod
    def variable(cls, x, order):
        c = np.zeros(order + 1)
        c[0] = x
        if order >= 1:
            c[1] = 1.0
        return cls(x, c)

    def derivatives(self) -> np.ndarray:
        """f^(i)(x) for i = 0..order."""
        return self.coeffs * np.array([math.factorial(i) for i in range(self.order + 1)], dtype=float)

    def derivative(self) -> "Jet":
        """Jet of f' (one order lower)."""
        i = np.arange(1, self.order + 1)
        return Jet(self.x, self.coeffs[1:] * i)

    def truncate(self, order: int) -> "Jet":
        return Jet(self.x, self.coeffs[: order + 1])

    def _wrap(self, other) -> "Jet":
        if isinstance(other, Jet):
            return other
        return Jet.constant(self.x, other, self.order)

    def __add__(self, other):
        other = self._wrap(other)
        return Jet(self.x, self.coeffs + other.coeffs)

    __radd__ = __add__

    def __neg__(self):
        return Jet(self.x, -self.coeffs)

    def __sub__(self, other):
        return self + (-self._wrap(other))

    def __rsub__(self, other):
        return self._wrap(other) - self

    def __mul__(self, other):
        if not isinstance(other, Jet):
            return Jet(self.x, self.coeffs * other)
        n = self.order + 1
        return Jet(self.x, np.convolve(self.coeffs, other.coeffs)[:n])

    __rmul__ = __mul__

    def reciprocal(self) -> "Jet":
        a = self.coeffs
        if a[0] == 0.0:
            raise JetDomainError("division by a jet with zero constant term")
        b = np.zeros_like(a)
        b[0] = 1.0 / a[0]
        for k in range(1, len(a)):
            b[k] = -np.dot(a[1 : k + 1], b[k - 1 :: -1][:k]) / a[0]
        return Jet(self.x, b)

    def __truediv__(self, other):
        if not isinstance(other, Jet):
            return Jet(self.x, self.coeffs / other)
        return self * other.reciprocal()

    def __rtruediv__(self, other):
        return self._wrap(other) * self.reciprocal()

    def __pow__(self, r):
        if isinstance(r, Jet):
            if np.all(r.coeffs[1:] == 0.0):
                return self ** float(r.coeffs[0])
            return exp(r * log(self))
        r = float(r)
        if r.is_integer() and abs(r) <= 64:
            n = int(abs(r))
            out = Jet.constant(self.x, 1.0, self.order)
            base = self
            while n:
                if n & 1:
                    out = out * base
                base = base * base
                n >>= 1
            return out.reciprocal() if r < 0 else out
        return _real_power(self, r)

    def __repr__(self):
        return f"Jet(x={self.x!r}, coeffs={self.coeffs!r})"


def _real_power(u: Jet, r: float) -> Jet:
    a = u.coeffs
    if a[0] <= 0.0:
        raise JetDomainError(f"non-integer power {r} of a non-positive value")
    b = np.zeros_like(a)
    b[0] = a[0] ** r
    for k in range(1, len(a)):
        j = np.arange(1, k + 1)
        b[k] = np.dot((r * j - (k - j)) * a[1 : k + 1], b[k - j]) / (k * a[0])
    return Jet(u.x, b)


def sqrt(u: Jet) -> Jet:
    if u.coeffs[0] <= 0.0:
        raise JetDomainError("sqrt needs a positive argument")
    return _real_power(u, 0.5)


def exp(u: Jet) -> Jet:
    a = u.coeffs
    b = np.zeros_like(a)
    b[0] = math.exp(a[0])
    for k in range(1, len(a)):
        j = np.arange(1, k + 1)
        b[k] = np.dot(j * a[1 : k + 1], b[k - j]) / k
    return Jet(u.x, b)


def log(u: Jet) -> Jet:
    a = u.coeffs
    if a[0] <= 0.0:
        raise JetDomainError("log needs a positive argument")
    b = np.zeros_like(a)
    b[0] = math.log(a[0])
    for k in range(1, len(a)):
        j = np.arange(1, k)
        b[k] = (a[k] - np.dot(j * b[1:k], a[k - j]) / k) / a[0]
    return Jet(u.x, b)


def sincos(u: Jet) -> tuple:
    a = u.coeffs
    s = np.zeros_like(a)
    c = np.zeros_like(a)
    s[0], c[0] = math.sin(a[0]), math.cos(a[0])
    for k in range(1, len(a)):
        j = np.arange(1, k + 1)
        w = j * a[1 : k + 1]
        s[k] = np.dot(w, c[k - j]) / k
        c[k] = -np.dot(w, s[k - j]) / k
    return Jet(u.x, s), Jet(u.x, c)


def absolute(u: Jet) -> Jet:
    if u.coeffs[0] == 0.0:
        raise JetDomainError("abs is not smooth at zero")
    return u if u.coeffs[0] > 0 else -u


_JET_FUNCS = {
    "sqrt": sqrt,
    "exp": exp,
    "log": log,
    "sin": lambda u: sincos(u)[0],
    "cos": lambda u: sincos(u)[1],
    "abs": absolute,
}


def eval_jet(e: Expr, x: float, order: int, cap: int = DEFAULT_ORDER_CAP) -> Jet:
    """Taylor jet of ``e`` about ``x`` with coefficients ``f^(i)(x)/i!``."""
    if order < 0:
        raise ValueError("order must be nonnegative")
    if order > cap:
        raise OrderCapError(f"jet order {order} exceeds cap {cap}")
    if isinstance(e, str):
        e = parse(e)
    return _jet(e, Jet.variable(x, order))


def _jet(e: Expr, t: Jet) -> Jet:
    if isinstance(e, Num):
        return Jet.constant(t.x, e.value, t.order)
    if isinstance(e, Var):
        return t
    if isinstance(e, Const):
        return Jet.constant(t.x, CONSTANTS[e.name], t.order)
    if isinstance(e, Neg):
        return -_jet(e.operand, t)
    if isinstance(e, Call):
        args = [_jet(a, t) for a in e.args]
        if e.name == "pow":
            return args[0] ** args[1]
        return _JET_FUNCS[e.name](args[0])
    a, b = _jet(e.left, t), _jet(e.right, t)
    if e.op == "+":
        return a + b
    if e.op == "-":
        return a - b
    if e.op == "*":
        return a * b
    if e.op == "/":
        return a / b
    return a ** b

"""Small arithmetic expression language for scalar functions of m real
variables, with exact jet evaluation through third order.

Grammar (EBNF)::

    expr     = term { ("+" | "-") term } ;
    term     = power { ("*" | "/") power } ;
    power    = unary { "^" exponent } ;
    unary    = "-" unary | atom ;
    atom     = number | variable | function "(" expr ")" | "(" expr ")" ;
    exponent = [ "-" | "+" ] integer ;          (* literal integer only *)
    function = "exp" | "log" | "sqrt" | "sin" | "cos" | "tanh" ;
    variable = "x" integer ;                    (* x1 .. xm by default *)

Binary operators of equal precedence associate to the left; unary minus
binds tighter than "^", so ``-x1^2`` is ``(-x1)^2``.  Whitespace is
insignificant.  Variables are ``x1 .. xm`` unless the parser is given a
different first index (metric entries use ``x0 .. xn``).
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from typing import Union

import numpy as np

from .errors import (DomainError, ExpressionSyntaxError, UnknownIdentifier,
                     VariableOutOfRange)
from .jet import Jet3

FUNCTIONS = ("exp", "log", "sqrt", "sin", "cos", "tanh")


# -- AST ---------------------------------------------------------------------

@dataclass(frozen=True)
class Const:
    value: float


@dataclass(frozen=True)
class Var:
    slot: int           # 0-based position in the evaluation point
    name: str           # source spelling, for error messages


@dataclass(frozen=True)
class Add:
    lhs: "Expression"
    rhs: "Expression"


@dataclass(frozen=True)
class Sub:
    lhs: "Expression"
    rhs: "Expression"


@dataclass(frozen=True)
class Mul:
    lhs: "Expression"
    rhs: "Expression"


@dataclass(frozen=True)
class Div:
    lhs: "Expression"
    rhs: "Expression"


@dataclass(frozen=True)
class Neg:
    arg: "Expression"


@dataclass(frozen=True)
class Pow:
    base: "Expression"
    exponent: Union[int, float]


@dataclass(frozen=True)
class Call:
    func: str
    arg: "Expression"


Expression = Union[Const, Var, Add, Sub, Mul, Div, Neg, Pow, Call]


# -- parser ------------------------------------------------------------------

_TOKEN_RE = re.compile(r"""
    (?P<num>\d+\.\d*(?:[eE][+-]?\d+)?|\.\d+(?:[eE][+-]?\d+)?|\d+(?:[eE][+-]?\d+)?)
  | (?P<ident>[A-Za-z_][A-Za-z0-9_]*)
  | (?P<op>[-+*/^()])
  | (?P<ws>\s+)
""", re.VERBOSE)


def _tokenize(text: str):
    tokens = []
    pos = 0
    while pos < len(text):
        m = _TOKEN_RE.match(text, pos)
        if m is None:
            raise ExpressionSyntaxError(
                f"unexpected character {text[pos]!r}", pos)
        if m.lastgroup != "ws":
            tokens.append((m.lastgroup, m.group(), pos))
        pos = m.end()
    tokens.append(("eof", "", len(text)))
    return tokens


class _Parser:
    def __init__(self, text: str, arity: int, first_index: int):
        self.tokens = _tokenize(text)
        self.i = 0
        self.arity = arity
        self.first_index = first_index

    def peek(self):
        return self.tokens[self.i]

    def advance(self):
        tok = self.tokens[self.i]
        self.i += 1
        return tok

    def expect_op(self, op: str):
        kind, text, pos = self.peek()
        if kind != "op" or text != op:
            raise ExpressionSyntaxError(f"expected {op!r}, got {text!r}", pos)
        self.advance()

    def parse(self) -> Expression:
        e = self.expr()
        kind, text, pos = self.peek()
        if kind != "eof":
            raise ExpressionSyntaxError(f"trailing input {text!r}", pos)
        return e

    def expr(self) -> Expression:
        e = self.term()
        while self.peek()[:2] in (("op", "+"), ("op", "-")):
            op = self.advance()[1]
            rhs = self.term()
            e = Add(e, rhs) if op == "+" else Sub(e, rhs)
        return e

    def term(self) -> Expression:
        e = self.power()
        while self.peek()[:2] in (("op", "*"), ("op", "/")):
            op = self.advance()[1]
            rhs = self.power()
            e = Mul(e, rhs) if op == "*" else Div(e, rhs)
        return e

    def power(self) -> Expression:
        e = self.unary()
        while self.peek()[:2] == ("op", "^"):
            self.advance()
            e = Pow(e, self.exponent())
        return e

    def exponent(self) -> int:
        sign = 1
        kind, text, pos = self.peek()
        if kind == "op" and text in ("+", "-"):
            self.advance()
            sign = -1 if text == "-" else 1
            kind, text, pos = self.peek()
        if kind != "num":
            raise ExpressionSyntaxError(
                f"expected integer exponent, got {text!r}", pos)
        self.advance()
        try:
            value = int(text)
        except ValueError:
            raise ExpressionSyntaxError(
                f"exponent must be an integer, got {text!r}", pos) from None
        return sign * value

    def unary(self) -> Expression:
        if self.peek()[:2] == ("op", "-"):
            self.advance()
            return Neg(self.unary())
        return self.atom()

    def atom(self) -> Expression:
        kind, text, pos = self.advance()
        if kind == "num":
            return Const(float(text))
        if kind == "ident":
            if text in FUNCTIONS:
                self.expect_op("(")
                arg = self.expr()
                self.expect_op(")")
                return Call(text, arg)
            m = re.fullmatch(r"x(\d+)", text)
            if m is None:
                raise UnknownIdentifier(
                    f"unknown identifier {text!r} at position {pos}")
            idx = int(m.group(1))
            slot = idx - self.first_index
            if not 0 <= slot < self.arity:
                lo, hi = self.first_index, self.first_index + self.arity - 1
                raise VariableOutOfRange(
                    f"variable {text!r} outside x{lo}..x{hi}")
            return Var(slot, text)
        if kind == "op" and text == "(":
            e = self.expr()
            self.expect_op(")")
            return e
        raise ExpressionSyntaxError(f"unexpected token {text!r}", pos)


def parse(text: str, arity: int, first_index: int = 1) -> Expression:
    """Parse ``text`` into an AST over ``arity`` variables.

    Variables are named ``x{first_index} .. x{first_index + arity - 1}``;
    graph functions use the default 1, metric entries use 0.
    """
    if arity < 1:
        raise ValueError("arity must be >= 1")
    return _Parser(text, arity, first_index).parse()


# -- evaluation ----------------------------------------------------------------

def _eval(e: Expression, p, m: int) -> Jet3:
    if isinstance(e, Const):
        return Jet3.constant(e.value, m)
    if isinstance(e, Var):
        return Jet3.variable(e.slot, p[e.slot], m)
    if isinstance(e, Add):
        return _eval(e.lhs, p, m) + _eval(e.rhs, p, m)
    if isinstance(e, Sub):
        return _eval(e.lhs, p, m) - _eval(e.rhs, p, m)
    if isinstance(e, Mul):
        return _eval(e.lhs, p, m) * _eval(e.rhs, p, m)
    if isinstance(e, Div):
        return _eval(e.lhs, p, m) / _eval(e.rhs, p, m)
    if isinstance(e, Neg):
        return -_eval(e.arg, p, m)
    if isinstance(e, Pow):
        base = _eval(e.base, p, m)
        if isinstance(e.exponent, int):
            return base.powi(e.exponent)
        # non-integer exponent via exp(q * log(base))
        return base.log().scale(float(e.exponent)).exp()
    if isinstance(e, Call):
        return getattr(_eval(e.arg, p, m), e.func)()
    raise TypeError(f"not an expression node: {e!r}")


def eval_jet3(e: Expression, p) -> Jet3:
    """Evaluate value and all partials through order 3 at point ``p``."""
    p = np.asarray(p, dtype=float)
    try:
        jet = _eval(e, p, len(p))
    except DomainError as err:
        raise DomainError(str(err), point=p) from None
    if not jet.is_finite():
        raise DomainError("non-finite jet", point=p)
    return jet


def eval_value(e: Expression, p) -> float:
    """Value-only evaluation (same domain checks as eval_jet3)."""
    return eval_jet3(e, p).v


def max_slot(e: Expression) -> int:
    """Largest variable slot used, or -1 for a constant expression."""
    if isinstance(e, Var):
        return e.slot
    if isinstance(e, (Add, Sub, Mul, Div)):
        return max(max_slot(e.lhs), max_slot(e.rhs))
    if isinstance(e, Neg):
        return max_slot(e.arg)
    if isinstance(e, Pow):
        return max_slot(e.base)
    if isinstance(e, Call):
        return max_slot(e.arg)
    return -1


def substitute_affine(e: Expression, A: np.ndarray, b: np.ndarray) -> Expression:
    """Replace each variable slot i by the affine form b_i + sum_j A[i,j]*x_j.

    Used to re-express a surface in rotated/translated coordinates.
    """
    A = np.asarray(A, dtype=float)
    b = np.asarray(b, dtype=float)
    subs = []
    for i in range(len(b)):
        node: Expression = Const(float(b[i]))
        for j in range(A.shape[1]):
            if A[i, j] != 0.0:
                node = Add(node, Mul(Const(float(A[i, j])), Var(j, f"x{j + 1}")))
        subs.append(node)

    def rebuild(n: Expression) -> Expression:
        if isinstance(n, Const):
            return n
        if isinstance(n, Var):
            return subs[n.slot]
        if isinstance(n, Add):
            return Add(rebuild(n.lhs), rebuild(n.rhs))
        if isinstance(n, Sub):
            return Sub(rebuild(n.lhs), rebuild(n.rhs))
        if isinstance(n, Mul):
            return Mul(rebuild(n.lhs), rebuild(n.rhs))
        if isinstance(n, Div):
            return Div(rebuild(n.lhs), rebuild(n.rhs))
        if isinstance(n, Neg):
            return Neg(rebuild(n.arg))
        if isinstance(n, Pow):
            return Pow(rebuild(n.base), n.exponent)
        if isinstance(n, Call):
            return Call(n.func, rebuild(n.arg))
        raise TypeError(f"not an expression node: {n!r}")

    return rebuild(e)

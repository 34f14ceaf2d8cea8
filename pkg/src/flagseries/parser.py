"""Expression parser for rational functions in x1..xn (and t, for equations).

Grammar::

    expr   := term (("+" | "-") term)*
    term   := factor (("*" | "/")? factor)*
    factor := atom ("^" ["-"] int)?
    atom   := rational | "x" digits | "t" | "(" expr ")" | "-" factor

Juxtaposition multiplies, so printed series such as ``3/2 x1^2 x2^-1``
parse back.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .errors import FlagSeriesError
from .rational import LaurentPolynomial


class ExpressionSyntaxError(FlagSeriesError, SyntaxError):
    def __init__(self, message: str, offset: int):
        super().__init__(f"{message} at offset {offset}")
        self.offset = offset


class UnknownVariable(FlagSeriesError, ValueError):
    pass


# -- AST ---------------------------------------------------------------


@dataclass(frozen=True)
class Num:
    value: Fraction


@dataclass(frozen=True)
class Var:
    index: int  # 1-based; 0 is the equation variable t


@dataclass(frozen=True)
class Neg:
    operand: object


@dataclass(frozen=True)
class Sum:
    left: object
    right: object


@dataclass(frozen=True)
class Difference:
    left: object
    right: object


@dataclass(frozen=True)
class Product:
    left: object
    right: object


@dataclass(frozen=True)
class Quotient:
    left: object
    right: object


@dataclass(frozen=True)
class Power:
    base: object
    exponent: int


T_VARIABLE = Var(0)


class _Parser:
    def __init__(self, text: str, n: int, allow_t: bool):
        self.data = text.encode("utf-8")
        self.pos = 0
        self.n = n
        self.allow_t = allow_t

    def error(self, message):
        raise ExpressionSyntaxError(message, self.pos)

    def skip(self):
        while self.pos < len(self.data) and self.data[self.pos] in b" \t\r\n":
            self.pos += 1

    def peek(self) -> str:
        self.skip()
        if self.pos < len(self.data):
            return chr(self.data[self.pos])
        return ""

    def take(self, ch):
        if self.peek() != ch:
            self.error(f"expected {ch!r}")
        self.pos += 1

    def integer(self) -> int:
        self.skip()
        start = self.pos
        while self.pos < len(self.data) and chr(self.data[self.pos]).isdigit():
            self.pos += 1
        if start == self.pos:
            self.error("expected an integer")
        return int(self.data[start:self.pos])

    def parse(self):
        node = self.expr()
        if self.peek():
            self.error(f"unexpected {self.peek()!r}")
        return node

    def expr(self):
        node = self.term()
        while self.peek() in ("+", "-"):
            op = self.peek()
            self.pos += 1
            rhs = self.term()
            node = Sum(node, rhs) if op == "+" else Difference(node, rhs)
        return node

    def term(self):
        node = self.factor()
        while True:
            ch = self.peek()
            if ch == "*":
                self.pos += 1
                node = Product(node, self.factor())
            elif ch == "/":
                self.pos += 1
                node = Quotient(node, self.factor())
            elif ch and (ch.isdigit() or ch in "xt("):
                node = Product(node, self.factor())
            else:
                return node

    def factor(self):
        base = self.atom()
        if self.peek() == "^":
            self.pos += 1
            sign = 1
            if self.peek() == "-":
                self.pos += 1
                sign = -1
            return Power(base, sign * self.integer())
        return base

    def atom(self):
        ch = self.peek()
        if ch == "-":
            self.pos += 1
            return Neg(self.factor())
        if ch == "(":
            self.pos += 1
            node = self.expr()
            self.take(")")
            return node
        if ch.isdigit():
            return Num(Fraction(self.integer()))
        if ch == "x":
            start = self.pos
            self.pos += 1
            if not (self.pos < len(self.data) and chr(self.data[self.pos]).isdigit()):
                self.error("expected a variable index after 'x'")
            index = self.integer()
            if not 1 <= index <= self.n:
                self.pos = start
                raise UnknownVariable(f"x{index} at offset {start} exceeds rank {self.n}")
            return Var(index)
        if ch == "t":
            if not self.allow_t:
                raise UnknownVariable(f"'t' at offset {self.pos} is only allowed in equations")
            self.pos += 1
            return T_VARIABLE
        if not ch:
            self.error("unexpected end of input")
        self.error(f"unexpected {ch!r}")


def parse_expression(text: str, n: int, allow_t: bool = False):
    return _Parser(text, n, allow_t).parse()


# -- evaluation ----------------------------------------------------------


class RationalFunction:
    """A quotient of Laurent polynomials, kept unreduced."""

    def __init__(self, num: LaurentPolynomial, den: LaurentPolynomial):
        self.num = num
        self.den = den

    @classmethod
    def of(cls, p: LaurentPolynomial):
        return cls(p, LaurentPolynomial.constant(p.n, 1))

    def __add__(self, other):
        return RationalFunction(self.num * other.den + other.num * self.den, self.den * other.den)

    def __neg__(self):
        return RationalFunction(-self.num, self.den)

    def __sub__(self, other):
        return self + (-other)

    def __mul__(self, other):
        return RationalFunction(self.num * other.num, self.den * other.den)

    def __truediv__(self, other):
        if other.num.is_zero():
            raise ZeroDivisionError("division by zero in expression")
        return RationalFunction(self.num * other.den, self.den * other.num)

    def __pow__(self, k):
        if k >= 0:
            return RationalFunction(self.num ** k, self.den ** k)
        if self.num.is_zero():
            raise ZeroDivisionError("negative power of zero")
        return RationalFunction(self.den ** -k, self.num ** -k)


def to_rational(node, n: int) -> RationalFunction:
    if isinstance(node, Num):
        return RationalFunction.of(LaurentPolynomial.constant(n, node.value))
    if isinstance(node, Var):
        if node.index == 0:
            raise ValueError("'t' cannot appear here")
        return RationalFunction.of(LaurentPolynomial.variable(n, node.index))
    if isinstance(node, Neg):
        return -to_rational(node.operand, n)
    if isinstance(node, Power):
        return to_rational(node.base, n) ** node.exponent
    ops = {Sum: "__add__", Difference: "__sub__", Product: "__mul__", Quotient: "__truediv__"}
    method = ops[type(node)]
    return getattr(to_rational(node.left, n), method)(to_rational(node.right, n))


def to_polynomial_in_t(node, n: int) -> dict:
    """Map ``power of t -> RationalFunction`` coefficient."""
    if isinstance(node, Var) and node.index == 0:
        return {1: to_rational(Num(Fraction(1)), n)}
    if isinstance(node, (Num, Var)):
        return {0: to_rational(node, n)}
    if isinstance(node, Neg):
        return {k: -v for k, v in to_polynomial_in_t(node.operand, n).items()}
    if isinstance(node, (Sum, Difference)):
        left = to_polynomial_in_t(node.left, n)
        right = to_polynomial_in_t(node.right, n)
        if isinstance(node, Difference):
            right = {k: -v for k, v in right.items()}
        out = dict(left)
        for k, v in right.items():
            out[k] = out[k] + v if k in out else v
        return out
    if isinstance(node, Product):
        return _poly_mul(to_polynomial_in_t(node.left, n), to_polynomial_in_t(node.right, n))
    if isinstance(node, Quotient):
        den = to_polynomial_in_t(node.right, n)
        if set(den) != {0}:
            raise ValueError("division by an expression in t")
        return {k: v / den[0] for k, v in to_polynomial_in_t(node.left, n).items()}
    if isinstance(node, Power):
        base = to_polynomial_in_t(node.base, n)
        if set(base) == {0}:
            return {0: base[0] ** node.exponent}
        if node.exponent < 0:
            raise ValueError("negative power of an expression in t")
        out = {0: to_rational(Num(Fraction(1)), n)}
        for _ in range(node.exponent):
            out = _poly_mul(out, base)
        return out
    raise TypeError(f"unknown node {node!r}")


def _poly_mul(left: dict, right: dict) -> dict:
    out: dict = {}
    for i, a in left.items():
        for j, b in right.items():
            out[i + j] = out[i + j] + a * b if i + j in out else a * b
    return out

"""
Polynomial expression parser

Recursive-descent parser for semicolon-separated polynomials in the series
variables T1..TN and the unknowns X1..Xn:

    system := expr (';' expr)* [';']
    expr   := term (('+' | '-') term)*
    term   := unary ('*' unary)*
    unary  := '-' unary | power
    power  := atom ['^' INT]
    atom   := INT ['/' INT] | NAME | '(' expr ')'

For n <= 3 the unknowns may be written X, Y, Z and for N = 1 the series
variable may be written T. Coefficients are read as rationals and mapped
into the field after parsing.
"""

import re
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterator, List, NamedTuple, Optional, Union

from .error import NegativeExponent, PolySyntaxError, UnknownVariable
from .fields import FieldDescriptor
from .series import GradedSeries
from .system import PolySystem, SeriesPolynomial


# Syntax tree

@dataclass(frozen=True)
class Num:
    value: Fraction


@dataclass(frozen=True)
class Var:
    name: str
    line: int = field(default=1, compare=False)
    col: int = field(default=1, compare=False)


@dataclass(frozen=True)
class Neg:
    operand: 'PolyExpr'


@dataclass(frozen=True)
class BinOp:
    op: str
    left: 'PolyExpr'
    right: 'PolyExpr'


@dataclass(frozen=True)
class Pow:
    base: 'PolyExpr'
    exponent: int


PolyExpr = Union[Num, Var, Neg, BinOp, Pow]


# Lexer

TOKEN_PATTERNS = [
    ("INT", r"\d+"),
    ("NAME", r"[A-Za-z][A-Za-z0-9_]*"),
    ("OP", r"[-+*/^();]"),
    ("NEWLINE", r"\n"),
    ("SKIP", r"[ \t\r]+"),
    ("MISMATCH", r"."),
]
TOKEN_RE = re.compile("|".join(f"(?P<{name}>{pattern})" for name, pattern in TOKEN_PATTERNS))


class Token(NamedTuple):
    kind: str
    text: str
    line: int
    col: int


def tokenize(text: str) -> Iterator[Token]:
    line, line_start = 1, 0
    for match in TOKEN_RE.finditer(text):
        kind = match.lastgroup
        col = match.start() - line_start + 1
        if kind == "NEWLINE":
            line, line_start = line + 1, match.end()
            continue
        if kind == "SKIP":
            continue
        if kind == "MISMATCH":
            raise PolySyntaxError(f"unexpected character {match.group()!r}", line, col)
        yield Token(kind, match.group(), line, col)
    yield Token("EOF", "", line, len(text) - line_start + 1)


# Parser

class Parser:
    """Recursive-descent parser over the token stream"""

    def __init__(self, text: str):
        self.tokens = list(tokenize(text))
        self.position = 0

    @property
    def current(self) -> Token:
        return self.tokens[self.position]

    def peek(self, text: str) -> bool:
        return self.current.kind == "OP" and self.current.text == text

    def accept(self, text: str) -> bool:
        if self.peek(text):
            self.position += 1
            return True
        return False

    def expect(self, text: str) -> Token:
        token = self.current
        if not self.accept(text):
            self.error(f"expected {text!r}")
        return token

    def error(self, message: str, token: Optional[Token] = None):
        token = token or self.current
        found = "end of input" if token.kind == "EOF" else repr(token.text)
        raise PolySyntaxError(f"{message}, found {found}", token.line, token.col)

    def parse_system(self) -> List[PolyExpr]:
        exprs = [self.parse_expr()]
        while self.accept(";"):
            if self.current.kind == "EOF":
                break
            exprs.append(self.parse_expr())
        if self.current.kind != "EOF":
            self.error("expected an operator or ';'")
        return exprs

    def parse_expr(self) -> PolyExpr:
        node = self.parse_term()
        while self.peek("+") or self.peek("-"):
            op = self.current.text
            self.position += 1
            node = BinOp(op, node, self.parse_term())
        return node

    def parse_term(self) -> PolyExpr:
        node = self.parse_unary()
        while self.accept("*"):
            node = BinOp("*", node, self.parse_unary())
        return node

    def parse_unary(self) -> PolyExpr:
        if self.accept("-"):
            return Neg(self.parse_unary())
        return self.parse_power()

    def parse_power(self) -> PolyExpr:
        base = self.parse_atom()
        if self.accept("^"):
            token = self.current
            if self.peek("-"):
                raise NegativeExponent("negative exponent", token.line, token.col)
            if token.kind != "INT":
                self.error("expected an integer exponent")
            self.position += 1
            return Pow(base, int(token.text))
        return base

    def parse_atom(self) -> PolyExpr:
        token = self.current
        if token.kind == "INT":
            self.position += 1
            value = Fraction(int(token.text))
            if self.accept("/"):
                denominator = self.current
                if denominator.kind != "INT":
                    self.error("expected an integer denominator")
                if int(denominator.text) == 0:
                    raise PolySyntaxError("zero denominator", denominator.line, denominator.col)
                self.position += 1
                value = Fraction(int(token.text), int(denominator.text))
            return Num(value)
        if token.kind == "NAME":
            self.position += 1
            return Var(token.text, token.line, token.col)
        if self.accept("("):
            node = self.parse_expr()
            self.expect(")")
            return node
        self.error("expected a number, a variable or '('")


def parse_expressions(text: str) -> List[PolyExpr]:
    """Parse text into one syntax tree per polynomial"""
    return Parser(text).parse_system()


# Rendering

def _wrap(node: PolyExpr) -> str:
    text = render(node)
    if isinstance(node, (BinOp, Neg)) or (isinstance(node, Num) and node.value.denominator != 1):
        return f"({text})"
    return text


def render(node: PolyExpr) -> str:
    """Canonical text; parsing it back gives a structurally equal tree"""
    if isinstance(node, Num):
        return str(node.value)
    if isinstance(node, Var):
        return node.name
    if isinstance(node, Neg):
        return f"-{_wrap(node.operand)}"
    if isinstance(node, Pow):
        base = render(node.base) if isinstance(node.base, Var) or (
            isinstance(node.base, Num) and node.base.value.denominator == 1) else f"({render(node.base)})"
        return f"{base}^{node.exponent}"
    left = _wrap(node.left)
    right = _wrap(node.right)
    return f"{left} {node.op} {right}"


# Conversion

class _Scope:
    """Resolves variable names for a given N and n"""

    def __init__(self, num_series_vars: int, num_unknowns: int, descriptor: FieldDescriptor):
        self.num_series_vars = num_series_vars
        self.num_unknowns = num_unknowns
        self.descriptor = descriptor
        self.names = {}
        for j in range(num_series_vars):
            self.names[f"T{j + 1}"] = ("T", j)
        for j in range(num_unknowns):
            self.names[f"X{j + 1}"] = ("X", j)
        if num_series_vars == 1:
            self.names["T"] = ("T", 0)
        if num_unknowns <= 3:
            for j, alias in enumerate("XYZ"[:num_unknowns]):
                self.names[alias] = ("X", j)

    def constant(self, value: Fraction) -> SeriesPolynomial:
        series = GradedSeries.constant(self.descriptor, self.num_series_vars,
                                       self.descriptor.from_fraction(value))
        return SeriesPolynomial.from_series(series, self.num_unknowns)

    def variable(self, node: Var) -> SeriesPolynomial:
        if node.name not in self.names:
            raise UnknownVariable(
                f"unknown variable {node.name!r} for N={self.num_series_vars}, n={self.num_unknowns}",
                node.line, node.col)
        kind, index = self.names[node.name]
        if kind == "X":
            return SeriesPolynomial.unknown(self.descriptor, self.num_series_vars,
                                            self.num_unknowns, index)
        series = GradedSeries.variable(self.descriptor, self.num_series_vars, index)
        return SeriesPolynomial.from_series(series, self.num_unknowns)


def to_polynomial(node: PolyExpr, scope: _Scope) -> SeriesPolynomial:
    if isinstance(node, Num):
        return scope.constant(node.value)
    if isinstance(node, Var):
        return scope.variable(node)
    if isinstance(node, Neg):
        return to_polynomial(node.operand, scope).neg()
    if isinstance(node, Pow):
        return to_polynomial(node.base, scope).power(node.exponent)
    left = to_polynomial(node.left, scope)
    right = to_polynomial(node.right, scope)
    if node.op == "+":
        return left.add(right)
    if node.op == "-":
        return left.sub(right)
    return left.mul(right)


def parse_poly(text: str, num_series_vars: int, num_unknowns: int,
               descriptor: FieldDescriptor) -> PolySystem:
    """
    Parse a semicolon-separated list of polynomials into a PolySystem

    Args:
        text: Polynomials such as ``"X^2 - Z*Y^2"``
        num_series_vars: N
        num_unknowns: n
        descriptor: Coefficient field

    Raises:
        PolySyntaxError: malformed input, with line and column
        UnknownVariable: a name not declared for N and n
        NegativeExponent: an exponent below zero
    """
    scope = _Scope(num_series_vars, num_unknowns, descriptor)
    polys = tuple(to_polynomial(node, scope) for node in parse_expressions(text))
    label = " ; ".join(" ".join(part.split()) for part in text.split(";") if part.strip())
    return PolySystem(descriptor, num_series_vars, num_unknowns, polys, label)

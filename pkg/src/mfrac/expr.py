"""Single-variable expression front-end: parser, printer, evaluation, dual-number AD.

Grammar (whitespace insensitive; 'x' and 't' denote the same variable):

    expr    := term (('+' | '-') term)*
    term    := factor (('*' | '/') factor)*
    factor  := unary ('^' factor)?          right-associative power
    unary   := '-' unary | primary
    primary := number | 'x' | 't' | func '(' expr ')' | '(' expr ')'
    func    := 'sin' | 'cos' | 'exp' | 'ln' | 'sqrt' | 'abs'

Note the power binds a whole unary, so "-x^2" parses as (-x)^2.  Integer
exponents (within 1e-12 of an integer) are evaluated by repeated
multiplication, which keeps negative bases exact; a non-integer exponent over
a negative base is a domain error (real-only semantics).
"""

from __future__ import annotations

import math
import re
from dataclasses import dataclass
from typing import Callable

from .errors import DomainError, ValidationError

__all__ = [
    "Add",
    "Call",
    "Constant",
    "Div",
    "DualNumber",
    "Expr",
    "Mul",
    "Neg",
    "ParseError",
    "Pow",
    "Sub",
    "UnknownIdentifierError",
    "Variable",
    "as_dual_fn",
    "as_fn",
    "evaluate",
    "evaluate_dual",
    "parse",
    "unparse",
]

FUNCTION_NAMES = ("abs", "cos", "exp", "ln", "sin", "sqrt")


class Expr:
    """Base class for expression-tree nodes."""

    __slots__ = ()


@dataclass(frozen=True, slots=True)
class Constant(Expr):
    value: float


@dataclass(frozen=True, slots=True)
class Variable(Expr):
    pass


@dataclass(frozen=True, slots=True)
class Add(Expr):
    left: Expr
    right: Expr


@dataclass(frozen=True, slots=True)
class Sub(Expr):
    left: Expr
    right: Expr


@dataclass(frozen=True, slots=True)
class Mul(Expr):
    left: Expr
    right: Expr


@dataclass(frozen=True, slots=True)
class Div(Expr):
    left: Expr
    right: Expr


@dataclass(frozen=True, slots=True)
class Pow(Expr):
    base: Expr
    exponent: Expr


@dataclass(frozen=True, slots=True)
class Neg(Expr):
    operand: Expr


@dataclass(frozen=True, slots=True)
class Call(Expr):
    func: str
    arg: Expr


class ParseError(ValidationError):
    """Syntax error carrying the byte offset and the token set expected there."""

    def __init__(self, message: str, offset: int, expected: tuple[str, ...] = ()):
        detail = f"{message} at byte {offset}"
        if expected:
            detail += " (expected " + ", ".join(sorted(expected)) + ")"
        super().__init__(detail)
        self.offset = offset
        self.expected = frozenset(expected)


class UnknownIdentifierError(ParseError):
    def __init__(self, name: str, offset: int):
        super().__init__(f"unknown identifier '{name}'", offset)
        self.name = name


_TOKEN_RE = re.compile(
    r"(?P<number>(?:\d+\.?\d*|\.\d+)(?:[eE][+-]?\d+)?)"
    r"|(?P<name>[A-Za-z]+)"
    r"|(?P<op>[-+*/^()])"
)

_PRIMARY_EXPECTED = ("number", "'x'", "'t'", "function name", "'('", "'-'")
_OPERATOR_EXPECTED = ("end of input", "'+'", "'-'", "'*'", "'/'", "'^'", "')'")


def _byte_offset(source: str, index: int) -> int:
    return len(source[:index].encode("utf-8"))


def _tokenize(source: str) -> list[tuple[str, str, int]]:
    tokens = []
    pos = 0
    n = len(source)
    while pos < n:
        if source[pos].isspace():
            pos += 1
            continue
        m = _TOKEN_RE.match(source, pos)
        if m is None:
            raise ParseError(
                f"unrecognized character {source[pos]!r}", _byte_offset(source, pos)
            )
        kind = m.lastgroup
        text = m.group()
        tokens.append((kind if kind != "op" else text, text, pos))
        pos = m.end()
    return tokens


class _Parser:
    def __init__(self, source: str, tokens: list[tuple[str, str, int]]):
        self.source = source
        self.tokens = tokens
        self.i = 0

    def peek(self):
        return self.tokens[self.i] if self.i < len(self.tokens) else None

    def advance(self):
        tok = self.tokens[self.i]
        self.i += 1
        return tok

    def fail(self, message: str, expected: tuple[str, ...]):
        tok = self.peek()
        if tok is None:
            offset = _byte_offset(self.source, len(self.source))
            raise ParseError(f"{message}: unexpected end of input", offset, expected)
        raise ParseError(
            f"{message}: unexpected {tok[1]!r}", _byte_offset(self.source, tok[2]), expected
        )

    def expect(self, op: str, context: str):
        tok = self.peek()
        if tok is None or tok[0] != op:
            self.fail(context, (f"'{op}'",))
        return self.advance()

    def parse_expr(self) -> Expr:
        node = self.parse_term()
        while (tok := self.peek()) is not None and tok[0] in ("+", "-"):
            self.advance()
            right = self.parse_term()
            node = Add(node, right) if tok[0] == "+" else Sub(node, right)
        return node

    def parse_term(self) -> Expr:
        node = self.parse_factor()
        while (tok := self.peek()) is not None and tok[0] in ("*", "/"):
            self.advance()
            right = self.parse_factor()
            node = Mul(node, right) if tok[0] == "*" else Div(node, right)
        return node

    def parse_factor(self) -> Expr:
        base = self.parse_unary()
        if (tok := self.peek()) is not None and tok[0] == "^":
            self.advance()
            return Pow(base, self.parse_factor())
        return base

    def parse_unary(self) -> Expr:
        if (tok := self.peek()) is not None and tok[0] == "-":
            self.advance()
            return Neg(self.parse_unary())
        return self.parse_primary()

    def parse_primary(self) -> Expr:
        tok = self.peek()
        if tok is None:
            self.fail("expected a value", _PRIMARY_EXPECTED)
        kind, text, pos = tok
        if kind == "number":
            self.advance()
            return Constant(float(text))
        if kind == "name":
            self.advance()
            if text in ("x", "t"):
                return Variable()
            if text in FUNCTION_NAMES:
                self.expect("(", f"after function '{text}'")
                arg = self.parse_expr()
                self.expect(")", f"closing the argument of '{text}'")
                return Call(text, arg)
            raise UnknownIdentifierError(text, _byte_offset(self.source, pos))
        if kind == "(":
            self.advance()
            node = self.parse_expr()
            self.expect(")", "closing a parenthesized expression")
            return node
        self.fail("expected a value", _PRIMARY_EXPECTED)


def parse(source: str) -> Expr:
    """Parse source text into an expression tree."""
    if not isinstance(source, str):
        raise ValidationError(f"expression source must be a string, got {type(source).__name__}")
    parser = _Parser(source, _tokenize(source))
    node = parser.parse_expr()
    if parser.peek() is not None:
        parser.fail("trailing input", _OPERATOR_EXPECTED)
    return node


# Printing uses the grammar's binding levels so parse(unparse(e)) == e.
_LEVEL_EXPR, _LEVEL_TERM, _LEVEL_FACTOR, _LEVEL_UNARY, _LEVEL_PRIMARY = range(5)


def _fmt(e: Expr, required: int) -> str:
    if isinstance(e, Constant):
        return repr(e.value)
    if isinstance(e, Variable):
        return "x"
    if isinstance(e, Call):
        return f"{e.func}({_fmt(e.arg, _LEVEL_EXPR)})"
    if isinstance(e, Neg):
        natural = _LEVEL_UNARY
        body = "-" + _fmt(e.operand, _LEVEL_UNARY)
    elif isinstance(e, Pow):
        natural = _LEVEL_FACTOR
        body = _fmt(e.base, _LEVEL_UNARY) + "^" + _fmt(e.exponent, _LEVEL_FACTOR)
    elif isinstance(e, (Mul, Div)):
        natural = _LEVEL_TERM
        op = "*" if isinstance(e, Mul) else "/"
        body = _fmt(e.left, _LEVEL_TERM) + op + _fmt(e.right, _LEVEL_FACTOR)
    elif isinstance(e, (Add, Sub)):
        natural = _LEVEL_EXPR
        op = "+" if isinstance(e, Add) else "-"
        body = _fmt(e.left, _LEVEL_EXPR) + op + _fmt(e.right, _LEVEL_TERM)
    else:
        raise ValidationError(f"not an Expr node: {e!r}")
    return body if natural >= required else f"({body})"


def unparse(e: Expr) -> str:
    """Render a tree back to source text that reparses to the identical tree."""
    return _fmt(e, _LEVEL_EXPR)


def _int_pow(base: float, n: int, node: Expr) -> float:
    # Square-and-multiply: repeated multiplication, so negative bases stay exact.
    if n < 0 and base == 0.0:
        raise DomainError(f"zero base with negative exponent in '{unparse(node)}'")
    acc = 1.0
    b = base
    m = abs(n)
    while m:
        if m & 1:
            acc *= b
        m >>= 1
        if m:
            b *= b
    return 1.0 / acc if n < 0 else acc


def _pow_value(base: float, p: float, node: Expr) -> float:
    n = round(p)
    if abs(p - n) < 1e-12:
        return _int_pow(base, int(n), node)
    if base < 0.0:
        raise DomainError(
            f"negative base with non-integer exponent in '{unparse(node)}'"
        )
    if base == 0.0 and p < 0.0:
        raise DomainError(f"zero base with negative exponent in '{unparse(node)}'")
    return base**p


def _call_value(name: str, v: float, node: Expr) -> float:
    if name == "sin":
        return math.sin(v)
    if name == "cos":
        return math.cos(v)
    if name == "exp":
        try:
            return math.exp(v)
        except OverflowError:
            raise DomainError(f"exp overflow in '{unparse(node)}'") from None
    if name == "ln":
        if v <= 0.0:
            raise DomainError(f"ln of non-positive value {v} in '{unparse(node)}'")
        return math.log(v)
    if name == "sqrt":
        if v < 0.0:
            raise DomainError(f"sqrt of negative value {v} in '{unparse(node)}'")
        return math.sqrt(v)
    if name == "abs":
        return abs(v)
    raise ValidationError(f"unsupported function '{name}'")


def evaluate(e: Expr, t: float) -> float:
    """Evaluate the expression at variable value t."""
    match e:
        case Constant(value=v):
            return v
        case Variable():
            return t
        case Add(left=l, right=r):
            return evaluate(l, t) + evaluate(r, t)
        case Sub(left=l, right=r):
            return evaluate(l, t) - evaluate(r, t)
        case Mul(left=l, right=r):
            return evaluate(l, t) * evaluate(r, t)
        case Div(left=l, right=r):
            den = evaluate(r, t)
            if den == 0.0:
                raise DomainError(f"division by zero in '{unparse(e)}'")
            return evaluate(l, t) / den
        case Pow(base=b, exponent=x):
            return _pow_value(evaluate(b, t), evaluate(x, t), e)
        case Neg(operand=o):
            return -evaluate(o, t)
        case Call(func=name, arg=a):
            return _call_value(name, evaluate(a, t), e)
    raise ValidationError(f"not an Expr node: {e!r}")


@dataclass(frozen=True, slots=True)
class DualNumber:
    """Value and first derivative propagated together (forward-mode AD)."""

    val: float
    der: float

    def _coerce(self, other) -> "DualNumber":
        if isinstance(other, DualNumber):
            return other
        return DualNumber(float(other), 0.0)

    def __add__(self, other):
        o = self._coerce(other)
        return DualNumber(self.val + o.val, self.der + o.der)

    __radd__ = __add__

    def __sub__(self, other):
        o = self._coerce(other)
        return DualNumber(self.val - o.val, self.der - o.der)

    def __rsub__(self, other):
        o = self._coerce(other)
        return DualNumber(o.val - self.val, o.der - self.der)

    def __mul__(self, other):
        o = self._coerce(other)
        return DualNumber(self.val * o.val, self.val * o.der + self.der * o.val)

    __rmul__ = __mul__

    def __truediv__(self, other):
        o = self._coerce(other)
        if o.val == 0.0:
            raise DomainError("dual division by a zero value")
        return DualNumber(
            self.val / o.val, (self.der * o.val - self.val * o.der) / (o.val * o.val)
        )

    def __rtruediv__(self, other):
        return self._coerce(other).__truediv__(self)

    def __neg__(self):
        return DualNumber(-self.val, -self.der)


def _call_dual(name: str, u: DualNumber, node: Expr) -> DualNumber:
    if name == "sin":
        return DualNumber(math.sin(u.val), math.cos(u.val) * u.der)
    if name == "cos":
        return DualNumber(math.cos(u.val), -math.sin(u.val) * u.der)
    if name == "exp":
        try:
            ev = math.exp(u.val)
        except OverflowError:
            raise DomainError(f"exp overflow in '{unparse(node)}'") from None
        return DualNumber(ev, ev * u.der)
    if name == "ln":
        if u.val <= 0.0:
            raise DomainError(f"ln of non-positive value {u.val} in '{unparse(node)}'")
        return DualNumber(math.log(u.val), u.der / u.val)
    if name == "sqrt":
        if u.val < 0.0:
            raise DomainError(f"sqrt of negative value {u.val} in '{unparse(node)}'")
        if u.val == 0.0:
            raise DomainError(f"sqrt is not differentiable at 0 in '{unparse(node)}'")
        root = math.sqrt(u.val)
        return DualNumber(root, u.der / (2.0 * root))
    if name == "abs":
        if u.val == 0.0:
            raise DomainError(f"abs is not differentiable at 0 in '{unparse(node)}'")
        return DualNumber(abs(u.val), u.der if u.val > 0.0 else -u.der)
    raise ValidationError(f"unsupported function '{name}'")


def _pow_dual(b: DualNumber, x: DualNumber, node: Expr) -> DualNumber:
    p = x.val
    n = round(p)
    if abs(p - n) < 1e-12:
        n = int(n)
        val = _int_pow(b.val, n, node)
        if x.der == 0.0:
            der = 0.0 if n == 0 else n * _int_pow(b.val, n - 1, node) * b.der
        else:
            if b.val <= 0.0:
                raise DomainError(
                    f"power with varying exponent needs a positive base in '{unparse(node)}'"
                )
            der = val * (x.der * math.log(b.val) + p * b.der / b.val)
        return DualNumber(val, der)
    if b.val < 0.0:
        raise DomainError(
            f"negative base with non-integer exponent in '{unparse(node)}'"
        )
    if b.val == 0.0:
        if p < 0.0:
            raise DomainError(f"zero base with negative exponent in '{unparse(node)}'")
        raise DomainError(
            f"fractional power is not differentiable at a zero base in '{unparse(node)}'"
        )
    val = b.val**p
    if x.der == 0.0:
        der = p * b.val ** (p - 1.0) * b.der
    else:
        der = val * (x.der * math.log(b.val) + p * b.der / b.val)
    return DualNumber(val, der)


def evaluate_dual(e: Expr, t: float) -> DualNumber:
    """Evaluate the expression and its derivative at t.

    The value component follows the same arithmetic path as :func:`evaluate`,
    so the two agree bitwise.
    """
    match e:
        case Constant(value=v):
            return DualNumber(v, 0.0)
        case Variable():
            return DualNumber(t, 1.0)
        case Add(left=l, right=r):
            return evaluate_dual(l, t) + evaluate_dual(r, t)
        case Sub(left=l, right=r):
            return evaluate_dual(l, t) - evaluate_dual(r, t)
        case Mul(left=l, right=r):
            return evaluate_dual(l, t) * evaluate_dual(r, t)
        case Div(left=l, right=r):
            den = evaluate_dual(r, t)
            if den.val == 0.0:
                raise DomainError(f"division by zero in '{unparse(e)}'")
            return evaluate_dual(l, t) / den
        case Pow(base=b, exponent=x):
            return _pow_dual(evaluate_dual(b, t), evaluate_dual(x, t), e)
        case Neg(operand=o):
            return -evaluate_dual(o, t)
        case Call(func=name, arg=a):
            return _call_dual(name, evaluate_dual(a, t), e)
    raise ValidationError(f"not an Expr node: {e!r}")


def as_fn(e: Expr) -> Callable[[float], float]:
    """Wrap a tree as a plain real-valued function of the variable."""
    return lambda t: evaluate(e, t)


def as_dual_fn(e: Expr) -> Callable[[float], DualNumber]:
    """Wrap a tree as a dual-valued function of the variable."""
    return lambda t: evaluate_dual(e, t)

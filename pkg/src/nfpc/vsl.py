"""The VSL constraint subset: relational atoms combined with ``and``/``or``.

Literals keep their written text so that ``200.00`` is emitted exactly as
typed, while comparisons use exact decimal arithmetic.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass
from decimal import Decimal
from typing import Union

from .errors import OrderingUnsupported, ParseError, TypeMismatch
from .lexer import EOF, NAME, NUMBER, OP, PUNCT, STRING, TokenStream, quote

RESERVED = frozenset({"and", "or", "true", "false"})


class RelOp(enum.Enum):
    EQ = "=="
    NE = "!="
    LT = "<"
    LE = "<="
    GT = ">"
    GE = ">="

    @property
    def ordered(self) -> bool:
        return self not in (RelOp.EQ, RelOp.NE)


@dataclass(frozen=True)
class Number:
    text: str

    @property
    def decimal(self) -> Decimal:
        return Decimal(self.text)

    @property
    def is_integral(self) -> bool:
        return "." not in self.text


@dataclass(frozen=True)
class Text:
    value: str


@dataclass(frozen=True)
class Bool:
    value: bool


@dataclass(frozen=True)
class Quantity:
    """A ``(value, "unit")`` tuple literal."""

    value: str
    unit: str

    def __post_init__(self):
        if not self.unit:
            raise ValueError("unit must be non-empty")
        Decimal(self.value)

    @property
    def number(self) -> Number:
        return Number(self.value)


VslLiteral = Union[Number, Text, Bool, Quantity]


@dataclass(frozen=True)
class Rel:
    nfp: str
    op: RelOp
    value: VslLiteral


@dataclass(frozen=True)
class And:
    children: tuple

    def __post_init__(self):
        if len(self.children) < 2:
            raise ValueError("And needs at least two children")


@dataclass(frozen=True)
class Or:
    children: tuple

    def __post_init__(self):
        if len(self.children) < 2:
            raise ValueError("Or needs at least two children")


VslExpression = Union[Or, And, Rel]


# -- parsing -----------------------------------------------------------------


def parse_literal(ts: TokenStream) -> VslLiteral:
    tok = ts.current
    if ts.accept(PUNCT, "("):
        num = ts.expect(NUMBER, what="number")
        ts.expect(PUNCT, ",")
        unit = ts.expect(STRING, what="unit string")
        ts.expect(PUNCT, ")")
        if not unit.value:
            raise ts.error("unit must be non-empty", unit)
        return Quantity(num.text, unit.value)
    if ts.at(NUMBER):
        return Number(ts.advance().text)
    if ts.at(STRING):
        return Text(ts.advance().value)
    if ts.at_keyword("true") or ts.at_keyword("false"):
        return Bool(ts.advance().text == "true")
    raise ts.error(f"expected literal, got {tok.describe()}")


def _parse_atom(ts: TokenStream) -> VslExpression:
    if ts.accept(PUNCT, "("):
        inner = _parse_or(ts)
        ts.expect(PUNCT, ")")
        return inner
    tok = ts.current
    if tok.kind != NAME or tok.text in RESERVED:
        raise ts.error(f"expected NFP name or '(', got {tok.describe()}")
    ts.advance()
    op_tok = ts.current
    if op_tok.kind != OP:
        raise ts.error(f"expected relational operator, got {op_tok.describe()}")
    ts.advance()
    return Rel(tok.text, RelOp(op_tok.text), parse_literal(ts))


def _flatten(cls, parts: list) -> VslExpression:
    flat = []
    for part in parts:
        flat.extend(part.children if isinstance(part, cls) else [part])
    return flat[0] if len(flat) == 1 else cls(tuple(flat))


def _parse_and(ts: TokenStream) -> VslExpression:
    parts = [_parse_atom(ts)]
    while ts.accept(NAME, "and"):
        parts.append(_parse_atom(ts))
    return _flatten(And, parts)


def _parse_or(ts: TokenStream) -> VslExpression:
    parts = [_parse_and(ts)]
    while ts.accept(NAME, "or"):
        parts.append(_parse_and(ts))
    return _flatten(Or, parts)


def parse_expression(ts: TokenStream) -> VslExpression:
    """Parse one expression from ``ts``, leaving the cursor after it."""
    if ts.at(EOF):
        raise ts.error("empty expression")
    return _parse_or(ts)


def parse_vsl(text: str) -> VslExpression:
    """Parse a complete VSL expression.

    Nested aggregations of the same kind are flattened, so
    ``(a and b) and c`` yields a single three-child ``And``.
    """
    ts = TokenStream.from_text(text)
    expr = parse_expression(ts)
    if not ts.at(EOF):
        raise ts.error(f"unexpected {ts.current.describe()} after expression")
    return expr


# -- printing ----------------------------------------------------------------


def print_literal(lit: VslLiteral) -> str:
    if isinstance(lit, Quantity):
        return f"({lit.value}, {quote(lit.unit)})"
    if isinstance(lit, Number):
        return lit.text
    if isinstance(lit, Text):
        return quote(lit.value)
    return "true" if lit.value else "false"


def print_vsl(expr: VslExpression) -> str:
    if isinstance(expr, Rel):
        return f"{expr.nfp} {expr.op.value} {print_literal(expr.value)}"
    if isinstance(expr, Or):
        return " or ".join(print_vsl(c) for c in expr.children)
    parts = []
    for child in expr.children:
        s = print_vsl(child)
        parts.append(f"({s})" if isinstance(child, Or) else s)
    return " and ".join(parts)


# -- normal form -------------------------------------------------------------


def _dedup(items):
    seen = []
    for item in items:
        if item not in seen:
            seen.append(item)
    return seen


def to_dnf(expr: VslExpression) -> list[list[Rel]]:
    """Rewrite ``expr`` as a list of conjunctions of relations.

    Leaves keep source order inside each conjunct; repeated leaves and
    repeated conjuncts are dropped.
    """
    if isinstance(expr, Rel):
        return [[expr]]
    if isinstance(expr, Or):
        out = []
        for child in expr.children:
            out.extend(to_dnf(child))
        return _dedup(out)
    product: list[list[Rel]] = [[]]
    for child in expr.children:
        product = [left + right for left in product for right in to_dnf(child)]
    return _dedup([_dedup(conj) for conj in product])


def leaves(expr: VslExpression) -> list[Rel]:
    if isinstance(expr, Rel):
        return [expr]
    out = []
    for child in expr.children:
        out.extend(leaves(child))
    return out


# -- evaluation --------------------------------------------------------------


def _kind(lit) -> str:
    if isinstance(lit, (Number, Quantity)):
        return "number"
    if isinstance(lit, Text):
        return "text"
    if isinstance(lit, Bool):
        return "bool"
    raise TypeMismatch(f"not a literal: {lit!r}")


def compare(op: RelOp, actual: VslLiteral, expected: VslLiteral) -> bool:
    """Apply ``actual <op> expected`` for two scalar literals of the same kind."""
    a_kind, e_kind = _kind(actual), _kind(expected)
    if a_kind != e_kind:
        raise TypeMismatch(f"cannot compare {a_kind} value with {e_kind} literal")
    if a_kind == "number":
        a, e = Decimal(_number_text(actual)), Decimal(_number_text(expected))
    else:
        if op.ordered:
            raise OrderingUnsupported(f"operator {op.value} is not defined on {a_kind} values")
        a, e = actual.value, expected.value
    if op is RelOp.EQ:
        return a == e
    if op is RelOp.NE:
        return a != e
    if op is RelOp.LT:
        return a < e
    if op is RelOp.LE:
        return a <= e
    if op is RelOp.GT:
        return a > e
    return a >= e


def _number_text(lit) -> str:
    return lit.value if isinstance(lit, Quantity) else lit.text


def eval_rel(rel: Rel, value: VslLiteral, unit: str | None = None) -> bool:
    """Truth of ``rel`` for a concrete NFP value and optional unit.

    A tuple target holds only when the number comparison holds and the
    unit is string-equal to the target unit.
    """
    if isinstance(value, Quantity):
        raise TypeMismatch("runtime values are scalars; pass the unit separately")
    target = rel.value
    if isinstance(target, Quantity):
        if not isinstance(value, Number):
            raise TypeMismatch(f"{rel.nfp}: number value required")
        return compare(rel.op, value, target.number) and unit == target.unit
    return compare(rel.op, value, target)


def eval_expr(expr: VslExpression, lookup) -> bool:
    """Evaluate ``expr``; ``lookup(nfp)`` returns ``(value, unit_or_None)``."""
    if isinstance(expr, Rel):
        return eval_rel(expr, *lookup(expr.nfp))
    if isinstance(expr, Or):
        return any(eval_expr(c, lookup) for c in expr.children)
    return all(eval_expr(c, lookup) for c in expr.children)

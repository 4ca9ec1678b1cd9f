"""WS-Policy meta-model: policies of alternatives of constraint-function assertions.

Policies are kept in normal form (ExactlyOne over All). A policy is
satisfied when at least one alternative has all of its functions true; an
empty alternative is vacuously true.
"""

from __future__ import annotations

import enum
import re
from dataclasses import dataclass
from typing import Iterable, Mapping

from .errors import MissingValue, ParseError, TypeMismatch, UnsupportedFunction
from .lexer import EOF, TokenStream
from .model import SemanticAnnotation
from .nfp_types import XsdType
from .vsl import Bool, Number, RelOp, Text, VslLiteral, compare, parse_literal

DEFAULT_DOMAIN = "user-defined"

_OP_WORDS = {
    RelOp.EQ: "equals",
    RelOp.NE: "not-equals",
    RelOp.LT: "less-than",
    RelOp.LE: "less-than-or-equals",
    RelOp.GT: "greater-than",
    RelOp.GE: "greater-than-or-equals",
}
_WORD_OPS = {v: k for k, v in _OP_WORDS.items()}


def function_id(op: RelOp, xsd_type: XsdType) -> str:
    """Constraint function name for ``op`` over values of ``xsd_type``."""
    if op.ordered and not xsd_type.numeric:
        raise UnsupportedFunction(f"no {_OP_WORDS[op]} function for {xsd_type.value}")
    return f"{xsd_type.local_name}-{_OP_WORDS[op]}"


def split_function_id(name: str) -> tuple[XsdType, RelOp]:
    """Inverse of :func:`function_id`."""
    typeword, _, opword = name.partition("-")
    try:
        xsd_type = XsdType.parse(typeword)
        op = _WORD_OPS[opword]
    except (ValueError, KeyError):
        raise UnsupportedFunction(f"unknown constraint function {name!r}") from None
    if function_id(op, xsd_type) != name:
        raise UnsupportedFunction(f"unknown constraint function {name!r}")
    return xsd_type, op


class SubjectKind(str, enum.Enum):
    SERVICE = "Service"
    ENDPOINT = "Endpoint"


@dataclass(frozen=True)
class PolicySubjectRef:
    kind: SubjectKind
    name: str


@dataclass(frozen=True)
class VocabularyItem:
    name: str
    xsd_value_type: XsdType
    has_unit: bool = False
    semantic: SemanticAnnotation | None = None
    domain: str = DEFAULT_DOMAIN

    @property
    def value_path(self) -> str:
        return f"{self.name}/{self.name}Value"

    @property
    def unit_path(self) -> str | None:
        return f"{self.name}/{self.name}Unit" if self.has_unit else None


@dataclass(frozen=True)
class PolicyConstraintsFunction:
    operator: str
    literal_value: str
    literal_xsd_type: XsdType
    vocabulary_item: VocabularyItem
    attribute_id: str

    def expected(self) -> VslLiteral:
        return typed_literal(self.literal_value, self.literal_xsd_type)


@dataclass(frozen=True)
class PolicyAssertion:
    functions: tuple[PolicyConstraintsFunction, ...]

    def __post_init__(self):
        if not self.functions:
            raise ValueError("an assertion needs at least one function")


@dataclass(frozen=True)
class PolicyAlternative:
    assertions: tuple[PolicyAssertion, ...] = ()

    def functions(self) -> Iterable[PolicyConstraintsFunction]:
        for assertion in self.assertions:
            yield from assertion.functions


@dataclass(frozen=True)
class Policy:
    id: str
    subject: PolicySubjectRef
    alternatives: tuple[PolicyAlternative, ...]


def typed_literal(text: str, xsd_type: XsdType) -> VslLiteral:
    if xsd_type.numeric:
        return Number(text)
    if xsd_type is XsdType.BOOLEAN:
        return Bool(text == "true")
    return Text(text)


# -- normalization -----------------------------------------------------------


def normalize(policy: Policy) -> Policy:
    """Drop duplicate assertions inside alternatives and duplicate alternatives.

    Two alternatives are duplicates when their assertion sets are equal.
    First occurrences keep their position.
    """
    alternatives = []
    seen_keys = set()
    for alt in policy.alternatives:
        assertions = tuple(dict.fromkeys(alt.assertions))
        key = frozenset(assertions)
        if key in seen_keys:
            continue
        seen_keys.add(key)
        alternatives.append(PolicyAlternative(assertions))
    return Policy(policy.id, policy.subject, tuple(alternatives))


def without_empty_alternatives(policy: Policy) -> Policy:
    return Policy(policy.id, policy.subject,
                  tuple(a for a in policy.alternatives if a.assertions))


def vocabulary_of(policy: Policy) -> list[VocabularyItem]:
    """Vocabulary items referenced by ``policy`` in first-use order."""
    out: dict[str, VocabularyItem] = {}
    for alt in policy.alternatives:
        for fn in alt.functions():
            out.setdefault(fn.vocabulary_item.name, fn.vocabulary_item)
    return list(out.values())


# -- evaluation --------------------------------------------------------------


Valuation = Mapping[str, VslLiteral]


@dataclass(frozen=True)
class FunctionFailure:
    alternative: int
    function: PolicyConstraintsFunction
    actual: VslLiteral

    def describe(self) -> str:
        fn = self.function
        return (f"alternative {self.alternative}: {fn.operator} on {fn.attribute_id} "
                f"(expected {fn.literal_value}, got {_show(self.actual)})")


@dataclass(frozen=True)
class SatisfactionReport:
    policy_id: str
    satisfied: bool
    alternative: int | None = None
    failures: tuple[FunctionFailure, ...] = ()


def _show(lit: VslLiteral) -> str:
    if isinstance(lit, Number):
        return lit.text
    if isinstance(lit, Bool):
        return "true" if lit.value else "false"
    return lit.value


def evaluate_function(fn: PolicyConstraintsFunction, actual: VslLiteral) -> bool:
    xsd_type, op = split_function_id(fn.operator)
    if xsd_type is XsdType.INTEGER and isinstance(actual, Number) and not actual.is_integral:
        raise TypeMismatch(f"{fn.attribute_id}: integer value required, got {actual.text}")
    try:
        return compare(op, actual, typed_literal(fn.literal_value, xsd_type))
    except TypeMismatch as exc:
        raise TypeMismatch(f"{fn.attribute_id}: {exc}") from None


def evaluate(policy: Policy, valuation: Valuation) -> SatisfactionReport:
    """Check ``valuation`` against ``policy``.

    Every referenced attribute id must be present, otherwise
    :class:`MissingValue` is raised before any comparison.
    """
    for alt in policy.alternatives:
        for fn in alt.functions():
            if fn.attribute_id not in valuation:
                raise MissingValue(fn.attribute_id)
    failures = []
    for index, alt in enumerate(policy.alternatives):
        failure = None
        for fn in alt.functions():
            actual = valuation[fn.attribute_id]
            if not evaluate_function(fn, actual):
                failure = FunctionFailure(index, fn, actual)
                break
        if failure is None:
            return SatisfactionReport(policy.id, True, index)
        failures.append(failure)
    return SatisfactionReport(policy.id, False, None, tuple(failures))


_PATH_LINE = re.compile(r"^\s*([A-Za-z_][A-Za-z0-9_]*(?:/[A-Za-z_][A-Za-z0-9_]*)*)\s*=(.*)$")


def parse_valuation(text: str) -> dict[str, VslLiteral]:
    """Read ``Attribute/Path = literal`` lines into a valuation mapping."""
    values: dict[str, VslLiteral] = {}
    for lineno, line in enumerate(text.splitlines(), start=1):
        stripped = line.strip()
        if not stripped or stripped.startswith("#"):
            continue
        m = _PATH_LINE.match(line)
        if m is None:
            raise ParseError("expected 'Attribute/Path = literal'", lineno, 1)
        path, rhs = m.group(1), m.group(2)
        column = m.start(2) + 1
        try:
            ts = TokenStream.from_text(rhs)
            literal = parse_literal(ts)
            if not ts.at(EOF):
                raise ts.error(f"unexpected {ts.current.describe()} after literal")
        except ParseError as exc:
            raise ParseError(exc.message, lineno, column + max(exc.column - 1, 0)) from None
        if not isinstance(literal, (Number, Text, Bool)):
            raise ParseError("valuation values are scalars; give the unit on its own path",
                             lineno, column)
        if path in values:
            raise ParseError(f"duplicate value for {path}", lineno, 1)
        values[path] = literal
    return values

"""Basic NFP types: XSD value type and admissible units for each type name."""

from __future__ import annotations

import enum
from dataclasses import dataclass, field
from types import MappingProxyType
from typing import Iterable, Mapping

from .errors import NotFound, ParseError, TypeDiagnostic
from .lexer import EOF, NAME, PUNCT, STRING, TokenStream
from .vsl import Bool, Number, Quantity, Text, VslLiteral


class XsdType(str, enum.Enum):
    DOUBLE = "xsd:double"
    INTEGER = "xsd:integer"
    BOOLEAN = "xsd:boolean"
    STRING = "xsd:string"

    @property
    def local_name(self) -> str:
        return self.value.split(":", 1)[1]

    @property
    def numeric(self) -> bool:
        return self in (XsdType.DOUBLE, XsdType.INTEGER)

    @classmethod
    def parse(cls, text: str) -> "XsdType":
        qualified = text if text.startswith("xsd:") else "xsd:" + text
        try:
            return cls(qualified)
        except ValueError:
            raise ValueError(f"unsupported XSD type {text!r}") from None


@dataclass(frozen=True)
class NfpTypeEntry:
    """One library type. ``units`` empty and ``unit_open`` false means unitless."""

    name: str
    xsd_value_type: XsdType
    units: tuple[str, ...] = ()
    unit_open: bool = False

    @property
    def has_unit(self) -> bool:
        return self.unit_open or bool(self.units)

    def admits_unit(self, unit: str) -> bool:
        return self.unit_open or unit in self.units


_BUILTINS = (
    NfpTypeEntry("NFP_Real", XsdType.DOUBLE, unit_open=True),
    NfpTypeEntry("NFP_Integer", XsdType.INTEGER, unit_open=True),
    NfpTypeEntry("NFP_Boolean", XsdType.BOOLEAN),
    NfpTypeEntry("NFP_String", XsdType.STRING),
    NfpTypeEntry("NFP_Percentage", XsdType.INTEGER, ("%",)),
    NfpTypeEntry("NFP_Price", XsdType.DOUBLE, unit_open=True),
    NfpTypeEntry("NFP_Duration", XsdType.DOUBLE, ("s", "ms", "us", "min", "hr")),
    NfpTypeEntry("NFP_DataSize", XsdType.DOUBLE, ("bit", "Byte", "KB", "MB", "GB")),
    NfpTypeEntry("NFP_Frequency", XsdType.DOUBLE, ("Hz", "kHz", "MHz", "GHz")),
)


@dataclass(frozen=True)
class TypeLibrary:
    """Immutable name -> entry table; built-ins cannot be shadowed."""

    entries: Mapping[str, NfpTypeEntry] = field(
        default_factory=lambda: MappingProxyType({e.name: e for e in _BUILTINS}))

    def lookup(self, name: str) -> NfpTypeEntry:
        try:
            return self.entries[name]
        except KeyError:
            raise NotFound(f"unknown NFP type {name!r}") from None

    def __contains__(self, name: str) -> bool:
        return name in self.entries

    def extend(self, extra: Iterable[NfpTypeEntry]) -> "TypeLibrary":
        table = dict(self.entries)
        for entry in extra:
            if entry.name in table:
                raise ValueError(f"NFP type {entry.name!r} is already defined")
            table[entry.name] = entry
        return TypeLibrary(MappingProxyType(table))


BUILTIN_LIBRARY = TypeLibrary()


def lookup_type(name: str, library: TypeLibrary | None = None) -> NfpTypeEntry:
    return (library or BUILTIN_LIBRARY).lookup(name)


def check_literal(entry: NfpTypeEntry, literal: VslLiteral) -> None:
    """Raise :class:`TypeDiagnostic` unless ``literal`` fits ``entry``."""
    expected = entry.xsd_value_type
    if isinstance(literal, Quantity):
        if not expected.numeric:
            raise TypeDiagnostic(f"{entry.name} expects {expected.value}, got a (value, unit) tuple")
        _check_number(entry, literal.number)
        if not entry.admits_unit(literal.unit):
            raise TypeDiagnostic(f"inadmissible unit {literal.unit!r} for {entry.name}")
        return
    if isinstance(literal, Number):
        if not expected.numeric:
            raise TypeDiagnostic(f"{entry.name} expects {expected.value}, got number {literal.text}")
        _check_number(entry, literal)
    elif isinstance(literal, Text):
        if expected is not XsdType.STRING:
            raise TypeDiagnostic(f"{entry.name} expects {expected.value}, got string")
    elif isinstance(literal, Bool):
        if expected is not XsdType.BOOLEAN:
            raise TypeDiagnostic(f"{entry.name} expects {expected.value}, got boolean")
    else:
        raise TypeDiagnostic(f"unsupported literal {literal!r}")


def _check_number(entry: NfpTypeEntry, number: Number) -> None:
    if entry.xsd_value_type is XsdType.INTEGER and not number.is_integral:
        raise TypeDiagnostic(
            f"integer value required for {entry.name} ({entry.xsd_value_type.value}), got {number.text}")


def parse_type_library(text: str) -> list[NfpTypeEntry]:
    """Read ``nfptype NAME : XSDTYPE (units [..] | units open | unitless)`` lines."""
    ts = TokenStream.from_text(text)
    out: list[NfpTypeEntry] = []
    seen: set[str] = set()
    while not ts.at(EOF):
        ts.expect(NAME, "nfptype")
        name_tok = ts.expect(NAME, what="type name")
        if name_tok.text in seen:
            raise ts.error(f"duplicate NFP type {name_tok.text!r}", name_tok)
        ts.expect(PUNCT, ":")
        type_tok = ts.expect(NAME, what="XSD type")
        type_text = type_tok.text
        if type_text == "xsd" and ts.accept(PUNCT, ":"):
            type_text = "xsd:" + ts.expect(NAME, what="XSD type").text
        try:
            xsd = XsdType.parse(type_text)
        except ValueError as exc:
            raise ts.error(str(exc), type_tok) from None
        units: tuple[str, ...] = ()
        unit_open = False
        if ts.accept(NAME, "unitless"):
            pass
        elif ts.accept(NAME, "units"):
            if ts.accept(NAME, "open"):
                unit_open = True
            else:
                ts.expect(PUNCT, "[")
                collected = []
                if not ts.at(PUNCT, "]"):
                    collected.append(ts.expect(STRING, what="unit string").value)
                    while ts.accept(PUNCT, ","):
                        collected.append(ts.expect(STRING, what="unit string").value)
                ts.expect(PUNCT, "]")
                if not collected or not all(collected):
                    raise ts.error("unit list must contain non-empty unit strings", name_tok)
                units = tuple(collected)
        else:
            raise ts.error(f"expected 'units' or 'unitless', got {ts.current.describe()}")
        if name_tok.text in BUILTIN_LIBRARY:
            raise ts.error(f"NFP type {name_tok.text!r} shadows a built-in type", name_tok)
        seen.add(name_tok.text)
        out.append(NfpTypeEntry(name_tok.text, xsd, units, unit_open))
    return out


def load_library(text: str | None) -> TypeLibrary:
    if not text:
        return BUILTIN_LIBRARY
    try:
        return BUILTIN_LIBRARY.extend(parse_type_library(text))
    except ValueError as exc:
        raise ParseError(str(exc)) from None

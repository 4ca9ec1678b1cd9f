"""Exception hierarchy shared by the compiler stages."""

from __future__ import annotations


class NfpcError(Exception):
    """Base class for every error raised by this package."""


class ParseError(NfpcError):
    """Syntax or declaration error in a model, VSL, library or valuation text."""

    def __init__(self, message: str, line: int = 0, column: int = 0):
        self.message = message
        self.line = line
        self.column = column
        super().__init__(f"{line}:{column}: {message}" if line else message)


class NotFound(NfpcError, KeyError):
    """Unknown NFP type name."""

    def __str__(self) -> str:
        return str(self.args[0]) if self.args else "not found"


class TypeDiagnostic(NfpcError):
    """A literal does not fit the value type or unit set of an NFP type."""


class TypeMismatch(NfpcError):
    """Runtime value kind differs from the kind expected by a comparison."""


class OrderingUnsupported(TypeDiagnostic):
    """Ordered comparison requested on a string or boolean value."""


class UnsupportedFunction(NfpcError):
    """No constraint function exists for the requested operator/type pair."""


class MissingValue(NfpcError):
    """A valuation lacks an attribute id referenced by a policy."""

    def __init__(self, attribute_id: str):
        self.attribute_id = attribute_id
        super().__init__(f"missing value for {attribute_id}")

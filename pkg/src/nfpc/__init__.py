"""Compile service models with typed non-functional properties into
WS-Policy, XSD and SAWSDL-annotated WSDL documents, and evaluate NFP
values against the generated policies."""

from .emitter import EmitConfig, EmittedBundle, FunctionIdMode, emit_bundles, emit_policy, emit_wsdl, emit_xsd
from .errors import (
    MissingValue,
    NfpcError,
    NotFound,
    OrderingUnsupported,
    ParseError,
    TypeDiagnostic,
    TypeMismatch,
    UnsupportedFunction,
)
from .model import ServiceModel, parse_model, print_model, validate_model
from .nfp_types import BUILTIN_LIBRARY, NfpTypeEntry, TypeLibrary, XsdType, check_literal, lookup_type
from .policy import evaluate, normalize, parse_valuation, vocabulary_of
from .transform import PolicyArtifacts, function_id, lower_constraint, lower_relation, transform_model
from .vsl import eval_rel, parse_vsl, print_vsl, to_dnf

__version__ = "0.1.0"

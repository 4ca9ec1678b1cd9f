"""Service models: services and endpoints carrying typed NFPs and constraints.

The textual model format stands in for a stereotyped UML class model::

    service FlightService1 {
      interface: FlightServiceInterface
      nfp Price : NFP_Price
      constraint required FlightService1NFPsPolicy: Price == (200.00, "$US")
      endpoint FlightServiceEndpoint1 {
        nfp Delay : NFP_Real semantic { modelReference = "http://onto/#Delay" }
      }
    }
"""

from __future__ import annotations

import enum
import re
from dataclasses import dataclass
from typing import Iterator

from .errors import ParseError
from .lexer import EOF, NAME, PUNCT, STRING, Token, TokenStream, quote
from .nfp_types import BUILTIN_LIBRARY, TypeLibrary
from .vsl import RESERVED, VslExpression, leaves, parse_expression, print_vsl

_URI_RE = re.compile(r"^[A-Za-z][A-Za-z0-9+.\-]*:\S+$")


class ConstraintKind(str, enum.Enum):
    REQUIRED = "required"
    OFFERED = "offered"
    CONTRACT = "contract"


@dataclass(frozen=True)
class SemanticAnnotation:
    model_reference: str
    lowering_schema: str | None = None
    lifting_schema: str | None = None

    def uris(self) -> Iterator[tuple[str, str]]:
        yield "modelReference", self.model_reference
        if self.lowering_schema is not None:
            yield "loweringSchema", self.lowering_schema
        if self.lifting_schema is not None:
            yield "liftingSchema", self.lifting_schema


@dataclass(frozen=True)
class NfpDecl:
    name: str
    type_name: str
    semantic: SemanticAnnotation | None = None


@dataclass(frozen=True)
class ConstraintDecl:
    kind: ConstraintKind
    name: str
    expression: VslExpression


@dataclass(frozen=True)
class EndpointDecl:
    name: str
    binding: str | None = None
    nfps: tuple[NfpDecl, ...] = ()
    constraints: tuple[ConstraintDecl, ...] = ()


@dataclass(frozen=True)
class ServiceDecl:
    name: str
    interface: str | None = None
    nfps: tuple[NfpDecl, ...] = ()
    constraints: tuple[ConstraintDecl, ...] = ()
    endpoints: tuple[EndpointDecl, ...] = ()


@dataclass(frozen=True)
class ServiceModel:
    services: tuple[ServiceDecl, ...]

    def subjects(self) -> Iterator[tuple[str, ServiceDecl | EndpointDecl, ServiceDecl]]:
        """Yield ``(kind, subject, owning_service)`` in declaration order."""
        for svc in self.services:
            yield "Service", svc, svc
            for ep in svc.endpoints:
                yield "Endpoint", ep, svc

    def constraints(self) -> Iterator[ConstraintDecl]:
        for _, subject, _ in self.subjects():
            yield from subject.constraints


@dataclass(frozen=True)
class Diagnostic:
    subject: str
    rule: str
    message: str

    def __str__(self) -> str:
        return f"{self.subject}: {self.message}"


def is_valid_uri(text: str) -> bool:
    return bool(_URI_RE.match(text))


# -- parsing -----------------------------------------------------------------


class _ModelParser:
    def __init__(self, text: str, library: TypeLibrary):
        self.ts = TokenStream.from_text(text)
        self.library = library
        self.constraint_names: set[str] = set()
        self.endpoint_names: set[str] = set()

    def parse(self) -> ServiceModel:
        ts = self.ts
        if ts.at(EOF):
            raise ts.error("at least one service required")
        services = []
        seen: set[str] = set()
        while not ts.at(EOF):
            svc, tok = self.service()
            if svc.name in seen:
                raise ts.error(f"duplicate service name {svc.name!r}", tok)
            seen.add(svc.name)
            services.append(svc)
        return ServiceModel(tuple(services))

    def name(self, what: str) -> Token:
        return self.ts.expect(NAME, what=what)

    def service(self) -> tuple[ServiceDecl, Token]:
        ts = self.ts
        ts.expect(NAME, "service", what="'service'")
        name_tok = self.name("service name")
        ts.expect(PUNCT, "{")
        interface = None
        if ts.at_keyword("interface") and ts.peek().text == ":":
            ts.advance()
            ts.advance()
            interface = self.name("interface name").text
        nfps, constraints = self.subject_body(name_tok.text)
        endpoints = []
        while ts.at_keyword("endpoint"):
            ep, tok = self.endpoint()
            if ep.name in self.endpoint_names:
                raise ts.error(f"duplicate endpoint name {ep.name!r}", tok)
            self.endpoint_names.add(ep.name)
            endpoints.append(ep)
        self.close_block()
        svc = ServiceDecl(name_tok.text, interface, nfps, constraints, tuple(endpoints))
        self.check_vocabulary_scope(svc, name_tok)
        return svc, name_tok

    def endpoint(self) -> tuple[EndpointDecl, Token]:
        ts = self.ts
        ts.advance()
        name_tok = self.name("endpoint name")
        binding = None
        if ts.accept(NAME, "binding"):
            ts.expect(PUNCT, ":")
            binding = self.name("binding name").text
        ts.expect(PUNCT, "{")
        nfps, constraints = self.subject_body(name_tok.text)
        self.close_block()
        return EndpointDecl(name_tok.text, binding, nfps, constraints), name_tok

    def close_block(self) -> None:
        ts = self.ts
        if not ts.at(PUNCT, "}"):
            raise ts.error(f"unexpected {ts.current.describe()}; expected declaration or '}}'")
        ts.advance()

    def subject_body(self, subject: str):
        ts = self.ts
        nfps: list[NfpDecl] = []
        by_name: dict[str, NfpDecl] = {}
        while ts.at_keyword("nfp"):
            decl, tok = self.nfp()
            if decl.name in by_name:
                raise ts.error(f"duplicate NFP name {decl.name!r} on {subject}", tok)
            by_name[decl.name] = decl
            nfps.append(decl)
        constraints = []
        while ts.at_keyword("constraint"):
            constraints.append(self.constraint(subject, by_name))
        return tuple(nfps), tuple(constraints)

    def nfp(self) -> tuple[NfpDecl, Token]:
        ts = self.ts
        ts.advance()
        name_tok = self.name("NFP name")
        if name_tok.text in RESERVED:
            raise ts.error(f"{name_tok.text!r} is reserved and cannot name an NFP", name_tok)
        ts.expect(PUNCT, ":")
        type_tok = self.name("NFP type")
        if type_tok.text not in self.library:
            raise ts.error(f"unknown NFP type {type_tok.text!r}", type_tok)
        semantic = self.semantic() if ts.at_keyword("semantic") else None
        return NfpDecl(name_tok.text, type_tok.text, semantic), name_tok

    def uri(self) -> str:
        ts = self.ts
        ts.expect(PUNCT, "=")
        tok = ts.expect(STRING, what="URI string")
        if not is_valid_uri(tok.value):
            raise ts.error(f"invalid URI {tok.value!r}", tok)
        return tok.value

    def semantic(self) -> SemanticAnnotation:
        ts = self.ts
        ts.advance()
        ts.expect(PUNCT, "{")
        ts.expect(NAME, "modelReference", what="'modelReference'")
        ref = self.uri()
        lowering = lifting = None
        if ts.accept(NAME, "loweringSchema"):
            lowering = self.uri()
        if ts.accept(NAME, "liftingSchema"):
            lifting = self.uri()
        ts.expect(PUNCT, "}")
        return SemanticAnnotation(ref, lowering, lifting)

    def constraint(self, subject: str, nfps: dict[str, NfpDecl]) -> ConstraintDecl:
        ts = self.ts
        ts.advance()
        kind_tok = ts.current
        try:
            kind = ConstraintKind(kind_tok.text)
        except ValueError:
            raise ts.error(
                f"expected constraint kind (required, offered, contract), got {kind_tok.describe()}"
            ) from None
        ts.advance()
        name_tok = self.name("constraint name")
        if name_tok.text in self.constraint_names:
            raise ts.error(f"duplicate constraint name {name_tok.text!r}", name_tok)
        self.constraint_names.add(name_tok.text)
        ts.expect(PUNCT, ":")
        expr_tok = ts.current
        expr = parse_expression(ts)
        for rel in leaves(expr):
            if rel.nfp not in nfps:
                raise ts.error(f"constraint {name_tok.text!r} references NFP {rel.nfp!r} "
                               f"not declared on {subject}", expr_tok)
        return ConstraintDecl(kind, name_tok.text, expr)

    def check_vocabulary_scope(self, svc: ServiceDecl, tok: Token) -> None:
        for diag in _vocabulary_scope(svc):
            raise self.ts.error(diag.message, tok)


def parse_model(source_text: str, library: TypeLibrary | None = None) -> ServiceModel:
    """Parse a model file; raises :class:`ParseError` on any defect."""
    return _ModelParser(source_text, library or BUILTIN_LIBRARY).parse()


# -- validation --------------------------------------------------------------


def _vocabulary_scope(svc: ServiceDecl) -> Iterator[Diagnostic]:
    # endpoint and service NFPs end up in one XSD per service
    owner: dict[str, str] = {}
    for subject in (svc, *svc.endpoints):
        for nfp in subject.nfps:
            if nfp.name in owner and owner[nfp.name] != subject.name:
                yield Diagnostic(subject.name, "vocabulary-scope",
                                 f"NFP {nfp.name!r} already declared on {owner[nfp.name]} "
                                 f"within service {svc.name}")
            owner.setdefault(nfp.name, subject.name)


def validate_model(model: ServiceModel, library: TypeLibrary | None = None) -> list[Diagnostic]:
    """Check the cross-reference invariants; returns an empty list when clean."""
    library = library or BUILTIN_LIBRARY
    diags: list[Diagnostic] = []
    if not model.services:
        diags.append(Diagnostic("<model>", "non-empty", "at least one service required"))
    service_names: set[str] = set()
    constraint_names: set[str] = set()
    ep_names: set[str] = set()
    for svc in model.services:
        if svc.name in service_names:
            diags.append(Diagnostic(svc.name, "unique-service", "duplicate service name"))
        service_names.add(svc.name)
        for ep in svc.endpoints:
            if ep.name in ep_names:
                diags.append(Diagnostic(ep.name, "unique-endpoint", "duplicate endpoint name"))
            ep_names.add(ep.name)
        diags.extend(_vocabulary_scope(svc))
    for kind, subject, _ in model.subjects():
        label = f"{kind} {subject.name}"
        declared: set[str] = set()
        for nfp in subject.nfps:
            if nfp.name in declared:
                diags.append(Diagnostic(label, "unique-nfp", f"duplicate NFP name {nfp.name!r}"))
            declared.add(nfp.name)
            if nfp.name in RESERVED:
                diags.append(Diagnostic(label, "reserved-name", f"NFP name {nfp.name!r} is reserved"))
            if nfp.type_name not in library:
                diags.append(Diagnostic(label, "known-type", f"unknown NFP type {nfp.type_name!r}"))
            if nfp.semantic is not None:
                for attr, uri in nfp.semantic.uris():
                    if not uri or not is_valid_uri(uri):
                        diags.append(Diagnostic(label, "semantic-uri",
                                                f"NFP {nfp.name!r}: invalid {attr} URI {uri!r}"))
        for con in subject.constraints:
            if con.name in constraint_names:
                diags.append(Diagnostic(label, "unique-constraint",
                                        f"duplicate constraint name {con.name!r}"))
            constraint_names.add(con.name)
            reported: set[str] = set()
            for rel in leaves(con.expression):
                if rel.nfp not in declared and rel.nfp not in reported:
                    reported.add(rel.nfp)
                    diags.append(Diagnostic(label, "nfp-scope",
                                            f"NFP not declared on subject: {rel.nfp!r} "
                                            f"in constraint {con.name!r}"))
    return diags


# -- printing ----------------------------------------------------------------


def _print_nfp(nfp: NfpDecl) -> str:
    line = f"nfp {nfp.name} : {nfp.type_name}"
    if nfp.semantic is not None:
        attrs = " ".join(f"{k} = {quote(v)}" for k, v in nfp.semantic.uris())
        line += f" semantic {{ {attrs} }}"
    return line


def _print_body(subject, indent: str) -> list[str]:
    lines = [indent + _print_nfp(n) for n in subject.nfps]
    lines += [f"{indent}constraint {c.kind.value} {c.name}: {print_vsl(c.expression)}"
              for c in subject.constraints]
    return lines


def print_model(model: ServiceModel) -> str:
    """Render ``model`` in canonical model-file syntax."""
    lines: list[str] = []
    for svc in model.services:
        lines.append(f"service {svc.name} {{")
        if svc.interface is not None:
            lines.append(f"  interface: {svc.interface}")
        lines += _print_body(svc, "  ")
        for ep in svc.endpoints:
            head = f"  endpoint {ep.name}"
            if ep.binding is not None:
                head += f" binding: {ep.binding}"
            lines.append(head + " {")
            lines += _print_body(ep, "    ")
            lines.append("  }")
        lines.append("}")
    return "\n".join(lines) + "\n"

"""Model-to-text stage: XSD vocabulary, WS-Policy documents and the WSDL.

Output is written by hand rather than through an XML library so that
attribute order, indentation and entity references (``&xsd;``) are fixed
byte for byte.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, field
from typing import Iterable, Mapping

from .model import SemanticAnnotation, ServiceDecl, ServiceModel
from .policy import Policy, PolicySubjectRef, SubjectKind, normalize
from .transform import PolicyArtifacts

NS = {
    "wsdl": "http://www.w3.org/ns/wsdl",
    "wsp": "http://www.w3.org/ns/ws-policy",
    "wsu": "http://docs.oasis-open.org/wss/2004/01/oasis-200401-wss-wssecurity-utility-1.0.xsd",
    "sawsdl": "http://www.w3.org/ns/sawsdl",
    "xsd": "http://www.w3.org/2001/XMLSchema",
}
XACML_NS = "urn:oasis:names:tc:xacml:2.0:policy:schema:os"
XACML_FUNCTION_PREFIX = "urn:oasis:names:tc:xacml:1.0:function:"
XSD_ENTITY = "http://www.w3.org/2001/XMLSchema#"
FUNCTION_ENTITY = ":function:"
INDENT = "  "
XML_DECL = '<?xml version="1.0" encoding="UTF-8"?>'

_SAWSDL_ATTRS = {
    "modelReference": "sawsdl:modelReference",
    "loweringSchema": "sawsdl:loweringSchemaMapping",
    "liftingSchema": "sawsdl:liftingSchemaMapping",
}


class FunctionIdMode(str, enum.Enum):
    ENTITY = "entity"
    XACML_URN = "urn"


@dataclass(frozen=True)
class EmitConfig:
    function_prefix_mode: FunctionIdMode = FunctionIdMode.XACML_URN
    base_namespace: str = "http://example.org/nfpc"


@dataclass(frozen=True)
class EmittedBundle:
    service: str
    wsdl_text: str
    xsd_text: str
    policy_texts: Mapping[str, str] = field(default_factory=dict)

    @property
    def wsdl_name(self) -> str:
        return f"{self.service}.wsdl"

    @property
    def xsd_name(self) -> str:
        return f"{self.service}-types.xsd"


def escape_text(text: str) -> str:
    return text.replace("&", "&amp;").replace("<", "&lt;").replace(">", "&gt;")


def escape_attr(text: str) -> str:
    return (escape_text(text).replace('"', "&quot;")
            .replace("\n", "&#10;").replace("\t", "&#9;").replace("\r", "&#13;"))


def _attrs(pairs: Iterable[tuple[str, str | None]], raw: frozenset = frozenset()) -> str:
    parts = []
    for name, value in pairs:
        if value is None:
            continue
        parts.append(f'{name}="{value if name in raw else escape_attr(value)}"')
    return "".join(" " + p for p in parts)


def _doctype(root: str, config: EmitConfig) -> list[str]:
    lines = [f"<!DOCTYPE {root} [", f'{INDENT}<!ENTITY xsd "{XSD_ENTITY}">']
    if config.function_prefix_mode is FunctionIdMode.ENTITY:
        lines.append(f'{INDENT}<!ENTITY function "{FUNCTION_ENTITY}">')
    lines.append("]>")
    return lines


def _function_attr(name: str, config: EmitConfig) -> str:
    if config.function_prefix_mode is FunctionIdMode.ENTITY:
        return f"wspc&function;{escape_attr(name)}"
    return escape_attr(XACML_FUNCTION_PREFIX + name)


def types_namespace(service: str, config: EmitConfig) -> str:
    return f"{config.base_namespace}/{service}/types"


# -- XSD ---------------------------------------------------------------------


def _semantic_attrs(semantic: SemanticAnnotation | None) -> list[tuple[str, str]]:
    if semantic is None:
        return []
    return [(_SAWSDL_ATTRS[k], v) for k, v in semantic.uris()]


def emit_xsd(vocabulary, config: EmitConfig, namespace: str | None = None) -> str:
    """One complex type plus one global element per vocabulary item."""
    namespace = namespace or f"{config.base_namespace}/types"
    head = _attrs([
        ("xmlns:xsd", NS["xsd"]),
        ("xmlns:sawsdl", NS["sawsdl"]),
        ("xmlns:tns", namespace),
        ("targetNamespace", namespace),
        ("elementFormDefault", "qualified"),
    ])
    lines = [XML_DECL]
    if not vocabulary:
        lines.append(f"<xsd:schema{head}/>")
        return "\n".join(lines) + "\n"
    lines.append(f"<xsd:schema{head}>")
    i1, i2, i3 = INDENT, INDENT * 2, INDENT * 3
    for item in vocabulary:
        lines.append(f"{i1}<xsd:complexType{_attrs([('name', item.name + 'Type')])}>")
        lines.append(f"{i2}<xsd:sequence>")
        lines.append(f"{i3}<xsd:element"
                     f"{_attrs([('name', item.name + 'Value'), ('type', item.xsd_value_type.value)])}/>")
        if item.has_unit:
            lines.append(f"{i3}<xsd:element"
                         f"{_attrs([('name', item.name + 'Unit'), ('type', 'xsd:string')])}/>")
        lines.append(f"{i2}</xsd:sequence>")
        lines.append(f"{i1}</xsd:complexType>")
        attrs = [("name", item.name), ("type", f"tns:{item.name}Type")]
        lines.append(f"{i1}<xsd:element{_attrs(attrs + _semantic_attrs(item.semantic))}/>")
    lines.append("</xsd:schema>")
    return "\n".join(lines) + "\n"


# -- policies ----------------------------------------------------------------


def _policy_lines(policy: Policy, config: EmitConfig, depth: int,
                  declare_ns: bool = False) -> list[str]:
    pad = INDENT * depth
    attrs = []
    if declare_ns:
        attrs += [("xmlns", XACML_NS), ("xmlns:wsp", NS["wsp"]), ("xmlns:wsu", NS["wsu"])]
    attrs.append(("wsu:Id", policy.id))
    lines = [f"{pad}<wsp:Policy{_attrs(attrs)}>", f"{pad}{INDENT}<wsp:ExactlyOne>"]
    p2, p3, p4 = (pad + INDENT * n for n in (2, 3, 4))
    for alt in policy.alternatives:
        if not alt.assertions:
            lines.append(f"{p2}<wsp:All/>")
            continue
        lines.append(f"{p2}<wsp:All>")
        for fn in alt.functions():
            dtype = f"&xsd;{fn.literal_xsd_type.local_name}"
            raw = frozenset({"FunctionId", "DataType"})
            lines.append(f"{p3}<Apply{_attrs([('FunctionId', _function_attr(fn.operator, config))], raw)}>")
            lines.append(f"{p4}<AttributeValue{_attrs([('DataType', dtype)], raw)}>"
                         f"{escape_text(fn.literal_value)}</AttributeValue>")
            lines.append(f"{p4}<ResourceAttributeDesignator"
                         f"{_attrs([('AttributeId', fn.attribute_id), ('DataType', dtype)], raw)}/>")
            lines.append(f"{p3}</Apply>")
        lines.append(f"{p2}</wsp:All>")
    lines += [f"{pad}{INDENT}</wsp:ExactlyOne>", f"{pad}</wsp:Policy>"]
    return lines


def emit_policy(policy: Policy, config: EmitConfig) -> str:
    """A standalone policy document in ExactlyOne/All normal form."""
    lines = [XML_DECL, *_doctype("wsp:Policy", config)]
    lines += _policy_lines(normalize(policy), config, 0, declare_ns=True)
    return "\n".join(lines) + "\n"


# -- WSDL --------------------------------------------------------------------


def _find_service(model: ServiceModel, name: str | None) -> ServiceDecl:
    if name is None:
        if len(model.services) != 1:
            raise ValueError("model has several services; pass service=")
        return model.services[0]
    for svc in model.services:
        if svc.name == name:
            return svc
    raise KeyError(name)


def emit_wsdl(model: ServiceModel, artifacts: PolicyArtifacts, config: EmitConfig,
              service: str | None = None) -> str:
    """WSDL 2.0 description of one service with its policies attached inline."""
    svc = _find_service(model, service)
    tns = f"{config.base_namespace}/{svc.name}"
    types_ns = types_namespace(svc.name, config)
    root_attrs = [
        ("xmlns", XACML_NS),
        ("xmlns:wsdl", NS["wsdl"]),
        ("xmlns:wsp", NS["wsp"]),
        ("xmlns:wsu", NS["wsu"]),
        ("xmlns:sawsdl", NS["sawsdl"]),
        ("xmlns:xsd", NS["xsd"]),
        ("xmlns:tns", tns),
        ("targetNamespace", tns),
    ]
    lines = [XML_DECL, *_doctype("wsdl:description", config),
             f"<wsdl:description{_attrs(root_attrs)}>",
             f"{INDENT}<wsdl:types>",
             f"{INDENT * 2}<xsd:import"
             f"{_attrs([('namespace', types_ns), ('schemaLocation', f'{svc.name}-types.xsd')])}/>",
             f"{INDENT}</wsdl:types>"]

    svc_policies = artifacts.policies_for(PolicySubjectRef(SubjectKind.SERVICE, svc.name))
    svc_head = f"{INDENT}<wsdl:service{_attrs([('name', svc.name), ('interface', svc.interface)])}"
    if not svc_policies and not svc.endpoints:
        lines.append(svc_head + "/>")
    else:
        lines.append(svc_head + ">")
        for policy in svc_policies:
            lines += _policy_lines(normalize(policy), config, 2)
        for ep in svc.endpoints:
            ep_policies = artifacts.policies_for(PolicySubjectRef(SubjectKind.ENDPOINT, ep.name))
            ep_head = f"{INDENT * 2}<wsdl:endpoint{_attrs([('name', ep.name), ('binding', ep.binding)])}"
            if not ep_policies:
                lines.append(ep_head + "/>")
                continue
            lines.append(ep_head + ">")
            for policy in ep_policies:
                lines += _policy_lines(normalize(policy), config, 3)
            lines.append(f"{INDENT * 2}</wsdl:endpoint>")
        lines.append(f"{INDENT}</wsdl:service>")
    lines.append("</wsdl:description>")
    return "\n".join(lines) + "\n"


def emit_bundles(model: ServiceModel, artifacts: PolicyArtifacts,
                 config: EmitConfig | None = None) -> list[EmittedBundle]:
    """WSDL, XSD and standalone policy texts for every service in ``model``."""
    config = config or EmitConfig()
    bundles = []
    for svc in model.services:
        refs = [PolicySubjectRef(SubjectKind.SERVICE, svc.name)]
        refs += [PolicySubjectRef(SubjectKind.ENDPOINT, ep.name) for ep in svc.endpoints]
        policy_texts = {p.id: emit_policy(p, config)
                        for ref in refs for p in artifacts.policies_for(ref)}
        bundles.append(EmittedBundle(
            svc.name,
            emit_wsdl(model, artifacts, config, svc.name),
            emit_xsd(artifacts.vocabulary_by_service[svc.name], config,
                     types_namespace(svc.name, config)),
            policy_texts,
        ))
    return bundles

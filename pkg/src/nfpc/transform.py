"""Model-to-model mapping from service models to policy artifacts.

* each NFP becomes a vocabulary item (with its semantic annotation, if any)
* each constraint becomes one policy; its DNF conjuncts become alternatives
* each relation becomes one assertion holding a value function and, for
  ``(value, "unit")`` literals, a string-equality unit function
* offered constraints get a trailing empty alternative
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Mapping

from .errors import OrderingUnsupported, TypeDiagnostic
from .model import ConstraintDecl, ConstraintKind, NfpDecl, ServiceModel
from .nfp_types import BUILTIN_LIBRARY, TypeLibrary, XsdType, check_literal
from .policy import (
    Policy,
    PolicyAlternative,
    PolicyAssertion,
    PolicyConstraintsFunction,
    PolicySubjectRef,
    SubjectKind,
    VocabularyItem,
    function_id,
)
from .vsl import Bool, Number, Quantity, Rel, RelOp, Text, leaves, to_dnf

__all__ = [
    "PolicyArtifacts",
    "check_model_types",
    "function_id",
    "lower_constraint",
    "lower_relation",
    "transform_model",
]


@dataclass(frozen=True)
class PolicyArtifacts:
    policies: tuple[Policy, ...]
    vocabulary_by_service: Mapping[str, tuple[VocabularyItem, ...]]
    subject_index: Mapping[PolicySubjectRef, tuple[str, ...]]
    policy_kinds: Mapping[str, ConstraintKind]

    @property
    def vocabulary(self) -> tuple[VocabularyItem, ...]:
        return tuple(item for items in self.vocabulary_by_service.values() for item in items)

    def policy(self, policy_id: str) -> Policy:
        for p in self.policies:
            if p.id == policy_id:
                return p
        raise KeyError(policy_id)

    def policies_for(self, subject: PolicySubjectRef) -> list[Policy]:
        return [self.policy(pid) for pid in self.subject_index.get(subject, ())]


def _literal_text(lit) -> str:
    if isinstance(lit, Quantity):
        return lit.value
    if isinstance(lit, Number):
        return lit.text
    if isinstance(lit, Bool):
        return "true" if lit.value else "false"
    return lit.value


def _check_kind(rel: Rel, item: VocabularyItem) -> None:
    lit = rel.value
    t = item.xsd_value_type
    ok = (
        (isinstance(lit, (Number, Quantity)) and t.numeric)
        or (isinstance(lit, Text) and t is XsdType.STRING)
        or (isinstance(lit, Bool) and t is XsdType.BOOLEAN)
    )
    if not ok:
        raise TypeDiagnostic(f"{rel.nfp}: literal does not match {t.value}")
    if isinstance(lit, Quantity) and not item.has_unit:
        raise TypeDiagnostic(f"{rel.nfp}: unit given for a unitless NFP")
    if rel.op.ordered and not t.numeric:
        raise OrderingUnsupported(f"{rel.nfp}: operator {rel.op.value} requires a numeric NFP, "
                                  f"got {t.value}")


def lower_relation(rel: Rel, item: VocabularyItem) -> PolicyAssertion:
    _check_kind(rel, item)
    t = item.xsd_value_type
    functions = [PolicyConstraintsFunction(
        function_id(rel.op, t), _literal_text(rel.value), t, item, item.value_path)]
    if isinstance(rel.value, Quantity):
        functions.append(PolicyConstraintsFunction(
            function_id(RelOp.EQ, XsdType.STRING), rel.value.unit, XsdType.STRING, item,
            item.unit_path))
    return PolicyAssertion(tuple(functions))


def lower_constraint(decl: ConstraintDecl, subject: PolicySubjectRef,
                     nfps: Mapping[str, VocabularyItem]) -> Policy:
    alternatives = [
        PolicyAlternative(tuple(lower_relation(rel, nfps[rel.nfp]) for rel in conjunct))
        for conjunct in to_dnf(decl.expression)
    ]
    if decl.kind is ConstraintKind.OFFERED:
        alternatives.append(PolicyAlternative(()))
    return Policy(decl.name, subject, tuple(alternatives))


def vocabulary_item(nfp: NfpDecl, library: TypeLibrary) -> VocabularyItem:
    entry = library.lookup(nfp.type_name)
    return VocabularyItem(nfp.name, entry.xsd_value_type, entry.has_unit, nfp.semantic)


def check_model_types(model: ServiceModel, library: TypeLibrary | None = None) -> list[str]:
    """Type-check every constraint literal; returns messages naming the NFP."""
    library = library or BUILTIN_LIBRARY
    problems = []
    for _, subject, _ in model.subjects():
        types = {n.name: n.type_name for n in subject.nfps}
        for con in subject.constraints:
            for rel in leaves(con.expression):
                if rel.nfp not in types:
                    continue
                entry = library.lookup(types[rel.nfp])
                try:
                    check_literal(entry, rel.value)
                    if rel.op.ordered and not entry.xsd_value_type.numeric:
                        raise OrderingUnsupported(
                            f"operator {rel.op.value} is not defined on {entry.xsd_value_type.value}")
                except TypeDiagnostic as exc:
                    problems.append(f"{subject.name}: constraint {con.name}: NFP {rel.nfp} "
                                    f"({entry.name}, {entry.xsd_value_type.value}): {exc}")
    return problems


def transform_model(model: ServiceModel, library: TypeLibrary | None = None) -> PolicyArtifacts:
    """Map a validated model to policies and vocabulary items.

    Raises :class:`TypeDiagnostic` for the first ill-typed literal.
    """
    library = library or BUILTIN_LIBRARY
    problems = check_model_types(model, library)
    if problems:
        raise TypeDiagnostic(problems[0])
    policies = []
    vocab_by_service: dict[str, tuple[VocabularyItem, ...]] = {}
    index: dict[PolicySubjectRef, tuple[str, ...]] = {}
    kinds: dict[str, ConstraintKind] = {}
    for svc in model.services:
        vocab: list[VocabularyItem] = []
        for kind, subject in [(SubjectKind.SERVICE, svc)] + [
                (SubjectKind.ENDPOINT, ep) for ep in svc.endpoints]:
            ref = PolicySubjectRef(kind, subject.name)
            scope = {n.name: vocabulary_item(n, library) for n in subject.nfps}
            vocab.extend(scope.values())
            ids = []
            for con in subject.constraints:
                policies.append(lower_constraint(con, ref, scope))
                kinds[con.name] = con.kind
                ids.append(con.name)
            index[ref] = tuple(ids)
        vocab_by_service[svc.name] = tuple(vocab)
    return PolicyArtifacts(tuple(policies), vocab_by_service, index, kinds)

import pytest

from nfpc.errors import OrderingUnsupported, TypeDiagnostic
from nfpc.model import ConstraintDecl, ConstraintKind, parse_model
from nfpc.nfp_types import XsdType
from nfpc.policy import PolicySubjectRef, SubjectKind, VocabularyItem, evaluate
from nfpc.transform import check_model_types, lower_constraint, lower_relation, transform_model
from nfpc.vsl import Number, Quantity, Rel, RelOp, Text, parse_vsl, to_dnf

from .oracles import assignments, distinct_leaves, dnf_truth, truth

SVC = PolicySubjectRef(SubjectKind.SERVICE, "S")
PRICE = VocabularyItem("Price", XsdType.DOUBLE, True)
AVAIL = VocabularyItem("Availability", XsdType.INTEGER, True)
DELAY = VocabularyItem("Delay", XsdType.DOUBLE, True)


def _functions(assertion):
    return [(f.operator, f.attribute_id, f.literal_value, f.literal_xsd_type)
            for f in assertion.functions]


def test_lower_relation_delay():
    a = lower_relation(Rel("Delay", RelOp.LT, Quantity("0.10", "ms")), DELAY)
    assert _functions(a) == [
        ("double-less-than", "Delay/DelayValue", "0.10", XsdType.DOUBLE),
        ("string-equals", "Delay/DelayUnit", "ms", XsdType.STRING),
    ]


def test_lower_relation_availability():
    a = lower_relation(Rel("Availability", RelOp.GE, Quantity("90", "%")), AVAIL)
    assert _functions(a) == [
        ("integer-greater-than-or-equals", "Availability/AvailabilityValue", "90", XsdType.INTEGER),
        ("string-equals", "Availability/AvailabilityUnit", "%", XsdType.STRING),
    ]


def test_lower_relation_bare_number():
    x = VocabularyItem("X", XsdType.INTEGER, True)
    a = lower_relation(Rel("X", RelOp.EQ, Number("5")), x)
    assert _functions(a) == [("integer-equals", "X/XValue", "5", XsdType.INTEGER)]


def test_unit_function_is_equality_even_for_ne():
    a = lower_relation(Rel("Delay", RelOp.NE, Quantity("1", "s")), DELAY)
    assert [f.operator for f in a.functions] == ["double-not-equals", "string-equals"]


def test_lower_relation_rejects_ordering_on_strings():
    region = VocabularyItem("Region", XsdType.STRING)
    with pytest.raises(OrderingUnsupported):
        lower_relation(Rel("Region", RelOp.LT, Text("EU")), region)


def test_lower_constraint_required():
    decl = ConstraintDecl(ConstraintKind.REQUIRED, "FlightService1NFPsPolicy", parse_vsl(
        'Price == (200.00, "$US") and Availability >= (90, "%")'))
    p = lower_constraint(decl, SVC, {"Price": PRICE, "Availability": AVAIL})
    assert p.id == "FlightService1NFPsPolicy"
    assert len(p.alternatives) == 1
    assert len(p.alternatives[0].assertions) == 2
    assert len(list(p.alternatives[0].functions())) == 4


def test_lower_constraint_offered_appends_empty_alternative():
    decl = ConstraintDecl(ConstraintKind.OFFERED, "E", parse_vsl('Delay < (0.10, "ms")'))
    p = lower_constraint(decl, SVC, {"Delay": DELAY})
    assert len(p.alternatives) == 2
    assert [f.attribute_id for f in p.alternatives[0].functions()] == \
        ["Delay/DelayValue", "Delay/DelayUnit"]
    assert p.alternatives[1].assertions == ()


def test_contract_lowers_like_required():
    expr = parse_vsl('Delay < (0.10, "ms")')
    req = lower_constraint(ConstraintDecl(ConstraintKind.REQUIRED, "C", expr), SVC, {"Delay": DELAY})
    con = lower_constraint(ConstraintDecl(ConstraintKind.CONTRACT, "C", expr), SVC, {"Delay": DELAY})
    assert req == con


def test_lower_constraint_or():
    a = VocabularyItem("A", XsdType.INTEGER, True)
    b = VocabularyItem("B", XsdType.INTEGER, True)
    expr = parse_vsl("A == 1 or B == 2")
    leaves = distinct_leaves(expr)
    for asg in assignments(leaves):
        assert truth(expr, asg) == dnf_truth(to_dnf(expr), asg)
    p = lower_constraint(ConstraintDecl(ConstraintKind.REQUIRED, "P", expr), SVC, {"A": a, "B": b})
    assert [len(alt.assertions) for alt in p.alternatives] == [1, 1]


def test_transform_flight(flight_model):
    art = transform_model(flight_model)
    assert [p.id for p in art.policies] == ["FlightService1NFPsPolicy",
                                           "FlightServiceEndpoint1NFPsPolicy"]
    assert art.policies[0].subject == PolicySubjectRef(SubjectKind.SERVICE, "FlightService1")
    assert art.policies[1].subject == PolicySubjectRef(SubjectKind.ENDPOINT, "FlightServiceEndpoint1")
    assert [v.name for v in art.vocabulary] == ["Price", "Availability", "Delay"]
    assert [v.semantic is not None for v in art.vocabulary] == [False, False, True]
    assert art.policy_kinds["FlightServiceEndpoint1NFPsPolicy"] is ConstraintKind.OFFERED
    vocab_paths = {p for v in art.vocabulary for p in (v.value_path, v.unit_path) if p}
    for p in art.policies:
        for alt in p.alternatives:
            for f in alt.functions():
                assert f.attribute_id in vocab_paths


def test_transform_no_constraints():
    m = parse_model("service S { nfp A : NFP_Real nfp B : NFP_String endpoint E { nfp C : NFP_Boolean } }")
    art = transform_model(m)
    assert art.policies == ()
    assert len(art.vocabulary) == 3


def test_transform_single_relation():
    m = parse_model("service S { nfp A : NFP_Integer constraint required P: A == 5 }")
    art = transform_model(m)
    assert len(art.policies) == 1
    assert len(art.policies[0].alternatives) == 1
    assert len(art.policies[0].alternatives[0].assertions) == 1


def test_transform_deterministic(flight_text):
    assert transform_model(parse_model(flight_text)) == transform_model(parse_model(flight_text))


@pytest.mark.parametrize("src, fragment", [
    ('service S { nfp A : NFP_Percentage constraint required P: A >= (90.5, "%") }',
     "integer value required"),
    ('service S { nfp D : NFP_Duration constraint required P: D < (5, "furlongs") }',
     "inadmissible unit"),
    ('service S { nfp R : NFP_String constraint required P: R < "x" }', "not defined"),
    ('service S { nfp R : NFP_String constraint required P: R == 1 }', "xsd:string"),
])
def test_transform_type_errors(src, fragment):
    m = parse_model(src)
    problems = check_model_types(m)
    assert len(problems) == 1 and fragment in problems[0]
    with pytest.raises(TypeDiagnostic) as info:
        transform_model(m)
    assert fragment in str(info.value)


def test_lowered_policy_agrees_with_expression(flight_artifacts):
    p = flight_artifacts.policy("FlightService1NFPsPolicy")
    for price in ["200.00", "200", "199.99"]:
        for avail in ["89", "90", "91"]:
            v = {"Price/PriceValue": Number(price), "Price/PriceUnit": Text("$US"),
                 "Availability/AvailabilityValue": Number(avail),
                 "Availability/AvailabilityUnit": Text("%")}
            expected = price in ("200.00", "200") and int(avail) >= 90
            assert evaluate(p, v).satisfied == expected

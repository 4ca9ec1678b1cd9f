"""Independent reference computations and random generators for the tests.

Nothing here calls the code under test's evaluation paths: truth tables
are enumerated directly and constraint functions are decoded by hand.
"""

from __future__ import annotations

import itertools
import random
from decimal import Decimal

from nfpc.model import (
    ConstraintDecl,
    ConstraintKind,
    EndpointDecl,
    NfpDecl,
    SemanticAnnotation,
    ServiceDecl,
    ServiceModel,
)
from nfpc.vsl import And, Bool, Number, Or, Quantity, Rel, RelOp, Text

# (op, xsd local name) -> expected function name, written out by hand
FUNCTION_TABLE = {
    (RelOp.EQ, "double"): "double-equals",
    (RelOp.NE, "double"): "double-not-equals",
    (RelOp.LT, "double"): "double-less-than",
    (RelOp.LE, "double"): "double-less-than-or-equals",
    (RelOp.GT, "double"): "double-greater-than",
    (RelOp.GE, "double"): "double-greater-than-or-equals",
    (RelOp.EQ, "integer"): "integer-equals",
    (RelOp.NE, "integer"): "integer-not-equals",
    (RelOp.LT, "integer"): "integer-less-than",
    (RelOp.LE, "integer"): "integer-less-than-or-equals",
    (RelOp.GT, "integer"): "integer-greater-than",
    (RelOp.GE, "integer"): "integer-greater-than-or-equals",
    (RelOp.EQ, "string"): "string-equals",
    (RelOp.NE, "string"): "string-not-equals",
    (RelOp.EQ, "boolean"): "boolean-equals",
    (RelOp.NE, "boolean"): "boolean-not-equals",
}


# -- truth tables ------------------------------------------------------------


def distinct_leaves(expr) -> list:
    if isinstance(expr, Rel):
        return [expr]
    out = []
    for child in expr.children:
        for leaf in distinct_leaves(child):
            if leaf not in out:
                out.append(leaf)
    return out


def truth(expr, assignment: dict) -> bool:
    if isinstance(expr, Rel):
        return assignment[expr]
    if isinstance(expr, And):
        return all(truth(c, assignment) for c in expr.children)
    return any(truth(c, assignment) for c in expr.children)


def dnf_truth(dnf, assignment: dict) -> bool:
    return any(all(assignment[leaf] for leaf in conj) for conj in dnf)


def assignments(leaves):
    for bits in itertools.product([False, True], repeat=len(leaves)):
        yield dict(zip(leaves, bits))


# -- hand evaluation of constraint functions ---------------------------------


def oracle_function(operator: str, literal: str, actual) -> bool:
    """Decode ``<type>-<op>`` by string matching and compare with Python operators."""
    if operator.startswith("double-") or operator.startswith("integer-"):
        a, e = Decimal(actual.text), Decimal(literal)
        opword = operator.split("-", 1)[1]
    elif operator.startswith("string-"):
        a, e = actual.value, literal
        opword = operator[len("string-"):]
    else:
        a, e = actual.value, literal == "true"
        opword = operator[len("boolean-"):]
    return {
        "equals": a == e,
        "not-equals": a != e,
        "less-than": a < e,
        "less-than-or-equals": a <= e,
        "greater-than": a > e,
        "greater-than-or-equals": a >= e,
    }[opword]


def oracle_policy(policy, valuation) -> bool:
    """Brute-force: some alternative whose every function holds."""
    for alt in policy.alternatives:
        fns = [f for a in alt.assertions for f in a.functions]
        if all(oracle_function(f.operator, f.literal_value, valuation[f.attribute_id]) for f in fns):
            return True
    return False


# -- random VSL --------------------------------------------------------------

NAMES = ["Price", "Availability", "Delay", "Throughput", "secure", "x_1", "Region"]
NUMBER_TEXTS = ["0", "1", "90", "200.00", "0.10", "-3", "12.5", "007", "1.000"]
TEXTS = ["EU", "", 'say "hi"', "back\\slash", "tab\there", "line\nbreak", "€uro", "a#b"]
UNITS = ["ms", "$US", "%", "s", "µs", 'q"u', "a b"]


def random_literal(rng: random.Random):
    pick = rng.randrange(4)
    if pick == 0:
        return Number(rng.choice(NUMBER_TEXTS))
    if pick == 1:
        return Text(rng.choice(TEXTS))
    if pick == 2:
        return Bool(rng.random() < 0.5)
    return Quantity(rng.choice(NUMBER_TEXTS), rng.choice(UNITS))


def random_rel(rng: random.Random) -> Rel:
    return Rel(rng.choice(NAMES), rng.choice(list(RelOp)), random_literal(rng))


def random_expr(rng: random.Random, depth: int = 3, parent=None):
    """Random AST with no And directly under And (nor Or under Or)."""
    if depth == 0 or rng.random() < 0.35:
        return random_rel(rng)
    choices = [k for k in (And, Or) if k is not parent]
    kind = rng.choice(choices)
    children = tuple(random_expr(rng, depth - 1, kind) for _ in range(rng.randint(2, 3)))
    return kind(children)


def random_shape(rng: random.Random, leaves: list, parent=None):
    """Random and/or tree over exactly the given leaves, left to right."""
    if len(leaves) == 1:
        return leaves[0]
    kind = rng.choice([k for k in (And, Or) if k is not parent])
    cuts = sorted(rng.sample(range(1, len(leaves)), rng.randint(1, min(2, len(leaves) - 1))))
    parts = [leaves[i:j] for i, j in zip([0] + cuts, cuts + [len(leaves)])]
    return kind(tuple(random_shape(rng, p, kind) for p in parts))


# -- random models -----------------------------------------------------------

_TYPE_LITERALS = {
    "NFP_Real": lambda r: Quantity(r.choice(["0.10", "1.5"]), r.choice(["ms", "s"])),
    "NFP_Integer": lambda r: Number(r.choice(["1", "42"])),
    "NFP_Percentage": lambda r: Quantity(r.choice(["90", "99"]), "%"),
    "NFP_Price": lambda r: Quantity("200.00", r.choice(["$US", "EUR"])),
    "NFP_String": lambda r: Text(r.choice(["EU", "US"])),
    "NFP_Boolean": lambda r: Bool(r.random() < 0.5),
    "NFP_Duration": lambda r: Quantity("5", r.choice(["s", "ms", "min"])),
}


def _random_subject_body(rng, prefix, counter, used_names):
    nfps = []
    for i in range(rng.randint(0, 3)):
        name = f"{prefix}N{i}"
        used_names.add(name)
        semantic = None
        if rng.random() < 0.3:
            semantic = SemanticAnnotation(
                f"http://onto.example/#{name}",
                "http://map.example/lower.xq" if rng.random() < 0.5 else None,
                "http://map.example/lift.xq" if rng.random() < 0.5 else None,
            )
        nfps.append(NfpDecl(name, rng.choice(list(_TYPE_LITERALS)), semantic))
    constraints = []
    if nfps:
        for _ in range(rng.randint(0, 2)):
            counter[0] += 1
            rels = []
            for _ in range(rng.randint(1, 3)):
                nfp = rng.choice(nfps)
                lit = _TYPE_LITERALS[nfp.type_name](rng)
                ops = [RelOp.EQ, RelOp.NE] if isinstance(lit, (Text, Bool)) else list(RelOp)
                rels.append(Rel(nfp.name, rng.choice(ops), lit))
            constraints.append(ConstraintDecl(
                rng.choice(list(ConstraintKind)), f"C{counter[0]}", random_shape(rng, rels)))
    return tuple(nfps), tuple(constraints)


def random_model(rng: random.Random) -> ServiceModel:
    counter = [0]
    services = []
    for s in range(rng.randint(1, 3)):
        used: set[str] = set()
        nfps, cons = _random_subject_body(rng, f"S{s}", counter, used)
        endpoints = []
        for e in range(rng.randint(0, 2)):
            enfps, econs = _random_subject_body(rng, f"S{s}E{e}", counter, used)
            endpoints.append(EndpointDecl(
                f"S{s}Endpoint{e}", f"B{e}" if rng.random() < 0.5 else None, enfps, econs))
        services.append(ServiceDecl(
            f"Service{s}", f"Iface{s}" if rng.random() < 0.5 else None, nfps, cons,
            tuple(endpoints)))
    return ServiceModel(tuple(services))

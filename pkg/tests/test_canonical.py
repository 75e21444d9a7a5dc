import random
from fractions import Fraction

import pytest

from oracle import brute_plausibility
from plausible.canonical import (
    CovMapping, NegateSymbol, Permute, urn_correspondence, reduce_to_urn, rename_transform,
    verify_change_of_variables,
)
from plausible.formula import FALSE, And, Symbol, SymbolTable, exactly_one, parse, symbols
from plausible.requirements import random_formula
from plausible.semantics import TruthAssignment, UnsatisfiablePremise, evaluate, models

DIE = exactly_one([Symbol(f"s{i}") for i in range(1, 7)])
LABELS = ["add t-definitions", "rewrite query", "rewrite premise", "drop s-definitions"]


def test_die_trace():
    trace = reduce_to_urn(Symbol("s2"), DIE)
    assert (trace.m, trace.n) == (1, 6)
    assert [c.label for c in trace.checkpoints] == LABELS
    assert all(c.value == Fraction(1, 6) for c in trace.checkpoints)
    assert trace.consistent
    assert len(trace.fresh) == 6
    # models satisfying the query come first
    assert evaluate(Symbol("s2"), trace.models[0])
    assert "all checkpoints equal m/n: yes" in trace.report()


def test_false_query_and_entailed_query():
    trace = reduce_to_urn(FALSE, parse("a | b"))
    assert (trace.m, trace.n) == (0, 3) and trace.consistent
    trace = reduce_to_urn(parse("a | b"), parse("a & b"))
    assert trace.m == trace.n == 1 and trace.consistent


def test_unsatisfiable_premise_and_cap():
    with pytest.raises(UnsatisfiablePremise):
        reduce_to_urn(parse("a"), parse("a & !a"))
    with pytest.raises(ValueError):
        reduce_to_urn(parse("a"), parse("a | b | c"), cap=4)


def test_fresh_symbols_avoid_table_names():
    table = SymbolTable(["_t0"])
    trace = reduce_to_urn(parse("a"), parse("a | b"), table=table)
    names = {t.name for t in trace.fresh}
    assert "_t0" not in names and len(names) == 3


def test_random_pairs_reduce_consistently():
    rng = random.Random(3)
    names = ["p1", "p2", "p3", "p4"]
    done = 0
    while done < 40:
        a, x = random_formula(rng, names, 3), random_formula(rng, names, 3)
        try:
            trace = reduce_to_urn(a, x)
        except UnsatisfiablePremise:
            continue
        assert trace.consistent
        assert trace.original == brute_plausibility(a, x)
        done += 1


def test_urn_correspondence_is_a_change_of_variables():
    a, x = parse("p | q"), parse("p -> r")
    trace = reduce_to_urn(a, x)
    mapping = urn_correspondence(trace)
    left = (trace.urn_query, And(trace.s_definitions, trace.urn_premise))
    right = (a, And(trace.t_definitions, x))
    assert verify_change_of_variables(left, right, mapping)


def test_identity_and_broken_mappings():
    a, x = parse("a"), parse("a | b")
    assert verify_change_of_variables((a, x), (a, x), CovMapping.identity(x))
    rows = list(models(x, ["a", "b"]))
    swapped = CovMapping([(rows[0], rows[1]), (rows[1], rows[0]), (rows[2], rows[2])])
    # rows[0] has a false and rows[1] has a true: membership is not preserved
    assert not verify_change_of_variables((a, x), (a, x), swapped)
    short = CovMapping([(rows[0], rows[0])])
    assert not verify_change_of_variables((a, x), (a, x), short)
    with pytest.raises(ValueError):
        verify_change_of_variables(
            (a, x), (a, x), CovMapping([(TruthAssignment({"a": True}), rows[0])])
        )


def test_rename_transform():
    a, x = parse("a & b"), parse("a | c")
    a2, x2 = rename_transform(a, x, Permute({"a": "c", "c": "a"}))
    assert (a2, x2) == (parse("c & b"), parse("c | a"))
    a3, x3 = rename_transform(a, x, NegateSymbol("a"))
    assert (a3, x3) == (parse("!a & b"), parse("!a | c"))
    # both transforms biject assignments, so the value is unchanged
    assert brute_plausibility(a3, x3) == brute_plausibility(a2, x2) == brute_plausibility(a, x)
    with pytest.raises(ValueError):
        rename_transform(a, x, NegateSymbol("z"))
    with pytest.raises(ValueError):
        rename_transform(a, x, Permute({"a": "b"}))
    assert symbols(a2, x2) == symbols(a, x)

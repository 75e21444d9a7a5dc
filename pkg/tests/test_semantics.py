import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from conftest import formulas
from oracle import brute_count, truth
from plausible.formula import And, Not, Or, Symbol, parse, symbols
from plausible.semantics import (
    Order, TruthAssignment, UnsatisfiablePremise, compare_implication, count_models,
    entails, equivalent, evaluate, models, satisfiable,
)


@given(formulas())
def test_count_matches_enumeration(f):
    assert count_models(f) == brute_count(f)


@given(formulas(), st.integers(min_value=0, max_value=4))
def test_superset_invariance(f, k):
    extra = {f"z{i}" for i in range(k)}
    assert count_models(f, symbols(f) | extra) == count_models(f) * 2 ** k


def test_domain_must_cover_formula():
    with pytest.raises(ValueError):
        count_models(parse("a & b"), ["a"])


def test_constants():
    assert count_models(parse("true")) == 1
    assert count_models(parse("false")) == 0
    assert count_models(parse("true"), ["a", "b"]) == 4
    assert count_models(parse("a | !a")) == 2


def test_evaluate_and_missing_symbol():
    f = parse("a -> b")
    assert evaluate(f, {"a": True, "b": False}) is False
    assert evaluate(f, TruthAssignment({"a": False, "b": False})) is True
    with pytest.raises(KeyError):
        evaluate(f, {"a": True})


@given(formulas())
@settings(max_examples=60)
def test_evaluate_agrees_with_oracle(f):
    for rho in models(f, sorted(symbols(f))):
        assert truth(f, rho.values)


def test_truth_assignment_api():
    rho = TruthAssignment({"b": True, "a": False})
    assert rho.domain == {"a", "b"}
    assert rho.restrict(["a"]) == TruthAssignment({"a": False})
    with pytest.raises(KeyError):
        rho.restrict(["c"])
    assert rho.extend(c=True)["c"] is True
    assert rho.as_formula() == And(Not(Symbol("a")), Symbol("b"))
    assert len({rho, TruthAssignment([("a", False), ("b", True)])}) == 1
    assert repr(rho) == "TruthAssignment({a:0, b:1})"


def test_models_order_and_count():
    got = [tuple(r[n] for n in "ab") for r in models(parse("a | b"), ["a", "b"])]
    assert got == [(False, True), (True, False), (True, True)]


def test_models_large_domain_uses_splitting():
    names = [f"v{i}" for i in range(22)]
    fixed = [Symbol(n) if i % 2 else Not(Symbol(n)) for i, n in enumerate(names[:20])]
    f = And(And(*fixed[:2]), parse(" & ".join(
        n if i % 2 else "!" + n for i, n in enumerate(names[:20])
    ) + " & (v20 | v21)"))
    rows = list(models(f, names))
    assert len(rows) == count_models(f, names) == 3
    assert [(r["v20"], r["v21"]) for r in rows] == [(False, True), (True, False), (True, True)]
    assert all(r["v1"] and not r["v0"] for r in rows)


def test_entailment_and_equivalence():
    assert entails(parse("a & b"), parse("a"))
    assert not entails(parse("a"), parse("a & b"))
    assert entails(parse("false"), parse("c"))
    assert equivalent(parse("!(a & b)"), parse("!a | !b"))
    assert not equivalent(parse("a -> b"), parse("b -> a"))
    assert satisfiable(parse("a")) and not satisfiable(parse("a & !a"))


def test_compare_implication():
    x = parse("a -> b")
    assert compare_implication(x, parse("a"), parse("b")) is Order.LESS
    assert compare_implication(x, parse("b"), parse("a")) is Order.GREATER
    assert compare_implication(x, parse("a"), parse("a & b")) is Order.EQUAL
    assert compare_implication(parse("true"), parse("a"), parse("b")) is Order.INCOMPARABLE
    with pytest.raises(UnsatisfiablePremise):
        compare_implication(parse("a & !a"), parse("a"), parse("b"))


@given(formulas(), formulas(), formulas())
@settings(max_examples=80)
def test_implication_preorder_is_transitive(x, p, q):
    if not satisfiable(x):
        return
    r = Or(p, q)
    if compare_implication(x, p, q) in (Order.LESS, Order.EQUAL):
        assert compare_implication(x, p, r) in (Order.LESS, Order.EQUAL)

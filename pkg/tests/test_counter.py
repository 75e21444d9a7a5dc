import random

import pytest
from hypothesis import given, settings

from conftest import formulas
from oracle import brute_count
from plausible import _counter
from plausible.formula import (
    And, Iff, Not, Or, Symbol, conjoin, disjoin, exactly_one, parse, symbols,
)
from plausible.requirements import random_formula

NAMES = [f"p{i}" for i in range(9)]


def both_paths(f, domain):
    """Count with the truth-table path and with the CNF search."""
    return (
        _counter.count(f, domain, threshold=64),
        _counter.count(f, domain, threshold=0),
    )


@given(formulas())
def test_search_matches_truth_table(f):
    domain = sorted(symbols(f) | {"extra"})
    tt, search = both_paths(f, domain)
    assert tt == search == brute_count(f, domain)


def test_random_formulas_with_definitions_and_groups():
    rng = random.Random(7)
    for _ in range(400):
        f = random_formula(rng, NAMES, rng.randrange(1, 6))
        if rng.random() < 0.5:
            f = And(Iff(Symbol(rng.choice(NAMES)), random_formula(rng, NAMES, 2)), f)
        if rng.random() < 0.4:
            group = rng.sample(NAMES, rng.randrange(2, 9))
            f = And(f, exactly_one(group))
        tt, search = both_paths(f, NAMES)
        assert tt == search, f


@pytest.mark.parametrize("n", [1, 2, 5, 6, 7, 40, 130])
def test_exactly_one_counts_n(n):
    syms = [Symbol(f"u{i}") for i in range(n)]
    assert _counter.count(exactly_one(syms), [s.name for s in syms], threshold=0) == n


def test_urn_query_given_large_group():
    syms = [Symbol(f"u{i}") for i in range(100)]
    f = And(disjoin(syms[:37]), exactly_one(syms))
    assert _counter.count(f, [s.name for s in syms]) == 37


def test_definition_elimination_preserves_count():
    f = parse("(t <-> a & b) & (u <-> t | c) & (u | a)")
    g, gone = _counter.eliminate_definitions(_counter.fold(f))
    assert gone == {"t", "u"}
    assert "t" not in symbols(g) and "u" not in symbols(g)
    assert _counter.count(f, sorted(symbols(f))) == brute_count(f)


def test_definition_elimination_skips_self_reference():
    f = parse("(t <-> t & a) & b")
    _, gone = _counter.eliminate_definitions(_counter.fold(f))
    assert "t" not in gone
    assert _counter.count(f, ["a", "b", "t"]) == brute_count(f)


def test_fold_removes_constants():
    assert _counter.fold(parse("a & true")) == Symbol("a")
    assert _counter.fold(parse("a & false")) == parse("false")
    assert _counter.fold(parse("!(false -> a) | b")) == Symbol("b")
    assert _counter.fold(parse("a <-> false")) == Not(Symbol("a"))


def test_deep_formula_truth_table_path():
    f = Symbol("v0")
    for i in range(1, 3000):
        f = Or(And(f, Symbol(f"v{i % 12}")), Not(Symbol(f"v{(i * 7) % 12}")))
    names = sorted(symbols(f))
    assert _counter.count(f, names) == _counter.truth_table(_counter.fold(f), names).bit_count()


def chain(levels):
    # f_i = f_(i-1) & x_i | y_i over fresh x_i, y_i
    f = Symbol("v0")
    count, total = 1, 2
    for i in range(1, levels):
        f = Or(And(f, Symbol(f"x{i}")), Symbol(f"y{i}"))
        count, total = 2 * total + count, 4 * total
    return f, count


def test_deep_formula_search_path():
    f, expected = chain(150)
    assert _counter.count(f, sorted(symbols(f))) == expected


def test_deep_formula_cnf_translation():
    f, _ = chain(5000)
    cnf = _counter.Cnf(sorted(symbols(f)))
    cnf.assert_formula(f)
    clauses = cnf.finish()
    assert cnf.n_vars > cnf.n_inputs and len(clauses) > 5000


def test_long_independent_chain():
    # x_i <-> y_i for 40 pairs: 2^40 models, far beyond enumeration
    f = conjoin(Iff(Symbol(f"x{i}"), Symbol(f"y{i}")) for i in range(40))
    assert _counter.count(f, sorted(symbols(f))) == 2 ** 40


def test_count_cnf_directly():
    # (1 | 2) & (-1 | -2) over 3 variables: 2 * 2 models
    assert _counter.count_cnf([(1, 2), (-1, -2)], 3) == 4
    assert _counter.count_cnf([(1,), (-1,)], 1) == 0
    assert _counter.count_cnf([], 5) == 32


def test_merge_equivalent_literals():
    clauses = [(1, -2), (-1, 2), (2, 3)]
    merged, k = _counter._merge_equivalent(clauses)
    assert k == 1 and merged == [(1, 3)]
    assert _counter._merge_equivalent([(1, 2), (-1, -2), (1, -2), (-1, 2)]) is None


@settings(max_examples=40)
@given(formulas(names=[f"q{i}" for i in range(14)], max_leaves=30, consts=False))
def test_wider_formulas(f):
    domain = sorted(symbols(f))
    tt, search = both_paths(f, domain)
    assert tt == search

import threading

import pytest
from hypothesis import given, settings

from conftest import formulas
from plausible.formula import (
    FALSE, TRUE, And, FormulaSyntaxError, Iff, Implies, Not, Or, Symbol, SymbolTable,
    conjoin, disjoin, exactly_one, parse, size, substitute, symbols, to_text,
)

a, b, c = Symbol("a"), Symbol("b"), Symbol("c")


@given(formulas())
def test_print_parse_round_trip(f):
    assert parse(to_text(f)) == f


@given(formulas())
def test_printing_is_stable(f):
    text = to_text(f)
    assert to_text(parse(text)) == text


@pytest.mark.parametrize(
    "text, expected",
    [
        ("a & b | c", Or(And(a, b), c)),
        ("a | b & c", Or(a, And(b, c))),
        ("a -> b -> c", Implies(a, Implies(b, c))),
        ("(a -> b) -> c", Implies(Implies(a, b), c)),
        ("a <-> b <-> c", Iff(Iff(a, b), c)),
        ("a -> b <-> c", Iff(Implies(a, b), c)),
        ("!a & b", And(Not(a), b)),
        ("!(a & b)", Not(And(a, b))),
        ("!!a", Not(Not(a))),
        ("true & false", And(TRUE, FALSE)),
        ("a & b & c", And(And(a, b), c)),
    ],
)
def test_precedence_and_associativity(text, expected):
    assert parse(text) == expected


def test_minimal_parentheses():
    assert to_text(Implies(Implies(a, b), c)) == "(a -> b) -> c"
    assert to_text(Implies(a, Implies(b, c))) == "a -> b -> c"
    assert to_text(And(a, Or(b, c))) == "a & (b | c)"
    assert to_text(Or(And(a, b), c)) == "a & b | c"
    assert to_text(And(a, And(b, c))) == "a & (b & c)"
    assert str(Not(Or(a, b))) == "!(a | b)"


@pytest.mark.parametrize(
    "text, token",
    [
        ("a & & b", 3),
        ("a &", 3),
        ("(a | b", 5),
        ("a b", 2),
        ("a $ b", 2),
        ("", 1),
        ("one(a, a)", 1),
        ("true & one", 4),
    ],
)
def test_syntax_errors_report_token(text, token):
    with pytest.raises(FormulaSyntaxError) as info:
        parse(text)
    assert info.value.token == token


def test_reserved_identifiers():
    with pytest.raises(FormulaSyntaxError):
        parse("_t0 | a")
    assert parse("_t0 | a", allow_reserved=True) == Or(Symbol("_t0"), a)
    with pytest.raises(FormulaSyntaxError):
        parse("one(true, a)")


def test_one_syntax_expands_to_exactly_one():
    assert parse("one(a, b, c)") == exactly_one([a, b, c])
    assert parse("one(a)") == a


def test_exactly_one_shape():
    f = exactly_one(["a", "b", "c"])
    assert f == And(Or(Or(a, b), c), And(And(Not(And(a, b)), Not(And(a, c))), Not(And(b, c))))
    with pytest.raises(ValueError):
        exactly_one([])
    with pytest.raises(ValueError):
        exactly_one([a, a])


def test_conjoin_disjoin_empty_and_long():
    assert conjoin([]) == TRUE
    assert disjoin([]) == FALSE
    syms = [Symbol(f"p{i}") for i in range(1000)]
    long = disjoin(syms)
    assert symbols(long) == {s.name for s in syms}
    # long runs are balanced, so printing does not hit the recursion limit
    assert to_text(long).count("|") == 999


def test_substitute_is_simultaneous():
    f = And(a, b)
    assert substitute(f, {"a": Not(b), "b": a}) == And(Not(b), a)
    assert substitute(f, {}) is f
    assert substitute(Or(a, c), {"c": TRUE}) == Or(a, TRUE)


def test_symbols_and_size():
    f = parse("a & (b -> !c) | true")
    assert symbols(f) == {"a", "b", "c"}
    assert symbols() == frozenset()
    assert size(f) == 8


def test_symbol_table_interning_and_fresh():
    table = SymbolTable(["a", "b"])
    assert table.intern("a") == 0
    assert table.intern("c") == 2
    table.intern("_t1")
    fresh = table.fresh(3)
    assert [s.name for s in fresh] == ["_t0", "_t2", "_t3"]
    assert "_t3" in table and len(table) == 7
    assert table.name_of(table.id_of("c")) == "c"
    with pytest.raises(ValueError):
        table.intern("not a name")


def test_parse_interns_into_table():
    table = SymbolTable()
    parse("z | y & z", table)
    assert table.names == ("z", "y")


def test_symbol_table_concurrent_interning():
    table = SymbolTable()
    names = [f"v{i}" for i in range(200)]
    results = []

    def work():
        results.append([table.intern(n) for n in names])

    threads = [threading.Thread(target=work) for _ in range(8)]
    for t in threads:
        t.start()
    for t in threads:
        t.join()
    assert all(r == results[0] for r in results)
    assert sorted(results[0]) == list(range(200))


@settings(max_examples=50)
@given(formulas(consts=False))
def test_nodes_are_hashable_values(f):
    assert parse(to_text(f)) in {f}

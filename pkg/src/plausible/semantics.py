"""Truth assignments, evaluation, model counting and the implication order."""

from __future__ import annotations

import enum
from dataclasses import dataclass
from typing import Iterable, Iterator, Mapping, Sequence

from . import _counter
from .formula import (
    And, Const, Formula, Iff, Implies, Not, Or, Symbol, conjoin, postorder, substitute,
    symbols,
)

__all__ = [
    "TruthAssignment", "Order", "evaluate", "count_models", "satisfiable",
    "entails", "equivalent", "compare_implication", "models",
    "UnsatisfiablePremise",
]


class UnsatisfiablePremise(ValueError):
    """A premise that must be satisfiable is not."""

    def __init__(self, premise: Formula, what: str = "premise"):
        super().__init__(f"unsatisfiable {what}: {premise}")
        self.premise = premise


@dataclass(frozen=True)
class TruthAssignment:
    """A total map from a finite set of symbol names to booleans."""

    values: Mapping[str, bool]

    def __init__(self, values: Mapping[str, bool] | Iterable[tuple[str, bool]]):
        object.__setattr__(self, "values", dict(values))

    @property
    def domain(self) -> frozenset[str]:
        return frozenset(self.values)

    def __getitem__(self, name: str) -> bool:
        return self.values[name]

    def restrict(self, names: Iterable[str]) -> "TruthAssignment":
        names = set(names)
        missing = names - self.values.keys()
        if missing:
            raise KeyError(f"not in domain: {sorted(missing)}")
        return TruthAssignment({k: v for k, v in self.values.items() if k in names})

    def extend(self, **more: bool) -> "TruthAssignment":
        return TruthAssignment({**self.values, **more})

    def as_formula(self) -> Formula:
        """Conjunction of literals satisfied only by this assignment."""
        return conjoin(
            Symbol(k) if self.values[k] else Not(Symbol(k)) for k in sorted(self.values)
        )

    def key(self) -> tuple:
        return tuple(sorted(self.values.items()))

    def __hash__(self) -> int:
        return hash(self.key())

    def __eq__(self, other: object) -> bool:
        return isinstance(other, TruthAssignment) and self.values == other.values

    def __repr__(self) -> str:
        body = ", ".join(f"{k}:{int(v)}" for k, v in sorted(self.values.items()))
        return f"TruthAssignment({{{body}}})"


def evaluate(f: Formula, rho: TruthAssignment | Mapping[str, bool]) -> bool:
    """Truth value of ``f`` under ``rho``; every symbol of ``f`` must be assigned."""
    values = rho.values if isinstance(rho, TruthAssignment) else rho
    memo: dict[int, bool] = {}
    for g in postorder(f):
        if isinstance(g, Symbol):
            try:
                out = bool(values[g.name])
            except KeyError:
                raise KeyError(f"symbol {g.name!r} not in assignment domain") from None
        elif isinstance(g, Const):
            out = g.value
        elif isinstance(g, Not):
            out = not memo[id(g.arg)]
        else:
            a, b = memo[id(g.left)], memo[id(g.right)]
            if isinstance(g, And):
                out = a and b
            elif isinstance(g, Or):
                out = a or b
            elif isinstance(g, Implies):
                out = (not a) or b
            elif isinstance(g, Iff):
                out = a == b
            else:
                raise TypeError(f"not a formula: {g!r}")
        memo[id(g)] = out
    return memo[id(f)]


def count_models(
    f: Formula,
    domain: Iterable[str] | None = None,
    *,
    threshold: int = _counter.DEFAULT_ENUM_THRESHOLD,
) -> int:
    """``#S(f)``: the number of assignments on ``domain`` that satisfy ``f``.

    ``domain`` defaults to the symbols of ``f`` and must contain all of them.
    Symbols of ``domain`` that do not occur in ``f`` each double the count.
    """
    used = symbols(f)
    domain = used if domain is None else frozenset(domain)
    missing = used - domain
    if missing:
        raise ValueError(f"domain is missing symbols {sorted(missing)}")
    return _counter.count(f, sorted(domain), threshold)


def satisfiable(f: Formula) -> bool:
    return count_models(f) > 0


def entails(x: Formula, a: Formula) -> bool:
    """``x |= a``: every model of ``x`` also satisfies ``a``."""
    return count_models(And(x, Not(a))) == 0


def equivalent(a: Formula, b: Formula) -> bool:
    return count_models(Not(Iff(a, b))) == 0


class Order(enum.Enum):
    LESS = "less"
    EQUAL = "equal"
    GREATER = "greater"
    INCOMPARABLE = "incomparable"


def compare_implication(x: Formula, a: Formula, b: Formula) -> Order:
    """Position of ``a`` relative to ``b`` in the implication preorder under ``x``."""
    if not satisfiable(x):
        raise UnsatisfiablePremise(x)
    ab = entails(x, Implies(a, b))
    ba = entails(x, Implies(b, a))
    if ab and ba:
        return Order.EQUAL
    if ab:
        return Order.LESS
    if ba:
        return Order.GREATER
    return Order.INCOMPARABLE


def models(f: Formula, domain: Sequence[str] | None = None) -> Iterator[TruthAssignment]:
    """Yield the models of ``f`` on ``domain`` in lexicographic order.

    The order compares the value tuples ``(rho(d0), rho(d1), ...)`` with
    false before true, ``domain`` giving the symbol order.
    """
    domain = sorted(symbols(f)) if domain is None else list(domain)
    missing = symbols(f) - set(domain)
    if missing:
        raise ValueError(f"domain is missing symbols {sorted(missing)}")
    yield from _models(_counter.fold(f), domain, {})


def _models(f, domain, fixed) -> Iterator[TruthAssignment]:
    if len(domain) <= _counter.DEFAULT_ENUM_THRESHOLD:
        # reversed order puts domain[0] on the most significant bit
        table = _counter.truth_table(f, domain[::-1])
        n = len(domain)
        bits = format(table, "b")[::-1]
        i = bits.find("1")
        while i >= 0:
            row = dict(fixed)
            row.update((name, bool((i >> (n - 1 - k)) & 1)) for k, name in enumerate(domain))
            yield TruthAssignment(row)
            i = bits.find("1", i + 1)
        return
    # split on the first symbol, skipping branches without models
    name, rest = domain[0], domain[1:]
    for value in (False, True):
        g = _counter.fold(substitute(f, {name: Const(value)}))
        if _counter.count(g, rest):
            yield from _models(g, rest, {**fixed, name: value})

"""Reduction of a query/premise pair to urn form, and related transforms."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Mapping, Sequence

from .formula import (
    And, Formula, Iff, Not, Symbol, SymbolTable, conjoin, disjoin, exactly_one,
    substitute, symbols, to_text,
)
from .plausibility import plausibility
from .semantics import TruthAssignment, UnsatisfiablePremise, count_models, evaluate, models

__all__ = [
    "Checkpoint", "ReductionTrace", "reduce_to_urn", "CovMapping",
    "verify_change_of_variables", "urn_correspondence", "Permute",
    "NegateSymbol", "rename_transform", "DEFAULT_MODEL_CAP",
]

DEFAULT_MODEL_CAP = 4096


@dataclass(frozen=True)
class Checkpoint:
    label: str
    query: Formula
    premise: Formula
    value: Fraction


@dataclass(frozen=True)
class ReductionTrace:
    query: Formula
    premise: Formula
    domain: tuple[str, ...]
    m: int
    n: int
    fresh: tuple[Symbol, ...]
    models: tuple[TruthAssignment, ...]
    model_descriptions: tuple[Formula, ...]
    t_definitions: Formula
    s_definitions: Formula
    urn_query: Formula
    urn_premise: Formula
    original: Fraction
    checkpoints: tuple[Checkpoint, ...]

    @property
    def consistent(self) -> bool:
        target = Fraction(self.m, self.n)
        return self.original == target and all(c.value == target for c in self.checkpoints)

    def report(self) -> str:
        lines = [
            f"query:    {to_text(self.query)}",
            f"premise:  {to_text(self.premise)}",
            f"symbols:  {', '.join(self.domain) or '(none)'}",
            f"m = #S(A & X) = {self.m},  n = #S(X) = {self.n}",
            f"urn form: {to_text(self.urn_query)}  |  {to_text(self.urn_premise)}",
            f"P(A | X) = {self.original}",
        ]
        for c in self.checkpoints:
            lines.append(f"{c.label}: {c.value}")
            lines.append(f"    {_abbrev(to_text(c.query))}  |  {_abbrev(to_text(c.premise))}")
        lines.append("all checkpoints equal m/n: " + ("yes" if self.consistent else "NO"))
        return "\n".join(lines)


def _abbrev(text: str, width: int = 120) -> str:
    return text if len(text) <= width else text[: width - 3] + "..."


def _literal(name: str, value: bool) -> Formula:
    return Symbol(name) if value else Not(Symbol(name))


def reduce_to_urn(
    a: Formula,
    x: Formula,
    *,
    table: SymbolTable | None = None,
    cap: int = DEFAULT_MODEL_CAP,
) -> ReductionTrace:
    """Rewrite ``a | x`` as ``t1 | ... | tm`` given ``one(t1, ..., tn)``.

    Builds every intermediate formula of the four-step rewriting (model
    descriptions, definitions of the fresh ``t`` symbols, definitions of
    the original symbols in terms of them) and records the plausibility at
    each step.  Models are listed lexicographically over the symbol order of
    ``table`` (or sorted names), those satisfying ``a`` first.
    """
    domain = sorted(symbols(a, x))
    if table is not None:
        for name in domain:
            table.intern(name)
        domain.sort(key=table.id_of)
    n = count_models(x, domain)
    if n == 0:
        raise UnsatisfiablePremise(x)
    if n > cap:
        raise ValueError(f"premise has {n} models, above the cap of {cap}")

    all_models = list(models(x, domain))
    hits = [rho for rho in all_models if evaluate(a, rho)]
    misses = [rho for rho in all_models if not evaluate(a, rho)]
    ordered = hits + misses
    m = len(hits)

    if table is None:
        table = SymbolTable(domain)
    ts = table.fresh(n, prefix="_t")

    zs = [conjoin(_literal(s, rho[s]) for s in domain) for rho in ordered]
    d_t = conjoin(Iff(t, z) for t, z in zip(ts, zs))
    d_s = conjoin(
        Iff(Symbol(s), disjoin(t for t, rho in zip(ts, ordered) if rho[s])) for s in domain
    )
    urn_query = disjoin(ts[:m])
    urn_premise = exactly_one(ts)

    full = set(domain) | {t.name for t in ts}
    steps = [
        ("add t-definitions", a, And(d_t, x)),
        ("rewrite query", urn_query, And(d_t, x)),
        ("rewrite premise", urn_query, And(d_s, urn_premise)),
        ("drop s-definitions", urn_query, urn_premise),
    ]
    checkpoints = tuple(
        Checkpoint(label, q, p, plausibility(q, p, full)) for label, q, p in steps
    )
    return ReductionTrace(
        query=a,
        premise=x,
        domain=tuple(domain),
        m=m,
        n=n,
        fresh=tuple(ts),
        models=tuple(ordered),
        model_descriptions=tuple(zs),
        t_definitions=d_t,
        s_definitions=d_s,
        urn_query=urn_query,
        urn_premise=urn_premise,
        original=plausibility(a, x),
        checkpoints=checkpoints,
    )


@dataclass(frozen=True)
class CovMapping:
    """An explicit finite pairing of truth assignments."""

    pairs: tuple[tuple[TruthAssignment, TruthAssignment], ...]

    def __init__(self, pairs):
        object.__setattr__(self, "pairs", tuple(pairs))

    @classmethod
    def identity(cls, x: Formula, domain: Sequence[str] | None = None) -> "CovMapping":
        return cls((rho, rho) for rho in models(x, domain))


def verify_change_of_variables(
    pair1: tuple[Formula, Formula],
    pair2: tuple[Formula, Formula],
    mapping: CovMapping,
) -> bool:
    """Check that ``mapping`` is a change of variables from ``pair1`` to ``pair2``.

    It must biject the models of the first premise onto the models of the
    second, sending models of ``a & x`` exactly onto models of ``a' & x'``.
    Raises ``ValueError`` if the assignments have inconsistent domains or do
    not cover the symbols of their pair.
    """
    (a1, x1), (a2, x2) = pair1, pair2
    if not mapping.pairs:
        dom1, dom2 = symbols(a1, x1), symbols(a2, x2)
    else:
        dom1 = mapping.pairs[0][0].domain
        dom2 = mapping.pairs[0][1].domain
    for left, right in mapping.pairs:
        if left.domain != dom1 or right.domain != dom2:
            raise ValueError("mapping entries have differing domains")
    if not symbols(a1, x1) <= dom1 or not symbols(a2, x2) <= dom2:
        raise ValueError("mapping domain does not cover the pair's symbols")

    lefts = [l for l, _ in mapping.pairs]
    rights = [r for _, r in mapping.pairs]
    if len(set(lefts)) != len(lefts) or len(set(rights)) != len(rights):
        return False
    if not all(evaluate(x1, l) for l in lefts) or not all(evaluate(x2, r) for r in rights):
        return False
    if len(lefts) != count_models(x1, dom1) or len(rights) != count_models(x2, dom2):
        return False
    for l, r in mapping.pairs:
        if evaluate(a1, l) != evaluate(a2, r):
            return False
    p1 = plausibility(a1, x1, dom1)
    p2 = plausibility(a2, x2, dom2)
    if p1 != p2:
        raise AssertionError(f"valid change of variables but {p1} != {p2}")
    return True


def urn_correspondence(trace: ReductionTrace) -> CovMapping:
    """The pairing of models of ``D_s & one(t)`` with models of ``D_t & X``.

    Both sides are the same assignment: the i-th model of the premise on the
    original symbols, with only ``t_i`` true among the fresh ones.
    """
    pairs = []
    for i, rho in enumerate(trace.models):
        full = dict(rho.values)
        for j, t in enumerate(trace.fresh):
            full[t.name] = i == j
        tilde = TruthAssignment(full)
        pairs.append((tilde, tilde))
    return CovMapping(pairs)


@dataclass(frozen=True)
class Permute:
    mapping: Mapping[str, str]


@dataclass(frozen=True)
class NegateSymbol:
    name: str


def rename_transform(
    a: Formula, x: Formula, kind: Permute | NegateSymbol
) -> tuple[Formula, Formula]:
    """Apply a symbol renaming or a single-symbol negation to both formulas."""
    used = symbols(a, x)
    if isinstance(kind, NegateSymbol):
        if kind.name not in used:
            raise ValueError(f"{kind.name!r} does not occur in the pair")
        sub = {kind.name: Not(Symbol(kind.name))}
    else:
        image = [kind.mapping.get(s, s) for s in sorted(used)]
        if len(set(image)) != len(image):
            raise ValueError("renaming is not injective on the pair's symbols")
        sub = {s: Symbol(t) for s, t in kind.mapping.items() if s in used}
    return substitute(a, sub), substitute(x, sub)

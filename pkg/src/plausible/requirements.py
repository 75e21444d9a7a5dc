"""Executable checks of the four requirements against pluggable providers.

A provider maps a (query, premise) pair to an opaque value and optionally
supplies a partial order on those values.  Instances of each requirement are
generated from a seed, their preconditions are verified semantically, and a
verdict records both compared values.
"""

from __future__ import annotations

import json
import random
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Any, Callable, Sequence

from .formula import (
    FALSE, TRUE, And, Formula, Iff, Implies, Not, Or, Symbol, conjoin, symbols, to_text,
)
from .plausibility import plausibility
from .semantics import (
    Order, compare_implication, count_models, entails, equivalent, satisfiable,
)

__all__ = [
    "PlausibilityProvider", "counting_provider", "three_valued_provider",
    "weighted_provider", "PROVIDERS", "GenParams", "RequirementInstance",
    "GenerationBudgetExceeded", "generate_instance", "validate_instance",
    "Verdict", "check_requirement", "ChainVerdict", "r4_witness_chain",
    "SuiteRow", "SuiteReport", "run_suite", "random_formula",
    "equivalent_rewrite", "chain_premise", "REQUIREMENTS",
]

REQUIREMENTS = ("R1", "R2", "R3", "R4")


# --------------------------------------------------------------------------
# providers


@dataclass(frozen=True)
class PlausibilityProvider:
    """A candidate plausibility function.

    ``compare`` may be ``None``, in which case R4 cannot be tested.
    """

    name: str
    eval: Callable[[Formula, Formula], Any]
    compare: Callable[[Any, Any], Order] | None = None


def _compare_numbers(p, q) -> Order:
    if p < q:
        return Order.LESS
    if p > q:
        return Order.GREATER
    return Order.EQUAL


def counting_provider() -> PlausibilityProvider:
    return PlausibilityProvider("counting", plausibility, _compare_numbers)


_TV_RANK = {"F": 0, "u": 1, "T": 2}


def _three_valued(a: Formula, x: Formula) -> str:
    if entails(x, Not(a)):
        return "F"
    if entails(x, a):
        return "T"
    return "u"


def _compare_three_valued(p: str, q: str) -> Order:
    return _compare_numbers(_TV_RANK[p], _TV_RANK[q])


def three_valued_provider() -> PlausibilityProvider:
    """``F`` if the premise refutes the query, ``T`` if it entails it, else ``u``."""
    return PlausibilityProvider("three-valued", _three_valued, _compare_three_valued)


# the R2 generator always introduces this symbol
R2_SYMBOL = "r1"


def weighted_provider(designated: str = R2_SYMBOL) -> PlausibilityProvider:
    """Counting with weight 2 on assignments that make ``designated`` true.

    The weighted ratio is computed over the pair's symbols plus the
    designated one.  Defining ``designated`` by a formula changes the weights
    of the premise's models, so this provider breaks R2.
    """
    d = Symbol(designated)

    def weight(f: Formula, domain) -> int:
        return 2 * count_models(And(f, d), domain) + count_models(And(f, Not(d)), domain)

    def ev(a: Formula, x: Formula) -> Fraction:
        domain = symbols(a, x) | {designated}
        total = weight(x, domain)
        if total == 0:
            return Fraction(1)
        return Fraction(weight(And(a, x), domain), total)

    return PlausibilityProvider(f"weighted({designated})", ev, _compare_numbers)


PROVIDERS: dict[str, Callable[[], PlausibilityProvider]] = {
    "counting": counting_provider,
    "three-valued": three_valued_provider,
    "weighted": weighted_provider,
}


# --------------------------------------------------------------------------
# random formulas


def random_formula(
    rng: random.Random,
    names: Sequence[str],
    depth: int,
    *,
    const_prob: float = 0.0,
) -> Formula:
    """A random formula over ``names`` with nesting at most ``depth``."""
    if depth <= 0 or rng.random() < 0.25:
        if const_prob and rng.random() < const_prob:
            return TRUE if rng.random() < 0.5 else FALSE
        return Symbol(rng.choice(names))
    k = rng.randrange(9)
    if k < 2:
        return Not(random_formula(rng, names, depth - 1, const_prob=const_prob))
    op = (And, And, Or, Or, Implies, Iff, Iff)[k - 2]
    return op(
        random_formula(rng, names, depth - 1, const_prob=const_prob),
        random_formula(rng, names, depth - 1, const_prob=const_prob),
    )


def equivalent_rewrite(f: Formula, rng: random.Random, rate: float = 0.5) -> Formula:
    """Rewrite ``f`` into a logically equivalent formula.

    Uses commutativity, De Morgan, double negation and implication
    elimination, each applied at random nodes.
    """
    if isinstance(f, Not):
        inner = f.arg
        if isinstance(inner, Not) and rng.random() < rate:
            return equivalent_rewrite(inner.arg, rng, rate)
        if isinstance(inner, And) and rng.random() < rate:
            return Or(equivalent_rewrite(Not(inner.left), rng, rate),
                      equivalent_rewrite(Not(inner.right), rng, rate))
        if isinstance(inner, Or) and rng.random() < rate:
            return And(equivalent_rewrite(Not(inner.left), rng, rate),
                       equivalent_rewrite(Not(inner.right), rng, rate))
        out: Formula = Not(equivalent_rewrite(inner, rng, rate))
    elif isinstance(f, Implies):
        left = equivalent_rewrite(f.left, rng, rate)
        right = equivalent_rewrite(f.right, rng, rate)
        out = Or(Not(left), right) if rng.random() < rate else Implies(left, right)
    elif isinstance(f, (And, Or, Iff)):
        left = equivalent_rewrite(f.left, rng, rate)
        right = equivalent_rewrite(f.right, rng, rate)
        if rng.random() < rate:
            left, right = right, left
        out = type(f)(left, right)
    else:
        out = f
    if rng.random() < rate / 4:
        out = Not(Not(out))
    return out


# --------------------------------------------------------------------------
# instances


@dataclass(frozen=True)
class GenParams:
    symbols: int = 4       # size of the main symbol pool p1..pN
    depth: int = 3         # formula nesting bound
    extra_symbols: int = 2  # pool q1..qM for irrelevant premises
    budget: int = 1000     # rejection-sampling attempts


class GenerationBudgetExceeded(RuntimeError):
    pass


@dataclass(frozen=True)
class RequirementInstance:
    """Formulas one requirement quantifies over.

    R1 uses ``a, x, b, y``; R2 uses ``a, x, e, s``; R3 uses ``a, x, y``;
    R4 uses ``a, x, b``.
    """

    which: str
    seed: int
    a: Formula
    x: Formula
    b: Formula | None = None
    y: Formula | None = None
    e: Formula | None = None
    s: Symbol | None = None

    def as_dict(self) -> dict:
        out = {"which": self.which, "seed": self.seed}
        for key in ("a", "x", "b", "y", "e", "s"):
            value = getattr(self, key)
            if value is not None:
                out[key] = to_text(value)
        return out

    def __str__(self) -> str:
        body = ", ".join(f"{k}={v}" for k, v in self.as_dict().items() if k not in ("which", "seed"))
        return f"{self.which}[seed={self.seed}]({body})"


def generate_instance(seed: int, which: str, params: GenParams = GenParams()) -> RequirementInstance:
    """Deterministically build a valid instance of requirement ``which``."""
    if which not in REQUIREMENTS:
        raise ValueError(f"unknown requirement {which!r}")
    rng = random.Random(f"{which}:{seed}")
    pool = [f"p{i}" for i in range(1, params.symbols + 1)]
    others = [f"q{i}" for i in range(1, params.extra_symbols + 1)]
    for _ in range(params.budget):
        inst = _draw(rng, which, seed, pool, others, params.depth)
        if inst is not None and _preconditions(inst) is None:
            return inst
    raise GenerationBudgetExceeded(
        f"no valid {which} instance for seed {seed} within {params.budget} attempts"
    )


def _draw(rng, which, seed, pool, others, depth) -> RequirementInstance | None:
    x = random_formula(rng, pool, depth)
    a = random_formula(rng, pool, depth)
    if which == "R1":
        y = equivalent_rewrite(x, rng)
        c = random_formula(rng, pool, depth)
        b = rng.choice([
            equivalent_rewrite(a, rng),
            And(a, x),
            Or(And(a, x), And(c, Not(x))),
            Or(a, And(c, Not(x))),
        ])
        return RequirementInstance(which, seed, a, x, b=b, y=y)
    if which == "R2":
        e = random_formula(rng, pool, depth)
        return RequirementInstance(which, seed, a, x, e=e, s=Symbol(R2_SYMBOL))
    if which == "R3":
        y = random_formula(rng, others, max(depth - 1, 1))
        return RequirementInstance(which, seed, a, x, y=y)
    b = Or(a, random_formula(rng, pool, depth))
    return RequirementInstance(which, seed, a, x, b=b)


def _preconditions(inst: RequirementInstance) -> str | None:
    """Reason the instance is invalid, or ``None`` if it is valid."""
    a, x = inst.a, inst.x
    if not satisfiable(x):
        return "premise is unsatisfiable"
    if inst.which == "R1":
        if inst.b is None or inst.y is None:
            return "R1 needs b and y"
        if not equivalent(x, inst.y):
            return "x and y are not equivalent"
        if not entails(x, Iff(a, inst.b)):
            return "a and b are not equivalent given x"
    elif inst.which == "R2":
        if inst.e is None or inst.s is None:
            return "R2 needs e and s"
        if inst.s.name in symbols(a, x, inst.e):
            return "s occurs in a, x or e"
    elif inst.which == "R3":
        if inst.y is None:
            return "R3 needs y"
        if symbols(a, x) & symbols(inst.y):
            return "y shares symbols with a or x"
        if not satisfiable(inst.y):
            return "y is unsatisfiable"
    elif inst.which == "R4":
        if inst.b is None:
            return "R4 needs b"
        if compare_implication(x, a, inst.b) is not Order.LESS:
            return "a is not strictly below b given x"
    else:
        return f"unknown requirement {inst.which!r}"
    return None


def validate_instance(inst: RequirementInstance) -> None:
    reason = _preconditions(inst)
    if reason is not None:
        raise ValueError(f"invalid instance {inst}: {reason}")


# --------------------------------------------------------------------------
# verdicts


@dataclass(frozen=True)
class Verdict:
    """Outcome of one requirement check.

    ``status`` is ``"pass"``, ``"fail"`` or ``"untestable"``.  ``lhs`` and
    ``rhs`` are the two compared provider values.
    """

    status: str
    provider: str
    instance: RequirementInstance
    lhs: Any = None
    rhs: Any = None
    cause: str | None = None

    @property
    def passed(self) -> bool:
        return self.status == "pass"

    def as_dict(self) -> dict:
        return {
            "status": self.status,
            "provider": self.provider,
            "instance": self.instance.as_dict(),
            "lhs": None if self.lhs is None else str(self.lhs),
            "rhs": None if self.rhs is None else str(self.rhs),
            "cause": self.cause,
        }


def _sides(inst: RequirementInstance) -> tuple[tuple[Formula, Formula], tuple[Formula, Formula]]:
    a, x = inst.a, inst.x
    if inst.which == "R1":
        return (a, x), (inst.b, inst.y)
    if inst.which == "R2":
        return (a, x), (a, And(Iff(inst.s, inst.e), x))
    if inst.which == "R3":
        return (a, x), (a, And(inst.y, x))
    return (a, x), (inst.b, x)


def check_requirement(p: PlausibilityProvider, inst: RequirementInstance) -> Verdict:
    """Check one instance: equality for R1 to R3, strict ``Less`` for R4."""
    validate_instance(inst)
    if inst.which == "R4" and p.compare is None:
        return Verdict("untestable", p.name, inst, cause="provider has no order")
    (qa, pa), (qb, pb) = _sides(inst)
    try:
        lhs = p.eval(qa, pa)
        rhs = p.eval(qb, pb)
        if inst.which == "R4":
            rel = p.compare(lhs, rhs)
            ok = rel is Order.LESS
            cause = None if ok else f"expected less, got {rel.value}"
        else:
            ok = lhs == rhs
            cause = None if ok else "values differ"
    except Exception as exc:  # provider failures become verdicts
        return Verdict("fail", p.name, inst, cause=f"{type(exc).__name__}: {exc}")
    return Verdict("pass" if ok else "fail", p.name, inst, lhs, rhs, cause)


def chain_premise(n: int) -> tuple[list[Symbol], Formula]:
    """Symbols ``s1..sn`` and the premise ``(s1 -> s2) & ... & (s(n-1) -> sn)``."""
    syms = [Symbol(f"s{i}") for i in range(1, n + 1)]
    return syms, conjoin(Implies(syms[i], syms[i + 1]) for i in range(n - 1))


@dataclass(frozen=True)
class ChainVerdict:
    """Values along the implication chain and the first link that is not strict."""

    status: str
    provider: str
    n: int
    premise: Formula
    values: tuple
    failed_link: int | None = None  # i such that s_i | X < s_(i+1) | X fails
    relation: Order | None = None

    @property
    def passed(self) -> bool:
        return self.status == "pass"

    def as_dict(self) -> dict:
        return {
            "status": self.status,
            "provider": self.provider,
            "n": self.n,
            "premise": to_text(self.premise),
            "values": [str(v) for v in self.values],
            "failed_link": self.failed_link,
            "relation": None if self.relation is None else self.relation.value,
        }

    def __str__(self) -> str:
        vals = ", ".join(str(v) for v in self.values)
        head = f"chain n={self.n} [{self.provider}]: {self.status}"
        if self.failed_link is not None:
            i = self.failed_link
            head += f" at s{i} | X vs s{i + 1} | X ({self.relation.value})"
        return f"{head}\n  X = {to_text(self.premise)}\n  values s1..s{self.n}: {vals}"


def r4_witness_chain(p: PlausibilityProvider, n: int) -> ChainVerdict:
    """Evaluate ``s1..sn`` under the chain premise and check strict increase."""
    if n < 2:
        raise ValueError("the chain needs n >= 2")
    syms, x = chain_premise(n)
    values = tuple(p.eval(s, x) for s in syms)
    if p.compare is None:
        return ChainVerdict("untestable", p.name, n, x, values)
    for i in range(n - 1):
        rel = p.compare(values[i], values[i + 1])
        if rel is not Order.LESS:
            return ChainVerdict("fail", p.name, n, x, values, i + 1, rel)
    return ChainVerdict("pass", p.name, n, x, values)


# --------------------------------------------------------------------------
# suite


@dataclass
class SuiteRow:
    requirement: str
    provider: str
    passed: int = 0
    failed: int = 0
    untestable: int = 0
    witnesses: list[Verdict] = field(default_factory=list)

    def as_dict(self) -> dict:
        return {
            "requirement": self.requirement,
            "provider": self.provider,
            "passed": self.passed,
            "failed": self.failed,
            "untestable": self.untestable,
            "witnesses": [w.as_dict() for w in self.witnesses],
        }


@dataclass
class SuiteReport:
    seed: int
    cases: int
    rows: list[SuiteRow]
    chains: list[ChainVerdict]

    @property
    def passed(self) -> bool:
        return all(r.failed == 0 for r in self.rows) and all(
            c.status != "fail" for c in self.chains
        )

    def as_dict(self) -> dict:
        return {
            "seed": self.seed,
            "cases": self.cases,
            "passed": self.passed,
            "rows": [r.as_dict() for r in self.rows],
            "chains": [c.as_dict() for c in self.chains],
        }

    def to_json(self) -> str:
        return json.dumps(self.as_dict(), indent=2, sort_keys=True)

    def to_text(self) -> str:
        lines = [f"{'req':<4} {'provider':<18} {'pass':>6} {'fail':>6} {'untestable':>10}"]
        for r in self.rows:
            lines.append(
                f"{r.requirement:<4} {r.provider:<18} {r.passed:>6} {r.failed:>6} {r.untestable:>10}"
            )
        for r in self.rows:
            for w in r.witnesses:
                lines.append(f"witness {r.requirement} [{r.provider}]: {w.instance}")
                lines.append(f"  lhs={w.lhs} rhs={w.rhs} ({w.cause})")
        for c in self.chains:
            lines.append(str(c))
        lines.append("overall: " + ("pass" if self.passed else "FAIL"))
        return "\n".join(lines)


def run_suite(
    providers: Sequence[PlausibilityProvider],
    *,
    seed: int = 0,
    cases: int = 100,
    params: GenParams = GenParams(),
    requirements: Sequence[str] = REQUIREMENTS,
    chain_n: int = 4,
    max_witnesses: int = 3,
) -> SuiteReport:
    """Check each provider on ``cases`` instances per requirement plus the chain."""
    rows = []
    instances = {
        which: [generate_instance(seed + k, which, params) for k in range(cases)]
        for which in requirements
    }
    for p in providers:
        for which in requirements:
            row = SuiteRow(which, p.name)
            for inst in instances[which]:
                v = check_requirement(p, inst)
                if v.status == "pass":
                    row.passed += 1
                elif v.status == "untestable":
                    row.untestable += 1
                else:
                    row.failed += 1
                    if len(row.witnesses) < max_witnesses:
                        row.witnesses.append(v)
            rows.append(row)
    chains = [r4_witness_chain(p, chain_n) for p in providers] if chain_n else []
    return SuiteReport(seed, cases, rows, chains)

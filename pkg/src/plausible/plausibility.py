"""The counting plausibility function and the laws it obeys."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .formula import And, Formula, Not, Symbol, disjoin, exactly_one, symbols
from .semantics import count_models, entails

__all__ = [
    "Plausibility", "plausibility", "plausibility_detail", "upsilon2",
    "upsilon1", "LawCheck", "check_probability_laws",
]


@dataclass(frozen=True)
class Plausibility:
    """``P(query | premise)`` with the counts it came from.

    ``convention_applied`` is set when the premise is unsatisfiable and the
    value 1 is assigned by convention rather than computed.
    """

    value: Fraction
    favorable: int
    possible: int
    convention_applied: bool


def plausibility_detail(a: Formula, x: Formula, domain=None) -> Plausibility:
    domain = symbols(a, x) if domain is None else frozenset(domain)
    n = count_models(x, domain)
    if n == 0:
        return Plausibility(Fraction(1), 0, 0, True)
    m = count_models(And(a, x), domain)
    return Plausibility(Fraction(m, n), m, n, False)


def plausibility(a: Formula, x: Formula, domain=None) -> Fraction:
    """``#S(a & x) / #S(x)`` over ``S = symbols(a, x)`` (or a given superset).

    An unsatisfiable premise yields 1.
    """
    return plausibility_detail(a, x, domain).value


def _urn_symbols(n: int) -> list[Symbol]:
    return [Symbol(f"_u{i}") for i in range(n)]


def upsilon2(m: int, n: int) -> Fraction:
    """Plausibility of ``s1 | ... | sm`` given ``one(s1, ..., sn)``.

    The pair of formulas is built and counted; the result is checked
    against ``m/n``.
    """
    if n <= 0 or not 0 <= m <= n:
        raise ValueError(f"need n > 0 and 0 <= m <= n, got m={m}, n={n}")
    syms = _urn_symbols(n)
    value = plausibility(disjoin(syms[:m]), exactly_one(syms))
    if value != Fraction(m, n):
        raise AssertionError(f"urn count mismatch: {value} != {m}/{n}")
    return value


def upsilon1(r: Fraction) -> Fraction:
    r = Fraction(r)
    if not 0 <= r <= 1:
        raise ValueError(f"{r} is outside [0, 1]")
    return upsilon2(r.numerator, r.denominator)


@dataclass(frozen=True)
class LawCheck:
    name: str
    holds: bool
    lhs: Fraction | bool
    rhs: Fraction | bool
    applicable: bool = True

    def __str__(self) -> str:
        status = "pass" if self.holds else "FAIL"
        if not self.applicable:
            status += " (vacuous)"
        return f"{self.name}: {status}  lhs={self.lhs} rhs={self.rhs}"


def check_probability_laws(a: Formula, b: Formula, x: Formula) -> list[LawCheck]:
    """Evaluate the five probability laws exactly on ``(a, b, x)``.

    Conditional laws whose hypothesis fails are reported as vacuously
    holding.
    """
    domain = symbols(a, b, x)
    p = lambda q, prem: plausibility(q, prem, domain)  # noqa: E731
    x_sat = count_models(x, domain) > 0
    pa = p(a, x)
    out = [LawCheck("bounds", 0 <= pa <= 1, Fraction(0), pa)]

    x_entails_a = entails(x, a)
    out.append(LawCheck(
        "certain", (pa == 1) or not x_entails_a, pa, Fraction(1), applicable=x_entails_a
    ))

    refutes = x_sat and entails(x, Not(a))
    out.append(LawCheck(
        "impossible", (pa == 0) or not refutes, pa, Fraction(0), applicable=refutes
    ))

    pna = p(Not(a), x)
    out.append(LawCheck(
        "negation", (pna == 1 - pa) or not x_sat, pna, 1 - pa, applicable=x_sat
    ))

    lhs = p(And(a, b), x)
    rhs = p(b, x) * p(a, And(b, x))
    out.append(LawCheck("product", lhs == rhs, lhs, rhs))
    return out

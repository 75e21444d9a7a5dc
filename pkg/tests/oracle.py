"""Brute-force reference implementations used by the tests.

Everything here enumerates all 2^|S| assignments with its own evaluator, so
it shares no code with the counting paths under test.
"""

from fractions import Fraction
from itertools import product

from plausible.formula import And, Const, Iff, Implies, Not, Or, Symbol, symbols


def truth(f, env):
    if isinstance(f, Symbol):
        return env[f.name]
    if isinstance(f, Const):
        return f.value
    if isinstance(f, Not):
        return not truth(f.arg, env)
    if isinstance(f, And):
        return truth(f.left, env) and truth(f.right, env)
    if isinstance(f, Or):
        return truth(f.left, env) or truth(f.right, env)
    if isinstance(f, Implies):
        return (not truth(f.left, env)) or truth(f.right, env)
    if isinstance(f, Iff):
        return truth(f.left, env) == truth(f.right, env)
    raise TypeError(f)


def assignments(names):
    names = sorted(names)
    for bits in product((False, True), repeat=len(names)):
        yield dict(zip(names, bits))


def brute_count(f, names=None):
    names = symbols(f) if names is None else names
    return sum(1 for env in assignments(names) if truth(f, env))


def brute_plausibility(a, x):
    names = symbols(a, x)
    n = m = 0
    for env in assignments(names):
        if truth(x, env):
            n += 1
            m += truth(a, env)
    return Fraction(1) if n == 0 else Fraction(m, n)

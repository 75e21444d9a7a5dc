"""Finite grid approximations of probabilities over continuous regions.

A region lives in ``B^m x [0,1)^n``: ``m`` boolean coordinates and ``n`` unit
interval coordinates.  At resolution ``g`` each interval axis is cut into
``g`` cells ``[(c-1)/g, c/g)`` for ``c = 1..g``; a cell of the whole space is
a tuple of interval indices plus boolean values.  A cell-inclusion policy
decides which cells belong to a region:

``corner``
    the defining predicate is evaluated at the lattice point ``(c1/g, ..., cn/g)``,
    i.e. the far corner of the cell.  This reproduces the sets
    ``K = {(i,j): j/g <= (1-i/g)^2}`` and ``L = {(i,j): j/g <= (i/g)^2}``.
``inner``
    the predicate holds everywhere on the closed cell (interval bounds).
``outer``
    the predicate may hold somewhere on the closed cell.

All arithmetic is exact.  The module also builds the formula encodings whose
plausibility equals the cell ratio, and the latent-variable premise used to
illustrate non-uniform marginals.
"""

from __future__ import annotations

import itertools
import json
import math
from dataclasses import dataclass
from fractions import Fraction
from importlib import resources
from pathlib import Path
from typing import Iterator, Sequence

from .formula import (
    And, Formula, Implies, Not, Symbol, SymbolTable, conjoin, disjoin, exactly_one,
)

__all__ = [
    "Poly", "RegionSpec", "RegionFormatError", "EmptyPremiseRegion",
    "POLICIES", "parse_region_pair", "load_region_pair", "parabola_region_pair",
    "grid_counts", "grid_probability", "iter_cells", "emit_onehot_formulas",
    "emit_dyadic_formulas", "dyadic_symbol_index", "ConvergenceRow",
    "converge", "CarnapModel", "carnap_premise", "ONEHOT_SYMBOL_CAP",
    "DYADIC_SYMBOL_BUDGET", "CARNAP_SYMBOL_BUDGET",
]

POLICIES = ("corner", "inner", "outer")
ONEHOT_SYMBOL_CAP = 16
DYADIC_SYMBOL_BUDGET = 16
CARNAP_SYMBOL_BUDGET = 40


class RegionFormatError(ValueError):
    pass


class EmptyPremiseRegion(ValueError):
    """No cell of the premise region survives at this resolution."""


# --------------------------------------------------------------------------
# polynomials and predicates


@dataclass(frozen=True)
class Poly:
    """Sum of ``coef * x1^e1 * ... * xn^en`` with rational coefficients."""

    terms: tuple[tuple[Fraction, tuple[int, ...]], ...]

    @classmethod
    def from_json(cls, data, n: int) -> "Poly":
        if not isinstance(data, list):
            raise RegionFormatError("polynomial must be a list of [coefficient, exponents]")
        acc: dict[tuple[int, ...], Fraction] = {}
        for term in data:
            if not (isinstance(term, list) and len(term) == 2):
                raise RegionFormatError(f"bad polynomial term {term!r}")
            coef, exps = term
            try:
                c = Fraction(str(coef))
            except (ValueError, ZeroDivisionError):
                raise RegionFormatError(f"bad coefficient {coef!r}") from None
            if (
                not isinstance(exps, list)
                or len(exps) != n
                or not all(isinstance(e, int) and not isinstance(e, bool) and e >= 0 for e in exps)
            ):
                raise RegionFormatError(f"exponent vector must be {n} non-negative ints: {exps!r}")
            key = tuple(exps)
            acc[key] = acc.get(key, Fraction(0)) + c
        return cls(tuple(sorted((c, e) for e, c in acc.items() if c)))

    def __sub__(self, other: "Poly") -> "Poly":
        acc: dict[tuple[int, ...], Fraction] = {}
        for c, e in self.terms:
            acc[e] = acc.get(e, Fraction(0)) + c
        for c, e in other.terms:
            acc[e] = acc.get(e, Fraction(0)) - c
        return Poly(tuple(sorted((c, e) for e, c in acc.items() if c)))

    def __call__(self, point: Sequence[Fraction]) -> Fraction:
        total = Fraction(0)
        for c, e in self.terms:
            total += c * math.prod(Fraction(x) ** k for x, k in zip(point, e))
        return total

    def to_json(self) -> list:
        return [[str(c), list(e)] for c, e in self.terms]


_BOOL_OPS = ("and", "or")


def _check_pred(p, m: int, n: int):
    """Validate a predicate tree and convert polynomials."""
    if not isinstance(p, dict) or "op" not in p:
        raise RegionFormatError(f"predicate must be an object with 'op': {p!r}")
    op = p["op"]
    if op in _BOOL_OPS:
        args = p.get("args")
        if not isinstance(args, list) or not args:
            raise RegionFormatError(f"'{op}' needs a non-empty 'args' list")
        return (op, tuple(_check_pred(a, m, n) for a in args))
    if op == "not":
        return ("not", _check_pred(p.get("arg"), m, n))
    if op in ("lt", "le"):
        left = Poly.from_json(p.get("left"), n)
        right = Poly.from_json(p.get("right"), n)
        # left < right  iff  right - left > 0
        return (op, right - left)
    if op == "bvar":
        idx = p.get("index")
        if not isinstance(idx, int) or isinstance(idx, bool) or not 1 <= idx <= m:
            raise RegionFormatError(f"bvar index must be in 1..{m}, got {idx!r}")
        return ("bvar", idx - 1)
    if op in ("true", "false"):
        return (op,)
    raise RegionFormatError(f"unknown op {op!r}")


def _pred_to_json(t):
    op = t[0]
    if op in _BOOL_OPS:
        return {"op": op, "args": [_pred_to_json(a) for a in t[1]]}
    if op == "not":
        return {"op": "not", "arg": _pred_to_json(t[1])}
    if op in ("lt", "le"):
        return {"op": op, "left": [], "right": t[1].to_json()}
    if op == "bvar":
        return {"op": "bvar", "index": t[1] + 1}
    return {"op": op}


@dataclass(frozen=True)
class RegionSpec:
    """A region of ``B^m x [0,1)^n`` given by a predicate tree.

    Polynomial atoms are stored normalised as ``d > 0`` (``lt``) or
    ``d >= 0`` (``le``) with ``d = right - left``.
    """

    m: int
    n: int
    predicate: tuple

    @classmethod
    def from_json(cls, m: int, n: int, pred) -> "RegionSpec":
        if not (isinstance(m, int) and isinstance(n, int) and m >= 0 and n >= 0):
            raise RegionFormatError("m and n must be non-negative integers")
        if m + n == 0:
            raise RegionFormatError("the space needs at least one coordinate")
        return cls(m, n, _check_pred(pred, m, n))

    def to_json(self):
        return _pred_to_json(self.predicate)

    def contains(self, bools: Sequence[bool], point: Sequence[Fraction]) -> bool:
        """Exact membership of a single point."""

        def go(t) -> bool:
            op = t[0]
            if op == "and":
                return all(go(a) for a in t[1])
            if op == "or":
                return any(go(a) for a in t[1])
            if op == "not":
                return not go(t[1])
            if op == "lt":
                return t[1](point) > 0
            if op == "le":
                return t[1](point) >= 0
            if op == "bvar":
                return bool(bools[t[1]])
            return op == "true"

        return go(self.predicate)


def parse_region_pair(data: dict) -> tuple[RegionSpec, RegionSpec]:
    """``{"m", "n", "query", "premise"}`` into a (query, premise) pair."""
    if not isinstance(data, dict):
        raise RegionFormatError("region file must hold a JSON object")
    missing = {"m", "n", "query", "premise"} - data.keys()
    if missing:
        raise RegionFormatError(f"region file lacks keys {sorted(missing)}")
    m, n = data["m"], data["n"]
    return RegionSpec.from_json(m, n, data["query"]), RegionSpec.from_json(m, n, data["premise"])


def load_region_pair(path: str | Path) -> tuple[RegionSpec, RegionSpec]:
    with open(path, encoding="utf-8") as fh:
        try:
            data = json.load(fh)
        except json.JSONDecodeError as exc:
            raise RegionFormatError(f"{path}: {exc}") from None
    return parse_region_pair(data)


def parabola_region_pair() -> tuple[RegionSpec, RegionSpec]:
    """Query ``y <= (1-x)^2`` given ``y <= x^2`` on the unit square."""
    text = resources.files("plausible.fixtures").joinpath("region_parabolas.json").read_text()
    return parse_region_pair(json.loads(text))


# --------------------------------------------------------------------------
# exact cell classification


class _Compiled:
    """Integer evaluation of a polynomial at scaled cell corners.

    With ``D`` the maximum degree and ``M`` the lcm of coefficient
    denominators, ``g^D * M * d(c/g)`` is an integer sum of
    ``w * prod(c_j^e_j)`` terms, so signs are decided without fractions.
    """

    def __init__(self, poly: Poly, g: int):
        degree = max((sum(e) for _, e in poly.terms), default=0)
        scale = math.lcm(*(c.denominator for c, _ in poly.terms)) if poly.terms else 1
        self.terms = [
            (int(c * scale) * g ** (degree - sum(e)), e) for c, e in poly.terms
        ]

    def at(self, corner: Sequence[int]) -> int:
        total = 0
        for w, e in self.terms:
            for c, k in zip(corner, e):
                if k:
                    w *= c ** k
            total += w
        return total

    def bounds(self, cell: Sequence[int]) -> tuple[int, int]:
        # on [c-1, c] every monomial is non-decreasing in each coordinate
        lo = hi = 0
        for w, e in self.terms:
            a = b = w
            for c, k in zip(cell, e):
                if k:
                    a *= (c - 1) ** k
                    b *= c ** k
            if w >= 0:
                lo += a
                hi += b
            else:
                lo += b
                hi += a
        return lo, hi


def _compile(t, g: int):
    op = t[0]
    if op in _BOOL_OPS or op == "not":
        inner = t[1]
        return (op, tuple(_compile(a, g) for a in inner) if op != "not" else _compile(inner, g))
    if op in ("lt", "le"):
        return (op, _Compiled(t[1], g))
    return t


def _corner(t, bools, cell) -> bool:
    op = t[0]
    if op == "and":
        return all(_corner(a, bools, cell) for a in t[1])
    if op == "or":
        return any(_corner(a, bools, cell) for a in t[1])
    if op == "not":
        return not _corner(t[1], bools, cell)
    if op == "lt":
        return t[1].at(cell) > 0
    if op == "le":
        return t[1].at(cell) >= 0
    if op == "bvar":
        return bools[t[1]]
    return op == "true"


def _kleene(t, bools, cell):
    """True, False, or None when the closed cell straddles the boundary."""
    op = t[0]
    if op == "and":
        out = True
        for a in t[1]:
            v = _kleene(a, bools, cell)
            if v is False:
                return False
            if v is None:
                out = None
        return out
    if op == "or":
        out = False
        for a in t[1]:
            v = _kleene(a, bools, cell)
            if v is True:
                return True
            if v is None:
                out = None
        return out
    if op == "not":
        v = _kleene(t[1], bools, cell)
        return None if v is None else not v
    if op in ("lt", "le"):
        lo, hi = t[1].bounds(cell)
        if op == "lt":
            return True if lo > 0 else (False if hi <= 0 else None)
        return True if lo >= 0 else (False if hi < 0 else None)
    if op == "bvar":
        return bools[t[1]]
    return op == "true"


def _classifier(region: RegionSpec, g: int, policy: str):
    if policy not in POLICIES:
        raise ValueError(f"unknown policy {policy!r}; choose from {', '.join(POLICIES)}")
    tree = _compile(region.predicate, g)
    if policy == "corner":
        return lambda bools, cell: _corner(tree, bools, cell)
    if policy == "inner":
        return lambda bools, cell: _kleene(tree, bools, cell) is True
    return lambda bools, cell: _kleene(tree, bools, cell) is not False


def _check_pair(query: RegionSpec, premise: RegionSpec, g: int):
    if (query.m, query.n) != (premise.m, premise.n):
        raise ValueError("query and premise live in different spaces")
    if not isinstance(g, int) or g < 1:
        raise ValueError(f"resolution must be a positive integer, got {g!r}")


def iter_cells(
    query: RegionSpec, premise: RegionSpec, g: int, policy: str = "corner"
) -> Iterator[tuple[tuple[bool, ...], tuple[int, ...], bool, bool]]:
    """Yield ``(bools, cell, in_query, in_premise)`` for every cell.

    ``cell`` holds 1-based interval indices.  Booleans vary slowest.
    """
    _check_pair(query, premise, g)
    in_q = _classifier(query, g, policy)
    in_p = _classifier(premise, g, policy)
    for bools in itertools.product((False, True), repeat=query.m):
        for cell in itertools.product(range(1, g + 1), repeat=query.n):
            yield bools, cell, in_q(bools, cell), in_p(bools, cell)


def grid_counts(
    query: RegionSpec, premise: RegionSpec, g: int, policy: str = "corner"
) -> tuple[int, int]:
    """``(|K & L|, |L|)``: cells in both regions and cells in the premise."""
    _check_pair(query, premise, g)
    in_q = _classifier(query, g, policy)
    in_p = _classifier(premise, g, policy)
    both = total = 0
    for bools in itertools.product((False, True), repeat=query.m):
        for cell in itertools.product(range(1, g + 1), repeat=query.n):
            if in_p(bools, cell):
                total += 1
                if in_q(bools, cell):
                    both += 1
    return both, total


def grid_probability(
    query: RegionSpec, premise: RegionSpec, g: int, policy: str = "corner"
) -> Fraction:
    """``|K & L| / |L|`` at resolution ``g``, counted cell by cell."""
    both, total = grid_counts(query, premise, g, policy)
    if total == 0:
        raise EmptyPremiseRegion(f"premise region has no cells at resolution {g} ({policy})")
    return Fraction(both, total)


# --------------------------------------------------------------------------
# formula encodings


def _axis_letter(j: int) -> str:
    # a, b, ..., y then aa, ab, ...; z is kept for boolean coordinates
    letters = "abcdefghijklmnopqrstuvwxy"
    out = ""
    j += 1
    while j:
        j, r = divmod(j - 1, len(letters))
        out = letters[r] + out
    return out


def _intern(table: SymbolTable | None, name: str) -> Symbol:
    return table.symbol(name) if table is not None else Symbol(name)


def _bool_literals(zs: Sequence[Symbol], bools: Sequence[bool]) -> list[Formula]:
    return [z if b else Not(z) for z, b in zip(zs, bools)]


def emit_onehot_formulas(
    query: RegionSpec,
    premise: RegionSpec,
    g: int,
    table: SymbolTable | None = None,
    policy: str = "corner",
    cap: int = ONEHOT_SYMBOL_CAP,
) -> tuple[Formula, Formula]:
    """One symbol per cell index per axis, plus exactly-one per axis block.

    Axis ``j`` uses symbols ``a1..ag``, ``b1..bg``, ...; boolean coordinates
    use ``z1..zm``.  Returns ``(A_g, X_g)`` with ``A_g`` the disjunction of
    query cells and ``X_g`` the disjunction of premise cells conjoined with
    the exactly-one constraints.
    """
    _check_pair(query, premise, g)
    total = query.n * g + query.m
    if total > cap:
        raise ValueError(f"one-hot encoding needs {total} symbols, above the cap of {cap}")
    axes = [
        [_intern(table, f"{_axis_letter(j)}{c}") for c in range(1, g + 1)] for j in range(query.n)
    ]
    zs = [_intern(table, f"z{i}") for i in range(1, query.m + 1)]
    a_cells, x_cells = [], []
    for bools, cell, in_q, in_p in iter_cells(query, premise, g, policy):
        if not (in_q or in_p):
            continue
        term = conjoin(_bool_literals(zs, bools) + [axes[j][c - 1] for j, c in enumerate(cell)])
        if in_q:
            a_cells.append(term)
        if in_p:
            x_cells.append(term)
    if not x_cells:
        raise EmptyPremiseRegion(f"premise region has no cells at resolution {g} ({policy})")
    blocks = [exactly_one(block) for block in axes]
    return disjoin(a_cells), conjoin([disjoin(x_cells)] + blocks)


def dyadic_symbol_index(m: int, n: int, i: int, j: int) -> int:
    """Index of the symbol for bit ``i`` (1 = most significant) of axis ``j``."""
    if i < 1 or not 1 <= j <= n:
        raise ValueError(f"need i >= 1 and 1 <= j <= {n}")
    return m + j + (i - 1) * n


def emit_dyadic_formulas(
    query: RegionSpec,
    premise: RegionSpec,
    k: int,
    table: SymbolTable | None = None,
    policy: str = "corner",
    budget: int = DYADIC_SYMBOL_BUDGET,
) -> tuple[Formula, Formula]:
    """Binary-expansion encoding at resolution ``2^k``.

    Symbols are ``s1..s(m+n*k)``: ``s1..sm`` are the boolean coordinates and
    symbol ``s(m + j + (i-1)n)`` is bit ``i`` of axis ``j``, i.e.
    ``floor(2^i x_j) mod 2``.  Every assignment picks exactly one cell, so no
    extra constraint is needed.
    """
    if not isinstance(k, int) or k < 1:
        raise ValueError("k must be a positive integer")
    m, n = query.m, query.n
    total = m + n * k
    if total > budget:
        raise ValueError(f"dyadic encoding needs {total} symbols, above the budget of {budget}")
    g = 1 << k
    syms = [_intern(table, f"s{t}") for t in range(1, total + 1)]
    zs = syms[:m]
    a_cells, x_cells = [], []
    for bools, cell, in_q, in_p in iter_cells(query, premise, g, policy):
        if not (in_q or in_p):
            continue
        lits = _bool_literals(zs, bools)
        for j, c in enumerate(cell, start=1):
            for i in range(1, k + 1):
                s = syms[dyadic_symbol_index(m, n, i, j) - 1]
                lits.append(s if ((c - 1) >> (k - i)) & 1 else Not(s))
        term = conjoin(lits)
        if in_q:
            a_cells.append(term)
        if in_p:
            x_cells.append(term)
    if not x_cells:
        raise EmptyPremiseRegion(f"premise region has no cells at resolution {g} ({policy})")
    return disjoin(a_cells), disjoin(x_cells)


# --------------------------------------------------------------------------
# convergence


@dataclass(frozen=True)
class ConvergenceRow:
    g: int
    value: Fraction | None
    error: Fraction | None = None
    message: str | None = None

    def as_dict(self) -> dict:
        return {
            "g": self.g,
            "value": None if self.value is None else str(self.value),
            "approx": None if self.value is None else round(float(self.value), 6),
            "error": None if self.error is None else str(self.error),
            "message": self.message,
        }


def converge(
    query: RegionSpec,
    premise: RegionSpec,
    schedule: Sequence[int],
    reference: Fraction | None = None,
    policy: str = "corner",
) -> list[ConvergenceRow]:
    """Grid probability at each resolution of ``schedule``.

    A resolution whose premise region is empty yields a row with a message
    instead of a value.
    """
    schedule = list(schedule)
    if any(b <= a for a, b in zip(schedule, schedule[1:])):
        raise ValueError("schedule must be strictly increasing")
    rows = []
    for g in schedule:
        try:
            p = grid_probability(query, premise, g, policy)
        except EmptyPremiseRegion as exc:
            rows.append(ConvergenceRow(g, None, None, str(exc)))
            continue
        err = abs(p - reference) if reference is not None else None
        rows.append(ConvergenceRow(g, p, err))
    return rows


# --------------------------------------------------------------------------
# latent-variable premise


@dataclass(frozen=True)
class CarnapModel:
    """``I`` individuals with ``K`` states each and a latent level ``h0..hK``.

    Symbols: ``x{i}`` (observable), ``h{k}`` (latent level), ``s{i}_{j}``
    (individual ``i`` in state ``j``).
    """

    individuals: int
    granularity: int
    x: tuple[Symbol, ...]
    h: tuple[Symbol, ...]
    s: tuple[tuple[Symbol, ...], ...]
    conjuncts: tuple[Formula, ...]
    premise: Formula

    @property
    def symbol_count(self) -> int:
        return len(self.x) + len(self.h) + sum(len(row) for row in self.s)


def carnap_premise(
    individuals: int,
    granularity: int,
    table: SymbolTable | None = None,
    budget: int = CARNAP_SYMBOL_BUDGET,
) -> CarnapModel:
    """Build the conjunction of ``(K^2 + K + 1) I + 1`` formulas.

    ``one(h0..hK)``, ``one(s{i}_1..s{i}_K)`` for each individual, and
    ``h{k} & s{i}_{j} -> l`` where ``l`` is ``x{i}`` if ``j <= k`` and
    ``!x{i}`` otherwise.
    """
    big_i, big_k = individuals, granularity
    if big_i < 1 or big_k < 1:
        raise ValueError("need at least one individual and granularity >= 1")
    total = big_i + (big_k + 1) + big_i * big_k
    if total > budget:
        raise ValueError(f"model needs {total} symbols, above the budget of {budget}")
    xs = tuple(_intern(table, f"x{i}") for i in range(1, big_i + 1))
    hs = tuple(_intern(table, f"h{k}") for k in range(big_k + 1))
    ss = tuple(
        tuple(_intern(table, f"s{i}_{j}") for j in range(1, big_k + 1))
        for i in range(1, big_i + 1)
    )
    parts: list[Formula] = [exactly_one(hs)]
    parts += [exactly_one(row) for row in ss]
    for i in range(big_i):
        for j in range(1, big_k + 1):
            for k in range(big_k + 1):
                lit = xs[i] if j <= k else Not(xs[i])
                parts.append(Implies(And(hs[k], ss[i][j - 1]), lit))
    return CarnapModel(big_i, big_k, xs, hs, ss, tuple(parts), conjoin(parts))

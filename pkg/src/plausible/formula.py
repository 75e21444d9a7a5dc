"""Propositional formulas: AST, symbol interning, parsing and printing.

Grammar (ASCII)::

    formula := iff
    iff     := imp ("<->" imp)*
    imp     := or ("->" imp)?
    or      := and ("|" and)*
    and     := not ("&" not)*
    not     := "!" not | atom
    atom    := IDENT | "true" | "false" | "(" formula ")"
             | "one(" IDENT ("," IDENT)* ")"

``->`` is right-associative, the other binary connectives associate to the
left.  Identifiers starting with ``_`` are reserved for generated symbols.
"""

from __future__ import annotations

import re
import threading
from dataclasses import dataclass
from itertools import combinations
from typing import Iterable, Mapping, Sequence, Union

__all__ = [
    "Formula", "Symbol", "Not", "And", "Or", "Implies", "Iff", "Const",
    "TRUE", "FALSE", "SymbolTable", "FormulaSyntaxError", "parse",
    "to_text", "symbols", "substitute", "exactly_one", "conjoin", "disjoin",
    "postorder", "children",
]


@dataclass(frozen=True)
class Symbol:
    name: str


@dataclass(frozen=True)
class Not:
    arg: "Formula"


@dataclass(frozen=True)
class And:
    left: "Formula"
    right: "Formula"


@dataclass(frozen=True)
class Or:
    left: "Formula"
    right: "Formula"


@dataclass(frozen=True)
class Implies:
    left: "Formula"
    right: "Formula"


@dataclass(frozen=True)
class Iff:
    left: "Formula"
    right: "Formula"


@dataclass(frozen=True)
class Const:
    value: bool


TRUE = Const(True)
FALSE = Const(False)

Formula = Union[Symbol, Not, And, Or, Implies, Iff, Const]
BINARY = (And, Or, Implies, Iff)

RESERVED_WORDS = frozenset({"true", "false", "one"})
_IDENT_RE = re.compile(r"[A-Za-z_][A-Za-z0-9_]*\Z")


class SymbolTable:
    """Interns symbol names to dense integer ids.

    Interning is guarded by a lock, so concurrent ``intern`` calls for the
    same name always agree on the id.
    """

    def __init__(self, names: Iterable[str] = ()):
        self._names: list[str] = []
        self._ids: dict[str, int] = {}
        self._lock = threading.Lock()
        for name in names:
            self.intern(name)

    def intern(self, name: str) -> int:
        with self._lock:
            idx = self._ids.get(name)
            if idx is None:
                if not _IDENT_RE.match(name):
                    raise ValueError(f"invalid symbol name {name!r}")
                idx = len(self._names)
                self._names.append(name)
                self._ids[name] = idx
            return idx

    def symbol(self, name: str) -> Symbol:
        self.intern(name)
        return Symbol(name)

    def fresh(self, count: int = 1, prefix: str = "_t") -> list[Symbol]:
        """Create ``count`` new symbols named ``prefix0, prefix1, ...``.

        Names already present in the table are skipped.
        """
        out = []
        with self._lock:
            i = 0
            while len(out) < count:
                name = f"{prefix}{i}"
                i += 1
                if name in self._ids:
                    continue
                self._ids[name] = len(self._names)
                self._names.append(name)
                out.append(Symbol(name))
        return out

    def id_of(self, name: str) -> int:
        return self._ids[name]

    def name_of(self, idx: int) -> str:
        return self._names[idx]

    @property
    def names(self) -> tuple[str, ...]:
        return tuple(self._names)

    def __contains__(self, name: object) -> bool:
        return name in self._ids

    def __len__(self) -> int:
        return len(self._names)


# --------------------------------------------------------------------------
# constructors


_CHAIN = 32


def _nest(parts: list[Formula], op) -> Formula:
    # short runs nest to the left like parsed input; long runs are split in
    # halves so tree depth stays logarithmic
    if len(parts) <= _CHAIN:
        out = parts[0]
        for p in parts[1:]:
            out = op(out, p)
        return out
    mid = len(parts) // 2
    return op(_nest(parts[:mid], op), _nest(parts[mid:], op))


def conjoin(parts: Iterable[Formula]) -> Formula:
    """Conjunction of ``parts``; the empty conjunction is ``true``."""
    parts = list(parts)
    return _nest(parts, And) if parts else TRUE


def disjoin(parts: Iterable[Formula]) -> Formula:
    """Disjunction of ``parts``; the empty disjunction is ``false``."""
    parts = list(parts)
    return _nest(parts, Or) if parts else FALSE


def exactly_one(syms: Sequence[Symbol | str]) -> Formula:
    """``(s1 | ... | sn) & !(s1 & s2) & ... & !(s(n-1) & sn)``.

    With a single symbol the (empty) pairwise part is dropped and the
    symbol itself is returned.
    """
    syms = [Symbol(s) if isinstance(s, str) else s for s in syms]
    if not syms:
        raise ValueError("exactly_one needs at least one symbol")
    if len(set(syms)) != len(syms):
        raise ValueError("exactly_one symbols must be distinct")
    some = disjoin(syms)
    if len(syms) == 1:
        return some
    return And(some, conjoin(Not(And(a, b)) for a, b in combinations(syms, 2)))


# --------------------------------------------------------------------------
# traversal


def symbols(*formulas: Formula) -> frozenset[str]:
    """Names of all symbols occurring in any of ``formulas``."""
    out: set[str] = set()
    stack = list(formulas)
    while stack:
        f = stack.pop()
        if isinstance(f, Symbol):
            out.add(f.name)
        elif isinstance(f, Not):
            stack.append(f.arg)
        elif isinstance(f, BINARY):
            stack.append(f.left)
            stack.append(f.right)
    return frozenset(out)


def children(f: Formula) -> tuple:
    if isinstance(f, Not):
        return (f.arg,)
    if isinstance(f, BINARY):
        return (f.left, f.right)
    return ()


def postorder(f: Formula) -> list:
    """Distinct nodes of ``f`` (by identity), each after all of its children.

    Iterative, so arbitrarily deep formulas are fine.
    """
    out = []
    seen: set[int] = set()
    stack = [(f, False)]
    while stack:
        g, expanded = stack.pop()
        if expanded:
            out.append(g)
            continue
        if id(g) in seen:
            continue
        seen.add(id(g))
        stack.append((g, True))
        for h in reversed(children(g)):
            if id(h) not in seen:
                stack.append((h, False))
    return out


def substitute(f: Formula, mapping: Mapping[str, Formula]) -> Formula:
    """Simultaneously replace symbols by formulas.

    Symbols brought in by the replacements are left alone, so
    ``(a & b)[a/!b, b/a]`` is ``!b & a``.
    """
    if not mapping:
        return f
    # keyed on id(): hashing a frozen dataclass walks the whole subtree
    memo: dict[int, Formula] = {}
    for g in postorder(f):
        if isinstance(g, Symbol):
            out = mapping.get(g.name, g)
        elif isinstance(g, Const):
            out = g
        elif isinstance(g, Not):
            a = memo[id(g.arg)]
            out = g if a is g.arg else Not(a)
        else:
            a, b = memo[id(g.left)], memo[id(g.right)]
            out = g if (a is g.left and b is g.right) else type(g)(a, b)
        memo[id(g)] = out
    return memo[id(f)]


def size(f: Formula) -> int:
    n = 0
    stack = [f]
    while stack:
        g = stack.pop()
        n += 1
        if isinstance(g, Not):
            stack.append(g.arg)
        elif isinstance(g, BINARY):
            stack.append(g.left)
            stack.append(g.right)
    return n


# --------------------------------------------------------------------------
# parsing


class FormulaSyntaxError(ValueError):
    """Raised for malformed formula text.

    ``token`` is the 1-based index of the offending token and ``column`` its
    0-based character offset.
    """

    def __init__(self, message: str, token: int, column: int):
        super().__init__(f"{message} (token {token}, column {column})")
        self.token = token
        self.column = column


_TOKEN_RE = re.compile(
    r"\s*(?:(?P<op><->|->|[!&|(),])|(?P<ident>[A-Za-z_][A-Za-z0-9_]*)|(?P<bad>\S))"
)


def _tokenize(text: str) -> list[tuple[str, str, int]]:
    toks = []
    pos = 0
    while True:
        m = _TOKEN_RE.match(text, pos)
        if m is None:
            break
        pos = m.end()
        if m.group("op"):
            toks.append(("op", m.group("op"), m.start("op")))
        elif m.group("ident"):
            toks.append(("ident", m.group("ident"), m.start("ident")))
        else:
            raise FormulaSyntaxError(
                f"unexpected character {m.group('bad')!r}", len(toks) + 1, m.start("bad")
            )
    toks.append(("eof", "", len(text)))
    return toks


class _Parser:
    def __init__(self, text: str, table: SymbolTable | None, allow_reserved: bool):
        self.toks = _tokenize(text)
        self.i = 0
        self.table = table
        self.allow_reserved = allow_reserved

    def peek(self) -> tuple[str, str, int]:
        return self.toks[self.i]

    def error(self, message: str):
        kind, value, col = self.peek()
        what = "end of input" if kind == "eof" else repr(value)
        raise FormulaSyntaxError(f"{message}, got {what}", self.i + 1, col)

    def accept(self, value: str) -> bool:
        kind, v, _ = self.peek()
        if kind == "op" and v == value:
            self.i += 1
            return True
        return False

    def expect(self, value: str):
        if not self.accept(value):
            self.error(f"expected {value!r}")

    def ident(self) -> Symbol:
        kind, name, _ = self.peek()
        if kind != "ident":
            self.error("expected identifier")
        if name in RESERVED_WORDS:
            self.error("reserved word used as symbol")
        if name.startswith("_") and not self.allow_reserved:
            self.error("identifiers starting with '_' are reserved")
        self.i += 1
        if self.table is not None:
            self.table.intern(name)
        return Symbol(name)

    def formula(self) -> Formula:
        left = self.imp()
        while self.accept("<->"):
            left = Iff(left, self.imp())
        return left

    def imp(self) -> Formula:
        left = self.disj()
        if self.accept("->"):
            return Implies(left, self.imp())
        return left

    def disj(self) -> Formula:
        left = self.conj()
        while self.accept("|"):
            left = Or(left, self.conj())
        return left

    def conj(self) -> Formula:
        left = self.neg()
        while self.accept("&"):
            left = And(left, self.neg())
        return left

    def neg(self) -> Formula:
        if self.accept("!"):
            return Not(self.neg())
        return self.atom()

    def atom(self) -> Formula:
        kind, value, _ = self.peek()
        if kind == "op" and value == "(":
            self.i += 1
            f = self.formula()
            self.expect(")")
            return f
        if kind != "ident":
            self.error("expected formula")
        if value == "true":
            self.i += 1
            return TRUE
        if value == "false":
            self.i += 1
            return FALSE
        if value == "one":
            start = self.i
            self.i += 1
            self.expect("(")
            syms = [self.ident()]
            while self.accept(","):
                syms.append(self.ident())
            self.expect(")")
            if len(set(syms)) != len(syms):
                _, _, col = self.toks[start]
                raise FormulaSyntaxError("duplicate symbol in one(...)", start + 1, col)
            return exactly_one(syms)
        return self.ident()


def parse(text: str, table: SymbolTable | None = None, *, allow_reserved: bool = False) -> Formula:
    """Parse ``text`` into a formula, interning new names into ``table``."""
    p = _Parser(text, table, allow_reserved)
    f = p.formula()
    if p.peek()[0] != "eof":
        p.error("unexpected trailing input")
    return f


# --------------------------------------------------------------------------
# printing

_PREC = {Iff: 1, Implies: 2, Or: 3, And: 4}
_OPS = {Iff: "<->", Implies: "->", Or: "|", And: "&"}


def _prec(f: Formula) -> int:
    return _PREC.get(type(f), 5)


def to_text(f: Formula) -> str:
    """Render ``f`` with the fewest parentheses that still parse back to ``f``."""
    memo: dict[int, str] = {}
    for g in postorder(f):
        if isinstance(g, Symbol):
            out = g.name
        elif isinstance(g, Const):
            out = "true" if g.value else "false"
        elif isinstance(g, Not):
            inner = memo[id(g.arg)]
            out = "!" + (f"({inner})" if _prec(g.arg) < 5 else inner)
        else:
            p = _PREC[type(g)]
            left, right = memo[id(g.left)], memo[id(g.right)]
            # -> is right-associative; the others associate to the left
            if isinstance(g, Implies):
                wrap_left = _prec(g.left) <= p
                wrap_right = _prec(g.right) < p
            else:
                wrap_left = _prec(g.left) < p
                wrap_right = _prec(g.right) <= p
            if wrap_left:
                left = f"({left})"
            if wrap_right:
                right = f"({right})"
            out = f"{left} {_OPS[type(g)]} {right}"
        memo[id(g)] = out
    return memo[id(f)]


for _cls in (Symbol, Not, And, Or, Implies, Iff, Const):
    _cls.__str__ = to_text

"""Exact model counting.

Small symbol sets are counted by evaluating the formula on bit-parallel truth
tables (one Python int per node, one bit per assignment).  Larger ones go
through a count-preserving CNF translation and a splitting search with unit
propagation, connected-component decomposition and a component cache.

Every auxiliary CNF variable is *defined* by an equivalence over input
symbols, so each model of the input formula extends to exactly one CNF
model; counting CNF models therefore counts formula models.
"""

from __future__ import annotations

import sys
from functools import lru_cache
from typing import Sequence

from .formula import (
    And, Const, Formula, Iff, Implies, Not, Or, Symbol, children, conjoin, postorder,
    substitute, symbols,
)

DEFAULT_ENUM_THRESHOLD = 20
# components at or below this many variables are finished by truth table
_LEAF_VARS = 12
# cliques of pairwise-exclusion clauses at least this large are re-encoded
_AMO_MIN = 6


# --------------------------------------------------------------------------
# constant folding


def fold(f: Formula) -> Formula:
    """Remove ``true``/``false`` nodes; the result is a Const or constant-free."""
    memo: dict[int, Formula] = {}
    for g in postorder(f):
        if isinstance(g, (Symbol, Const)):
            out = g
        elif isinstance(g, Not):
            a = memo[id(g.arg)]
            out = Const(not a.value) if isinstance(a, Const) else (g if a is g.arg else Not(a))
        else:
            out = _fold_binary(g, memo[id(g.left)], memo[id(g.right)])
        memo[id(g)] = out
    return memo[id(f)]


def _fold_binary(g, a, b):
    ca, cb = isinstance(a, Const), isinstance(b, Const)
    if isinstance(g, And):
        if (ca and not a.value) or (cb and not b.value):
            return Const(False)
        if ca:
            return b
        if cb:
            return a
    elif isinstance(g, Or):
        if (ca and a.value) or (cb and b.value):
            return Const(True)
        if ca:
            return b
        if cb:
            return a
    elif isinstance(g, Implies):
        if (ca and not a.value) or (cb and b.value):
            return Const(True)
        if ca:
            return b
        if cb:
            return Not(a)
    else:  # Iff
        if ca and cb:
            return Const(a.value == b.value)
        if ca:
            return b if a.value else Not(b)
        if cb:
            return a if b.value else Not(a)
    if a is g.left and b is g.right:
        return g
    return type(g)(a, b)


def _operands(g, cls) -> list:
    """Flatten a run of ``cls`` nodes without recursing along the spine."""
    out, stack = [], [g]
    while stack:
        h = stack.pop()
        if isinstance(h, cls):
            stack.append(h.right)
            stack.append(h.left)
        else:
            out.append(h)
    return out


# --------------------------------------------------------------------------
# truth tables


@lru_cache(maxsize=64)
def _columns(n: int) -> tuple[int, ...]:
    """Bit ``i`` of column ``k`` is bit ``k`` of the assignment index ``i``."""
    size = 1 << n
    cols = []
    for k in range(n):
        half = 1 << k
        col = ((1 << half) - 1) << half
        width = half << 1
        while width < size:  # repeat the pattern by doubling
            col |= col << width
            width <<= 1
        cols.append(col)
    return tuple(cols)


def truth_table(f: Formula, order: Sequence[str]) -> int:
    """Truth table of a constant-free or constant ``f`` over ``order``.

    Bit ``i`` is set iff the assignment giving ``order[k]`` the value of bit
    ``k`` of ``i`` satisfies ``f``.
    """
    n = len(order)
    full = (1 << (1 << n)) - 1
    cols = dict(zip(order, _columns(n)))
    nodes = postorder(f)
    # tables are dropped once their last parent has used them
    uses: dict[int, int] = {}
    for g in nodes:
        for h in children(g):
            uses[id(h)] = uses.get(id(h), 0) + 1
    val: dict[int, int] = {}

    def take(h) -> int:
        k = id(h)
        v = val[k]
        uses[k] -= 1
        if not uses[k]:
            del val[k]
        return v

    for g in nodes:
        if isinstance(g, Symbol):
            out = cols[g.name]
        elif isinstance(g, Const):
            out = full if g.value else 0
        elif isinstance(g, Not):
            out = full ^ take(g.arg)
        else:
            a, b = take(g.left), take(g.right)
            if isinstance(g, And):
                out = a & b
            elif isinstance(g, Or):
                out = a | b
            elif isinstance(g, Implies):
                out = (full ^ a) | b
            else:
                out = full ^ (a ^ b)
        val[id(g)] = out
    return val[id(f)]


# --------------------------------------------------------------------------
# CNF


def _is_literal(g) -> bool:
    return isinstance(g, Symbol) or (isinstance(g, Not) and isinstance(g.arg, Symbol))


class Cnf:
    """Clauses over positive ints; input symbols come first (1..len(names))."""

    def __init__(self, names: Sequence[str]):
        self.var = {name: i + 1 for i, name in enumerate(names)}
        self.n_inputs = len(names)
        self.n_vars = len(names)
        self.clauses: list[tuple[int, ...]] = []
        self._exclusions: list[tuple[int, int]] = []
        self._gates: dict[int, int] = {}
        self._keep: list = []  # pin gated nodes so their ids stay unique

    def new_var(self) -> int:
        self.n_vars += 1
        return self.n_vars

    def add(self, lits) -> None:
        lits = tuple(sorted(set(lits), key=abs))
        for i in range(len(lits) - 1):
            if lits[i] == -lits[i + 1]:
                return  # tautology
        if len(lits) == 2 and lits[0] < 0 and lits[1] < 0:
            self._exclusions.append((-lits[0], -lits[1]))
        else:
            self.clauses.append(lits)

    # Tseitin literal for an arbitrary subformula
    def lit(self, g) -> int:
        negate = False
        while isinstance(g, Not):
            g, negate = g.arg, not negate
        if isinstance(g, Symbol):
            v = self.var[g.name]
        else:
            v = self._gates.get(id(g))
            if v is None:
                self._build(g)
                v = self._gates[id(g)]
        return -v if negate else v

    def _build(self, root) -> None:
        # gate children before parents so _gate never recurses
        stack = [(root, False)]
        while stack:
            g, ready = stack.pop()
            if id(g) in self._gates:
                continue
            if ready:
                v = self.new_var()
                self._gate(v, g)
                self._gates[id(g)] = v
                self._keep.append(g)
                continue
            stack.append((g, True))
            for h in self._inputs(g):
                while isinstance(h, Not):
                    h = h.arg
                if not isinstance(h, Symbol) and id(h) not in self._gates:
                    stack.append((h, False))

    def _inputs(self, g) -> list:
        """Subformulas whose literals ``_gate(o, g)`` asks for."""
        if isinstance(g, And):
            return _operands(g, And)
        if isinstance(g, (Or, Implies)):
            return [h for h, _ in self._disjunct_leaves(g, True)]
        return [g.left, g.right]

    def _gate(self, o: int, g) -> None:
        """Clauses for ``o <-> g`` where ``o`` is a literal and ``g`` compound."""
        if isinstance(g, And):
            ls = [self.lit(h) for h in _operands(g, And)]
            for l in ls:
                self.add((-o, l))
            self.add([o] + [-l for l in ls])
        elif isinstance(g, (Or, Implies)):
            ls = self._disjuncts(g, True)
            for l in ls:
                self.add((o, -l))
            self.add([-o] + ls)
        elif isinstance(g, Iff):
            a, b = self.lit(g.left), self.lit(g.right)
            self.add((-o, -a, b))
            self.add((-o, a, -b))
            self.add((o, a, b))
            self.add((o, -a, -b))
        else:
            raise TypeError(f"unexpected node {g!r}")

    @staticmethod
    def _disjunct_leaves(g, positive: bool) -> list:
        out = []
        stack = [(g, positive)]
        while stack:
            h, pos = stack.pop()
            if pos and isinstance(h, Or):
                stack.append((h.right, True))
                stack.append((h.left, True))
            elif pos and isinstance(h, Implies):
                stack.append((h.right, True))
                stack.append((h.left, False))
            elif not pos and isinstance(h, And):
                stack.append((h.right, False))
                stack.append((h.left, False))
            elif isinstance(h, Not):
                stack.append((h.arg, not pos))
            else:
                out.append((h, pos))
        return out

    def _disjuncts(self, g, positive: bool) -> list[int]:
        out = []
        for h, pos in self._disjunct_leaves(g, positive):
            l = self.lit(h)
            out.append(l if pos else -l)
        return out

    def assert_formula(self, f) -> None:
        stack = [(f, True)]
        while stack:
            g, pos = stack.pop()
            if isinstance(g, Not):
                stack.append((g.arg, not pos))
            elif pos and isinstance(g, And):
                stack.append((g.right, True))
                stack.append((g.left, True))
            elif not pos and isinstance(g, Or):
                stack.append((g.right, False))
                stack.append((g.left, False))
            elif not pos and isinstance(g, Implies):
                stack.append((g.right, False))
                stack.append((g.left, True))
            elif isinstance(g, Iff):
                self._assert_iff(g, pos)
            elif isinstance(g, Symbol):
                l = self.lit(g)
                self.add((l if pos else -l,))
            else:
                self.add(self._disjuncts(g, pos))

    def _assert_iff(self, g, pos: bool) -> None:
        left, right = g.left, g.right
        if _is_literal(right) and not _is_literal(left):
            left, right = right, left
        if _is_literal(left) and not _is_literal(right):
            while isinstance(right, Not):
                right, pos = right.arg, not pos
        if _is_literal(left) and not _is_literal(right) and id(right) not in self._gates:
            # the literal itself serves as the gate output: no auxiliary needed
            o = self.lit(left)
            self._gate(o if pos else -o, right)
            return
        a, b = self.lit(left), self.lit(right)
        if not pos:
            b = -b
        self.add((-a, b))
        self.add((a, -b))

    def finish(self) -> list[tuple[int, ...]]:
        """Emit the pairwise exclusions, compacting large cliques."""
        adj: dict[int, set[int]] = {}
        order: dict[int, int] = {}
        for a, b in self._exclusions:
            for x in (a, b):
                if x not in order:
                    order[x] = len(order)
            adj.setdefault(a, set()).add(b)
            adj.setdefault(b, set()).add(a)
        for v in sorted(order, key=order.__getitem__):
            if len(adj.get(v, ())) + 1 < _AMO_MIN:
                continue
            clique = [v]
            for u in sorted(adj[v], key=order.__getitem__):
                if all(u in adj[w] for w in clique[1:]):
                    clique.append(u)
            if len(clique) < _AMO_MIN:
                continue
            self._at_most_one(clique)
            for i, a in enumerate(clique):
                for b in clique[i + 1:]:
                    adj[a].discard(b)
                    adj[b].discard(a)
        for a in sorted(adj, key=order.__getitem__):
            for b in sorted(adj[a], key=order.__getitem__):
                if order[a] < order[b]:
                    self.clauses.append(tuple(sorted((-a, -b), key=abs)))
        return self.clauses

    def _at_most_one(self, xs: list[int]) -> None:
        # prefix[i] <-> xs[0] | ... | xs[i]; forbid prefix[i-1] & xs[i]
        prev = xs[0]
        for i in range(1, len(xs)):
            x = xs[i]
            self.clauses.append(tuple(sorted((-prev, -x), key=abs)))
            if i == len(xs) - 1:
                break
            r = self.new_var()
            self.clauses.append((prev, x, -r))
            self.clauses.append((-prev, r))
            self.clauses.append((-x, r))
            prev = r


# --------------------------------------------------------------------------
# splitting search


def _cnf_table_count(clauses, variables) -> int:
    order = sorted(variables)
    cols = dict(zip(order, _columns(len(order))))
    full = (1 << (1 << len(order))) - 1
    acc = full
    for c in clauses:
        cl = 0
        for l in c:
            cl |= cols[l] if l > 0 else full ^ cols[-l]
        acc &= cl
        if not acc:
            return 0
    return acc.bit_count()


def _propagate(clauses, units):
    """Assign ``units`` and propagate. Returns (residual, n_assigned) or None."""
    occ: dict[int, list[int]] = {}
    for i, c in enumerate(clauses):
        for l in c:
            occ.setdefault(l, []).append(i)
    remaining = [len(c) for c in clauses]
    sat = [False] * len(clauses)
    value: dict[int, bool] = {}
    queue = list(units)
    while queue:
        l = queue.pop()
        v = abs(l)
        if v in value:
            if value[v] != (l > 0):
                return None
            continue
        value[v] = l > 0
        for i in occ.get(l, ()):
            sat[i] = True
        for i in occ.get(-l, ()):
            if sat[i]:
                continue
            remaining[i] -= 1
            if remaining[i] == 0:
                return None
            if remaining[i] == 1:
                for u in clauses[i]:
                    if abs(u) not in value:
                        queue.append(u)
                        break
                else:
                    return None
    residual = []
    for i, c in enumerate(clauses):
        if sat[i]:
            continue
        if remaining[i] < len(c):
            c = tuple(l for l in c if abs(l) not in value)
        residual.append(c)
    return residual, len(value)


def _merge_equivalent(clauses):
    """Substitute away variables fixed equal (or opposite) to another one.

    ``(a | b) & (-a | -b)`` makes ``a`` the negation of ``b``.  Each merged
    variable is determined by its representative, so the model count over the
    remaining variables is unchanged.  Returns (clauses, n_merged) or None on
    a contradiction.
    """
    binaries = {c for c in clauses if len(c) == 2}
    parent: dict[int, tuple[int, bool]] = {}

    def find(v):
        flip = False
        path = []
        while v in parent:
            path.append(v)
            v, f = parent[v]
            flip ^= f
        return v, flip

    merged = 0
    for a, b in binaries:
        if a < 0 and b < 0:
            continue
        if tuple(sorted((-a, -b), key=abs)) not in binaries:
            continue
        # a == -b
        ra, fa = find(abs(a))
        rb, fb = find(abs(b))
        fa ^= a < 0
        fb ^= b > 0
        if ra == rb:
            if fa != fb:
                return None
            continue
        if rb < ra:
            ra, rb = rb, ra
        parent[rb] = (ra, fa ^ fb)
        merged += 1
    if not merged:
        return clauses, 0

    def rep(l):
        r, f = find(abs(l))
        r = -r if f else r
        return r if l > 0 else -r

    out = set()
    for c in clauses:
        lits = set()
        for l in c:
            lits.add(rep(l))
        if any(-l in lits for l in lits):
            continue
        out.add(tuple(sorted(lits, key=abs)))
    return sorted(out), merged


def _simplify(clauses, units):
    """Propagate ``units`` and merge equivalent variables to a fixpoint.

    Returns (clauses, n_eliminated) or None if a conflict arises.
    """
    gone = 0
    while True:
        if units:
            res = _propagate(clauses, units)
            if res is None:
                return None
            clauses, k = res
            gone += k
        res = _merge_equivalent(clauses)
        if res is None:
            return None
        clauses, k = res
        if not k:
            return clauses, gone
        gone += k
        units = [c[0] for c in clauses if len(c) == 1]


def _components(clauses):
    parent: dict[int, int] = {}

    def find(x):
        root = x
        while parent[root] != root:
            root = parent[root]
        while parent[x] != root:
            parent[x], x = root, parent[x]
        return root

    for c in clauses:
        first = abs(c[0])
        parent.setdefault(first, first)
        ra = find(first)
        for l in c[1:]:
            v = abs(l)
            parent.setdefault(v, v)
            rb = find(v)
            if rb != ra:
                parent[rb] = ra
    groups: dict[int, list] = {}
    for c in clauses:
        groups.setdefault(find(abs(c[0])), []).append(c)
    return list(groups.values())


def _variables(clauses) -> set[int]:
    return {abs(l) for c in clauses for l in c}


class _Search:
    def __init__(self):
        self.cache: dict[tuple, int] = {}

    def component(self, clauses) -> int:
        """Models of ``clauses`` over exactly the variables they mention."""
        key = tuple(sorted(clauses))
        hit = self.cache.get(key)
        if hit is not None:
            return hit
        variables = _variables(clauses)
        if len(variables) <= _LEAF_VARS:
            result = _cnf_table_count(clauses, variables)
        else:
            # most binary-clause occurrences, then most occurrences overall
            freq: dict[int, int] = {}
            bfreq: dict[int, int] = {}
            for c in clauses:
                binary = len(c) == 2
                for l in c:
                    v = abs(l)
                    freq[v] = freq.get(v, 0) + 1
                    if binary:
                        bfreq[v] = bfreq.get(v, 0) + 1
            pivot = min(freq, key=lambda v: (-bfreq.get(v, 0), -freq[v], v))
            result = self.branch(clauses, len(variables), pivot) + self.branch(
                clauses, len(variables), -pivot
            )
        self.cache[key] = result
        return result

    def branch(self, clauses, n_vars: int, lit: int) -> int:
        res = _simplify(clauses, [lit])
        if res is None:
            return 0
        residual, n_gone = res
        return self.residual(residual, n_vars - n_gone)

    def residual(self, clauses, n_unassigned: int) -> int:
        free = n_unassigned - len(_variables(clauses))
        total = 1 << free
        for comp in _components(clauses):
            total *= self.component(comp)
            if not total:
                return 0
        return total


def count_cnf(clauses, n_vars: int) -> int:
    """Models of ``clauses`` over variables ``1..n_vars``."""
    if any(len(c) == 0 for c in clauses):
        return 0
    units = [c[0] for c in clauses if len(c) == 1]
    res = _simplify(clauses, units)
    if res is None:
        return 0
    clauses, n_gone = res
    sys.setrecursionlimit(max(sys.getrecursionlimit(), 4 * n_vars + 1000))
    return _Search().residual(clauses, n_vars - n_gone)


def eliminate_definitions(f: Formula) -> tuple[Formula, frozenset[str]]:
    """Remove top-level conjuncts ``t <-> g`` with ``t`` not occurring in ``g``.

    Such a conjunct fixes ``t`` as a function of the other symbols, so
    substituting ``g`` for ``t`` elsewhere and dropping ``t`` from the domain
    leaves the model count unchanged.  Returns the reduced formula and the
    eliminated names.
    """
    gone: set[str] = set()
    while True:
        parts = _operands(f, And) if isinstance(f, And) else [f]
        defined: dict[str, Formula] = {}
        used: set[str] = set()  # symbols of accepted right-hand sides
        rest = []
        for p in parts:
            if isinstance(p, Iff):
                for t, g in ((p.left, p.right), (p.right, p.left)):
                    if isinstance(t, Symbol) and t.name not in defined and t.name not in used:
                        names = symbols(g)
                        if t.name not in names and not names & defined.keys():
                            defined[t.name] = g
                            used |= names
                            break
                else:
                    rest.append(p)
                continue
            rest.append(p)
        if not defined:
            return f, frozenset(gone)
        gone |= defined.keys()
        f = fold(substitute(conjoin(rest), defined))
        if isinstance(f, Const):
            return f, frozenset(gone)


def count(f: Formula, domain: Sequence[str], threshold: int = DEFAULT_ENUM_THRESHOLD) -> int:
    """Number of assignments on ``domain`` satisfying ``f``."""
    g, gone = eliminate_definitions(fold(f))
    domain = [d for d in domain if d not in gone]
    if isinstance(g, Const):
        return (1 << len(domain)) if g.value else 0
    used = sorted(symbols(g))
    extra = len(domain) - len(used)
    if len(used) <= threshold:
        return truth_table(g, used).bit_count() << extra
    cnf = Cnf(used)
    cnf.assert_formula(g)
    clauses = cnf.finish()
    return count_cnf(clauses, cnf.n_vars) << extra

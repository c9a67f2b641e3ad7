"""Finite marked posets: validation, saturated-chain enumeration, and the
regularizing transformations (contraction of constant intervals, removal of
redundant covering relations), plus rank functions and star elements.

Element identifiers are opaque strings; marking values are exact rationals.
All set-valued results come back in lexicographic element order.  Instances
are immutable; the documented desk-scale limit is |P| <= 12.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property

from .rationals import rat


class PosetError(ValueError):
    """Raised when an operation's precondition on the marked poset fails."""


@dataclass(frozen=True)
class SaturatedChain:
    """A saturated chain p_0 < p_1 < ... < p_r < target with p_0 marked and
    the p_i (i >= 1) unmarked; ``below`` is (p_0, ..., p_r)."""

    below: tuple[str, ...]
    target: str

    def __str__(self) -> str:
        return "<".join(self.below + (self.target,))


@dataclass(frozen=True)
class MarkedPoset:
    elements: tuple[str, ...]
    covers: frozenset[tuple[str, str]]
    marking: dict[str, Fraction]

    def __post_init__(self):
        object.__setattr__(self, "elements", tuple(self.elements))
        object.__setattr__(self, "covers", frozenset(tuple(c) for c in self.covers))
        object.__setattr__(self, "marking", {k: rat(v) for k, v in self.marking.items()})
        known = set(self.elements)
        if len(known) != len(self.elements):
            raise PosetError("duplicate element identifiers")
        for p, q in self.covers:
            if p not in known or q not in known:
                raise PosetError(f"cover ({p}, {q}) references unknown element")
            if p == q:
                raise PosetError(f"self-cover on {p}")
        for a in self.marking:
            if a not in known:
                raise PosetError(f"marking on unknown element {a}")

    # -- basic structure ---------------------------------------------------

    @cached_property
    def marked(self) -> frozenset[str]:
        return frozenset(self.marking)

    @cached_property
    def unmarked(self) -> tuple[str, ...]:
        return tuple(e for e in self.elements if e not in self.marking)

    @cached_property
    def _lower(self) -> dict[str, tuple[str, ...]]:
        d: dict[str, list[str]] = {e: [] for e in self.elements}
        for p, q in self.covers:
            d[q].append(p)
        return {e: tuple(sorted(v)) for e, v in d.items()}

    @cached_property
    def _upper(self) -> dict[str, tuple[str, ...]]:
        d: dict[str, list[str]] = {e: [] for e in self.elements}
        for p, q in self.covers:
            d[p].append(q)
        return {e: tuple(sorted(v)) for e, v in d.items()}

    def lower_covers(self, p: str) -> tuple[str, ...]:
        return self._lower[p]

    def upper_covers(self, p: str) -> tuple[str, ...]:
        return self._upper[p]

    @cached_property
    def is_acyclic(self) -> bool:
        indeg = {e: len(self._lower[e]) for e in self.elements}
        queue = [e for e in self.elements if indeg[e] == 0]
        seen = 0
        while queue:
            e = queue.pop()
            seen += 1
            for q in self._upper[e]:
                indeg[q] -= 1
                if indeg[q] == 0:
                    queue.append(q)
        return seen == len(self.elements)

    @cached_property
    def _below(self) -> dict[str, frozenset[str]]:
        """below[p] = all q with q < p (strictly).  Requires acyclicity."""
        if not self.is_acyclic:
            raise PosetError("cover relation has a cycle")
        below: dict[str, frozenset[str]] = {}
        for e in self.linear_extension():
            acc: set[str] = set()
            for q in self._lower[e]:
                acc.add(q)
                acc |= below[q]
            below[e] = frozenset(acc)
        return below

    def linear_extension(self) -> tuple[str, ...]:
        """Deterministic linear extension (Kahn's algorithm, lex tie-break)."""
        if not self.is_acyclic:
            raise PosetError("cover relation has a cycle")
        indeg = {e: len(self._lower[e]) for e in self.elements}
        import heapq

        heap = [e for e in self.elements if indeg[e] == 0]
        heapq.heapify(heap)
        out = []
        while heap:
            e = heapq.heappop(heap)
            out.append(e)
            for q in self._upper[e]:
                indeg[q] -= 1
                if indeg[q] == 0:
                    heapq.heappush(heap, q)
        return tuple(out)

    def lt(self, a: str, b: str) -> bool:
        return a in self._below[b]

    def leq(self, a: str, b: str) -> bool:
        return a == b or a in self._below[b]

    def minimal_elements(self) -> tuple[str, ...]:
        return tuple(sorted(e for e in self.elements if not self._lower[e]))

    def maximal_elements(self) -> tuple[str, ...]:
        return tuple(sorted(e for e in self.elements if not self._upper[e]))

    @cached_property
    def strictly_marked(self) -> bool:
        """No two comparable marked elements share a marking value."""
        ms = sorted(self.marking)
        for a in ms:
            for b in ms:
                if a != b and self.lt(a, b) and self.marking[a] == self.marking[b]:
                    return False
        return True

    @cached_property
    def all_extremal_marked(self) -> bool:
        """True iff every O_t(P, lambda) is bounded."""
        ext = set(self.minimal_elements()) | set(self.maximal_elements())
        return ext <= self.marked

    def lam(self, a: str) -> Fraction:
        return self.marking[a]


def validate(poset: MarkedPoset) -> list[str]:
    """Check the marked-poset invariants; returns violation messages (empty = valid)."""
    report: list[str] = []
    if not poset.is_acyclic:
        report.append("cycle in covering relations")
        return report
    # covers must have empty open intervals
    for p, q in sorted(poset.covers):
        for w in poset.elements:
            if w != p and w != q and poset.lt(p, w) and poset.lt(w, q):
                report.append(f"non-covering pair ({p}, {q}): {w} lies strictly between")
    for a in sorted(poset.marking):
        for b in sorted(poset.marking):
            if a != b and poset.lt(a, b) and poset.marking[a] > poset.marking[b]:
                report.append(f"marking not order-preserving: {a} < {b} but "
                              f"lambda({a}) > lambda({b})")
    for e in poset.minimal_elements():
        if e not in poset.marked:
            report.append(f"unmarked minimal element {e}")
    return report


def require_valid(poset: MarkedPoset) -> MarkedPoset:
    problems = validate(poset)
    if problems:
        raise PosetError("; ".join(problems))
    return poset


# -- saturated chains ------------------------------------------------------

def _unmarked_tails(poset: MarkedPoset) -> dict[str, tuple[tuple[str, ...], ...]]:
    """For each element e, the saturated chains p_0 < ... < p_r = e with p_0
    marked and all interior elements unmarked (markeds get the trivial chain)."""
    memo: dict[str, tuple[tuple[str, ...], ...]] = {}

    def tails(e: str) -> tuple[tuple[str, ...], ...]:
        if e in memo:
            return memo[e]
        if e in poset.marked:
            memo[e] = ((e,),)
            return memo[e]
        acc = []
        for c in poset.lower_covers(e):
            for t in tails(c):
                acc.append(t + (e,))
        memo[e] = tuple(sorted(acc))
        return memo[e]

    for e in poset.elements:
        tails(e)
    return memo


def saturated_chains_to(poset: MarkedPoset, p: str) -> list[SaturatedChain]:
    """All chains p_0 < p_1 < ... < p_r < p with p_0 marked and interior
    unmarked, in lexicographic order.  These index the defining inequalities."""
    tails = _unmarked_tails(poset)
    chains = []
    for q in poset.lower_covers(p):
        for t in tails[q]:
            chains.append(SaturatedChain(below=t, target=p))
    chains.sort(key=lambda c: c.below)
    return chains


def chains_through(poset: MarkedPoset, via: frozenset[str] | set[str],
                   stops: frozenset[str] | set[str]) -> list[tuple[str, tuple[str, ...], str]]:
    """Saturated chains a < c_1 < ... < c_k < b (k >= 0) with a, b in `stops`
    and all interior c_i in `via`.  Used for the chain-order description."""
    via = frozenset(via)
    stops = frozenset(stops)
    memo: dict[str, list[tuple[str, tuple[str, ...]]]] = {}

    def down(e: str) -> list[tuple[str, tuple[str, ...]]]:
        # chains a < c_1 < ... < c_k covering into e, interior in via, a in stops
        if e in memo:
            return memo[e]
        acc = []
        for c in poset.lower_covers(e):
            if c in stops:
                acc.append((c, ()))
            elif c in via:
                for a, mids in down(c):
                    acc.append((a, mids + (c,)))
        memo[e] = acc
        return acc

    out = []
    for b in sorted(stops):
        for a, mids in down(b):
            out.append((a, mids, b))
    out.sort()
    return out


# -- star elements ---------------------------------------------------------

def star_elements(poset: MarkedPoset, C, O) -> tuple[str, ...]:
    """Chain-order star elements of O: q with >= 2 saturated chains through C
    reaching q from P* or O both from below and from above."""
    C = frozenset(C)
    O = frozenset(O)
    unmarked = frozenset(poset.unmarked)
    if C | O != unmarked or C & O:
        raise PosetError("C, O must partition the unmarked elements")
    down, up = chain_counts(poset, C, O)
    return tuple(sorted(q for q in O if down[q] >= 2 and up[q] >= 2))


def chain_counts(poset: MarkedPoset, C, O) -> tuple[dict[str, int], dict[str, int]]:
    """For each q in O: number of saturated chains s < c_1 < ... < c_k < q
    (downward) and q < c_1 < ... < c_k < s (upward), interior in C, s in P*|O."""
    C = frozenset(C)
    stops = poset.marked | frozenset(O)
    down: dict[str, int] = {}
    up: dict[str, int] = {}

    def count(e: str, covers, memo) -> int:
        if e in memo:
            return memo[e]
        n = 0
        for c in covers(e):
            if c in stops:
                n += 1
            elif c in C:
                n += count(c, covers, memo)
        memo[e] = n
        return n

    dmemo: dict[str, int] = {}
    umemo: dict[str, int] = {}
    for q in O:
        down[q] = count(q, poset.lower_covers, dmemo)
        up[q] = count(q, poset.upper_covers, umemo)
    return down, up


# -- constant intervals and contraction ------------------------------------

def constant_intervals(poset: MarkedPoset) -> list[tuple[str, ...]]:
    """Maximal unions of non-trivial constant intervals, as sorted blocks."""
    require_valid(poset)
    parent = {e: e for e in poset.elements}

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    def union(x, y):
        parent[find(x)] = find(y)

    for a in poset.marking:
        for b in poset.marking:
            if a != b and poset.lt(a, b) and poset.marking[a] == poset.marking[b]:
                for p in poset.elements:
                    if poset.leq(a, p) and poset.leq(p, b):
                        union(a, p)
    blocks: dict[str, set[str]] = {}
    for e in poset.elements:
        blocks.setdefault(find(e), set()).add(e)
    out = [tuple(sorted(b)) for b in blocks.values() if len(b) >= 2]
    out.sort()
    return out


def contract_constant_intervals(poset: MarkedPoset) -> tuple[MarkedPoset, dict[str, str]]:
    """Quotient by constant intervals; returns the strictly marked quotient and
    the element map.  Block names are the lexicographically smallest member."""
    blocks = constant_intervals(poset)
    elem_map = {e: e for e in poset.elements}
    block_value: dict[str, Fraction] = {}
    for b in blocks:
        name = b[0]
        marked_members = [e for e in b if e in poset.marking]
        block_value[name] = poset.marking[marked_members[0]]
        for e in b:
            elem_map[e] = name

    new_elements = []
    for e in poset.elements:
        img = elem_map[e]
        if img not in new_elements:
            new_elements.append(img)

    # quotient order: B <= B' iff some p in B, q in B' with p <= q
    members: dict[str, list[str]] = {}
    for e in poset.elements:
        members.setdefault(elem_map[e], []).append(e)
    lt: dict[str, set[str]] = {n: set() for n in new_elements}
    for x in new_elements:
        for y in new_elements:
            if x != y and any(poset.lt(p, q)
                              for p in members[x] for q in members[y]):
                lt[x].add(y)
    for x in new_elements:
        for y in lt[x]:
            if x in lt[y]:
                raise PosetError("contraction produced a non-antisymmetric quotient")
    new_covers = set()
    for x in new_elements:
        for y in lt[x]:
            if not any(y in lt[w] for w in lt[x] if w != y):
                new_covers.add((x, y))

    new_marking: dict[str, Fraction] = {}
    for n in new_elements:
        if n in block_value:
            new_marking[n] = block_value[n]
        elif n in poset.marking:
            new_marking[n] = poset.marking[n]
    result = MarkedPoset(tuple(new_elements), frozenset(new_covers), new_marking)
    return result, elem_map


# -- redundant covering relations ------------------------------------------

def _cover_redundant(poset: MarkedPoset, p: str, q: str) -> bool:
    """p < q is redundant iff marked a <= q and p <= b exist with a != b and
    lambda(a) >= lambda(b)."""
    for a in poset.marking:
        if not poset.leq(a, q):
            continue
        for b in poset.marking:
            if a != b and poset.leq(p, b) and poset.marking[a] >= poset.marking[b]:
                return True
    return False


def non_redundant_covers(poset: MarkedPoset) -> frozenset[tuple[str, str]]:
    return frozenset(c for c in poset.covers if not _cover_redundant(poset, c[0], c[1]))


class RedundancyOrderWarning(UserWarning):
    """Removal order mattered: the iterated fixed point differs from the
    one-pass non-redundancy test.  Happens when incomparable marked elements
    share a value and witness each other; any fixed point still describes the
    same polyhedra, and removal is deterministic (lexicographically first)."""


def remove_redundant_covers(poset: MarkedPoset) -> MarkedPoset:
    """Remove redundant covering relations one at a time until regular.

    Removal is re-evaluated after every step (removing a cover can destroy
    the witness of another), taking the lexicographically first redundant
    cover each round.  The result is compared against the one-pass
    non-redundancy test; a difference is surfaced as a warning.
    """
    require_valid(poset)
    if not poset.strictly_marked:
        raise PosetError("poset must be strictly marked before removing covers")
    one_pass = non_redundant_covers(poset)
    cur = poset
    while True:
        redundant = sorted(c for c in cur.covers if _cover_redundant(cur, c[0], c[1]))
        if not redundant:
            break
        cur = MarkedPoset(cur.elements, cur.covers - {redundant[0]}, cur.marking)
    if cur.covers != one_pass:
        import warnings

        warnings.warn(
            "redundant-cover removal was order-sensitive: iterated fixed point "
            f"keeps {sorted(cur.covers - one_pass)} beyond the one-pass set",
            RedundancyOrderWarning, stacklevel=2)
    return cur


def is_regular(poset: MarkedPoset) -> bool:
    return poset.strictly_marked and non_redundant_covers(poset) == poset.covers


def regularize(poset: MarkedPoset) -> tuple[MarkedPoset, dict[str, str]]:
    """Contract constant intervals, then drop redundant covers."""
    contracted, elem_map = contract_constant_intervals(poset)
    return remove_redundant_covers(contracted), elem_map


# -- rank functions ----------------------------------------------------------

def rank_function(poset: MarkedPoset) -> dict[str, int] | None:
    """Rank function with min rank 0 per connected component, or None.

    Requires rk(p) + 1 = rk(q) for covers and lambda strictly increasing
    across ranks of marked elements.
    """
    require_valid(poset)
    rk: dict[str, int] = {}
    comp: dict[str, int] = {}
    neighbors: dict[str, list[tuple[str, int]]] = {e: [] for e in poset.elements}
    for p, q in poset.covers:
        neighbors[p].append((q, +1))
        neighbors[q].append((p, -1))
    cid = 0
    for start in poset.elements:
        if start in rk:
            continue
        rk[start] = 0
        comp[start] = cid
        stack = [start]
        while stack:
            e = stack.pop()
            for other, step in neighbors[e]:
                want = rk[e] + step
                if other in rk:
                    if rk[other] != want:
                        return None
                else:
                    rk[other] = want
                    comp[other] = cid
                    stack.append(other)
        cid += 1
    mins: dict[int, int] = {}
    for e, r in rk.items():
        c = comp[e]
        mins[c] = min(mins.get(c, r), r)
    rk = {e: r - mins[comp[e]] for e, r in rk.items()}
    for a in poset.marking:
        for b in poset.marking:
            if rk[a] < rk[b] and not poset.marking[a] < poset.marking[b]:
                return None
    return rk


def is_ranked(poset: MarkedPoset) -> bool:
    return rank_function(poset) is not None

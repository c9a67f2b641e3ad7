"""Shared fixtures: the worked example posets and seeded random generators."""

from __future__ import annotations

import random
from fractions import Fraction

import pytest

from mpp.poset import MarkedPoset, remove_redundant_covers, validate


def make_ex52() -> MarkedPoset:
    """The running example: markings 0,2,3,4 with unmarked p, q, r."""
    return MarkedPoset(
        elements=("0", "2", "3", "4", "p", "q", "r"),
        covers=frozenset([("0", "p"), ("0", "q"), ("p", "r"), ("q", "r"),
                          ("2", "r"), ("r", "4"), ("p", "3"), ("q", "3")]),
        marking={"0": 0, "2": 2, "3": 3, "4": 4},
    )


def make_chain_poset() -> MarkedPoset:
    """a < p < q < b with lambda(a)=0, lambda(b)=2."""
    return MarkedPoset(
        elements=("a", "p", "q", "b"),
        covers=frozenset([("a", "p"), ("p", "q"), ("q", "b")]),
        marking={"a": 0, "b": 2},
    )


def make_diamond() -> MarkedPoset:
    """bottom < p, q < top."""
    return MarkedPoset(
        elements=("bot", "p", "q", "top"),
        covers=frozenset([("bot", "p"), ("bot", "q"), ("p", "top"), ("q", "top")]),
        marking={"bot": 0, "top": 2},
    )


def make_double_star() -> MarkedPoset:
    """Two chains below q and two above, all through chain elements; q is a
    chain-order star element for C = {c1, c2, d1, d2}, O = {q}."""
    return MarkedPoset(
        elements=("a", "c1", "c2", "q", "d1", "d2", "z"),
        covers=frozenset([("a", "c1"), ("a", "c2"), ("c1", "q"), ("c2", "q"),
                          ("q", "d1"), ("q", "d2"), ("d1", "z"), ("d2", "z")]),
        marking={"a": 0, "z": 3},
    )


@pytest.fixture
def ex52():
    return make_ex52()


@pytest.fixture
def chain_poset():
    return make_chain_poset()


@pytest.fixture
def diamond():
    return make_diamond()


def heights(elements, lower):
    h = {}

    def height(e):
        if e not in h:
            lows = lower[e]
            h[e] = 0 if not lows else 1 + max(height(q) for q in lows)
        return h[e]

    for e in elements:
        height(e)
    return h


def random_marked_poset(rnd: random.Random, n: int, p_edge: float = 0.45,
                        bounded: bool = True, max_unmarked: int | None = None,
                        mark_extra: float = 0.15, scale: int = 1) -> MarkedPoset:
    """Random valid marked poset with integral marking lambda = scale * height.

    All minimal (and, when bounded, all maximal) elements get marked; the
    marking is strictly order-preserving by construction.
    """
    names = [f"e{i}" for i in range(n)]
    edges = set()
    for i in range(n):
        for j in range(i + 1, n):
            if rnd.random() < p_edge:
                edges.add((names[i], names[j]))
    # transitive reduction: drop edges implied by two-step paths
    reach = {a: {b for x, b in edges if x == a} for a in names}
    changed = True
    while changed:
        changed = False
        for a in names:
            for b in list(reach[a]):
                extra = reach[b] - reach[a]
                if extra:
                    reach[a] |= extra
                    changed = True
    covers = {(a, b) for a, b in edges
              if not any(b in reach[m] for m in reach[a])}
    lower = {e: sorted(a for a, b in covers if b == e) for e in names}
    upper = {e: sorted(b for a, b in covers if a == e) for e in names}
    h = heights(names, lower)
    marked = {e for e in names if not lower[e]}
    if bounded:
        marked |= {e for e in names if not upper[e]}
    for e in names:
        if e not in marked and rnd.random() < mark_extra:
            marked.add(e)
    if max_unmarked is not None:
        unmarked = [e for e in names if e not in marked]
        rnd.shuffle(unmarked)
        while len(unmarked) > max_unmarked:
            marked.add(unmarked.pop())
    marking = {e: Fraction(scale * h[e]) for e in marked}
    poset = MarkedPoset(tuple(names), frozenset(covers), marking)
    assert validate(poset) == []
    return poset


def random_ranked_regular_poset(rnd: random.Random, levels: int = 3,
                                max_width: int = 3) -> MarkedPoset:
    """Random ranked poset, regularized, with exactly the bottom and top levels
    marked.  Dropping redundant covers can detach a marked extremal element and
    destroy rankedness, so draws are retried until the result is still ranked."""
    import warnings

    from mpp.poset import rank_function

    while True:
        layer_sizes = [rnd.randint(1, max_width) for _ in range(levels)]
        names, layers = [], []
        for li, size in enumerate(layer_sizes):
            layer = [f"l{li}n{i}" for i in range(size)]
            layers.append(layer)
            names.extend(layer)
        covers = set()
        for li in range(1, levels):
            for e in layers[li]:
                lows = rnd.sample(layers[li - 1], rnd.randint(1, len(layers[li - 1])))
                covers.update((q, e) for q in lows)
            for q in layers[li - 1]:
                if not any(c[0] == q for c in covers):
                    covers.add((q, rnd.choice(layers[li])))
        gap = max_width
        marking = {}
        for li in (0, levels - 1):
            for i, e in enumerate(layers[li]):
                marking[e] = Fraction(li * gap + i)
        poset = MarkedPoset(tuple(names), frozenset(covers), marking)
        assert validate(poset) == []
        with warnings.catch_warnings():
            warnings.simplefilter("ignore")
            result = remove_redundant_covers(poset)
        if rank_function(result) is not None:
            return result


def random_point(rnd: random.Random, keys, lo=-12, hi=12, den=6):
    return {k: Fraction(rnd.randint(lo, hi), rnd.randint(1, den)) for k in keys}


def random_parameter(rnd: random.Random, poset: MarkedPoset, interior=False):
    from mpp.family import Parameter

    vals = {}
    for p in poset.unmarked:
        if interior:
            d = rnd.randint(2, 7)
            vals[p] = Fraction(rnd.randint(1, d - 1), d)
        else:
            d = rnd.randint(1, 6)
            vals[p] = Fraction(rnd.randint(0, d), d)
    return Parameter(vals)

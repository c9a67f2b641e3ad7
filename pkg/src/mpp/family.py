"""The parametrized family O_t(P, lambda): inequality descriptions for any
parameter in the hypercube, the piecewise-linear transfer maps between family
members, tightness predicates, LP-based redundancy elimination, and tameness.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property

from .geometry import (AffineMap, EmptyPolyhedron, HRep, TooLarge, make_hrep,
                       substitute)
from .lp import LPStatus, lp_solve
from .poset import (MarkedPoset, PosetError, SaturatedChain, chain_counts,
                    chains_through, require_valid, saturated_chains_to)
from .rationals import rat

ZERO = Fraction(0)
ONE = Fraction(1)


@dataclass(frozen=True)
class Parameter:
    """A point t of the parametrizing hypercube [0,1]^unmarked."""

    values: dict[str, Fraction]

    def __post_init__(self):
        object.__setattr__(self, "values", {k: rat(v) for k, v in self.values.items()})
        for p, v in self.values.items():
            if not (0 <= v <= 1):
                raise ValueError(f"t_{p} = {v} outside [0, 1]")

    def __getitem__(self, p: str) -> Fraction:
        return self.values[p]

    @cached_property
    def is_hypercube_vertex(self) -> bool:
        return all(v in (0, 1) for v in self.values.values())

    @cached_property
    def is_interior(self) -> bool:
        return all(0 < v < 1 for v in self.values.values())

    def fixed_coords(self) -> frozenset[str]:
        return frozenset(p for p, v in self.values.items() if v in (0, 1))

    def is_degeneration_of(self, other: "Parameter") -> bool:
        """True iff self agrees with `other` on every coordinate other pins to 0/1."""
        return all(self.values[p] == v for p, v in other.values.items() if v in (0, 1))


@dataclass(frozen=True)
class Partition:
    """A partition of the unmarked elements into chain part C and order part O."""

    C: frozenset[str]
    O: frozenset[str]

    def __post_init__(self):
        object.__setattr__(self, "C", frozenset(self.C))
        object.__setattr__(self, "O", frozenset(self.O))
        if self.C & self.O:
            raise ValueError("C and O overlap")


def check_partition(poset: MarkedPoset, part: Partition) -> Partition:
    if part.C | part.O != frozenset(poset.unmarked):
        raise PosetError("partition does not cover the unmarked elements")
    return part


def zero_parameter(poset: MarkedPoset) -> Parameter:
    return Parameter({p: ZERO for p in poset.unmarked})


def one_parameter(poset: MarkedPoset) -> Parameter:
    return Parameter({p: ONE for p in poset.unmarked})


def parameter_of_partition(poset: MarkedPoset, part: Partition) -> Parameter:
    check_partition(poset, part)
    return Parameter({p: ONE if p in part.C else ZERO for p in poset.unmarked})


def partition_of_parameter(poset: MarkedPoset, t: Parameter) -> Partition:
    if not t.is_hypercube_vertex:
        raise ValueError("only hypercube vertices correspond to partitions")
    C = frozenset(p for p in poset.unmarked if t[p] == 1)
    return Partition(C, frozenset(poset.unmarked) - C)


def generic_parameter(poset: MarkedPoset) -> Parameter:
    """Deterministic interior parameter: i/(n+1) in lex coordinate order."""
    names = sorted(poset.unmarked)
    n = len(names)
    return Parameter({p: Fraction(i + 1, n + 1) for i, p in enumerate(names)})


def hypercube_vertices(poset: MarkedPoset):
    """All 2^|unmarked| vertex Parameters, in a fixed binary-counter order."""
    names = sorted(poset.unmarked)
    for bits in itertools.product((ZERO, ONE), repeat=len(names)):
        yield Parameter(dict(zip(names, bits)))


def _t_of(poset: MarkedPoset, t: Parameter, p: str) -> Fraction:
    return ZERO if p in poset.marked else t[p]


# -- inequality descriptions -------------------------------------------------

def chain_coefficients(poset: MarkedPoset, t: Parameter, chain: SaturatedChain):
    """Left-hand-side coefficients {element: coefficient} of the inequality
    (1 - t_p) * (t_{p_1}...t_{p_r} x_{p_0} + ... + x_{p_r}) <= x_p."""
    tp = _t_of(poset, t, chain.target)
    coeffs: dict[str, Fraction] = {}
    r = len(chain.below) - 1
    for i, e in enumerate(chain.below):
        w = ONE - tp
        for j in range(i + 1, r + 1):
            w *= t[chain.below[j]]
        coeffs[e] = coeffs.get(e, ZERO) + w
    return coeffs


def hrep_general(poset: MarkedPoset, t: Parameter, projected: bool = True) -> HRep:
    """H-description of O_t(P, lambda), one inequality per saturated chain.

    No on-the-fly simplification: redundancy removal is a separate step so
    that every constraint keeps its generating chain as origin tag.
    """
    require_valid(poset)
    coords = poset.elements
    index = {e: i for i, e in enumerate(coords)}
    eqs = []
    for a in sorted(poset.marking):
        row = [ZERO] * len(coords)
        row[index[a]] = ONE
        eqs.append((tuple(row), poset.marking[a], ("marking", a)))
    ineqs = []
    for p in coords:
        for chain in saturated_chains_to(poset, p):
            if p in poset.marked and len(chain.below) == 1:
                continue  # r = 0 into a marked target follows from the marking
            coeffs = chain_coefficients(poset, t, chain)
            row = [ZERO] * len(coords)
            for e, c in coeffs.items():
                row[index[e]] += c
            row[index[p]] -= ONE
            ineqs.append((tuple(row), ZERO, ("chain",) + chain.below + (chain.target,)))
    h = make_hrep(coords, eqs, ineqs)
    if projected:
        h = substitute(h, poset.marking)
    return h


def hrep_chain_order(poset: MarkedPoset, part: Partition, projected: bool = True) -> HRep:
    """Direct description of the marked chain-order polyhedron O_{C,O}."""
    require_valid(poset)
    check_partition(poset, part)
    coords = poset.elements
    index = {e: i for i, e in enumerate(coords)}
    eqs = []
    for a in sorted(poset.marking):
        row = [ZERO] * len(coords)
        row[index[a]] = ONE
        eqs.append((tuple(row), poset.marking[a], ("marking", a)))
    ineqs = []
    for p in sorted(part.C):
        row = [ZERO] * len(coords)
        row[index[p]] = -ONE
        ineqs.append((tuple(row), ZERO, ("nonneg", p)))
    stops = poset.marked | part.O
    for a, mids, b in chains_through(poset, part.C, stops):
        if a in poset.marked and b in poset.marked and not mids:
            continue
        row = [ZERO] * len(coords)
        row[index[a]] += ONE
        for m in mids:
            row[index[m]] += ONE
        row[index[b]] -= ONE
        ineqs.append((tuple(row), ZERO, ("cochain", a) + mids + (b,)))
    h = make_hrep(coords, eqs, ineqs)
    if projected:
        h = substitute(h, poset.marking)
    return h


# -- transfer maps -------------------------------------------------------------

def transfer_phi(poset: MarkedPoset, t: Parameter, x) -> dict[str, Fraction]:
    """phi_t(x)_p = x_p - t_p max_{q < p} x_q on the full space R^P."""
    out = {}
    for p in poset.elements:
        if p in poset.marked:
            out[p] = Fraction(x[p])
        else:
            lows = poset.lower_covers(p)
            out[p] = Fraction(x[p]) - t[p] * max(Fraction(x[q]) for q in lows)
    return out


def transfer_psi(poset: MarkedPoset, t: Parameter, y) -> dict[str, Fraction]:
    """Inverse transfer map, evaluated recursively along a linear extension."""
    out: dict[str, Fraction] = {}
    for p in poset.linear_extension():
        if p in poset.marked:
            out[p] = Fraction(y[p])
        else:
            out[p] = Fraction(y[p]) + t[p] * max(out[q] for q in poset.lower_covers(p))
    return out


def transfer_psi_closed(poset: MarkedPoset, t: Parameter, y) -> dict[str, Fraction]:
    """Closed form of psi_t: max over saturated chains ending at p of the
    t-weighted partial sums.  Kept independent of the recursion as an oracle."""
    from .poset import _unmarked_tails

    tails = _unmarked_tails(poset)
    out: dict[str, Fraction] = {}
    for p in poset.elements:
        if p in poset.marked:
            out[p] = Fraction(y[p])
            continue
        best = None
        for chain in tails[p]:
            acc = ZERO
            r = len(chain) - 1
            for i, e in enumerate(chain):
                w = Fraction(y[e])
                for j in range(i + 1, r + 1):
                    w *= t[chain[j]]
                acc += w
            if best is None or acc > best:
                best = acc
        out[p] = best
    return out


def transfer_theta(poset: MarkedPoset, t: Parameter, t2: Parameter, y) -> dict[str, Fraction]:
    """theta_{t,t'} = phi_{t'} after psi_t."""
    return transfer_phi(poset, t2, transfer_psi(poset, t, y))


def iota(poset: MarkedPoset, x) -> dict[str, Fraction]:
    """Fill the marked coordinates with their marking values."""
    out = {a: poset.marking[a] for a in poset.marking}
    for p in poset.unmarked:
        out[p] = Fraction(x[p])
    return out


def project(poset: MarkedPoset, x) -> dict[str, Fraction]:
    return {p: Fraction(x[p]) for p in poset.unmarked}


def transfer_phi_projected(poset, t, x):
    return project(poset, transfer_phi(poset, t, iota(poset, x)))


def transfer_psi_projected(poset, t, y):
    return project(poset, transfer_psi(poset, t, iota(poset, y)))


def transfer_theta_projected(poset, t, t2, y):
    return project(poset, transfer_theta(poset, t, t2, iota(poset, y)))


# -- maximizing relation and tightness ----------------------------------------

def maximizing_relation(poset: MarkedPoset, x) -> frozenset[tuple[str, str]]:
    """All pairs (q, p) with q < p a cover and x_q maximal among covers of p."""
    pairs = set()
    for p in poset.elements:
        lows = poset.lower_covers(p)
        if not lows:
            continue
        mx = max(Fraction(x[q]) for q in lows)
        for q in lows:
            if Fraction(x[q]) == mx:
                pairs.add((q, p))
    return frozenset(pairs)


def chain_tight(poset: MarkedPoset, t: Parameter, x, chain: SaturatedChain) -> bool:
    """Whether the chain's inequality is tight at phi_t(x), for x in O(P, lambda).

    Evaluates the pullback conditions: either t_p = 1 and x_p maximal among its
    covers, or t_p < 1, x constant on the chain's last step, and the maximizing
    relation holds from the first index after which all t_{p_i} are positive.
    """
    x = {e: Fraction(x[e]) for e in poset.elements}
    p = chain.target
    tp = _t_of(poset, t, p)
    mx = max(x[q] for q in poset.lower_covers(p))
    if tp == 1:
        return x[p] == mx
    below = chain.below
    r = len(below) - 1
    if x[p] != x[below[r]]:
        return False
    k = r + 1
    for i in range(r, 0, -1):
        if t[below[i]] > 0:
            k = i
        else:
            break
    for i in range(k, r + 1):
        if x[below[i - 1]] != max(x[q] for q in poset.lower_covers(below[i])):
            return False
    return True


# -- redundancy elimination and tameness ---------------------------------------

def _feasible(h: HRep) -> bool:
    eqs, ineqs = h.lp_rows()
    status, _, _ = lp_solve(h.dim_ambient, [ZERO] * h.dim_ambient, eqs, ineqs)
    return status is LPStatus.OPTIMAL


def eliminate_redundancy(h: HRep) -> HRep:
    """Irredundant description: implicit equalities become equations, then
    constraints implied by the rest are dropped (exact LP per constraint)."""
    n = h.dim_ambient
    if not _feasible(h):
        raise EmptyPolyhedron("cannot eliminate redundancy of an empty polyhedron")
    all_eqs, all_ineqs = h.lp_rows()
    equations = list(h.equations)
    candidates = []
    for c in h.inequalities:
        status, value, _ = lp_solve(n, c.coeffs, all_eqs, all_ineqs, maximize=False)
        if status is LPStatus.OPTIMAL and value == c.rhs:
            equations.append(c)
        else:
            candidates.append(c)
    seen_eq = set()
    uniq_eqs = []
    for c in equations:
        coeffs, rhs = c.normalized()
        if next(x for x in coeffs if x != 0) < 0:  # equations are sign-free
            coeffs, rhs = tuple(-x for x in coeffs), -rhs
        if (coeffs, rhs) not in seen_eq:
            seen_eq.add((coeffs, rhs))
            uniq_eqs.append(c)
    eq_rows = [(c.coeffs, c.rhs) for c in uniq_eqs]

    kept = list(candidates)
    i = 0
    while i < len(kept):
        c = kept[i]
        others = [(d.coeffs, d.rhs) for j, d in enumerate(kept) if j != i]
        status, value, _ = lp_solve(n, c.coeffs, eq_rows, others, maximize=True)
        if status is LPStatus.OPTIMAL and value <= c.rhs:
            kept.pop(i)
        else:
            i += 1
    return HRep(h.coords, tuple(uniq_eqs), tuple(kept))


def facet_count(h: HRep) -> int:
    return len(eliminate_redundancy(h).inequalities)


def is_tame(poset: MarkedPoset) -> bool:
    """Sweep all partitions: every listed chain-order inequality must be
    facet-defining (no duplicates, no implicit equalities, none redundant)."""
    require_valid(poset)
    unmarked = sorted(poset.unmarked)
    if len(unmarked) > 12:
        raise TooLarge("tameness sweep capped at 12 unmarked elements")
    for bits in itertools.product((False, True), repeat=len(unmarked)):
        C = frozenset(p for p, b in zip(unmarked, bits) if b)
        part = Partition(C, frozenset(unmarked) - C)
        h = hrep_chain_order(poset, part, projected=True)
        keys = [c.normalized() for c in h.inequalities]
        if len(set(keys)) != len(keys):
            return False
        n = h.dim_ambient
        eq_rows, ineq_rows = h.lp_rows()
        for i, c in enumerate(h.inequalities):
            status, value, _ = lp_solve(n, c.coeffs, eq_rows, ineq_rows, maximize=False)
            if status is LPStatus.OPTIMAL and value == c.rhs:
                return False  # implicit equality, not a facet
            others = ineq_rows[:i] + ineq_rows[i + 1:]
            status, value, _ = lp_solve(n, c.coeffs, eq_rows, others, maximize=True)
            if status is LPStatus.OPTIMAL and value <= c.rhs:
                return False  # redundant
    return True


def facet_count_delta(poset: MarkedPoset, part: Partition, q: str) -> int:
    """Predicted facet-count change (k-1)(l-1) when q moves from O to C."""
    check_partition(poset, part)
    if q not in part.O:
        raise PosetError(f"{q} is not an order element of the partition")
    down, up = chain_counts(poset, part.C, part.O)
    return (down[q] - 1) * (up[q] - 1)


def _chains_ending_at(poset: MarkedPoset, C, stops, q: str, upward: bool):
    """Saturated chains from `stops` through C into q (upward=False) or from q
    up through C into `stops` (upward=True), as (stop, interior...)."""
    step = poset.upper_covers if upward else poset.lower_covers
    out = []

    def walk(e, mids):
        for c in step(e):
            if c in stops:
                out.append((c, tuple(mids)))
            elif c in C:
                walk(c, mids + [c])

    walk(q, [])
    return sorted(out)


def unimodular_move(poset: MarkedPoset, part: Partition, q: str) -> AffineMap | None:
    """Unimodular map carrying O_{C,O} onto O_{C+q,O-q} when q is not a
    chain-order star element; None when no such single-chain map applies.

    Works on the projected coordinates; marked chain endpoints contribute to
    the translation part.
    """
    check_partition(poset, part)
    stops = poset.marked | part.O
    down = _chains_ending_at(poset, part.C, stops, q, upward=False)
    up = _chains_ending_at(poset, part.C, stops, q, upward=True)
    coords = tuple(poset.unmarked)
    index = {e: i for i, e in enumerate(coords)}
    n = len(coords)
    row = [ZERO] * n
    offset = [ZERO] * n
    if len(down) == 1:
        s, mids = down[0]
        row[index[q]] = ONE
        for m in mids:
            row[index[m]] -= ONE
        if s in poset.marked:
            offset[index[q]] = -poset.marking[s]
        else:
            row[index[s]] -= ONE
    elif len(up) == 1:
        s, mids = up[0]
        row[index[q]] = -ONE
        for m in mids:
            row[index[m]] -= ONE
        if s in poset.marked:
            offset[index[q]] = poset.marking[s]
        else:
            row[index[s]] += ONE
    else:
        return None
    matrix = [[ONE if j == i else ZERO for j in range(n)] for i in range(n)]
    matrix[index[q]] = row
    return AffineMap(coords, tuple(tuple(r) for r in matrix), tuple(offset))

"""Lattice points, Ehrhart interpolation, and integral-closure checks.

Counting is an exhaustive scan over the exact vertex bounding box with a
per-point constraint check; the documented complexity gate is a box of at
most 10^7 candidate points.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from fractions import Fraction

from .geometry import (EmptyPolyhedron, HRep, NonLatticeVertices, TooLarge,
                       UnsupportedUnbounded, vertices)

BOX_GATE = 10 ** 7


def _bounding_box(h: HRep):
    v = vertices(h)
    if v.rays:
        raise UnsupportedUnbounded("lattice-point scan needs a bounded polyhedron")
    lows, highs = [], []
    for i in range(len(h.coords)):
        vals = [p[i] for p in v.vertices]
        lows.append(math.ceil(min(vals)))
        highs.append(math.floor(max(vals)))
    return v, lows, highs


def lattice_points(h: HRep) -> list[tuple[int, ...]]:
    """All integer points of a bounded polyhedron, sorted lexicographically."""
    try:
        v, lows, highs = _bounding_box(h)
    except EmptyPolyhedron:
        return []
    size = 1
    for lo, hi in zip(lows, highs):
        size *= max(0, hi - lo + 1)
    if size > BOX_GATE:
        raise TooLarge(f"bounding box holds {size} candidates (gate {BOX_GATE})")
    # integer-cleared constraint rows for fast inner-loop evaluation
    rows = []
    for c in h.equations:
        m = math.lcm(*[x.denominator for x in c.coeffs + (c.rhs,)])
        rows.append(([int(x * m) for x in c.coeffs], int(c.rhs * m), True))
    for c in h.inequalities:
        m = math.lcm(*[x.denominator for x in c.coeffs + (c.rhs,)])
        rows.append(([int(x * m) for x in c.coeffs], int(c.rhs * m), False))
    out = []
    for pt in itertools.product(*[range(lo, hi + 1) for lo, hi in zip(lows, highs)]):
        ok = True
        for coeffs, rhs, is_eq in rows:
            s = sum(a * x for a, x in zip(coeffs, pt))
            if (s != rhs) if is_eq else (s > rhs):
                ok = False
                break
        if ok:
            out.append(pt)
    return out


@dataclass(frozen=True)
class EhrhartData:
    counts: tuple[tuple[int, int], ...]        # (dilation k, #lattice points of kQ)
    coefficients: tuple[Fraction, ...]         # polynomial, lowest degree first

    def evaluate(self, k) -> Fraction:
        acc = Fraction(0)
        for c in reversed(self.coefficients):
            acc = acc * k + c
        return acc


def _lagrange(points: list[tuple[int, int]]) -> tuple[Fraction, ...]:
    n = len(points)
    coeffs = [Fraction(0)] * n
    for i, (xi, yi) in enumerate(points):
        poly = [Fraction(1)]  # prod_{j != i} (x - xj), expanded
        denom = Fraction(1)
        for j, (xj, _) in enumerate(points):
            if j == i:
                continue
            new = [Fraction(0)] * (len(poly) + 1)
            for k, c in enumerate(poly):
                new[k + 1] += c
                new[k] -= xj * c
            poly = new
            denom *= xi - xj
        for k, c in enumerate(poly):
            coeffs[k] += Fraction(yi) * c / denom
    while len(coeffs) > 1 and coeffs[-1] == 0:
        coeffs.pop()
    return tuple(coeffs)


def ehrhart(h: HRep, max_dilation: int | None = None) -> EhrhartData:
    """Counts at dilations 0..max_dilation plus the interpolated polynomial.

    Requires a bounded lattice polytope; max_dilation defaults to dim and the
    interpolation is asserted to reproduce every recorded count exactly.
    """
    v = vertices(h)
    if v.rays:
        raise UnsupportedUnbounded("Ehrhart counting needs a polytope")
    for p in v.vertices:
        if any(x.denominator != 1 for x in p):
            raise NonLatticeVertices(f"non-integral vertex {p}")
    from .linalg import affine_rank
    dim = affine_rank(v.vertices)
    if max_dilation is None:
        max_dilation = max(dim, 1)
    if max_dilation < dim:
        raise ValueError("need at least dim+1 interpolation points")
    counts = [(0, 1)]
    for k in range(1, max_dilation + 1):
        counts.append((k, len(lattice_points(h.dilate(k)))))
    coeffs = _lagrange(counts)
    data = EhrhartData(tuple(counts), coeffs)
    if len(coeffs) - 1 > dim:
        raise AssertionError("Ehrhart interpolation exceeded polytope dimension")
    for k, c in counts:
        if data.evaluate(k) != c:
            raise AssertionError("Ehrhart interpolation failed to reproduce a count")
    return data


def is_integrally_closed(h: HRep, dilations=(2, 3)) -> bool:
    """Check that every lattice point of kQ is a sum of k lattice points of Q."""
    v = vertices(h)
    if v.rays:
        raise UnsupportedUnbounded("integral closure needs a polytope")
    for p in v.vertices:
        if any(x.denominator != 1 for x in p):
            raise NonLatticeVertices(f"non-integral vertex {p}")
    base = lattice_points(h)
    base_set = set(base)
    sums = {1: base_set}
    for k in sorted(dilations):
        prev = sums.get(k - 1)
        if prev is None:
            prev = _ksums(base, base_set, k - 1)
        cur = {tuple(a + b for a, b in zip(p, q)) for p in prev for q in base}
        sums[k] = cur
        for z in lattice_points(h.dilate(k)):
            if z not in cur:
                return False
    return True


def _ksums(base, base_set, k):
    cur = set(base_set)
    for _ in range(k - 1):
        cur = {tuple(a + b for a, b in zip(p, q)) for p in cur for q in base}
    return cur

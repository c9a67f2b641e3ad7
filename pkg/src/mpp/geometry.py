"""Exact rational polyhedron kernel.

H-representations hold equations and inequalities with Fraction coefficients
and an origin tag per constraint.  Vertex enumeration is the classical double
description method on the homogenization cone; a brute-force constraint-subset
oracle is kept alongside for cross-checking.  Face lattices are computed from
vertex-facet incidences and are restricted to bounded polyhedra.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property

from . import linalg
from .linalg import ZERO, ONE, dot, primitive, sign_canonical
from .lp import LPStatus, lp_solve


class GeometryError(Exception):
    pass


class EmptyPolyhedron(GeometryError):
    pass


class Unbounded(GeometryError):
    pass


class UnsupportedUnbounded(GeometryError):
    pass


class UnsupportedLineality(GeometryError):
    pass


class NonLatticeVertices(GeometryError):
    pass


class SingularMap(GeometryError):
    pass


class TooLarge(GeometryError):
    pass


PLUMBING = ("plumbing",)


@dataclass(frozen=True)
class Constraint:
    """A row a . x = rhs (equation) or a . x <= rhs (inequality)."""

    coeffs: tuple[Fraction, ...]
    rhs: Fraction
    origin: tuple[str, ...] = PLUMBING

    def evaluate(self, point) -> Fraction:
        return dot(self.coeffs, point)

    def normalized(self) -> tuple[tuple[Fraction, ...], Fraction]:
        """Positive-scale canonical form for comparisons (primitive coeffs)."""
        p = primitive(self.coeffs)
        nz = next(x for x in self.coeffs if x != 0)
        scale = next(x for x in p if x != 0) / nz
        return p, self.rhs * scale


@dataclass(frozen=True)
class HRep:
    coords: tuple[str, ...]
    equations: tuple[Constraint, ...]
    inequalities: tuple[Constraint, ...]

    def __post_init__(self):
        for c in self.equations + self.inequalities:
            if len(c.coeffs) != len(self.coords):
                raise GeometryError("constraint arity does not match ambient coordinates")
            if all(x == 0 for x in c.coeffs):
                raise GeometryError("zero-row constraint (filter constants out first)")

    @property
    def dim_ambient(self) -> int:
        return len(self.coords)

    def lp_rows(self):
        eqs = [(c.coeffs, c.rhs) for c in self.equations]
        ineqs = [(c.coeffs, c.rhs) for c in self.inequalities]
        return eqs, ineqs

    def contains(self, point) -> bool:
        return (all(c.evaluate(point) == c.rhs for c in self.equations)
                and all(c.evaluate(point) <= c.rhs for c in self.inequalities))

    def tight_inequalities(self, point) -> frozenset[int]:
        return frozenset(i for i, c in enumerate(self.inequalities)
                         if c.evaluate(point) == c.rhs)

    def dilate(self, k) -> "HRep":
        k = Fraction(k)
        return HRep(
            self.coords,
            tuple(Constraint(c.coeffs, k * c.rhs, c.origin) for c in self.equations),
            tuple(Constraint(c.coeffs, k * c.rhs, c.origin) for c in self.inequalities),
        )


def make_hrep(coords, equations, inequalities) -> HRep:
    """Build an HRep from (coeffs, rhs, origin) triples, dropping constant rows.

    A constant row that fails (e.g. 0 <= -1) raises EmptyPolyhedron since the
    representation invariant forbids storing zero rows.
    """
    coords = tuple(coords)
    eqs = []
    for coeffs, rhs, origin in equations:
        coeffs = tuple(Fraction(c) for c in coeffs)
        rhs = Fraction(rhs)
        if all(c == 0 for c in coeffs):
            if rhs != 0:
                raise EmptyPolyhedron(f"constant equation violated (origin {origin})")
            continue
        eqs.append(Constraint(coeffs, rhs, tuple(origin)))
    ineqs = []
    for coeffs, rhs, origin in inequalities:
        coeffs = tuple(Fraction(c) for c in coeffs)
        rhs = Fraction(rhs)
        if all(c == 0 for c in coeffs):
            if rhs < 0:
                raise EmptyPolyhedron(f"constant inequality violated (origin {origin})")
            continue
        ineqs.append(Constraint(coeffs, rhs, tuple(origin)))
    return HRep(coords, tuple(eqs), tuple(ineqs))


@dataclass(frozen=True)
class VRep:
    coords: tuple[str, ...]
    vertices: tuple[tuple[Fraction, ...], ...]
    rays: tuple[tuple[Fraction, ...], ...]

    @property
    def bounded(self) -> bool:
        return not self.rays

    def vertex_set(self) -> frozenset[tuple[Fraction, ...]]:
        return frozenset(self.vertices)

    def ray_set(self) -> frozenset[tuple[Fraction, ...]]:
        return frozenset(self.rays)


# -- double description ------------------------------------------------------

def _dd_process_equality(row, lines, rays):
    vals = [dot(row, l) for l in lines]
    j0 = next((j for j, v in enumerate(vals) if v != 0), None)
    if j0 is not None:
        l0, v0 = lines[j0], vals[j0]
        new_lines = [tuple(x - (v / v0) * y for x, y in zip(l, l0))
                     for j, (l, v) in enumerate(zip(lines, vals)) if j != j0]
        new_rays = []
        for r, z in rays:
            s = dot(row, r)
            vec = tuple(x - (s / v0) * y for x, y in zip(r, l0)) if s != 0 else r
            new_rays.append((primitive(vec), z))
        return [sign_canonical(l) for l in new_lines if not linalg.is_zero(l)], new_rays
    plus, zero, minus = [], [], []
    for r, z in rays:
        s = dot(row, r)
        (plus if s > 0 else minus if s < 0 else zero).append((r, z, s))
    new_rays = [(r, z) for r, z, _ in zero]
    for rp, zp, sp in plus:
        for rm, zm, sm in minus:
            if _adjacent(zp, zm, rays, rp, rm):
                w = primitive(tuple(sp * xm - sm * xp for xp, xm in zip(rp, rm)))
                new_rays.append((w, zp & zm))
    return lines, _dedupe_rays(new_rays)


def _dd_process_inequality(idx, row, lines, rays):
    vals = [dot(row, l) for l in lines]
    j0 = next((j for j, v in enumerate(vals) if v != 0), None)
    if j0 is not None:
        l0, v0 = lines[j0], vals[j0]
        new_lines = [tuple(x - (v / v0) * y for x, y in zip(l, l0))
                     for j, (l, v) in enumerate(zip(lines, vals)) if j != j0]
        r0 = l0 if v0 < 0 else tuple(-x for x in l0)
        new_rays = []
        for r, z in rays:
            s = dot(row, r)
            if s == 0:
                new_rays.append((r, z | {idx}))
            else:
                vec = primitive(tuple(x - (s / v0) * y for x, y in zip(r, l0)))
                new_rays.append((vec, z | {idx}))
        new_rays.append((primitive(r0), frozenset(range(idx))))
        return [sign_canonical(l) for l in new_lines if not linalg.is_zero(l)], new_rays
    plus, zero, minus = [], [], []
    for r, z in rays:
        s = dot(row, r)
        (plus if s > 0 else minus if s < 0 else zero).append((r, z, s))
    new_rays = [(r, z | {idx}) for r, z, _ in zero]
    new_rays += [(r, z) for r, z, _ in minus]
    for rp, zp, sp in plus:
        for rm, zm, sm in minus:
            if _adjacent(zp, zm, rays, rp, rm):
                w = primitive(tuple(sp * xm - sm * xp for xp, xm in zip(rp, rm)))
                new_rays.append((w, (zp & zm) | {idx}))
    return lines, _dedupe_rays(new_rays)


def _adjacent(zp, zm, rays, rp, rm) -> bool:
    zc = zp & zm
    for r, z in rays:
        if r == rp or r == rm:
            continue
        if zc <= z:
            return False
    return True


def _dedupe_rays(rays):
    seen = {}
    for r, z in rays:
        if r in seen:
            seen[r] = (r, seen[r][1] | z)
        else:
            seen[r] = (r, z)
    return list(seen.values())


def _dd_generators(h: HRep):
    """Run DD on the homogenization cone; returns (lines, rays) in (x0, x)."""
    d = h.dim_ambient
    lines = [tuple(ONE if j == i else ZERO for j in range(d + 1)) for i in range(d + 1)]
    rays: list[tuple[tuple[Fraction, ...], frozenset[int]]] = []
    for c in h.equations:
        row = (-c.rhs,) + c.coeffs
        lines, rays = _dd_process_equality(row, lines, rays)
    ineq_rows = [(-ONE,) + tuple([ZERO] * d)]  # x0 >= 0
    ineq_rows += [(-c.rhs,) + c.coeffs for c in h.inequalities]
    for idx, row in enumerate(ineq_rows):
        lines, rays = _dd_process_inequality(idx, row, lines, rays)
    return lines, rays


def vertices(h: HRep) -> VRep:
    """Exact V-representation by double description.

    Raises EmptyPolyhedron when infeasible and UnsupportedLineality when the
    polyhedron contains a line (marked poset polyhedra never do).
    """
    if h.dim_ambient == 0:
        return VRep((), ((),), ())
    lines, rays = _dd_generators(h)
    if lines:
        raise UnsupportedLineality("polyhedron contains a line")
    verts = set()
    recession = set()
    for r, _ in rays:
        if r[0] > 0:
            verts.add(tuple(x / r[0] for x in r[1:]))
        else:
            recession.add(primitive(r[1:]))
    if not verts:
        raise EmptyPolyhedron("no feasible point")
    return VRep(h.coords, tuple(sorted(verts)), tuple(sorted(recession)))


# -- brute-force oracle -------------------------------------------------------

def _recession_direction(h: HRep):
    """A nonzero recession direction of the polyhedron, or None."""
    d = h.dim_ambient
    eqs = [(c.coeffs, ZERO) for c in h.equations]
    ineqs = [(c.coeffs, ZERO) for c in h.inequalities]
    box = []
    for i in range(d):
        e = tuple(ONE if j == i else ZERO for j in range(d))
        box.append((e, ONE))
        box.append((tuple(-x for x in e), ONE))
    for i in range(d):
        for sign in (1, -1):
            obj = [Fraction(sign) if j == i else ZERO for j in range(d)]
            status, value, x = lp_solve(d, obj, eqs, ineqs + box, maximize=True)
            if status is LPStatus.OPTIMAL and value > 0:
                return x
    return None


def vertices_bruteforce(h: HRep) -> VRep:
    """Independent oracle: intersect all d-subsets of constraints.

    Bounded polyhedra of ambient dimension <= 8 only; raises Unbounded when a
    recession direction exists.
    """
    d = h.dim_ambient
    if d > 8:
        raise TooLarge("brute-force vertex enumeration capped at dimension 8")
    if d == 0:
        return VRep((), ((),), ())
    eq_rows = [list(c.coeffs) for c in h.equations]
    eq_rhs = [c.rhs for c in h.equations]
    feasible_any = False
    base_rank = linalg.rank(eq_rows) if eq_rows else 0
    k = d - base_rank
    verts = set()
    for combo in itertools.combinations(range(len(h.inequalities)), k):
        rows = eq_rows + [list(h.inequalities[i].coeffs) for i in combo]
        rhs = eq_rhs + [h.inequalities[i].rhs for i in combo]
        x = linalg.solve_unique(rows, rhs)
        if x is None:
            continue
        if h.contains(x):
            feasible_any = True
            verts.add(x)
    if _recession_direction(h) is not None:
        raise Unbounded("polyhedron has a recession direction")
    if not verts and not feasible_any:
        raise EmptyPolyhedron("no feasible point")
    return VRep(h.coords, tuple(sorted(verts)), ())


# -- face lattice -------------------------------------------------------------

@dataclass(frozen=True)
class Face:
    vertex_ids: frozenset[int]
    tight: frozenset[int]
    dim: int


@dataclass(frozen=True)
class FaceLattice:
    """All faces of a polytope ordered by vertex-set inclusion.

    Includes the empty face (dim -1) and the polytope itself.  ``tight`` holds
    indices into the generating HRep's inequality list.
    """

    vertices: tuple[tuple[Fraction, ...], ...]
    faces: tuple[Face, ...]

    @cached_property
    def dim(self) -> int:
        return max(f.dim for f in self.faces)

    @cached_property
    def by_vertex_ids(self) -> dict[frozenset[int], Face]:
        return {f.vertex_ids: f for f in self.faces}

    def f_vector(self) -> tuple[int, ...]:
        """Face counts by dimension.

        Proper faces only (dims 0 .. dim-1); a 0-dimensional polytope reports
        (1,) so that a point has a nonempty f-vector.
        """
        if self.dim == 0:
            return (1,)
        counts = [0] * self.dim
        for f in self.faces:
            if 0 <= f.dim < self.dim:
                counts[f.dim] += 1
        return tuple(counts)

    def all_face_counts(self) -> tuple[int, ...]:
        """Counts for dims 0 .. dim including the polytope itself."""
        counts = [0] * (self.dim + 1)
        for f in self.faces:
            if f.dim >= 0:
                counts[f.dim] += 1
        return tuple(counts)

    def facets(self) -> tuple[Face, ...]:
        return tuple(f for f in self.faces if f.dim == self.dim - 1)

    def leq(self, a: Face, b: Face) -> bool:
        return a.vertex_ids <= b.vertex_ids

    def minimal_face_containing(self, h: HRep, point) -> Face:
        """The unique face with the point in its relative interior."""
        if not h.contains(point):
            raise GeometryError("point lies outside the polytope")
        tight = h.tight_inequalities(point)
        ids = frozenset(i for i, vx in enumerate(self.vertices)
                        if tight <= h.tight_inequalities(vx))
        return self.by_vertex_ids[ids]


def face_lattice(h: HRep, v: VRep) -> FaceLattice:
    """Face lattice from vertex-facet incidences (bounded polytopes only)."""
    if v.rays:
        raise UnsupportedUnbounded("face lattices are computed for polytopes only")
    n = len(v.vertices)
    all_ids = frozenset(range(n))
    tight_sets = [frozenset(i for i in range(n)
                            if c.evaluate(v.vertices[i]) == c.rhs)
                  for c in h.inequalities]
    found = {all_ids}
    frontier = [all_ids]
    while frontier:
        cur = frontier.pop()
        for t in tight_sets:
            nxt = cur & t
            if nxt not in found:
                found.add(nxt)
                frontier.append(nxt)
    found.add(frozenset())
    faces = []
    for ids in found:
        pts = [v.vertices[i] for i in sorted(ids)]
        dim = linalg.affine_rank(pts)
        tight = frozenset(j for j, t in enumerate(tight_sets) if ids <= t) if ids else \
            frozenset(range(len(h.inequalities)))
        faces.append(Face(ids, tight, dim))
    faces.sort(key=lambda f: (f.dim, sorted(f.vertex_ids)))
    return FaceLattice(v.vertices, tuple(faces))


# -- affine maps ---------------------------------------------------------------

@dataclass(frozen=True)
class AffineMap:
    """y = matrix . x + offset on a fixed coordinate list."""

    coords: tuple[str, ...]
    matrix: tuple[tuple[Fraction, ...], ...]
    offset: tuple[Fraction, ...]

    @classmethod
    def identity(cls, coords) -> "AffineMap":
        coords = tuple(coords)
        n = len(coords)
        return cls(coords,
                   tuple(tuple(ONE if j == i else ZERO for j in range(n)) for i in range(n)),
                   tuple([ZERO] * n))

    @cached_property
    def is_unimodular(self) -> bool:
        ints = all(x.denominator == 1 for row in self.matrix for x in row)
        return ints and abs(linalg.det(self.matrix)) == 1

    def apply(self, point):
        return tuple(dot(row, point) + off for row, off in zip(self.matrix, self.offset))


def apply_affine(amap: AffineMap, h: HRep) -> HRep:
    """Exact image of the polyhedron under an invertible affine map."""
    inv = linalg.inverse(amap.matrix)
    if inv is None:
        raise SingularMap("affine map is not invertible")
    inv_cols = tuple(zip(*inv))

    def transform(c: Constraint) -> Constraint:
        new_coeffs = tuple(dot(c.coeffs, col) for col in inv_cols)
        shift = dot(new_coeffs, amap.offset)
        return Constraint(new_coeffs, c.rhs + shift, c.origin)

    return HRep(h.coords,
                tuple(transform(c) for c in h.equations),
                tuple(transform(c) for c in h.inequalities))


def substitute(h: HRep, fixed: dict[str, Fraction]) -> HRep:
    """Eliminate coordinates pinned to constants; constant rows are checked."""
    keep = [i for i, c in enumerate(h.coords) if c not in fixed]
    eqs, ineqs = [], []
    for group, sink in ((h.equations, eqs), (h.inequalities, ineqs)):
        for c in group:
            shift = sum((c.coeffs[i] * Fraction(fixed[h.coords[i]])
                         for i in range(len(h.coords)) if h.coords[i] in fixed), ZERO)
            sink.append((tuple(c.coeffs[i] for i in keep), c.rhs - shift, c.origin))
    return make_hrep(tuple(h.coords[i] for i in keep), eqs, ineqs)

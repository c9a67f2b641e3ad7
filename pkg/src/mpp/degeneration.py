"""Continuous degenerations inside the family: induced face-lattice maps,
f-vector domination, combinatorial-type sweeps over hypercube faces, and the
Hibi-Li comparison of chain-order polytopes.

The face map of a degeneration sends a face to the unique face whose relative
interior contains the image of a relative-interior witness (the vertex
barycenter); this matches the topological construction exactly because the
transfer maps are piecewise-linear homeomorphisms.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .family import (Parameter, Partition, check_partition, facet_count,
                     facet_count_delta, hrep_chain_order, hrep_general, is_tame,
                     transfer_theta_projected)
from .geometry import (Face, FaceLattice, HRep, UnsupportedUnbounded,
                       face_lattice, make_hrep, vertices)
from .poset import MarkedPoset, require_valid, star_elements
from .rationals import rat_str

ZERO = Fraction(0)
ONE = Fraction(1)


@dataclass(frozen=True)
class DegenerationPair:
    """Parameters (u, u2) with u2 a degeneration of u: they agree on every
    coordinate u pins to 0 or 1."""

    source: Parameter
    target: Parameter

    def __post_init__(self):
        if not self.target.is_degeneration_of(self.source):
            raise ValueError("target parameter is not a degeneration of the source")


@dataclass(frozen=True)
class FaceMap:
    """Order-preserving surjection between face lattices of two polytopes."""

    source: FaceLattice
    target: FaceLattice
    mapping: dict[Face, Face]

    def image(self, face: Face) -> Face:
        return self.mapping[face]

    def is_surjective(self) -> bool:
        return set(self.mapping.values()) == set(self.target.faces)

    def is_order_preserving(self) -> bool:
        for f in self.source.faces:
            for g in self.source.faces:
                if f.vertex_ids <= g.vertex_ids:
                    if not self.mapping[f].vertex_ids <= self.mapping[g].vertex_ids:
                        return False
        return True

    def dims_nondecreasing(self) -> bool:
        return all(self.mapping[f].dim >= f.dim for f in self.source.faces)

    def as_index_pairs(self) -> list[tuple[int, int]]:
        src = {f: i for i, f in enumerate(self.source.faces)}
        tgt = {f: i for i, f in enumerate(self.target.faces)}
        return sorted((src[f], tgt[g]) for f, g in self.mapping.items())


def _barycenter(points):
    n = len(points)
    return tuple(sum(col, ZERO) / n for col in zip(*points))


def face_map_via(source: FaceLattice, target_h: HRep, target: FaceLattice,
                 mapper) -> FaceMap:
    """Face map determined by mapping one relative-interior witness per face."""
    mapping: dict[Face, Face] = {}
    empty_target = next(f for f in target.faces if f.dim < 0)
    for f in source.faces:
        if f.dim < 0:
            mapping[f] = empty_target
            continue
        witness = _barycenter([source.vertices[i] for i in sorted(f.vertex_ids)])
        mapping[f] = target.minimal_face_containing(target_h, mapper(witness))
    return FaceMap(source, target, mapping)


def _polytope_data(poset: MarkedPoset, t: Parameter):
    h = hrep_general(poset, t, projected=True)
    v = vertices(h)
    if v.rays:
        raise UnsupportedUnbounded("degeneration maps are implemented for polytopes")
    return h, v, face_lattice(h, v)


def degeneration_map(poset: MarkedPoset, pair: DegenerationPair) -> FaceMap:
    """The induced face-lattice map of the continuous degeneration u -> u2."""
    require_valid(poset)
    h_u, v_u, lat_u = _polytope_data(poset, pair.source)
    h_t, v_t, lat_t = _polytope_data(poset, pair.target)
    coords = h_u.coords

    def mapper(point):
        y = transfer_theta_projected(poset, pair.source, pair.target,
                                     dict(zip(coords, point)))
        return tuple(y[c] for c in coords)

    return face_map_via(lat_u, h_t, lat_t, mapper)


def check_fvector_domination(poset: MarkedPoset, pair: DegenerationPair) -> dict:
    """Componentwise f-vector comparison f_i(target) <= f_i(source)."""
    _, _, lat_u = _polytope_data(poset, pair.source)
    _, _, lat_t = _polytope_data(poset, pair.target)
    fu, ft = lat_u.f_vector(), lat_t.f_vector()
    width = max(len(fu), len(ft))
    pad = lambda f: f + (0,) * (width - len(f))
    ok = all(a <= b for a, b in zip(pad(ft), pad(fu)))
    return {"check": "f-vector-domination",
            "source_t": {k: rat_str(v) for k, v in sorted(pair.source.values.items())},
            "target_t": {k: rat_str(v) for k, v in sorted(pair.target.values.items())},
            "source_f_vector": list(fu),
            "target_f_vector": list(ft),
            "pass": ok}


def composition_law(poset: MarkedPoset, u: Parameter, u2: Parameter,
                    u3: Parameter) -> bool:
    """dg_{u,u3} == dg_{u2,u3} after dg_{u,u2} as maps of faces."""
    m12 = degeneration_map(poset, DegenerationPair(u, u2))
    m23 = degeneration_map(poset, DegenerationPair(u2, u3))
    m13 = degeneration_map(poset, DegenerationPair(u, u3))
    for f in m12.source.faces:
        if m13.mapping[f] != m23.mapping[m12.mapping[f]]:
            return False
    return True


# -- combinatorial-type sweeps ---------------------------------------------------

def incidence_matrix(lat: FaceLattice) -> tuple[int, int, frozenset[tuple[int, int]]]:
    """(#vertices, #facets, incidences) of the vertex-facet bipartite graph."""
    facets = lat.facets()
    nv = len(lat.vertices)
    pairs = {(v, fi) for fi, f in enumerate(facets) for v in f.vertex_ids}
    return nv, len(facets), frozenset(pairs)


def _refine(nr, nc, inc, rcol, ccol):
    rows_of = [set() for _ in range(nr)]
    cols_of = [set() for _ in range(nc)]
    for r, c in inc:
        rows_of[r].add(c)
        cols_of[c].add(r)
    while True:
        rsig = [(rcol[r], tuple(sorted(ccol[c] for c in rows_of[r]))) for r in range(nr)]
        csig = [(ccol[c], tuple(sorted(rcol[r] for r in cols_of[c]))) for c in range(nc)]
        rmap = {s: i for i, s in enumerate(sorted(set(rsig)))}
        cmap = {s: i for i, s in enumerate(sorted(set(csig)))}
        nrcol = [rmap[s] for s in rsig]
        nccol = [cmap[s] for s in csig]
        if nrcol == rcol and nccol == ccol:
            return rcol, ccol
        rcol, ccol = nrcol, nccol


def canonical_incidence(data) -> tuple:
    """Canonical form of a vertex-facet incidence bipartite graph.

    Sorted bi-degree refinement with individualization backtracking; exact
    (minimum over all compatible orderings).  Instances are desk-scale.
    """
    nr, nc, inc = data
    if nr == 0:
        return (0, nc, ())
    best: list[tuple | None] = [None]

    def rec(rcol, ccol):
        rcol, ccol = _refine(nr, nc, inc, rcol, ccol)
        classes: dict[tuple[str, int], list[int]] = {}
        for r in range(nr):
            classes.setdefault(("r", rcol[r]), []).append(r)
        for c in range(nc):
            classes.setdefault(("c", ccol[c]), []).append(c)
        split = min((k for k, v in classes.items() if len(v) > 1), default=None,
                    key=lambda k: (len(classes[k]), k))
        if split is None:
            rorder = sorted(range(nr), key=lambda r: rcol[r])
            corder = sorted(range(nc), key=lambda c: ccol[c])
            rpos = {r: i for i, r in enumerate(rorder)}
            cpos = {c: i for i, c in enumerate(corder)}
            form = (nr, nc, tuple(sorted((rpos[r], cpos[c]) for r, c in inc)))
            if best[0] is None or form < best[0]:
                best[0] = form
            return
        kind, _ = split
        for member in classes[split]:
            if kind == "r":
                nrcol = list(rcol)
                nrcol[member] = max(rcol) + 1
                rec(nrcol, list(ccol))
            else:
                nccol = list(ccol)
                nccol[member] = max(ccol) + 1
                rec(list(rcol), nccol)

    rec([0] * nr, [0] * nc)
    return best[0]


def lattices_isomorphic(a: FaceLattice, b: FaceLattice) -> bool:
    """Combinatorial equivalence via canonical vertex-facet incidence forms."""
    if a.f_vector() != b.f_vector():
        return False
    return canonical_incidence(incidence_matrix(a)) == canonical_incidence(incidence_matrix(b))


def sample_face_parameters(poset: MarkedPoset, fixed: dict[str, Fraction],
                           samples: int = 3) -> list[Parameter]:
    """Deterministic interior samples of a hypercube face (fixed coords 0/1)."""
    free = sorted(p for p in poset.unmarked if p not in fixed)
    out = []
    for j in range(1, samples + 1):
        values = dict(fixed)
        n = len(free)
        for i, p in enumerate(free):
            values[p] = Fraction(i + 1, n + j + 1)
        out.append(Parameter(values))
    return out


def combinatorial_type_sweep(poset: MarkedPoset, fixed: dict[str, Fraction],
                             samples: int = 3) -> dict:
    """Sample interior parameters of a hypercube face and assert the polytopes
    are pairwise combinatorially isomorphic."""
    for p, v in fixed.items():
        if Fraction(v) not in (0, 1):
            raise ValueError("hypercube faces are described by fixing coordinates to 0/1")
    params = sample_face_parameters(poset, {p: Fraction(v) for p, v in fixed.items()},
                                    samples)
    if not params or not params[0].values:
        params = [Parameter({})]
    lattices = []
    for t in params:
        _, _, lat = _polytope_data(poset, t)
        lattices.append(lat)
    ok = all(lattices_isomorphic(lattices[0], lat) for lat in lattices[1:])
    return {"check": "combinatorial-type",
            "face": {k: rat_str(Fraction(v)) for k, v in sorted(fixed.items())},
            "samples": [{k: rat_str(v) for k, v in sorted(t.values.items())} for t in params],
            "f_vectors": [list(lat.f_vector()) for lat in lattices],
            "pass": ok}


# -- Hibi-Li comparison ------------------------------------------------------------

def hibi_li_check(poset: MarkedPoset, part_a: Partition, part_b: Partition,
                  tame: bool | None = None) -> dict:
    """Compare f-vectors of O_{C,O} and O_{C',O'} for C contained in C'.

    Reports the componentwise comparison (the conjectured domination) and, for
    single-element moves on tame posets, the facet-count delta against the
    (k-1)(l-1) formula.
    """
    check_partition(poset, part_a)
    check_partition(poset, part_b)
    if not part_a.C <= part_b.C:
        raise ValueError("need C subset of C'")
    h_a = hrep_chain_order(poset, part_a, projected=True)
    h_b = hrep_chain_order(poset, part_b, projected=True)
    lat_a = face_lattice(h_a, vertices(h_a))
    lat_b = face_lattice(h_b, vertices(h_b))
    fa, fb = lat_a.f_vector(), lat_b.f_vector()
    width = max(len(fa), len(fb))
    pad = lambda f: f + (0,) * (width - len(f))
    dominated = all(x <= y for x, y in zip(pad(fa), pad(fb)))
    report = {"check": "hibi-li",
              "C": sorted(part_a.C), "C'": sorted(part_b.C),
              "f_vector_CO": list(fa), "f_vector_C'O'": list(fb),
              "dominated": dominated}
    moved = part_b.C - part_a.C
    if len(moved) == 1:
        q = next(iter(moved))
        if tame is None:
            tame = is_tame(poset)
        if tame:
            predicted = facet_count_delta(poset, part_a, q)
            actual = facet_count(h_b) - facet_count(h_a)
            report["moved"] = q
            report["star"] = q in star_elements(poset, part_a.C, part_a.O)
            report["facet_delta_formula"] = predicted
            report["facet_delta_lp"] = actual
            report["facet_delta_match"] = predicted == actual
    return report


# -- the pentagon-to-rectangle regression fixture -----------------------------------

def contdeg_hrep(t) -> HRep:
    """The toy deformation: 0 <= x1 <= 2, 0 <= x2, x2 <= (1-t)x1 + 1,
    x2 <= (1-t)(2-x1) + 1.  Pentagon at t=0, rectangle at t=1."""
    t = Fraction(t)
    return make_hrep(
        ("x1", "x2"),
        [],
        [((Fraction(-1), ZERO), ZERO, ("x1-low",)),
         ((ONE, ZERO), Fraction(2), ("x1-high",)),
         ((ZERO, Fraction(-1)), ZERO, ("x2-low",)),
         ((-(ONE - t), ONE), ONE, ("roof-left",)),
         (((ONE - t), ONE), ONE + 2 * (ONE - t), ("roof-right",))],
    )


def contdeg_rho(t, point):
    """The deformation map of the fixture (piecewise-rational, exact)."""
    t = Fraction(t)
    x1, x2 = Fraction(point[0]), Fraction(point[1])
    if x1 <= 1:
        return (x1, x2 * ((ONE - t) * x1 + 1) / (x1 + 1))
    return (x1, x2 * ((ONE - t) * (2 - x1) + 1) / ((2 - x1) + 1))


def contdeg_face_map() -> FaceMap:
    """Face map of the pentagon -> rectangle degeneration via rho_1."""
    h0 = contdeg_hrep(0)
    h1 = contdeg_hrep(1)
    v0, v1 = vertices(h0), vertices(h1)
    lat0, lat1 = face_lattice(h0, v0), face_lattice(h1, v1)
    return face_map_via(lat0, h1, lat1, lambda p: contdeg_rho(1, p))

import random
from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from conftest import (make_chain_poset, make_double_star,
                      random_marked_poset, random_parameter, random_point)
from mpp.family import (Parameter, Partition, chain_tight, eliminate_redundancy,
                        facet_count, facet_count_delta, generic_parameter,
                        hrep_chain_order, hrep_general, hypercube_vertices,
                        is_tame, maximizing_relation, one_parameter,
                        partition_of_parameter,
                        transfer_phi, transfer_phi_projected, transfer_psi,
                        transfer_psi_closed, transfer_psi_projected,
                        transfer_theta, unimodular_move, zero_parameter, iota)
from mpp.geometry import EmptyPolyhedron, apply_affine, face_lattice, vertices
from mpp.lattice import lattice_points
from mpp.poset import MarkedPoset, saturated_chains_to


def F(n, d=1):
    return Fraction(n, d)


def tiny_marked_chain():
    return MarkedPoset(("a", "p", "b"), frozenset([("a", "p"), ("p", "b")]),
                       {"a": 0, "b": 1})


# -- H-representations ----------------------------------------------------------

def constraint_set(h):
    return {(c.coeffs, c.rhs) for c in h.inequalities}


def test_hrep_general_marked_order_case():
    poset = tiny_marked_chain()
    h = hrep_general(poset, zero_parameter(poset))
    # {0 <= x_p, x_p <= 1} in the projected space
    assert h.coords == ("p",)
    assert constraint_set(h) == {((F(-1),), F(0)), ((F(1),), F(1))}


def test_hrep_general_t_one():
    poset = tiny_marked_chain()
    h = hrep_general(poset, one_parameter(poset))
    # chain a < p gives 0 <= x_p; chain a < p < b gives x_p + t_p*0 <= 1
    assert constraint_set(h) == {((F(-1),), F(0)), ((F(1),), F(1))}


def test_hrep_general_fractional_expansion(ex52):
    t = Parameter({"p": F(0), "q": F(0), "r": F(1, 2)})
    h = hrep_general(ex52, t)
    chain_0pr = next(c for c in h.inequalities
                     if c.origin == ("chain", "0", "p", "r"))
    # (1 - 1/2)(t_p x_0 + x_p) <= x_r projects to x_p/2 - x_r <= 0
    idx = {c: i for i, c in enumerate(h.coords)}
    assert chain_0pr.coeffs[idx["p"]] == F(1, 2)
    assert chain_0pr.coeffs[idx["r"]] == F(-1)
    assert chain_0pr.coeffs[idx["q"]] == 0
    assert chain_0pr.rhs == 0


def test_hrep_chain_order_pure_order_case(ex52):
    part = Partition(frozenset(), frozenset(ex52.unmarked))
    h = hrep_chain_order(ex52, part)
    t0 = hrep_general(ex52, zero_parameter(ex52))
    assert set(vertices(h).vertices) == set(vertices(t0).vertices)
    # syntactically: exactly one x_a <= x_b row per cover, marked pairs omitted
    full = hrep_chain_order(ex52, part, projected=False)
    idx = {c: i for i, c in enumerate(full.coords)}
    expected = set()
    for a, b in ex52.covers:
        if a in ex52.marked and b in ex52.marked:
            continue
        row = [F(0)] * len(full.coords)
        row[idx[a]] += F(1)
        row[idx[b]] -= F(1)
        expected.add((tuple(row), F(0)))
    assert {(c.coeffs, c.rhs) for c in full.inequalities} == expected


def test_hrep_chain_order_full_chain_case():
    poset = make_chain_poset()
    part = Partition(frozenset({"p", "q"}), frozenset())
    h = hrep_chain_order(poset, part)
    assert constraint_set(h) == {((F(-1), F(0)), F(0)), ((F(0), F(-1)), F(0)),
                                 ((F(1), F(1)), F(2))}


def test_hypercube_vertex_consistency_random():
    rnd = random.Random(99)
    done = 0
    while done < 8:
        poset = random_marked_poset(rnd, rnd.randint(3, 6), bounded=False,
                                    max_unmarked=4)
        done += 1
        for t in hypercube_vertices(poset):
            part = partition_of_parameter(poset, t)
            va = vertices(hrep_general(poset, t))
            vb = vertices(hrep_chain_order(poset, part))
            assert set(va.vertices) == set(vb.vertices)
            assert set(va.rays) == set(vb.rays)


# -- transfer maps ----------------------------------------------------------------

def test_phi_identity_at_zero(ex52):
    x = {e: F(3, 7) for e in ex52.elements}
    assert transfer_phi(ex52, zero_parameter(ex52), x) == x
    assert transfer_psi(ex52, zero_parameter(ex52), x) == x


def test_phi_chain_poset_hand_computed():
    poset = MarkedPoset(("a", "p", "q", "b"),
                        frozenset([("a", "p"), ("p", "q"), ("q", "b")]),
                        {"a": 0, "b": 2})
    t = Parameter({"p": 1, "q": 1})
    x = {"a": F(0), "p": F(1), "q": F(2), "b": F(2)}
    y = transfer_phi(poset, t, x)
    assert y == {"a": F(0), "p": F(1), "q": F(1), "b": F(2)}


def test_phi_ex52_vertex(ex52):
    t = Parameter({"p": F(1, 3), "q": F(1, 5), "r": F(1, 2)})
    x = iota(ex52, {"p": F(2), "q": F(2), "r": F(2)})
    y = transfer_phi(ex52, t, x)
    assert y["r"] == F(1)  # 2 - (1/2) max(2, 2, 2)
    assert y["p"] == F(2) and y["q"] == F(2)  # covers are marked at 0


def test_psi_single_element_closed_form():
    poset = tiny_marked_chain()
    t = Parameter({"p": F(2, 3)})
    y = {"a": F(0), "p": F(5), "b": F(1)}
    out = transfer_psi_closed(poset, t, y)
    assert out["p"] == F(5) + F(2, 3) * 0


def test_psi_closed_t_one_cumulative():
    poset = make_chain_poset()
    t = one_parameter(poset)
    y = {"a": F(1), "p": F(2), "q": F(3), "b": F(9)}
    out = transfer_psi_closed(poset, t, y)
    assert out["p"] == 3 and out["q"] == 6  # cumulative sums


@settings(max_examples=40, deadline=None)
@given(st.integers(0, 10_000))
def test_transfer_bijectivity_random(seed):
    rnd = random.Random(seed)
    poset = random_marked_poset(rnd, rnd.randint(2, 8), bounded=False)
    t = random_parameter(rnd, poset)
    x = random_point(rnd, poset.elements)
    assert transfer_psi(poset, t, transfer_phi(poset, t, x)) == x
    assert transfer_phi(poset, t, transfer_psi(poset, t, x)) == x
    assert transfer_psi_closed(poset, t, x) == transfer_psi(poset, t, x)


def test_theta_identity_and_composition(ex52):
    rnd = random.Random(4)
    t = random_parameter(rnd, ex52)
    t2 = random_parameter(rnd, ex52)
    t3 = random_parameter(rnd, ex52)
    for _ in range(20):
        y = random_point(rnd, ex52.elements)
        assert transfer_theta(ex52, t, t, y) == y
        lhs = transfer_theta(ex52, t2, t3, transfer_theta(ex52, t, t2, y))
        assert lhs == transfer_theta(ex52, t, t3, y)
        assert transfer_theta(ex52, zero_parameter(ex52), t, y) == transfer_phi(ex52, t, y)


def test_projected_round_trip(ex52):
    rnd = random.Random(8)
    h = hrep_general(ex52, zero_parameter(ex52))
    v = vertices(h)
    t = random_parameter(rnd, ex52)
    for p in v.vertices:
        x = dict(zip(h.coords, p))
        y = transfer_phi_projected(ex52, t, x)
        assert set(y) == set(ex52.unmarked)
        back = transfer_psi_projected(ex52, t, y)
        assert back == {k: Fraction(v) for k, v in x.items()}


def test_phi_maps_into_o_t(ex52):
    rnd = random.Random(21)
    h0 = hrep_general(ex52, zero_parameter(ex52))
    v0 = vertices(h0)
    for _ in range(10):
        t = random_parameter(rnd, ex52)
        ht = hrep_general(ex52, t)
        for p in v0.vertices:
            y = transfer_phi_projected(ex52, t, dict(zip(h0.coords, p)))
            assert ht.contains(tuple(y[c] for c in ht.coords))


def test_phi_maps_into_o_t_random_posets():
    # random interior points of O(P,lambda) via convex combinations of vertices
    rnd = random.Random(55)
    done = 0
    while done < 6:
        poset = random_marked_poset(rnd, rnd.randint(3, 6), bounded=True,
                                    max_unmarked=4)
        if not poset.unmarked:
            continue
        h0 = hrep_general(poset, zero_parameter(poset))
        try:
            v0 = vertices(h0)
        except EmptyPolyhedron:
            continue
        done += 1
        for _ in range(5):
            t = random_parameter(rnd, poset)
            ht = hrep_general(poset, t)
            weights = [F(rnd.randint(0, 5)) for _ in v0.vertices]
            s = sum(weights, F(0))
            if s == 0:
                continue
            x = tuple(sum((w * p[k] for w, p in zip(weights, v0.vertices)), F(0)) / s
                      for k in range(len(h0.coords)))
            y = transfer_phi_projected(poset, t, dict(zip(h0.coords, x)))
            assert ht.contains(tuple(y[c] for c in ht.coords))


# -- maximizing relation and tightness ----------------------------------------------

def test_maximizing_relation_ex52(ex52):
    x = iota(ex52, {"p": F(2), "q": F(2), "r": F(3)})
    rel = maximizing_relation(ex52, x)
    r_pairs = {qp for qp in rel if qp[1] == "r"}
    assert r_pairs == {("2", "r"), ("p", "r"), ("q", "r")}


def test_maximizing_relation_strict_chain():
    poset = make_chain_poset()
    x = {"a": F(0), "p": F(1), "q": F(2), "b": F(3)}
    rel = maximizing_relation(poset, x)
    assert rel == frozenset({("a", "p"), ("p", "q"), ("q", "b")})


def test_maximizing_relation_translation_invariant(ex52):
    rnd = random.Random(5)
    x = random_point(rnd, ex52.elements)
    shifted = {k: v + F(7, 3) for k, v in x.items()}
    assert maximizing_relation(ex52, x) == maximizing_relation(ex52, shifted)


def _tight_by_substitution(poset, t, x, chain):
    from mpp.family import chain_coefficients
    y = transfer_phi(poset, t, x)
    coeffs = chain_coefficients(poset, t, chain)
    lhs = sum((c * y[e] for e, c in coeffs.items()), F(0))
    return lhs == y[chain.target]


def test_tightness_interior_point_false(ex52):
    t = generic_parameter(ex52)
    x = iota(ex52, {"p": F(1, 2), "q": F(1), "r": F(7, 2)})  # interior of O
    for p in ex52.elements:
        for chain in saturated_chains_to(ex52, p):
            assert not chain_tight(ex52, t, x, chain)


def test_tightness_matches_substitution_random():
    rnd = random.Random(17)
    trials = 0
    while trials < 1000:
        poset = random_marked_poset(rnd, rnd.randint(3, 6), bounded=True)
        h = hrep_general(poset, zero_parameter(poset))
        try:
            v = vertices(h)
        except EmptyPolyhedron:
            continue
        t = random_parameter(rnd, poset)
        chains = [c for p in poset.elements for c in saturated_chains_to(poset, p)]
        for vx in v.vertices:
            x = iota(poset, dict(zip(h.coords, vx)))
            for chain in chains:
                trials += 1
                assert chain_tight(poset, t, x, chain) == \
                    _tight_by_substitution(poset, t, x, chain)


def test_tightness_t_zero_reduces_to_constancy():
    poset = make_chain_poset()
    t = zero_parameter(poset)
    chain = saturated_chains_to(poset, "q")[0]  # (a, p) -> q
    x1 = {"a": F(0), "p": F(1), "q": F(1), "b": F(2)}
    x2 = {"a": F(0), "p": F(1), "q": F(2), "b": F(2)}
    assert chain_tight(poset, t, x1, chain)       # x_q = x_p
    assert not chain_tight(poset, t, x2, chain)


# -- redundancy, tameness, facet counts ------------------------------------------------

def test_duplicate_constraint_removed():
    from mpp.geometry import make_hrep
    h = make_hrep(("x",), [],
                  [((F(1),), F(1), ("a",)), ((F(1),), F(1), ("b",)),
                   ((F(-1),), F(0), ("c",))])
    out = eliminate_redundancy(h)
    assert len(out.inequalities) == 2


def test_redundant_cover_inequality_dropped():
    # the cover p < q is redundant (witness a <= q, p <= b, lambda(a) >= lambda(b));
    # its order-description inequality x_p <= x_q is implied and gets dropped
    poset = MarkedPoset(("a", "b", "c", "p", "q"),
                        frozenset([("c", "p"), ("a", "q"), ("p", "q"), ("p", "b")]),
                        {"a": 2, "b": 1, "c": 0})
    h = hrep_general(poset, zero_parameter(poset))
    out = eliminate_redundancy(h)
    kept_origins = {c.origin for c in out.inequalities}
    assert ("chain", "c", "p", "q") not in kept_origins
    assert len(out.inequalities) == len(h.inequalities) - 1


def test_implicit_equality_detected():
    from mpp.geometry import make_hrep
    h = make_hrep(("x", "y"), [],
                  [((F(1), F(0)), F(1), ()), ((F(-1), F(0)), F(-1), ()),
                   ((F(0), F(1)), F(1), ()), ((F(0), F(-1)), F(0), ())])
    out = eliminate_redundancy(h)
    assert len(out.equations) == 1
    assert len(out.inequalities) == 2


def test_eliminate_redundancy_empty():
    from mpp.geometry import make_hrep
    h = make_hrep(("x",), [], [((F(1),), F(0), ()), ((F(-1),), F(-1), ())])
    with pytest.raises(EmptyPolyhedron):
        eliminate_redundancy(h)


def test_ex52_chain_order_irredundant(ex52):
    for t in hypercube_vertices(ex52):
        part = partition_of_parameter(ex52, t)
        h = hrep_chain_order(ex52, part)
        out = eliminate_redundancy(h)
        assert len(out.inequalities) == len(h.inequalities)
        assert not out.equations


def test_tame_regular_ranked(ex52):
    assert is_tame(ex52)


def test_constant_interval_not_tame():
    poset = MarkedPoset(("a", "p", "b", "t"),
                        frozenset([("a", "p"), ("p", "b"), ("b", "t")]),
                        {"a": 1, "b": 1, "t": 2})
    assert not is_tame(poset)


def test_one_element_tame():
    assert is_tame(tiny_marked_chain())


def test_facet_count_delta_trivial_k1():
    poset = make_chain_poset()
    part = Partition(frozenset({"p"}), frozenset({"q"}))
    assert facet_count_delta(poset, part, "q") == 0


def test_facet_count_delta_star_element():
    poset = make_double_star()
    part = Partition(frozenset({"c1", "c2", "d1", "d2"}), frozenset({"q"}))
    assert facet_count_delta(poset, part, "q") == 1  # (2-1)(2-1)
    h_before = hrep_chain_order(poset, part)
    part_after = Partition(part.C | {"q"}, frozenset())
    h_after = hrep_chain_order(poset, part_after)
    assert facet_count(h_after) - facet_count(h_before) == 1


def test_facet_delta_matches_lp_on_ex52(ex52):
    unmarked = frozenset(ex52.unmarked)
    import itertools
    for k in range(3):
        for C in itertools.combinations(sorted(unmarked), k):
            part = Partition(frozenset(C), unmarked - frozenset(C))
            for q in sorted(part.O):
                predicted = facet_count_delta(ex52, part, q)
                part2 = Partition(part.C | {q}, part.O - {q})
                actual = (facet_count(hrep_chain_order(ex52, part2))
                          - facet_count(hrep_chain_order(ex52, part)))
                assert predicted == actual, (C, q)


# -- unimodular moves ---------------------------------------------------------------

def test_unimodular_move_non_star(ex52):
    # r has a single upward chain (r < 4), so moving it is unimodular
    part = Partition(frozenset({"p", "q"}), frozenset({"r"}))
    amap = unimodular_move(ex52, part, "r")
    assert amap is not None and amap.is_unimodular
    h = hrep_chain_order(ex52, part)
    image = apply_affine(amap, h)
    part2 = Partition(frozenset({"p", "q", "r"}), frozenset())
    target = hrep_chain_order(ex52, part2)
    assert set(vertices(image).vertices) == set(vertices(target).vertices)
    lat_a = face_lattice(h, vertices(h))
    lat_b = face_lattice(image, vertices(image))
    assert lat_a.f_vector() == lat_b.f_vector()
    assert len(lattice_points(h)) == len(lattice_points(image))


def test_unimodular_move_star_returns_none():
    poset = make_double_star()
    part = Partition(frozenset({"c1", "c2", "d1", "d2"}), frozenset({"q"}))
    assert unimodular_move(poset, part, "q") is None


def test_unimodular_move_unmarked_chain_endpoint():
    # single downward chain s < c < q whose stop s is an order element, so the
    # map subtracts coordinates only (no translation)
    poset = MarkedPoset(("a", "s", "c", "q", "z"),
                        frozenset([("a", "s"), ("s", "c"), ("c", "q"), ("q", "z")]),
                        {"a": 0, "z": 3})
    part = Partition(frozenset({"c"}), frozenset({"s", "q"}))
    amap = unimodular_move(poset, part, "q")
    assert amap is not None and amap.is_unimodular
    assert all(x == 0 for x in amap.offset)
    image = apply_affine(amap, hrep_chain_order(poset, part))
    target = hrep_chain_order(poset, Partition(frozenset({"c", "q"}), frozenset({"s"})))
    assert set(vertices(image).vertices) == set(vertices(target).vertices)

import random
from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from conftest import random_marked_poset
from mpp.poset import (MarkedPoset, PosetError, constant_intervals,
                       contract_constant_intervals, is_regular,
                       non_redundant_covers, rank_function,
                       remove_redundant_covers, saturated_chains_to,
                       star_elements, validate)


def mp(elements, covers, marking):
    return MarkedPoset(tuple(elements), frozenset(covers), marking)


# -- validation ----------------------------------------------------------------

def test_validate_smallest_legal_instance():
    p = mp("apb", [("a", "p"), ("p", "b")], {"a": 0, "b": 1})
    assert validate(p) == []


def test_validate_non_order_preserving():
    p = mp("apb", [("a", "p"), ("p", "b")], {"a": 2, "b": 1})
    assert any("order-preserving" in msg for msg in validate(p))


def test_validate_cycle():
    p = mp("ab", [("a", "b"), ("b", "a")], {"a": 0})
    assert any("cycle" in msg for msg in validate(p))


def test_validate_non_covering_pair():
    p = mp("abc", [("a", "b"), ("b", "c"), ("a", "c")], {"a": 0, "c": 2})
    assert any("non-covering" in msg for msg in validate(p))


def test_validate_unmarked_minimal():
    p = mp("ab", [("a", "b")], {"b": 1})
    assert any("minimal" in msg for msg in validate(p))


# -- saturated chains -----------------------------------------------------------

def test_chains_to_r_in_example(ex52):
    chains = saturated_chains_to(ex52, "r")
    assert [c.below for c in chains] == [("0", "p"), ("0", "q"), ("2",)]
    assert all(c.target == "r" for c in chains)


def test_chains_on_chain_poset(chain_poset):
    chains = saturated_chains_to(chain_poset, "q")
    assert [c.below for c in chains] == [("a", "p")]


def test_chains_to_marked_minimal(ex52):
    assert saturated_chains_to(ex52, "0") == []


# -- constant intervals ----------------------------------------------------------

def test_constant_interval_block():
    p = mp("apb", [("a", "p"), ("p", "b")], {"a": 1, "b": 1})
    assert constant_intervals(p) == [("a", "b", "p")]


def test_no_constant_interval():
    p = mp("apb", [("a", "p"), ("p", "b")], {"a": 0, "b": 1})
    assert constant_intervals(p) == []


def test_stacked_intervals_merge():
    # a < p < b < q < c, all markings equal: one merged block
    p = mp("apbqc", [("a", "p"), ("p", "b"), ("b", "q"), ("q", "c")],
           {"a": 1, "b": 1, "c": 1})
    assert constant_intervals(p) == [("a", "b", "c", "p", "q")]


def test_contract_identity_when_strict(ex52):
    result, elem_map = contract_constant_intervals(ex52)
    assert result.covers == ex52.covers
    assert elem_map == {e: e for e in ex52.elements}


def test_contract_full_collapse():
    p = mp("apb", [("a", "p"), ("p", "b")], {"a": 1, "b": 1})
    result, elem_map = contract_constant_intervals(p)
    assert result.elements == ("a",)
    assert result.marking == {"a": Fraction(1)}
    assert elem_map == {"a": "a", "p": "a", "b": "a"}


def test_contract_idempotent():
    rnd = random.Random(5)
    p = mp("apbqc", [("a", "p"), ("p", "b"), ("b", "q"), ("q", "c")],
           {"a": 1, "b": 1, "c": 3})
    once, _ = contract_constant_intervals(p)
    assert constant_intervals(once) == []
    twice, emap = contract_constant_intervals(once)
    assert twice.covers == once.covers and twice.marking == once.marking


# -- redundant covers -------------------------------------------------------------

def test_remove_redundant_regular_unchanged(ex52):
    assert remove_redundant_covers(ex52).covers == ex52.covers


def test_remove_redundant_cover_removed():
    # cover p < q witnessed by marked a <= q, p <= b with lambda(a) >= lambda(b)
    p = mp(["a", "b", "c", "p", "q"],
           [("c", "p"), ("a", "q"), ("p", "q"), ("p", "b")],
           {"a": 2, "b": 1, "c": 0})
    out = remove_redundant_covers(p)
    assert ("p", "q") not in out.covers
    assert out.covers == non_redundant_covers(p)


def test_remove_redundant_requires_strict():
    p = mp("apb", [("a", "p"), ("p", "b")], {"a": 1, "b": 1})
    with pytest.raises(PosetError):
        remove_redundant_covers(p)


def test_diamond_regular(diamond):
    assert is_regular(diamond)
    assert remove_redundant_covers(diamond).covers == diamond.covers


def test_remove_redundant_rerun_is_identity():
    p = mp(["a", "b", "c", "p", "q"],
           [("c", "p"), ("a", "q"), ("p", "q"), ("p", "b")],
           {"a": 2, "b": 1, "c": 0})
    out = remove_redundant_covers(p)
    again = remove_redundant_covers(out)
    assert again.covers == out.covers and again.elements == out.elements


@settings(max_examples=30, deadline=None)
@given(st.integers(0, 10_000))
def test_remove_redundant_matches_bruteforce(seed):
    import warnings

    rnd = random.Random(seed)
    p = random_marked_poset(rnd, rnd.randint(3, 7))
    if not p.strictly_marked:
        return
    with warnings.catch_warnings(record=True) as caught:
        warnings.simplefilter("always")
        out = remove_redundant_covers(p)
    assert is_regular(out)
    # one-pass brute force over all marked pairs, on the original poset
    expected = set()
    for (a, b) in p.covers:
        redundant = any(
            p.leq(m1, b) and p.leq(a, m2) and m1 != m2
            and p.marking[m1] >= p.marking[m2]
            for m1 in p.marking for m2 in p.marking)
        if not redundant:
            expected.add((a, b))
    if not caught:
        assert out.covers == frozenset(expected)
    else:
        # order sensitivity: the fixed point is a superset of the one-pass set
        assert frozenset(expected) <= out.covers


def test_remove_redundant_order_sensitivity_diagnostic():
    """Two incomparable marked elements with equal values below a common
    element witness each other's covers; only one cover can be removed and a
    diagnostic warning fires.  The polyhedra are unchanged either way."""
    import warnings

    from mpp.family import hrep_general, zero_parameter, one_parameter
    from mpp.geometry import vertices
    from mpp.poset import RedundancyOrderWarning

    p = mp(["a", "b", "q", "t"], [("a", "q"), ("b", "q"), ("q", "t")],
           {"a": 0, "b": 0, "t": 1})
    assert p.strictly_marked
    with pytest.warns(RedundancyOrderWarning):
        out = remove_redundant_covers(p)
    assert is_regular(out)
    assert ("b", "q") in out.covers and ("a", "q") not in out.covers
    for t in (zero_parameter(p), one_parameter(p)):
        v_before = vertices(hrep_general(p, t))
        v_after = vertices(hrep_general(out, t))
        assert set(v_before.vertices) == set(v_after.vertices)
        assert set(v_before.rays) == set(v_after.rays)


# -- star elements ----------------------------------------------------------------

def test_ex52_r_not_star(ex52):
    assert star_elements(ex52, C={"p", "q"}, O={"r"}) == ()


def test_double_star_element():
    from conftest import make_double_star
    p = make_double_star()
    assert star_elements(p, C={"c1", "c2", "d1", "d2"}, O={"q"}) == ("q",)


def test_unique_chain_excluded(chain_poset):
    assert star_elements(chain_poset, C={"p"}, O={"q"}) == ()


def test_star_with_empty_C(diamond):
    # C empty: star element iff >= 2 covers below and >= 2 above in P* | O
    p = mp(["a", "b", "p", "x", "y"],
           [("a", "p"), ("b", "p"), ("p", "x"), ("p", "y")],
           {"a": 0, "b": 0, "x": 2, "y": 3})
    assert star_elements(p, C=set(), O={"p"}) == ("p",)
    assert star_elements(diamond, C=set(), O={"p", "q"}) == ()


def test_star_partition_checked(ex52):
    with pytest.raises(PosetError):
        star_elements(ex52, C={"p"}, O={"r"})


def _plain_star_elements(poset):
    """The coarse notion: >= 2 upper covers and >= 2 saturated chains from a
    marked element (unmarked interior)."""
    out = []
    for p in poset.unmarked:
        if len(poset.upper_covers(p)) >= 2 and len(saturated_chains_to(poset, p)) >= 2:
            out.append(p)
    return tuple(sorted(out))


@settings(max_examples=25, deadline=None)
@given(st.integers(0, 10_000))
def test_admissible_partition_star_matches_plain_notion(seed):
    """For C an order ideal of the unmarked elements and q minimal in O, the
    chain-order star property coincides with the plain star-element notion."""
    rnd = random.Random(seed)
    p = random_marked_poset(rnd, rnd.randint(3, 7))
    unmarked = set(p.unmarked)
    # C = unmarked part of a random order ideal
    seed_elems = [e for e in p.elements if rnd.random() < 0.5]
    ideal = {e for e in p.elements if any(p.leq(e, s) for s in seed_elems)}
    C = frozenset(ideal & unmarked)
    O = frozenset(unmarked - C)
    plain = _plain_star_elements(p)
    stars = star_elements(p, C, O)
    for q in O:
        if all(not p.lt(o, q) for o in O if o != q):  # q minimal in O
            assert (q in stars) == (q in plain)


# -- rank functions ----------------------------------------------------------------

def test_rank_chain(chain_poset):
    assert rank_function(chain_poset) == {"a": 0, "p": 1, "q": 2, "b": 3}


def test_rank_unequal_paths_absent():
    # two saturated paths of different lengths join at the top
    p = mp(["a", "b", "c", "e", "d"],
           [("a", "b"), ("b", "d"), ("a", "c"), ("c", "e"), ("e", "d")],
           {"a": 0, "d": 3})
    assert validate(p) == []
    assert rank_function(p) is None


def test_rank_ex52(ex52):
    rk = rank_function(ex52)
    assert rk == {"0": 0, "2": 1, "p": 1, "q": 1, "r": 2, "3": 2, "4": 3}
    assert all(rk[q] == rk[p] + 1 for p, q in ex52.covers)


def test_rank_lambda_condition():
    # rank equations solvable, but an incomparable marked element in a second
    # component violates lambda growth across ranks
    p = mp(["a", "p", "t", "b"], [("a", "p"), ("p", "t")],
           {"a": 0, "t": 1, "b": 5})
    assert validate(p) == []
    assert rank_function(p) is None


def test_rank_per_component_normalization():
    p = mp(["a", "p", "b", "c", "q"], [("a", "p"), ("p", "b"), ("c", "q")],
           {"a": 0, "b": 2, "c": 0, "q": 1})
    rk = rank_function(p)
    assert rk is not None and rk["a"] == 0 and rk["c"] == 0


# -- structural properties -----------------------------------------------------------

@settings(max_examples=30, deadline=None)
@given(st.integers(0, 10_000))
def test_random_posets_valid_and_covering(seed):
    rnd = random.Random(seed)
    p = random_marked_poset(rnd, rnd.randint(2, 8))
    assert validate(p) == []
    ext = p.linear_extension()
    pos = {e: i for i, e in enumerate(ext)}
    assert all(pos[a] < pos[b] for a, b in p.covers)

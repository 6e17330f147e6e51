import itertools

import pytest
from hypothesis import given, settings, strategies as st

from garside_workbench.coxeter import CoxeterGroup, dual_interval
from garside_workbench.examples import spherical_graph
from garside_workbench.poset import (
    Bound,
    FinitePoset,
    LabeledPoset,
    PosetError,
    find_bowtie,
    is_balanced,
    is_group_like,
    is_lattice,
)


def bowtie_poset():
    return FinitePoset.from_pairs("abcd", [("a", "c"), ("a", "d"), ("b", "c"), ("b", "d")])


def boolean_lattice(letters):
    els = [frozenset(c) for k in range(len(letters) + 1) for c in itertools.combinations(letters, k)]
    P = FinitePoset.from_relation(els, lambda x, y: x <= y)
    return LabeledPoset.from_function(P, lambda x, y: y - x)


def test_minimal_bowtie_found():
    assert find_bowtie(bowtie_poset()) == ("a", "b", "c", "d")


def test_boolean_lattice_has_no_bowtie():
    assert find_bowtie(boolean_lattice("xy").poset) is None


def test_dual_interval_a3_has_no_bowtie():
    G = spherical_graph("A3")
    D = dual_interval(G, None, CoxeterGroup.of(G).element([0, 1, 2]))
    assert find_bowtie(D.poset()) is None


def test_chain_is_lattice():
    P = FinitePoset.from_pairs([0, 1, 2], [(0, 1), (1, 2)])
    assert is_lattice(P)


def test_bowtie_with_bounds_is_not_lattice():
    v = is_lattice(bowtie_poset(), bounded=False)
    assert not v
    assert set(v.bowtie) == set("abcd")


def test_meet_join_basics():
    P = boolean_lattice([1, 2]).poset
    one, two = frozenset([1]), frozenset([2])
    assert P.join(one, two) == frozenset([1, 2])
    assert P.meet(one, one) == one
    B = bowtie_poset()
    assert B.join_status("a", "b") is Bound.NO_EXTREMAL_BOUND
    assert B.join_status("c", "d") is Bound.NO_COMMON_BOUND


def test_order_axioms_enforced():
    with pytest.raises(PosetError):
        FinitePoset(["x", "y"], [0b11, 0b11])


def test_group_like_and_balanced_on_boolean():
    L = boolean_lattice("xyz")
    assert is_group_like(L)
    assert is_balanced(L)


def test_group_like_violation():
    P = FinitePoset.from_pairs(
        ["0", "x", "y", "1"], [("0", "x"), ("x", "1"), ("0", "y"), ("y", "1")])
    lab = {("0", "x"): "s", ("x", "1"): "t", ("0", "y"): "s", ("y", "1"): "u",
           ("0", "1"): "st"}
    L = LabeledPoset.from_function(P, lambda a, b: "e" if a == b else lab[(a, b)])
    v = is_group_like(L)
    assert not v and v.witness is not None


def test_unbalanced_two_chain():
    P = FinitePoset.from_pairs(["0", "x", "1"], [("0", "x"), ("x", "1")])
    lab = {("0", "x"): "a", ("x", "1"): "b", ("0", "1"): "c"}
    L = LabeledPoset.from_function(P, lambda a, b: "e" if a == b else lab[(a, b)])
    assert not is_balanced(L)


@st.composite
def random_posets(draw, max_n=7):
    n = draw(st.integers(1, max_n))
    # random strict relation compatible with 0 < 1 < ... < n-1, then transitive closure
    rel = {(i, j) for i in range(n) for j in range(i + 1, n) if draw(st.booleans())}
    leq = {(i, i) for i in range(n)} | rel
    changed = True
    while changed:
        changed = False
        for (a, b), (c, d) in itertools.product(list(leq), repeat=2):
            if b == c and (a, d) not in leq:
                leq.add((a, d))
                changed = True
    perm = draw(st.permutations(range(n)))
    return FinitePoset.from_relation(list(perm), lambda x, y: (x, y) in leq)


def brute_force_lattice(P):
    els = list(P.elements)
    for x, y in itertools.product(els, repeat=2):
        ub = [z for z in els if P.leq(x, z) and P.leq(y, z)]
        lubs = [z for z in ub if all(P.leq(z, w) for w in ub)]
        lb = [z for z in els if P.leq(z, x) and P.leq(z, y)]
        glbs = [z for z in lb if all(P.leq(w, z) for w in lb)]
        if len(lubs) != 1 or len(glbs) != 1:
            return False
    return True


@settings(max_examples=300, deadline=None)
@given(random_posets())
def test_is_lattice_matches_exhaustive_meets_and_joins(P):
    if P.is_bounded():
        assert bool(is_lattice(P)) == brute_force_lattice(P)
    assert bool(is_lattice(P, bounded=False)) == brute_force_lattice(P.with_bounds())


@settings(max_examples=200, deadline=None)
@given(random_posets())
def test_no_bowtie_iff_bounded_pairs_have_joins_and_meets(P):
    Q = P.with_bounds()
    assert (find_bowtie(Q) is None) == brute_force_lattice(Q)


@settings(max_examples=30, deadline=None)
@given(st.permutations(range(8)))
def test_label_renaming_invariance(perm):
    L = boolean_lattice("xyz")
    names = {}
    f = lambda lab: names.setdefault(lab, perm[len(names) % 8] * 100 + len(names))
    R = L.relabel(f)
    assert bool(is_group_like(R)) == bool(is_group_like(L))
    assert is_balanced(R) == is_balanced(L)


def test_dot_export():
    text = bowtie_poset().to_dot()
    assert text.startswith("digraph hasse {") and text.count("->") == 4

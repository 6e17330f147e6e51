import pytest
from hypothesis import given, settings, strategies as st

from garside_workbench.partialmul import (
    PartialMulTable,
    TableError,
    boolean_table,
    check_garside_criterion,
    check_lattice_criterion,
    doubled_poset,
    free_table,
    is_mixed_join_violation,
    presentation_of_doubled,
    presentation_of_table,
    verify_axioms,
)
from garside_workbench.poset import is_balanced, is_group_like, is_lattice
from garside_workbench.presentations import PositivePresentation, subword_table

from oracles import axiom_failures, criterion_failures, table_dict


def test_free_table_passes_everything():
    T = free_table(["a", "b"])
    assert verify_axioms(T).passed
    assert check_garside_criterion(T).passed
    assert check_lattice_criterion(T).passed


def test_left_cancellation_failure():
    T = PartialMulTable(["e", "u", "v", "w", "z"], "e",
                        [("e", x, x) for x in "euvwz"] + [(x, "e", x) for x in "uvwz"]
                        + [("u", "v", "z"), ("u", "w", "z")])
    rep = verify_axioms(T)
    assert ("left_cancellative", ("u", "v", "w")) in rep.violations


def test_positivity_failure():
    T = PartialMulTable(["e", "u", "x"], "e",
                        [("e", x, x) for x in "eux"] + [(x, "e", x) for x in "ux"] + [("u", "x", "e")])
    assert "positivity" in verify_axioms(T).failed_conditions()


def test_identity_failure_reported():
    T = PartialMulTable(["e", "a"], "e", [("e", "e", "e"), ("e", "a", "a")])
    assert verify_axioms(T).first("identity") == ("a", "e")


def test_orders_of_free_table():
    T = free_table(["a", "b"])
    L = T.left_order()
    assert all(L.leq("e", x) for x in T.elements)
    assert not L.leq("a", "b") and not L.leq("b", "a")


def test_subword_table_left_order_is_prefix_order():
    P = PositivePresentation(["a", "b", "c"], [(("a", "b", "c"), ("c", "a", "b"))])
    T = subword_table(P)
    L = T.left_order()
    assert L.leq("a", "a*b") and L.leq("a*b", "a*b*c")
    assert L.leq("c", "a*b*c")  # c a b is the other representative
    assert not L.leq("b", "a*b")


def test_bowtie_in_left_order_fails_semilattice():
    # x, y both left-divide z and w with nothing in between
    els = ["e", "x", "y", "p", "q", "z", "w"]
    prods = [("e", u, u) for u in els] + [(u, "e", u) for u in els[1:]]
    prods += [("x", "p", "z"), ("y", "q", "z"), ("x", "q", "w"), ("y", "p", "w")]
    T = PartialMulTable(els, "e", prods)
    assert verify_axioms(T).passed
    rep = check_lattice_criterion(T)
    assert rep.first("meet_semilattice_left") is not None
    assert not is_lattice(doubled_poset(T).poset)


def test_doubled_poset_of_free_table():
    T = free_table(["a", "b"])
    E = doubled_poset(T)
    assert len(E.poset) == 2 * len(T)
    assert not E.poset.leq(("a", 0), ("a", 1))
    assert E.poset.leq(("a", 0), ("e", 1))
    assert is_lattice(E.poset)
    assert is_group_like(E) and is_balanced(E)


def test_presentations():
    T = free_table(["a", "b"])
    P = presentation_of_table(T)
    assert all("e" in l + r for l, r in P.relations)
    B = boolean_table("xy")
    PB = presentation_of_table(B)
    # x y = {x,y} = y x, so the generators commute in G_U
    xy = [r for l, r in PB.relations if set(l) == {"x", "y"}]
    assert len(xy) == 2 and xy[0] == xy[1]
    assert len(presentation_of_doubled(T).generators) == 2 * len(T)


def test_json_roundtrip_and_errors():
    T = boolean_table("xy")
    T2 = PartialMulTable.from_json(T.to_json())
    assert T2.to_json() == T.to_json()
    with pytest.raises(TableError):
        PartialMulTable.from_json({"elements": ["e"]})
    with pytest.raises(TableError):
        PartialMulTable.from_json({"elements": ["e"], "identity": "e", "products": [["e", "e", "q"]]})


# --- oracle comparisons ---------------------------------------------------

@st.composite
def raw_tables(draw):
    n = draw(st.integers(2, 5))
    els = ["e"] + [f"x{i}" for i in range(1, n)]
    prod = {}
    if draw(st.booleans()):
        for x in els:
            prod[("e", x)] = x
            prod[(x, "e")] = x
    for a in els:
        for b in els:
            if (a, b) not in prod and draw(st.integers(0, 3)) == 0:
                prod[(a, b)] = draw(st.sampled_from(els))
    return PartialMulTable(els, "e", [(a, b, c) for (a, b), c in prod.items()])


@settings(max_examples=300, deadline=None)
@given(raw_tables())
def test_axioms_match_oracle(T):
    assert set(verify_axioms(T).failed_conditions()) == axiom_failures(T.elements, T.identity, table_dict(T))


@st.composite
def presentations(draw):
    n = draw(st.integers(2, 4))
    S = [chr(ord("a") + i) for i in range(n)]
    word = st.lists(st.sampled_from(S), min_size=1, max_size=3).map(tuple)
    k = draw(st.integers(1, 3))
    rels = []
    for _ in range(k):
        l, r = draw(word), draw(word)
        if l != r:
            rels.append((l, r))
    return PositivePresentation(S, rels)


def subword_tables_passing_axioms(P):
    try:
        T = subword_table(P)
    except TableError:
        return None
    return T if verify_axioms(T).passed else None


@settings(max_examples=150, deadline=None)
@given(presentations())
def test_criterion_matches_oracle(P):
    T = subword_tables_passing_axioms(P)
    if T is None:
        return
    rep = check_garside_criterion(T)
    assert set(rep.failed_conditions()) == criterion_failures(T.elements, table_dict(T))
    for a, b, u, v in (w for c, w in rep.violations if c == "mixed_join"):
        assert is_mixed_join_violation(T, a, b, u, v)
    E = doubled_poset(T)
    assert is_group_like(E) and is_balanced(E)
    if rep.passed:
        assert is_lattice(E.poset)


def test_criterion_oracle_on_boolean_and_free():
    for T in (boolean_table("xyz"), free_table(["a", "b", "c"])):
        assert criterion_failures(T.elements, table_dict(T)) == set()
        assert check_garside_criterion(T).passed


@settings(max_examples=40, deadline=None)
@given(presentations(), st.randoms(use_true_random=False))
def test_relabeling_commutes(P, rnd):
    T = subword_tables_passing_axioms(P)
    if T is None:
        return
    names = list(T.elements)
    shuffled = names[:]
    rnd.shuffle(shuffled)
    f = dict(zip(names, (f"n{i}_{s}" for i, s in enumerate(shuffled))))
    R = T.relabel(lambda x: f[x])
    assert verify_axioms(R).passed
    a = check_garside_criterion(T)
    b = check_garside_criterion(R)
    assert a.failed_conditions() == b.failed_conditions()
    assert a.counts == b.counts
    assert bool(is_lattice(doubled_poset(T).poset)) == bool(is_lattice(doubled_poset(R).poset))


def test_abelian_boolean_E_is_lattice():
    T = boolean_table("xyz")
    E = doubled_poset(T)
    assert len(E.poset) == 16
    assert is_lattice(E.poset)

"""Simple sets U inside Coxeter groups and the hypotheses that make G_U x Z Garside.

U is a union of dual intervals [1, delta_I] over spherical subsets I.  The
partial product u.v is the Coxeter product when it lands in U and reflection
lengths add.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from typing import Iterable, Optional, Sequence

import numpy as np

from .coxeter import (
    CoxElement,
    CoxeterGraph,
    CoxeterGroup,
    DualInterval,
    NotFiniteError,
    OrientationError,
    _key,
    _matmul,
    carter_length,
    compatible_order,
    dynkin_components,
    interval_by_reflections,
    is_spherical,
    linear_orders,
    spherical_subsets,
)
from .partialmul import CheckReport, PartialMulTable, identity_name
from .poset import Bound, iter_bits


class GraphCheckError(ValueError):
    """Raised when a construction needs graph hypotheses that fail."""


def _names(G: CoxeterGraph, I: Iterable[int]) -> tuple[str, ...]:
    return tuple(G.vertices[i] for i in sorted(I))


@dataclass
class SimpleSet:
    """A union of dual intervals with per-element reflection length and origins."""

    graph: CoxeterGraph
    group: CoxeterGroup
    members: list[CoxElement] = field(default_factory=list)
    lengths: list[int] = field(default_factory=list)
    origins: list[set[tuple[int, ...]]] = field(default_factory=list)
    deltas: dict[tuple[int, ...], CoxElement] = field(default_factory=dict)
    index: dict[bytes, int] = field(default_factory=dict)
    _table: Optional[PartialMulTable] = None
    _names: Optional[list[str]] = None

    def __len__(self) -> int:
        return len(self.members)

    def add_interval(self, D: DualInterval) -> None:
        self.deltas[D.I] = D.delta
        for w, n in zip(D.elements, D.lengths):
            k = self.index.get(w.key)
            if k is None:
                self.index[w.key] = len(self.members)
                self.members.append(w)
                self.lengths.append(n)
                self.origins.append({D.I})
            else:
                if self.lengths[k] != n:
                    raise AssertionError(
                        f"reflection length of {self.name(k)} differs between parabolics "
                        f"{sorted(self.origins[k])} and {D.I}")
                self.origins[k].add(D.I)
        self._table = None
        self._names = None

    def find(self, w: CoxElement) -> Optional[int]:
        return self.index.get(w.key)

    @property
    def reflections(self) -> list[int]:
        """Positions of R_U, the reflections lying in U."""
        return [k for k, n in enumerate(self.lengths) if n == 1]

    def support(self, k: int) -> frozenset[int]:
        return self.members[k].support()

    def word(self, k: int) -> list[str]:
        return self.members[k].names()

    def name(self, k: int) -> str:
        return "*".join(self.word(k)) or identity_name(self.graph.vertices)

    def names(self) -> list[str]:
        if self._names is None:
            self._names = [self.name(k) for k in range(len(self))]
        return self._names

    def table(self) -> PartialMulTable:
        if self._table is None:
            self._table = partial_multiplication(self)
        return self._table

    def to_json(self) -> dict:
        T = self.table()
        return {
            "graph": self.graph.to_json(),
            "members": [{"word": self.word(k), "length": self.lengths[k],
                         "origins": [list(_names(self.graph, I)) for I in sorted(self.origins[k])]}
                        for k in range(len(self))],
            "table": T.to_json(),
        }

    @classmethod
    def from_json(cls, data: dict) -> "SimpleSet":
        """Rebuild from a certificate; members are recomputed from their reduced words."""
        G = CoxeterGraph.from_json(data["graph"])
        grp = CoxeterGroup.of(G)
        U = cls(G, grp)
        pos = {v: i for i, v in enumerate(G.vertices)}
        for m in data["members"]:
            w = grp.element([pos[x] for x in m["word"]])
            if w.key in U.index:
                raise ValueError(f"duplicate member {m['word']!r} in certificate")
            U.index[w.key] = len(U.members)
            U.members.append(w)
            U.lengths.append(int(m["length"]))
            U.origins.append({tuple(sorted(pos[x] for x in I)) for I in m["origins"]})
        if "table" in data:
            U._table = PartialMulTable.from_json(data["table"])
        return U


def _products_by_row(U: SimpleSet) -> list[dict[int, int]]:
    """rows[a][b] = position of the Coxeter product of members a, b when it lies in U."""
    d = U.group.d
    n = U.group.n
    if not U.members:
        return []
    cols = np.concatenate([w.mat[:, ::d] for w in U.members], axis=1)
    rows: list[dict[int, int]] = []
    for a, w in enumerate(U.members):
        P = _matmul(w.mat, cols)
        r = {}
        for b in range(len(U)):
            blk = P[:, b * n:(b + 1) * n]
            k = U.index.get(_cols_key(blk))
            if k is not None:
                r[b] = k
        rows.append(r)
    return rows


def _cols_key(cols: np.ndarray) -> bytes:
    if cols.dtype == object:
        return repr(cols.tolist()).encode()
    return np.ascontiguousarray(cols, dtype=np.int64).tobytes()


def partial_multiplication(U: SimpleSet) -> PartialMulTable:
    """u.v = uv whenever uv lies in U and |uv| = |u| + |v|."""
    names = U.names()
    prods = []
    for a, r in enumerate(_products_by_row(U)):
        for b, k in r.items():
            if U.lengths[k] == U.lengths[a] + U.lengths[b]:
                prods.append((names[a], names[b], names[k]))
    return PartialMulTable(names, names[U.find(U.group.identity)], prods)


# ---------------------------------------------------------------------------
# constructions


def cyclic_order(G: CoxeterGraph) -> Optional[list[int]]:
    """Vertex order around the Dynkin cycle, or None if the diagram is not one cycle."""
    n = G.rank
    if n < 3:
        return None
    nbrs = [[j for j in range(n) if G.dynkin_adjacent(i, j)] for i in range(n)]
    if any(len(x) != 2 for x in nbrs):
        return None
    if all(G.dynkin_adjacent(i, (i + 1) % n) for i in range(n)):
        return list(range(n))
    order = [0, min(nbrs[0])]
    while len(order) < n:
        a, b = order[-2], order[-1]
        nxt = [x for x in nbrs[b] if x != a][0]
        if nxt == 0:
            return None
        order.append(nxt)
    if not G.dynkin_adjacent(order[-1], 0):
        return None
    return order


def is_cyclic_type(G: CoxeterGraph, I: Optional[Sequence[int]] = None) -> bool:
    if I is not None:
        G = G.induced(I)
    if cyclic_order(G) is None:
        return False
    return all(is_spherical(G, [j for j in range(G.rank) if j != i]) for i in range(G.rank))


def cyclic_orientation(G: CoxeterGraph) -> CoxeterGraph:
    """Orient every large edge along the cyclic order: s_i -> s_{i+1}."""
    order = cyclic_order(G)
    if order is None:
        raise GraphCheckError("Dynkin diagram is not a cycle")
    orient = {}
    n = len(order)
    for t in range(n):
        a, b = order[t], order[(t + 1) % n]
        if G.is_large(a, b):
            orient[(G.vertices[a], G.vertices[b])] = (G.vertices[a], G.vertices[b])
    return G.with_orientation(orient)


def _guard(U: SimpleSet, max_elements: Optional[int]) -> None:
    if max_elements is not None and len(U) > max_elements:
        raise NotFiniteError(f"simple set exceeded {max_elements} elements")


def cyclic_simple_set(G: CoxeterGraph, max_elements: Optional[int] = None) -> SimpleSet:
    """Union over i of [1, delta_i] with delta_i = s_{i+1} ... s_n s_1 ... s_{i-1}."""
    if not is_cyclic_type(G):
        raise GraphCheckError("graph is not of cyclic type")
    order = cyclic_order(G)
    grp = CoxeterGroup.of(G)
    U = SimpleSet(G, grp)
    n = len(order)
    for t in range(n):
        word = [order[(t + k) % n] for k in range(1, n)]
        delta = grp.element(word)
        U.add_interval(interval_by_reflections(grp, tuple(sorted(word)), delta))
        _guard(U, max_elements)
    return U


def glued_simple_set(G: CoxeterGraph, override_graph_check: bool = False,
                     max_elements: Optional[int] = None) -> SimpleSet:
    """Union of [1, delta_I] over all spherical I, with delta_I compatible with the orientation."""
    if G.orientation is None:
        if G.large_edges():
            raise OrientationError("glued construction needs an orientation of the large edges")
        G = G.with_orientation({})
    if not override_graph_check:
        rep = check_gluing_hypotheses(G)
        if not rep.passed:
            raise GraphCheckError(f"graph hypotheses fail: {rep.failed_conditions()}")
    grp = CoxeterGroup.of(G)
    U = SimpleSet(G, grp)
    for I in spherical_subsets(G):
        delta = grp.element(compatible_order(G, I))
        if not I:
            U.add_interval(DualInterval(grp, I, delta, [grp.identity], [0], [1]))
        else:
            U.add_interval(interval_by_reflections(grp, I, delta))
        _guard(U, max_elements)
    return U


def linear_simple_set(G: CoxeterGraph) -> SimpleSet:
    """[1, s_1 s_2 ... s_n] in vertex order."""
    grp = CoxeterGroup.of(G)
    U = SimpleSet(G, grp)
    I = tuple(range(G.rank))
    U.add_interval(interval_by_reflections(grp, I, grp.element(I)))
    return U


# ---------------------------------------------------------------------------
# reflection-level checks


def _reflection_products(U: SimpleSet, upto: int) -> list[set[bytes]]:
    """layers[k] = keys of all Coxeter products of k elements of R_U, for k <= upto."""
    grp = U.group
    d = grp.d
    refl = np.stack([U.members[k].mat for k in U.reflections]) if U.reflections else None
    layers = [{grp.identity.key}]
    mats = [grp.identity.mat]
    for _ in range(upto):
        if refl is None:
            layers.append(set())
            mats = []
            continue
        seen: dict[bytes, np.ndarray] = {}
        for M in mats:
            for P in _matmul(M, refl):
                key = _key(P, d)
                if key not in seen:
                    seen[key] = P
        layers.append(set(seen))
        mats = list(seen.values())
    return layers


def check_reflection_factorization(U: SimpleSet, max_witnesses: int = 20) -> CheckReport:
    """Every u is a product r_1.....r_n over R_U, and reflection factorizations of
    members have their prefix r_1...r_{n-1} and suffix r_2...r_n in U."""
    rep = CheckReport("reflection_factorization", max_witnesses=max_witnesses)
    _factorization_conditions(U, rep)
    return rep


def _factorization_conditions(U: SimpleSet, rep: CheckReport) -> None:
    T = U.table()
    names = U.names()
    RU = set(U.reflections)
    order = sorted(range(len(U)), key=lambda k: U.lengths[k])
    # r.y = x with r in R_U
    pre: list[list[int]] = [[] for _ in range(len(U))]
    for r in RU:
        for y, x in T.rows[r].items():
            pre[x].append(y)
    ok = [False] * len(U)
    for x in order:
        if U.lengths[x] == 0:
            ok[x] = U.members[x].is_identity()
        else:
            ok[x] = any(ok[y] for y in pre[x])
        if not ok[x]:
            rep.add("factorization", (names[x],))
    top = max(U.lengths, default=0)
    layers = _reflection_products(U, max(top - 1, 0))
    for x in range(len(U)):
        n = U.lengths[x]
        if n < 2:
            continue
        w = U.members[x]
        for r in U.reflections:
            rm = U.members[r]
            for side, z in (("prefix", w * rm), ("suffix", rm * w)):
                if z.key in layers[n - 1] and z.key not in U.index:
                    rep.add(f"{side}_closure", (names[x], names[r]))


def check_reflection_criterion(U: SimpleSet, max_witnesses: int = 20) -> CheckReport:
    """Reflection-level conditions implying that the doubled poset is a lattice.

    1-2: reflection factorizations with prefix/suffix closure;
    3: reflections with a common upper bound have a join (left and right);
    4-5: joins of reflections are stable under multiplication by a in U;
    6: for a, b, u, v in R_U and x in U with a.x.u, a.x.v, b.x.u, b.x.v
       all defined, u, v have a left join or a, b a right join.
    """
    rep = CheckReport("reflection_criterion", max_witnesses=max_witnesses)
    _factorization_conditions(U, rep)
    T = U.table()
    names = U.names()
    try:
        L, R = T.left_order(), T.right_order()
    except ValueError as exc:
        rep.add("orders", (str(exc),))
        return rep
    RU = U.reflections
    ru_mask = sum(1 << r for r in RU)
    for side, P in (("left", L), ("right", R)):
        for r1, r2 in itertools.combinations(RU, 2):
            if P.up[r1] & P.up[r2] and isinstance(P.join_idx(r1, r2), Bound):
                rep.add(f"reflection_join_{side}", (names[r1], names[r2]))
    for a in range(len(U)):
        row = T.row_mask[a]
        cand = [u for u in RU if row >> u & 1]
        for u, v in itertools.combinations(cand, 2):
            w = L.join_idx(u, v)
            if not isinstance(w, Bound) and not row >> w & 1:
                rep.add("left_join_stable", (names[a], names[u], names[v], names[w]))
        col = T.col_mask[a]
        cand = [u for u in RU if col >> u & 1]
        for u, v in itertools.combinations(cand, 2):
            w = R.join_idx(u, v)
            if not isinstance(w, Bound) and not col >> w & 1:
                rep.add("right_join_stable", (names[a], names[u], names[v], names[w]))
    left_joinable: dict[int, int] = {}
    right_joinable: dict[int, int] = {}

    def joinable(P, cache, u):
        m = cache.get(u)
        if m is None:
            m = 0
            for v in RU:
                if not isinstance(P.join_idx(u, v), Bound):
                    m |= 1 << v
            cache[u] = m
        return m

    for x in range(len(U)):
        lefts = [a for a in RU if x in T.rows[a]]
        after = {a: T.row_mask[T.rows[a][x]] & ru_mask for a in lefts}
        for a, b in itertools.combinations(lefts, 2):
            common = after[a] & after[b]
            if common & (common - 1) == 0:
                continue
            if joinable(R, right_joinable, a) >> b & 1:
                continue
            for u in iter_bits(common):
                rest = common & ~((1 << (u + 1)) - 1) & ~joinable(L, left_joinable, u)
                for v in iter_bits(rest):
                    rep.add("mixed_join", (names[a], names[b], names[u], names[v], names[x]))
    return rep


def check_support_additivity(U: SimpleSet, max_witnesses: int = 20) -> CheckReport:
    """Supp(a.b) = Supp(a) | Supp(b) whenever a.b is defined."""
    rep = CheckReport("support_additivity", max_witnesses=max_witnesses)
    T = U.table()
    supp = [U.support(k) for k in range(len(U))]
    names = U.names()
    for a, r in enumerate(T.rows):
        for b, c in r.items():
            if supp[c] != supp[a] | supp[b]:
                rep.add("support_union", (names[a], names[b]))
    return rep


# ---------------------------------------------------------------------------
# graph-level hypotheses of the gluing construction


def _is_clique(G: CoxeterGraph, I: Sequence[int]) -> bool:
    return all(G.m(i, j) != float("inf") for i, j in itertools.combinations(I, 2))


def _perp(G: CoxeterGraph, I: Sequence[int]) -> list[int]:
    s = set(I)
    return [x for x in range(G.rank) if x not in s and all(G.commute(x, y) for y in I)]


def _cycle_is_consistent(G: CoxeterGraph, I: Sequence[int]) -> bool:
    H = G.induced(I)
    order = cyclic_order(H)
    idx = sorted(I)
    n = len(order)
    dirs = set()
    for t in range(n):
        a, b = idx[order[t]], idx[order[(t + 1) % n]]
        arrow = G.arrow(a, b)
        if arrow is None:
            return False
        dirs.add(arrow)
    return len(dirs) == 1


def four_cycles(G: CoxeterGraph) -> list[tuple[int, int, int, int]]:
    """4-cycles x1 x2 x3 x4 of the presentation graph, one per vertex set and cyclic order."""
    n = G.rank
    edge = lambda i, j: G.m(i, j) != float("inf")
    out = []
    for a in range(n):
        for b, c, d in itertools.permutations(range(a + 1, n), 3):
            if b < d and edge(a, b) and edge(b, c) and edge(c, d) and edge(d, a):
                out.append((a, b, c, d))
    return out


def _toward(G: CoxeterGraph, x: int, y: int) -> bool:
    """The edge {x, y} is not large, or is oriented towards x."""
    if not G.is_large(x, y):
        return True
    return G.arrow(y, x) is True


def check_gluing_hypotheses(G: CoxeterGraph, orientation: Optional[dict] = None,
                            max_witnesses: int = 20) -> CheckReport:
    """Graph conditions for the glued construction.

    cliques: every complete subgraph is a join of a cyclic-type and a spherical graph;
    perp: the commuting complement of each cyclic-type induced subgraph is spherical;
    orientation_cycle: each cyclic-type subgraph is oriented consistently around its circle;
    four_cycle_diagonal: a 4-cycle whose antipodal pair sees only non-large edges or
    edges pointing at it has a diagonal.
    """
    if orientation is not None:
        G = G.with_orientation(orientation)
    rep = CheckReport("gluing_hypotheses", max_witnesses=max_witnesses)
    if G.orientation is None and G.large_edges():
        rep.add("orientation_missing", tuple(sorted(sorted(p) for p in G.large_edges())))
        return rep
    n = G.rank
    cyclic: list[tuple[int, ...]] = []
    for k in range(1, n + 1):
        for I in itertools.combinations(range(n), k):
            if not _is_clique(G, I):
                continue
            bad = [c for c in dynkin_components(G, I) if not is_spherical(G, c)]
            if len(bad) > 1 or (bad and not is_cyclic_type(G, bad[0])):
                rep.add("cliques", _names(G, I))
            if k >= 3 and is_cyclic_type(G, I):
                cyclic.append(I)
    for I in cyclic:
        P = _perp(G, I)
        if not is_spherical(G, P):
            rep.add("perp", (_names(G, I), _names(G, P)))
        if not _cycle_is_consistent(G, I):
            rep.add("orientation_cycle", _names(G, I))
    for cyc in four_cycles(G):
        x1, x2, x3, x4 = cyc
        for p, q in ((x1, x3), (x2, x4)):
            nb = [y for y in cyc if y not in (p, q)]
            if not all(_toward(G, z, y) for z in (p, q) for y in nb):
                continue
            has_diag = G.m(x1, x3) != float("inf") or G.m(x2, x4) != float("inf")
            if not has_diag:
                rep.add("four_cycle_diagonal", tuple(G.vertices[i] for i in cyc) + ("antipodal", G.vertices[p], G.vertices[q]))
    return rep


# ---------------------------------------------------------------------------
# support lemmas on linear and spherical diagrams


def _min_minus_one_in(I: frozenset[int], J: frozenset[int]) -> bool:
    return bool(I) and (min(I) - 1) in J


def _irreducible(G: CoxeterGraph, I: frozenset[int]) -> bool:
    return len(dynkin_components(G, I)) == 1


def check_support_inclusion(G: CoxeterGraph, max_witnesses: int = 20,
                            extended: bool = True) -> CheckReport:
    """On a linear spherical diagram with delta = s_1 ... s_n: for u, v in R_U with u.v
    defined and min(Supp u) - 1 in Supp v, Supp u is contained in Supp v.

    With ``extended`` the same is checked for all u, v in U with irreducible supports.
    """
    rep = CheckReport("support_inclusion", max_witnesses=max_witnesses)
    U = linear_simple_set(G)
    T = U.table()
    names = U.names()
    supp = [U.support(k) for k in range(len(U))]
    RU = set(U.reflections)
    rep.info["reflections"] = len(RU)
    rep.info["pairs_checked"] = 0
    rep.info["pairs_checked_extended"] = 0
    for u, r in enumerate(T.rows):
        for v in r:
            if not (supp[u] and supp[v]):
                continue
            hyp = _min_minus_one_in(supp[u], supp[v])
            if u in RU and v in RU:
                rep.info["pairs_checked"] += 1
                if hyp and not supp[u] <= supp[v]:
                    rep.add("reflections", (names[u], names[v]))
            elif extended and _irreducible(G, supp[u]) and _irreducible(G, supp[v]):
                rep.info["pairs_checked_extended"] += 1
                if hyp and not supp[u] <= supp[v]:
                    rep.add("irreducible_supports", (names[u], names[v]))
    return rep


def check_support_orientation(G: CoxeterGraph, orientation: Optional[dict] = None,
                              max_witnesses: int = 20) -> CheckReport:
    """For reflections r1, r2 in [1, delta] with r1 r2 in [1, delta], letters
    s1 in Supp r1 - Supp r2 and s2 in Supp r2 - Supp r1 commute or s1 -> s2."""
    if orientation is not None:
        G = G.with_orientation(orientation)
    rep = CheckReport("support_orientation", max_witnesses=max_witnesses)
    grp = CoxeterGroup.of(G)
    I = tuple(range(G.rank))
    D = interval_by_reflections(grp, I, grp.element(compatible_order(G, I)))
    idx = D.index()
    refl = [k for k, n in enumerate(D.lengths) if n == 1]
    for a, b in itertools.permutations(refl, 2):
        r1, r2 = D.elements[a], D.elements[b]
        if (r1 * r2).key not in idx:
            continue
        s1, s2 = r1.support(), r2.support()
        for x in s1 - s2:
            for y in s2 - s1:
                if not (G.commute(x, y) or G.arrow(x, y) is True):
                    rep.add("dichotomy", ("".join(r1.names()), "".join(r2.names()),
                                          G.vertices[x], G.vertices[y]))
    return rep


def check_coxeter_element_nesting(G: CoxeterGraph, orientation: Optional[dict] = None,
                                  max_witnesses: int = 20) -> CheckReport:
    """delta_T' <= delta_T in the reflection-length prefix order, for spherical T' in T."""
    if orientation is not None:
        G = G.with_orientation(orientation)
    rep = CheckReport("coxeter_element_nesting", max_witnesses=max_witnesses)
    grp = CoxeterGroup.of(G)
    subsets = spherical_subsets(G)
    delta = {I: grp.element(compatible_order(G, I)) for I in subsets}
    for T in subsets:
        wT = delta[T]
        n = len(T)
        for k in range(len(T)):
            for Tp in itertools.combinations(T, k):
                w = delta[Tp]
                if len(Tp) + carter_length(w.inverse() * wT, T) != n:
                    rep.add("nesting", (_names(G, Tp), _names(G, T)))
    return rep


def unique_compatible_elements(G: CoxeterGraph, I: Sequence[int]) -> set[bytes]:
    """Keys of all Coxeter elements from compatible linear orders of I."""
    grp = CoxeterGroup.of(G)
    return {grp.element(order).key for order in linear_orders(G, I)}

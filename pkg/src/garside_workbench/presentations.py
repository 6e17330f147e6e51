"""Positive presentations: link graphs, T(5) and square checks, simple-set builders."""

from __future__ import annotations

import itertools
import json
from collections import defaultdict, deque
from dataclasses import dataclass, field
from typing import Any, Hashable, Optional

from .partialmul import CheckReport, PartialMulTable, identity_name

Word = tuple[Hashable, ...]

OUT, IN = "o", "i"


class PresentationError(ValueError):
    pass


@dataclass
class PositivePresentation:
    generators: list[Hashable]
    relations: list[tuple[Word, Word]]

    def __post_init__(self) -> None:
        self.generators = list(self.generators)
        gens = set(self.generators)
        if len(gens) != len(self.generators):
            raise PresentationError("duplicate generators")
        if any(isinstance(g, str) and "*" in g for g in gens):
            raise PresentationError("generator names may not contain '*'")
        rels = []
        for rel in self.relations:
            if len(rel) != 2:
                raise PresentationError(f"relation {rel!r} is not a pair of words")
            lhs, rhs = tuple(rel[0]), tuple(rel[1])
            for w in (lhs, rhs):
                if not w:
                    raise PresentationError("relation words must be nonempty")
                bad = [x for x in w if x not in gens]
                if bad:
                    raise PresentationError(f"unknown letters {bad!r} in relation")
            rels.append((lhs, rhs))
        self.relations = rels

    def words(self) -> list[Word]:
        return [w for rel in self.relations for w in rel]

    def to_json(self) -> dict:
        return {"generators": [str(g) for g in self.generators],
                "relations": [[list(map(str, l)), list(map(str, r))] for l, r in self.relations]}

    @classmethod
    def from_json(cls, data: Any) -> "PositivePresentation":
        if isinstance(data, str):
            data = json.loads(data)
        try:
            gens = data["generators"]
            rels = data["relations"]
        except (KeyError, TypeError):
            raise PresentationError("presentation needs 'generators' and 'relations'") from None
        if not isinstance(gens, list) or not isinstance(rels, list):
            raise PresentationError("generators and relations must be lists")
        out = []
        for r in rels:
            if not isinstance(r, list) or len(r) != 2:
                raise PresentationError(f"relation {r!r} must be [lhs, rhs]")
            l, rr = r
            if isinstance(l, str):
                l = list(l)
            if isinstance(rr, str):
                rr = list(rr)
            out.append((tuple(l), tuple(rr)))
        return cls(gens, out)


# ---------------------------------------------------------------------------
# link graph


@dataclass
class LinkGraph:
    """Vertices (s, 'o') and (s, 'i'); one edge per corner of each relator 2-cell."""

    vertices: list[tuple[Hashable, str]]
    edges: list[tuple[tuple[Hashable, str], tuple[Hashable, str]]] = field(default_factory=list)

    def adjacency(self) -> dict:
        adj: dict = {v: set() for v in self.vertices}
        for a, b in self.edges:
            if a != b:
                adj[a].add(b)
                adj[b].add(a)
        return adj

    def multiplicity(self) -> dict[frozenset, int]:
        m: dict[frozenset, int] = defaultdict(int)
        for a, b in self.edges:
            m[frozenset((a, b))] += 1
        return m

    def girth(self) -> float:
        """Shortest cycle length in the underlying simple graph (loops count as 1)."""
        if any(a == b for a, b in self.edges):
            return 1
        adj = self.adjacency()
        best = float("inf")
        for s in self.vertices:
            dist = {s: 0}
            parent = {s: None}
            q = deque([s])
            while q:
                x = q.popleft()
                for y in adj[x]:
                    if y not in dist:
                        dist[y] = dist[x] + 1
                        parent[y] = x
                        q.append(y)
                    elif parent[x] != y:
                        best = min(best, dist[x] + dist[y] + 1)
        return best

    def shortest_cycle(self) -> Optional[list]:
        """One cycle of minimal length, as a vertex list."""
        g = self.girth()
        if g == float("inf"):
            return None
        for a, b in self.edges:
            if a == b:
                return [a]
        adj = self.adjacency()
        for s in self.vertices:
            for t in adj[s]:
                # shortest path from t back to s avoiding the edge s-t
                prev = {t: None}
                q = deque([t])
                while q:
                    x = q.popleft()
                    for y in adj[x]:
                        if (x == t and y == s) or y in prev:
                            continue
                        prev[y] = x
                        q.append(y)
                if s in prev:
                    path = [s]
                    while path[-1] != t:
                        path.append(prev[path[-1]])
                    if len(path) == g:
                        return path
        return None

    def to_dot(self) -> str:
        name = lambda v: f'"{v[0]}^{v[1]}"'
        lines = ["graph link {"]
        for v in self.vertices:
            lines.append(f"  {name(v)};")
        for a, b in self.edges:
            lines.append(f"  {name(a)} -- {name(b)};")
        lines.append("}")
        return "\n".join(lines)


def link_graph(P: PositivePresentation) -> LinkGraph:
    """Whitehead link of the one-vertex presentation complex.

    For r = x_1..x_p and r' = y_1..y_q the 2-cell has corners
    (x_1^o, y_1^o) at the start, (x_j^i, x_{j+1}^o) and (y_j^i, y_{j+1}^o)
    inside each word, and (x_p^i, y_q^i) at the end: p + q corners in all.
    """
    verts = [(s, OUT) for s in P.generators] + [(s, IN) for s in P.generators]
    L = LinkGraph(verts)
    for r, rp in P.relations:
        L.edges.append(((r[0], OUT), (rp[0], OUT)))
        for w in (r, rp):
            for x, y in zip(w, w[1:]):
                L.edges.append(((x, IN), (y, OUT)))
        L.edges.append(((r[-1], IN), (rp[-1], IN)))
    return L


def _is_subword(u: Word, w: Word) -> bool:
    n = len(u)
    return any(w[i:i + n] == u for i in range(len(w) - n + 1))


def check_t5(P: PositivePresentation, max_witnesses: int = 20) -> CheckReport:
    """Word-level conditions plus link girth >= 5."""
    rep = CheckReport("t5", max_witnesses=max_witnesses)
    words = P.words()
    for i, (r, rp) in enumerate(P.relations):
        if r[0] == rp[0]:
            rep.add("common_prefix", (i, r, rp))
        if r[-1] == rp[-1]:
            rep.add("common_suffix", (i, r, rp))
    for a, w in enumerate(words):
        for b, x in enumerate(words):
            if a != b and _is_subword(w, x):
                rep.add("subword", (w, x))
    for end, cond in ((0, "first_letters"), (-1, "last_letters")):
        seen: dict[frozenset, int] = {}
        for i, (r, rp) in enumerate(P.relations):
            pair = frozenset((r[end], rp[end]))
            if len(pair) < 2:
                continue
            if pair in seen:
                rep.add(cond, (seen[pair], i, tuple(sorted(map(str, pair)))))
            else:
                seen[pair] = i
    L = link_graph(P)
    g = L.girth()
    rep.info["girth"] = g
    if g < 5:
        cyc = L.shortest_cycle()
        rep.add("girth", tuple(f"{s}^{t}" for s, t in cyc) if cyc else (g,))
    return rep


# ---------------------------------------------------------------------------
# simple sets from subwords


class _Classes:
    def __init__(self) -> None:
        self.parent: dict[Word, Word] = {}

    def find(self, w: Word) -> Word:
        self.parent.setdefault(w, w)
        while self.parent[w] != w:
            self.parent[w] = self.parent[self.parent[w]]
            w = self.parent[w]
        return w

    def union(self, a: Word, b: Word) -> None:
        ra, rb = self.find(a), self.find(b)
        if ra != rb:
            lo, hi = sorted((ra, rb), key=lambda w: (len(w), tuple(map(str, w))))
            self.parent[hi] = lo


def _word_name(w: Word, identity: str = "e") -> str:
    return "*".join(map(str, w)) if w else identity


def subword_table(P: PositivePresentation) -> PartialMulTable:
    """Subwords of the relator words with r_i ~ r'_i; u.v = uv when u, v are not
    relator classes and uv is a subword of a relator word."""
    words = P.words()
    subs: set[Word] = {()}
    for w in words:
        for i in range(len(w)):
            for j in range(i + 1, len(w) + 1):
                subs.add(w[i:j])
    for g in P.generators:
        subs.add((g,))
    cls = _Classes()
    for w in subs:
        cls.find(w)
    for r, rp in P.relations:
        cls.union(r, rp)
    # canonical representative: lexicographically least member
    members: dict[Word, list[Word]] = defaultdict(list)
    for w in subs:
        members[cls.find(w)].append(w)
    canon = {root: min(ws, key=lambda w: (len(w), tuple(map(str, w)))) for root, ws in members.items()}
    rep = {w: canon[cls.find(w)] for w in subs}
    relator_classes = {rep[w] for w in words}
    elements = sorted(set(rep.values()), key=lambda w: (len(w), tuple(map(str, w))))
    ident = identity_name(P.generators)
    name = {w: _word_name(w, ident) for w in elements}
    prods: set[tuple[str, str, str]] = set()
    for u in elements:
        prods.add((name[()], name[u], name[u]))
        prods.add((name[u], name[()], name[u]))
    subwords_of_relators = {w for w in subs if w and any(_is_subword(w, r) for r in words)}
    for w in subwords_of_relators:
        for k in range(1, len(w)):
            a, b = rep[w[:k]], rep[w[k:]]
            if a in relator_classes or b in relator_classes:
                continue
            prods.add((name[a], name[b], name[rep[w]]))
    return PartialMulTable([name[w] for w in elements], name[()], sorted(prods))


def t5_simple_table(P: PositivePresentation, require: bool = False) -> PartialMulTable:
    if require:
        rep = check_t5(P)
        if not rep.passed:
            raise PresentationError(f"presentation fails T(5) conditions: {rep.failed_conditions()}")
    return subword_table(P)


def _require_square(P: PositivePresentation) -> None:
    for i, (l, r) in enumerate(P.relations):
        if len(l) != 2 or len(r) != 2:
            raise PresentationError(f"relation {i} ({_word_name(l)} = {_word_name(r)}) is not of the form ab = cd")


def check_square(P: PositivePresentation, max_witnesses: int = 20) -> CheckReport:
    """Typed cycles in the link of a square presentation.

    No embedded 2-cycles of type (o,o) or (i,i), no 3-cycles of type (o,o,i) or
    (i,i,o), no 4-cycles of type (o,i,o,i).  Embedded means distinct vertices;
    two parallel edges form a 2-cycle.
    """
    _require_square(P)
    rep = CheckReport("square", max_witnesses=max_witnesses)
    L = link_graph(P)
    mult = L.multiplicity()
    adj = L.adjacency()
    fmt = lambda v: f"{v[0]}^{v[1]}"
    for pair, k in sorted(mult.items(), key=lambda x: sorted(map(fmt, x[0]))):
        if len(pair) == 2 and k >= 2:
            a, b = sorted(pair, key=fmt)
            if a[1] == b[1]:
                rep.add(f"two_cycle_{a[1]}{a[1]}", (fmt(a), fmt(b)))
    verts = sorted(L.vertices, key=fmt)
    for a, b, c in itertools.combinations(verts, 3):
        if b in adj[a] and c in adj[b] and a in adj[c]:
            types = sorted((a[1], b[1], c[1]))
            if types == [IN, OUT, OUT]:
                rep.add("three_cycle_ooi", (fmt(a), fmt(b), fmt(c)))
            elif types == [IN, IN, OUT]:
                rep.add("three_cycle_iio", (fmt(a), fmt(b), fmt(c)))
    outs = [v for v in verts if v[1] == OUT]
    ins = [v for v in verts if v[1] == IN]
    for o1, o2 in itertools.combinations(outs, 2):
        common = sorted(adj[o1] & adj[o2] & set(ins), key=fmt)
        for i1, i2 in itertools.combinations(common, 2):
            rep.add("four_cycle_oioi", (fmt(o1), fmt(i1), fmt(o2), fmt(i2)))
    return rep


def square_simple_table(P: PositivePresentation) -> PartialMulTable:
    """{e} + S + relator classes [ab], products from concatenation."""
    _require_square(P)
    rels = []
    seen = set()
    for l, r in P.relations:
        key = frozenset((l, r))
        if key not in seen:
            seen.add(key)
            rels.append((l, r))
    return subword_table(PositivePresentation(P.generators, rels))


def check_systolic_shape(P: PositivePresentation, max_witnesses: int = 20) -> CheckReport:
    """Every relation has the form ab = c with a, b, c generators; systolicity itself
    is not decided here."""
    rep = CheckReport("systolic_shape", max_witnesses=max_witnesses)
    rep.info["systolicity"] = "not verified: out of scope"
    for i, (l, r) in enumerate(P.relations):
        if sorted((len(l), len(r))) != [1, 2]:
            rep.add("shape", (i, _word_name(l), _word_name(r)))
    return rep


# ---------------------------------------------------------------------------
# examples


def surface_presentation(genus: int, orientable: bool = True) -> PositivePresentation:
    """Positive presentations of closed surface groups.

    Orientable genus g >= 2: a_1 b_1 h_2 ... h_{g-1} a_g b_g = a_g b_g h_2 ... h_{g-1} a_1 b_1
    and a_i b_i = h_i b_i a_i for 2 <= i <= g-1.  Orientable genus 1 gives ab = ba.
    Non-orientable genus 2 gives aa = bb; genus g >= 3 gives a_1^2 ... a_{g-1}^2 = a_g^2.
    """
    if orientable:
        if genus < 1:
            raise PresentationError("orientable genus must be >= 1")
        if genus == 1:
            return PositivePresentation(["a", "b"], [(("a", "b"), ("b", "a"))])
        g = genus
        a = [f"a{i}" for i in range(1, g + 1)]
        b = [f"b{i}" for i in range(1, g + 1)]
        h = [f"h{i}" for i in range(2, g)]
        gens = [x for pair in zip(a, b) for x in pair] + h
        lhs = (a[0], b[0], *h, a[-1], b[-1])
        rhs = (a[-1], b[-1], *h, a[0], b[0])
        rels = [(lhs, rhs)]
        for i in range(2, g):
            rels.append(((a[i - 1], b[i - 1]), (f"h{i}", b[i - 1], a[i - 1])))
        return PositivePresentation(gens, rels)
    if genus < 2:
        raise PresentationError("non-orientable genus must be >= 2 (the projective plane is excluded)")
    if genus == 2:
        return PositivePresentation(["a", "b"], [(("a", "a"), ("b", "b"))])
    a = [f"a{i}" for i in range(1, genus + 1)]
    lhs = tuple(x for s in a[:-1] for x in (s, s))
    return PositivePresentation(a, [(lhs, (a[-1], a[-1]))])


def gnm_presentation(n: int, m: int) -> PositivePresentation:
    """x_1 ... x_m = x_2 ... x_{m+1} = ... = x_n x_1 ... x_{m-1}, indices mod n."""
    if n < 1 or m < 1:
        raise PresentationError("n and m must be positive")
    x = [f"x{i}" for i in range(1, n + 1)]
    words = [tuple(x[(k + j) % n] for j in range(m)) for k in range(n)]
    rels = [(words[k], words[k + 1]) for k in range(n - 1) if words[k] != words[k + 1]]
    return PositivePresentation(x, rels)


def systolic_form(P: PositivePresentation, fresh: str = "y") -> PositivePresentation:
    """Introduce one generator per class of equal relator words: each word w = y_c."""
    cls = _Classes()
    for l, r in P.relations:
        cls.union(l, r)
    roots = sorted({cls.find(w) for w in P.words()}, key=lambda w: (len(w), tuple(map(str, w))))
    names = {root: (fresh if len(roots) == 1 else f"{fresh}{k + 1}") for k, root in enumerate(roots)}
    words = sorted(set(P.words()), key=lambda w: (len(w), tuple(map(str, w))))
    rels = [(w, (names[cls.find(w)],)) for w in words]
    return PositivePresentation(list(P.generators) + [names[r] for r in roots], rels)

"""Coxeter groups through their geometric representation.

Every group element is stored as an exact integer matrix: the Tits
representation lives over Z[beta], beta = 2cos(pi/L), and each entry of Z[beta]
is expanded into its d x d regular-representation block, so a rank-n group
acts on Z^(n*d).  Equality of elements is equality of these matrices, which is
exact equality in W because the Tits representation is faithful.
"""

from __future__ import annotations

import itertools
import json
import math
from dataclasses import dataclass
from functools import reduce
from typing import Any, Iterable, Iterator, Optional, Sequence

import numpy as np

from .field import CycReal, FieldContext, matrix_rank

INF = math.inf
DEFAULT_CAP = 1_200_000

_EXACT_FLOAT = 2 ** 52
_EXACT_INT = 2 ** 62


class NotFiniteError(RuntimeError):
    """Parabolic enumeration exceeded its cap."""


class OrientationError(ValueError):
    pass


# ---------------------------------------------------------------------------
# graphs


class CoxeterGraph:
    """Coxeter presentation graph.

    Edges carry labels m >= 2; a pair of vertices with no edge has m = infinity.
    ``orientation`` maps frozenset({s, t}) of a large edge (finite m >= 3) to
    the ordered pair (s, t), read as "s comes before t".
    """

    def __init__(self, vertices: Sequence[str], labels: dict, orientation: Optional[dict] = None):
        self.vertices = tuple(vertices)
        if len(set(self.vertices)) != len(self.vertices):
            raise ValueError("duplicate vertex names")
        if any("*" in str(v) for v in self.vertices):
            raise ValueError("vertex names may not contain '*'")
        self.pos = {v: i for i, v in enumerate(self.vertices)}
        self.labels: dict[frozenset, int] = {}
        for pair, m in labels.items():
            pair = frozenset(pair)
            if len(pair) != 2 or not pair <= set(self.vertices):
                raise ValueError(f"bad edge {sorted(pair)!r}")
            if m is None or m == INF or m == "inf":
                continue
            m = int(m)
            if m < 2:
                raise ValueError(f"label {m} on {sorted(pair)!r} must be >= 2")
            self.labels[pair] = m
        self.orientation: Optional[dict[frozenset, tuple[str, str]]] = None
        if orientation is not None:
            self.orientation = {}
            for pair, arrow in orientation.items():
                pair = frozenset(pair)
                if pair not in self.labels or self.labels[pair] < 3:
                    raise OrientationError(f"orientation on non-large edge {sorted(pair)!r}")
                if set(arrow) != pair:
                    raise OrientationError(f"orientation {arrow!r} does not match edge")
                self.orientation[pair] = tuple(arrow)
            missing = [sorted(p) for p in self.large_edges() if p not in self.orientation]
            if missing:
                raise OrientationError(f"large edges without orientation: {missing}")
        n = len(self.vertices)
        self._m = [[1 if i == j else INF for j in range(n)] for i in range(n)]
        for pair, m in self.labels.items():
            a, b = (self.pos[x] for x in pair)
            self._m[a][b] = self._m[b][a] = m

    @property
    def rank(self) -> int:
        return len(self.vertices)

    def m(self, i: int, j: int):
        """Label between vertex indices i and j (1 on the diagonal, inf if absent)."""
        return self._m[i][j]

    def label(self, s: str, t: str):
        return self._m[self.pos[s]][self.pos[t]]

    def large_edges(self) -> list[frozenset]:
        return [p for p, m in self.labels.items() if m >= 3]

    def is_large(self, i: int, j: int) -> bool:
        m = self._m[i][j]
        return i != j and m != INF and m >= 3

    def dynkin_adjacent(self, i: int, j: int) -> bool:
        return i != j and self._m[i][j] >= 3

    def commute(self, i: int, j: int) -> bool:
        return self._m[i][j] == 2

    def field_order(self) -> int:
        return reduce(math.lcm, self.labels.values(), 1)

    def with_orientation(self, orientation: dict) -> "CoxeterGraph":
        return CoxeterGraph(self.vertices, self.labels, orientation)

    def arrow(self, i: int, j: int) -> Optional[bool]:
        """True if the large edge {i,j} points i -> j, False if j -> i, None otherwise."""
        if self.orientation is None:
            return None
        a = self.orientation.get(frozenset((self.vertices[i], self.vertices[j])))
        if a is None:
            return None
        return a[0] == self.vertices[i]

    def induced(self, subset: Iterable[int]) -> "CoxeterGraph":
        idx = sorted(subset)
        names = [self.vertices[i] for i in idx]
        keep = set(names)
        labels = {p: m for p, m in self.labels.items() if p <= keep}
        orient = None
        if self.orientation is not None:
            orient = {p: a for p, a in self.orientation.items() if p <= keep}
        return CoxeterGraph(names, labels, orient)

    def canonical(self) -> str:
        edges = sorted((sorted(p), m) for p, m in self.labels.items())
        orient = None if self.orientation is None else sorted(self.orientation.values())
        return json.dumps([list(self.vertices), edges, orient])

    def __eq__(self, other: object) -> bool:
        return isinstance(other, CoxeterGraph) and self.canonical() == other.canonical()

    def __hash__(self) -> int:
        return hash(self.canonical())

    def __repr__(self) -> str:
        return f"CoxeterGraph({list(self.vertices)}, {len(self.labels)} edges)"

    # -- file format -----------------------------------------------------
    def to_json(self) -> dict:
        edges = []
        for p, m in sorted(self.labels.items(), key=lambda x: sorted(self.pos[v] for v in x[0])):
            u, v = sorted(p, key=self.pos.__getitem__)
            e: dict[str, Any] = {"u": u, "v": v, "m": m}
            if self.orientation is not None and p in self.orientation:
                e["orient"] = "uv" if self.orientation[p][0] == u else "vu"
            edges.append(e)
        return {"vertices": list(self.vertices), "edges": edges}

    @classmethod
    def from_json(cls, data: Any) -> "CoxeterGraph":
        if isinstance(data, str):
            data = json.loads(data)
        try:
            vertices = data["vertices"]
            edges = data.get("edges", [])
        except (KeyError, TypeError, AttributeError):
            raise ValueError("coxgraph needs 'vertices' and 'edges'") from None
        labels: dict = {}
        orient: dict = {}
        for e in edges:
            try:
                u, v, m = e["u"], e["v"], e.get("m", 3)
            except (KeyError, TypeError):
                raise ValueError(f"malformed edge {e!r}") from None
            labels[(u, v)] = m
            o = e.get("orient")
            if o is not None:
                if o not in ("uv", "vu"):
                    raise ValueError(f"orient must be 'uv' or 'vu', got {o!r}")
                orient[(u, v)] = (u, v) if o == "uv" else (v, u)
        g = cls(vertices, labels)
        if orient:
            g = cls(vertices, labels, orient)
        return g


def dynkin_components(G: CoxeterGraph, I: Iterable[int]) -> list[list[int]]:
    """Connected components of the Dynkin diagram restricted to I."""
    rest = sorted(set(I))
    seen: set[int] = set()
    comps = []
    for s in rest:
        if s in seen:
            continue
        comp, stack = [], [s]
        seen.add(s)
        while stack:
            x = stack.pop()
            comp.append(x)
            for y in rest:
                if y not in seen and G.dynkin_adjacent(x, y):
                    seen.add(y)
                    stack.append(y)
        comps.append(sorted(comp))
    return comps


def irreducible_components(G: CoxeterGraph, I: Iterable[str]) -> list[list[str]]:
    idx = [G.pos[s] for s in I]
    return [[G.vertices[i] for i in c] for c in dynkin_components(G, idx)]


def classify_component(G: CoxeterGraph, comp: Sequence[int]) -> Optional[str]:
    """Finite type name of an irreducible component, or None if infinite."""
    n = len(comp)
    if n == 1:
        return "A1"
    edges = [(a, b, G.m(a, b)) for a, b in itertools.combinations(comp, 2) if G.dynkin_adjacent(a, b)]
    if any(m == INF for _, _, m in edges):
        return None
    if n == 2:
        m = edges[0][2]
        return {3: "A2", 4: "B2", 6: "G2"}.get(m, f"I2({m})")
    if len(edges) != n - 1:
        return None
    deg = {v: 0 for v in comp}
    for a, b, _ in edges:
        deg[a] += 1
        deg[b] += 1
    big = [(a, b, m) for a, b, m in edges if m > 3]
    branch = [v for v in comp if deg[v] >= 3]
    if not big:
        if not branch:
            return f"A{n}"
        if len(branch) > 1 or deg[branch[0]] > 3:
            return None
        c = branch[0]
        arms = sorted(_arm_length(G, comp, c, nb) for nb in comp if G.dynkin_adjacent(c, nb))
        if arms[0] == 1 and arms[1] == 1:
            return f"D{n}"
        if arms[0] == 1 and arms[1] == 2 and arms[2] in (2, 3, 4):
            return f"E{n}"
        return None
    if len(big) > 1 or branch:
        return None
    a, b, m = big[0]
    end_edge = deg[a] == 1 or deg[b] == 1
    if m == 4:
        if end_edge:
            return f"B{n}"
        return "F4" if n == 4 else None
    if m == 5 and end_edge and n in (3, 4):
        return f"H{n}"
    return None


def _arm_length(G: CoxeterGraph, comp: Sequence[int], center: int, start: int) -> int:
    prev, cur, length = center, start, 1
    while True:
        nxt = [y for y in comp if y != prev and y != cur and G.dynkin_adjacent(cur, y)]
        if not nxt:
            return length
        prev, cur, length = cur, nxt[0], length + 1


_ORDER = {"A": lambda n: math.factorial(n + 1), "B": lambda n: 2 ** n * math.factorial(n),
          "D": lambda n: 2 ** (n - 1) * math.factorial(n)}
_FIXED_ORDER = {"E6": 51840, "E7": 2903040, "E8": 696729600, "F4": 1152, "H3": 120, "H4": 14400, "G2": 12}


def type_order(name: str) -> int:
    if name in _FIXED_ORDER:
        return _FIXED_ORDER[name]
    if name.startswith("I2("):
        return 2 * int(name[3:-1])
    return _ORDER[name[0]](int(name[1:]))


def is_spherical(G: CoxeterGraph, I: Optional[Iterable] = None) -> bool:
    idx = _indices(G, I)
    return all(classify_component(G, c) is not None for c in dynkin_components(G, idx))


def parabolic_type(G: CoxeterGraph, I: Optional[Iterable] = None) -> list[Optional[str]]:
    return [classify_component(G, c) for c in dynkin_components(G, _indices(G, I))]


def _indices(G: CoxeterGraph, I: Optional[Iterable]) -> tuple[int, ...]:
    if I is None:
        return tuple(range(G.rank))
    out = []
    for x in I:
        out.append(G.pos[x] if isinstance(x, str) else int(x))
    return tuple(sorted(set(out)))


def spherical_subsets(G: CoxeterGraph, include_empty: bool = True) -> list[tuple[int, ...]]:
    """All spherical vertex subsets, grown from smaller ones (sphericity is hereditary)."""
    n = G.rank
    found: list[tuple[int, ...]] = [()] if include_empty else []
    layer = [()]
    while layer:
        nxt = set()
        for I in layer:
            for s in range((I[-1] + 1) if I else 0, n):
                J = I + (s,)
                if is_spherical(G, J):
                    nxt.add(J)
        layer = sorted(nxt)
        found.extend(layer)
    return found


# ---------------------------------------------------------------------------
# matrices


def _narrow(M: np.ndarray) -> np.ndarray:
    """Back to int64 when the entries fit, so equal elements share one encoding."""
    if M.dtype == object and (M.size == 0 or max(abs(int(x)) for x in M.flat) < _EXACT_INT):
        return M.astype(np.int64)
    return M


def _matmul(A: np.ndarray, B: np.ndarray) -> np.ndarray:
    """Exact integer product (also batched along leading axes)."""
    if A.dtype == object or B.dtype == object:
        return _narrow(np.matmul(A.astype(object), B.astype(object)))
    if A.size == 0 or B.size == 0:
        return np.matmul(A, B)
    bound = int(np.abs(A).max()) * int(np.abs(B).max()) * A.shape[-1]
    if bound < _EXACT_FLOAT:
        return np.rint(np.matmul(A.astype(np.float64), B.astype(np.float64))).astype(np.int64)
    if bound < _EXACT_INT:
        return np.matmul(A, B)
    return _narrow(np.matmul(A.astype(object), B.astype(object)))


class CoxeterGroup:
    """Geometric representation of W(G) with element arithmetic."""

    _cache: dict[str, "CoxeterGroup"] = {}

    def __init__(self, G: CoxeterGraph):
        self.graph = G
        self.n = G.rank
        self.ctx = FieldContext(G.field_order())
        self.d = self.ctx.degree
        self.N = self.n * self.d
        self._coef = [[self._two_cos(i, j) for j in range(self.n)] for i in range(self.n)]
        self.gens = [self._generator(i) for i in range(self.n)]
        self.identity = CoxElement(self, np.eye(self.N, dtype=np.int64), ())
        self._parabolics: dict[tuple[int, ...], "Parabolic"] = {}

    @classmethod
    def of(cls, G: CoxeterGraph) -> "CoxeterGroup":
        key = json.dumps([list(G.vertices), sorted((sorted(p), m) for p, m in G.labels.items())])
        grp = cls._cache.get(key)
        if grp is None:
            grp = cls._cache[key] = cls(G)
        return grp

    def _two_cos(self, i: int, j: int) -> list[int]:
        """Coordinates of -2B(alpha_j, alpha_i) = 2cos(pi/m_ij); 2 when m is infinite."""
        if i == j:
            return self.ctx.reduce([-2])
        m = self.graph.m(i, j)
        if m == INF:
            return self.ctx.reduce([2])
        return self.ctx.two_cos_pi_over_vec(m)

    def _generator(self, i: int) -> "CoxElement":
        d = self.d
        M = np.eye(self.N, dtype=np.int64)
        # s_i(alpha_j) = alpha_j + 2cos(pi/m_ij) alpha_i ; s_i(alpha_i) = -alpha_i
        for j in range(self.n):
            blk = np.array(self.ctx.regular_matrix(self._coef[i][j]), dtype=np.int64)
            if i == j:
                M[i * d:(i + 1) * d, i * d:(i + 1) * d] += blk
            else:
                M[i * d:(i + 1) * d, j * d:(j + 1) * d] = blk
        return CoxElement(self, M, (i,))

    # -- element constructors ------------------------------------------
    def element(self, word: Iterable) -> "CoxElement":
        w = self.identity
        for x in word:
            w = w * self.gens[self.graph.pos[x] if isinstance(x, str) else int(x)]
        return w

    def word_names(self, word: Iterable[int]) -> list[str]:
        return [self.graph.vertices[i] for i in word]

    def from_matrix(self, M: np.ndarray) -> "CoxElement":
        return CoxElement(self, M)

    def parabolic(self, I: Optional[Iterable] = None, cap: int = DEFAULT_CAP) -> "Parabolic":
        key = _indices(self.graph, I)
        P = self._parabolics.get(key)
        if P is None:
            if not is_spherical(self.graph, key):
                raise NotFiniteError(f"parabolic {self.word_names(key)} is not spherical")
            P = self._parabolics[key] = Parabolic(self, key, cap)
        return P

    def root_sign(self, M: np.ndarray, j: int) -> int:
        """Sign of the root M(alpha_j): +1 positive, -1 negative."""
        d = self.d
        col = M[:, j * d]
        for i in range(self.n):
            c = col[i * d:(i + 1) * d]
            if np.any(c):
                return self.ctx.sign_vec([int(x) for x in c])
        raise ArithmeticError("zero root image")

    def entry(self, M: np.ndarray, i: int, j: int) -> CycReal:
        d = self.d
        return CycReal(self.ctx, [int(x) for x in M[i * d:(i + 1) * d, j * d]], 1)


def _key(M: np.ndarray, d: int) -> bytes:
    cols = _narrow(M[:, ::d])
    if cols.dtype == object:
        return repr(cols.tolist()).encode()
    return np.ascontiguousarray(cols, dtype=np.int64).tobytes()


class CoxElement:
    """Element of W(G) as an exact matrix on the simple-root basis."""

    __slots__ = ("group", "mat", "_word", "_key")

    def __init__(self, group: CoxeterGroup, mat: np.ndarray, word: Optional[tuple[int, ...]] = None):
        self.group = group
        self.mat = mat
        self._word = word
        self._key: Optional[bytes] = None

    @property
    def key(self) -> bytes:
        if self._key is None:
            self._key = _key(self.mat, self.group.d)
        return self._key

    def __mul__(self, other: "CoxElement") -> "CoxElement":
        return CoxElement(self.group, _matmul(self.mat, other.mat))

    def __eq__(self, other: object) -> bool:
        return isinstance(other, CoxElement) and other.group is self.group and self.key == other.key

    def __hash__(self) -> int:
        return hash(self.key)

    def is_identity(self) -> bool:
        return self == self.group.identity

    @property
    def matrix(self) -> list[list[CycReal]]:
        g = self.group
        return [[g.entry(self.mat, i, j) for j in range(g.n)] for i in range(g.n)]

    def right_descents(self) -> list[int]:
        return [j for j in range(self.group.n) if self.group.root_sign(self.mat, j) < 0]

    def reduced_word(self) -> tuple[int, ...]:
        if self._word is None:
            g = self.group
            M = self.mat
            word: list[int] = []
            while True:
                for j in range(g.n):
                    if g.root_sign(M, j) < 0:
                        word.append(j)
                        M = _matmul(M, g.gens[j].mat)
                        break
                else:
                    break
            self._word = tuple(reversed(word))
        return self._word

    def length(self) -> int:
        return len(self.reduced_word())

    def inverse(self) -> "CoxElement":
        g = self.group
        w = g.identity
        rw = self.reduced_word()
        for j in reversed(rw):
            w = w * g.gens[j]
        w._word = tuple(reversed(rw))
        return w

    def left_descents(self) -> list[int]:
        return self.inverse().right_descents()

    def support(self) -> frozenset[int]:
        return frozenset(self.reduced_word())

    def names(self) -> list[str]:
        return self.group.word_names(self.reduced_word())

    def __repr__(self) -> str:
        return "CoxElement(" + ("".join(self.names()) or "e") + ")"


def left_descents(w: CoxElement) -> frozenset[str]:
    return frozenset(w.group.graph.vertices[i] for i in w.left_descents())


def reduced_word(w: CoxElement) -> list[str]:
    return w.names()


def support(w: CoxElement) -> frozenset[str]:
    return frozenset(w.names())


def geometric_rep(G: CoxeterGraph) -> list[list[list[CycReal]]]:
    """Generator matrices over Q(2cos(pi/L)) acting on the simple roots."""
    return [s.matrix for s in CoxeterGroup.of(G).gens]


def check_braid_relations(G: CoxeterGraph) -> list[tuple[str, str]]:
    """Pairs whose relation (s t)^m = 1 fails exactly (always empty)."""
    grp = CoxeterGroup.of(G)
    bad = []
    for s in grp.gens:
        if not (s * s).is_identity():
            bad.append((grp.graph.vertices[s.reduced_word()[0]],) * 2)
    for i, j in itertools.combinations(range(grp.n), 2):
        m = G.m(i, j)
        if m == INF:
            continue
        st = grp.gens[i] * grp.gens[j]
        p = grp.identity
        for _ in range(int(m)):
            p = p * st
        if not p.is_identity():
            bad.append((G.vertices[i], G.vertices[j]))
    return bad


# ---------------------------------------------------------------------------
# spherical parabolics


class Parabolic:
    """All of W_I for spherical I, with reduced words and length tables."""

    def __init__(self, group: CoxeterGroup, I: tuple[int, ...], cap: int = DEFAULT_CAP):
        self.group = group
        self.I = I
        self.elements: list[CoxElement] = [group.identity]
        self.index: dict[bytes, int] = {group.identity.key: 0}
        frontier = [0]
        gens = [group.gens[i] for i in I]
        while frontier:
            stack = np.stack([self.elements[k].mat for k in frontier])
            nxt = []
            for s, i in zip(gens, I):
                prods = _matmul(stack, s.mat)
                for k, M in zip(frontier, prods):
                    key = _key(M, group.d)
                    if key in self.index:
                        continue
                    if len(self.elements) >= cap:
                        raise NotFiniteError(f"parabolic {group.word_names(I)} exceeded {cap} elements")
                    word = self.elements[k]._word + (i,)
                    el = CoxElement(group, M, word)
                    el._key = key
                    self.index[key] = len(self.elements)
                    self.elements.append(el)
                    nxt.append(self.index[key])
            frontier = nxt
        self._refl: Optional[list[int]] = None
        self._rlen: Optional[list[int]] = None
        self._inv: Optional[list[int]] = None

    def __len__(self) -> int:
        return len(self.elements)

    def find(self, w: CoxElement) -> Optional[int]:
        return self.index.get(w.key)

    def inverses(self) -> list[int]:
        if self._inv is None:
            inv = [0] * len(self)
            for k, w in enumerate(self.elements):
                inv[k] = self.index[w.inverse().key]
            self._inv = inv
        return self._inv

    def reflection_indices(self) -> list[int]:
        if self._refl is None:
            grp = self.group
            found = {self.index[grp.gens[i].key] for i in self.I}
            todo = list(found)
            while todo:
                r = self.elements[todo.pop()]
                for i in self.I:
                    s = grp.gens[i]
                    k = self.index[(s * r * s).key]
                    if k not in found:
                        found.add(k)
                        todo.append(k)
            self._refl = sorted(found)
        return self._refl

    def carter_length(self, k: int) -> int:
        """rank of (w - 1) on span{alpha_i : i in I}."""
        g = self.group
        M = self.elements[k].mat
        rows = []
        for i in self.I:
            row = []
            for j in self.I:
                e = g.entry(M, i, j)
                row.append(e - 1 if i == j else e)
            rows.append(row)
        return matrix_rank(rows)

    def reflection_lengths(self) -> list[int]:
        if self._rlen is None:
            self._rlen = [self.carter_length(k) for k in range(len(self))]
        return self._rlen

    def bfs_reflection_lengths(self) -> list[int]:
        """Distances in the Cayley graph over all reflections of W_I."""
        refl = np.stack([self.elements[k].mat for k in self.reflection_indices()])
        dist = [-1] * len(self)
        dist[0] = 0
        frontier = [0]
        level = 0
        while frontier:
            level += 1
            nxt = []
            for k in frontier:
                prods = _matmul(self.elements[k].mat, refl)
                for M in prods:
                    j = self.index[_key(M, self.group.d)]
                    if dist[j] < 0:
                        dist[j] = level
                        nxt.append(j)
            frontier = nxt
        return dist


def enumerate_parabolic(G: CoxeterGraph, I: Optional[Iterable] = None, cap: int = DEFAULT_CAP) -> list[CoxElement]:
    grp = CoxeterGroup.of(G)
    key = _indices(G, I)
    if not is_spherical(G, key):
        # still bounded by the cap, which guards misclassification
        P = Parabolic(grp, key, cap)
        return P.elements
    return grp.parabolic(key, cap).elements


@dataclass
class ReflectionSet:
    parabolic: tuple[str, ...]
    reflections: list[CoxElement]

    def __len__(self) -> int:
        return len(self.reflections)


def reflections(G: CoxeterGraph, I: Optional[Iterable] = None) -> ReflectionSet:
    grp = CoxeterGroup.of(G)
    P = grp.parabolic(I)
    return ReflectionSet(tuple(grp.word_names(P.I)), [P.elements[k] for k in P.reflection_indices()])


def reflection_length(w: CoxElement, I: Optional[Iterable] = None) -> int:
    grp = w.group
    P = grp.parabolic(I if I is not None else sorted(w.support()))
    k = P.find(w)
    if k is None:
        raise ValueError("element is not in the parabolic")
    return P.carter_length(k)


# ---------------------------------------------------------------------------
# dual intervals and Coxeter elements


def carter_length(w: CoxElement, I: Sequence[int]) -> int:
    """Reflection length of w in the finite group W_I: rank of (w - 1) on span{alpha_i : i in I}."""
    g = w.group
    M = w.mat
    rows = []
    for i in I:
        row = []
        for j in I:
            e = g.entry(M, i, j)
            row.append(e - 1 if i == j else e)
        rows.append(row)
    return matrix_rank(rows)


def parabolic_reflections(group: CoxeterGroup, I: Sequence[int]) -> list[CoxElement]:
    """Closure of the generators of W_I under conjugation by those generators."""
    gens = [group.gens[i] for i in I]
    found = {s.key: s for s in gens}
    todo = list(gens)
    while todo:
        r = todo.pop()
        for s in gens:
            c = s * r * s
            if c.key not in found:
                found[c.key] = c
                todo.append(c)
    return list(found.values())


@dataclass
class DualInterval:
    """[1, delta] inside a spherical W_I, graded by reflection length."""

    group: CoxeterGroup
    I: tuple[int, ...]
    delta: CoxElement
    elements: list[CoxElement]       # sorted by length
    lengths: list[int]
    up: list[int]                    # up-set bitmasks over positions

    def __len__(self) -> int:
        return len(self.elements)

    def index(self) -> dict[bytes, int]:
        return {w.key: k for k, w in enumerate(self.elements)}

    def poset(self):
        from .poset import FinitePoset
        return FinitePoset(self.elements, self.up, verify=False)

    def labeled_poset(self):
        """Labels lambda(u, v) = u^-1 v."""
        from .poset import LabeledPoset, iter_bits
        invs = [w.inverse() for w in self.elements]
        labels = {}
        for a in range(len(self)):
            for b in iter_bits(self.up[a]):
                labels[(a, b)] = invs[a] * self.elements[b]
        return LabeledPoset(self.poset(), labels, identity=self.group.identity)


def dual_interval(G: CoxeterGraph, I: Optional[Iterable], delta: CoxElement) -> DualInterval:
    grp = CoxeterGroup.of(G)
    idx = _indices(G, I)
    if not is_spherical(G, idx):
        raise NotFiniteError(f"parabolic {grp.word_names(idx)} is not spherical")
    return interval_by_reflections(grp, idx, delta)


def interval_by_reflections(grp: CoxeterGroup, I: tuple[int, ...], delta: CoxElement) -> DualInterval:
    """Grow [1, delta] from e by right multiplication with reflections of W_I.

    z = u r is kept when its reflection length is |u| + 1 and |z^-1 delta| = n - |z|;
    the order is the transitive closure of these covering steps.
    """
    refl = parabolic_reflections(grp, I)
    n = carter_length(delta, I)
    e = grp.identity
    elements, quots, depth = [e], [delta], [0]
    index = {e.key: 0}
    rejected: set[bytes] = set()
    covers: list[list[int]] = [[]]
    layer = [0]
    for k in range(1, n + 1):
        nxt: list[int] = []
        fresh: set[int] = set()
        for a in layer:
            u, q = elements[a], quots[a]
            for r in refl:
                z = u * r
                key = z.key
                b = index.get(key)
                if b is not None:
                    if b in fresh:
                        covers[a].append(b)
                    continue
                if key in rejected:
                    continue
                qz = r * q
                if carter_length(z, I) == k and carter_length(qz, I) == n - k:
                    b = index[key] = len(elements)
                    elements.append(z)
                    quots.append(qz)
                    depth.append(k)
                    covers.append([])
                    covers[a].append(b)
                    nxt.append(b)
                    fresh.add(b)
                else:
                    rejected.add(key)
        layer = nxt
    up = [1 << a for a in range(len(elements))]
    for a in reversed(range(len(elements))):
        for b in covers[a]:
            up[a] |= up[b]
    return DualInterval(grp, I, delta, elements, depth, up)


def dual_interval_bruteforce(G: CoxeterGraph, I: Optional[Iterable], delta: CoxElement) -> DualInterval:
    """Oracle: filter all of W_I by |u| + |u^-1 delta| = |delta| and compare all pairs."""
    grp = CoxeterGroup.of(G)
    P = grp.parabolic(I)
    rl = P.reflection_lengths()
    inv = P.inverses()
    kd = P.find(delta)
    if kd is None:
        raise ValueError("delta is not in the parabolic")
    n = rl[kd]
    d = grp.d
    invs = np.stack([P.elements[inv[k]].mat for k in range(len(P))])
    quot = _matmul(invs, delta.mat)
    members = [k for k in range(len(P)) if rl[k] + rl[P.index[_key(quot[k], d)]] == n]
    members.sort(key=lambda k: (rl[k], k))
    lengths = [rl[k] for k in members]
    mats = np.stack([P.elements[k].mat for k in members])
    up = []
    for a, ka in enumerate(members):
        prods = _matmul(P.elements[inv[ka]].mat, mats)
        mask = 0
        for b, M in enumerate(prods):
            if lengths[a] + rl[P.index[_key(M, d)]] == lengths[b]:
                mask |= 1 << b
        up.append(mask)
    return DualInterval(grp, P.I, delta, [P.elements[k] for k in members], lengths, up)


def linear_orders(G: CoxeterGraph, I: Sequence[int]) -> Iterator[tuple[int, ...]]:
    """All orders of I compatible with the orientation of its large edges."""
    I = tuple(sorted(I))
    before = {i: set() for i in I}
    for i, j in itertools.permutations(I, 2):
        if G.is_large(i, j):
            a = G.arrow(i, j)
            if a is None:
                raise OrientationError("large edge without orientation")
            if a:
                before[j].add(i)

    def rec(placed: tuple[int, ...], left: frozenset[int]):
        if not left:
            yield placed
            return
        for x in sorted(left):
            if before[x] <= set(placed):
                yield from rec(placed + (x,), left - {x})

    yield from rec((), frozenset(I))


def compatible_order(G: CoxeterGraph, I: Sequence[int]) -> tuple[int, ...]:
    for order in linear_orders(G, I):
        return order
    raise OrientationError("no compatible order")


def compatible_coxeter_element(G: CoxeterGraph, I: Optional[Iterable] = None,
                               orientation: Optional[dict] = None) -> CoxElement:
    if orientation is not None:
        G = G.with_orientation(orientation)
    idx = _indices(G, I)
    grp = CoxeterGroup.of(G)
    return grp.element(compatible_order(G, idx))

"""Positive partial multiplications on finite sets.

A table is a finite set U with identity e and a partially defined product.
This module verifies the axioms (associativity in both directions, identity,
positivity, two-sided cancellation), builds the prefix and suffix orders,
checks the join-closure criterion that makes the doubled poset a lattice, and
builds that doubled poset with its interval labels.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from typing import TYPE_CHECKING, Any, Hashable, Iterable, Optional, Sequence

from .poset import Bound, FinitePoset, LabeledPoset, find_bowtie, is_join_semilattice, iter_bits

if TYPE_CHECKING:
    from .presentations import PositivePresentation


class TableError(ValueError):
    pass


@dataclass
class CheckReport:
    """Pass/fail verdict with witnesses grouped by condition id."""

    name: str
    violations: list[tuple[str, tuple]] = field(default_factory=list)
    counts: dict[str, int] = field(default_factory=dict)
    info: dict[str, Any] = field(default_factory=dict)
    max_witnesses: int = 20

    @property
    def passed(self) -> bool:
        return not self.counts

    def __bool__(self) -> bool:
        return self.passed

    def add(self, condition: str, witness: tuple) -> None:
        n = self.counts.get(condition, 0)
        if n < self.max_witnesses:
            self.violations.append((condition, witness))
        self.counts[condition] = n + 1

    def failed_conditions(self) -> list[str]:
        return list(self.counts)

    def first(self, condition: Optional[str] = None) -> Optional[tuple]:
        for c, w in self.violations:
            if condition is None or c == condition:
                return w
        return None

    def extend(self, other: "CheckReport", prefix: str = "") -> None:
        for c, w in other.violations:
            self.violations.append((prefix + c, w))
        for c, n in other.counts.items():
            self.counts[prefix + c] = self.counts.get(prefix + c, 0) + n
        for k, v in other.info.items():
            self.info[prefix + k] = v

    def to_dict(self) -> dict:
        return {
            "check": self.name,
            "verdict": "pass" if self.passed else "fail",
            "violations": [{"condition": c, "witness": _jsonable(w)} for c, w in self.violations],
            "counts": dict(self.counts),
            "info": _jsonable(self.info),
        }


def _jsonable(x: Any) -> Any:
    if isinstance(x, dict):
        return {str(k): _jsonable(v) for k, v in x.items()}
    if isinstance(x, (list, tuple, set, frozenset)):
        seq = sorted(x, key=repr) if isinstance(x, (set, frozenset)) else x
        return [_jsonable(v) for v in seq]
    if isinstance(x, (str, int, float, bool)) or x is None:
        return x
    return str(x)


class PartialMulTable:
    """Finite set with identity and a partial product, stored by index."""

    def __init__(self, elements: Sequence[Hashable], identity: Hashable,
                 products: Iterable[tuple[Hashable, Hashable, Hashable]]):
        self.elements = list(elements)
        self.index = {x: i for i, x in enumerate(self.elements)}
        if len(self.index) != len(self.elements):
            raise TableError("duplicate elements in table")
        if identity not in self.index:
            raise TableError(f"identity {identity!r} is not an element")
        self.identity = identity
        self.e = self.index[identity]
        n = len(self.elements)
        self.rows: list[dict[int, int]] = [dict() for _ in range(n)]
        self.cols: list[dict[int, int]] = [dict() for _ in range(n)]
        for a, b, c in products:
            for x in (a, b, c):
                if x not in self.index:
                    raise TableError(f"product mentions unknown element {x!r}")
            i, j, k = self.index[a], self.index[b], self.index[c]
            old = self.rows[i].get(j)
            if old is not None and old != k:
                raise TableError(f"product {a!r}*{b!r} given twice with different values")
            self.rows[i][j] = k
            self.cols[j][i] = k
        self.row_mask = [sum(1 << j for j in r) for r in self.rows]
        self.col_mask = [sum(1 << i for i in c) for c in self.cols]
        self._left: Optional[FinitePoset] = None
        self._right: Optional[FinitePoset] = None

    def __len__(self) -> int:
        return len(self.elements)

    def mul(self, a: Hashable, b: Hashable) -> Optional[Hashable]:
        k = self.rows[self.index[a]].get(self.index[b])
        return None if k is None else self.elements[k]

    def products(self) -> list[tuple[Hashable, Hashable, Hashable]]:
        e = self.elements
        return [(e[i], e[j], e[k]) for i, r in enumerate(self.rows) for j, k in r.items()]

    def relabel(self, f) -> "PartialMulTable":
        return PartialMulTable([f(x) for x in self.elements], f(self.identity),
                               [(f(a), f(b), f(c)) for a, b, c in self.products()])

    # -- serialization -----------------------------------------------------
    def to_json(self) -> dict:
        return {
            "elements": [str(x) for x in self.elements],
            "identity": str(self.identity),
            "products": [[str(a), str(b), str(c)] for a, b, c in self.products()],
        }

    @classmethod
    def from_json(cls, data: Any) -> "PartialMulTable":
        if isinstance(data, str):
            data = json.loads(data)
        try:
            elements = data["elements"]
            identity = data["identity"]
            products = data["products"]
        except (KeyError, TypeError) as exc:
            raise TableError(f"malformed table: missing {exc}") from None
        if not isinstance(elements, list) or not isinstance(products, list):
            raise TableError("malformed table: elements and products must be lists")
        triples = []
        for p in products:
            if not isinstance(p, list) or len(p) != 3:
                raise TableError(f"malformed product entry {p!r}")
            triples.append(tuple(p))
        return cls(elements, identity, triples)

    # -- orders ------------------------------------------------------------
    def left_order(self) -> FinitePoset:
        if self._left is None:
            up = [sum(1 << k for k in r.values()) for r in self.rows]
            self._left = FinitePoset(self.elements, up)
        return self._left

    def right_order(self) -> FinitePoset:
        if self._right is None:
            up = [sum(1 << k for k in self.cols[j].values()) for j in range(len(self))]
            self._right = FinitePoset(self.elements, up)
        return self._right


def left_order(T: PartialMulTable) -> FinitePoset:
    """u <= v iff u * w = v for some w."""
    return T.left_order()


def right_order(T: PartialMulTable) -> FinitePoset:
    """u <= v iff w * u = v for some w."""
    return T.right_order()


def verify_axioms(T: PartialMulTable, max_witnesses: int = 20) -> CheckReport:
    rep = CheckReport("axioms", max_witnesses=max_witnesses)
    el, e, rows = T.elements, T.e, T.rows
    for i in range(len(T)):
        if rows[e].get(i) != i:
            rep.add("identity", (el[e], el[i]))
        if rows[i].get(e) != i:
            rep.add("identity", (el[i], el[e]))
    for i, r in enumerate(rows):
        for j, k in r.items():
            if k == e and (i != e or j != e):
                rep.add("positivity", (el[i], el[j]))
    for i, r in enumerate(rows):
        seen: dict[int, int] = {}
        for j, k in r.items():
            if k in seen:
                rep.add("left_cancellative", (el[i], el[seen[k]], el[j]))
            else:
                seen[k] = j
    for j, c in enumerate(T.cols):
        seen = {}
        for i, k in c.items():
            if k in seen:
                rep.add("right_cancellative", (el[seen[k]], el[i], el[j]))
            else:
                seen[k] = i
    for i, r in enumerate(rows):
        for j, x in r.items():
            for w, xw in rows[x].items():
                vw = rows[j].get(w)
                if vw is None or rows[i].get(vw) != xw:
                    rep.add("left_associative", (el[i], el[j], el[w]))
    for j, r in enumerate(rows):
        for w, y in r.items():
            for i, uy in T.cols[y].items():
                uv = rows[i].get(j)
                if uv is None or rows[uv].get(w) != uy:
                    rep.add("right_associative", (el[i], el[j], el[w]))
    return rep


def _join_criterion(T: PartialMulTable, rep: CheckReport, ids: dict[str, str]) -> CheckReport:
    el = T.elements
    n = len(T)
    try:
        L, R = T.left_order(), T.right_order()
    except ValueError as exc:
        rep.add(ids["order"], (str(exc),))
        return rep
    for side, P in (("left", L), ("right", R)):
        w = find_bowtie(P.with_bounds())
        if w is not None:
            rep.add(ids[side], w)
        rep.info[f"{side}_join_semilattice"] = is_join_semilattice(P)
    # joins of u, v are stable under common left factors
    for a in range(n):
        cols = sorted(T.rows[a])
        for x, u in enumerate(cols):
            for v in cols[x + 1:]:
                w = L.join_idx(u, v)
                if not isinstance(w, Bound) and w not in T.rows[a]:
                    rep.add(ids["left_closure"], (el[a], el[u], el[v], el[w]))
    for a in range(n):
        cols = sorted(T.cols[a])
        for x, u in enumerate(cols):
            for v in cols[x + 1:]:
                w = R.join_idx(u, v)
                if not isinstance(w, Bound) and a not in T.rows[w]:
                    rep.add(ids["right_closure"], (el[a], el[u], el[v], el[w]))
    has_left_join: dict[int, int] = {}

    def joinable_mask(u: int, pool: int) -> int:
        m = 0
        for v in iter_bits(pool):
            if not isinstance(L.join_idx(u, v), Bound):
                m |= 1 << v
        return m

    for a in range(n):
        for b in range(a + 1, n):
            common = T.row_mask[a] & T.row_mask[b]
            if common & (common - 1) == 0:
                continue
            if not isinstance(R.join_idx(a, b), Bound):
                continue
            for u in iter_bits(common):
                higher = common & ~((1 << (u + 1)) - 1)
                if not higher:
                    break
                jm = has_left_join.get(u)
                if jm is None:
                    jm = has_left_join[u] = joinable_mask(u, (1 << n) - 1)
                for v in iter_bits(higher & ~jm):
                    rep.add(ids["mixed"], (el[a], el[b], el[u], el[v]))
    return rep


def is_mixed_join_violation(T: PartialMulTable, a: Hashable, b: Hashable, u: Hashable, v: Hashable) -> bool:
    """True when a*u, a*v, b*u, b*v are defined, a, b have no right join and u, v no left join.

    Needs a table whose orders are partial orders."""
    i = T.index
    a_, b_, u_, v_ = i[a], i[b], i[u], i[v]
    if not all(y in T.rows[x] for x in (a_, b_) for y in (u_, v_)):
        return False
    L, R = T.left_order(), T.right_order()
    return isinstance(R.join_idx(a_, b_), Bound) and isinstance(L.join_idx(u_, v_), Bound)


def check_garside_criterion(T: PartialMulTable, max_witnesses: int = 20) -> CheckReport:
    """Join criterion on a table whose axioms already hold.

    Conditions: both orders are meet-semilattices (no bowtie once bounds are
    adjoined); left joins are preserved by left multiplication; right joins by
    right multiplication; whenever a*u, a*v, b*u, b*v are all defined, a and
    b have a right join or u and v a left join.
    """
    rep = CheckReport("garside_criterion", max_witnesses=max_witnesses)
    return _join_criterion(T, rep, {
        "order": "orders", "left": "meet_semilattice_left", "right": "meet_semilattice_right",
        "left_closure": "left_join_closure", "right_closure": "right_join_closure",
        "mixed": "mixed_join",
    })


def check_lattice_criterion(T: PartialMulTable, max_witnesses: int = 20) -> CheckReport:
    """Five-assumption form of the criterion; grading is automatic for finite U."""
    rep = CheckReport("lattice_criterion", max_witnesses=max_witnesses)
    rep.info["weakly_boundedly_graded"] = "automatic: finite poset, ranked by a linear extension"
    return _join_criterion(T, rep, {
        "order": "orders", "left": "meet_semilattice_left", "right": "meet_semilattice_right",
        "left_closure": "left_join_closure", "right_closure": "right_join_closure",
        "mixed": "mixed_join",
    })


def identity_name(taken: Iterable[Hashable]) -> str:
    """'e', or the first of e0, e1, ... not already used as a generator name."""
    used = {str(x) for x in taken}
    if "e" not in used:
        return "e"
    k = 0
    while f"e{k}" in used:
        k += 1
    return f"e{k}"


def bar(u: Hashable) -> tuple[Hashable, int]:
    return (u, 1)


def doubled_poset(T: PartialMulTable, verify: bool = True) -> LabeledPoset:
    """Two copies (u, 0) and (u, 1) of U; (u, 1) stands for the formal inverse of u.

    (u,0) <= (v,0) iff u <=_L v;  (u,0) <= (v,1) iff v*u is defined;
    (u,1) <= (v,1) iff v <=_R u.  Minimum (e,0), maximum (e,1).
    """
    n = len(T)
    L, R = T.left_order(), T.right_order()
    els = [(u, 0) for u in T.elements] + [(u, 1) for u in T.elements]
    up = []
    for i in range(n):
        m = L.up[i]
        for v in T.cols[i]:
            m |= 1 << (n + v)
        up.append(m)
    for i in range(n):
        up.append(R.down[i] << n)
    P = FinitePoset(els, up, verify=verify)
    labels: dict[tuple[int, int], Hashable] = {}
    el = T.elements
    for u, r in enumerate(T.rows):
        for v, uv in r.items():
            labels[(u, uv)] = (el[v], 0)
            # (uv-bar) <= (v-bar) through left factor u
            labels[(n + uv, n + v)] = (el[u], 0)
    for u in range(n):
        for v, vu in T.cols[u].items():
            labels[(u, n + v)] = (el[vu], 1)
    return LabeledPoset(P, labels, identity=(T.identity, 0))


def presentation_of_table(T: PartialMulTable) -> "PositivePresentation":
    from .presentations import PositivePresentation

    rels = [((a, b), (c,)) for a, b, c in T.products()]
    return PositivePresentation(list(T.elements), rels)


def presentation_of_doubled(T: PartialMulTable) -> "PositivePresentation":
    """Relations (u,0)(v,0) = (u*v,0), (u,0)(v,1) = (w,1) for w*u = v,
    and (u,1)(v,0) = (w,1) for v*w = u."""
    from .presentations import PositivePresentation

    el = T.elements
    gens = [(u, 0) for u in el] + [(u, 1) for u in el]
    rels = []
    for u, v, w in T.products():
        rels.append((((u, 0), (v, 0)), ((w, 0),)))
    for w, r in enumerate(T.rows):
        for u, v in r.items():
            rels.append((((el[u], 0), (el[v], 1)), ((el[w], 1),)))
    for v, r in enumerate(T.rows):
        for w, u in r.items():
            rels.append((((el[u], 1), (el[v], 0)), ((el[w], 1),)))
    return PositivePresentation(gens, rels)


def free_table(generators: Sequence[Hashable], identity: Hashable = "e") -> PartialMulTable:
    """U = S + {e} with only the products forced by the identity."""
    els = [identity] + list(generators)
    prods = [(identity, x, x) for x in els] + [(x, identity, x) for x in els[1:]]
    return PartialMulTable(els, identity, prods)


def boolean_table(letters: Sequence[str], identity: str = "e") -> PartialMulTable:
    """Subsets of a finite set, with disjoint union as the partial product."""
    from itertools import combinations

    subsets = [frozenset(c) for k in range(len(letters) + 1) for c in combinations(letters, k)]
    name = {s: ("".join(sorted(s)) or identity) for s in subsets}
    prods = [(name[a], name[b], name[a | b]) for a in subsets for b in subsets if not a & b]
    return PartialMulTable([name[s] for s in subsets], identity, prods)

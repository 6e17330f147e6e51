"""Finite posets, interval labelings, bowties and lattice certification.

Order relations are stored as bitmasks: bit j of ``up[i]`` is set when
element i is below element j.  All searches iterate in element order, so
witnesses are deterministic.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass
from typing import Any, Callable, Hashable, Iterable, Iterator, Optional, Sequence


def iter_bits(mask: int) -> Iterator[int]:
    while mask:
        low = mask & -mask
        yield low.bit_length() - 1
        mask ^= low


class Bound(enum.Enum):
    """Why a meet or join is missing."""

    NO_COMMON_BOUND = "no common bound"
    NO_EXTREMAL_BOUND = "bounds exist but none is extremal"


class PosetError(ValueError):
    pass


class FinitePoset:
    """A finite partial order on opaque hashable ids."""

    def __init__(self, elements: Sequence[Hashable], up: Sequence[int], *, verify: bool = True):
        self.elements = list(elements)
        self.index = {x: i for i, x in enumerate(self.elements)}
        if len(self.index) != len(self.elements):
            raise PosetError("duplicate poset elements")
        n = len(self.elements)
        self.up = list(up)
        down = [0] * n
        for i, m in enumerate(self.up):
            for j in iter_bits(m):
                down[j] |= 1 << i
        self.down = down
        self._up_lookup: Optional[dict[int, int]] = None
        self._down_lookup: Optional[dict[int, int]] = None
        if verify:
            self._verify()

    @classmethod
    def from_relation(cls, elements: Sequence[Hashable], leq: Callable[[Any, Any], bool]) -> "FinitePoset":
        els = list(elements)
        up = []
        for x in els:
            m = 0
            for j, y in enumerate(els):
                if leq(x, y):
                    m |= 1 << j
            up.append(m)
        return cls(els, up)

    @classmethod
    def from_pairs(cls, elements: Sequence[Hashable], pairs: Iterable[tuple[Hashable, Hashable]]) -> "FinitePoset":
        """Reflexive-transitive closure of the given covering pairs."""
        els = list(elements)
        idx = {x: i for i, x in enumerate(els)}
        succ = [0] * len(els)
        for a, b in pairs:
            succ[idx[a]] |= 1 << idx[b]
        up = [0] * len(els)
        for i in range(len(els)):
            seen, frontier = 1 << i, 1 << i
            while frontier:
                nxt = 0
                for j in iter_bits(frontier):
                    nxt |= succ[j]
                frontier = nxt & ~seen
                seen |= nxt
            up[i] = seen
        return cls(els, up)

    def _verify(self) -> None:
        for i, m in enumerate(self.up):
            if not (m >> i) & 1:
                raise PosetError(f"relation not reflexive at {self.elements[i]!r}")
            for j in iter_bits(m):
                if j != i and (self.up[j] >> i) & 1:
                    raise PosetError(
                        f"relation not antisymmetric: {self.elements[i]!r}, {self.elements[j]!r}")
                if self.up[j] & ~m:
                    k = next(iter_bits(self.up[j] & ~m))
                    raise PosetError(
                        "relation not transitive: "
                        f"{self.elements[i]!r} <= {self.elements[j]!r} <= {self.elements[k]!r}")

    def __len__(self) -> int:
        return len(self.elements)

    def __iter__(self) -> Iterator[Hashable]:
        return iter(self.elements)

    def leq(self, x: Hashable, y: Hashable) -> bool:
        return bool((self.up[self.index[x]] >> self.index[y]) & 1)

    def leq_idx(self, i: int, j: int) -> bool:
        return bool((self.up[i] >> j) & 1)

    def minimum(self) -> Optional[Hashable]:
        full = (1 << len(self)) - 1
        for i, m in enumerate(self.up):
            if m == full:
                return self.elements[i]
        return None

    def maximum(self) -> Optional[Hashable]:
        full = (1 << len(self)) - 1
        for i, m in enumerate(self.down):
            if m == full:
                return self.elements[i]
        return None

    def is_bounded(self) -> bool:
        return self.minimum() is not None and self.maximum() is not None

    # -- meets and joins ---------------------------------------------------
    def _lookup(self, which: str) -> dict[int, int]:
        if which == "up":
            if self._up_lookup is None:
                self._up_lookup = {m: i for i, m in enumerate(self.up)}
            return self._up_lookup
        if self._down_lookup is None:
            self._down_lookup = {m: i for i, m in enumerate(self.down)}
        return self._down_lookup

    def join_idx(self, i: int, j: int) -> "int | Bound":
        common = self.up[i] & self.up[j]
        if not common:
            return Bound.NO_COMMON_BOUND
        k = self._lookup("up").get(common)
        return Bound.NO_EXTREMAL_BOUND if k is None else k

    def meet_idx(self, i: int, j: int) -> "int | Bound":
        common = self.down[i] & self.down[j]
        if not common:
            return Bound.NO_COMMON_BOUND
        k = self._lookup("down").get(common)
        return Bound.NO_EXTREMAL_BOUND if k is None else k

    def join_status(self, x: Hashable, y: Hashable) -> "Hashable | Bound":
        """The least upper bound of x and y, or the reason it is missing."""
        r = self.join_idx(self.index[x], self.index[y])
        return r if isinstance(r, Bound) else self.elements[r]

    def meet_status(self, x: Hashable, y: Hashable) -> "Hashable | Bound":
        r = self.meet_idx(self.index[x], self.index[y])
        return r if isinstance(r, Bound) else self.elements[r]

    def join(self, x: Hashable, y: Hashable) -> Optional[Hashable]:
        r = self.join_status(x, y)
        return None if isinstance(r, Bound) else r

    def meet(self, x: Hashable, y: Hashable) -> Optional[Hashable]:
        r = self.meet_status(x, y)
        return None if isinstance(r, Bound) else r

    # -- structure ---------------------------------------------------------
    def covers(self) -> list[tuple[int, int]]:
        """Covering pairs (i, j), i < j with nothing strictly between."""
        out = []
        for i, m in enumerate(self.up):
            strict = m & ~(1 << i)
            for j in iter_bits(strict):
                if not (strict & self.down[j] & ~(1 << j)):
                    out.append((i, j))
        return out

    def with_bounds(self) -> "FinitePoset":
        """Adjoin a new minimum and maximum."""
        n = len(self)
        bottom, top = ("__bottom__",), ("__top__",)
        els = [bottom] + self.elements + [top]
        up = [(1 << (n + 2)) - 1]
        for m in self.up:
            up.append((m << 1) | (1 << (n + 1)))
        up.append(1 << (n + 1))
        return FinitePoset(els, up, verify=False)

    def to_dot(self, labels: Optional[Callable[[Hashable, Hashable], Any]] = None,
               names: Optional[Callable[[Hashable], str]] = None) -> str:
        lines = ["digraph hasse {", "  rankdir=BT;"]
        for i, x in enumerate(self.elements):
            lines.append(f'  n{i} [label="{_dot_escape(names(x) if names else x)}"];')
        for i, j in self.covers():
            extra = ""
            if labels is not None:
                extra = f' [label="{_dot_escape(labels(self.elements[i], self.elements[j]))}"]'
            lines.append(f"  n{i} -> n{j}{extra};")
        lines.append("}")
        return "\n".join(lines) + "\n"


def _dot_escape(x: Any) -> str:
    return str(x).replace("\\", "\\\\").replace('"', '\\"')


def find_bowtie(P: FinitePoset) -> Optional[tuple[Hashable, Hashable, Hashable, Hashable]]:
    """First (a, b, c, d) with a, b < c, d and nothing between the pairs.

    Pairs (c, d) are scanned lexicographically and for the first one with
    no meet, the lexicographically first splitting pair (a, b).
    """
    n = len(P)
    lookup = P._lookup("down")
    for c in range(n):
        for d in range(c + 1, n):
            if P.leq_idx(c, d) or P.leq_idx(d, c):
                continue
            low = P.down[c] & P.down[d]
            if not low or low in lookup:
                continue
            members = list(iter_bits(low))
            for ia, a in enumerate(members):
                for b in members[ia + 1:]:
                    if not (P.up[a] & P.up[b] & low):
                        e = P.elements
                        return (e[a], e[b], e[c], e[d])
    return None


@dataclass
class LatticeVerdict:
    is_lattice: bool
    bowtie: Optional[tuple[Hashable, Hashable, Hashable, Hashable]] = None

    def __bool__(self) -> bool:
        return self.is_lattice


def is_lattice(P: FinitePoset, bounded: bool = True) -> LatticeVerdict:
    """Lattice test through bowtie absence.

    With ``bounded`` set, P must have a minimum and a maximum.  Otherwise the
    test is run on P with a fresh minimum and maximum adjoined.
    """
    if bounded:
        if not P.is_bounded():
            raise PosetError("poset is not bounded")
        Q = P
    else:
        Q = P.with_bounds()
    w = find_bowtie(Q)
    return LatticeVerdict(w is None, w)


def is_meet_semilattice(P: FinitePoset) -> bool:
    n = len(P)
    return all(not isinstance(P.meet_idx(i, j), Bound) for i in range(n) for j in range(i + 1, n))


def is_join_semilattice(P: FinitePoset) -> bool:
    n = len(P)
    return all(not isinstance(P.join_idx(i, j), Bound) for i in range(n) for j in range(i + 1, n))


@dataclass
class LabeledPoset:
    """A finite poset with a label on each comparable pair (x <= y)."""

    poset: FinitePoset
    labels: dict[tuple[int, int], Hashable]
    identity: Hashable = None

    def __post_init__(self) -> None:
        P = self.poset
        for i, m in enumerate(P.up):
            for j in iter_bits(m):
                if (i, j) not in self.labels:
                    raise PosetError(f"missing label on ({P.elements[i]!r}, {P.elements[j]!r})")
        ids = {self.labels[(i, i)] for i in range(len(P))}
        if len(ids) != 1:
            raise PosetError("trivial intervals must share one identity label")
        (ident,) = ids
        if self.identity is None:
            self.identity = ident
        elif ident != self.identity:
            raise PosetError("identity label mismatch")

    @classmethod
    def from_function(cls, poset: FinitePoset, label: Callable[[Hashable, Hashable], Hashable]) -> "LabeledPoset":
        labels = {}
        for i, m in enumerate(poset.up):
            x = poset.elements[i]
            for j in iter_bits(m):
                labels[(i, j)] = label(x, poset.elements[j])
        return cls(poset, labels)

    def label(self, x: Hashable, y: Hashable) -> Hashable:
        P = self.poset
        return self.labels[(P.index[x], P.index[y])]

    def relabel(self, f: Callable[[Hashable], Hashable]) -> "LabeledPoset":
        return LabeledPoset(self.poset, {k: f(v) for k, v in self.labels.items()})

    def chains3(self) -> Iterator[tuple[int, int, int]]:
        P = self.poset
        for i, m in enumerate(P.up):
            for j in iter_bits(m & ~(1 << i)):
                for k in iter_bits(P.up[j] & ~(1 << j)):
                    yield (i, j, k)


@dataclass
class GroupLikeVerdict:
    group_like: bool
    witness: Optional[tuple[tuple[Hashable, ...], tuple[Hashable, ...]]] = None

    def __bool__(self) -> bool:
        return self.group_like


def is_group_like(L: LabeledPoset) -> GroupLikeVerdict:
    """Two 3-chains agreeing on two corresponding labels agree on the third."""
    lab = L.labels
    # (which pair is known) -> {known labels: (third label, chain)}
    seen: list[dict[tuple, tuple]] = [{}, {}, {}]
    els = L.poset.elements
    for ch in L.chains3():
        i, j, k = ch
        ab, bc, ac = lab[(i, j)], lab[(j, k)], lab[(i, k)]
        for slot, key, third in ((0, (ab, bc), ac), (1, (ab, ac), bc), (2, (bc, ac), ab)):
            prev = seen[slot].get(key)
            if prev is None:
                seen[slot][key] = (third, ch)
            elif prev[0] != third:
                w1 = tuple(els[t] for t in prev[1])
                w2 = tuple(els[t] for t in ch)
                return GroupLikeVerdict(False, (w1, w2))
    return GroupLikeVerdict(True)


def is_balanced(L: LabeledPoset) -> bool:
    """Labels from the bottom, to the top and overall coincide."""
    P = L.poset
    lo, hi = P.minimum(), P.maximum()
    if lo is None or hi is None:
        raise PosetError("balanced check needs a bounded poset")
    b, t = P.index[lo], P.index[hi]
    from_bottom = {L.labels[(b, j)] for j in range(len(P))}
    to_top = {L.labels[(i, t)] for i in range(len(P))}
    everything = set(L.labels.values())
    return from_bottom == to_top == everything

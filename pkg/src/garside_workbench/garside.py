"""Garside structure on a finite labeled lattice, with left-greedy normal forms.

Simples are the poset elements; a simple x is the monoid element spelled by the
label from the bottom to x.  Elements of the group are written
Delta^inf s_1 ... s_k with every adjacent pair left-weighted.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from typing import Hashable, Iterable, Optional, Sequence, Union

from .partialmul import PartialMulTable, doubled_poset
from .poset import LabeledPoset, PosetError, is_balanced, is_group_like, is_lattice, iter_bits


class StructureError(ValueError):
    """The labeled poset does not carry a Garside structure."""

    def __init__(self, message: str, witness: object = None):
        super().__init__(message if witness is None else f"{message}: {witness!r}")
        self.witness = witness


@dataclass(frozen=True)
class NormalForm:
    inf: int
    factors: tuple[Hashable, ...]

    def to_dict(self, render=str) -> dict:
        return {"inf": self.inf, "factors": [render(f) for f in self.factors]}


Letter = Union[Hashable, tuple[Hashable, bool]]


class GarsideStructure:
    """Tables for a finite lattice with a group-like, balanced labelling."""

    def __init__(self, E: LabeledPoset, ids: Optional[dict[Hashable, str]] = None, check: bool = True):
        P = E.poset
        self.E = E
        self.poset = P
        if check:
            v = is_lattice(P)
            if not v:
                raise StructureError("poset is not a lattice", v.bowtie)
            g = is_group_like(E)
            if not g:
                raise StructureError("labelling is not group-like", g.witness)
            if not is_balanced(E):
                raise StructureError("labelling is not balanced")
        lo, hi = P.minimum(), P.maximum()
        if lo is None or hi is None:
            raise StructureError("poset is not bounded")
        self.bottom = P.index[lo]
        self.top = P.index[hi]
        n = len(P)
        lab = E.labels
        self.simple_of: dict[Hashable, int] = {}
        for x in range(n):
            l = lab[(self.bottom, x)]
            if l in self.simple_of:
                raise StructureError("two simples share a label", (P.elements[self.simple_of[l]], P.elements[x]))
            self.simple_of[l] = x
        # comp[s][t] = s.t when s.t is simple
        self.comp: list[dict[int, int]] = [dict() for _ in range(n)]
        self.quot: dict[tuple[int, int], int] = {}
        for s in range(n):
            for z in iter_bits(P.up[s]):
                t = self.simple_of.get(lab[(s, z)])
                if t is None:
                    raise StructureError("label is not a simple", (P.elements[s], P.elements[z]))
                self.comp[s][t] = z
                self.quot[(s, z)] = t
        self.complement = [self.quot[(s, self.top)] for s in range(n)]
        if sorted(self.complement) != list(range(n)):
            raise StructureError("complement map is not a bijection")
        self.co_complement = [0] * n
        for s, c in enumerate(self.complement):
            self.co_complement[c] = s
        self.tau = [self.complement[self.complement[s]] for s in range(n)]
        self.tau_inv = [0] * n
        for s, t in enumerate(self.tau):
            self.tau_inv[t] = s
        if check:
            self._check_tau()
        self._meet = [[-1] * n for _ in range(n)]
        self.ids = ids or {}
        self._by_id = {v: k for k, v in self.ids.items()}

    def _check_tau(self) -> None:
        P, t = self.poset, self.tau
        for s in range(len(P)):
            for z in iter_bits(P.up[s]):
                if not P.up[t[s]] >> t[z] & 1:
                    raise StructureError("tau does not preserve the order", (P.elements[s], P.elements[z]))
                if self.quot[(t[s], t[z])] != t[self.quot[(s, z)]]:
                    raise StructureError("tau does not preserve labels", (P.elements[s], P.elements[z]))

    # -- constructors -------------------------------------------------------
    @classmethod
    def from_table(cls, T: PartialMulTable, check: bool = True) -> "GarsideStructure":
        E = doubled_poset(T)
        ids = {}
        for x in E.poset.elements:
            u, tag = x
            ids[x] = str(u) if tag == 0 else "~" + str(u)
        return cls(E, ids, check)

    # -- ids ----------------------------------------------------------------
    def __len__(self) -> int:
        return len(self.poset)

    @property
    def delta(self) -> Hashable:
        return self.poset.elements[self.top]

    def render(self, x: Hashable) -> str:
        return self.ids.get(x, str(x))

    def simple(self, token: Hashable) -> int:
        P = self.poset
        if token in P.index:
            return P.index[token]
        if isinstance(token, str):
            if token in ("Δ", "D", "Delta"):
                return self.top
            if token in self._by_id:
                return P.index[self._by_id[token]]
        raise KeyError(f"unknown simple {token!r}")

    def parse(self, text: str) -> list[tuple[int, bool]]:
        """Whitespace-separated simple ids; a trailing ' marks an inverse."""
        out = []
        for tok in text.split():
            inv = tok.endswith("'")
            out.append((self.simple(tok.rstrip("'")), inv))
            if tok.count("'") > 1:
                raise KeyError(f"bad token {tok!r}")
        return out

    def _letters(self, word: Iterable[Letter]) -> list[tuple[int, bool]]:
        if isinstance(word, str):
            return self.parse(word)
        out = []
        for x in word:
            if isinstance(x, tuple) and len(x) == 2 and isinstance(x[1], bool):
                out.append((self.simple(x[0]), x[1]))
            else:
                out.append((self.simple(x), False))
        return out

    # -- lattice operations -------------------------------------------------
    def meet(self, s: int, t: int) -> int:
        m = self._meet[s][t]
        if m < 0:
            m = self.poset.meet_idx(s, t)
            self._meet[s][t] = self._meet[t][s] = m
        return m

    def left_weight(self, s: int, t: int) -> tuple[int, int]:
        m = self.meet(self.complement[s], t)
        if m == self.bottom:
            return s, t
        return self.comp[s][m], self.quot[(m, t)]

    def multiply_simples(self, s: Hashable, t: Hashable) -> NormalForm:
        return self._finish(0, [self.simple(s), self.simple(t)])

    # -- normal forms -------------------------------------------------------
    def _finish(self, inf: int, factors: list[int]) -> NormalForm:
        f = list(factors)
        changed = True
        while changed:
            changed = False
            for i in range(len(f) - 2, -1, -1):
                a, b = self.left_weight(f[i], f[i + 1])
                if (a, b) != (f[i], f[i + 1]):
                    f[i], f[i + 1] = a, b
                    changed = True
        k = 0
        while k < len(f) and f[k] == self.top:
            k += 1
        inf += k
        f = f[k:]
        while f and f[-1] == self.bottom:
            f.pop()
        els = self.poset.elements
        return NormalForm(inf, tuple(els[x] for x in f))

    def normal_form(self, word: Iterable[Letter]) -> NormalForm:
        inf = 0
        f: list[int] = []
        for s, inv in self._letters(word):
            if inv:
                # P s^-1 = P Delta^-1 d'(s) = Delta^-1 tau^-1(P) d'(s)
                inf -= 1
                f = [self.tau_inv[x] for x in f]
                f.append(self.co_complement[s])
            else:
                f.append(s)
            nf = self._finish(0, f)
            f = [self.poset.index[x] for x in nf.factors]
            inf += nf.inf
        return NormalForm(inf, tuple(self.poset.elements[x] for x in f))

    def expand(self, nf: NormalForm) -> list[tuple[Hashable, bool]]:
        d = self.delta
        word: list[tuple[Hashable, bool]] = [(d, nf.inf < 0)] * abs(nf.inf)
        return word + [(x, False) for x in nf.factors]

    def equal_words(self, w1: Iterable[Letter], w2: Iterable[Letter]) -> bool:
        return self.normal_form(w1) == self.normal_form(w2)

    @staticmethod
    def inverse_word(word: Sequence[tuple[Hashable, bool]]) -> list[tuple[Hashable, bool]]:
        return [(x, not inv) for x, inv in reversed(word)]

    def random_word(self, rng: random.Random, length: int) -> list[tuple[Hashable, bool]]:
        els = self.poset.elements
        return [(els[rng.randrange(len(els))], rng.random() < 0.5) for _ in range(length)]

    def is_left_weighted(self, nf: NormalForm) -> bool:
        f = [self.poset.index[x] for x in nf.factors]
        if any(x in (self.bottom, self.top) for x in f):
            return False
        return all(self.meet(self.complement[a], b) == self.bottom for a, b in zip(f, f[1:]))

    def divisors_check(self) -> bool:
        """Left divisors of Delta = right divisors of Delta = all simples."""
        n = len(self)
        left = {s for s in range(n) if self.poset.up[s] >> self.top & 1}
        right = {self.quot[(s, self.top)] for s in range(n)}
        return left == right == set(range(n))


def from_E(E: LabeledPoset, ids: Optional[dict] = None) -> GarsideStructure:
    try:
        return GarsideStructure(E, ids)
    except PosetError as exc:
        raise StructureError(str(exc)) from exc

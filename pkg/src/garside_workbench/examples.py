"""Named Coxeter graphs and input builders used by the CLI and the tests."""

from __future__ import annotations

import re
from typing import Sequence

from .coxeter import CoxeterGraph


def _complete(vertices: Sequence[str], default=2) -> dict:
    return {(a, b): default for i, a in enumerate(vertices) for b in vertices[i + 1:]}


def linear_graph(labels: Sequence[int], prefix: str = "s", oriented: bool = False) -> CoxeterGraph:
    """Path s1 - s2 - ... with the given consecutive labels; all other pairs commute."""
    V = [f"{prefix}{i}" for i in range(1, len(labels) + 2)]
    lab = _complete(V)
    for i, m in enumerate(labels):
        lab[(V[i], V[i + 1])] = m
    G = CoxeterGraph(V, lab)
    if oriented:
        return G.with_orientation({(V[i], V[i + 1]): (V[i], V[i + 1])
                                   for i, m in enumerate(labels) if m >= 3})
    return G


def cycle_graph(labels: Sequence[int], prefix: str = "s") -> CoxeterGraph:
    """Cycle s1 - s2 - ... - sn - s1; labels[i] sits on the edge s_{i+1} s_{i+2}."""
    n = len(labels)
    V = [f"{prefix}{i}" for i in range(1, n + 1)]
    lab = _complete(V)
    for i, m in enumerate(labels):
        a, b = V[i], V[(i + 1) % n]
        lab.pop((b, a), None)
        lab[(a, b)] = m
    return CoxeterGraph(V, lab)


def spherical_graph(name: str) -> CoxeterGraph:
    """Standard Dynkin numbering: A_n, B_n (label 4 on s1 s2), D_n, E6-8, F4, H3, H4, I2(m)."""
    m = re.fullmatch(r"I2\((\d+)\)", name)
    if m:
        return linear_graph([int(m.group(1))])
    m = re.fullmatch(r"([A-Z])(\d+)", name)
    if not m:
        raise ValueError(f"unknown type {name!r}")
    t, n = m.group(1), int(m.group(2))
    if t == "A":
        return linear_graph([3] * (n - 1))
    if t == "B" and n >= 2:
        return linear_graph([4] + [3] * (n - 2))
    if t == "F" and n == 4:
        return linear_graph([3, 4, 3])
    if t == "H" and n in (3, 4):
        return linear_graph([5] + [3] * (n - 2))
    if t in "DE":
        if t == "D" and n >= 4:
            V = [f"s{i}" for i in range(1, n + 1)]
            lab = _complete(V)
            for i in range(n - 2):
                lab[(V[i], V[i + 1])] = 3
            lab[(V[n - 3], V[n - 1])] = 3
            return CoxeterGraph(V, lab)
        if t == "E" and n in (6, 7, 8):
            V = [f"s{i}" for i in range(1, n + 1)]
            lab = _complete(V)
            for a, b in [(1, 3), (3, 4), (4, 5), (2, 4)] + [(k, k + 1) for k in range(5, n)]:
                lab[(V[a - 1], V[b - 1])] = 3
            return CoxeterGraph(V, lab)
    raise ValueError(f"unknown type {name!r}")


def parse_label_cycle(text: str) -> list[int]:
    """'3-3-3-5' or '3335' -> [3, 3, 3, 5]."""
    parts = text.split("-") if "-" in text else list(text)
    try:
        labels = [int(p) for p in parts]
    except ValueError:
        raise ValueError(f"bad label list {text!r}") from None
    if any(m < 2 for m in labels):
        raise ValueError(f"labels must be >= 2 in {text!r}")
    return labels


# diagrams whose products with Z are claimed Garside, rank <= 5
CYCLIC_SUITE = ["3-3-3", "3-3-4", "3-3-5", "3-3-3-3", "3-3-3-3-3", "3-3-3-4", "3-3-3-5",
                "3-4-3-4", "3-4-3-5", "3-5-3-5", "3-3-3-3-4"]


def square_raag() -> CoxeterGraph:
    """Right-angled square: a - u - b - v - a commute, diagonals a b and u v free."""
    V = ["a", "u", "b", "v"]
    return CoxeterGraph(V, {("a", "u"): 2, ("u", "b"): 2, ("b", "v"): 2, ("v", "a"): 2}, {})


def label4_line(n: int = 7) -> CoxeterGraph:
    """n-vertex line with every consecutive label 4, oriented s_i -> s_{i+1}."""
    return linear_graph([4] * (n - 1), oriented=True)


def glued_cycles(k: int = 5) -> CoxeterGraph:
    """Two k-cycles with labels 3 sharing the path p1 - p2 - p3; a_i, b_j pairs are free.

    Every edge is oriented along its cycle, so the shared edges agree."""
    P = ["p1", "p2", "p3"]
    A = [f"a{i}" for i in range(1, k - 2)]
    B = [f"b{i}" for i in range(1, k - 2)]
    lab: dict = {}
    orient: dict = {}
    for cyc in (P + A, P + B):
        n = len(cyc)
        for i in range(n):
            for j in range(i + 1, n):
                lab[frozenset((cyc[i], cyc[j]))] = 2
        for i in range(n):
            e = (cyc[i], cyc[(i + 1) % n])
            lab[frozenset(e)] = 3
            orient[frozenset(e)] = e
    return CoxeterGraph(P + A + B, lab, orient)


GRAPH_NAMES = {
    "square": square_raag,
    "label4-line": label4_line,
    "glued-cycles": glued_cycles,
}

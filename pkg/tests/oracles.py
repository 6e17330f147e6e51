"""Slow, independent reimplementations used as test oracles."""

import itertools


def table_dict(T):
    return {(a, b): c for a, b, c in T.products()}


def axiom_failures(elements, e, prod):
    """Set of failing axiom names, straight from the definitions."""
    bad = set()
    for u in elements:
        if prod.get((e, u)) != u or prod.get((u, e)) != u:
            bad.add("identity")
    for (u, v), w in prod.items():
        if w == e and (u, v) != (e, e):
            bad.add("positivity")
    for u, v, w in itertools.product(elements, repeat=3):
        if v != w and (u, v) in prod and (u, w) in prod and prod[(u, v)] == prod[(u, w)]:
            bad.add("left_cancellative")
        if u != v and (u, w) in prod and (v, w) in prod and prod[(u, w)] == prod[(v, w)]:
            bad.add("right_cancellative")
        uv = prod.get((u, v))
        if uv is not None and (uv, w) in prod:
            vw = prod.get((v, w))
            if vw is None or prod.get((u, vw)) != prod[(uv, w)]:
                bad.add("left_associative")
        vw = prod.get((v, w))
        if vw is not None and (u, vw) in prod:
            if uv is None or prod.get((uv, w)) != prod[(u, vw)]:
                bad.add("right_associative")
    return bad


def _leq_left(elements, prod):
    return {(u, v) for u in elements for v in elements
            if u == v or any(prod.get((u, w)) == v for w in elements)}


def _leq_right(elements, prod):
    return {(u, v) for u in elements for v in elements
            if u == v or any(prod.get((w, u)) == v for w in elements)}


def _join(elements, leq, x, y):
    ub = [z for z in elements if (x, z) in leq and (y, z) in leq]
    least = [z for z in ub if all((z, w) in leq for w in ub)]
    return least[0] if least else None


def _is_lattice_with_top(elements, leq):
    """Adjoin a top and test every pair for a join and a meet."""
    top = object()
    els = list(elements) + [top]
    L = set(leq) | {(x, top) for x in els}
    for x, y in itertools.combinations(els, 2):
        if _join(els, L, x, y) is None:
            return False
        lb = [z for z in els if (z, x) in L and (z, y) in L]
        if not [z for z in lb if all((w, z) in L for w in lb)]:
            return False
    return True


def criterion_failures(elements, prod):
    """Failing bullets of the join criterion, by brute force."""
    bad = set()
    L, R = _leq_left(elements, prod), _leq_right(elements, prod)
    if not _is_lattice_with_top(elements, L):
        bad.add("meet_semilattice_left")
    if not _is_lattice_with_top(elements, R):
        bad.add("meet_semilattice_right")
    for a, u, v in itertools.product(elements, repeat=3):
        if (a, u) in prod and (a, v) in prod:
            w = _join(elements, L, u, v)
            if w is not None and (a, w) not in prod:
                bad.add("left_join_closure")
        if (u, a) in prod and (v, a) in prod:
            w = _join(elements, R, u, v)
            if w is not None and (w, a) not in prod:
                bad.add("right_join_closure")
    for a, b, u, v in itertools.product(elements, repeat=4):
        if all((x, y) in prod for x in (a, b) for y in (u, v)):
            if _join(elements, R, a, b) is None and _join(elements, L, u, v) is None:
                bad.add("mixed_join")
    return bad

"""Exact arithmetic in the real cyclotomic field Q(beta), beta = 2cos(pi/L).

Elements are stored as integer numerator vectors in the power basis
1, beta, ..., beta^(d-1) together with a positive common denominator, where d
is the degree of the minimal polynomial of beta.  Every Gram-matrix entry
2cos(pi/m) with m | L is an integer polynomial in beta, so Coxeter matrices
never leave Z[beta].
"""

from __future__ import annotations

import math
from fractions import Fraction
from functools import lru_cache
from typing import Iterable, Sequence, Union

import mpmath

Number = Union[int, Fraction, "CycReal"]


def _trim(p: list[int]) -> list[int]:
    while len(p) > 1 and p[-1] == 0:
        p.pop()
    return p


def _divide_monic(num: list[int], den: list[int]) -> list[int]:
    """Exact quotient of integer polynomials (low-to-high), den monic."""
    num = list(num)
    dn = len(den) - 1
    q = [0] * (len(num) - dn)
    for k in range(len(num) - 1, dn - 1, -1):
        c = num[k]
        if c:
            q[k - dn] = c
            for j in range(dn + 1):
                num[k - dn + j] -= c * den[j]
    if any(num[:dn]):
        raise ArithmeticError("inexact polynomial division")
    return q


@lru_cache(maxsize=None)
def cyclotomic_polynomial(n: int) -> tuple[int, ...]:
    """Integer coefficients (low to high) of the n-th cyclotomic polynomial."""
    p = [-1] + [0] * (n - 1) + [1]
    for d in range(1, n):
        if n % d == 0:
            p = _divide_monic(p, list(cyclotomic_polynomial(d)))
    return tuple(p)


@lru_cache(maxsize=None)
def chebyshev_c(k: int) -> tuple[int, ...]:
    """C_k with C_k(x + 1/x) = x^k + x^-k (so C_0 = 2, C_1 = y)."""
    if k == 0:
        return (2,)
    if k == 1:
        return (0, 1)
    a, b = list(chebyshev_c(k - 2)), list(chebyshev_c(k - 1))
    out = [0] + b
    for i, c in enumerate(a):
        out[i] -= c
    return tuple(_trim(out))


@lru_cache(maxsize=None)
def minimal_polynomial(L: int) -> tuple[int, ...]:
    """Minimal polynomial of 2cos(pi/L), monic, integer, low to high."""
    if L < 1:
        raise ValueError("L must be a positive integer")
    if L == 1:
        return (2, 1)  # beta = -2
    phi = cyclotomic_polynomial(2 * L)
    d = (len(phi) - 1) // 2
    q = [phi[d]]
    for k in range(1, d + 1):
        ck = chebyshev_c(k)
        q += [0] * (len(ck) - len(q))
        for i, c in enumerate(ck):
            q[i] += phi[d + k] * c
    return tuple(_trim(q))


class FieldContext:
    """The field Q(2cos(pi/L)) with its reduction data."""

    _cache: dict[int, "FieldContext"] = {}

    def __new__(cls, L: int) -> "FieldContext":
        ctx = cls._cache.get(L)
        if ctx is None:
            ctx = super().__new__(cls)
            ctx._setup(L)
            cls._cache[L] = ctx
        return ctx

    def _setup(self, L: int) -> None:
        self.L = L
        self.minpoly: tuple[int, ...] = minimal_polynomial(L)
        self.degree = len(self.minpoly) - 1
        d = self.degree
        # beta^k mod p for k < 2d - 1, as integer vectors
        powers: list[list[int]] = []
        cur = [1] + [0] * (d - 1)
        for _ in range(2 * d - 1):
            powers.append(cur)
            nxt = [0] + cur[:-1]
            top = cur[-1]
            if top:
                for i in range(d):
                    nxt[i] -= top * self.minpoly[i]
            cur = nxt
        self._powers = powers
        self.beta_float = 2.0 * math.cos(math.pi / L)

    def __reduce__(self):
        return (FieldContext, (self.L,))

    def __repr__(self) -> str:
        return f"FieldContext(L={self.L}, degree={self.degree})"

    # -- raw integer-vector arithmetic -------------------------------------
    def reduce(self, coeffs: Sequence[int]) -> list[int]:
        d = self.degree
        out = list(coeffs[:d]) + [0] * max(0, d - len(coeffs))
        for k in range(d, len(coeffs)):
            c = coeffs[k]
            if c:
                pk = self._powers[k]
                for i in range(d):
                    out[i] += c * pk[i]
        return out

    def mul_vec(self, a: Sequence[int], b: Sequence[int]) -> list[int]:
        prod = [0] * (len(a) + len(b) - 1)
        for i, x in enumerate(a):
            if x:
                for j, y in enumerate(b):
                    if y:
                        prod[i + j] += x * y
        return self.reduce(prod)

    def regular_matrix(self, a: Sequence[int]) -> list[list[int]]:
        """Matrix of multiplication by a; column j holds a * beta^j."""
        d = self.degree
        cols = [self.reduce([0] * j + list(a)) for j in range(d)]
        return [[cols[j][i] for j in range(d)] for i in range(d)]

    # -- element constructors ----------------------------------------------
    def element(self, coeffs: Iterable[Union[int, Fraction]]) -> "CycReal":
        vals = [Fraction(c) for c in coeffs]
        den = 1
        for v in vals:
            den = den * v.denominator // math.gcd(den, v.denominator)
        num = [int(v * den) for v in vals]
        return CycReal(self, self.reduce(num), den)

    def from_int(self, n: Union[int, Fraction]) -> "CycReal":
        return self.element([n])

    def zero(self) -> "CycReal":
        return self.from_int(0)

    def one(self) -> "CycReal":
        return self.from_int(1)

    def beta(self) -> "CycReal":
        return self.element([0, 1])

    def two_cos_pi_over_vec(self, m: int) -> list[int]:
        """Integer coordinates of 2cos(pi/m)."""
        if m < 1:
            raise ValueError("label must be positive")
        if m == 1:
            return self.reduce([-2])
        if m == 2:
            return self.reduce([0])
        if m == 3:
            return self.reduce([1])
        if self.L % m:
            raise ValueError("label outside field context")
        return self.reduce(list(chebyshev_c(self.L // m)))

    def two_cos_pi_over(self, m: int) -> "CycReal":
        return CycReal(self, self.two_cos_pi_over_vec(m), 1)

    def cos_pi_over(self, m: int) -> "CycReal":
        return CycReal(self, self.two_cos_pi_over_vec(m), 2)

    def sign_vec(self, num: Sequence[int]) -> int:
        """Sign of sum num[k] beta^k; exact zero test, then intervals."""
        if not any(num):
            return 0
        b = self.beta_float
        val = 0.0
        for c in reversed(num):
            val = val * b + c
        bound = 1e-9 * sum(abs(c) * (k + 1) * 2.0**k for k, c in enumerate(num))
        if abs(val) > bound:
            return 1 if val > 0 else -1
        iv = mpmath.iv
        saved, prec = iv.prec, 80
        try:
            while True:
                iv.prec = prec
                beta = 2 * iv.cos(iv.pi / self.L)
                acc = iv.mpf(0)
                for c in reversed(num):
                    acc = acc * beta + c
                if acc.a > 0:
                    return 1
                if acc.b < 0:
                    return -1
                prec *= 2
        finally:
            iv.prec = saved


def _coerce(ctx: FieldContext, x: Number) -> "CycReal":
    if isinstance(x, CycReal):
        if x.ctx is not ctx:
            raise ValueError("elements from different field contexts")
        return x
    if isinstance(x, (int, Fraction)):
        return ctx.from_int(x)
    raise TypeError(f"cannot coerce {type(x).__name__} into CycReal")


class CycReal:
    """Immutable element of Q(2cos(pi/L))."""

    __slots__ = ("ctx", "num", "den", "_hash")

    def __init__(self, ctx: FieldContext, num: Sequence[int], den: int = 1):
        if den <= 0:
            raise ValueError("denominator must be positive")
        num = list(num)
        if len(num) != ctx.degree:
            num = ctx.reduce(num)
        g = den
        for c in num:
            g = math.gcd(g, c)
        if g > 1:
            num = [c // g for c in num]
            den //= g
        self.ctx = ctx
        self.num = tuple(num)
        self.den = den
        self._hash = None

    @property
    def context_order(self) -> int:
        return self.ctx.L

    @property
    def coeffs(self) -> tuple[Fraction, ...]:
        return tuple(Fraction(c, self.den) for c in self.num)

    def is_zero(self) -> bool:
        return not any(self.num)

    def __add__(self, other: Number) -> "CycReal":
        o = _coerce(self.ctx, other)
        if self.den == o.den:
            return CycReal(self.ctx, [a + b for a, b in zip(self.num, o.num)], self.den)
        return CycReal(
            self.ctx,
            [a * o.den + b * self.den for a, b in zip(self.num, o.num)],
            self.den * o.den,
        )

    __radd__ = __add__

    def __neg__(self) -> "CycReal":
        return CycReal(self.ctx, [-a for a in self.num], self.den)

    def __sub__(self, other: Number) -> "CycReal":
        return self + (-_coerce(self.ctx, other))

    def __rsub__(self, other: Number) -> "CycReal":
        return _coerce(self.ctx, other) - self

    def __mul__(self, other: Number) -> "CycReal":
        o = _coerce(self.ctx, other)
        return CycReal(self.ctx, self.ctx.mul_vec(self.num, o.num), self.den * o.den)

    __rmul__ = __mul__

    def inverse(self) -> "CycReal":
        if self.is_zero():
            raise ZeroDivisionError("inverse of zero in CycReal")
        # extended Euclid on (minpoly, self) over Q[x]
        p = [Fraction(c) for c in self.ctx.minpoly]
        a = [Fraction(c, self.den) for c in self.num]
        r0, r1 = p, _ftrim(a)
        s0, s1 = [Fraction(0)], [Fraction(1)]
        while len(r1) > 1 or r1[0] != 0:
            q, r = _fdivmod(r0, r1)
            r0, r1 = r1, r
            s0, s1 = s1, _fsub(s0, _fmul(q, s1))
        # r0 is a nonzero constant because minpoly is irreducible
        c = r0[0]
        if len(s0) > self.ctx.degree:
            s0 = _fmod(s0, p)
        return self.ctx.element([x / c for x in s0])

    def __truediv__(self, other: Number) -> "CycReal":
        return self * _coerce(self.ctx, other).inverse()

    def __rtruediv__(self, other: Number) -> "CycReal":
        return _coerce(self.ctx, other) * self.inverse()

    def __pow__(self, k: int) -> "CycReal":
        if k < 0:
            return self.inverse() ** (-k)
        out, base = self.ctx.one(), self
        while k:
            if k & 1:
                out = out * base
            base = base * base
            k >>= 1
        return out

    def __eq__(self, other: object) -> bool:
        if isinstance(other, (int, Fraction)):
            other = self.ctx.from_int(other)
        if not isinstance(other, CycReal):
            return NotImplemented
        return self.ctx is other.ctx and self.num == other.num and self.den == other.den

    def __hash__(self) -> int:
        if self._hash is None:
            self._hash = hash((self.ctx.L, self.num, self.den))
        return self._hash

    def sign(self) -> int:
        """-1, 0 or 1 according to the real embedding beta = 2cos(pi/L)."""
        return self.ctx.sign_vec(self.num)

    def __lt__(self, other: Number) -> bool:
        return (self - other).sign() < 0

    def __le__(self, other: Number) -> bool:
        return (self - other).sign() <= 0

    def __gt__(self, other: Number) -> bool:
        return (self - other).sign() > 0

    def __ge__(self, other: Number) -> bool:
        return (self - other).sign() >= 0

    def __float__(self) -> float:
        b = self.ctx.beta_float
        val = 0.0
        for c in reversed(self.num):
            val = val * b + c
        return val / self.den

    def __repr__(self) -> str:
        terms = [f"{c}*b^{k}" for k, c in enumerate(self.coeffs) if c]
        return f"CycReal(L={self.ctx.L}: {' + '.join(terms) or '0'})"


def _ftrim(p: list[Fraction]) -> list[Fraction]:
    p = list(p)
    while len(p) > 1 and p[-1] == 0:
        p.pop()
    return p


def _fsub(a: list[Fraction], b: list[Fraction]) -> list[Fraction]:
    n = max(len(a), len(b))
    a = a + [Fraction(0)] * (n - len(a))
    b = b + [Fraction(0)] * (n - len(b))
    return _ftrim([x - y for x, y in zip(a, b)])


def _fmul(a: list[Fraction], b: list[Fraction]) -> list[Fraction]:
    out = [Fraction(0)] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        for j, y in enumerate(b):
            out[i + j] += x * y
    return _ftrim(out)


def _fdivmod(a: list[Fraction], b: list[Fraction]) -> tuple[list[Fraction], list[Fraction]]:
    a = list(a)
    db = len(b) - 1
    if len(a) - 1 < db:
        return [Fraction(0)], _ftrim(a)
    q = [Fraction(0)] * (len(a) - db)
    for k in range(len(a) - 1, db - 1, -1):
        c = a[k] / b[-1]
        q[k - db] = c
        for j in range(db + 1):
            a[k - db + j] -= c * b[j]
    return _ftrim(q), _ftrim(a[:db] or [Fraction(0)])


def _fmod(a: list[Fraction], p: list[Fraction]) -> list[Fraction]:
    return _fdivmod(a, p)[1]


def matrix_rank(rows: Sequence[Sequence[CycReal]]) -> int:
    """Rank over Q(beta) by division-free elimination (exact zero tests)."""
    m = [list(r) for r in rows]
    if not m:
        return 0
    rank = 0
    ncols = len(m[0])
    for col in range(ncols):
        piv = next((i for i in range(rank, len(m)) if not m[i][col].is_zero()), None)
        if piv is None:
            continue
        m[rank], m[piv] = m[piv], m[rank]
        p = m[rank][col]
        for i in range(rank + 1, len(m)):
            f = m[i][col]
            if not f.is_zero():
                m[i] = [p * x - f * y for x, y in zip(m[i], m[rank])]
        rank += 1
    return rank

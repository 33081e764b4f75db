"""Exact arithmetic in S = Q[t1, t2].

Characters of the two-dimensional torus are integer pairs; a character
doubles as the degree-one element ``c1*t1 + c2*t2`` of S.  Polynomials are
sparse maps from exponent pairs to :class:`fractions.Fraction`.
"""
from __future__ import annotations

from fractions import Fraction
from functools import reduce
from typing import Iterable, Mapping, NamedTuple, Sequence


class Character(NamedTuple):
    c1: int
    c2: int

    def pair(self, w) -> int:
        """Pairing with a cocharacter ``w = (w1, w2)``."""
        return self.c1 * w[0] + self.c2 * w[1]

    def __neg__(self) -> "Character":
        return Character(-self.c1, -self.c2)

    def plus(self, other) -> "Character":
        return Character(self.c1 + other[0], self.c2 + other[1])

    def scaled(self, k: int) -> "Character":
        return Character(k * self.c1, k * self.c2)

    def is_zero(self) -> bool:
        return self.c1 == 0 and self.c2 == 0


class NotDivisible(ArithmeticError):
    """Raised by :func:`divide_exact` when a linear factor leaves a remainder."""


def _graded_lex_key(exp):
    a, b = exp
    return (-(a + b), -a)


class SPoly:
    """Immutable sparse polynomial in t1, t2 with rational coefficients."""

    __slots__ = ("_terms", "_hash")

    def __init__(self, terms: Mapping[tuple[int, int], object] | None = None):
        clean = {}
        if terms:
            for exp, c in terms.items():
                c = Fraction(c)
                if c:
                    clean[(int(exp[0]), int(exp[1]))] = c
        self._terms = clean
        self._hash = None

    @classmethod
    def _raw(cls, terms: dict) -> "SPoly":
        p = cls.__new__(cls)
        p._terms = terms
        p._hash = None
        return p

    # constructors
    @classmethod
    def const(cls, c) -> "SPoly":
        return cls({(0, 0): c})

    @classmethod
    def monomial(cls, a: int, b: int, c=1) -> "SPoly":
        return cls({(a, b): c})

    @property
    def terms(self) -> dict:
        return dict(self._terms)

    def items(self):
        return self._terms.items()

    def coeff(self, a: int, b: int) -> Fraction:
        return self._terms.get((a, b), Fraction(0))

    def is_zero(self) -> bool:
        return not self._terms

    def degree(self) -> int:
        if not self._terms:
            return -1
        return max(a + b for a, b in self._terms)

    def is_homogeneous(self, k: int | None = None) -> bool:
        degs = {a + b for a, b in self._terms}
        if not degs:
            return True
        if len(degs) != 1:
            return False
        return k is None or degs == {k}

    # arithmetic
    def __add__(self, other):
        other = _coerce(other)
        out = dict(self._terms)
        for e, c in other._terms.items():
            v = out.get(e, 0) + c
            if v:
                out[e] = v
            else:
                out.pop(e, None)
        return SPoly._raw(out)

    __radd__ = __add__

    def __neg__(self):
        return SPoly._raw({e: -c for e, c in self._terms.items()})

    def __sub__(self, other):
        return self + (-_coerce(other))

    def __rsub__(self, other):
        return _coerce(other) - self

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            if not other:
                return SPoly._raw({})
            return SPoly._raw({e: c * other for e, c in self._terms.items()})
        other = _coerce(other)
        out: dict = {}
        for (a1, b1), c1 in self._terms.items():
            for (a2, b2), c2 in other._terms.items():
                e = (a1 + a2, b1 + b2)
                out[e] = out.get(e, 0) + c1 * c2
        return SPoly._raw({e: c for e, c in out.items() if c})

    __rmul__ = __mul__

    def __pow__(self, n: int):
        if n < 0:
            raise ValueError("negative power")
        result = ONE
        base = self
        while n:
            if n & 1:
                result = result * base
            base = base * base
            n >>= 1
        return result

    def scale(self, c) -> "SPoly":
        return self * Fraction(c)

    def __eq__(self, other):
        if isinstance(other, (int, Fraction)):
            other = SPoly.const(other)
        if not isinstance(other, SPoly):
            return NotImplemented
        return self._terms == other._terms

    def __hash__(self):
        if self._hash is None:
            self._hash = hash(frozenset(self._terms.items()))
        return self._hash

    def sorted_terms(self):
        return sorted(self._terms.items(), key=lambda t: _graded_lex_key(t[0]))

    def leading_coeff(self) -> Fraction:
        st = self.sorted_terms()
        return st[0][1] if st else Fraction(0)

    def homogeneous_part(self, k: int) -> "SPoly":
        return SPoly._raw({e: c for e, c in self._terms.items() if e[0] + e[1] == k})

    def __repr__(self):
        return f"SPoly({self})"

    def __str__(self):
        return format_poly(self)


def _coerce(x) -> SPoly:
    if isinstance(x, SPoly):
        return x
    if isinstance(x, Character):
        return linear_form(x)
    if isinstance(x, (int, Fraction)):
        return SPoly.const(x)
    raise TypeError(f"cannot coerce {type(x).__name__} to SPoly")


ZERO = SPoly()
ONE = SPoly.const(1)
T1 = SPoly.monomial(1, 0)
T2 = SPoly.monomial(0, 1)


def _fmt_coeff(c: Fraction) -> str:
    return str(c.numerator) if c.denominator == 1 else f"{c.numerator}/{c.denominator}"


def format_poly(p: SPoly) -> str:
    """Render as e.g. ``"t1^2 - 2*t1*t2"``; graded-lex term order."""
    terms = p.sorted_terms()
    if not terms:
        return "0"
    out = []
    for idx, ((a, b), c) in enumerate(terms):
        neg = c < 0
        mag = -c if neg else c
        factors = []
        if a:
            factors.append("t1" if a == 1 else f"t1^{a}")
        if b:
            factors.append("t2" if b == 1 else f"t2^{b}")
        mono = "*".join(factors)
        if not mono:
            body = _fmt_coeff(mag)
        elif mag == 1:
            body = mono
        else:
            body = f"{_fmt_coeff(mag)}*{mono}"
        if idx == 0:
            out.append(f"-{body}" if neg else body)
        else:
            out.append(f" - {body}" if neg else f" + {body}")
    return "".join(out)


def parse_poly(text: str) -> SPoly:
    """Inverse of :func:`format_poly` (accepts the same restricted syntax)."""
    s = text.replace(" ", "")
    if not s:
        raise ValueError("empty polynomial string")
    if s[0] not in "+-":
        s = "+" + s
    result: dict = {}
    i = 0
    while i < len(s):
        sign = -1 if s[i] == "-" else 1
        j = i + 1
        while j < len(s) and s[j] not in "+-":
            j += 1
        chunk = s[i + 1 : j]
        i = j
        coeff = Fraction(sign)
        a = b = 0
        for factor in chunk.split("*"):
            if factor.startswith("t1") or factor.startswith("t2"):
                e = int(factor[3:]) if "^" in factor else 1
                if factor.startswith("t1"):
                    a += e
                else:
                    b += e
            else:
                coeff *= Fraction(factor)
        result[(a, b)] = result.get((a, b), 0) + coeff
    return SPoly(result)


def linear_form(chi) -> SPoly:
    """The degree-one element c1*t1 + c2*t2 attached to a character."""
    c1, c2 = chi
    return SPoly({(1, 0): c1, (0, 1): c2})


def product_of_forms(chars: Iterable) -> SPoly:
    return reduce(lambda acc, ch: acc * linear_form(ch), chars, ONE)


def _divide_linear(n: SPoly, c1: int, c2: int) -> SPoly:
    # eliminate t2 when c2 != 0, else t1
    if c2 == 0 and c1 == 0:
        raise ValueError("division by the zero character")
    if c2 != 0:
        lead, other, lead_idx = Fraction(c2), Fraction(c1), 1
    else:
        lead, other, lead_idx = Fraction(c1), Fraction(c2), 0
    rem = dict(n._terms)
    quot: dict = {}
    while True:
        cands = [e for e in rem if e[lead_idx] > 0]
        if not cands:
            break
        e = max(cands, key=lambda x: (x[lead_idx], x))
        c = rem.pop(e)
        q = c / lead
        if lead_idx == 1:
            qe = (e[0], e[1] - 1)
            shifted = (qe[0] + 1, qe[1])
        else:
            qe = (e[0] - 1, e[1])
            shifted = (qe[0], qe[1] + 1)
        quot[qe] = quot.get(qe, 0) + q
        if other:
            v = rem.get(shifted, 0) - q * other
            if v:
                rem[shifted] = v
            else:
                rem.pop(shifted, None)
    if rem:
        raise NotDivisible(f"{format_poly(n)} is not divisible by {format_poly(linear_form((c1, c2)))}")
    return SPoly._raw({e: c for e, c in quot.items() if c})


def divide_exact(n: SPoly, factors: Iterable) -> SPoly:
    """Return q with ``n == q * prod(linear_form(f))``.

    Division proceeds one linear factor at a time; raises
    :class:`NotDivisible` as soon as one of them leaves a remainder.
    """
    q = n
    for f in factors:
        c1, c2 = f
        if c1 == 0 and c2 == 0:
            raise ValueError("zero character among divisors")
        q = _divide_linear(q, c1, c2)
    return q


def divides(n: SPoly, factors: Iterable) -> bool:
    try:
        divide_exact(n, factors)
    except NotDivisible:
        return False
    return True


def elementary_symmetric(values: Sequence[SPoly]) -> list[SPoly]:
    """[e_0, e_1, ..., e_m] of the given polynomials."""
    e = [ONE]
    for v in values:
        nxt = e + [ZERO]
        for j in range(len(e), 0, -1):
            nxt[j] = nxt[j] + e[j - 1] * v
        e = nxt
    return e


def _det(matrix: list[list[SPoly]]) -> SPoly:
    n = len(matrix)
    if n == 0:
        return ONE
    memo: dict = {}

    # Laplace expansion along rows, memoised on the set of used columns
    def minor(row: int, used: int) -> SPoly:
        if row == n:
            return ONE
        key = used
        if key in memo:
            return memo[key]
        total = ZERO
        sign = 1
        for col in range(n):
            if used >> col & 1:
                continue
            entry = matrix[row][col]
            if not entry.is_zero():
                sub = minor(row + 1, used | (1 << col))
                if not sub.is_zero():
                    term = entry * sub
                    total = total + term if sign > 0 else total - term
            sign = -sign
        memo[key] = total
        return total

    return minor(0, 0)


def schur_det(lam: Sequence[int], c: Sequence[SPoly], rows: int) -> SPoly:
    """Jacobi-Trudi determinant det(c[lam_i + s - i]) of size rows x rows.

    ``c[0]`` must be 1; indices outside ``0..len(c)-1`` read as zero.
    """
    parts = [p for p in lam if p]
    if len(parts) > rows:
        raise ValueError(f"partition {tuple(lam)} has more than {rows} parts")
    parts = parts + [0] * (rows - len(parts))

    def entry(j: int) -> SPoly:
        if 0 <= j < len(c):
            return _coerce(c[j])
        return ZERO

    matrix = [[entry(parts[i] + s - i) for s in range(rows)] for i in range(rows)]
    return _det(matrix)

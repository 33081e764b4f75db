"""Exact linear algebra over Q for degreewise slices of S-submodules of S^points.

A homogeneous tuple of degree k over N points is flattened to a vector of
length N*(k+1): coordinate ``p*(k+1) + j`` holds the coefficient of
``t1^(k-j) * t2^j`` at point p (point order first, then graded-lex).

Rows are kept as sparse ``{column: int}`` maps, primitive, with a positive
pivot; reduction is fraction-free so that no rational arithmetic happens in
the inner loop.
"""
from __future__ import annotations

from fractions import Fraction
from math import gcd, lcm
from typing import Iterable, Mapping, Sequence

from .charpoly import SPoly, ZERO


def _primitive(row: dict) -> dict:
    g = 0
    for v in row.values():
        g = gcd(g, v)
        if g == 1:
            break
    first = row[min(row)]
    if first < 0:
        g = -g
    if g not in (1,):
        row = {c: v // g for c, v in row.items()}
    return row


def _to_int_row(vec) -> dict:
    """Sparse integer row proportional to ``vec`` (dict or sequence)."""
    items = vec.items() if isinstance(vec, Mapping) else enumerate(vec)
    fr = {c: Fraction(v) for c, v in items if v}
    if not fr:
        return {}
    den = 1
    for v in fr.values():
        den = lcm(den, v.denominator)
    return {c: int(v * den) for c, v in fr.items()}


class Echelon:
    """Incrementally maintained reduced row-echelon basis (pivot -> row)."""

    __slots__ = ("ncols", "rows")

    def __init__(self, ncols: int, vectors: Iterable = ()):
        self.ncols = ncols
        self.rows: dict[int, dict] = {}
        for v in vectors:
            self.insert(v)

    def copy(self) -> "Echelon":
        e = Echelon(self.ncols)
        e.rows = dict(self.rows)
        return e

    @property
    def rank(self) -> int:
        return len(self.rows)

    def _reduce(self, row: dict) -> dict:
        row = dict(row)
        # pivots in increasing order; reduced rows have no other pivot columns
        for p in sorted(c for c in row if c in self.rows):
            a = row.get(p)
            if not a:
                continue
            b = self.rows[p]
            bp = b[p]
            g = gcd(a, bp)
            fa, fb = bp // g, a // g
            new = {c: v * fa for c, v in row.items()}
            for c, v in b.items():
                nv = new.get(c, 0) - fb * v
                if nv:
                    new[c] = nv
                else:
                    new.pop(c, None)
            row = new
        return row

    def reduce(self, vec) -> dict:
        row = _to_int_row(vec)
        if not row:
            return {}
        row = self._reduce(row)
        return _primitive(row) if row else row

    def contains(self, vec) -> bool:
        return not self.reduce(vec)

    def insert(self, vec) -> bool:
        row = self.reduce(vec)
        if not row:
            return False
        p = min(row)
        pv = row[p]
        for q, b in list(self.rows.items()):
            a = b.get(p)
            if not a:
                continue
            g = gcd(a, pv)
            fb, fr = pv // g, a // g
            new = {c: v * fb for c, v in b.items()}
            for c, v in row.items():
                nv = new.get(c, 0) - fr * v
                if nv:
                    new[c] = nv
                else:
                    new.pop(c, None)
            self.rows[q] = _primitive(new)
        self.rows[p] = row
        return True

    def pivots(self) -> list[int]:
        return sorted(self.rows)

    def basis(self) -> list[list[Fraction]]:
        """Dense RREF rows (pivot entries equal to 1), sorted by pivot."""
        out = []
        for p in self.pivots():
            r = self.rows[p]
            pv = r[p]
            dense = [Fraction(0)] * self.ncols
            for c, v in r.items():
                dense[c] = Fraction(v, pv)
            out.append(dense)
        return out

    def int_rows(self) -> list[dict]:
        return [self.rows[p] for p in self.pivots()]


def reduce_exact(ech: Echelon, vec: Mapping) -> dict:
    """vec minus its component along the pivots of ``ech``, in exact rationals.

    Unlike ``Echelon.reduce`` no rescaling happens, so the map is linear.
    """
    row = {c: Fraction(v) for c, v in vec.items() if v}
    for p in ech.pivots():
        a = row.get(p)
        if not a:
            continue
        b = ech.rows[p]
        f = a / b[p]
        for c, v in b.items():
            nv = row.get(c, 0) - f * v
            if nv:
                row[c] = nv
            else:
                row.pop(c, None)
    return row


def rref(vectors: Iterable, ncols: int) -> tuple[list[list[Fraction]], list[int]]:
    e = Echelon(ncols, vectors)
    return e.basis(), e.pivots()


def kernel(matrix: Sequence[Sequence], ncols: int) -> list[list[Fraction]]:
    """Basis of {x : M x = 0} for the m x ncols matrix M (given by rows)."""
    e = Echelon(ncols, matrix)
    piv = e.pivots()
    pivset = set(piv)
    basis = []
    for f in range(ncols):
        if f in pivset:
            continue
        x = [Fraction(0)] * ncols
        x[f] = Fraction(1)
        for p in piv:
            r = e.rows[p]
            v = r.get(f)
            if v:
                x[p] = Fraction(-v, r[p])
        basis.append(x)
    return basis


# -- homogeneous tuples <-> vectors -------------------------------------------

def poly_to_coords(poly: SPoly, k: int) -> list[Fraction]:
    """Coefficients of t1^(k-j) t2^j, j = 0..k; poly must be homogeneous of degree k."""
    out = [Fraction(0)] * (k + 1)
    for (a, b), c in poly.items():
        if a + b != k:
            raise ValueError(f"term t1^{a}*t2^{b} is not of degree {k}")
        out[b] = c
    return out


def coords_to_poly(coords: Sequence, k: int) -> SPoly:
    return SPoly({(k - j, j): c for j, c in enumerate(coords) if c})


def tuple_to_vector(values: Mapping[int, SPoly] | Sequence[SPoly], npoints: int, k: int) -> dict:
    """Sparse vector of a point tuple; missing points read as zero."""
    items = values.items() if isinstance(values, Mapping) else enumerate(values)
    vec = {}
    for p, poly in items:
        if poly is None or poly.is_zero():
            continue
        base = p * (k + 1)
        for (a, b), c in poly.items():
            if a + b != k:
                raise ValueError(f"entry at point {p} is not homogeneous of degree {k}")
            vec[base + b] = c
    return vec


def vector_to_tuple(vec, npoints: int, k: int) -> list[SPoly]:
    items = vec.items() if isinstance(vec, Mapping) else enumerate(vec)
    terms: list[dict] = [dict() for _ in range(npoints)]
    for c, v in items:
        if v:
            p, j = divmod(c, k + 1)
            terms[p][(k - j, j)] = v
    return [SPoly(t) if t else ZERO for t in terms]


def shift_vector(vec: Mapping[int, object], k: int, var: int) -> dict:
    """Multiply a degree-k vector by t1 (var=0) or t2 (var=1); result has degree k+1."""
    out = {}
    for c, v in vec.items():
        p, j = divmod(c, k + 1)
        out[p * (k + 2) + j + var] = v
    return out


class GradedSubspace:
    """A Q-subspace of the degree-k homogeneous tuples over ``npoints`` points."""

    __slots__ = ("npoints", "degree", "_ech")

    def __init__(self, npoints: int, degree: int, vectors: Iterable = ()):
        self.npoints = npoints
        self.degree = degree
        self._ech = Echelon(npoints * (degree + 1), vectors)

    @classmethod
    def _from_echelon(cls, npoints: int, degree: int, ech: Echelon) -> "GradedSubspace":
        g = cls.__new__(cls)
        g.npoints = npoints
        g.degree = degree
        g._ech = ech
        return g

    @classmethod
    def from_tuples(cls, npoints: int, degree: int, tuples: Iterable) -> "GradedSubspace":
        return cls(npoints, degree, (tuple_to_vector(t, npoints, degree) for t in tuples))

    @classmethod
    def full(cls, npoints: int, degree: int) -> "GradedSubspace":
        n = npoints * (degree + 1)
        return cls(npoints, degree, ({i: 1} for i in range(n)))

    @property
    def ncols(self) -> int:
        return self.npoints * (self.degree + 1)

    @property
    def dim(self) -> int:
        return self._ech.rank

    def __len__(self):
        return self.dim

    def echelon(self) -> Echelon:
        return self._ech

    def basis(self) -> list[list[Fraction]]:
        return self._ech.basis()

    def basis_tuples(self) -> list[list[SPoly]]:
        return [vector_to_tuple(r, self.npoints, self.degree) for r in self._ech.int_rows()]

    def int_rows(self) -> list[dict]:
        return self._ech.int_rows()

    def contains(self, vec) -> bool:
        return self._ech.contains(vec)

    def contains_tuple(self, values) -> bool:
        return self.contains(tuple_to_vector(values, self.npoints, self.degree))

    def is_subspace_of(self, other: "GradedSubspace") -> bool:
        return all(other.contains(r) for r in self.int_rows())

    def __eq__(self, other):
        if not isinstance(other, GradedSubspace):
            return NotImplemented
        return (self.npoints, self.degree, self.dim) == (other.npoints, other.degree, other.dim) and \
            self.is_subspace_of(other)

    def __repr__(self):
        return f"GradedSubspace(npoints={self.npoints}, degree={self.degree}, dim={self.dim})"

    def sum(self, other: "GradedSubspace") -> "GradedSubspace":
        _check_compatible(self, other)
        ech = self._ech.copy()
        for r in other.int_rows():
            ech.insert(r)
        return GradedSubspace._from_echelon(self.npoints, self.degree, ech)

    def times_s1(self) -> "GradedSubspace":
        """span{t1*x, t2*x : x in self}, a subspace of degree k+1."""
        k = self.degree
        ech = Echelon(self.npoints * (k + 2))
        for r in self.int_rows():
            ech.insert(shift_vector(r, k, 0))
            ech.insert(shift_vector(r, k, 1))
        return GradedSubspace._from_echelon(self.npoints, k + 1, ech)


def _check_compatible(a: GradedSubspace, b: GradedSubspace) -> None:
    if a.npoints != b.npoints or a.degree != b.degree:
        raise ValueError("subspaces live in different ambient spaces")


def graded_intersect(a: GradedSubspace, b: GradedSubspace) -> GradedSubspace:
    """Intersection of two spans (Zassenhaus: reduce [A|A] over [B|0])."""
    _check_compatible(a, b)
    n = a.ncols
    if a.dim == 0 or b.dim == 0:
        return GradedSubspace(a.npoints, a.degree)
    if b.dim == n:
        return a
    if a.dim == n:
        return b
    ech = Echelon(2 * n)
    for r in a.int_rows():
        row = dict(r)
        row.update({c + n: v for c, v in r.items()})
        ech.insert(row)
    for r in b.int_rows():
        ech.insert(r)
    inter = [{c - n: v for c, v in row.items()} for p, row in ech.rows.items() if p >= n]
    return GradedSubspace(a.npoints, a.degree, inter)

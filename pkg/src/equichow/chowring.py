"""Equivariant and ordinary Chow rings of Hilb^d(X) via fixed-point congruences.

Classes are point tuples: lists of polynomials in S = Q[t1, t2] indexed by
the torus-fixed points in canonical order.
"""
from __future__ import annotations

import logging
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from itertools import product
from math import comb, gcd, lcm
from typing import Mapping, Sequence

from .charpoly import (
    ONE,
    ZERO,
    Character,
    NotDivisible,
    SPoly,
    divide_exact,
    divides,
    elementary_symmetric,
    linear_form,
    product_of_forms,
    schur_det,
)
from .fixedloci import FixedComponent, Factor, components, fixed_point_data, relevant_subtori
from .linalg import GradedSubspace, graded_intersect, reduce_exact, tuple_to_vector, vector_to_tuple
from .staircases import cell_character, staircase_cells
from .toricfan import Fan, Subtorus, chart_basis, line_character

log = logging.getLogger(__name__)


class InfiniteGradedPiece(RuntimeError):
    pass


class NotIntegral(ArithmeticError):
    """A localization sum that does not land in S."""


class RankMismatch(RuntimeError):
    pass


# -- generators -------------------------------------------------------------

def box_partitions(rows: int, cols: int):
    """Partitions with at most ``rows`` parts, each at most ``cols``."""
    def gen(n_rows, cap):
        if n_rows == 0:
            yield ()
            return
        for first in range(cap, -1, -1):
            for tail in gen(n_rows - 1, first):
                yield (first,) + tail
    for lam in gen(rows, cols):
        yield tuple(p for p in lam if p)


def graded_piece(weights: tuple[int, int], n: int) -> list[tuple[int, int]]:
    """Cells (a, b) with a*alpha + b*beta == n, for positive weights."""
    alpha, beta = weights
    if alpha <= 0 or beta <= 0:
        raise InfiniteGradedPiece(f"weights {weights} do not give finite graded pieces")
    out = []
    for a in range(n // alpha + 1):
        rest = n - a * alpha
        if rest >= 0 and rest % beta == 0:
            out.append((a, rest // beta))
    return out


def grassmann_factor_generators(fan: Fan, factor: Factor, staircases: Sequence) -> list[dict]:
    """Restricted Schur-determinant generators of a graded Hilbert scheme factor.

    Returns one dict ``staircase -> SPoly`` per generator.
    """
    chart = chart_basis(fan, factor.site)
    alpha, beta = factor.weights
    sign = 1
    if alpha < 0 and beta < 0:
        sign = -1
    weights = (sign * alpha, sign * beta)
    if weights[0] <= 0 or weights[1] <= 0:
        raise InfiniteGradedPiece(f"chart {factor.site}: weights {factor.weights} have opposite signs")

    per_weight = []
    for n_signed, h in factor.hilbert:
        n = sign * n_signed
        piece = graded_piece(weights, n)
        rows = len(piece) - h
        if rows < 0:
            raise InfiniteGradedPiece(f"Hilbert function {h} exceeds piece dimension {len(piece)}")
        chern = {}
        for lam in staircases:
            roots = [linear_form(cell_character(c, chart)) for c in staircase_cells(lam)
                     if c[0] * weights[0] + c[1] * weights[1] == n]
            if len(roots) != h:
                raise ValueError(f"staircase {lam} does not have Hilbert function value {h} at {n}")
            chern[lam] = elementary_symmetric(roots)
        dets = []
        for part in box_partitions(rows, h):
            dets.append({lam: schur_det(part, chern[lam], rows) for lam in staircases})
        per_weight.append(dets)

    gens = []
    for choice in product(*per_weight):
        g = {}
        for lam in staircases:
            val = ONE
            for dets in choice:
                val = val * dets[lam]
            g[lam] = val
        if any(not v.is_zero() for v in g.values()):
            gens.append(g)
    return gens


def line_block_class(l: int, dj: int, chi) -> SPoly:
    """Value at a point with l pieces at the first endpoint."""
    coeff = Fraction(l * (l + 1), 2) - Fraction((dj - l) * (dj - l + 1), 2)
    return linear_form(chi) * coeff


def line_factor_generators(fan: Fan, factor: Factor, occupations: Sequence[tuple[int, ...]]) -> list[dict]:
    """Products of powers of the per-block classes; one dict ``ls -> SPoly`` each."""
    chi = line_character(fan, factor.site, fan.line_endpoints(factor.site)[0])
    blocks = factor.blocks
    classes = [{ls: line_block_class(ls[j], dj, chi) for ls in occupations}
               for j, (_, dj) in enumerate(blocks)]
    gens = []
    for powers in product(*(range(dj + 1) for _, dj in blocks)):
        g = {}
        for ls in occupations:
            val = ONE
            for j, m in enumerate(powers):
                if m:
                    val = val * classes[j][ls] ** m
            g[ls] = val
        gens.append(g)
    return gens


def factor_generators(fan: Fan, factor: Factor, coords: Sequence) -> list[dict]:
    distinct = sorted(set(coords), reverse=True)
    if factor.kind == "point":
        return [{c: ONE for c in distinct}]
    if factor.kind == "graded":
        return grassmann_factor_generators(fan, factor, distinct)
    return line_factor_generators(fan, factor, distinct)


def _component_generators(fan: Fan, c: FixedComponent) -> list[dict]:
    per_factor = []
    for k, f in enumerate(c.factors):
        per_factor.append(factor_generators(fan, f, [c.coords[p][k] for p in c.points]))
    gens = []
    for choice in product(*per_factor):
        g = {}
        for p in c.points:
            val = ONE
            for k, fg in enumerate(choice):
                val = val * fg[c.coords[p][k]]
            g[p] = val
        gens.append(g)
    return gens


@lru_cache(maxsize=None)
def _generators_cached(fan: Fan, d: int, w: Subtorus) -> tuple:
    return tuple(tuple(_component_generators(fan, c)) for c in components(fan, d, w))


def component_generators(fan: Fan, d: int, c: FixedComponent) -> list[dict]:
    """Generators of the component's equivariant Chow ring, as dicts point -> SPoly."""
    comps = components(fan, d, c.w)
    try:
        idx = comps.index(c)
    except ValueError:
        return _component_generators(fan, c)
    return list(_generators_cached(fan, d, c.w)[idx])


def generator_degree(g: Mapping[int, SPoly]) -> int:
    degs = {v.degree() for v in g.values() if not v.is_zero()}
    if len(degs) > 1:
        raise ValueError(f"generator is not homogeneous: degrees {sorted(degs)}")
    return degs.pop() if degs else 0


# -- localization -----------------------------------------------------------

def bott_pairing(c: FixedComponent, alpha: Mapping[int, SPoly], g: Mapping[int, SPoly]) -> SPoly:
    """sum_p alpha_p g_p / e_p over the component's points, if it lies in S."""
    euler = c.euler()
    all_factors = [ch for p in c.points for ch in c.euler_chars[p]]
    num = ZERO
    for p in c.points:
        a = alpha.get(p, ZERO)
        if a.is_zero() or g[p].is_zero():
            continue
        term = a * g[p]
        for q in c.points:
            if q != p:
                term = term * euler[q]
        num = num + term
    try:
        return divide_exact(num, all_factors)
    except NotDivisible as exc:
        raise NotIntegral(str(exc)) from None


def _canonical_form(ch: Character) -> Character:
    a, b = ch
    g = gcd(abs(a), abs(b))
    a, b = a // g, b // g
    if a < 0 or (a == 0 and b < 0):
        a, b = -a, -b
    return Character(a, b)


@dataclass(frozen=True)
class Relation:
    """sum_q coeffs[q] * alpha_q == 0 modulo prod(linear_form(f) for f in modulus)."""

    coeffs: dict = field(hash=False)
    modulus: tuple[Character, ...]

    def modulus_poly(self) -> SPoly:
        return product_of_forms(self.modulus)

    def holds(self, alpha: Mapping[int, SPoly] | Sequence[SPoly]) -> bool:
        get = alpha.get if isinstance(alpha, Mapping) else (lambda p, default=ZERO: alpha[p])
        total = ZERO
        for q, dq in self.coeffs.items():
            a = get(q, ZERO)
            if not a.is_zero():
                total = total + dq * a
        return divides(total, self.modulus)

    def key(self):
        return (tuple(sorted((q, v) for q, v in self.coeffs.items() if not v.is_zero())
                      ), self.modulus)


def _scale_primitive(coeffs: dict) -> dict:
    """Scale so all coefficients are integral with gcd 1, first nonzero leading coefficient positive."""
    nz = [(q, v) for q, v in sorted(coeffs.items()) if not v.is_zero()]
    if not nz:
        return {}
    den = 1
    num_gcd = 0
    for _, v in nz:
        for _, c in v.items():
            den = lcm(den, c.denominator)
    for _, v in nz:
        for _, c in v.items():
            num_gcd = gcd(num_gcd, int(c * den))
    factor = Fraction(den, num_gcd)
    if nz[0][1].leading_coeff() < 0:
        factor = -factor
    return {q: v * factor for q, v in nz}


def normalize_relation(coeffs: Mapping[int, SPoly], modulus_chars: Sequence[Character]) -> Relation | None:
    """Cancel common linear factors of coefficients and modulus; None if trivial."""
    mult: dict = {}
    for ch in modulus_chars:
        cf = _canonical_form(ch)
        mult[cf] = mult.get(cf, 0) + 1
    coeffs = {q: v for q, v in coeffs.items() if not v.is_zero()}
    if not coeffs:
        return None
    for direction in sorted(mult):
        m = mult[direction]
        while m and all(divides(v, [direction]) for v in coeffs.values()):
            coeffs = {q: divide_exact(v, [direction]) for q, v in coeffs.items()}
            m -= 1
        mult[direction] = m
    modulus = tuple(ch for ch in sorted(mult) for _ in range(mult[ch]))
    if not modulus:
        return None
    return Relation(_scale_primitive(coeffs), modulus)


@lru_cache(maxsize=None)
def _congruences_cached(fan: Fan, d: int, w: Subtorus) -> tuple:
    out = []
    for c, gens in zip(components(fan, d, w), _generators_cached(fan, d, w)):
        out.append(tuple(_congruence_system(c, gens)))
    return tuple(out)


def _congruence_system(c: FixedComponent, gens) -> list[Relation]:
    if c.dimension == 0:
        return []
    euler = c.euler()
    modulus = [ch for p in c.points for ch in c.euler_chars[p]]
    rels = []
    seen = set()
    for g in gens:
        coeffs = {}
        for q in c.points:
            val = g[q]
            for p in c.points:
                if p != q:
                    val = val * euler[p]
            coeffs[q] = val
        rel = normalize_relation(coeffs, modulus)
        if rel is not None and rel.key() not in seen:
            seen.add(rel.key())
            rels.append(rel)
    return rels


def congruence_system(fan: Fan, d: int, c: FixedComponent) -> list[Relation]:
    """Congruence relations cutting out the component's module inside S^points."""
    comps = components(fan, d, c.w)
    if c in comps:
        return list(_congruences_cached(fan, d, c.w)[comps.index(c)])
    return _congruence_system(c, _component_generators(fan, c))


@dataclass(frozen=True)
class MembershipWitness:
    w: Subtorus
    component_points: tuple[int, ...]
    relation: Relation


def membership(alpha: Sequence[SPoly], fan: Fan, d: int):
    """(True, None) if alpha lies in A_T(Hilb^d), else (False, violated relation)."""
    npts = len(fixed_point_data(fan, d).points)
    if len(alpha) != npts:
        raise ValueError(f"expected {npts} entries, got {len(alpha)}")
    for w in relevant_subtori(fan, d):
        for c, rels in zip(components(fan, d, w), _congruences_cached(fan, d, w)):
            for rel in rels:
                if not rel.holds(alpha):
                    return False, MembershipWitness(w, c.points, rel)
    return True, None


# -- graded pieces ----------------------------------------------------------

def _monomials(k: int):
    return [SPoly.monomial(k - j, j) for j in range(k + 1)]


def subtorus_graded_module(fan: Fan, d: int, w, k: int) -> GradedSubspace:
    """Degree-k slice of the direct sum of the component modules of one subtorus."""
    w = Subtorus.of(w)
    npts = len(fixed_point_data(fan, d).points)
    vectors = []
    for c, gens in zip(components(fan, d, w), _generators_cached(fan, d, w)):
        if c.dimension == 0:
            p = c.points[0]
            vectors.extend({p * (k + 1) + j: 1} for j in range(k + 1))
            continue
        for g in gens:
            e = generator_degree(g)
            if e > k:
                continue
            for m in _monomials(k - e):
                vectors.append(tuple_to_vector({p: m * v for p, v in g.items()}, npts, k))
    return GradedSubspace(npts, k, vectors)


def equivariant_graded_basis(fan: Fan, d: int, k: int) -> GradedSubspace:
    """Degree-k part of A_T(Hilb^d X) inside S^points."""
    npts = len(fixed_point_data(fan, d).points)
    result = GradedSubspace.full(npts, k)
    for w in relevant_subtori(fan, d):
        result = graded_intersect(result, subtorus_graded_module(fan, d, w, k))
    return result


def _basis_worker(args):
    rays, name, d, k = args
    from .toricfan import build_fan
    sub = equivariant_graded_basis(build_fan(rays, name), d, k)
    return [dict(r) for r in sub.int_rows()]


def equivariant_graded_bases(fan: Fan, d: int, cap: int, jobs: int = 1) -> list[GradedSubspace]:
    """Degree slices 0..cap; with jobs > 1 degrees are computed in worker processes."""
    npts = len(fixed_point_data(fan, d).points)
    if jobs <= 1 or cap == 0:
        return [equivariant_graded_basis(fan, d, k) for k in range(cap + 1)]
    with ProcessPoolExecutor(max_workers=jobs) as pool:
        rows = list(pool.map(_basis_worker, [(fan.rays, fan.name, d, k) for k in range(cap + 1)]))
    return [GradedSubspace(npts, k, r) for k, r in enumerate(rows)]


# -- Betti numbers ----------------------------------------------------------

def _generic_cocharacters(chars, count: int = 2):
    found = []
    n = 1
    while len(found) < count:
        for lam in ((1, n), (n, -1)):
            if all(ch.pair(lam) != 0 for ch in chars) and lam not in found:
                found.append(lam)
        n += 1
    return found[:count]


def betti_for_cocharacter(fan: Fan, d: int, lam) -> list[int]:
    data = fixed_point_data(fan, d)
    betti = [0] * (2 * d + 1)
    for p in range(len(data.points)):
        chars = data.all_tangent(p)
        pos = sum(1 for ch in chars if ch.pair(lam) > 0)
        betti[pos] += 1
    return betti


def betti_bb(fan: Fan, d: int) -> list[int]:
    """Even Betti numbers b_0, b_2, ..., b_4d from a Bialynicki-Birula decomposition."""
    data = fixed_point_data(fan, d)
    chars = {ch for p in range(len(data.points)) for ch in data.all_tangent(p)}
    lam1, lam2 = _generic_cocharacters(chars)
    b1 = betti_for_cocharacter(fan, d, lam1)
    b2 = betti_for_cocharacter(fan, d, lam2)
    if b1 != b2:
        raise RuntimeError(f"Betti numbers depend on the cocharacter: {lam1}->{b1}, {lam2}->{b2}")
    return b1


def gottsche_poincare(b0: int, b2: int, b4: int, d: int) -> list[list[int]]:
    """Rows n = 0..d of prod_k (1-z^(2k-2)q^k)^-b0 (1-z^(2k)q^k)^-b2 (1-z^(2k+2)q^k)^-b4.

    Row n lists the coefficients of z^0, z^2, ..., z^(4n) in the q^n term.
    """
    series = {(0, 0): 1}  # (q degree, z^2 degree) -> coefficient
    for k in range(1, d + 1):
        for b, zshift in ((b0, k - 1), (b2, k), (b4, k + 1)):
            if b == 0:
                continue
            # (1 - x)^-b = sum_n C(b+n-1, n) x^n with x = z^(2*zshift) q^k
            new: dict = {}
            for (qd, zd), c in series.items():
                n = 0
                while qd + n * k <= d:
                    key = (qd + n * k, zd + n * zshift)
                    new[key] = new.get(key, 0) + c * comb(b + n - 1, n)
                    n += 1
            series = new
    rows = []
    for n in range(d + 1):
        row = [0] * (2 * n + 1)
        for (qd, zd), c in series.items():
            if qd == n:
                row[zd] += c
        rows.append(row)
    return rows


def freeness_dims(betti: Sequence[int], cap: int) -> list[int]:
    """dim A_T^k of a free S-module with generators in degrees given by betti."""
    return [sum(betti[j] * (k - j + 1) for j in range(min(k, len(betti) - 1) + 1)) for k in range(cap + 1)]


# -- ordinary Chow ring -----------------------------------------------------

def _solve(basis: list[dict], target: dict) -> list[Fraction] | None:
    """Coefficients c with sum c_i basis_i == target (exact), or None."""
    cols = sorted({c for b in basis for c in b} | set(target))
    n = len(basis)
    rows = [[Fraction(b.get(col, 0)) for b in basis] + [Fraction(target.get(col, 0))] for col in cols]
    piv_cols = []
    r = 0
    for j in range(n):
        pr = next((i for i in range(r, len(rows)) if rows[i][j]), None)
        if pr is None:
            continue
        rows[r], rows[pr] = rows[pr], rows[r]
        inv = 1 / rows[r][j]
        rows[r] = [x * inv for x in rows[r]]
        for i in range(len(rows)):
            if i != r and rows[i][j]:
                f = rows[i][j]
                rows[i] = [a - f * b for a, b in zip(rows[i], rows[r])]
        piv_cols.append(j)
        r += 1
    if any(row[n] for row in rows[r:]):
        return None
    sol = [Fraction(0)] * n
    for i, j in enumerate(piv_cols):
        sol[j] = rows[i][n]
    return sol


@dataclass
class GradedRingPresentation:
    fan: Fan
    d: int
    cap: int
    equivariant_dims: list[int]
    betti: list[int]
    basis: list[tuple[int, list[SPoly]]]  # (degree, point tuple)
    constants: dict  # (i, j) -> {m: Fraction}, i <= j

    def product(self, i: int, j: int) -> dict:
        return self.constants.get((min(i, j), max(i, j)), {})

    def basis_in_degree(self, k: int) -> list[int]:
        return [i for i, (deg, _) in enumerate(self.basis) if deg == k]


def pointwise_product(x: Sequence[SPoly], y: Sequence[SPoly]) -> list[SPoly]:
    return [a * b for a, b in zip(x, y)]


def chow_structure_constants(fan: Fan, d: int, cap: int | None = None, jobs: int = 1,
                             bases: list[GradedSubspace] | None = None) -> GradedRingPresentation:
    """Ordinary Chow ring A^*(Hilb^d) = A_T / S^+ A_T in degrees <= cap."""
    cap = 2 * d if cap is None else cap
    npts = len(fixed_point_data(fan, d).points)
    V = bases if bases is not None else equivariant_graded_bases(fan, d, cap, jobs)
    quot_ech = []  # per degree: W_k echelon
    lifts = []  # per degree: list of int-row dicts
    betti = []
    for k in range(cap + 1):
        Wk = V[k - 1].times_s1() if k else GradedSubspace(npts, 0)
        if Wk.dim > V[k].dim or not Wk.is_subspace_of(V[k]):
            raise RankMismatch(f"degree {k}: S1*A_T^{k - 1} is not inside A_T^{k}")
        ech = Wk.echelon().copy()
        chosen = []
        for row in V[k].int_rows():
            if ech.insert(row):
                chosen.append(row)
        if len(chosen) != V[k].dim - Wk.dim:
            raise RankMismatch(f"degree {k}: complement has wrong size")
        betti.append(len(chosen))
        quot_ech.append(Wk.echelon())
        lifts.append(chosen)

    basis = []
    index = {}
    for k in range(cap + 1):
        for a, row in enumerate(lifts[k]):
            index[(k, a)] = len(basis)
            basis.append((k, vector_to_tuple(row, npts, k)))

    reduced_lifts = [[reduce_exact(quot_ech[k], r) for r in lifts[k]] for k in range(cap + 1)]
    constants = {}
    for i, (ki, xi) in enumerate(basis):
        for j in range(i, len(basis)):
            kj, xj = basis[j]
            m = ki + kj
            if m > cap:
                continue
            prod_vec = tuple_to_vector(pointwise_product(xi, xj), npts, m)
            if not V[m].contains(prod_vec):
                raise RankMismatch(f"product of basis elements {i}, {j} left A_T")
            rem = reduce_exact(quot_ech[m], prod_vec)
            if not rem:
                continue
            coeffs = _solve(reduced_lifts[m], rem)
            if coeffs is None:
                raise RankMismatch(f"product {i}*{j} not expressible in the degree-{m} basis")
            entry = {index[(m, a)]: c for a, c in enumerate(coeffs) if c}
            if entry:
                constants[(i, j)] = entry
    V_dims = [v.dim for v in V]
    return GradedRingPresentation(fan, d, cap, V_dims, betti, basis, constants)

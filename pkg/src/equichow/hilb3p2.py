"""The worked example Hilb^3(P^2): S_3 symmetry, named points and the published relation list.

P^2 = Proj k[x1, x2, x3] with t1 = x2/x1 and t2 = x3/x1.  A character
(c1, c2) is the Laurent monomial with exponent vector (-c1-c2, c1, c2);
chart j of the fan is the toric point p_{j+1}.  A permutation sigma acts
by x_i -> x_sigma(i), so p_j -> p_sigma(j).

Subtorus labels: the published array entry (a, b) is read literally as
the cocharacter w = (a, b).
"""
from __future__ import annotations

import os
import random
from fractions import Fraction
from functools import lru_cache
from itertools import permutations

from .charpoly import ZERO, Character, SPoly, divides, format_poly, linear_form, product_of_forms
from .chowring import equivariant_graded_basis, freeness_dims, membership
from .fixedloci import fixed_point_data, relevance_at_point
from .linalg import Echelon, kernel, reduce_exact, tuple_to_vector
from .staircases import MultiStaircase, cell_character, staircase_cells, staircase_from_characters
from .toricfan import P2, Subtorus, chart_basis

D = 3
PERMS = tuple(permutations(range(3)))  # sigma as (sigma(0), sigma(1), sigma(2))
TRANSPOSITIONS = {"12": (1, 0, 2), "13": (2, 1, 0), "23": (0, 2, 1)}
LABEL_MAP = "array entry (a,b) is the cocharacter w=(a,b) (literal)"

# monomials of each chart's staircase, as characters; charts 0, 1, 2 = p1, p2, p3
_ONE, _T1, _T2 = (0, 0), (1, 0), (0, 1)
REPRESENTATIVES = {
    "A": ([_ONE, _T1, _T2], [], []),
    "B": ([_ONE, _T1, (2, 0)], [], []),
    "C": ([_ONE, _T1], [_ONE], []),
    "D": ([_ONE, _T1], [], [_ONE]),
    "E": ([_ONE], [_ONE], [_ONE]),
}

EXPECTED_ARRAY = {
    "A": {(1, 0): 2, (0, 1): 2, (2, 1): 1, (1, 2): 1},
    "B": {(1, 0): 1, (0, 1): 3, (1, 1): 1, (1, 2): 1},
    "C": {(1, 0): 1, (0, 1): 3, (1, 1): 2},
    "D": {(1, 0): 2, (0, 1): 2, (1, 1): 2},
    "E": {(1, 0): 2, (0, 1): 2, (1, 1): 2},
}

_X1, _X2 = Character(1, 0), Character(0, 1)
_X2_MINUS_X1 = Character(-1, 1)
# (coefficients by point name, modulus as linear factors)
PUBLISHED_RELATIONS = [
    ({"a": 1, "a13": 1, "d": -1, "d13": -1}, [_X2, _X2]),
    ({"d": 1, "d13": -1}, [_X2]),
    ({"a": 1, "a13": -1}, [_X2]),
    ({"a": 1, "b": -1}, [Character(2, -1)]),
    ({"b": 1, "b13": -1}, [_X2]),
    ({"b": -1, "c": 3, "c12": -3, "b12": 1}, [_X1, _X1, _X1]),
    ({"b": -1, "c": 1, "c12": 1, "b12": -1}, [_X1, _X1]),
    ({"b": 3, "c": -1, "c12": 1, "b12": -3}, [_X1]),
    ({"b": 1, "b23": -1}, [_X2_MINUS_X1]),
    ({"c": 1, "d": -1, "c23": 1, "d23": -1}, [_X2_MINUS_X1, _X2_MINUS_X1]),
    ({"c": 1, "d": 1, "c23": -1, "d23": -1}, [_X2_MINUS_X1]),
    ({"c23": 1, "d23": -1}, [_X2_MINUS_X1]),
    ({"c": 1, "c13": -1}, [_X2]),
    ({"d": 1, "e": -2, "d12": 1}, [_X1, _X1]),
    ({"d": 1, "d12": -1}, [_X1]),
]


def act_on_character(sigma, chi) -> Character:
    c1, c2 = chi
    e = (-c1 - c2, c1, c2)
    out = [0, 0, 0]
    for i in range(3):
        out[sigma[i]] = e[i]
    return Character(out[1], out[2])


def act_on_poly(sigma, f: SPoly) -> SPoly:
    s1 = linear_form(act_on_character(sigma, (1, 0)))
    s2 = linear_form(act_on_character(sigma, (0, 1)))
    out = ZERO
    for (a, b), c in f.items():
        out = out + c * s1 ** a * s2 ** b
    return out


def point_from_characters(charts) -> MultiStaircase:
    return MultiStaircase(tuple(staircase_from_characters(chars, chart_basis(P2, j))
                                for j, chars in enumerate(charts)))


def act_on_point(sigma, z: MultiStaircase) -> MultiStaircase:
    charts = [[] for _ in range(3)]
    for j, lam in enumerate(z.stairs):
        chart = chart_basis(P2, j)
        charts[sigma[j]] = [act_on_character(sigma, cell_character(c, chart)) for c in staircase_cells(lam)]
    return point_from_characters(charts)


@lru_cache(maxsize=None)
def point_index() -> dict:
    data = fixed_point_data(P2, D)
    return {z: p for p, z in enumerate(data.points)}


@lru_cache(maxsize=None)
def permutation_on_points(sigma) -> tuple[int, ...]:
    data = fixed_point_data(P2, D)
    idx = point_index()
    return tuple(idx[act_on_point(sigma, z)] for z in data.points)


def named_point(name: str) -> int:
    """Index of a name such as ``"a"``, ``"A"`` or ``"d13"`` (a transposition image)."""
    letter, suffix = name[0].upper(), name[1:]
    p = point_index()[point_from_characters(REPRESENTATIVES[letter])]
    if suffix:
        p = permutation_on_points(TRANSPOSITIONS[suffix])[p]
    return p


@lru_cache(maxsize=None)
def point_names() -> tuple[str, ...]:
    """A readable name for each of the fixed points, e.g. ``A``, ``B12``, ``C123``."""
    npts = len(fixed_point_data(P2, D).points)
    names = [None] * npts
    cycles = {(1, 2, 0): "123", (2, 0, 1): "132"}
    suffixes = [("", (0, 1, 2))] + [(k, v) for k, v in TRANSPOSITIONS.items()] + \
        [(v, k) for k, v in cycles.items()]
    for letter in REPRESENTATIVES:
        base = named_point(letter)
        for suffix, sigma in suffixes:
            q = permutation_on_points(sigma)[base]
            if names[q] is None:
                names[q] = letter + suffix
    return tuple(names)


class PointRelation:
    """sum_q coeffs[q] * s(q) == 0 modulo prod(linear_form(f) for f in modulus)."""

    def __init__(self, coeffs: dict, modulus):
        self.coeffs = dict(coeffs)
        self.modulus = tuple(Character(*m) for m in modulus)

    def moved(self, sigma) -> "PointRelation":
        perm = permutation_on_points(sigma)
        return PointRelation({perm[q]: c for q, c in self.coeffs.items()},
                             [act_on_character(sigma, m) for m in self.modulus])

    def key(self):
        mod = product_of_forms(self.modulus)
        lead = mod.leading_coeff()
        return tuple(sorted(self.coeffs.items())), mod * (Fraction(1) / lead)

    def holds(self, values) -> bool:
        total = ZERO
        for q, c in self.coeffs.items():
            total = total + values[q] * c
        return divides(total, self.modulus)

    def render(self) -> str:
        names = point_names()
        body = ""
        for q, c in sorted(self.coeffs.items()):
            sign = "-" if c < 0 else "+"
            mag = "" if abs(c) == 1 else str(abs(c))
            body += f"{sign}{mag}{names[q].lower()}"
        return f"{body.lstrip('+')} = 0 mod ({format_poly(product_of_forms(self.modulus))})"


def published_relations() -> list[PointRelation]:
    return [PointRelation({named_point(n): c for n, c in coeffs.items()}, mod)
            for coeffs, mod in PUBLISHED_RELATIONS]


def relation_orbit(rel: PointRelation) -> list[PointRelation]:
    seen, out = set(), []
    for sigma in PERMS:
        moved = rel.moved(sigma)
        if moved.key() not in seen:
            seen.add(moved.key())
            out.append(moved)
    return out


def solution_space_dim(relations, k: int) -> int:
    """Dimension over Q of the degree-k tuples satisfying all relations."""
    npts = len(fixed_point_data(P2, D).points)
    ncols = npts * (k + 1)
    rows = []
    for rel in relations:
        m = len(rel.modulus)
        if m <= k:
            # multiples of the modulus in degree k, as coordinates of t1^(k-j) t2^j
            mod = product_of_forms(rel.modulus)
            ech = Echelon(k + 1, (tuple_to_vector([mod * SPoly.monomial(k - m - j, j)], 1, k)
                                  for j in range(k - m + 1)))
        else:
            ech = Echelon(k + 1)
        # column (p, j) maps to coeff * t1^(k-j) t2^j, then projected modulo the multiples
        images = []
        for col in range(ncols):
            p, j = divmod(col, k + 1)
            c = rel.coeffs.get(p)
            images.append(reduce_exact(ech, {j: c}) if c else {})
        for out_col in range(k + 1):
            row = {col: img[out_col] for col, img in enumerate(images) if img.get(out_col)}
            if row:
                rows.append(row)
    return len(kernel(rows, ncols))


def _check_array():
    out = []
    idx = point_index()
    for letter, expected in EXPECTED_ARRAY.items():
        p = idx[point_from_characters(REPRESENTATIVES[letter])]
        got = {tuple(w): n for w, n in relevance_at_point(P2, D, p).items()}
        exp = {tuple(Subtorus.of(w)): n for w, n in expected.items()}
        out.append({"point": letter, "expected": _array_json(exp), "computed": _array_json(got),
                    "passed": got == exp})
    return out


def _array_json(m: dict) -> list:
    return [{"cocharacter": list(w), "dimension": n} for w, n in sorted(m.items())]


def _random_combination(rng, basis_by_degree, k):
    """Random S-combination of degree k of basis elements of degrees <= k."""
    npts = len(basis_by_degree[0][0])
    total = [ZERO] * npts
    for j in range(k + 1):
        for b in basis_by_degree[j]:
            coeff = ZERO
            for i in range(k - j + 1):
                coeff = coeff + SPoly.monomial(k - j - i, i) * rng.randint(-3, 3)
            if not coeff.is_zero():
                total = [t + coeff * v for t, v in zip(total, b)]
    return total


def verify_paper_example(cap: int = 6, samples: int = 20, seed: int | None = None) -> dict:
    """Check the computed A_T(Hilb^3 P^2) against the published array and relations."""
    if seed is None:
        seed = int(os.environ.get("EQUICHOW_SEED", "0"))
    array = _check_array()

    families = []
    all_rels = []
    bases = [equivariant_graded_basis(P2, D, k) for k in range(cap + 1)]
    basis_tuples = [b.basis_tuples() for b in bases]
    for base_rel in published_relations():
        orbit = relation_orbit(base_rel)
        all_rels.extend(orbit)
        failures = []
        for rel in orbit:
            for k, tuples in enumerate(basis_tuples):
                for i, t in enumerate(tuples):
                    if not rel.holds(t):
                        failures.append({"relation": rel.render(), "degree": k, "basis_index": i})
        families.append({"relation": base_rel.render(), "orbit_size": len(orbit),
                         "passed": not failures, "failures": failures[:10]})

    expected = freeness_dims([1, 2, 5, 6, 5, 2, 1], cap)
    dims = []
    for k in range(cap + 1):
        sol = solution_space_dim(all_rels, k)
        dims.append({"degree": k, "solution_dim": sol, "computed_dim": bases[k].dim,
                     "freeness_dim": expected[k],
                     "passed": sol == bases[k].dim == expected[k]})

    rng = random.Random(seed)
    sample_failures = []
    for _ in range(samples):
        k1 = rng.randint(0, cap // 2)
        k2 = rng.randint(0, cap - k1)
        x = _random_combination(rng, basis_tuples, k1)
        y = _random_combination(rng, basis_tuples, k2)
        prod = [a * b for a, b in zip(x, y)]
        ok, _ = membership(prod, P2, D)
        if not ok or not all(r.holds(prod) for r in all_rels):
            sample_failures.append({"degrees": [k1, k2]})

    passed = (all(a["passed"] for a in array) and all(f["passed"] for f in families)
              and all(d["passed"] for d in dims) and not sample_failures)
    return {
        "fan": "P2",
        "d": D,
        "label_map": LABEL_MAP,
        "point_names": list(point_names()),
        "array": array,
        "relations": families,
        "relation_count": len(all_rels),
        "dimensions": dims,
        "samples": {"seed": seed, "count": samples, "failures": sample_failures},
        "passed": passed,
    }

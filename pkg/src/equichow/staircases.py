"""Staircases, torus-fixed points of the Hilbert scheme, and their weights.

A staircase in chart i is stored as the tuple of its column heights
``lam``: cell ``(a, b)`` (the monomial ``u^a v^b``) belongs to it iff
``b < lam[a]``.  Column heights form a partition.
"""
from __future__ import annotations

from collections import Counter
from dataclasses import dataclass
from functools import lru_cache
from itertools import product
from typing import Iterable, Sequence

from .charpoly import Character
from .toricfan import Chart, Fan, Subtorus, chart_basis, classify_fixed_locus

Partition = tuple


class UnsupportedSupport(ValueError):
    """The subscheme is not supported on the requested invariant line."""


@lru_cache(maxsize=None)
def partitions(n: int) -> tuple[Partition, ...]:
    """Partitions of n in decreasing lexicographic order: (n), (n-1,1), ..."""
    if n == 0:
        return ((),)

    def gen(rest, cap):
        if rest == 0:
            yield ()
            return
        for first in range(min(rest, cap), 0, -1):
            for tail in gen(rest - first, first):
                yield (first,) + tail

    return tuple(gen(n, n))


def partition_count(n: int) -> int:
    return len(partitions(n))


def conjugate(lam: Sequence[int]) -> Partition:
    lam = [p for p in lam if p]
    if not lam:
        return ()
    return tuple(sum(1 for p in lam if p > k) for k in range(lam[0]))


def staircase_cells(lam: Sequence[int]) -> list[tuple[int, int]]:
    return [(a, b) for a, h in enumerate(lam) for b in range(h)]


def staircase_from_cells(cells: Iterable[tuple[int, int]]) -> Partition:
    cells = set(cells)
    for a, b in cells:
        if a < 0 or b < 0:
            raise ValueError(f"cell {(a, b)} has a negative exponent")
        if (a > 0 and (a - 1, b) not in cells) or (b > 0 and (a, b - 1) not in cells):
            raise ValueError(f"cells do not form a staircase (missing a predecessor of {(a, b)})")
    if not cells:
        return ()
    width = max(a for a, _ in cells) + 1
    return tuple(sum(1 for (a, _) in cells if a == col) for col in range(width))


def character_to_cell(chi, chart: Chart) -> tuple[int, int]:
    """Exponents (a, b) with chi = a*u + b*v (u, v a Z-basis)."""
    u, v = chart.u, chart.v
    det = u.c1 * v.c2 - u.c2 * v.c1
    a_num = chi[0] * v.c2 - chi[1] * v.c1
    b_num = u.c1 * chi[1] - u.c2 * chi[0]
    if a_num % det or b_num % det:
        raise ValueError("chart characters are not a Z-basis")
    return a_num // det, b_num // det


def cell_character(cell, chart: Chart) -> Character:
    a, b = cell
    return Character(a * chart.u.c1 + b * chart.v.c1, a * chart.u.c2 + b * chart.v.c2)


def staircase_from_characters(chars: Iterable, chart: Chart) -> Partition:
    return staircase_from_cells(character_to_cell(c, chart) for c in chars)


def _fmt_partition(lam) -> str:
    return ",".join(map(str, lam)) if lam else "∅"


@dataclass(frozen=True)
class MultiStaircase:
    stairs: tuple[Partition, ...]

    @property
    def length(self) -> int:
        return sum(sum(lam) for lam in self.stairs)

    def support(self) -> tuple[int, ...]:
        return tuple(i for i, lam in enumerate(self.stairs) if lam)

    def label(self, fan_name: str = "X") -> str:
        body = "|".join(_fmt_partition(lam) for lam in self.stairs)
        return f"{fan_name}:d{self.length}:[{body}]"

    def characters(self, fan: Fan) -> list[list[Character]]:
        """Monomial characters of each chart's staircase."""
        return [[cell_character(c, chart_basis(fan, i)) for c in staircase_cells(lam)]
                for i, lam in enumerate(self.stairs)]


def _compositions(d: int, r: int):
    # descending lexicographic order: (d,0,..,0) first
    if r == 1:
        yield (d,)
        return
    for first in range(d, -1, -1):
        for tail in _compositions(d - first, r - 1):
            yield (first,) + tail


def enumerate_fixed_points(fan: Fan, d: int) -> list[MultiStaircase]:
    """All torus-fixed points of Hilb^d(X), in canonical order."""
    if d < 0:
        raise ValueError("d must be non-negative")
    out = []
    for comp in _compositions(d, fan.r):
        for stairs in product(*(partitions(n) for n in comp)):
            out.append(MultiStaircase(tuple(stairs)))
    return out


def fixed_point_count(r: int, d: int) -> int:
    total = 0
    for comp in _compositions(d, r):
        n = 1
        for part in comp:
            n *= partition_count(part)
        total += n
    return total


def tangent_characters(lam: Sequence[int], chart: Chart) -> list[Character]:
    """Torus weights on the tangent space of Hilb at the monomial ideal of ``lam``.

    Per cell s with arm a(s) and leg l(s): ``a*u - (l+1)*v`` and
    ``-(a+1)*u + l*v`` (inside monomial minus outside generator).
    """
    conj = conjugate(lam)
    u, v = chart.u, chart.v
    out = []
    for a, h in enumerate(lam):
        for b in range(h):
            arm = conj[b] - a - 1
            leg = h - b - 1
            out.append(Character(arm * u.c1 - (leg + 1) * v.c1, arm * u.c2 - (leg + 1) * v.c2))
            out.append(Character(-(arm + 1) * u.c1 + leg * v.c1, -(arm + 1) * u.c2 + leg * v.c2))
    return out


def point_tangent_characters(fan: Fan, z: MultiStaircase) -> list[list[Character]]:
    """Tangent characters grouped by chart."""
    return [tangent_characters(lam, chart_basis(fan, i)) for i, lam in enumerate(z.stairs)]


def _weights(lam, chart: Chart, w) -> Counter:
    cnt = Counter()
    for cell in staircase_cells(lam):
        cnt[cell_character(cell, chart).pair(w)] += 1
    return cnt


def hilbert_multifunction(fan: Fan, z: MultiStaircase, w) -> dict:
    """Weight counts of O_Z per connected component of the w-fixed locus.

    Keys are ``("p", i)`` for an isolated fixed point and ``("l", line)``
    for a pointwise-fixed line; values are sorted ``(weight, count)`` tuples.
    """
    w = Subtorus.of(w)
    shape = classify_fixed_locus(fan, w)
    out = {}
    for i in shape.pfix:
        out[("p", i)] = tuple(sorted(_weights(z.stairs[i], chart_basis(fan, i), w).items()))
    for line in shape.lfix:
        i, j = fan.line_endpoints(line)
        cnt = _weights(z.stairs[i], chart_basis(fan, i), w) + _weights(z.stairs[j], chart_basis(fan, j), w)
        out[("l", line)] = tuple(sorted(cnt.items()))
    return out


def multifunction_mass(h: dict) -> int:
    return sum(c for values in h.values() for _, c in values)


def line_pieces(fan: Fan, z: MultiStaircase, line: int) -> tuple[Partition, Partition]:
    """Curvilinear piece lengths (column heights transverse to the line) at both ends."""
    i, j = fan.line_endpoints(line)
    # chart i: transverse coordinate is u, pieces indexed by the v exponent
    # chart j: transverse coordinate is v, pieces indexed by the u exponent
    return conjugate(z.stairs[i]), tuple(z.stairs[j])


def blocks_of(pi: Sequence[int]) -> list[tuple[int, int]]:
    """Distinct part values n_1 > n_2 > ... with multiplicities d_j."""
    cnt = Counter(p for p in pi if p)
    return sorted(cnt.items(), key=lambda t: -t[0])


def line_blocks(fan: Fan, z: MultiStaircase, line: int):
    """Merge both endpoint staircases of ``line`` into one partition.

    Returns ``(pi, blocks, ls)`` where ``blocks`` lists ``(n_j, d_j)`` and
    ``ls[j]`` is the number of pieces of length n_j sitting at the first
    endpoint (chart ``line``).
    """
    i, j = fan.line_endpoints(line)
    others = [k for k in z.support() if k not in (i, j)]
    if others:
        raise UnsupportedSupport(f"subscheme has points on charts {others} off line {line}")
    return _line_blocks(fan, z, line)


def _line_blocks(fan: Fan, z: MultiStaircase, line: int):
    at_i, at_j = line_pieces(fan, z, line)
    pi = tuple(sorted(list(at_i) + list(at_j), reverse=True))
    blocks = blocks_of(pi)
    ci = Counter(at_i)
    ls = tuple(ci.get(n, 0) for n, _ in blocks)
    return pi, blocks, ls

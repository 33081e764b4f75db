"""Components of the fixed loci of one-dimensional subtori acting on Hilb^d(X)."""
from __future__ import annotations

from dataclasses import dataclass, field
from functools import lru_cache
from math import prod

from .charpoly import Character, SPoly, product_of_forms
from .staircases import (
    MultiStaircase,
    Partition,
    _line_blocks,
    enumerate_fixed_points,
    hilbert_multifunction,
    point_tangent_characters,
)
from .toricfan import Fan, Subtorus, chart_basis, classify_fixed_locus


class InternalInconsistency(RuntimeError):
    pass


class ZeroWeight(RuntimeError):
    pass


@dataclass(frozen=True)
class FixedPointData:
    fan: Fan
    d: int
    points: tuple[MultiStaircase, ...]
    tangent: tuple[tuple[tuple[Character, ...], ...], ...]  # point -> chart -> chars

    def labels(self) -> list[str]:
        return [z.label(self.fan.name) for z in self.points]

    def all_tangent(self, p: int) -> list[Character]:
        return [ch for per_chart in self.tangent[p] for ch in per_chart]


@lru_cache(maxsize=None)
def fixed_point_data(fan: Fan, d: int) -> FixedPointData:
    pts = tuple(enumerate_fixed_points(fan, d))
    tan = tuple(tuple(tuple(t) for t in point_tangent_characters(fan, z)) for z in pts)
    return FixedPointData(fan, d, pts, tan)


@dataclass(frozen=True)
class Factor:
    """One factor of a fixed component.

    kind is ``"point"``, ``"graded"`` (graded Hilbert scheme at an isolated
    fixed point ``site`` = chart) or ``"line"`` (product of symmetric powers
    of the invariant line ``site``).
    """

    kind: str
    site: int
    dimension: int
    weights: tuple[int, int] | None = None  # graded: w-weights of (u, v)
    hilbert: tuple = ()  # graded: sorted (weight, count)
    partition: Partition = ()  # line: merged partition
    blocks: tuple[tuple[int, int], ...] = ()  # line: (n_j, d_j)


@dataclass(frozen=True)
class FixedComponent:
    w: Subtorus
    key: tuple
    factors: tuple[Factor, ...]
    points: tuple[int, ...]
    coords: dict = field(compare=False)  # point -> per-factor coordinate
    euler_chars: dict = field(compare=False)  # point -> tuple of Characters
    dimension: int = 0

    def euler(self) -> dict:
        return component_euler(self)


def invariant_characters(chars, w) -> list[Character]:
    return [ch for ch in chars if ch.pair(w) == 0]


def relevance_at_point(fan: Fan, d: int, p: int) -> dict:
    """Subtorus -> invariant tangent dimension at fixed point ``p`` (nonzero only)."""
    data = fixed_point_data(fan, d)
    out: dict = {}
    for ch in data.all_tangent(p):
        if ch.is_zero():
            raise ZeroWeight(f"zero tangent weight at {data.points[p].label(fan.name)}")
        w = Subtorus.annihilating(ch)
        out[w] = out.get(w, 0) + 1
    return dict(sorted(out.items()))


@lru_cache(maxsize=None)
def relevant_subtori(fan: Fan, d: int) -> tuple[Subtorus, ...]:
    data = fixed_point_data(fan, d)
    found = set()
    for p in range(len(data.points)):
        found.update(relevance_at_point(fan, d, p))
    return tuple(sorted(found))


def _opposite(a: int, b: int) -> bool:
    return (a > 0 > b) or (a < 0 < b)


@lru_cache(maxsize=None)
def components(fan: Fan, d: int, w) -> tuple[FixedComponent, ...]:
    """Irreducible components of Hilb^d(X)^w that meet the torus-fixed points."""
    w = Subtorus.of(w)
    data = fixed_point_data(fan, d)
    shape = classify_fixed_locus(fan, w)
    charts = {i: chart_basis(fan, i) for i in range(fan.r)}
    chart_w = {i: (charts[i].u.pair(w), charts[i].v.pair(w)) for i in shape.pfix}

    groups: dict = {}
    for p, z in enumerate(data.points):
        h = hilbert_multifunction(fan, z, w)
        # at a chart with opposite-sign weights every fixed point is isolated
        refine = tuple(z.stairs[i] for i in shape.pfix if _opposite(*chart_w[i]))
        key = (tuple(sorted(h.items())), refine)
        groups.setdefault(key, []).append(p)

    out = []
    for key, pts in groups.items():
        out.append(_assemble(fan, data, w, shape, chart_w, key, tuple(pts)))
    out.sort(key=lambda c: c.points)
    return tuple(out)


def _assemble(fan, data, w, shape, chart_w, key, pts) -> FixedComponent:
    factors = []
    coords = {p: [] for p in pts}
    inv_local = {p: [invariant_characters(data.tangent[p][i], w) for i in range(fan.r)] for p in pts}

    for i in shape.pfix:
        stairs = {p: data.points[p].stairs[i] for p in pts}
        if not any(stairs.values()):
            continue
        dims = {len(inv_local[p][i]) for p in pts}
        if len(dims) != 1:
            raise InternalInconsistency(f"chart {i}: invariant tangent dimension varies {dims}")
        dim = dims.pop()
        distinct = sorted(set(stairs.values()), reverse=True)
        a, b = chart_w[i]
        if _opposite(a, b) and dim:
            raise InternalInconsistency(f"chart {i}: opposite weights but invariant tangent {dim}")
        if dim == 0:
            if len(distinct) != 1:
                raise InternalInconsistency(f"chart {i}: zero-dimensional factor with {len(distinct)} points")
            factors.append(Factor("point", i, 0))
        else:
            h = dict(hilbert_multifunction(fan, data.points[pts[0]], w))[("p", i)]
            factors.append(Factor("graded", i, dim, weights=(a, b), hilbert=h))
        for p in pts:
            coords[p].append(stairs[p])

    for line in shape.lfix:
        i, j = fan.line_endpoints(line)
        per = {p: _line_blocks(fan, data.points[p], line) for p in pts}
        shapes = {(pi, tuple(bl)) for pi, bl, _ in per.values()}
        if len(shapes) != 1:
            raise InternalInconsistency(f"line {line}: points disagree on the block partition")
        pi, blocks = shapes.pop()
        if not pi:
            continue
        dim = sum(dj for _, dj in blocks)
        for p in pts:
            local = len(inv_local[p][i]) + len(inv_local[p][j])
            if local != dim:
                raise InternalInconsistency(
                    f"line {line}: invariant tangent {local} at point {p} but blocks give {dim}")
            coords[p].append(per[p][2])
        factors.append(Factor("line", line, dim, partition=pi, blocks=tuple(blocks)))

    # product structure: points must be all combinations of factor coordinates
    expected = 1
    for k, f in enumerate(factors):
        if f.kind == "line":
            expected *= prod(dj + 1 for _, dj in f.blocks)
        else:
            expected *= len({coords[p][k] for p in pts})
    if expected != len(pts):
        raise InternalInconsistency(f"component has {len(pts)} points, factor product predicts {expected}")
    if len({tuple(coords[p]) for p in pts}) != len(pts):
        raise InternalInconsistency("two points share factor coordinates")

    dimension = sum(f.dimension for f in factors)
    euler_chars = {}
    for p in pts:
        inv = [ch for per_chart in inv_local[p] for ch in per_chart]
        if len(inv) != dimension:
            raise InternalInconsistency(f"point {p}: invariant tangent {len(inv)} != component dim {dimension}")
        euler_chars[p] = tuple(inv)
    if dimension == 0 and len(pts) != 1:
        raise InternalInconsistency("zero-dimensional component with several points")
    return FixedComponent(w, key, tuple(factors), pts, {p: tuple(c) for p, c in coords.items()},
                          euler_chars, dimension)


def component_euler(c: FixedComponent) -> dict[int, SPoly]:
    """Equivariant Euler class of the component's tangent space at each point."""
    out = {}
    for p, chars in c.euler_chars.items():
        if any(ch.is_zero() for ch in chars):
            raise ZeroWeight(f"zero invariant weight at point {p}")
        out[p] = product_of_forms(chars)
    return out


def component_containing(fan: Fan, d: int, w, p: int) -> FixedComponent:
    for c in components(fan, d, w):
        if p in c.points:
            return c
    raise KeyError(p)

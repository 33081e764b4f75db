"""Fans of smooth complete toric surfaces.

Rays are listed counterclockwise; maximal cone ``i`` is spanned by rays
``i`` and ``i+1`` (indices mod r).  Line ``i`` is the invariant curve
V(ray i+1) joining the fixed points of charts ``i`` and ``i+1``.

Chart coordinates (u_i, v_i) are the dual basis of (ray i+1, ray i):
u_i is dual to the next shared ray, so ``u_i = 0`` cuts line i and
``v_i = 0`` cuts line i-1.
"""
from __future__ import annotations

import json
from dataclasses import dataclass, field
from math import gcd
from pathlib import Path
from typing import NamedTuple, Sequence

from .charpoly import Character


class FanError(ValueError):
    """Base class for invalid fan input."""


class NotSmooth(FanError):
    pass


class NotComplete(FanError):
    pass


class NotPrimitive(FanError):
    pass


def _det(a, b) -> int:
    return a[0] * b[1] - a[1] * b[0]


class Subtorus(NamedTuple):
    """One-dimensional subtorus, stored as a primitive cocharacter.

    Canonical sign: first nonzero coordinate positive.
    """

    w1: int
    w2: int

    @classmethod
    def of(cls, w) -> "Subtorus":
        a, b = int(w[0]), int(w[1])
        g = gcd(abs(a), abs(b))
        if g == 0:
            raise ValueError("zero cocharacter")
        a, b = a // g, b // g
        if a < 0 or (a == 0 and b < 0):
            a, b = -a, -b
        return cls(a, b)

    @classmethod
    def annihilating(cls, chi) -> "Subtorus":
        """The subtorus on which the nonzero character ``chi`` is trivial."""
        return cls.of((chi[1], -chi[0]))


class Chart(NamedTuple):
    index: int
    u: Character
    v: Character


class FixedLocusShape(NamedTuple):
    pfix: tuple[int, ...]
    lfix: tuple[int, ...]  # line indices; line i joins charts i and i+1


@dataclass(frozen=True)
class Fan:
    rays: tuple[tuple[int, int], ...]
    name: str = field(default="X", compare=False)

    @property
    def r(self) -> int:
        return len(self.rays)

    def next(self, i: int) -> int:
        return (i + 1) % self.r

    def charts(self) -> tuple[Chart, ...]:
        return tuple(chart_basis(self, i) for i in range(self.r))

    def line_endpoints(self, line: int) -> tuple[int, int]:
        return line, self.next(line)

    def line_ray(self, line: int) -> tuple[int, int]:
        return self.rays[self.next(line)]

    def to_json(self) -> dict:
        return {"rays": [list(r) for r in self.rays]}


def build_fan(rays: Sequence[Sequence[int]], name: str = "X") -> Fan:
    """Validate a counterclockwise ray list and return the fan."""
    rays = tuple((int(a), int(b)) for a, b in rays)
    r = len(rays)
    if r < 3:
        raise NotComplete(f"a complete fan needs at least 3 rays, got {r}")
    for ray in rays:
        if gcd(abs(ray[0]), abs(ray[1])) != 1:
            raise NotPrimitive(f"ray {list(ray)} is not primitive")
    if len(set(rays)) != r:
        raise NotPrimitive("rays must be pairwise distinct")
    for i in range(r):
        a, b = rays[i], rays[(i + 1) % r]
        d = _det(a, b)
        if d == -1:
            raise NotComplete(
                f"rays {list(a)}, {list(b)} are in clockwise order; list rays counterclockwise")
        if d != 1:
            raise NotSmooth(f"rays {list(a)}, {list(b)} have determinant {d}, expected 1")
    # every consecutive angle lies in (0, pi); the fan is complete iff the
    # ray sequence winds exactly once around the origin
    ref = next((1, k) for k in range(10 ** 6) if all(_det(ray, (1, k)) != 0 for ray in rays))
    winding = sum(
        1 for i in range(r)
        if _det(rays[i], ref) > 0 and _det(ref, rays[(i + 1) % r]) > 0
    )
    if winding != 1:
        raise NotComplete(f"rays wind {winding} times around the origin")
    return Fan(rays, name)


def load_fan(path) -> Fan:
    """Read ``{"rays": [[1,0],[0,1],[-1,-1]], "name": "P2"}`` from a JSON file."""
    data = json.loads(Path(path).read_text())
    if not isinstance(data, dict) or "rays" not in data:
        raise FanError(f"{path}: expected an object with a 'rays' field")
    rays = data["rays"]
    if not all(isinstance(x, list) and len(x) == 2 and all(isinstance(c, int) for c in x) for x in rays):
        raise FanError(f"{path}: rays must be integer pairs")
    return build_fan(rays, data.get("name", Path(path).stem))


def chart_basis(fan: Fan, i: int) -> Chart:
    """Coordinate characters (u_i, v_i) of chart i."""
    if not 0 <= i < fan.r:
        raise IndexError(f"chart index {i} out of range")
    a, b = fan.rays[i]
    c, d = fan.rays[fan.next(i)]
    # <u, ray_{i+1}> = 1, <u, ray_i> = 0 ; <v, ray_i> = 1, <v, ray_{i+1}> = 0
    return Chart(i, Character(-b, a), Character(d, -c))


def line_character(fan: Fan, line: int, at: int) -> Character:
    """Character of the along-line coordinate of ``line`` in chart ``at``."""
    i, j = fan.line_endpoints(line)
    if at == i:
        return chart_basis(fan, i).v
    if at == j:
        return chart_basis(fan, j).u
    raise ValueError(f"chart {at} is not an endpoint of line {line}")


def transverse_character(fan: Fan, line: int, at: int) -> Character:
    i, j = fan.line_endpoints(line)
    if at == i:
        return chart_basis(fan, i).u
    if at == j:
        return chart_basis(fan, j).v
    raise ValueError(f"chart {at} is not an endpoint of line {line}")


def find_line(fan: Fan, i: int, j: int) -> int:
    """Line index of the invariant curve joining adjacent charts i and j."""
    if fan.next(i) == j:
        return i
    if fan.next(j) == i:
        return j
    raise ValueError(f"charts {i} and {j} are not adjacent")


def classify_fixed_locus(fan: Fan, w) -> FixedLocusShape:
    w = Subtorus.of(w)
    lfix = []
    for line in range(fan.r):
        ray = fan.line_ray(line)
        if _det(ray, w) == 0:
            lfix.append(line)
    on_lines = set()
    for line in lfix:
        on_lines.update(fan.line_endpoints(line))
    pfix = tuple(i for i in range(fan.r) if i not in on_lines)
    return FixedLocusShape(pfix, tuple(lfix))


# common surfaces
P2 = build_fan([(1, 0), (0, 1), (-1, -1)], "P2")
P1xP1 = build_fan([(1, 0), (0, 1), (-1, 0), (0, -1)], "P1xP1")
F1 = build_fan([(1, 0), (0, 1), (-1, 1), (0, -1)], "F1")

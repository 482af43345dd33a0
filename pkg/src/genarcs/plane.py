"""Incidence geometry of the projective plane PG(2,q).

Points and lines are homogeneous triples over GF(q), canonicalized so the
first nonzero coordinate is 1, and carry dense integer indices under a fixed
deterministic enumeration: points with x0 = 1 ordered by (x1, x2), then
x0 = 0, x1 = 1 ordered by x2, then [0:0:1].  Lines use the same scheme on
their coefficient triples.  A point [x0:x1:x2] lies on a line (u0,u1,u2)
iff u0*x0 + u1*x1 + u2*x2 = 0.

All incidence data (points on each line, lines through each point, the line
joining each point pair) is precomputed at construction, so the search inner
loops never recompute dot products.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np

from .gf import FieldSpec, FieldError, nullspace, scale_to_canonical

# Incidence tables are quadratic in the plane size; q is capped to keep
# construction at desk scale.
MAX_PLANE_ORDER = 64


class PlaneError(ValueError):
    """Invalid plane construction or geometric operation."""


@dataclass(frozen=True)
class ProjPoint:
    coords: tuple[int, int, int]
    index: int

    def __str__(self) -> str:  # pragma: no cover - repr convenience
        return f"P{self.index}{self.coords}"


@dataclass(frozen=True)
class ProjLine:
    coeffs: tuple[int, int, int]
    index: int

    def __str__(self) -> str:  # pragma: no cover - repr convenience
        return f"L{self.index}{self.coeffs}"


def _canonical_triples(field: FieldSpec) -> list[tuple[int, int, int]]:
    """The q^2+q+1 canonical triples in enumeration order."""
    out = [(1, a, b) for a in range(field.q) for b in range(field.q)]
    out.extend((0, 1, b) for b in range(field.q))
    out.append((0, 0, 1))
    return out


class Plane:
    """PG(2,q) over a given field, with all incidence data precomputed."""

    def __init__(self, field: FieldSpec):
        if field.q > MAX_PLANE_ORDER:
            raise PlaneError(
                f"incidence tables are precomputed only for q <= {MAX_PLANE_ORDER}, got q={field.q}"
            )
        self.field = field
        q = field.q
        self.q = q
        self.size = q * q + q + 1

        triples = _canonical_triples(field)
        self.points = [ProjPoint(t, i) for i, t in enumerate(triples)]
        self.lines = [ProjLine(t, i) for i, t in enumerate(triples)]
        self._point_index = {t: i for i, t in enumerate(triples)}

        self.coords_np = np.array(triples, dtype=np.int64)

        n = self.size
        mul = field.mul
        add = field.add
        line_points: list[list[int]] = []
        for u0, u1, u2 in triples:
            members = [
                i
                for i, (x0, x1, x2) in enumerate(triples)
                if add(add(mul(u0, x0), mul(u1, x1)), mul(u2, x2)) == 0
            ]
            line_points.append(members)
        self.line_points = [tuple(m) for m in line_points]

        point_lines: list[list[int]] = [[] for _ in range(n)]
        for li, members in enumerate(line_points):
            for pi in members:
                point_lines[pi].append(li)
        self.point_lines = [tuple(ls) for ls in point_lines]

        self.line_masks = np.zeros((n, n), dtype=bool)
        for li, members in enumerate(line_points):
            self.line_masks[li, members] = True

        self.pair_line = np.full((n, n), -1, dtype=np.int32)
        for li, members in enumerate(line_points):
            for a in members:
                for b in members:
                    if a != b:
                        self.pair_line[a, b] = li

    # -- canonical forms and lookup --------------------------------------

    def canonical(self, coords: Sequence[int]) -> tuple[int, int, int]:
        triple = tuple(int(c) for c in coords)
        if len(triple) != 3:
            raise PlaneError(f"expected 3 homogeneous coordinates, got {len(triple)}")
        if not any(triple):
            raise PlaneError("the zero triple is not a projective point")
        return scale_to_canonical(self.field, triple)  # type: ignore[return-value]

    def point(self, coords: Sequence[int]) -> ProjPoint:
        return self.points[self._point_index[self.canonical(coords)]]

    def line(self, coeffs: Sequence[int]) -> ProjLine:
        return self.lines[self._point_index[self.canonical(coeffs)]]

    def point_by_index(self, i: int) -> ProjPoint:
        return self.points[i]

    def index_of(self, pt: ProjPoint | Sequence[int] | int) -> int:
        if isinstance(pt, ProjPoint):
            return pt.index
        if isinstance(pt, int) or isinstance(pt, np.integer):
            i = int(pt)
            if not 0 <= i < self.size:
                raise PlaneError(f"point index {i} out of range")
            return i
        return self._point_index[self.canonical(pt)]

    def indices_of(self, pts: Iterable) -> list[int]:
        return [self.index_of(p) for p in pts]

    # -- core operations ----------------------------------------------------

    def all_points(self) -> list[ProjPoint]:
        return list(self.points)

    def all_lines(self) -> list[ProjLine]:
        return list(self.lines)

    def line_through(self, p1: ProjPoint | int, p2: ProjPoint | int) -> ProjLine:
        i, j = self.index_of(p1), self.index_of(p2)
        if i == j:
            raise PlaneError("two distinct points are needed to span a line")
        return self.lines[int(self.pair_line[i, j])]

    def meet(self, l1: ProjLine, l2: ProjLine) -> ProjPoint:
        if l1.index == l2.index:
            raise PlaneError("two distinct lines are needed to meet in a point")
        common = set(self.line_points[l1.index]) & set(self.line_points[l2.index])
        (pi,) = common
        return self.points[pi]

    def points_on(self, line: ProjLine) -> list[ProjPoint]:
        return [self.points[i] for i in self.line_points[line.index]]

    def lines_through(self, pt: ProjPoint | int) -> list[ProjLine]:
        return [self.lines[i] for i in self.point_lines[self.index_of(pt)]]

    def collinear(self, p1, p2, p3) -> bool:
        """True iff the three points lie on a common line (duplicates count)."""
        i, j, k = self.index_of(p1), self.index_of(p2), self.index_of(p3)
        if i == j or j == k or i == k:
            return True
        return bool(self.line_masks[int(self.pair_line[i, j]), k])

    def incident(self, pt: ProjPoint | int, line: ProjLine) -> bool:
        return bool(self.line_masks[line.index, self.index_of(pt)])

    # -- textual syntax -------------------------------------------------------

    def format_point(self, pt: ProjPoint | int) -> str:
        coords = self.points[self.index_of(pt)].coords
        return "[" + ":".join(self.field.element_str(c) for c in coords) + "]"

    def parse_point(self, text: str) -> ProjPoint:
        """Parse "[a:b:c]"; accepts non-canonical scalings and extension-field
        literals like "a^5"."""
        s = text.strip()
        if not (s.startswith("[") and s.endswith("]")):
            raise PlaneError(f"point literal must look like [a:b:c], got {text!r}")
        parts = s[1:-1].split(":")
        if len(parts) != 3:
            raise PlaneError(f"point literal must have 3 coordinates, got {text!r}")
        try:
            coords = tuple(self.field.parse_element(p) for p in parts)
        except (ValueError, FieldError) as e:
            raise PlaneError(f"bad coordinate in {text!r}: {e}") from e
        return self.point(coords)

    def parse_points(self, texts: Iterable[str]) -> list[ProjPoint]:
        return [self.parse_point(t) for t in texts]

    def __repr__(self) -> str:
        return f"PG(2,{self.q})"


def standard_frame(plane: Plane) -> list[int]:
    """Indices of [1:0:0], [0:1:0], [0:0:1], [1:1:1]."""
    return [
        plane.index_of((1, 0, 0)),
        plane.index_of((0, 1, 0)),
        plane.index_of((0, 0, 1)),
        plane.index_of((1, 1, 1)),
    ]


def line_spanned_by(plane: Plane, p1: Sequence[int], p2: Sequence[int]) -> tuple[int, int, int]:
    """Line coefficients through two points, computed from the 2x3 nullspace
    (independent of the precomputed incidence tables)."""
    basis = nullspace(plane.field, [list(p1), list(p2)], 3)
    if len(basis) != 1:
        raise PlaneError("points do not span a line")
    return scale_to_canonical(plane.field, basis[0])  # type: ignore[return-value]

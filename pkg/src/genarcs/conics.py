"""Ternary quadratic forms over GF(q): fitting, classification, nuclei,
and the degree-2 Veronese map into PG(5,q).

A conic is a nonzero form a*x0^2 + b*x0x1 + c*x0x2 + d*x1^2 + e*x1x2 + f*x2^2,
stored as the coefficient 6-vector (a,b,c,d,e,f) up to scale.  The monomial
order (x0^2, x0x1, x0x2, x1^2, x1x2, x2^2) is fixed throughout; it is the
same order the Veronese map uses, so evaluating a form at a point is the dot
product of the coefficient vector with the point's Veronese image.

Classification is computed from the zero set, not from matrix invariants,
because the symmetric-matrix discriminant breaks down in characteristic 2;
over any GF(q) the zero set of a nonzero form has exactly 1, q+1 or 2q+1
points, and the q+1 case splits into a line (double line) or an irreducible
conic depending on collinearity.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum
from itertools import combinations
from typing import Iterable, Sequence

import numpy as np

from .gf import FieldSpec, det, nullspace, scale_to_canonical
from .plane import Plane, ProjPoint


class ConicClass(str, Enum):
    IRREDUCIBLE = "irreducible"
    TWO_LINES = "two_lines"
    DOUBLE_LINE = "double_line"
    CONJUGATE_PAIR = "conjugate_pair"


class ConicError(ValueError):
    pass


@dataclass(frozen=True)
class Conic:
    coeffs: tuple[int, int, int, int, int, int]
    kind: ConicClass


@dataclass(frozen=True)
class ConicPencil:
    """Basis of the space of quadratic forms vanishing on a point set."""

    basis: tuple[tuple[int, ...], ...]

    @property
    def dim(self) -> int:
        return len(self.basis)


def veronese_coords(field: FieldSpec, coords: Sequence[int]) -> tuple[int, ...]:
    x0, x1, x2 = coords
    m = field.mul
    return (m(x0, x0), m(x0, x1), m(x0, x2), m(x1, x1), m(x1, x2), m(x2, x2))


def veronese(plane: Plane, pt: ProjPoint | int | Sequence[int]) -> tuple[int, ...]:
    """Degree-2 Veronese image of a plane point, canonicalized in PG(5,q)."""
    coords = plane.points[plane.index_of(pt)].coords
    return scale_to_canonical(plane.field, veronese_coords(plane.field, coords))


def veronese_matrix(plane: Plane) -> np.ndarray:
    """All Veronese images, one row per plane point (row i = point index i)."""
    return np.array([veronese(plane, i) for i in range(plane.size)], dtype=np.int64)


def evaluate_form(field: FieldSpec, coeffs: Sequence[int], coords: Sequence[int]) -> int:
    acc = 0
    for c, v in zip(coeffs, veronese_coords(field, coords)):
        acc = field.add(acc, field.mul(c, v))
    return acc


def form_zero_mask(plane: Plane, coeffs: Sequence[int], vmat: np.ndarray | None = None) -> np.ndarray:
    """Boolean mask over point indices of the form's zero set (vectorised)."""
    if vmat is None:
        vmat = veronese_matrix(plane)
    f = plane.field
    acc = np.zeros(plane.size, dtype=np.int64)
    for j, c in enumerate(coeffs):
        if c:
            acc = f.add_np[acc, f.mul_np[vmat[:, j], c]]
    return acc == 0


def zero_set(plane: Plane, coeffs: Sequence[int]) -> list[ProjPoint]:
    f = plane.field
    return [
        p for p in plane.points if evaluate_form(f, coeffs, p.coords) == 0
    ]


def conics_through(plane: Plane, points: Iterable) -> ConicPencil:
    """Nullspace basis of the evaluation matrix of 1..6 points.

    Rows of the evaluation matrix are the points' Veronese coordinate
    vectors, so the pencil is every quadratic form vanishing on all the
    given points.  For 5 points in general position the pencil has
    dimension exactly 1; degenerate quintuples (4+ collinear) give
    dimension >= 2, and 6 generic points give the empty pencil.
    """
    idxs = plane.indices_of(points)
    if not 1 <= len(idxs) <= 6:
        raise ConicError(f"conic fitting expects 1..6 points, got {len(idxs)}")
    if len(set(idxs)) != len(idxs):
        raise ConicError("duplicate points in conic fitting")
    f = plane.field
    rows = [list(veronese_coords(f, plane.points[i].coords)) for i in idxs]
    basis = [scale_to_canonical(f, v) for v in nullspace(f, rows, 6)]
    return ConicPencil(tuple(basis))


def classify(plane: Plane, coeffs: Sequence[int]) -> tuple[ConicClass, list[ProjPoint]]:
    """Classify a nonzero form from its zero set; returns (class, points).

    Every nonzero ternary quadratic form over GF(q) has a nonempty zero set
    of size 1 (conjugate line pair), q+1 (irreducible conic, or a double
    line when the points are collinear) or 2q+1 (two distinct lines).
    """
    if not any(coeffs):
        raise ConicError("the zero form is not a conic")
    pts = zero_set(plane, coeffs)
    q = plane.q
    n = len(pts)
    if n == 1:
        return ConicClass.CONJUGATE_PAIR, pts
    if n == 2 * q + 1:
        return ConicClass.TWO_LINES, pts
    if n == q + 1:
        a, b = pts[0], pts[1]
        if all(plane.collinear(a, b, c) for c in pts[2:]):
            return ConicClass.DOUBLE_LINE, pts
        return ConicClass.IRREDUCIBLE, pts
    raise ConicError(
        f"impossible zero-set size {n} for a ternary quadratic form over GF({q})"
    )  # pragma: no cover


def make_conic(plane: Plane, coeffs: Sequence[int]) -> Conic:
    canon = scale_to_canonical(plane.field, tuple(int(c) for c in coeffs))
    kind, _ = classify(plane, canon)
    return Conic(canon, kind)  # type: ignore[arg-type]


def tangent_line_at(plane: Plane, conic_points: Sequence[ProjPoint], pt: ProjPoint):
    """The unique line through a conic point meeting the conic only there."""
    on_conic = {p.index for p in conic_points}
    tangents = [
        l
        for l in plane.lines_through(pt)
        if sum(1 for i in plane.line_points[l.index] if i in on_conic) == 1
    ]
    if len(tangents) != 1:
        raise ConicError(f"expected a unique tangent at {plane.format_point(pt)}, found {len(tangents)}")
    return tangents[0]


def nucleus(plane: Plane, coeffs: Sequence[int]) -> ProjPoint:
    """Common point of the q+1 tangent lines of an irreducible conic, q even.

    Tangents are found by scanning the q+1 lines through each conic point
    for the one meeting the zero set exactly once (formal derivatives would
    degenerate in characteristic 2).  The returned point is validated to lie
    on every tangent and off the conic.
    """
    if plane.field.p != 2:
        raise ConicError("the nucleus exists only in even characteristic")
    kind, pts = classify(plane, coeffs)
    if kind is not ConicClass.IRREDUCIBLE:
        raise ConicError(f"nucleus requires an irreducible conic, got {kind.value}")
    tangents = [tangent_line_at(plane, pts, p) for p in pts]
    nuc = plane.meet(tangents[0], tangents[1])
    for t in tangents:
        if not plane.incident(nuc, t):
            raise ConicError("tangent lines do not concur")  # pragma: no cover
    if any(p.index == nuc.index for p in pts):
        raise ConicError("nucleus lies on the conic")  # pragma: no cover
    return nuc


def is_5arc_in_p5(field: FieldSpec, points6: Sequence[Sequence[int]]) -> bool:
    """True iff no hyperplane of PG(5,q) contains the six given points,
    ie the 6x6 coordinate matrix is nonsingular."""
    if len(points6) != 6:
        raise ConicError(f"expected exactly 6 points of PG(5,q), got {len(points6)}")
    canon = [scale_to_canonical(field, p) for p in points6]
    if len(set(canon)) != 6:
        raise ConicError("duplicate points in PG(5,q) independence test")
    return det(field, canon) != 0


def format_conic(field: FieldSpec, coeffs: Sequence[int]) -> str:
    """Human-readable polynomial in the fixed monomial order."""
    monomials = ["x0^2", "x0*x1", "x0*x2", "x1^2", "x1*x2", "x2^2"]
    terms = []
    for c, mono in zip(coeffs, monomials):
        if c == 0:
            continue
        cs = field.element_str(c)
        terms.append(mono if cs == "1" else f"({cs})*{mono}")
    return " + ".join(terms) if terms else "0"

"""Arc predicates, completeness semantics, 3-secant structure and
re-verifiable witness certificates.

Three kinds of point set are handled:

* ``arc`` - no three points collinear;
* ``generalized`` - no six points on a conic (reducible conics included);
* ``veronesian`` - both at once.

"No six on a conic" is equivalent to every 6-subset having linearly
independent Veronese images, which is how the incremental checks work: a
point extends a set exactly when it avoids the zero locus of every pencil
of conics through a 5-subset (and, for the arc kinds, every secant line).
Completeness therefore has two equivalent readings, implemented separately
as a cross-check: no single point extends the set (``is_complete``), and
the union of those loci covers the whole plane (``is_complete_by_coverage``).
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field as dc_field
from enum import Enum
from itertools import combinations
from typing import Iterable, Sequence

import numpy as np

from .gf import FieldSpec, nullspace, scale_to_canonical
from .plane import Plane, ProjPoint
from .conics import veronese_coords, veronese, is_5arc_in_p5, form_zero_mask, veronese_matrix


class ArcKind(str, Enum):
    ARC = "arc"
    GENERALIZED = "generalized"
    VERONESIAN = "veronesian"


class ArcError(ValueError):
    pass


class FourSecantError(ArcError):
    """A line met the set in 4+ points where the structure rules that out."""


class CertificateError(ValueError):
    pass


def _indices(plane: Plane, pts: Iterable) -> list[int]:
    idxs = plane.indices_of(pts)
    if len(set(idxs)) != len(idxs):
        raise ArcError("arc predicates require distinct points")
    return idxs


# ----------------------------------------------------------------------
# Pencils of conics through 5-subsets, with memoisation.


class PencilOracle:
    """Caches, per 5-subset of point indices, the pencil of conics through it.

    A 5-subset whose Veronese rows have rank 5 determines the pencil by a
    single form h (any sixth point x lies on a conic with the subset iff
    h . veronese(x) = 0).  Rank <= 4 means the pencil has dimension >= 2 and
    every sixth point completes a dependent 6-subset.
    """

    def __init__(self, plane: Plane):
        self.plane = plane
        self.field = plane.field
        self.vmat = veronese_matrix(plane)
        self.vrows = [tuple(int(x) for x in row) for row in self.vmat]
        self._pencils: dict[frozenset[int], tuple[int, ...] | None] = {}
        self._masks: dict[tuple[int, ...] | None, np.ndarray] = {}

    def pencil_form(self, idxs5: Sequence[int]) -> tuple[int, ...] | None:
        """The unique conic through a rank-5 quintuple, or None when the
        pencil has dimension >= 2."""
        key = frozenset(idxs5)
        try:
            return self._pencils[key]
        except KeyError:
            basis = nullspace(self.field, [self.vrows[i] for i in idxs5], 6)
            form = scale_to_canonical(self.field, basis[0]) if len(basis) == 1 else None
            self._pencils[key] = form
            return form

    def zero_mask(self, form: tuple[int, ...] | None) -> np.ndarray:
        """Boolean mask of points lying on some conic of the pencil."""
        try:
            return self._masks[form]
        except KeyError:
            if form is None:
                mask = np.ones(self.plane.size, dtype=bool)
            else:
                mask = form_zero_mask(self.plane, form, self.vmat)
            mask.setflags(write=False)
            self._masks[form] = mask
            return mask

    def vanishes_at(self, form: tuple[int, ...], idx: int) -> bool:
        f = self.field
        acc = 0
        for c, v in zip(form, self.vrows[idx]):
            if c and v:
                acc = f.add(acc, f.mul(c, v))
        return acc == 0


# ----------------------------------------------------------------------
# Kind predicates.


def is_arc(plane: Plane, pts: Iterable) -> bool:
    """No three of the points lie on a common line."""
    idxs = _indices(plane, pts)
    for a, b, c in combinations(idxs, 3):
        if plane.line_masks[int(plane.pair_line[a, b]), c]:
            return False
    return True


def is_generalized_arc(plane: Plane, pts: Iterable, oracle: PencilOracle | None = None) -> bool:
    """No six of the points lie on a common conic, reducible conics included.

    Checks every 5-subset's pencil against the remaining points; a pencil of
    dimension >= 2 (degenerate quintuple) vanishes somewhere on any sixth
    point, so it refutes immediately.
    """
    idxs = _indices(plane, pts)
    if len(idxs) <= 5:
        return True
    oracle = oracle or PencilOracle(plane)
    for five in combinations(idxs, 5):
        form = oracle.pencil_form(five)
        if form is None:
            return False
        rest = set(idxs).difference(five)
        if any(oracle.vanishes_at(form, s) for s in rest):
            return False
    return True


def is_generalized_arc_by_embedding(plane: Plane, pts: Iterable) -> bool:
    """Independent route: every 6-subset of Veronese images spans PG(5,q)."""
    idxs = _indices(plane, pts)
    if len(idxs) <= 5:
        return True
    images = {i: veronese(plane, i) for i in idxs}
    return all(
        is_5arc_in_p5(plane.field, [images[i] for i in six])
        for six in combinations(idxs, 6)
    )


def is_veronesian_arc(plane: Plane, pts: Iterable, oracle: PencilOracle | None = None) -> bool:
    """An arc that is also a generalized arc."""
    pts = list(pts)
    return is_arc(plane, pts) and is_generalized_arc(plane, pts, oracle)


def is_valid(plane: Plane, pts: Iterable, kind: ArcKind, oracle: PencilOracle | None = None) -> bool:
    pts = list(pts)
    if kind is ArcKind.ARC:
        return is_arc(plane, pts)
    if kind is ArcKind.GENERALIZED:
        return is_generalized_arc(plane, pts, oracle)
    return is_veronesian_arc(plane, pts, oracle)


# ----------------------------------------------------------------------
# Completeness: extension semantics and coverage semantics.


def _require_valid(plane: Plane, idxs: Sequence[int], kind: ArcKind, oracle: PencilOracle | None):
    if not is_valid(plane, idxs, kind, oracle):
        raise ArcError(f"the given set is not a valid {kind.value} arc")


def _blocking_data(plane: Plane, idxs: Sequence[int], kind: ArcKind, oracle: PencilOracle):
    """Secant lines and 5-subset pencils relevant to extending the set."""
    secants = []
    if kind in (ArcKind.ARC, ArcKind.VERONESIAN):
        secants = [int(plane.pair_line[a, b]) for a, b in combinations(idxs, 2)]
    forms = []
    if kind in (ArcKind.GENERALIZED, ArcKind.VERONESIAN):
        forms = [oracle.pencil_form(five) for five in combinations(idxs, 5)]
    return secants, forms


def is_complete(plane: Plane, pts: Iterable, kind: ArcKind,
                oracle: PencilOracle | None = None) -> bool:
    """True iff no point of the plane extends the set within its kind.

    Walks every point p outside the set and tests whether adding p keeps the
    defining property, using the incremental characterisation (p off all
    secants for the arc kinds, p off all 5-subset pencils for the conic
    kinds).
    """
    idxs = _indices(plane, pts)
    oracle = oracle or PencilOracle(plane)
    _require_valid(plane, idxs, kind, oracle)
    secants, forms = _blocking_data(plane, idxs, kind, oracle)
    if any(f is None for f in forms):
        return True  # a degenerate quintuple rules out every sixth point
    in_set = set(idxs)
    for p in range(plane.size):
        if p in in_set:
            continue
        blocked = any(plane.line_masks[l, p] for l in secants) or any(
            oracle.vanishes_at(f, p) for f in forms
        )
        if not blocked:
            return False
    return True


def is_complete_by_coverage(plane: Plane, pts: Iterable, kind: ArcKind,
                            oracle: PencilOracle | None = None) -> bool:
    """Coverage reading of completeness: the zero loci of all conics through
    5-subsets (and, for the arc kinds, all secant lines) cover the plane.

    Logically equivalent to ``is_complete`` - an extension point is exactly
    an uncovered point, and the set's own points are always covered once the
    relevant subsets exist - but computed by a different route (vectorised
    union of masks) as an independent cross-check.
    """
    idxs = _indices(plane, pts)
    oracle = oracle or PencilOracle(plane)
    _require_valid(plane, idxs, kind, oracle)
    secants, forms = _blocking_data(plane, idxs, kind, oracle)
    covered = np.zeros(plane.size, dtype=bool)
    for l in secants:
        covered |= plane.line_masks[l]
    for f in forms:
        covered |= oracle.zero_mask(f)
    covered[list(idxs)] = True  # the set's own points are not extension candidates
    return bool(covered.all())


def extension_points(plane: Plane, pts: Iterable, kind: ArcKind,
                     oracle: PencilOracle | None = None) -> list[int]:
    """Indices of points that extend the set within its kind (empty iff complete)."""
    idxs = _indices(plane, pts)
    oracle = oracle or PencilOracle(plane)
    _require_valid(plane, idxs, kind, oracle)
    secants, forms = _blocking_data(plane, idxs, kind, oracle)
    if any(f is None for f in forms):
        return []
    out = []
    in_set = set(idxs)
    for p in range(plane.size):
        if p in in_set:
            continue
        if any(plane.line_masks[l, p] for l in secants):
            continue
        if any(oracle.vanishes_at(f, p) for f in forms):
            continue
        out.append(p)
    return out


# ----------------------------------------------------------------------
# 3-secant structure.


def secant_distribution(plane: Plane, pts: Iterable) -> dict[int, int]:
    """How many lines meet the set in 0, 1, 2, ... points."""
    idxs = _indices(plane, pts)
    sel = np.zeros(plane.size, dtype=bool)
    sel[idxs] = True
    counts = (plane.line_masks & sel).sum(axis=1)
    dist: dict[int, int] = {}
    for c in counts:
        dist[int(c)] = dist.get(int(c), 0) + 1
    return dist


def count_three_secants(plane: Plane, pts: Iterable) -> int:
    """Number of lines meeting the set in exactly 3 points.

    For a generalized arc of size >= 6 no line can meet the set 4+ times
    (two disjoint 3+-secants would span a reducible conic through six
    points); hitting one raises FourSecantError instead of miscounting.
    """
    idxs = _indices(plane, pts)
    dist = secant_distribution(plane, idxs)
    if len(idxs) >= 6 and any(c >= 4 and n > 0 for c, n in dist.items()):
        worst = max(c for c, n in dist.items() if n > 0)
        raise FourSecantError(f"found a {worst}-secant in a set of size {len(idxs)}")
    return dist.get(3, 0)


def three_secant_lines(plane: Plane, pts: Iterable) -> list[int]:
    idxs = _indices(plane, pts)
    sel = np.zeros(plane.size, dtype=bool)
    sel[idxs] = True
    counts = (plane.line_masks & sel).sum(axis=1)
    return [int(l) for l in np.nonzero(counts == 3)[0]]


def strip_three_secant(plane: Plane, pts: Iterable) -> tuple[list[int], list[int]] | None:
    """Split a generalized arc as (arc part, collinear triple) along its
    lexicographically least 3-secant; None when the set has no 3-secant.

    The arc part is guaranteed 3-collinear-free: a second 3-secant disjoint
    from the first would give a reducible conic through six set points.
    """
    idxs = _indices(plane, pts)
    lines = three_secant_lines(plane, idxs)
    if not lines:
        return None
    l = lines[0]
    on = [i for i in idxs if plane.line_masks[l, i]]
    off = [i for i in idxs if not plane.line_masks[l, i]]
    if not is_arc(plane, off):
        raise ArcError("stripping a 3-secant left a collinear triple; input was not a generalized arc")
    return off, on


# ----------------------------------------------------------------------
# Certificates.


CLAIMS = ("valid", "complete", "minimal-complete", "maximal")


@dataclass
class ArcCertificate:
    """A claimed arc with enough data for independent re-verification."""

    field: dict
    kind: ArcKind
    points: list[str]
    claim: str
    stats: dict | None = None
    search_meta: dict | None = None

    def to_dict(self) -> dict:
        d = {
            "field": self.field,
            "kind": self.kind.value,
            "points": list(self.points),
            "claim": self.claim,
        }
        if self.stats is not None:
            d["stats"] = self.stats
        if self.search_meta is not None:
            d["search_meta"] = self.search_meta
        return d

    @classmethod
    def from_dict(cls, d: dict) -> "ArcCertificate":
        try:
            kind = ArcKind(d["kind"])
            claim = d["claim"]
            points = list(d["points"])
            fld = dict(d["field"])
        except (KeyError, TypeError, ValueError) as e:
            raise CertificateError(f"malformed certificate: {e}") from e
        if claim not in CLAIMS:
            raise CertificateError(f"unknown claim {claim!r}")
        return cls(fld, kind, points, claim, d.get("stats"), d.get("search_meta"))

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2, sort_keys=True)

    @classmethod
    def from_json(cls, text: str) -> "ArcCertificate":
        try:
            data = json.loads(text)
        except json.JSONDecodeError as e:
            raise CertificateError(f"certificate is not valid JSON: {e}") from e
        if not isinstance(data, dict):
            raise CertificateError("certificate must be a JSON object")
        return cls.from_dict(data)


def make_certificate(plane: Plane, pts: Iterable, kind: ArcKind, claim: str,
                     search_meta: dict | None = None,
                     oracle: PencilOracle | None = None) -> ArcCertificate:
    idxs = sorted(_indices(plane, pts))
    texts = [plane.format_point(i) for i in idxs]
    stats = {"k": len(idxs), "three_secant_count": count_three_secants(plane, idxs)}
    return ArcCertificate(plane.field.to_dict(), kind, texts, claim, stats, search_meta)


@dataclass
class VerificationReport:
    ok: bool
    checks: list[tuple[str, bool, str]] = dc_field(default_factory=list)

    def add(self, name: str, passed: bool, detail: str = "") -> None:
        self.checks.append((name, passed, detail))
        if not passed:
            self.ok = False

    def summary(self) -> str:
        lines = [f"{'PASS' if p else 'FAIL'}  {name}" + (f"  ({d})" if d else "")
                 for name, p, d in self.checks]
        lines.append("verdict: " + ("VALID" if self.ok else "REJECTED"))
        return "\n".join(lines)


def verify_certificate(cert: ArcCertificate, plane: Plane | None = None) -> VerificationReport:
    """Re-check a certificate from scratch, trusting no stored flag.

    Kind validity and completeness claims are recomputed; minimality and
    maximality are extremal over a whole search space, so they are only
    checked for consistency against the recorded search metadata and marked
    as attested rather than re-searched.
    """
    report = VerificationReport(ok=True)
    try:
        fld = FieldSpec.from_dict(cert.field)
    except Exception as e:
        raise CertificateError(f"bad field serialization: {e}") from e
    if plane is None or plane.field != fld:
        plane = Plane(fld)
    try:
        idxs = [plane.parse_point(t).index for t in cert.points]
    except Exception as e:
        raise CertificateError(f"bad point encoding: {e}") from e
    if len(set(idxs)) != len(idxs):
        report.add("points-distinct", False, "duplicate points")
        return report
    report.add("points-distinct", True)

    oracle = PencilOracle(plane)
    valid = is_valid(plane, idxs, cert.kind, oracle)
    report.add(f"kind-{cert.kind.value}", valid)
    if not valid:
        return report

    if cert.stats is not None:
        k = cert.stats.get("k")
        if k is not None:
            report.add("stats-k", k == len(idxs), f"recomputed {len(idxs)}")
        t_claimed = cert.stats.get("three_secant_count")
        if t_claimed is not None:
            t = count_three_secants(plane, idxs)
            report.add("stats-three-secants", t == t_claimed, f"recomputed {t}")

    if cert.claim in ("complete", "minimal-complete", "maximal"):
        complete = is_complete(plane, idxs, cert.kind, oracle)
        report.add("complete", complete)
    if cert.claim in ("minimal-complete", "maximal"):
        meta = cert.search_meta or {}
        answer = meta.get("answer")
        attested = answer == len(idxs) and meta.get("exhaustive") is True
        detail = "attested by search log" if attested else "no exhaustive search attestation"
        report.add(f"{cert.claim}-extremality", attested, detail)
    return report

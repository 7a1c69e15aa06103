"""Newton polygons of monic twisted polynomials.

Points are (-i, y_i) for the T-power i, with y_i = ord_x(a_i) for the formal
polygon and y_i = v_rho(a_i) (the Gauss valuation at s) for NP_rho.  Slopes
are reported left to right, so they strictly increase.
"""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass, field, replace
from fractions import Fraction
from typing import Optional, Sequence

from .errors import CertificationError, InternalInconsistency, PreconditionError
from .exactnum import as_fraction
from .laurent import AffinePiece, certified_start, dominance_threshold, gauss_envelope, ord_x, valuation_at
from .twisted import TwistedOperator

EFFECTIVE = "effective"
BOUNDARY = "boundary"
INEFFECTIVE = "ineffective"


def lower_hull(points: Sequence[tuple]) -> list:
    """Lower convex hull by monotone chain; collinear points are not vertices."""
    pts = sorted(points)
    hull: list = []
    for pt in pts:
        while len(hull) >= 2:
            (x1, y1), (x2, y2) = hull[-2], hull[-1]
            cross = (x2 - x1) * (pt[1] - y1) - (y2 - y1) * (pt[0] - x1)
            if cross <= 0:
                hull.pop()
            else:
                break
        hull.append(pt)
    return hull


def _tag(slope: Fraction, s: Fraction) -> str:
    if slope < -s:
        return EFFECTIVE
    if slope == -s:
        return BOUNDARY
    return INEFFECTIVE


@dataclass(frozen=True)
class StaticPolygon:
    """A lower hull with its vertices (the breaks) and per-segment data.

    ``s`` is None for the formal polygon.  Formal segments are tagged
    effective when their slope is below -1.
    """

    vertices: tuple
    s: Optional[Fraction] = None
    tags: tuple = field(default=())

    @classmethod
    def from_points(cls, points: Sequence[tuple], s: Optional[Fraction] = None) -> "StaticPolygon":
        hull = lower_hull(points)
        threshold = Fraction(1) if s is None else s
        slopes = [(b[1] - a[1]) / (b[0] - a[0]) for a, b in zip(hull, hull[1:])]
        return cls(tuple(hull), s, tuple(_tag(sl, threshold) for sl in slopes))

    @property
    def breaks(self) -> tuple:
        return tuple(v[0] for v in self.vertices)

    @property
    def degree(self) -> int:
        return self.vertices[-1][0] - self.vertices[0][0]

    def segment_slopes(self) -> list:
        return [(b[1] - a[1]) / (b[0] - a[0]) for a, b in zip(self.vertices, self.vertices[1:])]

    def lengths(self) -> list:
        return [b[0] - a[0] for a, b in zip(self.vertices, self.vertices[1:])]

    def slopes(self) -> list:
        """The slope multiset as (slope, multiplicity) pairs, increasing."""
        return list(zip(self.segment_slopes(), self.lengths()))

    def slope_list(self) -> list:
        return [sl for sl, mult in self.slopes() for _ in range(mult)]

    def effective_slopes(self) -> list:
        return [(sl, mult) for (sl, mult), tag in zip(self.slopes(), self.tags) if tag == EFFECTIVE]

    def to_json(self) -> dict:
        return {
            "s": None if self.s is None else str(self.s),
            "vertices": [[v[0], str(v[1])] for v in self.vertices],
            "slopes": [{"slope": str(sl), "multiplicity": m, "tag": t} for (sl, m), t in zip(self.slopes(), self.tags)],
        }


def _require_nonzero_constant(op: TwistedOperator) -> None:
    op.require_monic()
    if op.coeff(0).is_zero():
        raise PreconditionError("the T^0 coefficient vanishes; the polygon would not reach the origin")


def formal_points(op: TwistedOperator) -> list:
    return [(-i, Fraction(ord_x(a))) for i, a in enumerate(op.coeffs) if not a.is_zero()]


def formal_polygon(op: TwistedOperator) -> StaticPolygon:
    """Lower hull of the points (-i, ord_x a_i)."""
    _require_nonzero_constant(op)
    return StaticPolygon.from_points(formal_points(op))


def formal_slopes(op: TwistedOperator) -> list:
    """Formal slopes, decreasing: -lambda - 1 for each slope lambda < -1, padded with zeros.

    A vanishing constant term splits off a right factor T (a slope-0 piece).
    """
    op.require_monic()
    k = 0
    while op.coeff(k).is_zero():
        k += 1
    out = [Fraction(0)] * k
    if k < op.degree:
        rest = TwistedOperator(op.p, op.coeffs[k:])
        poly = formal_polygon(rest)
        for sl, mult in poly.slopes():
            out += [(-sl - 1) if sl < -1 else Fraction(0)] * mult
    return sorted(out, reverse=True)


def points_at(op: TwistedOperator, s) -> list:
    s = as_fraction(s)
    if s <= 0:
        raise PreconditionError("s must be positive")
    return [(-i, valuation_at(a, s)) for i, a in enumerate(op.coeffs) if not a.is_zero()]


def polygon_at(op: TwistedOperator, s) -> StaticPolygon:
    """NP_rho at s = -log_p(rho), segments tagged against the line slope -s."""
    _require_nonzero_constant(op)
    s = as_fraction(s)
    return StaticPolygon.from_points(points_at(op, s), s)


# ---------------------------------------------------------------------------
# parametric polygon


@dataclass(frozen=True)
class PolygonInterval:
    """An open s-interval (lo, hi) on which the hull and tags are constant."""

    lo: Fraction
    hi: Optional[Fraction]
    breaks: tuple
    vertex_values: tuple  # AffinePiece per break
    slopes: tuple  # AffinePiece per segment
    multiplicities: tuple
    tags: tuple

    def witness(self) -> Fraction:
        return self.lo + 1 if self.hi is None else (self.lo + self.hi) / 2

    def contains(self, s) -> bool:
        return s > self.lo and (self.hi is None or s < self.hi)

    def polygon(self, s) -> StaticPolygon:
        s = as_fraction(s)
        verts = tuple((b, v(s)) for b, v in zip(self.breaks, self.vertex_values))
        return StaticPolygon(verts, s, self.tags)

    def combinatorics(self) -> tuple:
        return (self.breaks, self.tags, self.slopes)

    def to_json(self) -> dict:
        return {
            "lo": str(self.lo),
            "hi": None if self.hi is None else str(self.hi),
            "breaks": list(self.breaks),
            "segments": [
                {"slope": sl.to_json(), "multiplicity": m, "tag": t}
                for sl, m, t in zip(self.slopes, self.multiplicities, self.tags)
            ],
        }


@dataclass(frozen=True)
class ParametricPolygon:
    """NP_rho for every s > 0 as a list of intervals.

    ``critical_values`` holds every candidate event point before merging; the
    interval data describe the open intervals between them.
    """

    intervals: tuple
    critical_values: tuple

    def locate(self, s) -> Optional[PolygonInterval]:
        s = as_fraction(s)
        if s in self.critical_values:
            return None
        for iv in self.intervals:
            if iv.contains(s):
                return iv
        return None

    def predict(self, s) -> StaticPolygon:
        iv = self.locate(s)
        if iv is None:
            raise ValueError(f"s={s} is a critical value; no interval prediction")
        return iv.polygon(s)

    @property
    def final(self) -> PolygonInterval:
        return self.intervals[-1]

    def to_json(self) -> dict:
        return {"intervals": [iv.to_json() for iv in self.intervals]}


def _envelopes(op: TwistedOperator) -> dict:
    envs = {}
    for i, a in enumerate(op.coeffs):
        if a.is_zero():
            continue
        if certified_start(a) > 0:
            raise CertificationError(
                f"coefficient of T^{i} is only certified for s >= {certified_start(a)}; "
                "the parametric polygon needs all of (0, inf)"
            )
        envs[i] = gauss_envelope(a)
    return envs


def _roots_in_regions(pieces_by_region: list, equations) -> set:
    """Roots of affine equations restricted to the region they were built on."""
    roots = set()
    for lo, hi, pieces in pieces_by_region:
        for eq in equations(pieces):
            r = eq.root()
            if r is not None and r > lo and (hi is None or r < hi):
                roots.add(r)
    return roots


def parametric_polygon(op: TwistedOperator) -> ParametricPolygon:
    """Exact decomposition of (0, inf) into intervals of constant hull and tags."""
    _require_nonzero_constant(op)
    envs = _envelopes(op)
    idx = sorted(envs)
    env_breaks = sorted({b for e in envs.values() for b in e.breaks})
    edges = [Fraction(0), *env_breaks, None]
    regions = []
    for lo, hi in zip(edges, edges[1:]):
        mid = lo + 1 if hi is None else (lo + hi) / 2
        regions.append((lo, hi, {i: envs[i].piece_at(mid) for i in idx}))

    def collinear(pieces):
        for a in range(len(idx)):
            for b in range(a + 1, len(idx)):
                for c in range(b + 1, len(idx)):
                    yield _cross(idx[a], idx[b], idx[c], pieces)

    def effective_boundary(pieces):
        for a in range(len(idx)):
            for b in range(a + 1, len(idx)):
                i, j = idx[a], idx[b]
                slope = (pieces[i] - pieces[j]).scale(Fraction(1, j - i))
                yield slope + AffinePiece(0, 1)

    critical = set(env_breaks)
    critical |= _roots_in_regions(regions, collinear)
    critical |= _roots_in_regions(regions, effective_boundary)
    cuts = sorted(c for c in critical if c > 0)

    raw = []
    bounds = [Fraction(0), *cuts, None]
    for lo, hi in zip(bounds, bounds[1:]):
        raw.append(_interval_at(op, envs, lo, hi))

    merged = [raw[0]]
    for iv in raw[1:]:
        prev = merged[-1]
        if prev.combinatorics() == iv.combinatorics() and prev.vertex_values == iv.vertex_values:
            merged[-1] = replace(prev, hi=iv.hi)
        else:
            merged.append(iv)
    result = ParametricPolygon(tuple(merged), tuple(cuts))
    _check_asymptotics(op, result)
    return result


def _cross(i: int, j: int, k: int, pieces: dict) -> AffinePiece:
    # points P_i = (-i, Y_i); cross((P_j - P_i), (P_k - P_i))
    dx1, dx2 = Fraction(i - j), Fraction(i - k)
    dy1, dy2 = pieces[j] - pieces[i], pieces[k] - pieces[i]
    return dy2.scale(dx1) - dy1.scale(dx2)


def _interval_at(op: TwistedOperator, envs: dict, lo, hi) -> PolygonInterval:
    w = lo + 1 if hi is None else (lo + hi) / 2
    poly = polygon_at(op, w)
    vals = tuple(envs[-b].piece_at(w) for b in poly.breaks)
    slopes = tuple(
        (vb - va).scale(Fraction(1, b - a))
        for (a, va), (b, vb) in zip(zip(poly.breaks, vals), list(zip(poly.breaks, vals))[1:])
    )
    return PolygonInterval(lo, hi, poly.breaks, vals, slopes, tuple(poly.lengths()), poly.tags)


def _check_asymptotics(op: TwistedOperator, pp: ParametricPolygon) -> None:
    fnp = formal_polygon(op)
    last = pp.final
    got = Counter()
    for sl, m in zip(last.slopes, last.multiplicities):
        got[sl.slope] += m
    want = Counter()
    for sl, m in fnp.slopes():
        want[sl] += m
    if got != want:
        raise InternalInconsistency(f"final-interval slope rates {dict(got)} differ from formal slopes {dict(want)}")
    if not set(fnp.breaks) <= set(last.breaks):
        raise InternalInconsistency("formal breaks are not breaks of the polygon for large s")


def stabilization_threshold(op: TwistedOperator) -> Fraction:
    """Left end of the last interval: breaks and tags are constant beyond it."""
    return parametric_polygon(op).final.lo


# ---------------------------------------------------------------------------
# thresholds from the hull-stability argument


@dataclass(frozen=True)
class ThresholdReport:
    direct_stabilization: Fraction
    c1: Fraction
    c2: Fraction
    c3: Fraction
    c4: Fraction
    skipped: tuple = ()

    @property
    def combined(self) -> Fraction:
        return max(self.c1, self.c2, self.c3, self.c4)

    def to_json(self) -> dict:
        return {
            "direct_stabilization": str(self.direct_stabilization),
            "c1": str(self.c1),
            "c2": str(self.c2),
            "c3": str(self.c3),
            "c4": str(self.c4),
            "combined": str(self.combined),
            "skipped": [list(t) for t in self.skipped],
        }


def hull_thresholds(op: TwistedOperator) -> ThresholdReport:
    """Sufficient thresholds in s from the leading-coefficient valuations.

    With b_i the leading x-coefficient of a_i and V_i = vp(b_i):
    c1 is the largest dominance threshold, c2 and c3 bound the two junk terms
    of the hull-stability argument scaled by n^2 + 1, and c4 bounds the
    effectiveness junk term scaled by n + 1.  Index tuples touching a zero
    coefficient are skipped and listed.
    """
    _require_nonzero_constant(op)
    n = op.degree
    lead_vp = {i: a.leading_coefficient().vp() for i, a in enumerate(op.coeffs) if not a.is_zero()}
    c1 = max(dominance_threshold(a) for a in op.coeffs if not a.is_zero())
    skipped = []
    best2 = best3 = best4 = Fraction(0)
    for h in range(n + 1):
        for j in range(h + 1, n + 1):
            for k in range(j, n + 1):
                if not all(t in lead_vp for t in (h, j, k)):
                    skipped.append(("c2", h, j, k))
                    continue
                theta = -(lead_vp[j] - lead_vp[h]) / (j - h) - (lead_vp[h] - lead_vp[k]) / (k - h)
                best2 = max(best2, abs(theta))
                if k > j:
                    theta = -(lead_vp[k] - lead_vp[j]) / (k - j) - (lead_vp[h] - lead_vp[j]) / (h - j)
                    best3 = max(best3, abs(theta))
            if h in lead_vp and j in lead_vp:
                best4 = max(best4, abs((lead_vp[j] - lead_vp[h]) / (j - h)))
            else:
                skipped.append(("c4", h, j))
    return ThresholdReport(
        direct_stabilization=stabilization_threshold(op),
        c1=c1,
        c2=(n * n + 1) * best2,
        c3=(n * n + 1) * best3,
        c4=(n + 1) * best4,
        skipped=tuple(skipped),
    )

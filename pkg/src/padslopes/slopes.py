"""Subsidiary radii, the f_i/F_i radius profile, p-adic slope inference and the
slope comparison.

Radii are reported as v = -log_p R.  A radius below omega*rho is read off an
effective polygon slope lambda as v = 1/(p-1) - lambda; anything else is only
known to lie in the band [s, s + 1/(p-1)].
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional, Sequence

from .errors import InternalInconsistency, PreconditionError
from .exactnum import as_fraction
from .laurent import AffinePiece, PiecewiseAffine
from .newton import EFFECTIVE, ParametricPolygon, formal_slopes, parametric_polygon, polygon_at
from .twisted import TwistedOperator


@dataclass(frozen=True)
class RadiusValue:
    """Either a determined v = -log_p R, or the band s <= v <= s + 1/(p-1)."""

    v: Optional[Fraction] = None
    band: Optional[tuple] = None

    @property
    def determined(self) -> bool:
        return self.v is not None

    def to_json(self):
        if self.determined:
            return {"determined": True, "v": str(self.v)}
        return {"determined": False, "band": [str(self.band[0]), str(self.band[1])]}


def subsidiary_radii(op: TwistedOperator, s) -> list:
    """Radii at s in increasing order; effective slopes give the small ones."""
    s = as_fraction(s)
    omega = Fraction(1, op.p - 1)
    poly = polygon_at(op, s)
    out = []
    for (slope, mult), tag in zip(poly.slopes(), poly.tags):
        if tag == EFFECTIVE:
            out += [RadiusValue(v=omega - slope)] * mult
    while len(out) < op.degree:
        out.append(RadiusValue(band=(s, s + omega)))
    for r in out:
        if r.determined and not r.v > s + omega:
            raise InternalInconsistency(f"determined radius {r.v} is not below omega*rho at s={s}")
    return out


def _runs(segments: list) -> list:
    """Group consecutive (lo, hi, piece) segments into continuous functions."""
    runs, current = [], []
    for seg in segments:
        if current and current[-1][1] != seg[0]:
            runs.append(current)
            current = []
        current.append(seg)
    if current:
        runs.append(current)
    out = []
    for run in runs:
        try:
            out.append(PiecewiseAffine.from_segments(run))
        except ValueError as exc:
            raise InternalInconsistency(f"radius function is discontinuous: {exc}") from exc
    return out


@dataclass(frozen=True)
class RadiiProfile:
    """Per index j, f_j on the s-ranges where it is determined, and F_i likewise.

    ``radii[j]`` (f_(j+1)) and ``sums[i]`` (F_(i+1)) hold lists of PiecewiseAffine runs;
    each run's left end is open.  ``indeterminate[j]`` lists the s-intervals
    where the j-th radius is only bounded.
    """

    p: int
    n: int
    radii: tuple
    sums: tuple
    indeterminate: tuple
    polygon: ParametricPolygon = field(repr=False)

    def radius_at(self, j: int, s) -> Optional[Fraction]:
        return _eval_runs(self.radii[j - 1], s)

    def sum_at(self, i: int, s) -> Optional[Fraction]:
        return _eval_runs(self.sums[i - 1], s)

    def first_sum_run(self, i: int) -> Optional[PiecewiseAffine]:
        runs = self.sums[i - 1]
        return runs[0] if runs else None

    def is_convex(self) -> bool:
        return all(run.is_convex() for runs in self.sums for run in runs)

    def to_json(self) -> dict:
        return {
            "p": self.p,
            "n": self.n,
            "f": [[run.to_json() for run in runs] for runs in self.radii],
            "F": [[run.to_json() for run in runs] for runs in self.sums],
            "indeterminate": [
                [[str(lo), None if hi is None else str(hi)] for lo, hi in ivs] for ivs in self.indeterminate
            ],
        }


def _eval_runs(runs: list, s) -> Optional[Fraction]:
    s = as_fraction(s)
    for run in runs:
        if s > run.start and run.contains(s):
            return run(s)
    return None


def radii_profile(op: TwistedOperator) -> RadiiProfile:
    """Assemble f_j and F_i over all parametric intervals and check the
    closed form on the last interval."""
    pp = parametric_polygon(op)
    n, p = op.degree, op.p
    omega = AffinePiece(Fraction(1, p - 1), 0)
    f_segs = [[] for _ in range(n)]
    F_segs = [[] for _ in range(n)]
    indet = [[] for _ in range(n)]
    for iv in pp.intervals:
        pieces = []
        for sl, mult, tag in zip(iv.slopes, iv.multiplicities, iv.tags):
            if tag == EFFECTIVE:
                pieces += [omega - sl] * mult
        total = AffinePiece(0, 0)
        for j in range(n):
            if j < len(pieces):
                f_segs[j].append((iv.lo, iv.hi, pieces[j]))
                total = total + pieces[j]
                F_segs[j].append((iv.lo, iv.hi, total))
            else:
                indet[j].append((iv.lo, iv.hi))
        w = iv.witness()
        if any(a(w) < b(w) for a, b in zip(pieces, pieces[1:])):
            raise InternalInconsistency(f"radii out of order on ({iv.lo}, {iv.hi})")
    profile = RadiiProfile(
        p=p,
        n=n,
        radii=tuple(_runs(segs) for segs in f_segs),
        sums=tuple(_runs(segs) for segs in F_segs),
        indeterminate=tuple(_merge_intervals(ivs) for ivs in indet),
        polygon=pp,
    )
    _check_closed_form(op, profile)
    return profile


def _merge_intervals(ivs: list) -> list:
    out: list = []
    for lo, hi in ivs:
        if out and out[-1][1] == lo:
            out[-1] = (out[-1][0], hi)
        else:
            out.append((lo, hi))
    return out


def stable_closed_form(op: TwistedOperator, pp: Optional[ParametricPolygon] = None) -> list:
    """Closed forms of the determined f_j for large s, from the leading
    coefficients b_i and the formal slopes beta_j:

        f_j = 1/(p-1) + (1 + beta_j) s + (vp b_(-m_(t-1)) - vp b_(-m_t)) / (m_t - m_(t-1))

    for j inside the t-th segment [m_(t-1), m_t] of the final polygon.
    """
    pp = pp or parametric_polygon(op)
    beta = formal_slopes(op)
    last = pp.final
    vp_lead = lambda m: op.coeff(-m).leading_coefficient().vp()
    out = []
    j = 0
    for (m0, m1), mult, tag in zip(zip(last.breaks, last.breaks[1:]), last.multiplicities, last.tags):
        if tag != EFFECTIVE:
            break
        shift = (vp_lead(m0) - vp_lead(m1)) / (m1 - m0)
        for _ in range(mult):
            out.append(AffinePiece(Fraction(1, op.p - 1) + shift, 1 + beta[j]))
            j += 1
    return out


def _check_closed_form(op: TwistedOperator, profile: RadiiProfile) -> None:
    last = profile.polygon.final
    w = last.witness()
    for j, piece in enumerate(stable_closed_form(op, profile.polygon)):
        runs = profile.radii[j]
        got = runs[-1].piece_at(w) if runs and runs[-1].end is None else None
        if got != piece:
            raise InternalInconsistency(f"f_{j + 1} on the final interval is {got}, closed form gives {piece}")


# ---------------------------------------------------------------------------
# p-adic slopes


@dataclass(frozen=True)
class Inference:
    """Result of infer_padic.

    ``alpha`` is the slope multiset (certify/declared), ``bounds`` the per-i
    upper bounds on alpha_1 + ... + alpha_i (bound mode), ``certificate`` one of
    "exact", "upper-bound", "consistent" or a violation name.
    """

    mode: str
    certificate: str
    alpha: Optional[tuple] = None
    bounds: Optional[tuple] = None
    details: tuple = ()

    @property
    def consistent(self) -> bool:
        return self.certificate in ("exact", "upper-bound", "consistent")

    def to_json(self) -> dict:
        return {
            "mode": self.mode,
            "certificate": self.certificate,
            "alpha": None if self.alpha is None else [str(a) for a in self.alpha],
            "bounds": None if self.bounds is None else [None if b is None else str(b) for b in self.bounds],
            "details": list(self.details),
        }


def _first_piece(run: PiecewiseAffine) -> AffinePiece:
    return run.pieces[0]


def infer_padic(profile: RadiiProfile, mode: str = "certify", declared_alpha: Optional[Sequence] = None) -> Inference:
    if mode == "certify":
        return _certify(profile)
    if mode == "bound":
        return _bound(profile)
    if mode == "declared":
        if declared_alpha is None:
            raise PreconditionError("declared mode needs declared slopes")
        return _declared(profile, [as_fraction(a) for a in declared_alpha])
    raise PreconditionError(f"unknown mode {mode!r}")


def _certify(profile: RadiiProfile) -> Inference:
    # F_i linear through the origin on its first determined piece means, by
    # convexity and solvability, F_i(s) = (i + alpha_1 + ... + alpha_i) s on (0, d].
    partial = [Fraction(0)]
    for i in range(1, profile.n + 1):
        run = profile.first_sum_run(i)
        if run is None or _first_piece(run).intercept != 0:
            inf = _bound(profile)
            return Inference("certify", inf.certificate, bounds=inf.bounds,
                             details=(f"F_{i} is not linear through the origin; fell back to bound mode",))
        partial.append(_first_piece(run).slope - i)
    alpha = tuple(b - a for a, b in zip(partial, partial[1:]))
    if any(a < 0 for a in alpha) or any(a < b for a, b in zip(alpha, alpha[1:])):
        raise InternalInconsistency(f"certified slopes {alpha} are not a decreasing nonnegative sequence")
    return Inference("certify", "exact", alpha=alpha)


def _bound(profile: RadiiProfile) -> Inference:
    # F_i convex with F_i(0) = 0, so F_i(s)/s is nondecreasing: the chord from
    # the origin bounds the slope i + sum(alpha) near s = 0.
    bounds = []
    for i in range(1, profile.n + 1):
        run = profile.first_sum_run(i)
        if run is None:
            bounds.append(None)
            continue
        d = run.start
        bounds.append(run.pieces[0](d) / d - i if d > 0 else run.pieces[0].slope - i)
    return Inference("bound", "upper-bound", bounds=tuple(bounds))


def _declared(profile: RadiiProfile, alpha: list) -> Inference:
    if len(alpha) != profile.n:
        raise PreconditionError(f"expected {profile.n} declared slopes, got {len(alpha)}")
    if any(a < 0 for a in alpha):
        raise PreconditionError("declared slopes must be nonnegative")
    if any(a < b for a, b in zip(alpha, alpha[1:])):
        raise PreconditionError("declared slopes must be listed in decreasing order")
    omega = Fraction(1, profile.p - 1)
    details = []
    violation = None
    reach = [None] * profile.n
    for i in range(1, profile.n + 1):
        run = profile.first_sum_run(i)
        if run is None:
            details.append(f"F_{i} is never determined; junction not checked")
            continue
        sigma = i + sum(alpha[:i])
        piece, d = _first_piece(run), run.start
        u, w = piece.intercept, piece.slope
        if u == 0 and w == sigma:
            reach[i - 1] = d
            details.append(f"F_{i}: linear piece {sigma}*s continues the first determined piece")
        elif u < 0 and w > sigma and 0 < u / (sigma - w) <= d:
            cross = u / (sigma - w)
            reach[i - 1] = cross
            details.append(f"F_{i}: convex junction of {sigma}*s and {piece} at s={cross}")
        else:
            violation = violation or "convexity"
            details.append(f"F_{i}: {sigma}*s cannot be joined convexly to {piece} starting at s={d}")
    for j in range(profile.n):
        limit = reach[j]
        if limit is None:
            continue
        runs = profile.radii[j]
        if runs:
            limit = min(limit, runs[0].start)
        if alpha[j] * limit > omega:
            violation = violation or "band"
            details.append(f"f_{j + 1} = {1 + alpha[j]}*s leaves the band [s, s + {omega}] before s={limit}")
    if sum(alpha).denominator != 1:
        violation = violation or "non-integral-irregularity"
        details.append(f"sum of slopes {sum(alpha)} is not an integer")
    return Inference("declared", violation or "consistent", alpha=tuple(alpha), details=tuple(details))


# ---------------------------------------------------------------------------
# comparison


STRICT = "strict"
EQUAL = "equal"
VIOLATION = "VIOLATION"
CERTIFIED = "certified"
INCONCLUSIVE = "inconclusive"


@dataclass(frozen=True)
class SlopeComparison:
    alpha: tuple
    beta: tuple
    rows: tuple  # (i, sum alpha or bound, sum beta, verdict)
    irregularity_integral: Optional[bool]

    @property
    def verdicts(self) -> list:
        return [r[3] for r in self.rows]

    @property
    def ok(self) -> bool:
        return VIOLATION not in self.verdicts

    def to_json(self) -> dict:
        return {
            "alpha": None if self.alpha is None else [str(a) for a in self.alpha],
            "beta": [str(b) for b in self.beta],
            "partial_sums": [
                {"i": i, "alpha": None if a is None else str(a), "beta": str(b), "verdict": v}
                for i, a, b, v in self.rows
            ],
            "irregularity_integral": self.irregularity_integral,
            "ok": self.ok,
        }


def compare_slopes(alpha: Sequence, beta: Sequence) -> SlopeComparison:
    """Check sum_{j<=i} alpha_j <= sum_{j<=i} beta_j for every i."""
    if len(alpha) != len(beta):
        raise PreconditionError(f"slope multisets differ in size: {len(alpha)} vs {len(beta)}")
    a = sorted((as_fraction(x) for x in alpha), reverse=True)
    b = sorted((as_fraction(x) for x in beta), reverse=True)
    if any(x < 0 for x in a + b):
        raise PreconditionError("slopes must be nonnegative")
    rows, sa, sb = [], Fraction(0), Fraction(0)
    for i, (x, y) in enumerate(zip(a, b), start=1):
        sa, sb = sa + x, sb + y
        verdict = STRICT if sa < sb else (EQUAL if sa == sb else VIOLATION)
        rows.append((i, sa, sb, verdict))
    return SlopeComparison(tuple(a), tuple(b), tuple(rows), sum(a).denominator == 1)


def compare_bounds(bounds: Sequence, beta: Sequence) -> SlopeComparison:
    """Bound-mode comparison: an upper bound at or below the beta partial sum certifies row i."""
    if len(bounds) != len(beta):
        raise PreconditionError("bounds and slopes differ in size")
    b = sorted((as_fraction(x) for x in beta), reverse=True)
    rows, sb = [], Fraction(0)
    for i, (bd, y) in enumerate(zip(bounds, b), start=1):
        sb += y
        verdict = CERTIFIED if bd is not None and bd <= sb else INCONCLUSIVE
        rows.append((i, bd, sb, verdict))
    return SlopeComparison(None, tuple(b), tuple(rows), None)

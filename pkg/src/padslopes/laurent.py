"""Laurent polynomials over Q(pi) with an optional certified tail, and exact
piecewise-affine functions of s = -log_p(rho).

Valuations are kept in log_p form throughout: the rho-Gauss valuation of
sum b_i x^i at s is min_i (vp(b_i) + i*s), a concave piecewise-affine
function of s.
"""

from __future__ import annotations

from bisect import bisect_left
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Mapping, NamedTuple, Optional, Sequence

from .errors import CertificationError, ParseError, PreconditionError
from .exactnum import PiScalar, as_fraction


@dataclass(frozen=True)
class AffinePiece:
    """The function s -> intercept + slope*s."""

    intercept: Fraction
    slope: Fraction

    def __post_init__(self):
        object.__setattr__(self, "intercept", as_fraction(self.intercept))
        object.__setattr__(self, "slope", as_fraction(self.slope))

    def __call__(self, s) -> Fraction:
        return self.intercept + self.slope * s

    def __add__(self, other: "AffinePiece") -> "AffinePiece":
        return AffinePiece(self.intercept + other.intercept, self.slope + other.slope)

    def __sub__(self, other: "AffinePiece") -> "AffinePiece":
        return AffinePiece(self.intercept - other.intercept, self.slope - other.slope)

    def __neg__(self) -> "AffinePiece":
        return AffinePiece(-self.intercept, -self.slope)

    def scale(self, c) -> "AffinePiece":
        return AffinePiece(self.intercept * c, self.slope * c)

    def root(self) -> Optional[Fraction]:
        """The unique zero, or None when the function is constant."""
        if self.slope == 0:
            return None
        return -self.intercept / self.slope

    def to_json(self) -> dict:
        return {"intercept": str(self.intercept), "slope": str(self.slope)}

    def __str__(self):
        if self.slope == 0:
            return str(self.intercept)
        lin = "s" if self.slope == 1 else ("-s" if self.slope == -1 else f"{self.slope}*s")
        if self.intercept == 0:
            return lin
        sign = "-" if self.intercept < 0 else "+"
        return f"{lin} {sign} {abs(self.intercept)}"


@dataclass(frozen=True)
class PiecewiseAffine:
    """A continuous piecewise-affine function on [start, end] (end=None: unbounded).

    ``pieces[k]`` is in force between ``breaks[k-1]`` and ``breaks[k]``.
    """

    start: Fraction
    breaks: tuple
    pieces: tuple
    end: Optional[Fraction] = None

    def __post_init__(self):
        if len(self.pieces) != len(self.breaks) + 1:
            raise ValueError("need exactly one more piece than breakpoints")
        edges = [self.start, *self.breaks] + ([self.end] if self.end is not None else [])
        if any(b <= a for a, b in zip(edges, edges[1:])):
            raise ValueError(f"breakpoints must be strictly increasing inside the domain: {edges}")
        for b, left, right in zip(self.breaks, self.pieces, self.pieces[1:]):
            if left(b) != right(b):
                raise ValueError(f"discontinuity at s={b}: {left(b)} != {right(b)}")

    @classmethod
    def single(cls, piece: AffinePiece, start=Fraction(0), end=None) -> "PiecewiseAffine":
        return cls(as_fraction(start), (), (piece,), end)

    @classmethod
    def from_segments(cls, segments: Sequence[tuple]) -> "PiecewiseAffine":
        """Build from consecutive (lo, hi, piece) triples, merging equal neighbours."""
        if not segments:
            raise ValueError("no segments")
        start = segments[0][0]
        breaks, pieces = [], [segments[0][2]]
        for (lo, hi, piece), (_, prev_hi, _) in zip(segments[1:], segments):
            if lo != prev_hi:
                raise ValueError(f"gap between segments at {prev_hi} and {lo}")
            if piece == pieces[-1]:
                continue
            breaks.append(lo)
            pieces.append(piece)
        return cls(start, tuple(breaks), tuple(pieces), segments[-1][1])

    def domain(self) -> tuple:
        return (self.start, self.end)

    def contains(self, s) -> bool:
        return s >= self.start and (self.end is None or s <= self.end)

    def piece_at(self, s) -> AffinePiece:
        if not self.contains(s):
            raise ValueError(f"s={s} outside the domain [{self.start}, {self.end}]")
        return self.pieces[bisect_left(self.breaks, s)]

    def __call__(self, s) -> Fraction:
        return self.piece_at(s)(s)

    def slopes(self) -> list:
        return [pc.slope for pc in self.pieces]

    def is_concave(self) -> bool:
        sl = self.slopes()
        return all(a >= b for a, b in zip(sl, sl[1:]))

    def is_convex(self) -> bool:
        sl = self.slopes()
        return all(a <= b for a, b in zip(sl, sl[1:]))

    def last_break(self) -> Fraction:
        return self.breaks[-1] if self.breaks else Fraction(0)

    def segments(self) -> list:
        edges = [self.start, *self.breaks, self.end]
        return [(edges[k], edges[k + 1], pc) for k, pc in enumerate(self.pieces)]

    def restrict(self, lo, hi=None) -> "PiecewiseAffine":
        lo = max(lo, self.start)
        if self.end is not None:
            hi = self.end if hi is None else min(hi, self.end)
        out = []
        for a, b, pc in self.segments():
            a2 = max(a, lo)
            b2 = b if hi is None else (hi if b is None else min(b, hi))
            if b2 is None or a2 < b2:
                out.append((a2, b2, pc))
        return PiecewiseAffine.from_segments(out)

    def __add__(self, other: "PiecewiseAffine") -> "PiecewiseAffine":
        lo = max(self.start, other.start)
        ends = [e for e in (self.end, other.end) if e is not None]
        hi = min(ends) if ends else None
        cuts = sorted({b for b in (*self.breaks, *other.breaks) if b > lo and (hi is None or b < hi)})
        edges = [lo, *cuts, hi]
        segs = []
        for a, b in zip(edges, edges[1:]):
            mid = a + 1 if b is None else (a + b) / 2
            segs.append((a, b, self.piece_at(mid) + other.piece_at(mid)))
        return PiecewiseAffine.from_segments(segs)

    def to_json(self) -> dict:
        return {
            "start": str(self.start),
            "end": None if self.end is None else str(self.end),
            "breaks": [str(b) for b in self.breaks],
            "pieces": [pc.to_json() for pc in self.pieces],
        }

    def __str__(self):
        parts = []
        for a, b, pc in self.segments():
            parts.append(f"[{a}, {'inf' if b is None else b}]: {pc}")
        return "; ".join(parts)


class Tail(NamedTuple):
    """Every omitted term x^i with i >= start has coefficient valuation >= vp_min."""

    start: int
    vp_min: Fraction


Scalar = PiScalar


class LaurentElement:
    """A finite Laurent polynomial sum b_i x^i over Q(pi), optionally with a tail bound."""

    __slots__ = ("p", "terms", "tail")

    def __init__(self, p: int, terms: Mapping | Iterable = (), tail: Optional[Tail] = None):
        items = terms.items() if isinstance(terms, Mapping) else terms
        acc: dict[int, PiScalar] = {}
        for e, c in items:
            c = _to_scalar(p, c)
            e = int(e)
            acc[e] = acc[e] + c if e in acc else c
        if tail is not None:
            tail = Tail(int(tail[0]), as_fraction(tail[1]))
            vmin = tail.vp_min
            for e in [e for e in acc if e >= tail.start]:
                c = acc.pop(e)
                if not c.is_zero():
                    vmin = min(vmin, c.vp())
            tail = Tail(tail.start, vmin)
        object.__setattr__(self, "p", p)
        object.__setattr__(self, "terms", tuple(sorted((e, c) for e, c in acc.items() if not c.is_zero())))
        object.__setattr__(self, "tail", tail)

    def __setattr__(self, name, value):
        raise AttributeError("LaurentElement is immutable")

    # constructors
    @classmethod
    def zero(cls, p: int) -> "LaurentElement":
        return cls(p)

    @classmethod
    def constant(cls, p: int, c) -> "LaurentElement":
        return cls(p, {0: c})

    @classmethod
    def monomial(cls, p: int, c, e: int) -> "LaurentElement":
        return cls(p, {e: c})

    # accessors
    def is_zero(self) -> bool:
        return not self.terms and self.tail is None

    def has_stored_terms(self) -> bool:
        return bool(self.terms)

    def __bool__(self):
        return not self.is_zero()

    def coeff(self, e: int) -> PiScalar:
        for k, c in self.terms:
            if k == e:
                return c
        return PiScalar.rational(self.p, 0)

    def as_dict(self) -> dict:
        return dict(self.terms)

    def leading_coefficient(self) -> PiScalar:
        """Coefficient of the least exponent (b_m in b_m x^ord + higher terms)."""
        if not self.terms:
            raise PreconditionError("ord of zero")
        return self.terms[0][1]

    def is_constant(self) -> bool:
        return self.tail is None and all(e == 0 for e, _ in self.terms)

    def exponents(self) -> list[int]:
        return [e for e, _ in self.terms]

    # arithmetic
    def _coerce(self, other) -> "LaurentElement":
        if isinstance(other, LaurentElement):
            if other.p != self.p:
                raise ValueError("mixing different primes")
            return other
        return LaurentElement.constant(self.p, other)

    def __add__(self, other):
        other = self._coerce(other)
        acc = dict(self.terms)
        for e, c in other.terms:
            acc[e] = acc[e] + c if e in acc else c
        tail = _combine_tails(self.tail, other.tail)
        return LaurentElement(self.p, acc, tail)

    __radd__ = __add__

    def __neg__(self):
        return LaurentElement(self.p, {e: -c for e, c in self.terms}, self.tail)

    def __sub__(self, other):
        return self + (-self._coerce(other))

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, LaurentElement):
            return lmul(self, other)
        c = _to_scalar(self.p, other)
        tail = None
        if self.tail is not None:
            if c.is_zero():
                tail = None
            else:
                tail = Tail(self.tail.start, self.tail.vp_min + c.vp())
        return LaurentElement(self.p, {e: c * b for e, b in self.terms}, tail)

    __rmul__ = __mul__

    def shift(self, k: int) -> "LaurentElement":
        """Multiply by x^k."""
        tail = None if self.tail is None else Tail(self.tail.start + k, self.tail.vp_min)
        return LaurentElement(self.p, {e + k: c for e, c in self.terms}, tail)

    def __eq__(self, other):
        if not isinstance(other, LaurentElement):
            try:
                other = self._coerce(other)
            except (TypeError, ValueError):
                return NotImplemented
        return self.p == other.p and self.terms == other.terms and self.tail == other.tail

    def __hash__(self):
        return hash((self.p, self.terms, self.tail))

    def __repr__(self):
        return f"LaurentElement(p={self.p}, {self})"

    def __str__(self):
        if not self.terms and self.tail is None:
            return "0"
        parts = []
        for e, c in self.terms:
            cs = str(c)
            if " " in cs:
                cs = f"({cs})"
            mono = "" if e == 0 else ("x" if e == 1 else f"x^{e}")
            if not mono:
                parts.append(cs)
            elif cs == "1":
                parts.append(mono)
            elif cs == "-1":
                parts.append("-" + mono)
            else:
                parts.append(f"{cs}*{mono}")
        if self.tail is not None:
            parts.append(f"O(x^{self.tail.start}; vp>={self.tail.vp_min})")
        return " + ".join(parts).replace("+ -", "- ")

    # serialization
    def to_json(self) -> list:
        return [{"exp": e, "coeff": c.to_json()} for e, c in self.terms]

    def tail_json(self) -> Optional[dict]:
        if self.tail is None:
            return None
        return {"tail_from": self.tail.start, "tail_vp_min": str(self.tail.vp_min)}

    @classmethod
    def from_json(cls, p: int, data, tail=None) -> "LaurentElement":
        try:
            terms = [(int(t["exp"]), PiScalar.from_json(p, t["coeff"])) for t in data]
            tl = None
            if tail:
                tl = Tail(int(tail["tail_from"]), as_fraction(tail["tail_vp_min"]))
        except (KeyError, TypeError, ValueError, ZeroDivisionError) as exc:
            raise ParseError(f"malformed Laurent data: {exc}") from exc
        return cls(p, terms, tl)


def _to_scalar(p: int, c) -> PiScalar:
    if isinstance(c, PiScalar):
        if c.p != p:
            raise ValueError("mixing different primes")
        return c
    return PiScalar.rational(p, as_fraction(c))


def _combine_tails(a: Optional[Tail], b: Optional[Tail]) -> Optional[Tail]:
    if a is None:
        return b
    if b is None:
        return a
    return Tail(min(a.start, b.start), min(a.vp_min, b.vp_min))


def lsum(p: int, elements: Iterable[LaurentElement]) -> LaurentElement:
    """Sum of many elements, collecting terms once."""
    terms, tail = [], None
    for f in elements:
        terms.extend(f.terms)
        tail = _combine_tails(tail, f.tail)
    return LaurentElement(p, terms, tail)


def _min_vp(f: LaurentElement) -> Fraction:
    return min(c.vp() for _, c in f.terms)


# ---------------------------------------------------------------------------
# operations


def ord_x(f: LaurentElement) -> int:
    """x-adic valuation: the least exponent with a nonzero coefficient."""
    if not f.terms:
        raise PreconditionError("ord of zero")
    return f.terms[0][0]


def derive(f: LaurentElement) -> LaurentElement:
    """Termwise d/dx.  A tail (T, v) becomes (T-1, v): integers have vp >= 0."""
    tail = None if f.tail is None else Tail(f.tail.start - 1, f.tail.vp_min)
    return LaurentElement(f.p, {e - 1: c * e for e, c in f.terms if e != 0}, tail)


def lmul(f: LaurentElement, g: LaurentElement) -> LaurentElement:
    """Exact product; tail bounds are combined conservatively."""
    if f.p != g.p:
        raise ValueError("mixing different primes")
    acc: dict[int, PiScalar] = {}
    for e1, c1 in f.terms:
        for e2, c2 in g.terms:
            k = e1 + e2
            acc[k] = acc[k] + c1 * c2 if k in acc else c1 * c2
    bounds = []
    if g.tail is not None and f.terms:
        bounds.append(Tail(ord_x(f) + g.tail.start, _min_vp(f) + g.tail.vp_min))
    if f.tail is not None and g.terms:
        bounds.append(Tail(f.tail.start + ord_x(g), f.tail.vp_min + _min_vp(g)))
    if f.tail is not None and g.tail is not None:
        bounds.append(Tail(f.tail.start + g.tail.start, f.tail.vp_min + g.tail.vp_min))
    tail = None
    for b in bounds:
        tail = _combine_tails(tail, b)
    return LaurentElement(f.p, acc, tail)


def _lower_envelope(lines: Sequence[tuple], start: Fraction) -> PiecewiseAffine:
    """Lower envelope of lines (intercept, slope) on [start, inf)."""
    value = {ln: ln[0] + ln[1] * start for ln in lines}
    low = min(value.values())
    current = min((ln for ln in lines if value[ln] == low), key=lambda ln: ln[1])
    s = start
    breaks, pieces = [], [AffinePiece(*current)]
    while True:
        best = None
        for ln in lines:
            if ln[1] < current[1]:
                t = (ln[0] - current[0]) / (current[1] - ln[1])
                if t > s and (best is None or t < best[0] or (t == best[0] and ln[1] < best[1][1])):
                    best = (t, ln)
        if best is None:
            break
        s, current = best
        breaks.append(s)
        pieces.append(AffinePiece(*current))
    return PiecewiseAffine(start, tuple(breaks), tuple(pieces), None)


def certified_start(f: LaurentElement) -> Fraction:
    """Least s >= 0 from which the tail bound cannot undercut the stored terms."""
    if f.tail is None:
        return Fraction(0)
    if not f.terms:
        raise CertificationError("element has no stored terms; only a tail bound is known")
    roots = []
    for e, c in f.terms:
        # tail(s) - line(s) = (vp_min - vp(c)) + (T - e) s, increasing since T > e
        roots.append((c.vp() - f.tail.vp_min) / (f.tail.start - e))
    return max(Fraction(0), min(roots))


def gauss_envelope(f: LaurentElement) -> PiecewiseAffine:
    """The rho-Gauss valuation s -> min_i (vp(b_i) + i*s) as an exact function.

    With a tail the result is restricted to the certified interval [s0, inf);
    ``start == 0`` means the whole of (0, inf).
    """
    if not f.terms:
        raise PreconditionError("Gauss valuation of zero")
    lines = [(c.vp(), Fraction(e)) for e, c in f.terms]
    env = _lower_envelope(lines, Fraction(0))
    s0 = certified_start(f)
    if s0 > 0:
        env = env.restrict(s0)
    return env


def valuation_at(f: LaurentElement, s) -> Fraction:
    """v_rho(f)/log p at s, refusing points outside the certified interval."""
    s = as_fraction(s)
    s0 = certified_start(f)
    if s < s0:
        raise CertificationError(
            f"tail bound certifies the valuation only for s >= {s0}; "
            f"at s={s} it needs vp_min >= {_required_vp_min(f, s)}"
        )
    return min(c.vp() + e * s for e, c in f.terms)


def _required_vp_min(f: LaurentElement, s: Fraction) -> Fraction:
    env = min(c.vp() + e * s for e, c in f.terms)
    return env - f.tail.start * s


def dominance_threshold(f: LaurentElement) -> Fraction:
    """Least s* >= 0 beyond which the leading term b_m x^m alone realises the valuation."""
    if not f.terms:
        raise PreconditionError("ord of zero")
    lines = [(c.vp(), Fraction(e)) for e, c in f.terms]
    threshold = _lower_envelope(lines, Fraction(0)).last_break()
    s0 = certified_start(f)
    if s0 > threshold:
        raise CertificationError(
            f"tail is uncertified on [{threshold}, {s0}); strengthen it to "
            f"vp_min >= {_required_vp_min(f, threshold) if threshold > 0 else 'the stored minimum'}"
        )
    return threshold

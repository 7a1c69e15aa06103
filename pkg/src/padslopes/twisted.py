"""Twisted (Ore) polynomials in T = d/dx over Laurent polynomials.

Multiplication follows T*a = a*T + a'.  Operators are stored as coefficient
lists indexed by the power of T, lowest first.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from itertools import permutations
from math import comb
from typing import Optional, Sequence

from .errors import ParseError, PreconditionError
from .exactnum import PiScalar, is_prime
from .laurent import LaurentElement, derive, lmul, lsum, ord_x

# Sparse candidates e_i + x^k e_j are tried for |k| up to this bound.
CYCLIC_SEARCH_SHIFT = 3


class TwistedOperator:
    """sum a_i T^i with Laurent coefficients a_0, ..., a_n (trailing zeros dropped)."""

    __slots__ = ("p", "coeffs")

    def __init__(self, p: int, coeffs: Sequence):
        cs = [c if isinstance(c, LaurentElement) else LaurentElement.constant(p, c) for c in coeffs]
        for c in cs:
            if c.p != p:
                raise ValueError("coefficients over a different prime")
        while cs and cs[-1].is_zero():
            cs.pop()
        object.__setattr__(self, "p", p)
        object.__setattr__(self, "coeffs", tuple(cs))

    def __setattr__(self, name, value):
        raise AttributeError("TwistedOperator is immutable")

    @classmethod
    def derivation(cls, p: int) -> "TwistedOperator":
        return cls(p, [0, 1])

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1

    def coeff(self, i: int) -> LaurentElement:
        if 0 <= i < len(self.coeffs):
            return self.coeffs[i]
        return LaurentElement.zero(self.p)

    def leading_coefficient(self) -> LaurentElement:
        return self.coeffs[-1]

    def is_monic(self) -> bool:
        return bool(self.coeffs) and self.coeffs[-1] == LaurentElement.constant(self.p, 1)

    def require_monic(self) -> None:
        if not self.is_monic():
            raise PreconditionError("operator is not monic in T")
        if self.degree < 1:
            raise PreconditionError("operator must have degree at least 1")

    def __add__(self, other: "TwistedOperator") -> "TwistedOperator":
        n = max(len(self.coeffs), len(other.coeffs))
        return TwistedOperator(self.p, [self.coeff(i) + other.coeff(i) for i in range(n)])

    def __neg__(self):
        return TwistedOperator(self.p, [-c for c in self.coeffs])

    def __sub__(self, other):
        return self + (-other)

    def __mul__(self, other):
        if isinstance(other, TwistedOperator):
            return tmul(self, other)
        return NotImplemented

    def lscale(self, c) -> "TwistedOperator":
        """Left multiplication by a Laurent element or scalar."""
        if not isinstance(c, LaurentElement):
            c = LaurentElement.constant(self.p, c)
        return TwistedOperator(self.p, [lmul(c, a) for a in self.coeffs])

    def __eq__(self, other):
        if not isinstance(other, TwistedOperator):
            return NotImplemented
        return self.p == other.p and self.coeffs == other.coeffs

    def __hash__(self):
        return hash((self.p, self.coeffs))

    def __str__(self):
        parts = []
        for i in range(self.degree, -1, -1):
            c = self.coeffs[i]
            if c.is_zero():
                continue
            mono = "" if i == 0 else ("T" if i == 1 else f"T^{i}")
            cs = str(c)
            if not mono:
                parts.append(cs)
            elif c == LaurentElement.constant(self.p, 1):
                parts.append(mono)
            else:
                parts.append(f"({cs})*{mono}")
        return " + ".join(parts) if parts else "0"

    def __repr__(self):
        return f"TwistedOperator(p={self.p}, {self})"

    # serialization
    def to_json(self) -> dict:
        coeffs = []
        for i, c in enumerate(self.coeffs):
            entry = {"power": i, "laurent": c.to_json()}
            if c.tail is not None:
                entry["tail"] = c.tail_json()
            coeffs.append(entry)
        return {"p": self.p, "degree": self.degree, "coefficients": coeffs}

    @classmethod
    def from_json(cls, data: dict) -> "TwistedOperator":
        try:
            p = int(data["p"])
            degree = int(data["degree"])
            entries = data["coefficients"]
        except (KeyError, TypeError, ValueError) as exc:
            raise ParseError(f"malformed operator: {exc}") from exc
        if not is_prime(p):
            raise ParseError(f"p = {p} is not prime")
        coeffs: dict[int, LaurentElement] = {}
        for entry in entries:
            try:
                power = int(entry["power"])
                laurent = entry["laurent"]
            except (KeyError, TypeError, ValueError) as exc:
                raise ParseError(f"malformed coefficient entry: {exc}") from exc
            if power < 0 or power > degree or power in coeffs:
                raise ParseError(f"bad or repeated T-power {power}")
            coeffs[power] = LaurentElement.from_json(p, laurent, entry.get("tail"))
        op = cls(p, [coeffs.get(i, LaurentElement.zero(p)) for i in range(degree + 1)])
        if op.degree != degree or not op.is_monic():
            raise PreconditionError("operator in file is not monic of the stated degree")
        return op


def tmul(u: TwistedOperator, v: TwistedOperator) -> TwistedOperator:
    """Ore product, using T^i b = sum_k C(i,k) b^(k) T^(i-k)."""
    if u.p != v.p:
        raise ValueError("operators over different primes")
    p = u.p
    if not u.coeffs or not v.coeffs:
        return TwistedOperator(p, [])
    parts = [[] for _ in range(u.degree + v.degree + 1)]
    for j, b in enumerate(v.coeffs):
        if b.is_zero():
            continue
        ders = [b]
        for _ in range(u.degree):
            ders.append(derive(ders[-1]))
        for i, a in enumerate(u.coeffs):
            if a.is_zero():
                continue
            for k in range(i + 1):
                if ders[k].is_zero():
                    continue
                parts[i - k + j].append(lmul(a, ders[k]) * comb(i, k))
    return TwistedOperator(p, [lsum(p, part) for part in parts])


def theta(p: int) -> TwistedOperator:
    """x*d/dx as a twisted polynomial."""
    return TwistedOperator(p, [LaurentElement.zero(p), LaurentElement.monomial(p, 1, 1)])


def expand_theta(theta_coeffs: Sequence[LaurentElement]) -> TwistedOperator:
    """Turn sum c_k theta^k (c_n = 1) into the monic operator x^(-n) * sum c_k theta^k."""
    if not theta_coeffs:
        raise PreconditionError("empty theta-form")
    p = theta_coeffs[0].p
    n = len(theta_coeffs) - 1
    if theta_coeffs[-1] != LaurentElement.constant(p, 1):
        raise PreconditionError("theta-form must have leading coefficient 1")
    th = theta(p)
    power = TwistedOperator(p, [1])
    total = TwistedOperator(p, [])
    for c in theta_coeffs:
        total = total + power.lscale(c)
        power = tmul(th, power)
    result = total.lscale(LaurentElement.monomial(p, 1, -n))
    if not result.is_monic():
        raise PreconditionError("theta-form did not normalise to a monic operator")
    return result


# ---------------------------------------------------------------------------
# systems and cyclic vectors


@dataclass(frozen=True)
class SystemMatrix:
    """Matrix of a connection: D(e_i) = sum_j entries[i][j] e_j.

    ``theta=True`` means D is x*d/dx, otherwise d/dx.
    """

    p: int
    entries: tuple
    theta: bool = False

    def __post_init__(self):
        rows = tuple(
            tuple(c if isinstance(c, LaurentElement) else LaurentElement.constant(self.p, c) for c in row)
            for row in self.entries
        )
        if any(len(r) != len(rows) for r in rows):
            raise PreconditionError("system matrix must be square")
        object.__setattr__(self, "entries", rows)

    @property
    def size(self) -> int:
        return len(self.entries)

    def d_form(self) -> "SystemMatrix":
        if not self.theta:
            return self
        inv_x = LaurentElement.monomial(self.p, 1, -1)
        return SystemMatrix(self.p, tuple(tuple(lmul(inv_x, c) for c in r) for r in self.entries), False)

    def at_infinity(self) -> "SystemMatrix":
        """Substitute x -> 1/x.  Only for theta-form, where theta becomes -theta."""
        if not self.theta:
            raise PreconditionError("at_infinity expects a theta-form matrix")
        flip = lambda c: LaurentElement(self.p, {-e: -b for e, b in c.terms})
        return SystemMatrix(self.p, tuple(tuple(flip(c) for c in r) for r in self.entries), True)


def companion_matrix(op: TwistedOperator) -> SystemMatrix:
    """The d/dx matrix with D(e_i) = e_(i+1) and D(e_(n-1)) = -sum a_i e_i."""
    op.require_monic()
    n, p = op.degree, op.p
    zero, one = LaurentElement.zero(p), LaurentElement.constant(p, 1)
    rows = []
    for i in range(n - 1):
        rows.append(tuple(one if j == i + 1 else zero for j in range(n)))
    rows.append(tuple(-op.coeff(j) for j in range(n)))
    return SystemMatrix(p, tuple(rows), False)


def _apply(dform: SystemMatrix, f: list) -> list:
    """Coordinates of D(m) for m = sum f_i e_i: f' + B^T f."""
    n = dform.size
    out = []
    for j in range(n):
        acc = derive(f[j])
        for i in range(n):
            if not f[i].is_zero() and not dform.entries[i][j].is_zero():
                acc = acc + lmul(f[i], dform.entries[i][j])
        out.append(acc)
    return out


def _det(rows: list) -> LaurentElement:
    n = len(rows)
    p = rows[0][0].p
    total = LaurentElement.zero(p)
    for perm in permutations(range(n)):
        sign = 1
        for a in range(n):
            for b in range(a + 1, n):
                if perm[a] > perm[b]:
                    sign = -sign
        term = LaurentElement.constant(p, sign)
        for r, c in enumerate(perm):
            term = lmul(term, rows[r][c])
            if term.is_zero():
                break
        total = total + term
    return total


def laurent_divide(num: LaurentElement, den: LaurentElement) -> Optional[LaurentElement]:
    """num/den if it is again a Laurent polynomial, else None."""
    if den.is_zero():
        raise ZeroDivisionError("division by zero Laurent polynomial")
    if num.is_zero():
        return LaurentElement.zero(num.p)
    if num.tail is not None or den.tail is not None:
        raise PreconditionError("division needs tail-free data")
    p = num.p
    # strip x-powers so both are polynomials with nonzero constant term
    shift = ord_x(num) - ord_x(den)
    rem = {e - ord_x(num): c for e, c in num.terms}
    dterms = [(e - ord_x(den), c) for e, c in den.terms]
    dtop, dlead = dterms[-1]
    inv = dlead.inverse()
    quot: dict[int, PiScalar] = {}
    while rem and max(rem) >= dtop:
        e = max(rem)
        c = rem[e] * inv
        k = e - dtop
        quot[k] = c
        for de, dc in dterms:
            val = rem.get(de + k, PiScalar.rational(p, 0)) - c * dc
            if val.is_zero():
                rem.pop(de + k, None)
            else:
                rem[de + k] = val
    if rem:
        return None
    return LaurentElement(p, {k + shift: c for k, c in quot.items()})


def _candidates(n: int, seed: int) -> list:
    cands = [((i, 0),) for i in range(n)]
    sparse = []
    for i in range(n):
        for j in range(n):
            if i == j:
                continue
            for k in range(CYCLIC_SEARCH_SHIFT + 1):
                for shift in sorted({k, -k}, reverse=True):
                    sparse.append(((i, 0), (j, shift)))
    cands += sparse
    if seed:
        random.Random(seed).shuffle(cands)
    return cands


def _candidate_vector(p: int, n: int, spec: tuple) -> list:
    f = [LaurentElement.zero(p) for _ in range(n)]
    for idx, shift in spec:
        f[idx] = f[idx] + LaurentElement.monomial(p, 1, shift)
    return f


def operator_from_vector(system: SystemMatrix, f: list) -> Optional[TwistedOperator]:
    """The monic annihilator of m with coordinates f, if m is a cyclic vector."""
    dform = system.d_form()
    n = dform.size
    p = dform.p
    krylov = [f]
    for _ in range(n):
        krylov.append(_apply(dform, krylov[-1]))
    # column i of K is D^i m
    K = [[krylov[c][r] for c in range(n)] for r in range(n)]
    det = _det(K)
    if det.is_zero():
        return None
    coeffs = []
    for i in range(n):
        Ki = [[(krylov[n][r] if c == i else K[r][c]) for c in range(n)] for r in range(n)]
        q = laurent_divide(-_det(Ki), det)
        if q is None:
            return None
        coeffs.append(q)
    op = TwistedOperator(p, coeffs + [LaurentElement.constant(p, 1)])
    if not _annihilates(op, krylov):
        return None
    return op


def _annihilates(op: TwistedOperator, krylov: list) -> bool:
    n = op.degree
    for r in range(n):
        acc = krylov[n][r]
        for i in range(n):
            acc = acc + lmul(op.coeff(i), krylov[i][r])
        if not acc.is_zero():
            return False
    return True


def cyclic_form(system: SystemMatrix, seed: int = 0) -> TwistedOperator:
    """A monic operator presenting the module of A, via a searched cyclic vector.

    Candidates are e_i and then e_i + x^k e_j with |k| <= CYCLIC_SEARCH_SHIFT,
    ordered by |k| for seed 0 and shuffled deterministically otherwise.
    """
    for row in system.entries:
        for c in row:
            if c.tail is not None:
                raise PreconditionError("cyclic_form needs tail-free entries")
    n = system.size
    for spec in _candidates(n, seed):
        op = operator_from_vector(system, _candidate_vector(system.p, n, spec))
        if op is not None:
            return op
    raise PreconditionError("no cyclic vector found")

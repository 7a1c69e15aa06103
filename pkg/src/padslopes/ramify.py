"""Finite groups with a lower ramification filtration: Herbrand upper numbering,
Swan conductors and break decompositions, character tables of F_q x| Z/m and
SL_2(F_3), and a few structural checks.

Groups are small (at most a few dozen elements), so everything is done by
brute force on an explicit multiplication table.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations, product
from math import gcd
from typing import Callable, Hashable, Optional, Sequence

from .errors import InternalInconsistency, PreconditionError
from .exactnum import Cyclotomic, FiniteField, FqElement, multiplicative_order, psi_value
from .laurent import AffinePiece, PiecewiseAffine

# classify_quotients refuses groups larger than this
QUOTIENT_ENUMERATION_BOUND = 64


class FiniteGroup:
    """A finite group given by its elements and a multiplication function."""

    def __init__(self, elements: Sequence[Hashable], mul: Callable, identity: Hashable, label: str = ""):
        self.elements = list(elements)
        self.index = {g: k for k, g in enumerate(self.elements)}
        if len(self.index) != len(self.elements):
            raise ValueError("repeated group elements")
        self.identity = identity
        self.label = label
        self.table = [[self.index[mul(a, b)] for b in self.elements] for a in self.elements]
        e = self.index[identity]
        self._inv = [row.index(e) for row in self.table]
        self._classes = None

    def __len__(self):
        return len(self.elements)

    @property
    def order(self) -> int:
        return len(self.elements)

    def mul(self, a, b):
        return self.elements[self.table[self.index[a]][self.index[b]]]

    def inverse(self, a):
        return self.elements[self._inv[self.index[a]]]

    def element_order(self, a) -> int:
        k, x = 1, a
        while x != self.identity:
            x = self.mul(x, a)
            k += 1
        return k

    def conjugacy_classes(self) -> list:
        """Classes as lists of elements, ordered by their first element."""
        if self._classes is None:
            seen, classes = set(), []
            for g in self.elements:
                if g in seen:
                    continue
                cls = []
                for h in self.elements:
                    c = self.mul(self.mul(h, g), self.inverse(h))
                    if c not in seen:
                        seen.add(c)
                        cls.append(c)
                classes.append(sorted(cls, key=self.index.get))
            self._classes = classes
        return self._classes

    def is_subgroup(self, subset) -> bool:
        s = set(subset)
        if self.identity not in s:
            return False
        return all(self.mul(a, b) in s for a in s for b in s)

    def is_normal(self, subset) -> bool:
        s = set(subset)
        return self.is_subgroup(s) and all(
            self.mul(self.mul(g, h), self.inverse(g)) in s for g in self.elements for h in s
        )

    def normal_subgroups(self) -> list:
        """All normal subgroups, as sorted element lists, smallest first."""
        classes = self.conjugacy_classes()
        ident = [c for c in classes if self.identity in c][0]
        others = [c for c in classes if self.identity not in c]
        found = []
        for r in range(len(others) + 1):
            for combo in combinations(others, r):
                subset = list(ident) + [g for c in combo for g in c]
                if self.order % len(subset) == 0 and self.is_subgroup(subset):
                    found.append(sorted(subset, key=self.index.get))
        return sorted(found, key=len)

    def coset_order(self, g, normal) -> int:
        """Order of gN in G/N."""
        s = set(normal)
        k, x = 1, g
        while x not in s:
            x = self.mul(x, g)
            k += 1
        return k


@dataclass
class FilteredGroup:
    """A finite group with lower filtration G_0 = G ⊇ G_1 ⊇ ... ⊇ G_N = {1}."""

    group: FiniteGroup
    filtration: list  # list of frozensets, index = lower numbering
    label: str = ""

    def __post_init__(self):
        g = self.group
        if set(self.filtration[0]) != set(g.elements):
            raise PreconditionError("G_0 must be the whole group")
        if set(self.filtration[-1]) != {g.identity}:
            raise PreconditionError("the filtration must end with the trivial group")
        for a, b in zip(self.filtration, self.filtration[1:]):
            if not set(b) <= set(a):
                raise PreconditionError("filtration is not decreasing")
        for sub in self.filtration:
            if not g.is_normal(sub):
                raise PreconditionError("filtration groups must be normal")

    @property
    def order(self) -> int:
        return self.group.order

    def lower(self, i: int) -> frozenset:
        if i < 0:
            return self.filtration[0]
        if i >= len(self.filtration):
            return self.filtration[-1]
        return self.filtration[i]

    def lower_breaks(self) -> list:
        """Indices b >= 1 with G_b != G_(b+1)."""
        return [b for b in range(1, len(self.filtration) - 1) if self.lower(b) != self.lower(b + 1)]

    def has_tame_part(self) -> bool:
        return self.lower(0) != self.lower(1)


# ---------------------------------------------------------------------------
# constructions


def _zeta_bar(field: FiniteField, n: int) -> FqElement:
    """omega^((q-1)/n) for the least generator omega; an element of order n."""
    return field.generator() ** ((field.q - 1) // n)


def semidirect_parameters(q: int, m: int) -> tuple:
    """Validate (q, m) and return (field, n, zeta_bar)."""
    field = FiniteField.of_order(q)
    p, a = field.p, field.a
    if m < 1:
        raise PreconditionError("m must be positive")
    n = m if m % 2 == 1 else m // 2
    if gcd(n, p) != 1:
        raise PreconditionError(f"n = {n} is not prime to p = {p}")
    if multiplicative_order(p, n) != a:
        raise PreconditionError(
            f"the order of {p} modulo {n} is {multiplicative_order(p, n)}, but q = {p}^{a}"
        )
    return field, n, _zeta_bar(field, n)


def build_semidirect(q: int, m: int) -> FilteredGroup:
    """F_q x| Z/m with (a1, i1)(a2, i2) = (a1 + zeta_bar^i1 a2, i1 + i2).

    For m odd (n = m) the filtration is G ⊇ F_q ⊇ 1 with the wild break at 1;
    for m = 2n it is G ⊇ F_q = G_2 ⊇ 1 with the wild break at 2.
    """
    field, n, zb = semidirect_parameters(q, m)
    powers = [zb ** i for i in range(m)]
    elements = [(x.code, i) for i in range(m) for x in field.elements()]

    def mul(g, h):
        a1, i1 = field.from_code(g[0]), g[1]
        a2, i2 = field.from_code(h[0]), h[1]
        return ((a1 + powers[i1] * a2).code, (i1 + i2) % m)

    group = FiniteGroup(elements, mul, (0, 0), label=f"F_{q} x| Z/{m}")
    whole = frozenset(elements)
    wild = frozenset((c, 0) for c in range(q))
    one = frozenset([(0, 0)])
    if m % 2 == 1:
        filt = [whole, wild, one]
    else:
        filt = [whole, wild, wild, one]
    return FilteredGroup(group, filt, label=group.label)


def _sl2_mul(g, h):
    a, b, c, d = g
    e, f, x, y = h
    return ((a * e + b * x) % 3, (a * f + b * y) % 3, (c * e + d * x) % 3, (c * f + d * y) % 3)


def sl2f3_group() -> FilteredGroup:
    """SL_2(F_3) with G_1 = Q_8, G_2 = G_3 = {±1}, G_4 = 1."""
    elements = [m for m in product(range(3), repeat=4) if (m[0] * m[3] - m[1] * m[2]) % 3 == 1]
    group = FiniteGroup(elements, _sl2_mul, (1, 0, 0, 1), label="SL_2(F_3)")
    q8 = frozenset(g for g in elements if group.element_order(g) in (1, 2, 4))
    center = frozenset([(1, 0, 0, 1), (2, 0, 0, 2)])
    one = frozenset([(1, 0, 0, 1)])
    return FilteredGroup(group, [frozenset(elements), q8, center, center, one], label="SL_2(F_3)")


# ---------------------------------------------------------------------------
# upper numbering


def herbrand(grp: FilteredGroup) -> PiecewiseAffine:
    """phi(u) = integral_0^u |G_t| / |G_0| dt, slope |G_i|/|G_0| on (i-1, i)."""
    g0 = len(grp.lower(0))
    pieces, breaks = [], []
    value = Fraction(0)
    last = len(grp.filtration) - 1
    for i in range(1, last + 1):
        slope = Fraction(len(grp.lower(i)), g0)
        pieces.append((i - 1, AffinePiece(value - slope * (i - 1), slope)))
        value += slope
    slope = Fraction(1, g0)
    pieces.append((last, AffinePiece(value - slope * last, slope)))
    segs = [(start, nxt[0], pc) for (start, pc), nxt in zip(pieces, pieces[1:])]
    segs.append((pieces[-1][0], None, pieces[-1][1]))
    return PiecewiseAffine.from_segments([(Fraction(a), None if b is None else Fraction(b), pc) for a, b, pc in segs])


def upper_jumps(grp: FilteredGroup) -> list:
    """Positive upper jumps phi(b) over the lower breaks b >= 1, increasing.

    The tame jump at 0 (present when G_0 != G_1) is not included; see
    ``tame_jump``.
    """
    phi = herbrand(grp)
    return [phi(Fraction(b)) for b in grp.lower_breaks()]


def tame_jump(grp: FilteredGroup) -> Optional[Fraction]:
    return Fraction(0) if grp.has_tame_part() else None


# ---------------------------------------------------------------------------
# characters


@dataclass(frozen=True)
class Character:
    name: str
    values: dict  # element -> Cyclotomic

    def __call__(self, g) -> Cyclotomic:
        return self.values[g]

    def dimension(self, identity) -> int:
        return int(self.values[identity].to_fraction())

    def __add__(self, other: "Character") -> "Character":
        return Character(f"{self.name}+{other.name}", {g: v + other.values[g] for g, v in self.values.items()})


def character_from_function(grp: FiniteGroup, name: str, fn: Callable) -> Character:
    return Character(name, {g: fn(g) for g in grp.elements})


@dataclass
class CharacterTable:
    group: FiniteGroup
    classes: list  # list of element lists
    characters: list  # list of Character

    def class_values(self, chi: Character) -> list:
        return [chi(c[0]) for c in self.classes]

    def dimensions(self) -> list:
        return [chi.dimension(self.group.identity) for chi in self.characters]

    def character(self, name: str) -> Character:
        for chi in self.characters:
            if chi.name == name:
                return chi
        raise PreconditionError(f"no character named {name!r}; have {[c.name for c in self.characters]}")

    def row_orthogonal(self) -> bool:
        order = self.group.order
        for i, a in enumerate(self.characters):
            for j, b in enumerate(self.characters):
                total = Cyclotomic.rational(0)
                for cls in self.classes:
                    total = total + a(cls[0]) * b(cls[0]).conjugate() * len(cls)
                if total != (order if i == j else 0):
                    return False
        return True

    def column_orthogonal(self) -> bool:
        order = self.group.order
        for i, c1 in enumerate(self.classes):
            for j, c2 in enumerate(self.classes):
                total = Cyclotomic.rational(0)
                for chi in self.characters:
                    total = total + chi(c1[0]) * chi(c2[0]).conjugate()
                if total != (Fraction(order, len(c1)) if i == j else 0):
                    return False
        return True

    def verify(self) -> None:
        if len(self.characters) != len(self.classes):
            raise InternalInconsistency("number of characters differs from number of classes")
        if sum(d * d for d in self.dimensions()) != self.group.order:
            raise InternalInconsistency("sum of squared dimensions differs from the group order")
        if not self.row_orthogonal() or not self.column_orthogonal():
            raise InternalInconsistency("character table fails orthogonality")

    def to_json(self) -> dict:
        return {
            "group": self.group.label,
            "order": self.group.order,
            "classes": [{"representative": _elt_json(c[0]), "size": len(c)} for c in self.classes],
            "characters": [
                {
                    "name": chi.name,
                    "dimension": chi.dimension(self.group.identity),
                    "values": [str(v) for v in self.class_values(chi)],
                    "exact": [v.to_json() for v in self.class_values(chi)],
                }
                for chi in self.characters
            ],
        }


def _elt_json(g):
    return list(g)


def character_table_semidirect(q: int, m: int) -> CharacterTable:
    """Linear characters phi_t, and the induced characters chi_l (plus
    lambda_l when m = 2n), one for each orbit representative omega^l."""
    field, n, zb = semidirect_parameters(q, m)
    grp = build_semidirect(q, m).group
    omega = field.generator()
    r = (q - 1) // n
    zpowers = [zb ** s for s in range(1, n + 1)]
    chars = []
    for t in range(m):
        chars.append(character_from_function(grp, f"phi_{t}", lambda g, t=t: Cyclotomic.root(m, t * g[1])))

    def induced(ell, sign):
        w = omega ** ell

        def fn(g):
            alpha, i = field.from_code(g[0]), g[1]
            if i % n:
                return Cyclotomic.rational(0)
            total = Cyclotomic.rational(0)
            for z in zpowers:
                total = total + psi_value(w * alpha * z)
            return total * (-1 if sign and i == n else 1)

        return fn

    for ell in range(r):
        chars.append(character_from_function(grp, f"chi_{ell}", induced(ell, False)))
    if m % 2 == 0:
        for ell in range(r):
            chars.append(character_from_function(grp, f"lambda_{ell}", induced(ell, True)))
    table = CharacterTable(grp, grp.conjugacy_classes(), chars)
    table.verify()
    return table


def sl2f3_table(filtered: Optional[FilteredGroup] = None) -> CharacterTable:
    """The seven irreducible characters of SL_2(F_3).

    Linear characters factor through G/Q_8 ≅ Z/3 generated by [[1,1],[0,1]];
    the three 2-dimensional ones are the natural character twisted by them;
    the 3-dimensional one is the adjoint character.
    """
    filtered = filtered or sl2f3_group()
    grp = filtered.group
    q8 = filtered.lower(1)
    c = (1, 1, 0, 1)
    c_inv = grp.inverse(c)

    def coset(g):
        x = g
        for k in range(3):
            if x in q8:
                return k
            x = grp.mul(c_inv, x)
        raise InternalInconsistency("element outside the three cosets of Q_8")  # pragma: no cover

    natural = {1: 2, 2: -2, 4: 0, 3: -1, 6: 1}
    adjoint = {1: 3, 2: 3, 4: -1, 3: 0, 6: 0}
    chars = []
    for t in range(3):
        chars.append(character_from_function(grp, f"chi1_{t}", lambda g, t=t: Cyclotomic.root(3, t * coset(g))))
    for t in range(3):
        chars.append(
            character_from_function(
                grp, f"chi2_{t}", lambda g, t=t: Cyclotomic.root(3, t * coset(g)) * natural[grp.element_order(g)]
            )
        )
    chars.append(character_from_function(grp, "chi3", lambda g: Cyclotomic.rational(adjoint[grp.element_order(g)])))
    table = CharacterTable(grp, grp.conjugacy_classes(), chars)
    table.verify()
    return table


def sl2f3() -> tuple:
    grp = sl2f3_group()
    return grp, sl2f3_table(grp)


# ---------------------------------------------------------------------------
# Swan conductors


@dataclass(frozen=True)
class BreakReport:
    breaks: tuple  # (jump, multiplicity), multiplicity > 0
    swan: Fraction

    def multiset(self) -> list:
        return [j for j, mult in self.breaks for _ in range(mult)]

    def to_json(self) -> dict:
        return {"breaks": [{"jump": str(j), "multiplicity": m} for j, m in self.breaks], "swan": str(self.swan)}


def fixed_dimension(chi: Character, subgroup) -> int:
    """dim V^H = (1/|H|) sum_{h in H} chi(h), which must be a nonnegative integer."""
    total = Cyclotomic.rational(0)
    for h in subgroup:
        total = total + chi(h)
    if not total.is_rational():
        raise PreconditionError(f"{chi.name} is not a character: fixed-space sum is irrational")
    dim = total.to_fraction() / len(subgroup)
    if dim.denominator != 1 or dim < 0:
        raise PreconditionError(f"{chi.name} is not a character: fixed-space dimension {dim}")
    return int(dim)


def swan_and_breaks(grp: FilteredGroup, chi: Character) -> BreakReport:
    """Break decomposition from fixed spaces under the upper-numbering groups.

    At a jump v = phi(b) the multiplicity is dim V^(G_(b+1)) - dim V^(G_b);
    the break 0 takes dim V^(G_1).
    """
    phi = herbrand(grp)
    breaks = []
    d1 = fixed_dimension(chi, grp.lower(1))
    if d1:
        breaks.append((Fraction(0), d1))
    for b in grp.lower_breaks():
        mult = fixed_dimension(chi, grp.lower(b + 1)) - fixed_dimension(chi, grp.lower(b))
        if mult < 0:
            raise InternalInconsistency("fixed spaces are not increasing along the filtration")
        if mult:
            breaks.append((phi(Fraction(b)), mult))
    if sum(m for _, m in breaks) != chi.dimension(grp.group.identity):
        raise InternalInconsistency("break multiplicities do not add up to the dimension")
    swan = sum((j * m for j, m in breaks), Fraction(0))
    return BreakReport(tuple(breaks), swan)


def jumps_vs_slopes(alpha: Sequence, grp: FilteredGroup) -> bool:
    """Every nonzero slope must be an upper jump; zero slopes need the tame jump."""
    jumps = set(upper_jumps(grp))
    for a in alpha:
        a = Fraction(a)
        if a == 0:
            if not grp.has_tame_part():
                return False
        elif a not in jumps:
            return False
    return True


# ---------------------------------------------------------------------------
# structural checks


def _fq_det(rows: list) -> FqElement:
    """Determinant over F_q by elimination."""
    m = [list(r) for r in rows]
    n = len(m)
    field = m[0][0].field
    det = field.one()
    for col in range(n):
        pivot = next((r for r in range(col, n) if not m[r][col].is_zero()), None)
        if pivot is None:
            return field.zero()
        if pivot != col:
            m[col], m[pivot] = m[pivot], m[col]
            det = -det
        det = det * m[col][col]
        inv = m[col][col].inverse()
        for r in range(col + 1, n):
            f = m[r][col] * inv
            m[r] = [x - f * y for x, y in zip(m[r], m[col])]
    return det


@dataclass(frozen=True)
class CompositionCheck:
    holds: bool
    determinant: FqElement
    q: int

    def to_json(self) -> dict:
        return {"holds": self.holds, "q": self.q, "determinant": repr(self.determinant)}


def artin_schreier_compose(n: int, p: int) -> CompositionCheck:
    """Nonvanishing of det(zeta_bar^((j-1) p^(k-1)))_{j,k <= a} over F_q,
    the criterion for the composite of the twisted Artin-Schreier extensions."""
    if n < 1 or gcd(n, p) != 1:
        raise PreconditionError(f"need n >= 1 prime to p; got n={n}, p={p}")
    a = multiplicative_order(p, n)
    field = FiniteField(p, a)
    zb = _zeta_bar(field, n)
    rows = [[zb ** (j * p ** k) for k in range(a)] for j in range(a)]
    det = _fq_det(rows)
    return CompositionCheck(not det.is_zero(), det, field.q)


@dataclass(frozen=True)
class QuotientRecord:
    conforms: bool
    lattice: tuple  # (|N|, |G/N|, quotient cyclic?) per normal subgroup
    offenders: tuple

    def to_json(self) -> dict:
        return {
            "conforms": self.conforms,
            "normal_subgroups": [
                {"order": o, "quotient_order": qo, "quotient_cyclic": cyc} for o, qo, cyc in self.lattice
            ],
            "offenders": [list(x) for x in self.offenders],
        }


def classify_quotients(filtered: FilteredGroup, m: int) -> QuotientRecord:
    """Check that every quotient by a nontrivial normal subgroup is cyclic of
    order dividing m (so isomorphic to a quotient of Z/m)."""
    grp = filtered.group
    if grp.order > QUOTIENT_ENUMERATION_BOUND:
        raise PreconditionError(f"group of order {grp.order} exceeds the enumeration bound")
    lattice, offenders = [], []
    for normal in grp.normal_subgroups():
        qo = grp.order // len(normal)
        cyclic = any(grp.coset_order(g, normal) == qo for g in grp.elements)
        lattice.append((len(normal), qo, cyclic))
        if len(normal) > 1 and not (cyclic and m % qo == 0):
            offenders.append((len(normal), qo, cyclic))
    return QuotientRecord(not offenders, tuple(lattice), tuple(offenders))

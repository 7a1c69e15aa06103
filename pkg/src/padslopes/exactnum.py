"""Exact scalars: rationals, the field Q(pi) with pi^(p-1) = -p, finite fields
F_q and cyclotomic numbers.

Rationals are plain :class:`fractions.Fraction`.  Everything else here is a
small immutable value class with exact arithmetic.
"""

from __future__ import annotations

from fractions import Fraction
from functools import lru_cache
from itertools import product
from math import gcd
from typing import Iterable, Sequence, Union

Rational = Fraction
RationalLike = Union[int, Fraction]

INFINITY = float("inf")


def as_fraction(value) -> Fraction:
    """Coerce ints, Fractions and "num/den" strings to a Fraction."""
    if isinstance(value, Fraction):
        return value
    if isinstance(value, bool):
        raise TypeError("booleans are not rationals")
    if isinstance(value, int):
        return Fraction(value)
    if isinstance(value, str):
        return Fraction(value.strip())
    raise TypeError(f"cannot interpret {value!r} as an exact rational")


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    d = 2
    while d * d <= n:
        if n % d == 0:
            return False
        d += 1
    return True


def vp_int(n: int, p: int) -> int:
    """p-adic valuation of a nonzero integer."""
    if n == 0:
        raise ValueError("valuation of zero")
    n = abs(n)
    v = 0
    while n % p == 0:
        n //= p
        v += 1
    return v


def vp_rational(x: RationalLike, p: int) -> Fraction | float:
    x = as_fraction(x)
    if x == 0:
        return INFINITY
    return Fraction(vp_int(x.numerator, p) - vp_int(x.denominator, p))


def multiplicative_order(a: int, n: int) -> int:
    """Order of a in (Z/nZ)^x; the order modulo 1 is taken to be 1."""
    if n == 1:
        return 1
    if gcd(a, n) != 1:
        raise ValueError(f"{a} is not a unit modulo {n}")
    k, x = 1, a % n
    while x != 1:
        x = (x * a) % n
        k += 1
    return k


# ---------------------------------------------------------------------------
# Q(pi)


class PiScalar:
    """An element of Q(pi) = Q[pi]/(pi^(p-1) + p).

    ``coeffs[k]`` is the coefficient of ``pi**k``; there are exactly ``p - 1``
    of them.  For ``p = 2`` the field is Q itself and ``pi = -2``.
    """

    __slots__ = ("p", "coeffs")

    def __init__(self, p: int, coeffs: Iterable[RationalLike]):
        coeffs = tuple(as_fraction(c) for c in coeffs)
        if len(coeffs) > p - 1:
            coeffs = _reduce_pi_poly(p, coeffs)
        elif len(coeffs) < p - 1:
            coeffs = coeffs + (Fraction(0),) * (p - 1 - len(coeffs))
        object.__setattr__(self, "p", p)
        object.__setattr__(self, "coeffs", coeffs)

    def __setattr__(self, name, value):
        raise AttributeError("PiScalar is immutable")

    @classmethod
    def rational(cls, p: int, value: RationalLike) -> "PiScalar":
        return cls(p, [value])

    @classmethod
    def pi(cls, p: int) -> "PiScalar":
        if p == 2:
            return cls(2, [-2])
        return cls(p, [0, 1])

    def _coerce(self, other) -> "PiScalar":
        if isinstance(other, PiScalar):
            if other.p != self.p:
                raise ValueError(f"mixing Q(pi) for p={self.p} and p={other.p}")
            return other
        if isinstance(other, (int, Fraction)) and not isinstance(other, bool):
            return PiScalar.rational(self.p, other)
        return NotImplemented

    def is_zero(self) -> bool:
        return all(c == 0 for c in self.coeffs)

    def __bool__(self) -> bool:
        return not self.is_zero()

    def is_rational(self) -> bool:
        return all(c == 0 for c in self.coeffs[1:])

    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return PiScalar(self.p, [a + b for a, b in zip(self.coeffs, other.coeffs)])

    __radd__ = __add__

    def __neg__(self):
        return PiScalar(self.p, [-a for a in self.coeffs])

    def __sub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return PiScalar(self.p, [a - b for a, b in zip(self.coeffs, other.coeffs)])

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        d = self.p - 1
        prod = [Fraction(0)] * (2 * d - 1)
        for i, a in enumerate(self.coeffs):
            if a == 0:
                continue
            for j, b in enumerate(other.coeffs):
                if b:
                    prod[i + j] += a * b
        return PiScalar(self.p, prod)

    __rmul__ = __mul__

    def __pow__(self, k: int):
        if k < 0:
            return self.inverse() ** (-k)
        result = PiScalar.rational(self.p, 1)
        base = self
        while k:
            if k & 1:
                result = result * base
            base = base * base
            k >>= 1
        return result

    def inverse(self) -> "PiScalar":
        if self.is_zero():
            raise ZeroDivisionError("inverse of zero in Q(pi)")
        d = self.p - 1
        # column j of the multiplication matrix is self * pi^j
        cols = [(self * PiScalar(self.p, [0] * j + [1])).coeffs for j in range(d)]
        matrix = [[cols[j][i] for j in range(d)] for i in range(d)]
        rhs = [Fraction(1)] + [Fraction(0)] * (d - 1)
        return PiScalar(self.p, solve_linear(matrix, rhs))

    def __truediv__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return self * other.inverse()

    def __rtruediv__(self, other):
        return self._coerce(other) * self.inverse()

    def __eq__(self, other):
        if isinstance(other, (int, Fraction)) and not isinstance(other, bool):
            other = PiScalar.rational(self.p, other)
        if not isinstance(other, PiScalar):
            return NotImplemented
        return self.p == other.p and self.coeffs == other.coeffs

    def __hash__(self):
        return hash((self.p, self.coeffs))

    def vp(self) -> Fraction | float:
        """Exact p-adic valuation (``inf`` for zero).

        The monomials q_k pi^k have valuations in distinct classes mod 1, so the
        minimum is attained by a single term and there is no cancellation.
        """
        best: Fraction | float = INFINITY
        for k, c in enumerate(self.coeffs):
            if c != 0:
                v = vp_rational(c, self.p) + Fraction(k, self.p - 1)
                if v < best:
                    best = v
        return best

    def to_json(self) -> list[str]:
        return [str(c) for c in self.coeffs]

    @classmethod
    def from_json(cls, p: int, data: Sequence) -> "PiScalar":
        if len(data) != p - 1:
            raise ValueError(f"expected {p - 1} pi-coefficients, got {len(data)}")
        return cls(p, [as_fraction(c) for c in data])

    def __str__(self):
        if self.is_rational():
            return str(self.coeffs[0])
        parts = []
        for k, c in enumerate(self.coeffs):
            if c == 0:
                continue
            mono = "" if k == 0 else ("pi" if k == 1 else f"pi^{k}")
            if k == 0:
                parts.append(str(c))
            elif c == 1:
                parts.append(mono)
            elif c == -1:
                parts.append("-" + mono)
            else:
                parts.append(f"{c}*{mono}")
        return " + ".join(parts).replace("+ -", "- ")

    def __repr__(self):
        return f"PiScalar(p={self.p}, {str(self)!r})"


def _reduce_pi_poly(p: int, coeffs: Sequence[Fraction]) -> tuple[Fraction, ...]:
    d = p - 1
    c = list(coeffs)
    for k in range(len(c) - 1, d - 1, -1):
        if c[k]:
            c[k - d] += -p * c[k]
            c[k] = Fraction(0)
    return tuple(c[:d])


def vp(a: PiScalar) -> Fraction | float:
    """Exact p-adic valuation of a scalar of Q(pi)."""
    return a.vp()


def solve_linear(matrix: Sequence[Sequence[Fraction]], rhs: Sequence[Fraction]) -> list[Fraction]:
    """Gauss-Jordan elimination over Q for a square nonsingular system."""
    n = len(matrix)
    rows = [list(map(Fraction, row)) + [Fraction(rhs[i])] for i, row in enumerate(matrix)]
    for col in range(n):
        pivot = next((r for r in range(col, n) if rows[r][col] != 0), None)
        if pivot is None:
            raise ZeroDivisionError("singular system")
        rows[col], rows[pivot] = rows[pivot], rows[col]
        inv = 1 / rows[col][col]
        rows[col] = [x * inv for x in rows[col]]
        for r in range(n):
            if r != col and rows[r][col] != 0:
                f = rows[r][col]
                rows[r] = [x - f * y for x, y in zip(rows[r], rows[col])]
    return [rows[i][n] for i in range(n)]


# ---------------------------------------------------------------------------
# finite fields


def _poly_mod_p(coeffs: list[int], p: int) -> list[int]:
    c = [x % p for x in coeffs]
    while c and c[-1] == 0:
        c.pop()
    return c


def _polymulmod(a: Sequence[int], b: Sequence[int], modulus: Sequence[int], p: int) -> tuple[int, ...]:
    deg = len(modulus) - 1
    prod = [0] * (len(a) + len(b) - 1) if a and b else []
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                prod[i + j] = (prod[i + j] + x * y) % p
    # modulus is monic
    for k in range(len(prod) - 1, deg - 1, -1):
        c = prod[k]
        if c:
            for j in range(deg + 1):
                prod[k - deg + j] = (prod[k - deg + j] - c * modulus[j]) % p
    prod = (prod + [0] * deg)[:deg]
    return tuple(prod)


def _is_irreducible(modulus: Sequence[int], p: int) -> bool:
    """Brute-force irreducibility test: no monic factor of degree <= deg/2."""
    deg = len(modulus) - 1
    for d in range(1, deg // 2 + 1):
        for low in product(range(p), repeat=d):
            factor = list(low) + [1]
            if _poly_divides(factor, list(modulus), p):
                return False
    return True


def _poly_divides(f: list[int], g: list[int], p: int) -> bool:
    r = list(g)
    df = len(f) - 1
    for k in range(len(r) - 1, df - 1, -1):
        c = r[k] % p
        if c:
            for j in range(df + 1):
                r[k - df + j] = (r[k - df + j] - c * f[j]) % p
    return all(x % p == 0 for x in r[:df])


@lru_cache(maxsize=None)
def least_irreducible(p: int, a: int) -> tuple[int, ...]:
    """Monic irreducible of degree a over F_p with the least integer encoding
    sum c_i p^i of its lower coefficients."""
    if a == 1:
        return (0, 1)
    for code in range(p ** a):
        low = [(code // p ** i) % p for i in range(a)]
        modulus = tuple(low + [1])
        if low[0] != 0 and _is_irreducible(modulus, p):
            return modulus
    raise RuntimeError("no irreducible polynomial found")  # pragma: no cover


class FiniteField:
    """F_q for q = p^a, realised as F_p[t]/(least irreducible)."""

    _cache: dict = {}

    def __new__(cls, p: int, a: int = 1):
        key = (p, a)
        if key not in cls._cache:
            if not is_prime(p) or a < 1:
                raise ValueError(f"invalid field parameters p={p}, a={a}")
            self = super().__new__(cls)
            self.p = p
            self.a = a
            self.q = p ** a
            self.modulus = least_irreducible(p, a)
            self._generator = None
            cls._cache[key] = self
        return cls._cache[key]

    @classmethod
    def of_order(cls, q: int) -> "FiniteField":
        for p in range(2, q + 1):
            if q % p == 0:
                a, r = 0, q
                while r % p == 0:
                    r //= p
                    a += 1
                if r != 1:
                    raise ValueError(f"{q} is not a prime power")
                return cls(p, a)
        raise ValueError(f"{q} is not a prime power")

    def __call__(self, value) -> "FqElement":
        if isinstance(value, FqElement):
            return value
        if isinstance(value, int):
            return FqElement(self, (value % self.p,) + (0,) * (self.a - 1))
        return FqElement(self, tuple(value))

    def from_code(self, code: int) -> "FqElement":
        return FqElement(self, tuple((code // self.p ** i) % self.p for i in range(self.a)))

    def elements(self) -> list["FqElement"]:
        return [self.from_code(c) for c in range(self.q)]

    def zero(self) -> "FqElement":
        return self(0)

    def one(self) -> "FqElement":
        return self(1)

    def t(self) -> "FqElement":
        """The class of the polynomial variable t."""
        if self.a == 1:
            raise ValueError("prime field has no adjoined generator")
        return FqElement(self, (0, 1) + (0,) * (self.a - 2))

    def generator(self) -> "FqElement":
        """Least (by encoding) generator of the multiplicative group."""
        if self._generator is None:
            for x in self.elements()[1:]:
                if x.multiplicative_order() == self.q - 1:
                    self._generator = x
                    break
        return self._generator

    def trace(self, x: "FqElement") -> int:
        total = self.zero()
        y = x
        for _ in range(self.a):
            total = total + y
            y = y ** self.p
        if any(total.coeffs[1:]):
            raise ArithmeticError("trace left the prime field")  # pragma: no cover
        return total.coeffs[0]

    def __repr__(self):
        return f"FiniteField({self.q})"

    def __reduce__(self):
        return (FiniteField, (self.p, self.a))


class FqElement:
    """An element of F_q given by its coefficient vector over F_p."""

    __slots__ = ("field", "coeffs")

    def __init__(self, field: FiniteField, coeffs: tuple[int, ...]):
        if len(coeffs) != field.a:
            raise ValueError("coefficient vector has the wrong length")
        object.__setattr__(self, "field", field)
        object.__setattr__(self, "coeffs", tuple(c % field.p for c in coeffs))

    def __setattr__(self, name, value):
        raise AttributeError("FqElement is immutable")

    @property
    def code(self) -> int:
        return sum(c * self.field.p ** i for i, c in enumerate(self.coeffs))

    def _coerce(self, other) -> "FqElement":
        if isinstance(other, FqElement):
            if other.field is not self.field:
                raise ValueError("elements of different finite fields")
            return other
        if isinstance(other, int):
            return self.field(other)
        return NotImplemented

    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return FqElement(self.field, tuple(a + b for a, b in zip(self.coeffs, other.coeffs)))

    __radd__ = __add__

    def __neg__(self):
        return FqElement(self.field, tuple(-a for a in self.coeffs))

    def __sub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        f = self.field
        return FqElement(f, _polymulmod(self.coeffs, other.coeffs, f.modulus, f.p))

    __rmul__ = __mul__

    def __pow__(self, k: int):
        if k < 0:
            return self.inverse() ** (-k)
        result = self.field.one()
        base = self
        while k:
            if k & 1:
                result = result * base
            base = base * base
            k >>= 1
        return result

    def is_zero(self) -> bool:
        return not any(self.coeffs)

    def __bool__(self):
        return not self.is_zero()

    def inverse(self) -> "FqElement":
        if self.is_zero():
            raise ZeroDivisionError("inverse of zero in F_q")
        return self ** (self.field.q - 2)

    def __truediv__(self, other):
        other = self._coerce(other)
        return self * other.inverse()

    def multiplicative_order(self) -> int:
        if self.is_zero():
            raise ValueError("zero has no multiplicative order")
        k, y = 1, self
        one = self.field.one()
        while y != one:
            y = y * self
            k += 1
        return k

    def trace(self) -> int:
        return self.field.trace(self)

    def __eq__(self, other):
        if isinstance(other, int):
            other = self.field(other)
        if not isinstance(other, FqElement):
            return NotImplemented
        return self.field is other.field and self.coeffs == other.coeffs

    def __hash__(self):
        return hash((self.field.q, self.coeffs))

    def __lt__(self, other):
        return self.code < other.code

    def __repr__(self):
        if self.field.a == 1:
            return f"{self.coeffs[0]}"
        terms = []
        for i, c in enumerate(self.coeffs):
            if c:
                mono = "1" if i == 0 else ("t" if i == 1 else f"t^{i}")
                terms.append(mono if c == 1 and i else (f"{c}" if i == 0 else f"{c}{mono}"))
        return " + ".join(reversed(terms)) or "0"


# ---------------------------------------------------------------------------
# cyclotomic numbers


@lru_cache(maxsize=None)
def cyclotomic_polynomial(n: int) -> tuple[int, ...]:
    """Integer coefficients (constant term first) of the n-th cyclotomic polynomial."""
    num = [-1] + [0] * (n - 1) + [1]  # x^n - 1
    for d in range(1, n):
        if n % d == 0:
            num = _int_exact_div(num, list(cyclotomic_polynomial(d)))
    return tuple(num)


def _int_exact_div(num: list[int], den: list[int]) -> list[int]:
    num = list(num)
    dd = len(den) - 1
    out = [0] * (len(num) - dd)
    for k in range(len(num) - 1, dd - 1, -1):
        c = num[k]  # den is monic
        out[k - dd] = c
        if c:
            for j in range(dd + 1):
                num[k - dd + j] -= c * den[j]
    if any(num[:dd]):
        raise ArithmeticError("inexact polynomial division")  # pragma: no cover
    return out


def _lcm(a: int, b: int) -> int:
    return a * b // gcd(a, b)


class Cyclotomic:
    """An element of Q(zeta_N), stored as its canonical residue modulo Phi_N.

    Values of different conductors are compared and combined after lifting to
    the least common multiple of the conductors.
    """

    __slots__ = ("conductor", "coeffs")

    def __init__(self, conductor: int, coeffs: Sequence[RationalLike]):
        if conductor < 1:
            raise ValueError("conductor must be positive")
        phi = cyclotomic_polynomial(conductor)
        deg = len(phi) - 1
        c = [as_fraction(x) for x in coeffs]
        for k in range(len(c) - 1, deg - 1, -1):
            lead = c[k]
            if lead:
                for j in range(deg + 1):
                    c[k - deg + j] -= lead * phi[j]
        c = (c + [Fraction(0)] * deg)[:deg]
        object.__setattr__(self, "conductor", conductor)
        object.__setattr__(self, "coeffs", tuple(c))

    def __setattr__(self, name, value):
        raise AttributeError("Cyclotomic is immutable")

    @classmethod
    def root(cls, n: int, k: int = 1) -> "Cyclotomic":
        """zeta_n ** k."""
        k %= n
        return cls(n, [0] * k + [1])

    @classmethod
    def rational(cls, value: RationalLike, conductor: int = 1) -> "Cyclotomic":
        return cls(conductor, [value])

    def lift(self, conductor: int) -> "Cyclotomic":
        if conductor % self.conductor:
            raise ValueError(f"cannot lift from Q(zeta_{self.conductor}) to Q(zeta_{conductor})")
        step = conductor // self.conductor
        vec = [Fraction(0)] * (step * len(self.coeffs) or 1)
        for k, c in enumerate(self.coeffs):
            vec[k * step] = c
        return Cyclotomic(conductor, vec)

    def _pair(self, other):
        if isinstance(other, (int, Fraction)) and not isinstance(other, bool):
            other = Cyclotomic(1, [other])
        if not isinstance(other, Cyclotomic):
            return None, None
        n = _lcm(self.conductor, other.conductor)
        return self.lift(n), other.lift(n)

    def __add__(self, other):
        a, b = self._pair(other)
        if a is None:
            return NotImplemented
        n = a.conductor
        m = max(len(a.coeffs), len(b.coeffs))
        va = list(a.coeffs) + [Fraction(0)] * (m - len(a.coeffs))
        vb = list(b.coeffs) + [Fraction(0)] * (m - len(b.coeffs))
        return Cyclotomic(n, [x + y for x, y in zip(va, vb)])

    __radd__ = __add__

    def __neg__(self):
        return Cyclotomic(self.conductor, [-x for x in self.coeffs])

    def __sub__(self, other):
        return self + (-other if isinstance(other, Cyclotomic) else -as_fraction(other))

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        a, b = self._pair(other)
        if a is None:
            return NotImplemented
        prod = [Fraction(0)] * (len(a.coeffs) + len(b.coeffs))
        for i, x in enumerate(a.coeffs):
            if x:
                for j, y in enumerate(b.coeffs):
                    if y:
                        prod[i + j] += x * y
        return Cyclotomic(a.conductor, prod)

    __rmul__ = __mul__

    def __truediv__(self, other):
        other = as_fraction(other)
        return Cyclotomic(self.conductor, [x / other for x in self.coeffs])

    def __pow__(self, k: int):
        if k < 0:
            raise ValueError("negative powers are not supported")
        result = Cyclotomic(self.conductor, [1])
        for _ in range(k):
            result = result * self
        return result

    def conjugate(self) -> "Cyclotomic":
        """Complex conjugation zeta -> zeta^(-1)."""
        n = self.conductor
        vec = [Fraction(0)] * n
        for k, c in enumerate(self.coeffs):
            vec[(-k) % n] += c
        return Cyclotomic(n, vec)

    def is_rational(self) -> bool:
        return all(c == 0 for c in self.coeffs[1:])

    def to_fraction(self) -> Fraction:
        if not self.is_rational():
            raise ValueError(f"{self} is not rational")
        return self.coeffs[0] if self.coeffs else Fraction(0)

    def __eq__(self, other):
        a, b = self._pair(other)
        if a is None:
            return NotImplemented
        return a.coeffs == b.coeffs

    __hash__ = None

    def __complex__(self):
        import cmath

        z = cmath.exp(2j * cmath.pi / self.conductor)
        return sum((float(c) * z ** k for k, c in enumerate(self.coeffs)), 0j)

    def to_json(self) -> dict:
        return {"conductor": self.conductor, "coeffs": [str(c) for c in self.coeffs]}

    def __str__(self):
        terms = []
        for k, c in enumerate(self.coeffs):
            if c == 0:
                continue
            if k == 0:
                terms.append(str(c))
                continue
            mono = f"z{self.conductor}" + ("" if k == 1 else f"^{k}")
            if c == 1:
                terms.append(mono)
            elif c == -1:
                terms.append("-" + mono)
            else:
                terms.append(f"{c}*{mono}")
        return " + ".join(terms).replace("+ -", "- ") if terms else "0"

    def __repr__(self):
        return f"Cyclotomic({str(self)!r})"


def psi_value(alpha: FqElement) -> Cyclotomic:
    """The additive character psi(alpha) = zeta_p ** Tr(alpha) of F_q."""
    return Cyclotomic.root(alpha.field.p, alpha.trace())

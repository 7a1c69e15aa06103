"""Example modules: Bessel operators, exponential twists, and the adjoint of
the rank-2 Bessel operator at p = 2.  Plus the ModuleFile container."""

from __future__ import annotations

import json
from dataclasses import dataclass
from fractions import Fraction
from typing import Optional

from .errors import ParseError, PreconditionError
from .exactnum import PiScalar, as_fraction, is_prime
from .laurent import LaurentElement
from .twisted import SystemMatrix, TwistedOperator, cyclic_form, expand_theta


@dataclass(frozen=True)
class ModuleFile:
    """A monic operator plus optional declared p-adic slopes and a label."""

    operator: TwistedOperator
    declared_alpha: Optional[tuple] = None
    label: str = ""

    def to_json(self) -> dict:
        doc = self.operator.to_json()
        doc["metadata"] = {
            "declared_alpha": None if self.declared_alpha is None else [str(a) for a in self.declared_alpha],
            "label": self.label,
        }
        return doc

    def dumps(self) -> str:
        return json.dumps(self.to_json(), indent=2) + "\n"

    @classmethod
    def from_json(cls, doc: dict, seed: int = 0) -> "ModuleFile":
        if not isinstance(doc, dict):
            raise ParseError("module file must be a JSON object")
        meta = doc.get("metadata") or {}
        if not isinstance(meta, dict):
            raise ParseError("metadata must be an object")
        if "system" in doc:
            op = cyclic_form(system_from_json(doc["system"]), seed)
        else:
            op = TwistedOperator.from_json(doc)
        alpha = meta.get("declared_alpha")
        try:
            alpha = None if alpha is None else tuple(as_fraction(a) for a in alpha)
        except (TypeError, ValueError, ZeroDivisionError) as exc:
            raise ParseError(f"bad declared_alpha: {exc}") from exc
        return cls(op, alpha, str(meta.get("label", "")))

    @classmethod
    def loads(cls, text: str, seed: int = 0) -> "ModuleFile":
        try:
            doc = json.loads(text)
        except json.JSONDecodeError as exc:
            raise ParseError(f"invalid JSON: {exc}") from exc
        return cls.from_json(doc, seed)


def system_from_json(doc: dict) -> SystemMatrix:
    """{p, theta, at_infinity?, matrix: [[laurent, ...], ...]} to a SystemMatrix."""
    try:
        p = int(doc["p"])
        rows = doc["matrix"]
        theta = bool(doc.get("theta", False))
    except (KeyError, TypeError, ValueError) as exc:
        raise ParseError(f"malformed system: {exc}") from exc
    if not is_prime(p):
        raise ParseError(f"p = {p} is not prime")
    entries = tuple(tuple(LaurentElement.from_json(p, c) for c in row) for row in rows)
    system = SystemMatrix(p, entries, theta)
    if doc.get("at_infinity"):
        system = system.at_infinity()
    return system


def system_to_json(system: SystemMatrix, at_infinity: bool = False) -> dict:
    return {
        "p": system.p,
        "theta": system.theta,
        "at_infinity": at_infinity,
        "matrix": [[c.to_json() for c in row] for row in system.entries],
    }


def _check_prime(p: int) -> None:
    if not is_prime(p):
        raise PreconditionError(f"p = {p} is not prime")


def catalog_bessel(n: int, p: int) -> ModuleFile:
    """theta^n - (-pi)^n / x, divided by x^n."""
    _check_prime(p)
    if n < 1:
        raise PreconditionError("n must be at least 1")
    c0 = LaurentElement.monomial(p, -((-PiScalar.pi(p)) ** n), -1)
    zero = LaurentElement.zero(p)
    op = expand_theta([c0] + [zero] * (n - 1) + [LaurentElement.constant(p, 1)])
    return ModuleFile(op, (Fraction(1, n),) * n, f"bessel n={n} p={p}")


def bessel_connection(n: int, p: int) -> SystemMatrix:
    """The theta-form connection matrix near 0: companion shape with pi^n x in the corner."""
    _check_prime(p)
    pin = PiScalar.pi(p) ** n
    rows = []
    for i in range(n):
        row = [LaurentElement.zero(p)] * n
        if i < n - 1:
            row[i + 1] = LaurentElement.constant(p, 1)
        else:
            row[0] = row[0] + LaurentElement.monomial(p, pin, 1)
        rows.append(tuple(row))
    return SystemMatrix(p, tuple(rows), True)


def _is_power(k: int, p: int) -> bool:
    while k % p == 0:
        k //= p
    return k == 1


def catalog_exp(k: int, p: int) -> ModuleFile:
    """T - d/dx(pi x^(-k)) = T + k pi x^(-k-1).  The p-adic slope 1 is declared
    when k is a power of p (including k = 1)."""
    _check_prime(p)
    if k < 1:
        raise PreconditionError("k must be at least 1")
    a0 = LaurentElement.monomial(p, PiScalar.pi(p) * k, -k - 1)
    op = TwistedOperator(p, [a0, LaurentElement.constant(p, 1)])
    alpha = (Fraction(1),) if _is_power(k, p) else None
    return ModuleFile(op, alpha, f"exp(pi/x^{k}) p={p}")


def catalog_adjoint_bessel2() -> ModuleFile:
    """theta^3 - (16/x) theta + 8/x at p = 2, divided by x^3."""
    p = 2
    mono = lambda c, e: LaurentElement.monomial(p, c, e)
    op = expand_theta([mono(8, -1), mono(-16, -1), LaurentElement.zero(p), LaurentElement.constant(p, 1)])
    return ModuleFile(op, (Fraction(1, 3),) * 3, "adjoint of rank-2 bessel p=2")


def catalog_all() -> list:
    """Every catalog module used by the test suites."""
    out = []
    for n, p in [(1, 2), (2, 2), (3, 2), (2, 3), (5, 2), (3, 7)]:
        out.append(catalog_bessel(n, p))
    for k, p in [(1, 2), (2, 2), (4, 2), (8, 2), (3, 2), (1, 3), (3, 3)]:
        out.append(catalog_exp(k, p))
    out.append(catalog_adjoint_bessel2())
    return out

"""
Coefficient ring R = Z[X, Y, Z^{+-1}] / (X^2 = Y^2 = 1).

Holds the monomials and ring elements, the unit group, the twist cocycle
lambda, the two degree types, and the specialization homomorphisms onto
Z, Z/2 and Z_pi = Z[pi]/(pi^2 - 1).
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from enum import Enum
from typing import Iterator, Mapping, Union


@dataclass(frozen=True, slots=True, order=True)
class ChronDegree:
    """Chronological degree (#births - #merges, #deaths - #splits)."""

    alpha: int = 0
    beta: int = 0

    def __add__(self, other: ChronDegree) -> ChronDegree:
        return ChronDegree(self.alpha + other.alpha, self.beta + other.beta)

    def __sub__(self, other: ChronDegree) -> ChronDegree:
        return ChronDegree(self.alpha - other.alpha, self.beta - other.beta)

    def __neg__(self) -> ChronDegree:
        return ChronDegree(-self.alpha, -self.beta)

    @property
    def weight(self) -> int:
        return self.alpha - self.beta


@dataclass(frozen=True, slots=True, order=True)
class SDeg:
    """Splitting degree in Z/2 x Z."""

    parity: int = 0
    depth: int = 0

    def __post_init__(self) -> None:
        object.__setattr__(self, "parity", self.parity % 2)

    def __add__(self, other: SDeg) -> SDeg:
        return SDeg(self.parity + other.parity, self.depth + other.depth)

    def __sub__(self, other: SDeg) -> SDeg:
        return SDeg(self.parity - other.parity, self.depth - other.depth)

    def __neg__(self) -> SDeg:
        return SDeg(-self.parity, -self.depth)

    def __str__(self) -> str:
        return f"({self.parity},{self.depth})"


@dataclass(frozen=True, slots=True, order=True)
class Monomial:
    """X^x Y^y Z^z with x, y taken mod 2."""

    x_exp: int = 0
    y_exp: int = 0
    z_exp: int = 0

    def __post_init__(self) -> None:
        object.__setattr__(self, "x_exp", self.x_exp % 2)
        object.__setattr__(self, "y_exp", self.y_exp % 2)

    def __mul__(self, other: Monomial) -> Monomial:
        return Monomial(
            self.x_exp + other.x_exp,
            self.y_exp + other.y_exp,
            self.z_exp + other.z_exp,
        )

    def inverse(self) -> Monomial:
        return Monomial(self.x_exp, self.y_exp, -self.z_exp)

    @property
    def sdeg(self) -> SDeg:
        return SDeg(self.x_exp + self.y_exp, -self.z_exp)

    def is_one(self) -> bool:
        return self.x_exp == 0 and self.y_exp == 0 and self.z_exp == 0

    def render(self) -> str:
        factors = []
        if self.x_exp:
            factors.append("X")
        if self.y_exp:
            factors.append("Y")
        if self.z_exp == 1:
            factors.append("Z")
        elif self.z_exp:
            factors.append(f"Z^{self.z_exp}")
        return "*".join(factors)


ONE_MONO = Monomial()
X_MONO = Monomial(1, 0, 0)
Y_MONO = Monomial(0, 1, 0)
Z_MONO = Monomial(0, 0, 1)
XY_MONO = Monomial(1, 1, 0)


class RingElem:
    """
    Element of R, stored as a map Monomial -> nonzero int.

    Instances are immutable; arithmetic always returns new objects.
    """

    __slots__ = ("_terms", "_key")

    def __init__(self, terms: Mapping[Monomial, int] | None = None):
        clean = {m: c for m, c in (terms or {}).items() if c}
        self._terms: dict[Monomial, int] = clean
        self._key: tuple[tuple[Monomial, int], ...] = tuple(sorted(clean.items()))

    @classmethod
    def zero(cls) -> RingElem:
        return cls()

    @classmethod
    def one(cls) -> RingElem:
        return cls({ONE_MONO: 1})

    @classmethod
    def of(cls, mono: Monomial, coeff: int = 1) -> RingElem:
        return cls({mono: coeff})

    @classmethod
    def integer(cls, n: int) -> RingElem:
        return cls({ONE_MONO: n})

    @property
    def terms(self) -> dict[Monomial, int]:
        return dict(self._terms)

    def items(self) -> Iterator[tuple[Monomial, int]]:
        return iter(self._key)

    def coefficient(self, mono: Monomial) -> int:
        return self._terms.get(mono, 0)

    def __len__(self) -> int:
        return len(self._terms)

    def __bool__(self) -> bool:
        return bool(self._terms)

    def __hash__(self) -> int:
        return hash(self._key)

    def __eq__(self, other: object) -> bool:
        if isinstance(other, int):
            other = RingElem.integer(other)
        if isinstance(other, Unit):
            other = other.to_elem()
        if not isinstance(other, RingElem):
            return NotImplemented
        return self._key == other._key

    def __add__(self, other: RingLike) -> RingElem:
        other = as_ring_elem(other)
        acc = dict(self._terms)
        for m, c in other._terms.items():
            acc[m] = acc.get(m, 0) + c
        return RingElem(acc)

    __radd__ = __add__

    def __neg__(self) -> RingElem:
        return RingElem({m: -c for m, c in self._terms.items()})

    def __sub__(self, other: RingLike) -> RingElem:
        return self + (-as_ring_elem(other))

    def __rsub__(self, other: RingLike) -> RingElem:
        return as_ring_elem(other) - self

    def __mul__(self, other: RingLike) -> RingElem:
        other = as_ring_elem(other)
        acc: dict[Monomial, int] = {}
        for m1, c1 in self._terms.items():
            for m2, c2 in other._terms.items():
                m = m1 * m2
                acc[m] = acc.get(m, 0) + c1 * c2
        return RingElem(acc)

    __rmul__ = __mul__

    def scale(self, unit: Unit) -> RingElem:
        """Multiply by a unit without the general product loop."""
        return RingElem(
            {m * unit.mono: unit.sign * c for m, c in self._terms.items()}
        )

    def is_unit(self) -> bool:
        return len(self._terms) == 1 and abs(next(iter(self._terms.values()))) == 1

    def as_unit(self) -> Unit:
        """Return the element as a Unit; raises ValueError unless it is +-monomial."""
        if not self.is_unit():
            raise ValueError(f"{self} is not a unit of R")
        (mono, coeff), = self._terms.items()
        return Unit(coeff, mono)

    def homogeneous_sdeg(self) -> SDeg | None:
        """Common splitting degree of all terms, or None if mixed (0 has none)."""
        degrees = {m.sdeg for m in self._terms}
        if len(degrees) != 1:
            return None
        return degrees.pop()

    def render(self) -> str:
        if not self._terms:
            return "0"
        parts: list[str] = []
        for mono, coeff in self._key:
            body = mono.render()
            mag = abs(coeff)
            if not body:
                text = str(mag)
            elif mag == 1:
                text = body
            else:
                text = f"{mag}*{body}"
            if not parts:
                parts.append(("-" if coeff < 0 else "") + text)
            else:
                parts.append((" - " if coeff < 0 else " + ") + text)
        return "".join(parts)

    def __str__(self) -> str:
        return self.render()

    def __repr__(self) -> str:
        return f"RingElem('{self.render()}')"

    @classmethod
    def parse(cls, text: str) -> RingElem:
        """Parse the rendering produced by render(), e.g. ``-X*Y*Z^-2 + 3``."""
        compact = re.sub(r"\s+", "", text)
        if not compact:
            raise ValueError("empty ring element")
        if compact == "0":
            return cls.zero()
        acc: dict[Monomial, int] = {}
        for chunk in re.split(r"(?<!\^)(?=[+-])", compact):
            if not chunk:
                continue
            sign = -1 if chunk[0] == "-" else 1
            body = chunk.lstrip("+-")
            if not body:
                raise ValueError(f"dangling sign in {text!r}")
            coeff = 1
            x = y = z = 0
            for factor in body.split("*"):
                m = _FACTOR.fullmatch(factor)
                if m is None:
                    raise ValueError(f"bad factor {factor!r} in {text!r}")
                if m.group("int"):
                    coeff *= int(m.group("int"))
                    continue
                power = int(m.group("pow")) if m.group("pow") else 1
                var = m.group("var")
                if var == "X":
                    x += power
                elif var == "Y":
                    y += power
                else:
                    z += power
            mono = Monomial(x, y, z)
            acc[mono] = acc.get(mono, 0) + sign * coeff
        return cls(acc)


_FACTOR = re.compile(r"(?P<int>\d+)|(?P<var>[XYZ])(?:\^(?P<pow>-?\d+))?")


@dataclass(frozen=True, slots=True)
class Unit:
    """Invertible element +-X^x Y^y Z^z."""

    sign: int = 1
    mono: Monomial = ONE_MONO

    def __post_init__(self) -> None:
        if self.sign not in (1, -1):
            raise ValueError(f"unit sign must be +-1, got {self.sign}")

    def __mul__(self, other: Unit) -> Unit:
        return Unit(self.sign * other.sign, self.mono * other.mono)

    def __truediv__(self, other: Unit) -> Unit:
        return self * other.inverse()

    def __neg__(self) -> Unit:
        return Unit(-self.sign, self.mono)

    def __pow__(self, n: int) -> Unit:
        result = ONE
        base = self if n >= 0 else self.inverse()
        for _ in range(abs(n)):
            result = result * base
        return result

    def inverse(self) -> Unit:
        return Unit(self.sign, self.mono.inverse())

    def to_elem(self) -> RingElem:
        return RingElem.of(self.mono, self.sign)

    @property
    def sdeg(self) -> SDeg:
        return self.mono.sdeg

    def is_one(self) -> bool:
        return self.sign == 1 and self.mono.is_one()

    def __str__(self) -> str:
        return self.to_elem().render()


ONE = Unit()
MINUS_ONE = Unit(-1)
X_UNIT = Unit(1, X_MONO)
Y_UNIT = Unit(1, Y_MONO)
Z_UNIT = Unit(1, Z_MONO)
XY_UNIT = Unit(1, XY_MONO)

RingLike = Union[RingElem, Unit, int]


def as_ring_elem(value: RingLike) -> RingElem:
    if isinstance(value, RingElem):
        return value
    if isinstance(value, Unit):
        return value.to_elem()
    if isinstance(value, int):
        return RingElem.integer(value)
    raise TypeError(f"cannot coerce {type(value).__name__} into R")


def mul(a: RingLike, b: RingLike) -> RingElem:
    return as_ring_elem(a) * as_ring_elem(b)


def unit_quotients(a: RingLike, b: RingLike) -> list[Unit]:
    """All units u with a == u * b, sorted; empty when a is not a unit multiple of b."""
    a, b = as_ring_elem(a), as_ring_elem(b)
    if not b:
        return [ONE] if not a else []
    mb, cb = next(b.items())
    candidates = {
        Unit(1 if ca == cb else -1, ma * mb.inverse())
        for ma, ca in a.items()
        if abs(ca) == abs(cb)
    }
    return sorted(
        (u for u in candidates if b.scale(u) == a),
        key=lambda u: (u.mono, u.sign),
    )


def lam(d: ChronDegree, e: ChronDegree) -> Unit:
    """Twist cocycle lambda(a,b,a',b') = X^{aa'} Y^{bb'} Z^{ab'-a'b}."""
    return Unit(
        1,
        Monomial(
            d.alpha * e.alpha,
            d.beta * e.beta,
            d.alpha * e.beta - e.alpha * d.beta,
        ),
    )


def sdeg_of_unit(u: Unit) -> SDeg:
    return u.sdeg


@dataclass(frozen=True, slots=True, order=True)
class ZPi:
    """a + b*pi in Z[pi]/(pi^2 - 1)."""

    a: int = 0
    b: int = 0

    def __add__(self, other: ZPiLike) -> ZPi:
        other = as_zpi(other)
        return ZPi(self.a + other.a, self.b + other.b)

    __radd__ = __add__

    def __neg__(self) -> ZPi:
        return ZPi(-self.a, -self.b)

    def __sub__(self, other: ZPiLike) -> ZPi:
        return self + (-as_zpi(other))

    def __mul__(self, other: ZPiLike) -> ZPi:
        other = as_zpi(other)
        return ZPi(
            self.a * other.a + self.b * other.b,
            self.a * other.b + self.b * other.a,
        )

    __rmul__ = __mul__

    def __bool__(self) -> bool:
        return bool(self.a or self.b)

    def at(self, pi: int) -> int:
        """Evaluate at pi = +-1."""
        return self.a + pi * self.b

    def __str__(self) -> str:
        if not self.b:
            return str(self.a)
        pi_part = {1: "pi", -1: "-pi"}.get(self.b, f"{self.b}*pi")
        if not self.a:
            return pi_part
        return f"{self.a} + {pi_part}" if self.b > 0 else f"{self.a} - {pi_part.lstrip('-')}"


ZPiLike = Union[ZPi, int]
PI = ZPi(0, 1)


def as_zpi(value: ZPiLike) -> ZPi:
    if isinstance(value, ZPi):
        return value
    if isinstance(value, int):
        return ZPi(value, 0)
    raise TypeError(f"cannot coerce {type(value).__name__} into Z_pi")


class SpecVariant(str, Enum):
    """Coefficient specializations of the generalized theory."""

    EVEN = "even"
    ODD = "odd"
    UNIFIED = "unified"
    MOD2 = "mod2"
    GENERALIZED = "generalized"
    NEGATED = "negated"

    @property
    def target_ring(self) -> str:
        return _TARGET_RINGS[self]

    @property
    def is_integral(self) -> bool:
        return self in (SpecVariant.EVEN, SpecVariant.ODD, SpecVariant.NEGATED)


_TARGET_RINGS = {
    SpecVariant.EVEN: "Z (X, Y, Z -> 1)",
    SpecVariant.ODD: "Z (X, Z -> 1, Y -> -1)",
    SpecVariant.UNIFIED: "Z[pi]/(pi^2-1) (X, Z -> 1, Y -> pi)",
    SpecVariant.MOD2: "Z/2 (even, reduced mod 2)",
    SpecVariant.GENERALIZED: "R = Z[X,Y,Z^+-1]/(X^2=Y^2=1)",
    SpecVariant.NEGATED: "Z (X, Y, Z -> -1)",
}


def specialize(r: RingLike, v: SpecVariant) -> Union[int, ZPi, RingElem]:
    """Image of r under the specialization homomorphism v."""
    r = as_ring_elem(r)
    if v is SpecVariant.GENERALIZED:
        return r
    if v is SpecVariant.EVEN:
        return sum(c for _, c in r.items())
    if v is SpecVariant.ODD:
        return sum(-c if m.y_exp else c for m, c in r.items())
    if v is SpecVariant.NEGATED:
        return sum(
            -c if (m.x_exp + m.y_exp + m.z_exp) % 2 else c for m, c in r.items()
        )
    if v is SpecVariant.MOD2:
        return sum(c for _, c in r.items()) % 2
    if v is SpecVariant.UNIFIED:
        plain = sum(c for m, c in r.items() if not m.y_exp)
        with_pi = sum(c for m, c in r.items() if m.y_exp)
        return ZPi(plain, with_pi)
    raise ValueError(f"unknown variant {v!r}")


@dataclass(frozen=True, slots=True)
class RingAutomorphism:
    """
    Graded automorphism of R fixing XY, given by the images of X, Y and Z.

    The images must be units of the same splitting degree as the
    generators they replace, with phi(X) * phi(Y) = XY.
    """

    x_image: Unit = X_UNIT
    y_image: Unit = Y_UNIT
    z_image: Unit = Z_UNIT

    def __post_init__(self) -> None:
        if self.x_image.sdeg != X_MONO.sdeg or self.y_image.sdeg != Y_MONO.sdeg:
            raise ValueError("images of X and Y must have splitting degree (1,0)")
        if self.z_image.sdeg != Z_MONO.sdeg:
            raise ValueError("image of Z must have splitting degree (0,-1)")
        if self.x_image * self.y_image != XY_UNIT:
            raise ValueError("automorphism must fix XY")

    def apply_mono(self, m: Monomial) -> Unit:
        return (
            self.x_image ** m.x_exp
            * self.y_image ** m.y_exp
            * self.z_image ** m.z_exp
        )

    def __call__(self, r: RingLike) -> RingElem:
        r = as_ring_elem(r)
        acc: dict[Monomial, int] = {}
        for m, c in r.items():
            u = self.apply_mono(m)
            acc[u.mono] = acc.get(u.mono, 0) + u.sign * c
        return RingElem(acc)

    def generator_scale(self, degree: SDeg) -> Unit:
        """(phi(X)/X)^a (phi(Z)/Z)^b for a generator of splitting degree (a, b)."""
        return (self.x_image / X_UNIT) ** degree.parity * (
            self.z_image / Z_UNIT
        ) ** (degree.depth % 2)


NEGATE_ALL = RingAutomorphism(-X_UNIT, -Y_UNIT, -Z_UNIT)
SWAP_XY = RingAutomorphism(Y_UNIT, X_UNIT, Z_UNIT)

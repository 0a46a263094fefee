"""Exact rational, complex-rational, and quaternion arithmetic.

No floats anywhere: every coordinate is a Fraction, so law checks compare
values bit-for-bit.  Quaternion norms stay inside the rationals only when the
squared norm is a perfect square; carriers that need ``x / |x|`` restrict
membership accordingly.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Optional

from .core import DimensionError

Q = Fraction

_ZERO = Q(0)
_ONE = Q(1)


def parse_rational(text: str) -> Q:
    try:
        return Q(text.strip())
    except (ValueError, ZeroDivisionError) as exc:
        raise ValueError(f"not a rational: {text!r}") from exc


def rational_text(x: Q) -> str:
    return str(x)


def exact_sqrt(x: Q) -> Optional[Q]:
    """Exact square root of a nonnegative rational, or None."""
    if x < 0:
        return None
    n, d = x.numerator, x.denominator
    rn, rd = math.isqrt(n), math.isqrt(d)
    if rn * rn != n or rd * rd != d:
        return None
    return Q(rn, rd)


def _term(coef: Q, unit: str) -> str:
    if coef == 1 and unit:
        return unit
    if coef == -1 and unit:
        return f"-{unit}"
    return f"{coef}{unit}"


def _format_terms(pairs) -> str:
    parts = []
    for coef, unit in pairs:
        if coef == 0:
            continue
        term = _term(coef, unit)
        if parts and not term.startswith("-"):
            parts.append("+" + term)
        else:
            parts.append(term)
    return "".join(parts) if parts else "0"


@dataclass(frozen=True, slots=True)
class GaussianRational:
    """Rational complex number under multiplication."""

    re: Q
    im: Q

    def __mul__(self, other: "GaussianRational") -> "GaussianRational":
        # cross-multiply over a shared denominator: two gcd normalizations
        # instead of six
        a, b = self.re, self.im
        c, d = other.re, other.im
        n1, n2 = a.numerator * b.denominator, b.numerator * a.denominator
        m1, m2 = c.numerator * d.denominator, d.numerator * c.denominator
        den = a.denominator * b.denominator * c.denominator * d.denominator
        return GaussianRational(
            Fraction(n1 * m1 - n2 * m2, den),
            Fraction(n1 * m2 + n2 * m1, den),
        )

    def conjugate(self) -> "GaussianRational":
        return GaussianRational(self.re, -self.im)

    def norm2(self) -> Q:
        return self.re * self.re + self.im * self.im

    def scale(self, c: Q) -> "GaussianRational":
        return GaussianRational(self.re * c, self.im * c)

    def inverse(self) -> "GaussianRational":
        n = self.norm2()
        if n == 0:
            raise ZeroDivisionError("zero has no inverse")
        return GaussianRational(self.re / n, -self.im / n)

    @classmethod
    def one(cls) -> "GaussianRational":
        return cls(_ONE, _ZERO)

    def sort_key(self):
        return (self.re, self.im)

    def __str__(self) -> str:
        return _format_terms(((self.re, ""), (self.im, "i")))


@dataclass(frozen=True, slots=True)
class RationalQuaternion:
    """Quaternion with rational coefficients: i^2 = j^2 = k^2 = ijk = -1."""

    a: Q
    b: Q
    c: Q
    d: Q

    def __mul__(self, o: "RationalQuaternion") -> "RationalQuaternion":
        a1, b1, c1, d1 = self.a, self.b, self.c, self.d
        a2, b2, c2, d2 = o.a, o.b, o.c, o.d
        return RationalQuaternion(
            a1 * a2 - b1 * b2 - c1 * c2 - d1 * d2,
            a1 * b2 + b1 * a2 + c1 * d2 - d1 * c2,
            a1 * c2 - b1 * d2 + c1 * a2 + d1 * b2,
            a1 * d2 + b1 * c2 - c1 * b2 + d1 * a2,
        )

    def __neg__(self) -> "RationalQuaternion":
        return RationalQuaternion(-self.a, -self.b, -self.c, -self.d)

    def conjugate(self) -> "RationalQuaternion":
        return RationalQuaternion(self.a, -self.b, -self.c, -self.d)

    def norm2(self) -> Q:
        return self.a * self.a + self.b * self.b + self.c * self.c + self.d * self.d

    def norm(self) -> Optional[Q]:
        return exact_sqrt(self.norm2())

    def scale(self, t: Q) -> "RationalQuaternion":
        return RationalQuaternion(self.a * t, self.b * t, self.c * t, self.d * t)

    def inverse(self) -> "RationalQuaternion":
        n = self.norm2()
        if n == 0:
            raise ZeroDivisionError("zero has no inverse")
        return self.conjugate().scale(1 / n)

    @classmethod
    def one(cls) -> "RationalQuaternion":
        return cls(_ONE, _ZERO, _ZERO, _ZERO)

    @classmethod
    def of(cls, a=0, b=0, c=0, d=0) -> "RationalQuaternion":
        return cls(Q(a), Q(b), Q(c), Q(d))

    def sort_key(self):
        return (self.a, self.b, self.c, self.d)

    def __str__(self) -> str:
        return _format_terms(((self.a, ""), (self.b, "i"), (self.c, "j"), (self.d, "k")))


def unit_circle_point(t: Q) -> GaussianRational:
    """Rational point on the unit circle: squared norm is exactly 1."""
    t = Q(t)
    den = 1 + t * t
    return GaussianRational((1 - t * t) / den, 2 * t / den)


def cayley_unit_quaternion(b: Q, c: Q, d: Q) -> RationalQuaternion:
    """Unit-norm rational quaternion (1+v)(1-v)^-1 for pure v = bi+cj+dk."""
    v = RationalQuaternion(_ZERO, Q(b), Q(c), Q(d))
    num = RationalQuaternion.one()
    num = RationalQuaternion(num.a + v.a, num.b + v.b, num.c + v.c, num.d + v.d)
    den = RationalQuaternion(_ONE, -v.b, -v.c, -v.d)
    return num * den.inverse()


@lru_cache(maxsize=1)
def hurwitz_units() -> tuple:
    """The 24 unit Hurwitz quaternions, closed under multiplication.

    Computed as the closure of {±1, ±i, ±j, ±k, (±1±i±j±k)/2} under the
    product; the generating set is already closed, and the closure loop
    asserts that.
    """
    half = Q(1, 2)
    gens = []
    for axis in range(4):
        for sign in (1, -1):
            coords = [_ZERO] * 4
            coords[axis] = Q(sign)
            gens.append(RationalQuaternion(*coords))
    for sa in (half, -half):
        for sb in (half, -half):
            for sc in (half, -half):
                for sd in (half, -half):
                    gens.append(RationalQuaternion(sa, sb, sc, sd))
    closure = set(gens)
    frontier = list(closure)
    while frontier:
        fresh = []
        for x in frontier:
            for y in list(closure):
                for z in (x * y, y * x):
                    if z not in closure:
                        closure.add(z)
                        fresh.append(z)
        frontier = fresh
    return tuple(sorted(closure, key=lambda q: q.sort_key()))


@dataclass(frozen=True, slots=True)
class KEPoint:
    """Scalar-plus-vector pair; the product twists by dot and cross products."""

    alpha: Q
    u: tuple

    def sort_key(self):
        return (self.alpha,) + self.u

    def __str__(self) -> str:
        if not self.u:
            return str(self.alpha)
        coords = ", ".join(str(c) for c in self.u)
        return f"({self.alpha}; {coords})"


_KE_DIMENSIONS = (0, 1, 3)


def ke_dot(u: tuple, v: tuple) -> Q:
    return sum((a * b for a, b in zip(u, v)), _ZERO)


def ke_cross(u: tuple, v: tuple) -> tuple:
    if len(u) <= 1:
        return tuple(_ZERO for _ in u)
    return (
        u[1] * v[2] - u[2] * v[1],
        u[2] * v[0] - u[0] * v[2],
        u[0] * v[1] - u[1] * v[0],
    )


def ke_mul(p: KEPoint, q: KEPoint) -> KEPoint:
    if len(p.u) != len(q.u):
        raise DimensionError("mixed vector dimensions")
    alpha = p.alpha * q.alpha - ke_dot(p.u, q.u)
    cross = ke_cross(p.u, q.u)
    u = tuple(p.alpha * qv + q.alpha * pv + cv for pv, qv, cv in zip(p.u, q.u, cross))
    return KEPoint(alpha, u)


def ke_conj(p: KEPoint) -> KEPoint:
    return KEPoint(p.alpha, tuple(-c for c in p.u))


def ke_identity(dimension: int) -> KEPoint:
    return KEPoint(_ONE, tuple(_ZERO for _ in range(dimension)))


def ke_point(dimension: int, alpha, coords=()) -> KEPoint:
    if dimension not in _KE_DIMENSIONS:
        raise DimensionError(f"vector dimension {dimension} not supported (want 0, 1, or 3)")
    coords = tuple(Q(c) for c in coords)
    if len(coords) != dimension:
        raise DimensionError(f"{len(coords)} coordinates for dimension {dimension}")
    return KEPoint(Q(alpha), coords)


def ke_to_quaternion(p: KEPoint) -> RationalQuaternion:
    if len(p.u) != 3:
        raise DimensionError("only dimension-3 points map to quaternions")
    return RationalQuaternion(p.alpha, p.u[0], p.u[1], p.u[2])

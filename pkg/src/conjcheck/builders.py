"""Ready-made carriers: finite tables and exact parametric families.

Parametric samplers are pure functions of (seed, index); each carrier salts
the stream with its own tag so different carriers inside one law never
correlate.  Rational magnitudes default to numerators and denominators of at
most 20.
"""
from __future__ import annotations

import random
from fractions import Fraction
from itertools import product
from typing import Callable, Optional

from .core import ConjStructure, DescriptionError, DimensionError, TableError
from .exact import (
    GaussianRational,
    KEPoint,
    Q,
    RationalQuaternion,
    cayley_unit_quaternion,
    exact_sqrt,
    hurwitz_units,
    ke_conj,
    ke_dot,
    ke_cross,
    ke_identity,
    ke_mul,
    unit_circle_point,
)

DEFAULT_BOUND = 20


def _rng(tag: str, seed: int, index: int) -> random.Random:
    return random.Random(f"{tag}|{seed}|{index}")


def attach_group_negate(S: ConjStructure) -> ConjStructure:
    """Compute and attach the inverse map of a finite group table."""
    inverse = {}
    for x in S.elements:
        for y in S.elements:
            if S.add(x, y) == S.identity and S.add(y, x) == S.identity:
                inverse[x] = y
                break
        else:
            raise TableError(f"{S.name}: element {S.fmt(x)} has no two-sided inverse")
    S.negate = inverse.__getitem__
    S.partial_inverse = inverse.get
    return S


# -- finite tables ---------------------------------------------------------


def trivial_monoid() -> ConjStructure:
    return attach_group_negate(
        ConjStructure.from_tables("trivial", [[0]], [0], identity=0, names=["0"])
    )


def cyclic_group(n: int, conj: str = "negate", name: str = "") -> ConjStructure:
    if n <= 0:
        raise TableError("cyclic group needs n >= 1")
    op = [[(x + y) % n for y in range(n)] for x in range(n)]
    if conj == "negate":
        co = [(-x) % n for x in range(n)]
    elif conj == "identity":
        co = list(range(n))
    elif conj == "zero":
        co = [0] * n
    else:
        raise TableError(f"unknown conjugation variant {conj!r}")
    S = ConjStructure.from_tables(
        name or f"Z{n}", op, co, identity=0, names=[str(x) for x in range(n)]
    )
    return attach_group_negate(S)


def klein_four() -> ConjStructure:
    elems = [(0, 0), (0, 1), (1, 0), (1, 1)]
    index = {e: i for i, e in enumerate(elems)}
    op = [
        [index[((a + c) % 2, (b + d) % 2)] for (c, d) in elems]
        for (a, b) in elems
    ]
    co = list(range(4))
    S = ConjStructure.from_tables(
        "Z2xZ2", op, co, identity=0, names=["00", "01", "10", "11"]
    )
    return attach_group_negate(S)


def symmetric_s3() -> ConjStructure:
    perms = sorted(product(range(3), repeat=3))
    perms = [p for p in perms if len(set(p)) == 3]
    index = {p: i for i, p in enumerate(perms)}

    def mul(p, q):
        return tuple(p[q[i]] for i in range(3))

    def inv(p):
        out = [0, 0, 0]
        for i in range(3):
            out[p[i]] = i
        return tuple(out)

    op = [[index[mul(p, q)] for q in perms] for p in perms]
    co = [index[inv(p)] for p in perms]
    names = ["e", "(12)", "(01)", "(012)", "(021)", "(02)"]
    S = ConjStructure.from_tables("S3", op, co, identity=0, names=names)
    return attach_group_negate(S)


_Q8_ORDER = ["1", "-1", "i", "-i", "j", "-j", "k", "-k"]


def _q8_values() -> list:
    one = RationalQuaternion.of(1)
    i = RationalQuaternion.of(0, 1)
    j = RationalQuaternion.of(0, 0, 1)
    k = RationalQuaternion.of(0, 0, 0, 1)
    return [one, -one, i, -i, j, -j, k, -k]


def quaternion_group_q8() -> ConjStructure:
    values = _q8_values()
    index = {v: n for n, v in enumerate(values)}
    op = [[index[x * y] for y in values] for x in values]
    co = [index[x.conjugate()] for x in values]
    S = ConjStructure.from_tables("Q8", op, co, identity=0, names=_Q8_ORDER)
    return attach_group_negate(S)


def hurwitz_unit_group() -> ConjStructure:
    values = hurwitz_units()
    index = {v: n for n, v in enumerate(values)}
    op = [[index[x * y] for y in values] for x in values]
    co = [index[x.conjugate()] for x in values]
    names = [str(v) for v in values]
    S = ConjStructure.from_tables("hurwitz-units", op, co, names=names)
    return attach_group_negate(S)


# -- enumerable infinite carriers -------------------------------------------


def natural_numbers(conj: str = "zero") -> ConjStructure:
    if conj == "zero":
        co = lambda x: 0
    elif conj == "same":
        co = lambda x: x
    elif conj == "shift":
        co = lambda x: x + 1  # deliberately invalid; a failure exhibit
    else:
        raise TableError(f"unknown conjugation variant {conj!r}")

    def sampler(seed, index):
        return _rng(f"nat-{conj}", seed, index).randrange(0, 64)

    return ConjStructure(
        name=f"naturals({conj})",
        kind="monoid",
        op=lambda x, y: x + y,
        co=co,
        identity=0,
        sampler=sampler,
        enumerate_at=lambda i: i,
        probes=(0, 1, 2),
        partial_inverse=lambda x: 0 if x == 0 else None,
        contains=lambda x: isinstance(x, int) and x >= 0,
        codec="natural",
    )


def natural_max() -> ConjStructure:
    def sampler(seed, index):
        return _rng("nat-max", seed, index).randrange(0, 64)

    return ConjStructure(
        name="naturals(max)",
        kind="monoid",
        op=max,
        co=lambda x: x,
        identity=0,
        sampler=sampler,
        enumerate_at=lambda i: i,
        probes=(0, 1, 2),
        contains=lambda x: isinstance(x, int) and x >= 0,
        codec="natural",
    )


def _word_at(i: int) -> str:
    bits = bin(i + 2)[3:]
    return "".join("y" if b == "1" else "x" for b in bits)


def free_pair_semigroup() -> ConjStructure:
    def sampler(seed, index):
        return _word_at(_rng("free-xy", seed, index).randrange(0, 62))

    return ConjStructure(
        name="free(x,y)",
        kind="semigroup",
        op=lambda u, v: u + v,
        co=lambda u: u,
        sampler=sampler,
        enumerate_at=_word_at,
        probes=("x", "y"),
        contains=lambda w: isinstance(w, str) and w != "" and set(w) <= {"x", "y"},
        codec="word",
    )


# -- rational interval carriers ---------------------------------------------


def _positive_unit_fraction(rng: random.Random, bound: int, allow_one: bool) -> Q:
    q = rng.randrange(2, bound + 1)
    top = q if allow_one else q - 1
    p = rng.randrange(1, top + 1)
    return Q(p, q)


def rational_unit_interval(bound: int = DEFAULT_BOUND) -> ConjStructure:
    def sampler(seed, index):
        return _positive_unit_fraction(_rng("unit-interval", seed, index), bound, True)

    return ConjStructure(
        name="rationals(0,1]",
        kind="monoid",
        op=lambda x, y: x * y,
        co=lambda x: x,
        identity=Q(1),
        sampler=sampler,
        probes=(Q(1), Q(1, 2)),
        partial_inverse=lambda x: Q(1) if x == 1 else None,
        contains=lambda x: isinstance(x, Fraction) and 0 < x <= 1,
        codec="rational",
    )


def rational_open_interval(bound: int = DEFAULT_BOUND) -> ConjStructure:
    def sampler(seed, index):
        rng = _rng("open-interval", seed, index)
        sign = 1 if rng.randrange(2) == 0 else -1
        return sign * _positive_unit_fraction(rng, bound, False)

    return ConjStructure(
        name="rationals(0<|u|<1)",
        kind="semigroup",
        op=lambda x, y: x * y,
        co=lambda x: x,
        sampler=sampler,
        probes=(Q(1, 2), Q(-1, 2)),
        contains=lambda x: isinstance(x, Fraction) and 0 < abs(x) < 1,
        codec="rational",
    )


# -- complex carriers --------------------------------------------------------


def _circle_point(rng: random.Random, bound: int) -> GaussianRational:
    t = Q(rng.randrange(-bound, bound + 1), rng.randrange(1, bound + 1))
    return unit_circle_point(t)


def unit_circle_group(bound: int = DEFAULT_BOUND) -> ConjStructure:
    def sampler(seed, index):
        return _circle_point(_rng("unit-circle", seed, index), bound)

    one = GaussianRational.one()
    return ConjStructure(
        name="unit-circle",
        kind="monoid",
        op=lambda x, y: x * y,
        co=lambda z: z.conjugate(),
        identity=one,
        sampler=sampler,
        probes=(one, unit_circle_point(Q(1, 2)), unit_circle_point(Q(1))),
        negate=lambda z: z.conjugate(),
        partial_inverse=lambda z: z.conjugate(),
        contains=lambda z: isinstance(z, GaussianRational) and z.norm2() == 1,
        codec="gaussian",
    )


def gaussian_punctured_disk(bound: int = DEFAULT_BOUND) -> ConjStructure:
    def sampler(seed, index):
        rng = _rng("gaussian-disk-open", seed, index)
        if rng.randrange(2) == 0:
            c = _positive_unit_fraction(rng, bound, False)
            return _circle_point(rng, bound).scale(c)
        while True:
            q = rng.randrange(2, bound + 1)
            a = rng.randrange(1 - q, q)
            b = rng.randrange(1 - q, q)
            if (a, b) != (0, 0) and a * a + b * b < q * q:
                return GaussianRational(Q(a, q), Q(b, q))

    return ConjStructure(
        name="gaussian(0<|z|<1)",
        kind="semigroup",
        op=lambda x, y: x * y,
        co=lambda z: z.conjugate(),
        sampler=sampler,
        probes=(GaussianRational(Q(1, 2), Q(0)), GaussianRational(Q(0), Q(1, 2))),
        contains=lambda z: isinstance(z, GaussianRational) and 0 < z.norm2() < 1,
        codec="gaussian",
    )


def gaussian_disk_rational_norm(bound: int = DEFAULT_BOUND) -> ConjStructure:
    """Nonzero rational complex numbers with |z| rational and 0 < |z| <= 1."""

    def sampler(seed, index):
        rng = _rng("gaussian-disk", seed, index)
        c = _positive_unit_fraction(rng, bound, True)
        return _circle_point(rng, bound).scale(c)

    def contains(z):
        if not isinstance(z, GaussianRational):
            return False
        n2 = z.norm2()
        return 0 < n2 <= 1 and exact_sqrt(n2) is not None

    half = GaussianRational(Q(1, 2), Q(0))
    return ConjStructure(
        name="gaussian-disk",
        kind="monoid",
        op=lambda x, y: x * y,
        co=lambda z: z.conjugate(),
        identity=GaussianRational.one(),
        sampler=sampler,
        probes=(GaussianRational.one(), half, GaussianRational(Q(0), Q(1, 2))),
        partial_inverse=lambda z: z.conjugate() if z.norm2() == 1 else None,
        contains=contains,
        codec="gaussian",
    )


# -- quaternion carriers ------------------------------------------------------


def _unit_quaternion(rng: random.Random, bound: int) -> RationalQuaternion:
    units = hurwitz_units()
    u = cayley_unit_quaternion(
        Q(rng.randrange(-bound, bound + 1), rng.randrange(1, bound + 1)),
        Q(rng.randrange(-bound, bound + 1), rng.randrange(1, bound + 1)),
        Q(rng.randrange(-bound, bound + 1), rng.randrange(1, bound + 1)),
    )
    return u * units[rng.randrange(len(units))]


def unit_quaternion_group(bound: int = 6) -> ConjStructure:
    def sampler(seed, index):
        return _unit_quaternion(_rng("unit-quaternions", seed, index), bound)

    one = RationalQuaternion.one()
    return ConjStructure(
        name="unit-quaternions",
        kind="monoid",
        op=lambda x, y: x * y,
        co=lambda q: q.conjugate(),
        identity=one,
        sampler=sampler,
        probes=(one, RationalQuaternion.of(0, 1), cayley_unit_quaternion(Q(1, 2), Q(0), Q(0))),
        negate=lambda q: q.conjugate(),
        partial_inverse=lambda q: q.conjugate(),
        contains=lambda q: isinstance(q, RationalQuaternion) and q.norm2() == 1,
        codec="quaternion",
    )


def scaled_unit_quaternions(bound: int = 6) -> ConjStructure:
    """Quaternions x with rational |x| and 0 < |x| <= 1 under the product."""

    def sampler(seed, index):
        rng = _rng("scaled-unit-quaternions", seed, index)
        c = _positive_unit_fraction(rng, max(bound, 2), True)
        return _unit_quaternion(rng, bound).scale(c)

    def contains(x):
        if not isinstance(x, RationalQuaternion):
            return False
        n2 = x.norm2()
        return 0 < n2 <= 1 and exact_sqrt(n2) is not None

    def partial_inverse(x):
        inv = x.inverse()
        return inv if contains(inv) else None

    one = RationalQuaternion.one()
    half = RationalQuaternion.of(Q(1, 2))
    return ConjStructure(
        name="scaled-unit-quaternions",
        kind="monoid",
        op=lambda x, y: x * y,
        co=lambda q: q.conjugate(),
        identity=one,
        sampler=sampler,
        probes=(one, half, RationalQuaternion.of(0, Q(1, 2))),
        partial_inverse=partial_inverse,
        contains=contains,
        codec="quaternion",
    )


def quaternion_punctured_ball(bound: int = 6) -> ConjStructure:
    def sampler(seed, index):
        rng = _rng("quaternion-ball", seed, index)
        c = _positive_unit_fraction(rng, max(bound, 2), False)
        return _unit_quaternion(rng, bound).scale(c)

    return ConjStructure(
        name="quaternions(0<|q|<1)",
        kind="semigroup",
        op=lambda x, y: x * y,
        co=lambda q: q.conjugate(),
        sampler=sampler,
        probes=(RationalQuaternion.of(Q(1, 2)), RationalQuaternion.of(0, Q(1, 2))),
        contains=lambda q: isinstance(q, RationalQuaternion) and 0 < q.norm2() < 1,
        codec="quaternion",
    )


# -- scalar-plus-vector pairs -------------------------------------------------

_KE_CHECKED: dict = {}


def _ke_spot_check(dimension: int, samples: int = 1000) -> None:
    """Dot/cross compatibility identities, sampled once per dimension."""
    if _KE_CHECKED.get(dimension):
        return

    def vec(rng):
        return tuple(Q(rng.randrange(-9, 10), rng.randrange(1, 10)) for _ in range(dimension))

    for i in range(samples):
        rng = _rng(f"ke-{dimension}", 0, i)
        u, v, w = vec(rng), vec(rng), vec(rng)
        if ke_dot(u, ke_cross(v, w)) != ke_dot(ke_cross(u, v), w):
            raise DimensionError(f"dimension {dimension}: mixed product identity fails")
        s, t = ke_dot(v, w), ke_dot(u, v)
        lhs = tuple(a - s * b for a, b in zip(ke_cross(u, ke_cross(v, w)), u))
        rhs = tuple(a - t * b for a, b in zip(ke_cross(ke_cross(u, v), w), w))
        if lhs != rhs:
            raise DimensionError(f"dimension {dimension}: double cross identity fails")
    _KE_CHECKED[dimension] = True


def ke_structure(dimension: int, variant: str = "monoid", bound: int = 9) -> ConjStructure:
    """Scalar-plus-vector carrier in dimension 0, 1, or 3.

    The monoid variant keeps the scalar part nonzero and has identity (1; 0).
    Dimension three is the quaternion product in disguise; dimension one the
    complex one; dimension zero plain scalar multiplication.
    """
    if dimension not in (0, 1, 3):
        raise DimensionError(f"vector dimension {dimension} not supported (want 0, 1, or 3)")
    if variant not in ("monoid", "semigroup"):
        raise TableError(f"unknown variant {variant!r}")
    _ke_spot_check(dimension)
    nonzero_scalar = variant == "monoid"

    def sampler(seed, index):
        rng = _rng(f"ke{dimension}-{variant}", seed, index)
        while True:
            alpha = Q(rng.randrange(-bound, bound + 1), rng.randrange(1, bound + 1))
            if alpha != 0 or not nonzero_scalar:
                break
        u = tuple(Q(rng.randrange(-bound, bound + 1), rng.randrange(1, bound + 1)) for _ in range(dimension))
        return KEPoint(alpha, u)

    def contains(p):
        if not isinstance(p, KEPoint) or len(p.u) != dimension:
            return False
        return p.alpha != 0 if nonzero_scalar else True

    identity = ke_identity(dimension) if variant == "monoid" else None
    probes = (ke_identity(dimension), KEPoint(Q(2), tuple(Q(1) for _ in range(dimension))))
    return ConjStructure(
        name=f"ke{dimension}-{variant}",
        kind=variant,
        op=ke_mul,
        co=ke_conj,
        identity=identity,
        sampler=sampler,
        probes=probes if variant == "monoid" else probes[1:],
        contains=contains,
        codec="kepoint",
    )


# -- registry for the description format -------------------------------------


def _int_param(params: dict, key: str, default: int) -> int:
    value = params.get(key, default)
    if not isinstance(value, int) or isinstance(value, bool):
        raise DescriptionError(f"parameter {key!r} must be an integer")
    return value


def _str_param(params: dict, key: str, default: str) -> str:
    value = params.get(key, default)
    if not isinstance(value, str):
        raise DescriptionError(f"parameter {key!r} must be a string")
    return value


BUILDERS: dict[str, Callable[[dict], ConjStructure]] = {
    "trivial": lambda p: trivial_monoid(),
    "cyclic": lambda p: cyclic_group(_int_param(p, "order", 2), _str_param(p, "conj", "negate")),
    "klein-four": lambda p: klein_four(),
    "symmetric-3": lambda p: symmetric_s3(),
    "quaternion-8": lambda p: quaternion_group_q8(),
    "hurwitz-units": lambda p: hurwitz_unit_group(),
    "naturals": lambda p: natural_numbers(_str_param(p, "conj", "zero")),
    "naturals-max": lambda p: natural_max(),
    "free-words": lambda p: free_pair_semigroup(),
    "rational-unit-interval": lambda p: rational_unit_interval(_int_param(p, "bound", DEFAULT_BOUND)),
    "rational-open-interval": lambda p: rational_open_interval(_int_param(p, "bound", DEFAULT_BOUND)),
    "unit-circle": lambda p: unit_circle_group(_int_param(p, "bound", DEFAULT_BOUND)),
    "gaussian-punctured-disk": lambda p: gaussian_punctured_disk(_int_param(p, "bound", DEFAULT_BOUND)),
    "gaussian-disk": lambda p: gaussian_disk_rational_norm(_int_param(p, "bound", DEFAULT_BOUND)),
    "unit-quaternions": lambda p: unit_quaternion_group(_int_param(p, "bound", 6)),
    "scaled-unit-quaternions": lambda p: scaled_unit_quaternions(_int_param(p, "bound", 6)),
    "quaternion-punctured-ball": lambda p: quaternion_punctured_ball(_int_param(p, "bound", 6)),
    "ke": lambda p: ke_structure(
        _int_param(p, "dimension", 3), _str_param(p, "variant", "monoid"), _int_param(p, "bound", 9)
    ),
}


def build_named_structure(name: str, params: Optional[dict] = None) -> ConjStructure:
    factory = BUILDERS.get(name)
    if factory is None:
        known = ", ".join(sorted(BUILDERS))
        raise DescriptionError(f"unknown builder {name!r} (known: {known})")
    return factory(params or {})

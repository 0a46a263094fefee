"""Carrier-agnostic structures, enumeration plans, verdicts, and the law engine.

Everything downstream (retraction laws, crossed-structure conditions,
admissibility criteria) is phrased as a Law over a tuple scope drawn from one
or more ConjStructures and evaluated exhaustively, over a bounded window, or
by seeded exact sampling.  Witnesses carry enough data to re-evaluate the
violated law bit-for-bit.
"""
from __future__ import annotations

import random
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import product
from typing import Any, Callable, Iterable, Optional, Sequence

HOLDS_EXHAUSTIVE = "holds-exhaustive"
HOLDS_BOUNDED = "holds-bounded"
HOLDS_SAMPLED = "holds-sampled"
FAILS = "fails"
INCONCLUSIVE = "inconclusive"

_OUTCOME_RANK = {
    HOLDS_EXHAUSTIVE: 0,
    HOLDS_BOUNDED: 1,
    HOLDS_SAMPLED: 2,
    INCONCLUSIVE: 3,
    FAILS: 4,
}

EXHAUSTIVE = "exhaustive"
BOUNDED = "bounded"
SAMPLED = "sampled"


class ConjError(Exception):
    """Base error for the package."""


class PlanError(ConjError):
    pass


class TableError(ConjError):
    pass


class DimensionError(ConjError):
    pass


class KindMismatchError(ConjError):
    pass


class DescriptionError(ConjError):
    pass


class CarrierTooLargeError(ConjError):
    pass


class CheckFailedError(ConjError):
    """A prerequisite check failed; carries the offending verdict if any."""

    def __init__(self, message: str, verdict: "Verdict | None" = None):
        super().__init__(message)
        self.verdict = verdict


class NotSplitError(CheckFailedError):
    pass


class NotKernelError(CheckFailedError):
    pass


class NotSchreierError(CheckFailedError):
    def __init__(self, message, witness=None, decompositions=()):
        super().__init__(message)
        self.witness = witness
        self.decompositions = tuple(decompositions)


class ActionLawError(CheckFailedError):
    pass


class ActionCompatibilityError(CheckFailedError):
    pass


class CancellationFailureError(CheckFailedError):
    pass


class ConditionFailedError(CheckFailedError):
    """A crossed-structure condition required by a builder does not hold."""

    def __init__(self, condition: str, verdict: "Verdict | None" = None):
        super().__init__(f"required condition {condition!r} fails", verdict)
        self.condition = condition


class HuqFailedError(CheckFailedError):
    pass


@dataclass(frozen=True)
class EnumerationPlan:
    """How a universally quantified law is to be checked.

    exhaustive   -- every tuple; finite carriers only
    bounded      -- tuples over each carrier's first `window` elements
    sampled      -- `count` seeded tuples; deterministic in (seed, index)
    """

    mode: str
    window: int = 0
    count: int = 0
    seed: int = 0

    def __post_init__(self):
        if self.mode not in (EXHAUSTIVE, BOUNDED, SAMPLED):
            raise PlanError(f"unknown plan mode {self.mode!r}")
        if self.mode == BOUNDED and self.window <= 0:
            raise PlanError("bounded plan needs a positive window")
        if self.mode == SAMPLED and self.count <= 0:
            raise PlanError("sampled plan needs a positive count")

    @classmethod
    def exhaustive(cls) -> "EnumerationPlan":
        return cls(EXHAUSTIVE)

    @classmethod
    def bounded(cls, window: int) -> "EnumerationPlan":
        return cls(BOUNDED, window=window)

    @classmethod
    def sampled(cls, count: int, seed: int = 0) -> "EnumerationPlan":
        return cls(SAMPLED, count=count, seed=seed)

    def describe(self) -> str:
        if self.mode == EXHAUSTIVE:
            return "exhaustive"
        if self.mode == BOUNDED:
            return f"bounded:{self.window}"
        return f"sampled:{self.count} seed={self.seed}"


def canonical_key(x: Any):
    """Total order key within one carrier; used to pick smallest witnesses."""
    if isinstance(x, bool):
        return (0, int(x))
    if isinstance(x, int):
        return (0, x)
    if isinstance(x, Fraction):
        return (1, x)
    if isinstance(x, str):
        return (2, len(x), x)
    if isinstance(x, tuple):
        return (3,) + tuple(canonical_key(v) for v in x)
    sk = getattr(x, "sort_key", None)
    if sk is not None:
        return (4,) + tuple(sk())
    return (5, repr(x))


@dataclass
class ConjStructure:
    """A semigroup or monoid with a unary conjugation, finite or parametric.

    Finite structures list their elements (indices 0..n-1 when built from
    tables); parametric ones supply a seeded sampler and optionally a prefix
    enumerator, membership predicate, probes (canonical elements prepended to
    sampled scopes), and inverse data used by group-ness checks.
    """

    name: str
    kind: str  # "semigroup" | "monoid"
    op: Callable[[Any, Any], Any]
    co: Callable[[Any], Any]
    identity: Any = None
    elements: Optional[tuple] = None
    names: Optional[tuple] = None
    sampler: Optional[Callable[[int, int], Any]] = None
    enumerate_at: Optional[Callable[[int], Any]] = None
    probes: tuple = ()
    negate: Optional[Callable[[Any], Any]] = None
    partial_inverse: Optional[Callable[[Any], Any]] = None
    contains: Optional[Callable[[Any], bool]] = None
    components: tuple = ()
    codec: str = "auto"
    op_table: Optional[tuple] = None
    conj_table: Optional[tuple] = None
    _sample_cache: dict = field(default_factory=dict, init=False, repr=False, compare=False)

    def __post_init__(self):
        if self.kind not in ("semigroup", "monoid"):
            raise TableError(f"unknown structure kind {self.kind!r}")
        if self.kind == "monoid" and self.identity is None and self.size != 0:
            raise TableError(f"{self.name}: monoid requires an identity element")

    # -- basic operations -------------------------------------------------

    def add(self, x, y):
        return self.op(x, y)

    def conj(self, x):
        return self.co(x)

    @property
    def size(self) -> Optional[int]:
        return None if self.elements is None else len(self.elements)

    @property
    def is_finite(self) -> bool:
        return self.elements is not None

    # -- enumeration and sampling -----------------------------------------

    def prefix(self, n: int) -> tuple:
        if self.elements is not None:
            return tuple(self.elements[:n])
        if self.enumerate_at is not None:
            return tuple(self.enumerate_at(i) for i in range(n))
        raise PlanError(f"{self.name}: carrier is not enumerable; use a sampled plan")

    def sample(self, seed: int, index: int):
        # samples are pure in (seed, index), so draws repeated across laws
        # are served from a bounded memo
        key = (seed, index)
        if key in self._sample_cache:
            return self._sample_cache[key]
        if self.sampler is not None:
            value = self.sampler(seed, index)
            if len(self._sample_cache) < 250_000:
                self._sample_cache[key] = value
            return value
        if self.elements is not None:
            if not self.elements:
                raise PlanError(f"{self.name}: cannot sample an empty carrier")
            rng = random.Random(f"{self.name}|{seed}|{index}")
            return self.elements[rng.randrange(len(self.elements))]
        raise PlanError(f"{self.name}: no sampler available")

    # -- presentation ------------------------------------------------------

    def fmt(self, x) -> str:
        if self.codec == "pair" and isinstance(x, tuple) and len(self.components) == 2:
            left, right = self.components
            return f"({left.fmt(x[0])}, {right.fmt(x[1])})"
        if self.names is not None and isinstance(x, int) and 0 <= x < len(self.names):
            return self.names[x]
        return str(x)

    def key(self, x):
        if self.codec == "pair" and isinstance(x, tuple) and len(self.components) == 2:
            left, right = self.components
            return (left.key(x[0]), right.key(x[1]))
        return canonical_key(x)

    def index_of(self, x) -> int:
        if self.elements is None:
            raise TableError(f"{self.name}: not a finite carrier")
        return self.elements.index(x)

    @classmethod
    def from_tables(
        cls,
        name: str,
        op_table: Sequence[Sequence[int]],
        conj_table: Sequence[int],
        identity: Optional[int] = None,
        names: Optional[Sequence[str]] = None,
        kind: Optional[str] = None,
    ) -> "ConjStructure":
        n = len(op_table)
        op_rows = tuple(tuple(row) for row in op_table)
        conj_row = tuple(conj_table)
        for row in op_rows:
            if len(row) != n:
                raise TableError(f"{name}: operation table is not square")
            for v in row:
                if not isinstance(v, int) or not 0 <= v < n:
                    raise TableError(f"{name}: operation entry {v!r} out of range")
        if len(conj_row) != n:
            raise TableError(f"{name}: conjugation table has wrong length")
        for v in conj_row:
            if not isinstance(v, int) or not 0 <= v < n:
                raise TableError(f"{name}: conjugation entry {v!r} out of range")
        if names is not None:
            names = tuple(str(s) for s in names)
            if len(names) != n:
                raise TableError(f"{name}: {len(names)} names for {n} elements")
        if identity is None:
            for e in range(n):
                if all(op_rows[e][x] == x == op_rows[x][e] for x in range(n)):
                    identity = e
                    break
        else:
            if not 0 <= identity < n:
                raise TableError(f"{name}: identity index {identity} out of range")
            if any(op_rows[identity][x] != x or op_rows[x][identity] != x for x in range(n)):
                raise TableError(f"{name}: declared identity is not two-sided neutral")
        if kind is None:
            kind = "monoid" if identity is not None else "semigroup"
        if kind == "monoid" and identity is None and n > 0:
            raise TableError(f"{name}: monoid table without a neutral element")

        def op(x, y, _t=op_rows):
            return _t[x][y]

        def co(x, _t=conj_row):
            return _t[x]

        return cls(
            name=name,
            kind=kind,
            op=op,
            co=co,
            identity=identity,
            elements=tuple(range(n)),
            names=names,
            codec="finite",
            op_table=op_rows,
            conj_table=conj_row,
        )


def pair_enumerator(X: ConjStructure, Y: ConjStructure) -> Optional[Callable[[int], tuple]]:
    """Anti-diagonal enumeration of X x Y when both components enumerate."""
    def source(S):
        if S.elements is not None:
            return len(S.elements), lambda i, _e=S.elements: _e[i]
        return None, S.enumerate_at

    nx, ex = source(X)
    ny, ey = source(Y)
    if ex is None or ey is None:
        return None

    def diagonals():
        d = 0
        while True:
            for j in range(d + 1):
                l = d - j
                if (nx is None or j < nx) and (ny is None or l < ny):
                    yield (ex(j), ey(l))
            if nx is not None and ny is not None and d >= nx + ny:
                return
            d += 1

    cache: list = []
    it = diagonals()

    def at(i: int):
        while len(cache) <= i:
            try:
                cache.append(next(it))
            except StopIteration:
                raise PlanError("pair carrier exhausted before requested index") from None
        return cache[i]

    return at


def direct_product_structure(X: ConjStructure, Y: ConjStructure, name: str = "") -> ConjStructure:
    """Componentwise product carrier; finite iff both components are."""
    name = name or f"{X.name} x {Y.name}"
    kind = "monoid" if X.kind == "monoid" and Y.kind == "monoid" else "semigroup"
    identity = None
    if X.identity is not None and Y.identity is not None:
        identity = (X.identity, Y.identity)
    elements = None
    if X.is_finite and Y.is_finite:
        elements = tuple((x, y) for x in X.elements for y in Y.elements)

    def op(p, q):
        return (X.op(p[0], q[0]), Y.op(p[1], q[1]))

    def co(p):
        return (X.co(p[0]), Y.co(p[1]))

    sampler = None
    enumerate_at = None
    if not (X.is_finite and Y.is_finite):
        def sampler(seed, index):
            return (X.sample(seed, 2 * index), Y.sample(seed, 2 * index + 1))

        enumerate_at = pair_enumerator(X, Y)

    negate = None
    if X.negate is not None and Y.negate is not None:
        def negate(p):
            return (X.negate(p[0]), Y.negate(p[1]))

    contains = None
    if X.contains is not None or Y.contains is not None:
        def contains(p):
            if not (isinstance(p, tuple) and len(p) == 2):
                return False
            cx = X.contains(p[0]) if X.contains else True
            cy = Y.contains(p[1]) if Y.contains else True
            return cx and cy

    probes = tuple((x, y) for x in X.probes for y in Y.probes)
    return ConjStructure(
        name=name,
        kind=kind if identity is not None or kind == "semigroup" else "semigroup",
        op=op,
        co=co,
        identity=identity,
        elements=elements,
        sampler=sampler,
        enumerate_at=enumerate_at,
        probes=probes,
        negate=negate,
        contains=contains,
        components=(X, Y),
        codec="pair",
    )


def substructure(S: ConjStructure, subset: Iterable, name: str = "") -> ConjStructure:
    """Finite substructure on `subset`; requires closure under op and conj."""
    universe = tuple(sorted(set(subset), key=S.key))
    members = set(universe)
    for x in universe:
        if S.co(x) not in members:
            raise TableError(f"{name or S.name}: subset not closed under conjugation at {S.fmt(x)}")
        for y in universe:
            if S.op(x, y) not in members:
                raise TableError(
                    f"{name or S.name}: subset not closed under the operation at "
                    f"({S.fmt(x)}, {S.fmt(y)})"
                )
    identity = S.identity if (S.identity is not None and S.identity in members) else None
    kind = "monoid" if identity is not None else "semigroup"
    return ConjStructure(
        name=name or f"sub({S.name})",
        kind=kind,
        op=S.op,
        co=S.co,
        identity=identity,
        elements=universe,
        names=tuple(S.fmt(x) for x in universe) if all(isinstance(x, int) for x in universe) and S.names else None,
        components=S.components,
        codec=S.codec if S.codec != "finite" else "auto",
        negate=S.negate,
        partial_inverse=S.partial_inverse,
    )


@dataclass
class Hom:
    """A map between structures; law checks decide whether it is a morphism."""

    source: ConjStructure
    target: ConjStructure
    fn: Callable[[Any], Any]
    name: str = ""
    table: Optional[dict] = None
    verified: Optional["Verdict"] = None

    def __call__(self, x):
        return self.fn(x)

    @classmethod
    def from_table(cls, source: ConjStructure, target: ConjStructure, images: Sequence, name: str = "") -> "Hom":
        if source.elements is None:
            raise TableError(f"{name or 'hom'}: table-backed map needs a finite source")
        if len(images) != len(source.elements):
            raise TableError(f"{name or 'hom'}: {len(images)} images for {len(source.elements)} elements")
        mapping = dict(zip(source.elements, images))
        return cls(source=source, target=target, fn=mapping.__getitem__, name=name, table=mapping)


def identity_hom(S: ConjStructure, name: str = "") -> Hom:
    return Hom(S, S, lambda x: x, name=name or f"id_{S.name}")


def zero_hom(S: ConjStructure, T: ConjStructure, name: str = "") -> Hom:
    if T.identity is None:
        raise KindMismatchError(f"zero map into {T.name} needs a monoid target")
    return Hom(S, T, lambda x: T.identity, name=name or "0")


def compose_homs(g: Hom, f: Hom, name: str = "") -> Hom:
    return Hom(f.source, g.target, lambda x: g.fn(f.fn(x)), name=name or f"{g.name}.{f.name}")


@dataclass(frozen=True)
class Verdict:
    """Outcome of one law check, replayable from its witness."""

    law: str
    outcome: str
    checked: int = 0
    witness: Optional[tuple] = None
    witness_text: str = ""
    detail: str = ""
    seed: Optional[int] = None
    window: Optional[int] = None

    @property
    def passed(self) -> bool:
        return self.outcome in (HOLDS_EXHAUSTIVE, HOLDS_BOUNDED, HOLDS_SAMPLED)

    @property
    def failed(self) -> bool:
        return self.outcome == FAILS

    def line(self) -> str:
        extra = f" checked={self.checked}"
        if self.seed is not None:
            extra += f" seed={self.seed}"
        if self.window is not None:
            extra += f" window={self.window}"
        text = f"{self.law:<34} {self.outcome:<18}{extra}"
        if self.witness_text:
            text += f" witness={self.witness_text}"
        if self.detail:
            text += f" [{self.detail}]"
        return text


@dataclass
class Law:
    """A universally quantified predicate over a tuple scope.

    `spaces` drives the default scope (one factor per quantified variable);
    a custom `scope(plan)` may instead yield (tuples, pass_outcome).
    """

    name: str
    spaces: Optional[tuple]
    holds: Callable[..., bool]
    scope: Optional[Callable[[EnumerationPlan], tuple]] = None
    fmt: Optional[Callable[[tuple], str]] = None

    def format_witness(self, tup: tuple) -> str:
        if self.fmt is not None:
            return self.fmt(tup)
        if self.spaces:
            parts = [sp.fmt(v) for sp, v in zip(self.spaces, tup)]
        else:
            parts = [str(v) for v in tup]
        return "(" + ", ".join(parts) + ")"


def default_scope(spaces: Sequence[ConjStructure], plan: EnumerationPlan):
    """Tuple iterator plus the pass outcome the plan earns."""
    k = len(spaces)
    if k == 0:
        return iter([()]), HOLDS_EXHAUSTIVE
    if plan.mode == EXHAUSTIVE:
        for sp in spaces:
            if not sp.is_finite:
                raise PlanError(f"exhaustive plan on infinite carrier {sp.name}")
        return product(*(sp.elements for sp in spaces)), HOLDS_EXHAUSTIVE
    if plan.mode == BOUNDED:
        return product(*(sp.prefix(plan.window) for sp in spaces)), HOLDS_BOUNDED

    def sampled():
        if all(sp.probes for sp in spaces):
            yield from product(*(sp.probes for sp in spaces))
        for i in range(plan.count):
            yield tuple(sp.sample(plan.seed, i * k + j) for j, sp in enumerate(spaces))

    return sampled(), HOLDS_SAMPLED


def check_law(law: Law, plan: EnumerationPlan) -> Verdict:
    if law.scope is not None:
        tuples, pass_outcome = law.scope(plan)
    else:
        tuples, pass_outcome = default_scope(law.spaces or (), plan)
    seed = plan.seed if plan.mode == SAMPLED else None
    window = plan.window if plan.mode == BOUNDED else None
    checked = 0
    for tup in tuples:
        checked += 1
        if not law.holds(*tup):
            return Verdict(
                law=law.name,
                outcome=FAILS,
                checked=checked,
                witness=tup,
                witness_text=law.format_witness(tup),
                seed=seed,
                window=window,
            )
    detail = "vacuous" if checked == 0 else ""
    return Verdict(
        law=law.name,
        outcome=pass_outcome,
        checked=checked,
        seed=seed,
        window=window,
        detail=detail,
    )


def check_laws(laws: Iterable[Law], plan: EnumerationPlan) -> list[Verdict]:
    return [check_law(law, plan) for law in laws]


def combine(name: str, verdicts: Sequence[Verdict]) -> Verdict:
    """Aggregate sub-verdicts: failures dominate, else the weakest evidence."""
    if not verdicts:
        return Verdict(law=name, outcome=HOLDS_EXHAUSTIVE, detail="vacuous")
    failing = [v for v in verdicts if v.outcome == FAILS]
    if failing:
        v = failing[0]
        return Verdict(
            law=name,
            outcome=FAILS,
            checked=sum(w.checked for w in verdicts),
            witness=v.witness,
            witness_text=v.witness_text,
            detail=f"{v.law}" + (f"; {v.detail}" if v.detail else ""),
            seed=v.seed,
            window=v.window,
        )
    worst = max(verdicts, key=lambda v: _OUTCOME_RANK[v.outcome])
    return Verdict(
        law=name,
        outcome=worst.outcome,
        checked=sum(w.checked for w in verdicts),
        detail="; ".join(sorted({v.law for v in verdicts})),
        seed=worst.seed,
        window=worst.window,
    )

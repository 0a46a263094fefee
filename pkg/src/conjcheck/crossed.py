"""Crossed-structure conditions and the internal graphs they generate.

A kernel map h: X -> B over a Schreier extension is graded by three
conditions: action equivariance of h, the Peiffer exchange law, and full
invertibility of the kernel.  Each grade unlocks a builder: reflexive graph,
internal category (composition m), internal groupoid (inversion t).
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable, Optional

from .core import (
    BOUNDED,
    EXHAUSTIVE,
    FAILS,
    HOLDS_BOUNDED,
    HOLDS_EXHAUSTIVE,
    HOLDS_SAMPLED,
    SAMPLED,
    CheckFailedError,
    ConditionFailedError,
    ConjStructure,
    EnumerationPlan,
    Hom,
    KindMismatchError,
    Law,
    PlanError,
    Verdict,
    check_law,
    check_laws,
    combine,
)
from .laws import hom_laws
from .schreier import ExternalAction, SchreierExtension, action_from_extension

LABEL_NONE = "none"
LABEL_PRECROSSED = "precrossed-semimodule"
LABEL_CROSSED = "crossed-semimodule"
LABEL_CROSSED_MODULE = "crossed-module"


@dataclass
class CrossedData:
    """Extension, kernel map h: X -> B, and the derived action."""

    e: SchreierExtension
    h: Hom
    phi: ExternalAction
    verdicts: dict = field(default_factory=dict)


def make_crossed(e: SchreierExtension, h: Hom, plan: Optional[EnumerationPlan] = None) -> CrossedData:
    plan = plan or e.plan
    if h.source is not e.X or h.target is not e.B:
        raise KindMismatchError("kernel map must go from the kernel to the base")
    hv = combine("hom(h)", check_laws(hom_laws(h), plan))
    if hv.failed:
        raise CheckFailedError(f"h is not a morphism: {hv.detail} at {hv.witness_text}", hv)
    phi = action_from_extension(e, plan)
    return CrossedData(e=e, h=h, phi=phi, verdicts={"hom.h": hv})


def check_equivariance(d: CrossedData, plan: EnumerationPlan) -> Verdict:
    """h(b.x) + b = b + h(x)."""
    B, X = d.e.B, d.e.X
    h, act = d.h.fn, d.phi.act
    law = Law(
        "crossed.equivariance",
        (B, X),
        lambda b, x: B.add(h(act(b, x)), b) == B.add(b, h(x)),
    )
    v = check_law(law, plan)
    d.verdicts["crossed.equivariance"] = v
    return v


def check_peiffer(d: CrossedData, plan: EnumerationPlan) -> Verdict:
    """h(y).x + y = y + x."""
    X = d.e.X
    h, act = d.h.fn, d.phi.act
    law = Law(
        "crossed.peiffer",
        (X, X),
        lambda x, y: X.add(act(h(y), x), y) == X.add(y, x),
    )
    v = check_law(law, plan)
    d.verdicts["crossed.peiffer"] = v
    return v


def _inverse_oracle(X: ConjStructure) -> tuple[Callable, str]:
    """Partial negation map: x -> inverse or None; plus an evidence note."""
    if X.partial_inverse is not None:
        return X.partial_inverse, ""
    if X.is_finite:
        if X.identity is None:
            return (lambda x: None), "no identity element"
        table = {}
        for x in X.elements:
            for y in X.elements:
                if X.add(x, y) == X.identity and X.add(y, x) == X.identity:
                    table[x] = y
                    break
        return table.get, ""
    # Bounded search within the sampled window; absence is only evidence.
    def search(x, _X=X):
        pool = [_X.sample(991, i) for i in range(64)] + list(_X.probes)
        if _X.identity is None:
            return None
        for y in pool:
            if _X.add(x, y) == _X.identity and _X.add(y, x) == _X.identity:
                return y
        return None

    return search, "inverse search bounded by the sample window"


def check_invertibility(d_or_X, plan: EnumerationPlan) -> Verdict:
    """The kernel is a group and negation exchanges with conjugation."""
    X = d_or_X if isinstance(d_or_X, ConjStructure) else d_or_X.e.X
    pinv, note = _inverse_oracle(X)
    laws = [
        Law("crossed.inverses", (X,), lambda x: pinv(x) is not None),
        Law(
            "crossed.negation-conj",
            (X,),
            lambda x: pinv(x) is not None
            and pinv(X.co(x)) is not None
            and pinv(X.co(x)) == X.co(pinv(x)),
        ),
    ]
    verdicts = check_laws(laws, plan)
    out = combine("crossed.invertibility", verdicts)
    if note and not out.failed:
        out = Verdict(
            law=out.law, outcome=out.outcome, checked=out.checked,
            detail=(out.detail + "; " + note).strip("; "), seed=out.seed, window=out.window,
        )
    if not isinstance(d_or_X, ConjStructure):
        d_or_X.verdicts["crossed.invertibility"] = out
    return out


@dataclass
class Classification:
    label: str
    equivariance: Verdict
    peiffer: Verdict
    invertibility: Verdict

    @property
    def verdicts(self) -> dict:
        return {
            "crossed.equivariance": self.equivariance,
            "crossed.peiffer": self.peiffer,
            "crossed.invertibility": self.invertibility,
        }


def classify(d: CrossedData, plan: EnumerationPlan) -> Classification:
    """Grade the kernel map; all three conditions are always evaluated."""
    c1 = check_equivariance(d, plan)
    c2 = check_peiffer(d, plan)
    c3 = check_invertibility(d, plan)
    if c1.failed:
        label = LABEL_NONE
    elif c2.failed:
        label = LABEL_PRECROSSED
    elif c3.failed:
        label = LABEL_CROSSED
    else:
        label = LABEL_CROSSED_MODULE
    return Classification(label, c1, c2, c3)


# -- reflexive graph -----------------------------------------------------------


@dataclass
class ReflexiveGraph:
    arrows: ConjStructure
    objects: ConjStructure
    dom: Hom
    cod: Hom
    unit: Hom
    verdicts: dict = field(default_factory=dict)


def codomain_map(d: CrossedData) -> Hom:
    """cod(a) = h(q(a)) + f(a); the unique morphism over h and the section."""
    e = d.e
    h, q, f, B = d.h.fn, e.q, e.f.fn, e.B
    return Hom(e.A, e.B, lambda a: B.add(h(q(a)), f(a)), name="cod")


def build_reflexive_graph(d: CrossedData, plan: EnumerationPlan) -> ReflexiveGraph:
    c1 = d.verdicts.get("crossed.equivariance") or check_equivariance(d, plan)
    if c1.failed:
        raise ConditionFailedError("equivariance", c1)
    e = d.e
    cod = codomain_map(d)
    laws = hom_laws(cod) + [
        Law("graph.cod-kernel", (e.X,), lambda x: cod.fn(e.k.fn(x)) == d.h.fn(x)),
        Law("graph.cod-unit", (e.B,), lambda b: cod.fn(e.r.fn(b)) == b),
        Law("graph.dom-unit", (e.B,), lambda b: e.f.fn(e.r.fn(b)) == b),
    ]
    verdict = combine("reflexive-graph", check_laws(laws, plan))
    if verdict.failed:
        raise CheckFailedError(f"graph laws fail: {verdict.detail} at {verdict.witness_text}", verdict)
    return ReflexiveGraph(
        arrows=e.A, objects=e.B, dom=e.f, cod=cod, unit=e.r,
        verdicts={"reflexive-graph": verdict, "crossed.equivariance": c1},
    )


def unique_codomain_maps(d: CrossedData) -> list:
    """All structure maps A -> B restricting to h on the kernel and to the
    identity on the section; finite carriers, small search spaces only."""
    e = d.e
    A, B, X = e.A, e.B, e.X
    if not (A.is_finite and B.is_finite and X.is_finite):
        raise PlanError("uniqueness search needs finite carriers")
    fixed = {}
    for x in X.elements:
        fixed[e.k.fn(x)] = d.h.fn(x)
    for b in B.elements:
        a = e.r.fn(b)
        if a in fixed and fixed[a] != b:
            return []
        fixed[a] = b
    free = [a for a in A.elements if a not in fixed]
    if len(B.elements) ** len(free) > 100_000:
        raise PlanError("uniqueness search space too large")
    from itertools import product as _product

    found = []
    for choice in _product(B.elements, repeat=len(free)):
        table = dict(fixed)
        table.update(zip(free, choice))
        ok = all(
            table[A.add(a, a2)] == B.add(table[a], table[a2])
            for a in A.elements
            for a2 in A.elements
        ) and all(table[A.co(a)] == B.co(table[a]) for a in A.elements)
        if ok and table[A.identity] == B.identity:
            found.append(table)
    return found


# -- internal category ---------------------------------------------------------


def _chain_scope(e: SchreierExtension, cod: Callable, length: int, plan: EnumerationPlan):
    """Composable chains (a_1, ..., a_n) with dom(a_i) = cod(a_{i+1}).

    Finite and bounded modes filter the product; sampled mode rebuilds each
    chain from kernel decompositions, which is exact when (f, r) is Schreier.
    """
    A, X = e.A, e.X
    f = e.f.fn

    def chains_from(pool):
        def extend(chain):
            if len(chain) == length:
                yield tuple(chain)
                return
            for a in pool:
                if not chain or f(chain[-1]) == cod(a):
                    yield from extend(chain + [a])

        yield from extend([])

    if plan.mode == EXHAUSTIVE:
        if not A.is_finite:
            raise PlanError(f"exhaustive plan on infinite carrier {A.name}")
        return chains_from(A.elements), HOLDS_EXHAUSTIVE
    if plan.mode == BOUNDED:
        return chains_from(A.prefix(plan.window)), HOLDS_BOUNDED

    def sampled():
        for i in range(plan.count):
            base = i * length
            chain = [A.sample(plan.seed, base)]
            for j in range(1, length):
                x = X.sample(plan.seed, base + j)
                chain.append(A.add(e.k.fn(x), e.r.fn(cod(chain[-1]))))
            chain.reverse()
            yield tuple(chain)

    return sampled(), HOLDS_SAMPLED


@dataclass
class InternalCategory:
    graph: ReflexiveGraph
    compose: Callable
    extension: SchreierExtension
    verdicts: dict = field(default_factory=dict)

    def composable_pairs(self, plan: EnumerationPlan):
        return _chain_scope(self.extension, self.graph.cod.fn, 2, plan)[0]


def check_kernel_condition(d: CrossedData, plan: EnumerationPlan) -> Verdict:
    """k(cod(a).x) + a = a + k(x); equivalent to the Peiffer law."""
    e = d.e
    cod = codomain_map(d).fn
    act = d.phi.act
    law = Law(
        "crossed.kernel-slide",
        (e.A, e.X),
        lambda a, x: e.A.add(e.k.fn(act(cod(a), x)), a) == e.A.add(a, e.k.fn(x)),
    )
    v = check_law(law, plan)
    d.verdicts["crossed.kernel-slide"] = v
    return v


def build_internal_category(d: CrossedData, plan: EnumerationPlan) -> InternalCategory:
    c2 = d.verdicts.get("crossed.peiffer") or check_peiffer(d, plan)
    if c2.failed:
        raise ConditionFailedError("peiffer", c2)
    graph = build_reflexive_graph(d, plan)
    e = d.e
    A = e.A
    cod = graph.cod.fn

    def m(a, a2):
        return A.add(e.k.fn(e.q(a)), a2)

    def pair_scope(p):
        return _chain_scope(e, cod, 2, p)

    def pairpair_scope(p):
        inner, outcome = _chain_scope(e, cod, 2, p)
        if p.mode == SAMPLED:
            def gen():
                shifted = EnumerationPlan.sampled(p.count, p.seed + 7919)
                other = _chain_scope(e, cod, 2, shifted)[0]
                for left, right in zip(inner, other):
                    yield (left, right)
            return gen(), outcome
        pairs = list(inner)
        return ((l, r) for l in pairs for r in pairs), outcome

    def triple_scope(p):
        return _chain_scope(e, cod, 3, p)

    def fmt_pair(tup):
        return "(" + ", ".join(A.fmt(a) for a in tup) + ")"

    laws = [
        Law("category.left-unit", (A,), lambda a: m(a, e.r.fn(e.f.fn(a))) == a),
        Law("category.right-unit", (A,), lambda a2: m(e.r.fn(cod(a2)), a2) == a2),
        Law(
            "category.dom-cod",
            None,
            lambda a, a2: e.f.fn(m(a, a2)) == e.f.fn(a2) and cod(m(a, a2)) == cod(a),
            scope=pair_scope,
            fmt=fmt_pair,
        ),
        Law(
            "category.compose-conj",
            None,
            lambda a, a2: m(A.co(a), A.co(a2)) == A.co(m(a, a2)),
            scope=pair_scope,
            fmt=fmt_pair,
        ),
        Law(
            "category.compose-additive",
            None,
            lambda left, right: m(A.add(left[0], right[0]), A.add(left[1], right[1]))
            == A.add(m(*left), m(*right)),
            scope=pairpair_scope,
            fmt=lambda tup: "(" + fmt_pair(tup[0]) + ", " + fmt_pair(tup[1]) + ")",
        ),
        Law(
            "category.assoc",
            None,
            lambda a, a2, a3: m(m(a, a2), a3) == m(a, m(a2, a3)),
            scope=triple_scope,
            fmt=fmt_pair,
        ),
    ]
    verdicts = check_laws(laws, plan)
    verdicts.append(check_kernel_condition(d, plan))
    verdict = combine("internal-category", verdicts)
    if verdict.failed:
        raise CheckFailedError(
            f"category laws fail: {verdict.detail} at {verdict.witness_text}", verdict
        )
    cat = InternalCategory(graph=graph, compose=m, extension=e)
    cat.verdicts.update(graph.verdicts)
    cat.verdicts["internal-category"] = verdict
    return cat


# -- internal groupoid -----------------------------------------------------------


def _total_negation(X: ConjStructure) -> Callable:
    pinv, _ = _inverse_oracle(X)

    def neg(x):
        y = pinv(x)
        if y is None:
            raise ConditionFailedError("invertibility")
        return y

    return neg


@dataclass
class InternalGroupoid:
    category: InternalCategory
    invert: Callable
    verdicts: dict = field(default_factory=dict)


def build_groupoid(d: CrossedData, plan: EnumerationPlan) -> InternalGroupoid:
    c3 = d.verdicts.get("crossed.invertibility") or check_invertibility(d, plan)
    if c3.failed:
        raise ConditionFailedError("invertibility", c3)
    cat = build_internal_category(d, plan)
    e = d.e
    A, B, X = e.A, e.B, e.X
    cod = cat.graph.cod.fn
    m = cat.compose
    neg = _total_negation(X)

    def t(a):
        return A.add(e.k.fn(neg(e.q(a))), e.r.fn(cod(a)))

    invert_hom = Hom(A, A, t, name="t")
    laws = hom_laws(invert_hom) + [
        Law("groupoid.right-inverse", (A,), lambda a: m(a, t(a)) == e.r.fn(cod(a))),
        Law("groupoid.left-inverse", (A,), lambda a: m(t(a), a) == e.r.fn(e.f.fn(a))),
        Law("groupoid.swap-dom", (A,), lambda a: e.f.fn(t(a)) == cod(a)),
        Law("groupoid.swap-cod", (A,), lambda a: cod(t(a)) == e.f.fn(a)),
        Law("groupoid.involution", (A,), lambda a: t(t(a)) == a),
        Law("groupoid.unit-fixed", (B,), lambda b: t(e.r.fn(b)) == e.r.fn(b)),
    ]
    verdict = combine("internal-groupoid", check_laws(laws, plan))
    if verdict.failed:
        raise CheckFailedError(
            f"groupoid laws fail: {verdict.detail} at {verdict.witness_text}", verdict
        )
    gpd = InternalGroupoid(category=cat, invert=t)
    gpd.verdicts.update(cat.verdicts)
    gpd.verdicts["internal-groupoid"] = verdict
    gpd.verdicts["crossed.invertibility"] = c3
    return gpd

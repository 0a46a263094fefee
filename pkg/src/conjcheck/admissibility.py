"""Admissibility of split-epi cospans over a common base.

A diagram of two split epimorphisms f: A -> B (section r) and g: C -> B
(section s) together with a compatible cospan alpha/beta/gamma into D is
admissible when a unique structure map phi on the pullback A x_B C restricts
to alpha along e1 = (1, sf) and to gamma along e2 = (rg, 1).  This module
carries the two-law criterion for that, a brute-force oracle for finite
carriers, pointwise commutation checks for kernels, and the harness that
compares relation commutation with commutation of normalizations.
"""
from __future__ import annotations

from dataclasses import dataclass, field, replace
from itertools import product
from typing import Callable, Optional

from .core import (
    BOUNDED,
    EXHAUSTIVE,
    FAILS,
    HOLDS_BOUNDED,
    HOLDS_EXHAUSTIVE,
    HOLDS_SAMPLED,
    SAMPLED,
    CarrierTooLargeError,
    CheckFailedError,
    ConjStructure,
    EnumerationPlan,
    Hom,
    HuqFailedError,
    KindMismatchError,
    Law,
    PlanError,
    Verdict,
    check_law,
    check_laws,
    combine,
    compose_homs,
    direct_product_structure,
    identity_hom,
    substructure,
    zero_hom,
)
from .laws import hom_laws
from .schreier import SchreierExtension, find_schreier_retraction

ORACLE_BOUND = 10_000


@dataclass
class AdmissibilityDiagram:
    """Split epis f: A->B (section r) and g: C->B (section s) with a cospan
    alpha: A->D, beta: B->D, gamma: C->D satisfying alpha r = beta = gamma s.

    kernel_f/q_f (and kernel_g/q_g) carry Schreier data when available; the
    f-side pair is what makes sampled composable scopes possible.
    """

    A: ConjStructure
    B: ConjStructure
    C: ConjStructure
    D: ConjStructure
    f: Hom
    r: Hom
    g: Hom
    s: Hom
    alpha: Hom
    beta: Hom
    gamma: Hom
    kernel_f: Optional[Hom] = None
    q_f: Optional[Callable] = None
    kernel_g: Optional[Hom] = None
    q_g: Optional[Callable] = None
    name: str = "diagram"

    def e1(self, a):
        return (a, self.s.fn(self.f.fn(a)))

    def e2(self, c):
        return (self.r.fn(self.g.fn(c)), c)

    def is_finite(self) -> bool:
        return self.A.is_finite and self.C.is_finite


def verify_diagram(d: AdmissibilityDiagram, plan: EnumerationPlan) -> Verdict:
    """Morphism checks plus the splitting and cospan-compatibility identities."""
    verdicts = []
    for h in (d.f, d.r, d.g, d.s, d.alpha, d.beta, d.gamma):
        verdicts.extend(check_laws(hom_laws(h), plan))
    glue = [
        Law("diagram.f-split", (d.B,), lambda b: d.f.fn(d.r.fn(b)) == b),
        Law("diagram.g-split", (d.B,), lambda b: d.g.fn(d.s.fn(b)) == b),
        Law("diagram.left-compat", (d.B,), lambda b: d.alpha.fn(d.r.fn(b)) == d.beta.fn(b)),
        Law("diagram.right-compat", (d.B,), lambda b: d.gamma.fn(d.s.fn(b)) == d.beta.fn(b)),
        Law("diagram.injection-agree", (d.B,), lambda b: d.e1(d.r.fn(b)) == d.e2(d.s.fn(b))),
    ]
    verdicts.extend(check_laws(glue, plan))
    return combine("diagram", verdicts)


def attach_schreier_data(
    d: AdmissibilityDiagram, plan: Optional[EnumerationPlan] = None
) -> AdmissibilityDiagram:
    """Derive kernel inclusions and retractions for both split legs.

    Finite carriers only: the kernels are cut out by scanning and each
    retraction is certified by the usual unique-decomposition search."""
    if d.kernel_f is not None and d.q_f is not None and d.kernel_g is not None:
        return d
    if not d.is_finite() or not d.B.is_finite:
        raise PlanError(f"{d.name}: deriving Schreier data needs finite carriers")
    plan = plan or EnumerationPlan.exhaustive()

    def leg(total: ConjStructure, fh: Hom, rh: Hom) -> tuple[Hom, Callable]:
        members = [a for a in total.elements if fh.fn(a) == d.B.identity]
        K = substructure(total, members, name=f"ker({fh.name or 'f'})")
        k = Hom(K, total, lambda x: x, name="incl")
        return k, find_schreier_retraction(k, fh, rh, plan).q

    kf, qf = (d.kernel_f, d.q_f) if d.kernel_f is not None and d.q_f is not None else leg(d.A, d.f, d.r)
    kg, qg = (d.kernel_g, d.q_g) if d.kernel_g is not None else leg(d.C, d.g, d.s)
    return replace(d, kernel_f=kf, q_f=qf, kernel_g=kg, q_g=qg)


def composable_scope(d: AdmissibilityDiagram, plan: EnumerationPlan):
    """Pairs (a, c) with f(a) = g(c); sampled mode rebuilds the a-side from a
    kernel decomposition so every drawn pair is composable."""
    f, g = d.f.fn, d.g.fn
    if plan.mode == EXHAUSTIVE:
        if not d.is_finite():
            raise PlanError(f"{d.name}: exhaustive plan on infinite carriers")
        pairs = [(a, c) for a in d.A.elements for c in d.C.elements if f(a) == g(c)]
        return iter(pairs), HOLDS_EXHAUSTIVE
    if plan.mode == BOUNDED:
        pa, pc = d.A.prefix(plan.window), d.C.prefix(plan.window)
        return iter([(a, c) for a in pa for c in pc if f(a) == g(c)]), HOLDS_BOUNDED
    if d.kernel_f is None:
        raise PlanError(f"{d.name}: sampled composable pairs need f-side kernel data")
    X = d.kernel_f.source

    def gen():
        for i in range(plan.count):
            x = X.sample(plan.seed, 2 * i)
            c = d.C.sample(plan.seed, 2 * i + 1)
            a = d.A.add(d.kernel_f.fn(x), d.r.fn(g(c)))
            yield (a, c)

    return gen(), HOLDS_SAMPLED


def _pairs_of_composable(d: AdmissibilityDiagram, plan: EnumerationPlan):
    inner, outcome = composable_scope(d, plan)
    if plan.mode == SAMPLED:
        def gen():
            other = composable_scope(d, EnumerationPlan.sampled(plan.count, plan.seed + 7919))[0]
            for left, right in zip(inner, other):
                yield (left, right)

        return gen(), outcome
    pairs = list(inner)
    return ((l, r) for l in pairs for r in pairs), outcome


# -- pullback -------------------------------------------------------------------


@dataclass
class PullbackObject:
    carrier: ConjStructure
    diagram: AdmissibilityDiagram
    p1: Hom
    p2: Hom

    def e1(self, a):
        return self.diagram.e1(a)

    def e2(self, c):
        return self.diagram.e2(c)


def build_pullback(d: AdmissibilityDiagram) -> PullbackObject:
    """Componentwise structure on {(a, c) : f(a) = g(c)}; materialized when
    both legs are finite, predicate-backed otherwise."""
    A, C = d.A, d.C
    f, g = d.f.fn, d.g.fn
    kind = "monoid" if A.kind == "monoid" and C.kind == "monoid" else "semigroup"
    identity = None
    if kind == "monoid":
        if f(A.identity) != g(C.identity):
            raise KindMismatchError(f"{d.name}: identities do not share a base image")
        identity = (A.identity, C.identity)

    elements = None
    if d.is_finite():
        elements = tuple((a, c) for a in A.elements for c in C.elements if f(a) == g(c))

    def op(p, q2):
        return (A.add(p[0], q2[0]), C.add(p[1], q2[1]))

    def co(p):
        return (A.co(p[0]), C.co(p[1]))

    def contains(p):
        if not (isinstance(p, tuple) and len(p) == 2):
            return False
        ok_a = A.contains(p[0]) if A.contains else True
        ok_c = C.contains(p[1]) if C.contains else True
        return ok_a and ok_c and f(p[0]) == g(p[1])

    sampler = None
    if elements is None and d.kernel_f is not None:
        X = d.kernel_f.source

        def sampler(seed, index):
            x = X.sample(seed, 2 * index)
            c = C.sample(seed, 2 * index + 1)
            return (A.add(d.kernel_f.fn(x), d.r.fn(g(c))), c)

    probes = tuple(d.e1(a) for a in A.probes) + tuple(d.e2(c) for c in C.probes)
    carrier = ConjStructure(
        name=f"{A.name} *_{d.B.name} {C.name}",
        kind=kind,
        op=op,
        co=co,
        identity=identity,
        elements=elements,
        sampler=sampler,
        probes=probes,
        contains=contains,
        components=(A, C),
        codec="pair",
    )
    p1 = Hom(carrier, A, lambda p: p[0], name="p1")
    p2 = Hom(carrier, C, lambda p: p[1], name="p2")
    return PullbackObject(carrier=carrier, diagram=d, p1=p1, p2=p2)


# -- brute-force oracle -----------------------------------------------------------


@dataclass
class OracleResult:
    admissible: bool
    phi: Optional[dict]
    reason: str
    verdict: Verdict


def _propagate(P: PullbackObject, seeds: dict, fmt: Callable) -> tuple[Optional[dict], str]:
    """Close the forced assignments under sums and conjugation.

    Returns (assignment, "") when consistent, (None, reason) on a conflict,
    and (partial, reason) when the seeds do not generate the pullback.
    """
    S, D = P.carrier, P.diagram.D
    index = {S.key(p): p for p in S.elements}
    assigned: dict = {}
    order: list = []

    def put(p, v):
        kp = S.key(p)
        if kp not in index:
            raise CheckFailedError(f"{P.diagram.name}: propagation left the pullback at {fmt(p)}")
        if kp in assigned:
            if assigned[kp] != v:
                return False
        else:
            assigned[kp] = v
            order.append(kp)
        return True

    for p, v in seeds.items():
        if not put(p, v):
            return None, f"forced value conflict at {fmt(p)}"
    head = 0
    while head < len(order):
        kp = order[head]
        head += 1
        p, vp = index[kp], assigned[kp]
        if not put(S.co(p), D.co(vp)):
            return None, f"conjugation forces a conflict at {fmt(S.co(p))}"
        for kq in list(order):
            q2, vq = index[kq], assigned[kq]
            if not put(S.add(p, q2), D.add(vp, vq)):
                return None, f"additivity forces a conflict at {fmt(S.add(p, q2))}"
            if not put(S.add(q2, p), D.add(vq, vp)):
                return None, f"additivity forces a conflict at {fmt(S.add(q2, p))}"
    table = {index[kp]: v for kp, v in assigned.items()}
    if len(assigned) < len(S.elements):
        missing = next(p for p in S.elements if S.key(p) not in assigned)
        return table, f"pullback not generated by the injections (free at {fmt(missing)})"
    return table, ""


def check_admissible_oracle(d: AdmissibilityDiagram, bound: int = ORACLE_BOUND) -> OracleResult:
    """Decide unique existence of phi by constraint propagation on the finite
    pullback: e1/e2 images are forced, sums and conjugates of known values
    follow, and any unreached element is an explicit uniqueness failure."""
    if not d.is_finite():
        raise PlanError(f"{d.name}: the oracle needs finite carriers")
    P = build_pullback(d)
    n = len(P.carrier.elements)
    if n > bound:
        raise CarrierTooLargeError(f"{d.name}: pullback has {n} > {bound} elements")
    fmt = P.carrier.fmt

    def fail(reason, witness_text="") -> OracleResult:
        v = Verdict(
            law="admissibility.oracle", outcome=FAILS, checked=n,
            witness_text=witness_text, detail=reason,
        )
        return OracleResult(False, None, reason, v)

    seeds: dict = {}
    for a in d.A.elements:
        p = d.e1(a)
        if p in seeds and seeds[p] != d.alpha.fn(a):
            return fail(f"e1 forces two values at {fmt(p)}", fmt(p))
        seeds[p] = d.alpha.fn(a)
    for c in d.C.elements:
        p = d.e2(c)
        want = d.gamma.fn(c)
        if p in seeds and seeds[p] != want:
            return fail(f"e1/e2 restrictions clash at {fmt(p)}", fmt(p))
        seeds[p] = want

    table, reason = _propagate(P, seeds, fmt)
    if table is None:
        return fail(reason)
    if reason:
        return fail(reason)

    D = d.D
    for p in P.carrier.elements:
        if table[P.carrier.co(p)] != D.co(table[p]):
            return fail(f"phi does not preserve conjugation at {fmt(p)}", fmt(p))
    for p in P.carrier.elements:
        for q2 in P.carrier.elements:
            if table[P.carrier.add(p, q2)] != D.add(table[p], table[q2]):
                return fail(
                    f"phi is not additive at ({fmt(p)}, {fmt(q2)})",
                    f"({fmt(p)}, {fmt(q2)})",
                )
    if P.carrier.kind == "monoid" and table[P.carrier.identity] != D.identity:
        return fail("phi does not preserve the identity")
    v = Verdict(law="admissibility.oracle", outcome=HOLDS_EXHAUSTIVE, checked=n)
    return OracleResult(True, table, "", v)


def generated_by_injections(d: AdmissibilityDiagram) -> bool:
    """Whether e1/e2 images generate the whole finite pullback."""
    P = build_pullback(d)
    seeds = {d.e1(a): d.alpha.fn(a) for a in d.A.elements}
    seeds.update({d.e2(c): d.gamma.fn(c) for c in d.C.elements})
    table, reason = _propagate(P, seeds, P.carrier.fmt)
    return table is not None and not reason.startswith("pullback not generated")


# -- the two-law criterion ---------------------------------------------------------


def _translation_solver(D: ConjStructure) -> Callable:
    """Solutions x of x + t = rhs; at most one exists under cancellation."""

    def solve(t, rhs):
        if D.is_finite:
            return [x for x in D.elements if D.add(x, t) == rhs]
        if D.negate is not None:
            x = D.add(rhs, D.negate(t))
            return [x] if D.add(x, t) == rhs else []
        if D.identity is not None and t == D.identity:
            return [rhs]
        if D.partial_inverse is not None:
            inv = D.partial_inverse(t)
            if inv is not None:
                x = D.add(rhs, inv)
                return [x] if D.add(x, t) == rhs else []
        raise PlanError(f"{D.name}: cannot solve translation equations")

    return solve


@dataclass
class CriterionResult:
    verdict: Verdict
    phi: Optional[Callable]
    verdicts: dict = field(default_factory=dict)


def check_admissibility_criterion(d: AdmissibilityDiagram, plan: EnumerationPlan) -> CriterionResult:
    """Unique solvability per composable pair plus additivity of the displayed
    combination over pairs of composable pairs; on pass the solution map is
    the induced phi."""
    D = d.D
    alpha, beta, gamma, f = d.alpha.fn, d.beta.fn, d.gamma.fn, d.f.fn
    solve = _translation_solver(D)

    def parts(a, c):
        w = beta(f(a))
        t = D.add(D.co(w), w)
        rhs = D.add(alpha(a), D.add(D.co(w), gamma(c)))
        return t, rhs

    def unique(a, c):
        t, rhs = parts(a, c)
        return len(solve(t, rhs)) == 1

    def phi(a, c):
        t, rhs = parts(a, c)
        sols = solve(t, rhs)
        if len(sols) != 1:
            raise CheckFailedError(
                f"{d.name}: no unique solution at ({d.A.fmt(a)}, {d.C.fmt(c)})"
            )
        return sols[0]

    def fmt_pair(tup):
        return f"({d.A.fmt(tup[0])}, {d.C.fmt(tup[1])})"

    def additivity(left, right):
        a1, c1 = left
        a2, c2 = right
        b1, b2 = f(a1), f(a2)
        w = beta(d.B.add(b1, b2))
        lhs = D.add(alpha(d.A.add(a1, a2)), D.add(D.co(w), gamma(d.C.add(c1, c2))))
        w1, w2 = beta(b1), beta(b2)
        rhs = D.add(
            D.add(alpha(a1), D.add(D.co(w1), gamma(c1))),
            D.add(alpha(a2), D.add(D.co(w2), gamma(c2))),
        )
        return lhs == rhs

    laws = [
        Law(
            "admissibility.unique-solution",
            None,
            unique,
            scope=lambda p: composable_scope(d, p),
            fmt=fmt_pair,
        ),
        Law(
            "admissibility.additivity",
            None,
            additivity,
            scope=lambda p: _pairs_of_composable(d, p),
            fmt=lambda tup: "(" + fmt_pair(tup[0]) + ", " + fmt_pair(tup[1]) + ")",
        ),
    ]
    verdicts = {v.law: v for v in check_laws(laws, plan)}
    core_pass = all(v.passed for v in verdicts.values())
    if core_pass:
        restrictions = [
            Law(
                "admissibility.left-restriction",
                (d.A,),
                lambda a: phi(*d.e1(a)) == alpha(a),
            ),
            Law(
                "admissibility.right-restriction",
                (d.C,),
                lambda c: phi(*d.e2(c)) == gamma(c),
            ),
        ]
        verdicts.update({v.law: v for v in check_laws(restrictions, plan)})
    out = combine("admissibility.criterion", list(verdicts.values()))
    return CriterionResult(verdict=out, phi=phi if core_pass else None, verdicts=verdicts)


@dataclass
class AgreementReport:
    oracle: OracleResult
    criterion: CriterionResult
    agreement: Verdict


def compare_oracle_and_criterion(
    d: AdmissibilityDiagram, plan: Optional[EnumerationPlan] = None
) -> AgreementReport:
    """Run both deciders on a finite diagram and compare outcomes pointwise."""
    plan = plan or EnumerationPlan.exhaustive()
    oracle = check_admissible_oracle(d)
    criterion = check_admissibility_criterion(d, plan)
    agree = oracle.admissible == criterion.verdict.passed
    detail = ""
    if agree and oracle.admissible:
        P = build_pullback(d)
        for (a, c) in P.carrier.elements:
            if criterion.phi(a, c) != oracle.phi[(a, c)]:
                agree = False
                detail = f"phi mismatch at ({d.A.fmt(a)}, {d.C.fmt(c)})"
                break
    elif not agree:
        detail = (
            f"oracle {'admissible' if oracle.admissible else 'not admissible'} "
            f"but criterion {criterion.verdict.outcome}"
        )
    v = Verdict(
        law="admissibility.agreement",
        outcome=HOLDS_EXHAUSTIVE if agree else FAILS,
        checked=oracle.verdict.checked + criterion.verdict.checked,
        detail=detail or ("both admissible" if oracle.admissible else "both refuse"),
    )
    return AgreementReport(oracle=oracle, criterion=criterion, agreement=v)


# -- kernel commutation -------------------------------------------------------------


def check_huq_commute(k1: Hom, k2: Hom, plan: EnumerationPlan) -> Verdict:
    """Pointwise commutation of the two images in the shared target."""
    if k1.target is not k2.target:
        raise KindMismatchError("commutation check needs a shared target")
    T = k1.target
    law = Law(
        "huq.pointwise",
        (k1.source, k2.source),
        lambda x, y: T.add(k1.fn(x), k2.fn(y)) == T.add(k2.fn(y), k1.fn(x)),
        fmt=lambda tup: f"({k1.source.fmt(tup[0])}, {k2.source.fmt(tup[1])})",
    )
    return check_law(law, plan)


@dataclass
class InducedResult:
    verdict: Verdict
    phi: Callable
    huq: Verdict


def check_commuting_kernels(d: AdmissibilityDiagram, plan: EnumerationPlan) -> InducedResult:
    """If alpha.k and gamma.l commute pointwise, phi(a, c) = alpha(k(q_f(a))) + gamma(c)
    is the unique structure map restricting to alpha and gamma."""
    if d.kernel_f is None or d.q_f is None or d.kernel_g is None:
        raise PlanError(f"{d.name}: both kernels (and the f-side retraction) are required")
    ak = compose_homs(d.alpha, d.kernel_f, name="alpha.k")
    gl = compose_homs(d.gamma, d.kernel_g, name="gamma.l")
    huq = check_huq_commute(ak, gl, plan)
    if huq.failed:
        raise HuqFailedError(
            f"{d.name}: kernel images do not commute at {huq.witness_text}", huq
        )
    D = d.D

    def phi(a, c):
        return D.add(d.alpha.fn(d.kernel_f.fn(d.q_f(a))), d.gamma.fn(c))

    def fmt_pair(tup):
        return f"({d.A.fmt(tup[0])}, {d.C.fmt(tup[1])})"

    laws = [
        Law(
            "induced.additive",
            None,
            lambda left, right: phi(d.A.add(left[0], right[0]), d.C.add(left[1], right[1]))
            == D.add(phi(*left), phi(*right)),
            scope=lambda p: _pairs_of_composable(d, p),
            fmt=lambda tup: "(" + fmt_pair(tup[0]) + ", " + fmt_pair(tup[1]) + ")",
        ),
        Law(
            "induced.conj",
            None,
            lambda a, c: phi(d.A.co(a), d.C.co(c)) == D.co(phi(a, c)),
            scope=lambda p: composable_scope(d, p),
            fmt=fmt_pair,
        ),
        Law("induced.left-restriction", (d.A,), lambda a: phi(*d.e1(a)) == d.alpha.fn(a)),
        Law("induced.right-restriction", (d.C,), lambda c: phi(*d.e2(c)) == d.gamma.fn(c)),
    ]
    verdicts = [huq] + check_laws(laws, plan)
    return InducedResult(verdict=combine("commuting-kernels", verdicts), phi=phi, huq=huq)


def _schreier_action(d: AdmissibilityDiagram) -> Callable:
    k, r, q = d.kernel_f.fn, d.r.fn, d.q_f

    def act(b, x):
        return q(d.A.add(r(b), k(x)))

    return act


@dataclass
class ThreeWayReport:
    restricts_both: Verdict
    restricts_kernel: Verdict
    action_identity: Verdict
    agreement: Verdict

    @property
    def verdicts(self) -> dict:
        return {
            "three-way.restricts-both": self.restricts_both,
            "three-way.restricts-kernel": self.restricts_kernel,
            "three-way.action-identity": self.action_identity,
            "three-way.agreement": self.agreement,
        }


def _oracle_existence_verdict(d: AdmissibilityDiagram, seeds: dict, law: str) -> Verdict:
    P = build_pullback(d)
    n = len(P.carrier.elements)
    if n > ORACLE_BOUND:
        raise CarrierTooLargeError(f"{d.name}: pullback has {n} > {ORACLE_BOUND} elements")
    fmt = P.carrier.fmt
    table, reason = _propagate(P, seeds, fmt)
    if table is None:
        return Verdict(law=law, outcome=FAILS, checked=n, detail=reason)
    if reason:
        return Verdict(law=law, outcome=FAILS, checked=n, detail=reason)
    D = d.D
    for p in P.carrier.elements:
        if table[P.carrier.co(p)] != D.co(table[p]):
            return Verdict(law=law, outcome=FAILS, checked=n,
                           witness_text=fmt(p), detail="conjugation not preserved")
        for q2 in P.carrier.elements:
            if table[P.carrier.add(p, q2)] != D.add(table[p], table[q2]):
                return Verdict(law=law, outcome=FAILS, checked=n,
                               witness_text=f"({fmt(p)}, {fmt(q2)})", detail="not additive")
    return Verdict(law=law, outcome=HOLDS_EXHAUSTIVE, checked=n)


def check_three_way(d: AdmissibilityDiagram, plan: EnumerationPlan) -> ThreeWayReport:
    """Three equivalent readings of admissibility over a Schreier f-side:
    a phi restricting along both injections, a phi restricting along the
    kernel injection only, and the action-twisted commutation identity."""
    if d.kernel_f is None or d.q_f is None:
        raise PlanError(f"{d.name}: Schreier data on the f-side is required")
    X = d.kernel_f.source
    act = _schreier_action(d)
    ak = compose_homs(d.alpha, d.kernel_f, name="alpha.k")
    D = d.D

    if d.is_finite():
        seeds_both = {d.e1(a): d.alpha.fn(a) for a in d.A.elements}
        for c in d.C.elements:
            seeds_both[d.e2(c)] = d.gamma.fn(c)
        vi = _oracle_existence_verdict(d, seeds_both, "three-way.restricts-both")
        seeds_kernel = {(d.kernel_f.fn(x), d.C.identity): ak.fn(x) for x in X.elements}
        for c in d.C.elements:
            seeds_kernel[d.e2(c)] = d.gamma.fn(c)
        vii = _oracle_existence_verdict(d, seeds_kernel, "three-way.restricts-kernel")
    else:
        def phi(a, c):
            return D.add(ak.fn(d.q_f(a)), d.gamma.fn(c))

        def fmt_pair(tup):
            return f"({d.A.fmt(tup[0])}, {d.C.fmt(tup[1])})"

        shared = [
            Law(
                "candidate.additive",
                None,
                lambda left, right: phi(d.A.add(left[0], right[0]), d.C.add(left[1], right[1]))
                == D.add(phi(*left), phi(*right)),
                scope=lambda p: _pairs_of_composable(d, p),
                fmt=lambda tup: "(" + fmt_pair(tup[0]) + ", " + fmt_pair(tup[1]) + ")",
            ),
            Law(
                "candidate.conj",
                None,
                lambda a, c: phi(d.A.co(a), d.C.co(c)) == D.co(phi(a, c)),
                scope=lambda p: composable_scope(d, p),
                fmt=fmt_pair,
            ),
            Law("candidate.right-restriction", (d.C,), lambda c: phi(*d.e2(c)) == d.gamma.fn(c)),
        ]
        both = shared + [
            Law("candidate.left-restriction", (d.A,), lambda a: phi(*d.e1(a)) == d.alpha.fn(a)),
        ]
        kernel_only = shared + [
            Law(
                "candidate.kernel-restriction",
                (X,),
                lambda x: phi(d.kernel_f.fn(x), d.C.identity) == ak.fn(x),
            ),
        ]
        vi = combine("three-way.restricts-both", check_laws(both, plan))
        vii = combine("three-way.restricts-kernel", check_laws(kernel_only, plan))

    viii = check_law(
        Law(
            "three-way.action-identity",
            (X, d.C),
            lambda x, c: D.add(ak.fn(act(d.g.fn(c), x)), d.gamma.fn(c))
            == D.add(d.gamma.fn(c), ak.fn(x)),
            fmt=lambda tup: f"({X.fmt(tup[0])}, {d.C.fmt(tup[1])})",
        ),
        plan,
    )
    flags = {vi.failed, vii.failed, viii.failed}
    detail = (
        f"restricts-both={vi.outcome}, restricts-kernel={vii.outcome}, "
        f"action-identity={viii.outcome}"
    )
    agreement = Verdict(
        law="three-way.agreement",
        outcome=HOLDS_EXHAUSTIVE if len(flags) == 1 else FAILS,
        checked=vi.checked + vii.checked + viii.checked,
        detail=detail,
    )
    return ThreeWayReport(vi, vii, viii, agreement)


@dataclass
class TwistedReport:
    admissible: Verdict
    identity: Verdict
    agreement: Verdict


def check_twisted_commutation(d: AdmissibilityDiagram, plan: EnumerationPlan) -> TwistedReport:
    """With A = C and a shared section, admissibility is equivalent to the
    kernel identity alpha.k(h(y).x) + gamma.k(y) = gamma.k(y) + alpha.k(x)
    with h = g restricted along the kernel."""
    if d.A is not d.C:
        raise KindMismatchError(f"{d.name}: the twisted form needs A = C")
    if d.s is not d.r:
        same = d.B.is_finite and all(d.s.fn(b) == d.r.fn(b) for b in d.B.elements)
        if not same:
            raise KindMismatchError(f"{d.name}: the twisted form needs a shared section")
    if d.kernel_f is None or d.q_f is None:
        raise PlanError(f"{d.name}: Schreier data on the f-side is required")
    X = d.kernel_f.source
    act = _schreier_action(d)
    ak = compose_homs(d.alpha, d.kernel_f, name="alpha.k")
    gk = compose_homs(d.gamma, d.kernel_f, name="gamma.k")
    h = compose_homs(d.g, d.kernel_f, name="h")
    D = d.D
    identity = check_law(
        Law(
            "twisted.kernel-identity",
            (X, X),
            lambda x, y: D.add(ak.fn(act(h.fn(y), x)), gk.fn(y))
            == D.add(gk.fn(y), ak.fn(x)),
            fmt=lambda tup: f"({X.fmt(tup[0])}, {X.fmt(tup[1])})",
        ),
        plan,
    )
    if d.is_finite():
        oracle = check_admissible_oracle(d)
        admissible = Verdict(
            law="twisted.admissible",
            outcome=oracle.verdict.outcome,
            checked=oracle.verdict.checked,
            witness_text=oracle.verdict.witness_text,
            detail=oracle.reason,
        )
    else:
        crit = check_admissibility_criterion(d, plan)
        admissible = Verdict(
            law="twisted.admissible",
            outcome=crit.verdict.outcome,
            checked=crit.verdict.checked,
            witness_text=crit.verdict.witness_text,
            detail=crit.verdict.detail,
            seed=crit.verdict.seed,
            window=crit.verdict.window,
        )
    agree = admissible.failed == identity.failed
    agreement = Verdict(
        law="twisted.agreement",
        outcome=HOLDS_EXHAUSTIVE if agree else FAILS,
        checked=admissible.checked + identity.checked,
        detail=f"admissible={admissible.outcome}, identity={identity.outcome}",
    )
    return TwistedReport(admissible, identity, agreement)


def diagram_from_extensions(
    eF: SchreierExtension,
    eG: SchreierExtension,
    alpha: Hom,
    beta: Hom,
    gamma: Hom,
    name: str = "diagram",
) -> AdmissibilityDiagram:
    """Both legs from extensions over a shared base, kernel data included."""
    if eF.B is not eG.B:
        raise KindMismatchError("extensions must share the base carrier")
    return AdmissibilityDiagram(
        A=eF.A, B=eF.B, C=eG.A, D=alpha.target,
        f=eF.f, r=eF.r, g=eG.f, s=eG.r,
        alpha=alpha, beta=beta, gamma=gamma,
        kernel_f=eF.k, q_f=eF.q, kernel_g=eG.k, q_g=eG.q,
        name=name,
    )


def composition_diagram(dc, alpha: Optional[Hom] = None, beta: Optional[Hom] = None,
                        gamma: Optional[Hom] = None, name: str = "composition") -> AdmissibilityDiagram:
    """A = C = arrows, f-leg the extension split epi, g-leg the codomain map
    with the same section; composable pairs are exactly the pullback.  With
    the default identity cospan its unique structure map is the composition."""
    from .crossed import codomain_map

    e = dc.e
    cod = codomain_map(dc)
    alpha = alpha or identity_hom(e.A)
    beta = beta or e.r
    gamma = gamma or identity_hom(e.A)
    return AdmissibilityDiagram(
        A=e.A, B=e.B, C=e.A, D=alpha.target,
        f=e.f, r=e.r, g=cod, s=e.r,
        alpha=alpha, beta=beta, gamma=gamma,
        kernel_f=e.k, q_f=e.q,
        name=name,
    )


# -- equivalence relations and the Smith/Huq harness ---------------------------------


@dataclass
class EquivalenceRelation:
    """A relation carrier R inside X x X with projections and the diagonal."""

    X: ConjStructure
    carrier: ConjStructure
    proj1: Hom
    proj2: Hom
    diagonal: Hom
    name: str = "relation"


def relation_from_pairs(X: ConjStructure, pairs, name: str = "relation") -> EquivalenceRelation:
    if not X.is_finite:
        raise PlanError("relation carriers are materialized; X must be finite")
    pair_set = set(pairs)
    for x in X.elements:
        if (x, x) not in pair_set:
            raise KindMismatchError(f"{name}: not reflexive at {X.fmt(x)}")
    for (x, y) in pair_set:
        if (y, x) not in pair_set:
            raise KindMismatchError(f"{name}: not symmetric at ({X.fmt(x)}, {X.fmt(y)})")
    for (x, y) in pair_set:
        for (y2, z) in pair_set:
            if y2 == y and (x, z) not in pair_set:
                raise KindMismatchError(
                    f"{name}: not transitive at ({X.fmt(x)}, {X.fmt(y)}, {X.fmt(z)})"
                )
    square = direct_product_structure(X, X, name=f"{X.name}^2")
    R = substructure(square, pair_set, name=name)
    proj1 = Hom(R, X, lambda p: p[0], name="proj1")
    proj2 = Hom(R, X, lambda p: p[1], name="proj2")
    diagonal = Hom(X, R, lambda x: (x, x), name="diagonal")
    return EquivalenceRelation(X=X, carrier=R, proj1=proj1, proj2=proj2, diagonal=diagonal, name=name)


def normal_subgroups(X: ConjStructure) -> list:
    """All normal subgroups of a finite group carrier, smallest first."""
    if not X.is_finite or X.negate is None:
        raise KindMismatchError(f"{X.name}: normal subgroup search needs a finite group")
    n = len(X.elements)
    found = []
    for mask in range(1 << n):
        subset = [X.elements[i] for i in range(n) if mask >> i & 1]
        if X.identity not in subset:
            continue
        members = set(subset)
        if any(X.add(a, b) not in members for a in subset for b in subset):
            continue
        if any(X.negate(a) not in members for a in subset):
            continue
        if any(
            X.add(g, X.add(a, X.negate(g))) not in members
            for g in X.elements
            for a in subset
        ):
            continue
        if any(X.co(a) not in members for a in subset):
            continue
        found.append(tuple(sorted(members, key=X.key)))
    found.sort(key=lambda t: (len(t), tuple(X.key(x) for x in t)))
    return found


def congruence_from_normal_subgroup(X: ConjStructure, subgroup, name: str = "") -> EquivalenceRelation:
    members = set(subgroup)
    pairs = [
        (x, y)
        for x in X.elements
        for y in X.elements
        if X.add(x, X.negate(y)) in members
    ]
    label = name or f"{X.name}/{{{', '.join(X.fmt(x) for x in sorted(members, key=X.key))}}}"
    return relation_from_pairs(X, pairs, name=label)


def relation_diagram(R: EquivalenceRelation, S: EquivalenceRelation) -> AdmissibilityDiagram:
    """The cospan whose admissibility says the two relations commute."""
    if R.X is not S.X:
        raise KindMismatchError("relations must live on the same object")
    X = R.X
    return AdmissibilityDiagram(
        A=R.carrier, B=X, C=S.carrier, D=X,
        f=R.proj2, r=R.diagonal, g=S.proj1, s=S.diagonal,
        alpha=R.proj1, beta=identity_hom(X), gamma=S.proj2,
        name=f"{R.name} vs {S.name}",
    )


def _verify_relation_schreier(R: EquivalenceRelation, plan: EnumerationPlan) -> None:
    X = R.X
    ker = [p for p in R.carrier.elements if R.proj2.fn(p) == X.identity]
    K = substructure(R.carrier, ker, name=f"ker({R.name})")
    find_schreier_retraction(
        Hom(K, R.carrier, lambda p: p, name="ker-incl"), R.proj2, R.diagonal, plan
    )


def smith_commutes(R: EquivalenceRelation, S: EquivalenceRelation) -> Verdict:
    """Relation commutation as admissibility of the induced cospan."""
    oracle = check_admissible_oracle(relation_diagram(R, S))
    return Verdict(
        law="smith.commutes",
        outcome=oracle.verdict.outcome,
        checked=oracle.verdict.checked,
        witness_text=oracle.verdict.witness_text,
        detail=oracle.reason,
    )


def normalization_subset(R: EquivalenceRelation, side: int) -> tuple:
    """Image of one projection on the kernel of the other (side 1 or 2)."""
    X = R.X
    if side == 1:
        return tuple(
            sorted({p[0] for p in R.carrier.elements if p[1] == X.identity}, key=X.key)
        )
    return tuple(
        sorted({p[1] for p in R.carrier.elements if p[0] == X.identity}, key=X.key)
    )


def huq_normalizations(R: EquivalenceRelation, S: EquivalenceRelation, plan: EnumerationPlan) -> Verdict:
    """Pointwise commutation of the two normalization images inside X."""
    X = R.X
    NR = substructure(X, normalization_subset(R, 1), name=f"N({R.name})")
    NS = substructure(X, normalization_subset(S, 2), name=f"N({S.name})")
    incl_r = Hom(NR, X, lambda x: x, name="nr")
    incl_s = Hom(NS, X, lambda x: x, name="ns")
    v = check_huq_commute(incl_r, incl_s, plan)
    return Verdict(
        law="huq.normalizations",
        outcome=v.outcome,
        checked=v.checked,
        witness=v.witness,
        witness_text=v.witness_text,
        detail=v.detail,
        seed=v.seed,
        window=v.window,
    )


@dataclass
class SmithHuqReport:
    smith: Verdict
    huq: Verdict
    agreement: Verdict


def smith_is_huq(
    R: EquivalenceRelation, S: EquivalenceRelation, plan: Optional[EnumerationPlan] = None
) -> SmithHuqReport:
    """Relation commutation and normalization commutation must agree for
    relations whose legs split in the Schreier sense."""
    plan = plan or EnumerationPlan.exhaustive()
    _verify_relation_schreier(R, plan)
    _verify_relation_schreier(S, plan)
    smith = smith_commutes(R, S)
    huq = huq_normalizations(R, S, plan)
    agree = smith.failed == huq.failed
    agreement = Verdict(
        law="smith-is-huq.agreement",
        outcome=HOLDS_EXHAUSTIVE if agree else FAILS,
        checked=smith.checked + huq.checked,
        detail=f"smith={smith.outcome}, huq={huq.outcome}",
    )
    return SmithHuqReport(smith=smith, huq=huq, agreement=agreement)


# -- hom enumeration and the finite diagram family -------------------------------------


def _expressions(S: ConjStructure, gens: list) -> dict:
    expr: dict = {}
    if S.identity is not None:
        expr[S.identity] = ("id",)
    for i, g in enumerate(gens):
        expr.setdefault(g, ("gen", i))
    changed = True
    while changed:
        changed = False
        known = list(expr)
        for a in known:
            c = S.co(a)
            if c not in expr:
                expr[c] = ("conj", a)
                changed = True
            for b in known:
                t = S.add(a, b)
                if t not in expr:
                    expr[t] = ("add", a, b)
                    changed = True
    return expr


def generating_sequence(S: ConjStructure) -> list:
    """Greedy generating set in element order; deterministic."""
    gens: list = []
    expr = _expressions(S, gens)
    for x in S.elements:
        if x not in expr:
            gens.append(x)
            expr = _expressions(S, gens)
    return gens


def enumerate_homs(S: ConjStructure, T: ConjStructure) -> list:
    """All structure-preserving maps S -> T between finite carriers, found by
    assigning generator images and closing; deterministic order."""
    if not (S.is_finite and T.is_finite):
        raise PlanError("hom enumeration needs finite carriers")
    gens = generating_sequence(S)
    expr = _expressions(S, gens)
    out = []
    for images in product(T.elements, repeat=len(gens)):
        memo: dict = {}

        def ev(x):
            if x in memo:
                return memo[x]
            e = expr[x]
            if e[0] == "id":
                v = T.identity
            elif e[0] == "gen":
                v = images[e[1]]
            elif e[0] == "conj":
                v = T.co(ev(e[1]))
            else:
                v = T.add(ev(e[1]), ev(e[2]))
            memo[x] = v
            return v

        table = {x: ev(x) for x in S.elements}
        if S.identity is not None and T.identity is not None and table[S.identity] != T.identity:
            continue
        if any(
            table[S.add(a, b)] != T.add(table[a], table[b])
            for a in S.elements
            for b in S.elements
        ):
            continue
        if any(table[S.co(a)] != T.co(table[a]) for a in S.elements):
            continue
        out.append(Hom.from_table(S, T, [table[x] for x in S.elements], name=f"{S.name}->{T.name}"))
    return out


def _hom_key(h: Hom) -> tuple:
    return tuple(h.target.key(h.table[x]) for x in h.source.elements)


def diagram_family_config(A, B, C, D, f, r, g, s, take: int, tag: str) -> list:
    """All compatible cospans (alpha, beta, gamma) on fixed legs, thinned to
    an evenly spaced deterministic selection of `take` diagrams."""
    alphas = sorted(enumerate_homs(A, D), key=_hom_key)
    gammas = sorted(enumerate_homs(C, D), key=_hom_key)
    triples = []
    for alpha in alphas:
        beta_table = [alpha.fn(r.fn(b)) for b in B.elements]
        for gamma in gammas:
            if all(gamma.fn(s.fn(b)) == beta_table[i] for i, b in enumerate(B.elements)):
                beta = Hom.from_table(B, D, beta_table, name="beta")
                triples.append((alpha, beta, gamma))
    if take and len(triples) > take:
        stride = [round(i * (len(triples) - 1) / (take - 1)) for i in range(take)]
        triples = [triples[i] for i in sorted(set(stride))]
    return [
        AdmissibilityDiagram(
            A=A, B=B, C=C, D=D, f=f, r=r, g=g, s=s,
            alpha=al, beta=be, gamma=ga, name=f"{tag}#{i}",
        )
        for i, (al, be, ga) in enumerate(triples)
    ]


def admissibility_family(minimum: int = 50) -> list:
    """A deterministic finite family mixing commutative and noncommutative
    targets; used to cross-validate the criterion against the oracle."""
    from .builders import cyclic_group, klein_four, quaternion_group_q8, symmetric_s3, trivial_monoid

    family: list = []

    z4 = cyclic_group(4)
    t0 = trivial_monoid()
    t_sec_z4 = Hom(t0, z4, lambda x: z4.identity, name="unit")
    family += diagram_family_config(
        z4, t0, z4, z4, zero_hom(z4, t0), t_sec_z4, zero_hom(z4, t0), t_sec_z4,
        take=12, tag="c4-fan",
    )

    q8 = quaternion_group_q8()
    t_sec_q8 = Hom(t0, q8, lambda x: q8.identity, name="unit")
    family += diagram_family_config(
        q8, t0, q8, q8, zero_hom(q8, t0), t_sec_q8, zero_hom(q8, t0), t_sec_q8,
        take=14, tag="q8-fan",
    )

    kv = klein_four()
    z2 = cyclic_group(2)
    kv_f = Hom(kv, z2, lambda x: x >> 1, name="first-bit")
    kv_r = Hom(z2, kv, lambda b: 2 * b, name="plant-first")
    z2_id = identity_hom(z2)
    family += diagram_family_config(
        kv, z2, z2, z4, kv_f, kv_r, z2_id, z2_id, take=10, tag="kv-split",
    )

    t_sec_kv = Hom(t0, kv, lambda x: kv.identity, name="unit")
    family += diagram_family_config(
        kv, t0, kv, kv, zero_hom(kv, t0), t_sec_kv, zero_hom(kv, t0), t_sec_kv,
        take=12, tag="kv-fan",
    )

    s3 = symmetric_s3()
    perms = [p for p in sorted(product(range(3), repeat=3)) if len(set(p)) == 3]

    def parity(i):
        p = perms[i]
        return sum(1 for u in range(3) for v in range(u + 1, 3) if p[u] > p[v]) % 2

    odd = next(i for i in range(len(perms)) if parity(i) == 1)
    s3_sign = Hom(s3, z2, parity, name="sign")
    s3_sec = Hom.from_table(z2, s3, [s3.identity, odd], name="pick-odd")
    family += diagram_family_config(
        s3, z2, z2, s3, s3_sign, s3_sec, z2_id, z2_id, take=12, tag="s3-sign",
    )

    t_sec_s3 = Hom(t0, s3, lambda x: s3.identity, name="unit")
    family += diagram_family_config(
        s3, t0, s3, s3, zero_hom(s3, t0), t_sec_s3, zero_hom(s3, t0), t_sec_s3,
        take=10, tag="s3-fan",
    )

    z6 = cyclic_group(6)
    z3 = cyclic_group(3)
    z6_f = Hom(z6, z3, lambda x: x % 3, name="mod3")
    z6_r = Hom(z3, z6, lambda y: (4 * y) % 6, name="times4")
    z3_id = identity_hom(z3)
    family += diagram_family_config(
        z6, z3, z3, z6, z6_f, z6_r, z3_id, z3_id, take=12, tag="c6-split",
    )

    if len(family) < minimum:
        raise CheckFailedError(f"diagram family too small: {len(family)} < {minimum}")
    return family

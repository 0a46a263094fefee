"""Split extensions with unique kernel decompositions, actions, semidirects.

A split epimorphism (f, r) with kernel k is Schreier when every a decomposes
uniquely as a = k(q(a)) + r(f(a)); the retraction q is computed once (a table
on finite carriers) or supplied by a builder, never re-derived per call.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable, Optional

from .core import (
    ActionCompatibilityError,
    ActionLawError,
    CancellationFailureError,
    CheckFailedError,
    ConjStructure,
    EnumerationPlan,
    FAILS,
    HOLDS_EXHAUSTIVE,
    Hom,
    KindMismatchError,
    Law,
    NotKernelError,
    NotSchreierError,
    NotSplitError,
    Verdict,
    check_law,
    check_laws,
    combine,
    default_scope,
    pair_enumerator,
)
from .laws import (
    cancellation_laws,
    conjugation_axiom_laws,
    hom_laws,
    verify_conjugation_axioms,
)


@dataclass
class SchreierExtension:
    """Kernel X >--k--> A --f--> B with section r and retraction q."""

    X: ConjStructure
    A: ConjStructure
    B: ConjStructure
    k: Hom
    f: Hom
    r: Hom
    q: Callable
    q_table: Optional[dict] = None
    plan: Optional[EnumerationPlan] = None
    verdicts: dict = field(default_factory=dict)

    def act(self, b, x):
        """The derived action b . x = q(r(b) + k(x))."""
        return self.q(self.A.add(self.r.fn(b), self.k.fn(x)))


@dataclass
class ExternalAction:
    """A monoid action of B on X by structure endomaps."""

    B: ConjStructure
    X: ConjStructure
    act: Callable
    name: str = ""
    verdicts: dict = field(default_factory=dict)


def _require_monoids(*structures: ConjStructure) -> None:
    for S in structures:
        if S.kind != "monoid" or S.identity is None:
            raise KindMismatchError(f"{S.name}: extension machinery needs monoids")


def find_schreier_retraction(
    k: Hom,
    f: Hom,
    r: Hom,
    plan: EnumerationPlan,
    q: Optional[Callable] = None,
) -> SchreierExtension:
    """Check (f, r) is a Schreier split epi with kernel k and package it.

    Finite carriers get q by exhaustive decomposition search (failing loudly
    with the offending element and its decompositions); parametric carriers
    must supply a candidate q, which is then verified on the plan's scope.
    """
    X, A, B = k.source, f.source, f.target
    if k.target is not A or r.source is not B or r.target is not A:
        raise KindMismatchError("maps do not share carriers: want k: X>->A, f: A->B, r: B->A")
    _require_monoids(X, A, B)
    verdicts: dict = {}

    for h, label in ((k, "kernel-inclusion"), (f, "projection"), (r, "section")):
        v = combine(f"hom({label})", check_laws(hom_laws(h), plan))
        verdicts[f"hom.{label}"] = v
        if v.failed:
            raise CheckFailedError(f"{label} is not a morphism", v)

    split = check_law(
        Law("schreier.split", (B,), lambda b: f.fn(r.fn(b)) == b), plan
    )
    verdicts["schreier.split"] = split
    if split.failed:
        raise NotSplitError(f"f . r is not the identity at {B.fmt(split.witness[0])}", split)

    into_kernel = check_law(
        Law("schreier.kernel-maps-to-zero", (X,), lambda x: f.fn(k.fn(x)) == B.identity), plan
    )
    verdicts["schreier.kernel-maps-to-zero"] = into_kernel
    if into_kernel.failed:
        raise NotKernelError("k does not land in the kernel of f", into_kernel)

    if X.is_finite and A.is_finite:
        images = [k.fn(x) for x in X.elements]
        if len(set(images)) != len(images):
            raise NotKernelError("kernel inclusion is not injective")
        fiber = {a for a in A.elements if f.fn(a) == B.identity}
        if set(images) != fiber:
            raise NotKernelError("image of k is not the whole fiber over the identity")

    if q is None:
        if not (X.is_finite and A.is_finite):
            raise NotSchreierError(
                f"{A.name}: infinite carrier; pass the candidate retraction q explicitly"
            )
        table = {}
        for a in A.elements:
            rb = r.fn(f.fn(a))
            matches = [x for x in X.elements if A.add(k.fn(x), rb) == a]
            if len(matches) != 1:
                raise NotSchreierError(
                    f"element {A.fmt(a)} has {len(matches)} kernel decompositions",
                    witness=a,
                    decompositions=matches,
                )
            table[a] = matches[0]
        q_fn: Callable = table.__getitem__
        q_table: Optional[dict] = table
    else:
        q_fn, q_table = q, None

    exists = check_law(
        Law(
            "schreier.decomposition",
            (A,),
            lambda a: A.add(k.fn(q_fn(a)), r.fn(f.fn(a))) == a,
        ),
        plan,
    )
    verdicts["schreier.decomposition"] = exists
    if exists.failed:
        raise NotSchreierError(
            f"a != k(q(a)) + r(f(a)) at {A.fmt(exists.witness[0])}", witness=exists.witness[0]
        )
    unique = check_law(
        Law(
            "schreier.decomposition-unique",
            (X, B),
            lambda x, b: q_fn(A.add(k.fn(x), r.fn(b))) == x,
        ),
        plan,
    )
    verdicts["schreier.decomposition-unique"] = unique
    if unique.failed:
        raise NotSchreierError(
            f"q(k(x)+r(b)) != x at {unique.witness_text}", witness=unique.witness
        )

    ext = SchreierExtension(
        X=X, A=A, B=B, k=k, f=f, r=r, q=q_fn, q_table=q_table, plan=plan, verdicts=verdicts
    )
    verdicts["retraction-laws"] = verify_retraction_laws(ext, plan)
    return ext


def retraction_law_suite(e: SchreierExtension) -> list[Law]:
    X, A, B = e.X, e.A, e.B
    k, f, r, q = e.k.fn, e.f.fn, e.r.fn, e.q
    return [
        Law("retraction.section", (X,), lambda x: q(k(x)) == x),
        Law("retraction.kills-base", (B,), lambda b: q(r(b)) == X.identity),
        Law("retraction.unit", (), lambda: q(A.identity) == X.identity),
        Law(
            "retraction.twist",
            (B, X),
            lambda b, x: A.add(k(q(A.add(r(b), k(x)))), r(b)) == A.add(r(b), k(x)),
        ),
        Law(
            "retraction.cocycle",
            (A, A),
            lambda a, a2: q(A.add(a, a2)) == X.add(q(a), q(A.add(r(f(a)), k(q(a2))))),
        ),
    ]


def _cokernel_verdict(e: SchreierExtension) -> Verdict:
    """f is the cokernel of k: the congruence generated by k(X) ~ 0 has
    exactly the fibers of f as classes.  Finite carriers only."""
    A, X, f = e.A, e.X, e.f.fn
    parent = {a: a for a in A.elements}

    def find(a):
        while parent[a] != a:
            parent[a] = parent[parent[a]]
            a = parent[a]
        return a

    queue = [(e.k.fn(x), A.identity) for x in X.elements]
    while queue:
        u, v = queue.pop()
        ru, rv = find(u), find(v)
        if ru == rv:
            continue
        parent[ru] = rv
        for a in A.elements:
            queue.append((A.add(a, u), A.add(a, v)))
            queue.append((A.add(u, a), A.add(v, a)))
        queue.append((A.co(u), A.co(v)))

    checked = 0
    for a in A.elements:
        for a2 in A.elements:
            checked += 1
            if (find(a) == find(a2)) != (f(a) == f(a2)):
                return Verdict(
                    law="retraction.cokernel",
                    outcome=FAILS,
                    checked=checked,
                    witness=(a, a2),
                    witness_text=f"({A.fmt(a)}, {A.fmt(a2)})",
                    detail="generated congruence disagrees with the fibers of f",
                )
    return Verdict(law="retraction.cokernel", outcome=HOLDS_EXHAUSTIVE, checked=checked)


def verify_retraction_laws(e: SchreierExtension, plan: EnumerationPlan) -> Verdict:
    """The retraction's structure equations, plus the cokernel property on
    finite carriers."""
    verdicts = check_laws(retraction_law_suite(e), plan)
    if e.A.is_finite and e.X.is_finite:
        verdicts.append(_cokernel_verdict(e))
    return combine("retraction-laws", verdicts)


def verify_retraction_conjugation(e: SchreierExtension, plan: EnumerationPlan) -> Verdict:
    """q(conj(a)) equals the action of f(conj(a)) on conj(q(a))."""
    A, B, X = e.A, e.B, e.X

    def holds(a):
        ac = A.co(a)
        return e.q(ac) == e.act(B.co(e.f.fn(a)), X.co(e.q(a)))

    return check_law(Law("retraction.conj-equivariance", (A,), holds), plan)


# -- actions -----------------------------------------------------------------


def action_laws(phi: ExternalAction) -> list[Law]:
    B, X, act = phi.B, phi.X, phi.act
    return [
        Law("action.unit", (X,), lambda x: act(B.identity, x) == x),
        Law(
            "action.compose",
            (B, B, X),
            lambda b, b2, x: act(B.add(b, b2), x) == act(b, act(b2, x)),
        ),
        Law(
            "action.additive",
            (B, X, X),
            lambda b, x, y: act(b, X.add(x, y)) == X.add(act(b, x), act(b, y)),
        ),
        Law("action.zero", (B,), lambda b: act(b, X.identity) == X.identity),
    ]


def make_action(
    B: ConjStructure,
    X: ConjStructure,
    act: Callable,
    plan: EnumerationPlan,
    name: str = "",
) -> ExternalAction:
    _require_monoids(B, X)
    phi = ExternalAction(B=B, X=X, act=act, name=name or f"{B.name} on {X.name}")
    verdict = combine("action-laws", check_laws(action_laws(phi), plan))
    phi.verdicts["action-laws"] = verdict
    if verdict.failed:
        raise ActionLawError(f"{phi.name}: {verdict.detail} at {verdict.witness_text}", verdict)
    return phi


def trivial_action(B: ConjStructure, X: ConjStructure, plan: EnumerationPlan) -> ExternalAction:
    return make_action(B, X, lambda b, x: x, plan, name=f"trivial {B.name} on {X.name}")


def action_from_extension(e: SchreierExtension, plan: Optional[EnumerationPlan] = None) -> ExternalAction:
    plan = plan or e.plan
    return make_action(e.B, e.X, e.act, plan, name=f"derived from {e.A.name}")


def action_compatibility_laws(phi: ExternalAction, include_variant: bool = False) -> list[Law]:
    B, X, act = phi.B, phi.X, phi.act
    bco, xco, badd, xadd = B.co, X.co, B.add, X.add
    laws = [
        Law(
            "compat.central-pair",
            (X, B),
            lambda x, b: act(bco(b), xadd(xco(x), x))
            == xadd(x, act(badd(b, bco(b)), xco(x))),
        ),
        Law(
            "compat.exchange-pair",
            (X, X, B, B),
            lambda x1, x2, b1, b2: xadd(x1, act(badd(b1, bco(b1)), xadd(xco(x1), x2)))
            == xadd(x2, act(badd(b2, bco(b1)), xadd(xco(x1), x1))),
        ),
        Law(
            "compat.conj-antihom",
            (X, B, B),
            lambda x2, b1, b2: act(badd(bco(b2), bco(b1)), xco(act(b1, x2)))
            == act(bco(b2), xco(x2)),
        ),
    ]
    if include_variant:
        laws.append(
            Law(
                "compat.exchange-pair-samebase",
                (X, X, B, B),
                lambda x1, x2, b1, b2: xadd(x1, act(badd(b1, bco(b1)), xadd(xco(x1), x2)))
                == xadd(x2, act(badd(b1, bco(b1)), xadd(xco(x1), x1))),
            )
        )
    return laws


def verify_action_compatibility(
    phi: ExternalAction, plan: EnumerationPlan, include_variant: bool = False
) -> Verdict:
    """The three pairing conditions making the twisted product a conjugation
    monoid, preceded by the carrier axioms they presuppose."""
    verdicts = [
        combine(f"carrier-axioms({phi.X.name})", check_laws(conjugation_axiom_laws(phi.X), plan)),
        combine(f"carrier-axioms({phi.B.name})", check_laws(conjugation_axiom_laws(phi.B), plan)),
    ]
    verdicts += check_laws(action_compatibility_laws(phi, include_variant), plan)
    combined = combine("action-compatibility", verdicts)
    phi.verdicts["action-compatibility"] = combined
    return combined


# -- semidirect products -------------------------------------------------------


def semidirect(
    phi: ExternalAction,
    plan: EnumerationPlan,
    verify: bool = True,
) -> SchreierExtension:
    """Twisted product on X x B with the conjugation (x, b) -> (conj(b).conj(x), conj(b)).

    Verifies action compatibility first, then the axioms and cancellativity of
    the product carrier under the plan.
    """
    X, B = phi.X, phi.B
    _require_monoids(X, B)
    if verify:
        compat = verify_action_compatibility(phi, plan)
        if compat.failed:
            raise ActionCompatibilityError(
                f"{phi.name}: {compat.detail} at {compat.witness_text}", compat
            )

    act = phi.act

    def op(p, q2):
        return (X.add(p[0], act(p[1], q2[0])), B.add(p[1], q2[1]))

    def co(p):
        bc = B.co(p[1])
        return (act(bc, X.co(p[0])), bc)

    elements = None
    enumerate_at = None
    if X.is_finite and B.is_finite:
        elements = tuple((x, b) for x in X.elements for b in B.elements)
    sampler = None
    if elements is None:
        def sampler(seed, index):
            return (X.sample(seed, 2 * index), B.sample(seed, 2 * index + 1))

        enumerate_at = pair_enumerator(X, B)

    negate = None
    if X.negate is not None and B.negate is not None:
        def negate(p):
            nb = B.negate(p[1])
            return (act(nb, X.negate(p[0])), nb)

    contains = None
    if X.contains is not None or B.contains is not None:
        def contains(p):
            if not (isinstance(p, tuple) and len(p) == 2):
                return False
            okx = X.contains(p[0]) if X.contains else True
            okb = B.contains(p[1]) if B.contains else True
            return okx and okb

    A = ConjStructure(
        name=f"{X.name} |x {B.name}",
        kind="monoid",
        op=op,
        co=co,
        identity=(X.identity, B.identity),
        elements=elements,
        sampler=sampler,
        enumerate_at=enumerate_at,
        probes=tuple((x, b) for x in X.probes for b in B.probes),
        negate=negate,
        contains=contains,
        components=(X, B),
        codec="pair",
    )

    verdicts = dict(phi.verdicts)
    if verify:
        axioms = verify_conjugation_axioms(A, plan)
        verdicts["carrier-axioms"] = axioms
        if axioms.failed:
            raise ActionCompatibilityError(
                f"{A.name}: conjugation axioms fail at {axioms.witness_text}", axioms
            )
        cancel = combine("cancellation", check_laws(cancellation_laws(A), plan))
        verdicts["cancellation"] = cancel
        if cancel.failed:
            raise CancellationFailureError(
                f"{A.name}: cancellation fails at {cancel.witness_text}", cancel
            )

    k = Hom(X, A, lambda x: (x, B.identity), name="k")
    f = Hom(A, B, lambda p: p[1], name="f")
    r = Hom(B, A, lambda b: (X.identity, b), name="r")
    q_table = {a: a[0] for a in elements} if elements is not None else None
    ext = SchreierExtension(
        X=X, A=A, B=B, k=k, f=f, r=r,
        q=(lambda p: p[0]), q_table=q_table, plan=plan, verdicts=verdicts,
    )
    ext.verdicts["retraction-laws"] = verify_retraction_laws(ext, plan)
    return ext


def roundtrip_iso(e: SchreierExtension, plan: Optional[EnumerationPlan] = None) -> Verdict:
    """The extension is isomorphic over X and B to the twisted product built
    from its own derived action."""
    plan = plan or e.plan
    phi = action_from_extension(e, plan)
    e2 = semidirect(phi, plan, verify=False)
    A, A2, X, B = e.A, e2.A, e.X, e.B

    def alpha(a):
        return (e.q(a), e.f.fn(a))

    def beta(p):
        return A.add(e.k.fn(p[0]), e.r.fn(p[1]))

    alpha_hom = Hom(A, A2, alpha, name="to-twisted")
    beta_hom = Hom(A2, A, beta, name="from-twisted")
    laws = (
        hom_laws(alpha_hom)
        + hom_laws(beta_hom)
        + [
            Law("roundtrip.beta-alpha", (A,), lambda a: beta(alpha(a)) == a),
            Law("roundtrip.alpha-beta", (A2,), lambda p: alpha(beta(p)) == p),
            Law("roundtrip.kernel-square", (X,), lambda x: alpha(e.k.fn(x)) == (x, B.identity)),
            Law("roundtrip.projection-square", (A,), lambda a: alpha(a)[1] == e.f.fn(a)),
            Law("roundtrip.section-square", (B,), lambda b: alpha(e.r.fn(b)) == (X.identity, b)),
        ]
    )
    return combine("roundtrip", check_laws(laws, plan))


# -- convenience builders ------------------------------------------------------


def direct_product_extension(
    X: ConjStructure, B: ConjStructure, plan: EnumerationPlan
) -> SchreierExtension:
    return semidirect(trivial_action(B, X, plan), plan)


def finite_semidirect_extension(
    X: ConjStructure, B: ConjStructure, action_table, plan: EnumerationPlan
) -> SchreierExtension:
    """Semidirect product from an action given as a table action_table[b][x]."""
    rows = [tuple(row) for row in action_table]
    if len(rows) != len(B.elements) or any(len(row) != len(X.elements) for row in rows):
        raise KindMismatchError("action table shape does not match the carriers")

    def act(b, x):
        return rows[b][x]

    return semidirect(make_action(B, X, act, plan), plan)


def quaternion_conjugation_extension(plan: EnumerationPlan, bound: int = 6) -> SchreierExtension:
    """Unit quaternions acting by conjugation on the scaled-unit ball."""
    from .builders import scaled_unit_quaternions, unit_quaternion_group

    X = scaled_unit_quaternions(bound)
    B = unit_quaternion_group(bound)
    phi = make_action(B, X, lambda b, x: b * x * b.conjugate(), plan, name="quaternion conjugation")
    return semidirect(phi, plan)

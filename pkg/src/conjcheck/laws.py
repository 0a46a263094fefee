"""Law suites for conjugation structures: axioms, cancellation, Ore, homs.

Checkers return a single aggregated Verdict; the per-law suites feed the CLI
report (one line per law) and the replay machinery.
"""
from __future__ import annotations

from typing import Optional

from .core import (
    BOUNDED,
    EXHAUSTIVE,
    FAILS,
    HOLDS_BOUNDED,
    HOLDS_EXHAUSTIVE,
    HOLDS_SAMPLED,
    INCONCLUSIVE,
    SAMPLED,
    ConjStructure,
    EnumerationPlan,
    Hom,
    KindMismatchError,
    Law,
    Verdict,
    check_law,
    check_laws,
    combine,
    default_scope,
)


def conjugation_axiom_laws(S: ConjStructure) -> list[Law]:
    add, co = S.add, S.conj
    return [
        Law(
            "conj.commutes",
            (S,),
            lambda x: add(co(x), x) == add(x, co(x)),
        ),
        Law(
            "conj.exchange",
            (S, S),
            lambda x, y: add(add(x, co(y)), y) == add(add(y, co(y)), x),
        ),
        Law(
            "conj.antihom",
            (S, S),
            lambda x, y: co(add(x, y)) == add(co(y), co(x)),
        ),
    ]


def monoid_identity_laws(S: ConjStructure) -> list[Law]:
    if S.identity is None:
        return []
    e, add = S.identity, S.add
    return [
        Law("monoid.left-identity", (S,), lambda x: add(e, x) == x),
        Law("monoid.right-identity", (S,), lambda x: add(x, e) == x),
    ]


def cancellation_laws(S: ConjStructure) -> list[Law]:
    add, co = S.add, S.conj
    return [
        Law(
            "cancel.right",
            (S, S, S),
            lambda x, y, a: add(x, a) != add(y, a) or x == y,
        ),
        Law(
            "cancel.left",
            (S, S, S),
            lambda x, y, a: add(a, x) != add(a, y) or x == y,
        ),
        Law(
            "cancel.conjugated",
            (S, S, S),
            lambda x, y, a: add(add(x, co(a)), a) != add(add(y, co(a)), a) or x == y,
        ),
    ]


def derived_identity_laws(S: ConjStructure) -> list[Law]:
    """Consequences of the axioms; never expected to fail where axioms hold."""
    add, co = S.add, S.conj

    def p(x, y, z):
        return add(add(x, co(y)), z)

    return [
        Law(
            "derived.sum-absorb",
            (S, S),
            lambda x, y: add(co(add(x, y)), add(x, y))
            == add(add(add(co(y), y), x), co(x)),
        ),
        Law(
            "derived.slide",
            (S, S),
            lambda x, y: add(add(x, y), co(y)) == add(add(co(y), y), x),
        ),
        Law(
            "derived.ternary-symmetric",
            (S, S),
            lambda x, y: p(x, y, y) == p(y, y, x),
        ),
    ]


def hom_laws(h: Hom, as_monoid: Optional[bool] = None) -> list[Law]:
    S, T = h.source, h.target
    laws = [
        Law("hom.additive", (S, S), lambda x, y: h.fn(S.add(x, y)) == T.add(h.fn(x), h.fn(y))),
        Law("hom.conj", (S,), lambda x: h.fn(S.conj(x)) == T.conj(h.fn(x))),
    ]
    monoid_pair = S.kind == "monoid" and T.kind == "monoid"
    if as_monoid is None:
        as_monoid = monoid_pair
    if as_monoid:
        if not monoid_pair:
            raise KindMismatchError(
                f"monoid morphism requested between {S.name} ({S.kind}) and {T.name} ({T.kind})"
            )
        laws.append(Law("hom.identity", (), lambda: h.fn(S.identity) == T.identity))
    return laws


def law_suite(S: ConjStructure) -> list[Law]:
    """Everything the `verify` command reports, one Law per line."""
    return (
        conjugation_axiom_laws(S)
        + monoid_identity_laws(S)
        + cancellation_laws(S)
        + derived_identity_laws(S)
    )


def verify_conjugation_axioms(S: ConjStructure, plan: EnumerationPlan) -> Verdict:
    return combine("conjugation-axioms", check_laws(conjugation_axiom_laws(S), plan))


def verify_cancellation(S: ConjStructure, plan: EnumerationPlan) -> Verdict:
    return combine("cancellation", check_laws(cancellation_laws(S), plan))


def verify_derived_identities(S: ConjStructure, plan: EnumerationPlan) -> Verdict:
    return combine("derived-identities", check_laws(derived_identity_laws(S), plan))


def verify_hom(h: Hom, plan: EnumerationPlan, as_monoid: Optional[bool] = None) -> Verdict:
    name = h.name or "hom"
    verdict = combine(f"hom({name})", check_laws(hom_laws(h, as_monoid=as_monoid), plan))
    h.verified = verdict
    return verdict


def _ore_candidates(S: ConjStructure, a, b, pool):
    # The conjugation exchange law supplies a universal candidate; a plain
    # commutative swap is tried next, then the window.
    yield (S.add(S.conj(b), b), S.add(S.conj(b), a))
    yield (b, a)
    for s in pool:
        for t in pool:
            yield (s, t)


def verify_ore(S: ConjStructure, plan: EnumerationPlan) -> Verdict:
    """Right Ore condition: every a, b admit s, t with a+s = b+t.

    A pair with no witness in the search window is reported inconclusive,
    never as a disproof.
    """
    pairs, pass_outcome = default_scope((S, S), plan)
    if plan.mode == EXHAUSTIVE:
        pool = S.elements
    elif plan.mode == BOUNDED:
        pool = S.prefix(plan.window)
    else:
        pool = tuple(S.sample(plan.seed, 10_000_019 + i) for i in range(min(plan.count, 32)))
    checked = 0
    witness_note = ""
    for a, b in pairs:
        checked += 1
        found = None
        for s, t in _ore_candidates(S, a, b, pool):
            if S.add(a, s) == S.add(b, t):
                found = (s, t)
                break
        if found is None:
            return Verdict(
                law="ore.common-right-extension",
                outcome=INCONCLUSIVE,
                checked=checked,
                witness=(a, b),
                witness_text=f"({S.fmt(a)}, {S.fmt(b)})",
                detail="no witness found within window",
                seed=plan.seed if plan.mode == SAMPLED else None,
                window=plan.window if plan.mode == BOUNDED else None,
            )
        if not witness_note:
            witness_note = (
                f"e.g. ({S.fmt(a)})+({S.fmt(found[0])}) = ({S.fmt(b)})+({S.fmt(found[1])})"
            )
    return Verdict(
        law="ore.common-right-extension",
        outcome=pass_outcome,
        checked=checked,
        detail=witness_note if checked else "vacuous",
        seed=plan.seed if plan.mode == SAMPLED else None,
        window=plan.window if plan.mode == BOUNDED else None,
    )


def is_group_table(S: ConjStructure) -> bool:
    """Finite carrier forms a group: neutral element plus permutation rows/columns."""
    if not S.is_finite:
        raise KindMismatchError(f"{S.name}: group-table check needs a finite carrier")
    if S.identity is None or not S.elements:
        return False
    universe = set(S.elements)
    for x in S.elements:
        if {S.add(x, y) for y in S.elements} != universe:
            return False
        if {S.add(y, x) for y in S.elements} != universe:
            return False
    return True


def replay_law(laws: list[Law], law_name: str, witness: tuple) -> Verdict:
    """Re-evaluate one named law on a stored witness tuple."""
    for law in laws:
        if law.name == law_name:
            ok = law.holds(*witness)
            return Verdict(
                law=law_name,
                outcome=HOLDS_EXHAUSTIVE if ok else FAILS,
                checked=1,
                witness=None if ok else tuple(witness),
                witness_text="" if ok else law.format_witness(tuple(witness)),
                detail="replay",
            )
    raise KindMismatchError(f"no law named {law_name!r} in this suite")

"""Arc demonstration over the punctured rational-norm disk.

Arrows of the internal category attached to the complex-disk crossed
structure read as geometric arcs: an arrow (x, b) starts at the unit b,
sweeps to u*b where u is x scaled to norm one, and carries radius |x|.
Two arcs compose exactly when the second starts where the first ends, and
the categorical composite collapses to multiplying the points while keeping
the first start.  The demonstration samples composable pairs with exact
rational coordinates, replays each composite through the category's
composition map, and compares against that closed form.  It also records the
standard witness that inverses leave the carrier: the arc at one-half-i has
a formal inverse of norm two.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from random import Random
from typing import Optional

from .core import (
    DescriptionError,
    EnumerationPlan,
    HOLDS_SAMPLED,
    Law,
    Verdict,
    check_law,
)
from .crossed import CrossedData, InternalCategory, build_internal_category
from .descriptions import CROSSED_BUILDERS, normalize_to_unit
from .exact import GaussianRational, Q, parse_rational, rational_text, unit_circle_point

__all__ = [
    "Arc",
    "ArcDemo",
    "arc_category",
    "compose_arcs",
    "sample_composable_pair",
    "inverse_escape_witness",
    "run_arc_demo",
    "write_arc_file",
    "read_arc_file",
    "validate_arc_doc",
]

ARC_FORMAT = "arc-demo"


@dataclass(frozen=True, slots=True)
class Arc:
    """One arrow (point, start) of the complex-disk category."""

    point: GaussianRational
    start: GaussianRational

    def radius2(self) -> Q:
        return self.point.norm2()

    def direction(self) -> GaussianRational:
        return normalize_to_unit(self.point)

    def end(self) -> GaussianRational:
        return self.direction() * self.start

    def arrow(self) -> tuple:
        return (self.point, self.start)


def arc_category(plan: Optional[EnumerationPlan] = None, bound: int = 12) -> tuple[CrossedData, InternalCategory]:
    """Build the complex-disk crossed structure and its internal category."""
    plan = plan or EnumerationPlan.sampled(40, seed=0)
    d = CROSSED_BUILDERS["complex-disk"]({"bound": bound}, plan)
    return d, build_internal_category(d, plan)


def compose_arcs(second: Arc, first: Arc) -> Arc:
    """Closed-form composite: multiply points, keep the first start."""
    if second.start != first.end():
        raise DescriptionError("arcs are not composable: second does not start at first end")
    return Arc(second.point * first.point, first.start)


def _unit(rng: Random, bound: int) -> GaussianRational:
    t = Q(rng.randrange(-4 * bound, 4 * bound + 1), rng.randrange(1, bound + 1))
    return unit_circle_point(t)


def _radius(rng: Random, bound: int) -> Q:
    q = rng.randrange(1, bound + 1)
    return Q(rng.randrange(1, q + 1), q)


def sample_composable_pair(seed: int, index: int, bound: int = 16) -> tuple[Arc, Arc]:
    """Deterministic exact sample: (first, second) with second after first."""
    rng = Random(f"arc|{seed}|{index}")
    first = Arc(_unit(rng, bound).scale(_radius(rng, bound)), _unit(rng, bound))
    second_point = _unit(rng, bound).scale(_radius(rng, bound))
    return first, Arc(second_point, first.end())


def inverse_escape_witness() -> dict:
    """The arc at i/2 from 1: its formal inverse lands outside the disk."""
    half_i = GaussianRational(Q(0), Q(1, 2))
    arc = Arc(half_i, GaussianRational.one())
    candidate = Arc(half_i.inverse(), arc.end())
    return {
        "arrow": arc,
        "inverse": candidate,
        "inverse_norm2": candidate.radius2(),
        "inside_carrier": bool(0 < candidate.radius2() <= 1),
    }


@dataclass(slots=True)
class ArcDemo:
    seed: int
    count: int
    pairs: list
    verdict: Verdict
    witness: dict
    category: InternalCategory
    sample_records: list = field(default_factory=list)


def run_arc_demo(
    count: int = 1000,
    seed: int = 0,
    plan: Optional[EnumerationPlan] = None,
    keep: int = 12,
) -> ArcDemo:
    """Sample composable arc pairs and replay each composite categorically.

    The verdict checks, per pair: the composability bookkeeping (the second
    arc starts at the first one's end), agreement of the category composite
    with the closed form, and that domain and codomain thread through.
    """
    d, cat = arc_category(plan)
    e = d.e
    cod = cat.graph.cod.fn

    def agrees(index: int) -> bool:
        first, second = sample_composable_pair(seed, index)
        if e.f.fn(second.arrow()) != cod(first.arrow()):
            return False
        got = cat.compose(second.arrow(), first.arrow())
        expect = compose_arcs(second, first)
        if got != expect.arrow():
            return False
        return e.f.fn(got) == first.start and cod(got) == second.end()

    law = Law(
        "arcs.composition-closed-form",
        None,
        agrees,
        scope=lambda p: (((i,) for i in range(count)), HOLDS_SAMPLED),
        fmt=lambda tup: f"pair #{tup[0]} of seed {seed}",
    )
    verdict = check_law(law, plan or EnumerationPlan.sampled(count, seed))
    pairs = []
    for i in range(min(keep, count)):
        first, second = sample_composable_pair(seed, i)
        pairs.append((first, second, compose_arcs(second, first)))
    return ArcDemo(
        seed=seed,
        count=count,
        pairs=pairs,
        verdict=verdict,
        witness=inverse_escape_witness(),
        category=cat,
    )


# -- serialization -----------------------------------------------------------


def _gauss_doc(z: GaussianRational) -> dict:
    return {"re": rational_text(z.re), "im": rational_text(z.im)}


def _gauss_parse(doc, where: str) -> GaussianRational:
    if not isinstance(doc, dict) or "re" not in doc or "im" not in doc:
        raise DescriptionError(f"{where}: expected an object with 're'/'im'")
    try:
        return GaussianRational(parse_rational(str(doc["re"])), parse_rational(str(doc["im"])))
    except (ValueError, ZeroDivisionError) as exc:
        raise DescriptionError(f"{where}: bad rational: {exc}") from exc


def _arc_doc(arc: Arc) -> dict:
    return {
        "point": _gauss_doc(arc.point),
        "start": _gauss_doc(arc.start),
        "radius2": rational_text(arc.radius2()),
        "end": _gauss_doc(arc.end()),
    }


def _arc_parse(doc, where: str) -> tuple[Arc, list[str]]:
    if not isinstance(doc, dict):
        raise DescriptionError(f"{where}: arc must be an object")
    arc = Arc(
        _gauss_parse(doc.get("point"), f"{where}.point"),
        _gauss_parse(doc.get("start"), f"{where}.start"),
    )
    problems = []
    if not 0 < arc.radius2() <= 1:
        problems.append(f"{where}: point lies outside the punctured disk")
        return arc, problems
    if "radius2" in doc and parse_rational(str(doc["radius2"])) != arc.radius2():
        problems.append(f"{where}: stored radius2 disagrees with the point")
    if "end" in doc and _gauss_parse(doc["end"], f"{where}.end") != arc.end():
        problems.append(f"{where}: stored end disagrees with direction * start")
    return arc, problems


def write_arc_file(path: str, demo: ArcDemo) -> dict:
    witness = demo.witness
    doc = {
        "format": ARC_FORMAT,
        "version": 1,
        "seed": demo.seed,
        "count": demo.count,
        "outcome": demo.verdict.outcome,
        "pairs": [
            {
                "first": _arc_doc(first),
                "second": _arc_doc(second),
                "composite": _arc_doc(composite),
            }
            for first, second, composite in demo.pairs
        ],
        "inverse_witness": {
            "arrow": _arc_doc(witness["arrow"]),
            "inverse_point": _gauss_doc(witness["inverse"].point),
            "inverse_start": _gauss_doc(witness["inverse"].start),
            "inverse_norm2": rational_text(witness["inverse_norm2"]),
            "inside_carrier": witness["inside_carrier"],
        },
    }
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(doc, fh, indent=2, sort_keys=True)
        fh.write("\n")
    return doc


def validate_arc_doc(doc: dict) -> list[str]:
    """Re-derive every stored field; return human-readable mismatches."""
    problems: list[str] = []
    if not isinstance(doc, dict) or doc.get("format") != ARC_FORMAT:
        raise DescriptionError(f"not an {ARC_FORMAT} document")
    pairs = doc.get("pairs")
    if not isinstance(pairs, list):
        raise DescriptionError("'pairs' must be an array")
    for i, entry in enumerate(pairs):
        where = f"pairs[{i}]"
        if not isinstance(entry, dict):
            raise DescriptionError(f"{where}: expected an object")
        first, p1 = _arc_parse(entry.get("first"), f"{where}.first")
        second, p2 = _arc_parse(entry.get("second"), f"{where}.second")
        composite, p3 = _arc_parse(entry.get("composite"), f"{where}.composite")
        problems.extend(p1 + p2 + p3)
        if p1 or p2:
            continue
        if second.start != first.end():
            problems.append(f"{where}: pair is not composable")
            continue
        if composite != compose_arcs(second, first):
            problems.append(f"{where}: composite disagrees with the composition rule")
    witness = doc.get("inverse_witness")
    if witness is not None:
        arrow, pw = _arc_parse(witness.get("arrow"), "inverse_witness.arrow")
        problems.extend(pw)
        inv_point = _gauss_parse(witness.get("inverse_point"), "inverse_witness.inverse_point")
        if not pw:
            if inv_point * arrow.point != GaussianRational.one():
                problems.append("inverse_witness: stated inverse does not invert the point")
            stored = parse_rational(str(witness.get("inverse_norm2", "0")))
            if stored != inv_point.norm2():
                problems.append("inverse_witness: stored norm disagrees")
            inside = bool(0 < inv_point.norm2() <= 1)
            if bool(witness.get("inside_carrier")) != inside:
                problems.append("inverse_witness: carrier flag disagrees")
    return problems


def read_arc_file(path: str) -> tuple[dict, list[str]]:
    try:
        with open(path, "r", encoding="utf-8") as fh:
            doc = json.load(fh)
    except OSError as exc:
        raise DescriptionError(f"cannot read {path}: {exc}") from exc
    except json.JSONDecodeError as exc:
        raise DescriptionError(f"{path} is not valid JSON: {exc}") from exc
    return doc, validate_arc_doc(doc)

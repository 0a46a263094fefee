"""Command-line front end.

Subcommands mirror the library layers: verify (carrier laws), schreier
(split extensions and their retraction laws), classify (kernel maps and the
internal structures they admit), admissible (connector existence for split
diagrams), demo-arcs (the complex-disk showcase), and gallery (the fixed
exhibit table).  JSON documents describe every input; exit status is 0 for a
clean run, 1 when a checked law fails or a requested construction is
refused, and 2 for unusable input.
"""

from __future__ import annotations

import argparse
import json
import sys
from typing import Optional

from .core import (
    CheckFailedError,
    ConditionFailedError,
    ConjError,
    DescriptionError,
    DimensionError,
    EnumerationPlan,
    HuqFailedError,
    KindMismatchError,
    PlanError,
    TableError,
    check_laws,
)
from .laws import is_group_table, law_suite, replay_law, verify_ore
from .schreier import (
    action_from_extension,
    roundtrip_iso,
    verify_action_compatibility,
    verify_retraction_conjugation,
    verify_retraction_laws,
)
from .crossed import build_groupoid, build_internal_category, build_reflexive_graph, classify
from .admissibility import (
    attach_schreier_data,
    check_admissible_oracle,
    check_admissibility_criterion,
    check_commuting_kernels,
    check_three_way,
    check_twisted_commutation,
    compare_oracle_and_criterion,
    verify_diagram,
)
from .descriptions import (
    decode_witness,
    load_document,
    parse_crossed,
    parse_diagram,
    parse_extension,
    parse_structure,
)
from .arcs import read_arc_file, run_arc_demo, write_arc_file
from .gallery import run_gallery
from .reports import Report, plan_line, structure_line

USAGE_ERRORS = (DescriptionError, TableError, DimensionError, KindMismatchError, PlanError)


def parse_plan(text: str, seed: int) -> EnumerationPlan:
    if text == "exhaustive":
        return EnumerationPlan.exhaustive()
    mode, _, value = text.partition("=")
    if mode == "bounded" and value.isdigit() and int(value) > 0:
        return EnumerationPlan.bounded(int(value))
    if mode == "sampled" and value.isdigit() and int(value) > 0:
        return EnumerationPlan.sampled(int(value), seed=seed)
    raise DescriptionError(
        f"bad plan {text!r}: use exhaustive, bounded=N, or sampled=N"
    )


def _echo(args: argparse.Namespace) -> str:
    parts = ["conjcheck", args.command]
    if getattr(args, "path", None):
        parts.append(args.path)
    for flag in ("plan", "seed", "mode", "build", "count"):
        value = getattr(args, flag, None)
        if value is not None:
            parts.append(f"--{flag} {value}")
    return " ".join(str(p) for p in parts)


def _emit(report: Report, out) -> None:
    out.write(report.render())


def cmd_verify(args, out) -> int:
    plan = parse_plan(args.plan, args.seed)
    S = parse_structure(load_document(args.path))
    report = Report(_echo(args))
    report.summary(structure_line("structure", S))
    report.summary(plan_line(plan))
    laws = law_suite(S)
    if args.replay is not None:
        law = next((l for l in laws if l.name == args.replay), None)
        if law is None:
            known = ", ".join(l.name for l in laws)
            raise DescriptionError(f"no law named {args.replay!r} (known: {known})")
        try:
            witness_doc = json.loads(args.witness or "null")
        except json.JSONDecodeError as exc:
            raise DescriptionError(f"--witness is not valid JSON: {exc}") from exc
        witness = decode_witness(law, witness_doc)
        report.add(replay_law(laws, args.replay, witness))
        _emit(report, out)
        return report.exit_code
    report.add(*check_laws(laws, plan))
    report.add(verify_ore(S, plan))
    if S.is_finite:
        shape = "group" if is_group_table(S) else "monoid, not a group"
        report.note(f"finite carrier: {shape}")
    _emit(report, out)
    return report.exit_code


def cmd_schreier(args, out) -> int:
    plan = parse_plan(args.plan, args.seed)
    e = parse_extension(load_document(args.path), plan)
    report = Report(_echo(args))
    report.summary(structure_line("kernel", e.X))
    report.summary(structure_line("total", e.A))
    report.summary(structure_line("base", e.B))
    report.summary(plan_line(plan))
    report.add(*e.verdicts.values())
    report.add(verify_retraction_laws(e, plan))
    report.add(verify_retraction_conjugation(e, plan))
    report.add(roundtrip_iso(e, plan))
    report.add(verify_action_compatibility(action_from_extension(e, plan), plan))
    _emit(report, out)
    return report.exit_code


def cmd_classify(args, out) -> int:
    plan = parse_plan(args.plan, args.seed)
    d = parse_crossed(load_document(args.path), plan)
    report = Report(_echo(args))
    report.summary(structure_line("kernel", d.e.X))
    report.summary(structure_line("base", d.e.B))
    report.summary(plan_line(plan))
    c = classify(d, plan)
    report.add(*c.verdicts.values())
    report.note(f"classification: {c.label}")
    failing = sum(1 for v in c.verdicts.values() if v.failed)
    report.conclusion = f"result: {c.label} ({3 - failing} of 3 grading laws hold)"
    exit_code = 0
    if args.build is not None:
        builders = {
            "graph": build_reflexive_graph,
            "category": build_internal_category,
            "groupoid": build_groupoid,
        }
        try:
            built = builders[args.build](d, plan)
        except ConditionFailedError as exc:
            witness = f" at {exc.verdict.witness_text}" if exc.verdict else ""
            report.note(f"{args.build}: refused, {exc.condition} fails{witness}")
            exit_code = 1
        else:
            verdicts = getattr(built, "verdicts", {})
            report.add(*verdicts.values())
            report.note(f"{args.build}: constructed")
            exit_code = 1 if any(v.failed for v in verdicts.values()) else 0
    _emit(report, out)
    return exit_code


def cmd_admissible(args, out) -> int:
    plan = parse_plan(args.plan, args.seed)
    d = parse_diagram(load_document(args.path), plan)
    report = Report(_echo(args))
    report.summary(f"diagram: {d.name}")
    report.summary(plan_line(plan))
    report.add(verify_diagram(d, plan))
    mode = args.mode
    if mode in ("kernels", "three-way", "twisted") and d.is_finite():
        d = attach_schreier_data(d, plan)
    if mode == "both" and not d.is_finite():
        report.note("oracle skipped: infinite pullback, running the criterion only")
        mode = "criterion"
    if mode == "both":
        agreement = compare_oracle_and_criterion(d, plan)
        report.add(agreement.oracle.verdict, agreement.criterion.verdict, agreement.agreement)
        if agreement.oracle.reason:
            report.note(f"oracle: {agreement.oracle.reason}")
    elif mode == "oracle":
        result = check_admissible_oracle(d)
        report.add(result.verdict)
        if result.reason:
            report.note(f"oracle: {result.reason}")
    elif mode == "criterion":
        report.add(check_admissibility_criterion(d, plan).verdict)
    elif mode == "kernels":
        try:
            result = check_commuting_kernels(d, plan)
        except HuqFailedError as exc:
            report.note(str(exc))
            _emit(report, out)
            return 1
        report.add(result.huq, result.verdict)
    elif mode == "three-way":
        report.add(*check_three_way(d, plan).verdicts.values())
    elif mode == "twisted":
        result = check_twisted_commutation(d, plan)
        report.add(result.admissible, result.identity, result.agreement)
    _emit(report, out)
    return report.exit_code


def cmd_demo_arcs(args, out) -> int:
    if args.check is not None:
        report = Report(f"conjcheck demo-arcs --check {args.check}")
        doc, problems = read_arc_file(args.check)
        report.summary(f"checking {args.check}: {len(doc.get('pairs', []))} stored pairs")
        for problem in problems:
            report.note(problem)
        report.note("file is internally consistent" if not problems else "file deviates")
        _emit(report, out)
        return 1 if problems else 0
    report = Report(_echo(args))
    demo = run_arc_demo(count=args.count, seed=args.seed)
    report.summary(f"sampled {demo.count} composable arc pairs (seed {demo.seed})")
    report.add(demo.verdict)
    witness = demo.witness
    arc = witness["arrow"]
    inverse = witness["inverse"]
    report.note(
        f"arc point={arc.point} start={arc.start}: formal inverse point={inverse.point}"
        f" has squared norm {witness['inverse_norm2']}"
        + (" (inside carrier)" if witness["inside_carrier"] else " (outside the carrier)")
    )
    for first, second, composite in demo.pairs[:3]:
        report.note(
            f"({second.point}, {second.start}) after ({first.point}, {first.start})"
            f" = ({composite.point}, {composite.start})"
        )
    if args.out is not None:
        write_arc_file(args.out, demo)
        report.note(f"wrote {args.out}")
    _emit(report, out)
    return report.exit_code


def cmd_gallery(args, out) -> int:
    text, code = run_gallery()
    out.write(text)
    if args.out is not None:
        with open(args.out, "w", encoding="utf-8") as fh:
            fh.write(text)
    return code


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="conjcheck",
        description="check conjugation-monoid laws, split extensions, and connectors",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def with_plan(p):
        p.add_argument("--plan", default="sampled=200",
                       help="exhaustive, bounded=N, or sampled=N (default sampled=200)")
        p.add_argument("--seed", type=int, default=0, help="seed for sampled plans")

    p = sub.add_parser("verify", help="carrier axioms, cancellation, derived identities")
    p.add_argument("path", help="structure document (JSON)")
    with_plan(p)
    p.add_argument("--replay", metavar="LAW", default=None,
                   help="re-evaluate one law at --witness instead of scanning")
    p.add_argument("--witness", metavar="JSON", default=None,
                   help="witness tuple for --replay, as a JSON array")
    p.set_defaults(run=cmd_verify)

    p = sub.add_parser("schreier", help="split extension: retraction, action, laws")
    p.add_argument("path", help="extension document (JSON)")
    with_plan(p)
    p.set_defaults(run=cmd_schreier)

    p = sub.add_parser("classify", help="grade a kernel map and build internal structures")
    p.add_argument("path", help="crossed-structure document (JSON)")
    with_plan(p)
    p.add_argument("--build", choices=("graph", "category", "groupoid"), default=None)
    p.set_defaults(run=cmd_classify)

    p = sub.add_parser("admissible", help="connector existence for a split diagram")
    p.add_argument("path", help="diagram document (JSON)")
    with_plan(p)
    p.add_argument("--mode", default="both",
                   choices=("both", "oracle", "criterion", "kernels", "three-way", "twisted"))
    p.set_defaults(run=cmd_admissible)

    p = sub.add_parser("demo-arcs", help="compose exact arcs over the punctured disk")
    p.add_argument("--count", type=int, default=1000, help="composable pairs to sample")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out", default=None, help="write the sampled pairs as JSON")
    p.add_argument("--check", default=None, help="validate a previously written arc file")
    p.set_defaults(run=cmd_demo_arcs)

    p = sub.add_parser("gallery", help="run the fixed exhibit table")
    p.add_argument("--out", default=None, help="also write the table to a file")
    p.set_defaults(run=cmd_gallery)
    return parser


def main(argv: Optional[list] = None, out=None) -> int:
    out = out or sys.stdout
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.run(args, out)
    except USAGE_ERRORS as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except (CheckFailedError, ConditionFailedError, HuqFailedError) as exc:
        print(f"refused: {exc}", file=sys.stderr)
        return 1
    except ConjError as exc:
        print(f"failed: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())

"""Deterministic plain-text reports for the command line.

A report is a command echo, a few summary lines, and one line per law
verdict.  Rendering is stable across runs: no timestamps, no unsorted
collections, witnesses already formatted by the law that produced them.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .core import ConjStructure, EnumerationPlan, SAMPLED, BOUNDED, Verdict

__all__ = ["Report", "structure_line", "plan_line"]


def structure_line(role: str, S: ConjStructure) -> str:
    size = S.size
    extent = f"{size} elements" if size is not None else "infinite"
    return f"{role}: {S.name} ({S.kind}, {extent})"


def plan_line(plan: EnumerationPlan) -> str:
    if plan.mode == SAMPLED:
        return f"plan: sampled count={plan.count} seed={plan.seed}"
    if plan.mode == BOUNDED:
        return f"plan: bounded window={plan.window}"
    return "plan: exhaustive"


@dataclass
class Report:
    command: str
    summaries: list[str] = field(default_factory=list)
    rows: list[Verdict] = field(default_factory=list)
    notes: list[str] = field(default_factory=list)
    conclusion: str = ""

    def summary(self, text: str) -> None:
        self.summaries.append(text)

    def add(self, *verdicts: Verdict) -> None:
        seen = {have.law for have in self.rows}
        for v in verdicts:
            if v.law not in seen:
                self.rows.append(v)
                seen.add(v.law)

    def note(self, text: str) -> None:
        self.notes.append(text)

    @property
    def failed(self) -> bool:
        return any(v.failed for v in self.rows)

    @property
    def exit_code(self) -> int:
        return 1 if self.failed else 0

    def render(self) -> str:
        lines = [f"command: {self.command}"]
        lines.extend(self.summaries)
        if self.rows:
            lines.append("")
            lines.extend(v.line() for v in self.rows)
        if self.notes:
            lines.append("")
            lines.extend(self.notes)
        failed = sum(1 for v in self.rows if v.failed)
        verdict = "FAIL" if failed else "PASS"
        lines.append("")
        lines.append(self.conclusion or f"result: {verdict} ({len(self.rows)} laws, {failed} failed)")
        return "\n".join(lines) + "\n"

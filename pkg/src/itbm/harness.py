"""Recognizability trials and the bounded halting set.

A trial runs one program on each of finitely many candidate inputs and
reports whether it behaves as a recognizer of the target on that pool:
output 1 exactly on the target, 0 elsewhere, halting everywhere.  Any
certified non-halting or undefined run is a failure (a recognizer must
halt on every input); unresolved runs leave the trial inconclusive.

The bounded halting set classifies program indices by running each
decoded program on input 0 under the node-count clock bound: halting
times are exact ordinals, certified non-halting and undefined runs both
count as divergent, and budget exhaustion stays unknown.
"""

from __future__ import annotations

from dataclasses import dataclass

from .asm import godel_decode
from .machine import Budget, Program, Verdict, run
from .numeric import BitSet


@dataclass(frozen=True)
class Trial:
    program: Program
    target: BitSet
    candidates: tuple[BitSet, ...]
    budget: Budget = Budget()

    def __post_init__(self) -> None:
        hits = sum(1 for c in self.candidates if c == self.target)
        if hits != 1:
            raise ValueError("the target must appear exactly once among candidates")


@dataclass(frozen=True)
class TrialReport:
    status: str  # "recognizes_on_candidates" | "fails" | "inconclusive"
    failing: BitSet | None
    reason: str | None
    results: tuple[tuple[BitSet, Verdict], ...]

    def to_json(self) -> dict:
        out = {
            "status": self.status,
            "results": [
                {"candidate": c.to_json(), **v.to_json()} for c, v in self.results
            ],
        }
        if self.failing is not None:
            out["failing"] = self.failing.to_json()
        if self.reason is not None:
            out["reason"] = self.reason
        return out


def check_recognizer(trial: Trial) -> TrialReport:
    """Run every candidate and classify; candidate order is authoritative.

    Candidates are independent runs (safe to parallelize); the report is
    assembled in listing order either way.
    """
    results = tuple(
        (c, run(trial.program, c.to_real(), trial.budget).verdict)
        for c in trial.candidates
    )
    for c, v in results:
        if v.kind in ("nonhalting", "undefined"):
            return TrialReport("fails", c, f"does not halt ({v.reason})", results)
        if v.kind == "halted":
            expected = 1 if c == trial.target else 0
            if v.output != expected:
                reason = (
                    "rejects the target" if c == trial.target else "accepts a non-target"
                )
                return TrialReport("fails", c, reason, results)
    for c, v in results:
        if v.kind == "unknown":
            return TrialReport("inconclusive", c, v.reason, results)
    return TrialReport("recognizes_on_candidates", None, None, results)


def bounded_halting_set(indices, budget: Budget | None = None) -> dict[int, tuple]:
    """index -> ("halts", time) | ("diverges", reason) | ("unknown", reason).

    Undefined runs count as divergent: the halting set collects halting
    programs only.
    """
    out: dict[int, tuple] = {}
    for i in indices:
        program = godel_decode(i)
        verdict = run(program, 0, budget).verdict
        if verdict.kind == "halted":
            out[i] = ("halts", verdict.time)
        elif verdict.kind in ("nonhalting", "undefined"):
            out[i] = ("diverges", verdict.reason)
        else:
            out[i] = ("unknown", verdict.reason)
    return out

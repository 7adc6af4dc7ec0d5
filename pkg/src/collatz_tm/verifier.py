"""Bounded checks of the shipped machines against the 3x+1 oracle.

Every check starts a machine on the encoding of one positive integer, runs it
on the accelerated engine, reads checkpoint values off the tape and compares
them with :func:`collatz_tm.oracle.trajectory`.

Verdicts:

``pass``          the expected event happened (halt in the designated state,
                  Theorem-1 target, or loop entry) and the checkpoints agree
                  with the oracle
``weak-pass``     a never-halting machine used up its budget without halting
                  or getting stuck before the loop was observed
``inconclusive``  a halting machine, or M1, used up its budget; this says
                  nothing about the conjecture
``fail``          stuck, halted when it must not, halted in the wrong state,
                  or the checkpoints disagree with the oracle
"""

from __future__ import annotations

import enum
import json
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

from .accel import AcceleratedRun
from .core import Status, initial_configuration
from .encodings import EXACT, SUBSEQUENCE, THEOREM1_PROBE, checkpoint, encode, template, theorem1_target
from .errors import UsageError
from .oracle import is_subsequence, loop_continuation, trajectory
from .zoo import BUILTIN_NAMES, EXPECTED_DERIVATIONS, ZooEntry, builtin, derivation_problems, diff_machines

# Unary runs are quadratic in the simulated value; n <= 1000 needs ~1e11 steps.
DEFAULT_MAX_STEPS = 10**12

HALTING_MACHINES = ("M3", "M5", "M6", "M8")
NEVER_HALTING_MACHINES = ("M1", "M2", "M4", "M7")


class Outcome(str, enum.Enum):
    HALTED = "halted"
    THEOREM1 = "theorem1-config-reached"
    LOOP_REACHED = "loop-reached"
    BUDGET = "budget-exhausted"
    STUCK = "stuck"
    MISMATCH = "checkpoint-mismatch"


class Verdict(str, enum.Enum):
    PASS = "pass"
    WEAK_PASS = "weak-pass"
    INCONCLUSIVE = "inconclusive"
    FAIL = "fail"


@dataclass
class VerificationReport:
    machine: str
    input: int
    word: str
    outcome: Outcome
    steps: int
    checkpoints: tuple[int, ...]
    trajectory: tuple[int, ...]
    verdict: Verdict
    reason: str
    declared_mode: str
    comparison_mode: str | None
    theorem1_n: int | None = None
    halt_state: str | None = None
    stuck_key: tuple[str, str] | None = None
    transcription_error: bool = False

    @property
    def passed(self) -> bool:
        return self.verdict in (Verdict.PASS, Verdict.WEAK_PASS)

    def to_record(self) -> dict:
        """Flat, JSON-ready record; field order is fixed."""
        return {
            "machine": self.machine,
            "input": self.input,
            "outcome": self.outcome.value,
            "steps": self.steps,
            "verdict": self.verdict.value,
            "reason": self.reason,
            "comparison_mode": self.comparison_mode,
            "checkpoints": len(self.checkpoints),
            "trajectory_length": len(self.trajectory),
            "theorem1_n": self.theorem1_n,
            "halt_state": self.halt_state,
            "stuck_key": list(self.stuck_key) if self.stuck_key else None,
        }

    def to_json(self) -> str:
        return json.dumps(self.to_record(), separators=(",", ":"))

    def to_text(self) -> str:
        extra = ""
        if self.theorem1_n is not None:
            extra = f" n={self.theorem1_n}"
        elif self.halt_state is not None:
            extra = f" halt={self.halt_state}"
        mode = self.comparison_mode or "-"
        return (
            f"{self.machine} {self.input} {self.verdict.value} {self.outcome.value}{extra} "
            f"steps={self.steps} checkpoints={len(self.checkpoints)}/{len(self.trajectory)} mode={mode}"
            + ("" if self.verdict is Verdict.PASS else f" ({self.reason})")
        )


def compare_checkpoints(checkpoints, traj, complete: bool) -> str | None:
    """Strongest comparison mode that holds, or ``None``.

    Readings past the oracle's final 1 must follow the loop 2, 1, 2, ...
    With ``complete`` set the readings must also reach that final 1.
    """
    traj = tuple(traj)
    if not checkpoints:
        return None
    extended = traj + loop_continuation(max(0, len(checkpoints) - len(traj)) + 1)
    if tuple(checkpoints) == extended[: len(checkpoints)] and (not complete or len(checkpoints) >= len(traj)):
        return EXACT
    if checkpoints[0] != traj[0] or not is_subsequence(checkpoints, extended):
        return None
    if complete and checkpoints[-1] != 1:
        return None
    return SUBSEQUENCE


@dataclass
class _Trace:
    status: Status | None
    steps: int
    checkpoints: list[int]
    final_state: str
    stuck_key: tuple[str, str] | None = None
    theorem1_n: int | None = None
    loop_reached: bool = False


def _simulate(entry: ZooEntry, value: int, max_steps: int, *, watch_theorem1: bool, stop_at_loop: bool) -> _Trace:
    tmpl = template(entry.template_id)
    machine = entry.machine
    sim = AcceleratedRun(machine, initial_configuration(machine, encode(value, entry.encoding)))
    probes = tmpl.probes + ((THEOREM1_PROBE,) if watch_theorem1 else ())
    readings: list[int] = []
    while True:
        status = sim.advance(max_steps - sim.steps_taken, probes)
        if status is not None:
            # no configuration(): a runaway tape can hold ~max_steps cells
            key = (sim.state, sim.symbol) if status is Status.STUCK else None
            return _Trace(status, sim.steps_taken, readings, sim.state, key)
        config = sim.configuration()
        v = checkpoint(tmpl, config)
        if v is not None and not (tmpl.collapse_repeats and readings and readings[-1] == v):
            readings.append(v)
        # the start configuration does not count as reaching the loop
        if config.steps_taken == 0:
            continue
        if watch_theorem1:
            n = theorem1_target(config)
            if n is not None:
                return _Trace(None, sim.steps_taken, readings, config.state, theorem1_n=n)
        elif stop_at_loop and v == 1:
            return _Trace(None, sim.steps_taken, readings, config.state, loop_reached=True)


def _report(entry, value, trace, outcome, verdict, reason, mode, traj, **extra) -> VerificationReport:
    return VerificationReport(
        machine=entry.name,
        input=value,
        word=encode(value, entry.encoding),
        outcome=outcome,
        steps=trace.steps,
        checkpoints=tuple(trace.checkpoints),
        trajectory=traj.values,
        verdict=verdict,
        reason=reason,
        declared_mode=template(entry.template_id).comparison_mode,
        comparison_mode=mode,
        **extra,
    )


def _mode_ok(declared: str, observed: str | None) -> bool:
    return observed == EXACT or (observed == SUBSEQUENCE and declared == SUBSEQUENCE)


def _check_input(value: int, max_steps: int) -> None:
    if not isinstance(value, int) or value < 1:
        raise UsageError(f"inputs must be positive integers, got {value!r}")
    if not isinstance(max_steps, int) or max_steps < 0:
        raise UsageError(f"max_steps must be a non-negative integer, got {max_steps!r}")


def _stuck_report(entry, value, trace, traj) -> VerificationReport:
    q, a = trace.stuck_key
    return _report(
        entry, value, trace, Outcome.STUCK, Verdict.FAIL,
        f"no transition for ({q},{a}): table transcription error?", None, traj,
        stuck_key=trace.stuck_key, transcription_error=True,
    )


def verify_theorem1(x: int, max_steps: int = DEFAULT_MAX_STEPS) -> VerificationReport:
    """Run M1 on ``x`` in base 3 until ``^ω b0^n(A1)b^ω``; checkpoints must equal the trajectory."""
    _check_input(x, max_steps)
    entry = builtin("M1")
    traj = trajectory(x)
    trace = _simulate(entry, x, max_steps, watch_theorem1=True, stop_at_loop=False)
    if trace.status is Status.STUCK:
        return _stuck_report(entry, x, trace, traj)
    if trace.status is Status.HALTED:
        return _report(entry, x, trace, Outcome.HALTED, Verdict.FAIL, "M1 has no halting transition", None, traj,
                       halt_state=trace.final_state)
    if trace.status is Status.BUDGET_EXHAUSTED:
        mode = compare_checkpoints(trace.checkpoints, traj.values, complete=False)
        if mode != EXACT:
            return _report(entry, x, trace, Outcome.MISMATCH, Verdict.FAIL, "checkpoints diverge from the oracle", mode, traj)
        return _report(entry, x, trace, Outcome.BUDGET, Verdict.INCONCLUSIVE, "target not reached within budget", mode, traj)
    mode = compare_checkpoints(trace.checkpoints, traj.values, complete=True)
    if mode != EXACT:
        return _report(entry, x, trace, Outcome.MISMATCH, Verdict.FAIL,
                       "checkpoints do not equal the oracle trajectory", mode, traj, theorem1_n=trace.theorem1_n)
    return _report(entry, x, trace, Outcome.THEOREM1, Verdict.PASS, "ok", mode, traj, theorem1_n=trace.theorem1_n)


def verify_halting(machine_name: str, value: int, max_steps: int = DEFAULT_MAX_STEPS) -> VerificationReport:
    """Run a halting machine (M3, M5, M6, M8) and require a halt in its halt state."""
    entry = builtin(machine_name)
    if not entry.halts:
        raise UsageError(f"{machine_name} has no halting transition; use verify_never_halting")
    _check_input(value, max_steps)
    traj = trajectory(value)
    declared = template(entry.template_id).comparison_mode
    trace = _simulate(entry, value, max_steps, watch_theorem1=False, stop_at_loop=False)
    if trace.status is Status.STUCK:
        return _stuck_report(entry, value, trace, traj)
    if trace.status is Status.BUDGET_EXHAUSTED:
        mode = compare_checkpoints(trace.checkpoints, traj.values, complete=False)
        if not _mode_ok(declared, mode):
            return _report(entry, value, trace, Outcome.MISMATCH, Verdict.FAIL, "checkpoints diverge from the oracle", mode, traj)
        return _report(entry, value, trace, Outcome.BUDGET, Verdict.INCONCLUSIVE, "no halt within budget", mode, traj)
    if trace.final_state != entry.halt_state:
        return _report(entry, value, trace, Outcome.HALTED, Verdict.FAIL,
                       f"halted in {trace.final_state}, expected {entry.halt_state}", None, traj, halt_state=trace.final_state)
    mode = compare_checkpoints(trace.checkpoints, traj.values, complete=True)
    if not _mode_ok(declared, mode):
        return _report(entry, value, trace, Outcome.MISMATCH, Verdict.FAIL,
                       "checkpoints do not match the oracle trajectory", mode, traj, halt_state=trace.final_state)
    return _report(entry, value, trace, Outcome.HALTED, Verdict.PASS, "ok", mode, traj, halt_state=trace.final_state)


def verify_never_halting(machine_name: str, value: int, max_steps: int = DEFAULT_MAX_STEPS) -> VerificationReport:
    """Run a never-halting machine (M1, M2, M4, M7) until it enters the loop, or the budget runs out."""
    entry = builtin(machine_name)
    if entry.halts:
        raise UsageError(f"{machine_name} has a halting transition; use verify_halting")
    if machine_name == "M1":
        return verify_theorem1(value, max_steps)
    _check_input(value, max_steps)
    traj = trajectory(value)
    declared = template(entry.template_id).comparison_mode
    trace = _simulate(entry, value, max_steps, watch_theorem1=False, stop_at_loop=True)
    if trace.status is Status.STUCK:
        return _stuck_report(entry, value, trace, traj)
    if trace.status is Status.HALTED:
        return _report(entry, value, trace, Outcome.HALTED, Verdict.FAIL,
                       "a never-halting machine halted", None, traj, halt_state=trace.final_state)
    complete = trace.loop_reached
    mode = compare_checkpoints(trace.checkpoints, traj.values, complete=complete)
    if not _mode_ok(declared, mode):
        return _report(entry, value, trace, Outcome.MISMATCH, Verdict.FAIL, "checkpoints diverge from the oracle", mode, traj)
    if not complete:
        return _report(entry, value, trace, Outcome.BUDGET, Verdict.WEAK_PASS,
                       "no halt within budget; loop entry not observed", mode, traj)
    return _report(entry, value, trace, Outcome.LOOP_REACHED, Verdict.PASS, "ok", mode, traj)


def verify(machine_name: str, value: int, max_steps: int = DEFAULT_MAX_STEPS) -> VerificationReport:
    """Dispatch to the check that fits ``machine_name``."""
    if machine_name not in BUILTIN_NAMES:
        raise UsageError(f"unknown machine {machine_name!r}")
    if builtin(machine_name).halts:
        return verify_halting(machine_name, value, max_steps)
    return verify_never_halting(machine_name, value, max_steps)


@dataclass
class RangeSummary:
    machine: str
    lo: int
    hi: int
    reports: list[VerificationReport]
    wall_time_s: float = 0.0

    @property
    def verdict_counts(self) -> dict[str, int]:
        counts = {v.value: 0 for v in Verdict}
        for r in self.reports:
            counts[r.verdict.value] += 1
        return counts

    @property
    def outcome_counts(self) -> dict[str, int]:
        counts = {o.value: 0 for o in Outcome}
        for r in self.reports:
            counts[r.outcome.value] += 1
        return counts

    @property
    def max_steps_observed(self) -> int:
        return max((r.steps for r in self.reports), default=0)

    @property
    def all_passed(self) -> bool:
        return all(r.verdict is Verdict.PASS for r in self.reports)

    @property
    def exit_code(self) -> int:
        """0 all pass, 1 any failure, 2 budget ran out somewhere but nothing failed."""
        counts = self.verdict_counts
        if counts["fail"]:
            return 1
        if counts["weak-pass"] or counts["inconclusive"]:
            return 2
        return 0

    def summary_record(self) -> dict:
        return {
            "machine": self.machine,
            "lo": self.lo,
            "hi": self.hi,
            "count": len(self.reports),
            "verdicts": self.verdict_counts,
            "outcomes": self.outcome_counts,
            "max_steps_observed": self.max_steps_observed,
            "wall_time_s": round(self.wall_time_s, 3),
        }

    def to_text(self) -> str:
        lines = [r.to_text() for r in self.reports]
        c = self.verdict_counts
        lines.append(
            f"{self.machine} [{self.lo}, {self.hi}]: {c['pass']} pass, {c['weak-pass']} weak-pass, "
            f"{c['inconclusive']} inconclusive, {c['fail']} fail; max steps {self.max_steps_observed}; "
            f"wall time {self.wall_time_s:.2f}s"
        )
        return "\n".join(lines)

    def to_json_lines(self) -> str:
        lines = [r.to_json() for r in self.reports]
        lines.append(json.dumps({"summary": self.summary_record()}, separators=(",", ":")))
        return "\n".join(lines)


def verify_range(machine_name: str, lo: int, hi: int, max_steps: int = DEFAULT_MAX_STEPS, jobs: int = 1) -> RangeSummary:
    """Verify every input in ``[lo, hi]``; reports are ordered by input whatever ``jobs`` is."""
    if machine_name not in BUILTIN_NAMES:
        raise UsageError(f"unknown machine {machine_name!r}")
    if not (isinstance(lo, int) and isinstance(hi, int)) or lo < 1 or hi < lo:
        raise UsageError(f"need 1 <= lo <= hi, got lo={lo!r}, hi={hi!r}")
    if jobs < 1:
        raise UsageError(f"jobs must be at least 1, got {jobs}")
    start = time.perf_counter()
    inputs = range(lo, hi + 1)
    if jobs == 1:
        reports = [verify(machine_name, v, max_steps) for v in inputs]
    else:
        with ThreadPoolExecutor(max_workers=jobs) as pool:
            reports = list(pool.map(lambda v: verify(machine_name, v, max_steps), inputs))
    return RangeSummary(machine_name, lo, hi, reports, time.perf_counter() - start)


@dataclass
class DerivationResult:
    base: str
    derived: str
    description: str
    problems: list[str] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.problems


def derivation_check() -> list[DerivationResult]:
    """Structural diff of each documented (base, derived) machine pair."""
    results = []
    for base, derived in EXPECTED_DERIVATIONS:
        d = diff_machines(builtin(base).machine, builtin(derived).machine)
        results.append(DerivationResult(base, derived, d.describe(), derivation_problems(base, derived)))
    return results

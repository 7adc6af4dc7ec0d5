"""Acceptance criteria, one test each.

Every test carries ``@pytest.mark.criterion(id)``; the conftest prints one
PASS/FAIL line per criterion at the end of the run.  Run just this file with

    pytest tests/test_acceptance.py -v

The bounded range checks take a few minutes on one core, most of it M4 (its
tape fragments into alternating symbols, so block compression helps little).
"""

from __future__ import annotations

import functools
import random

import pytest

from collatz_tm.accel import run_accelerated
from collatz_tm.core import Status, initial_configuration, run
from collatz_tm.encodings import EXACT, Representation, decode, encode
from collatz_tm.oracle import t_step, trajectory
from collatz_tm.verifier import Outcome, Verdict, derivation_check, verify_halting, verify_range, verify_theorem1
from collatz_tm.zoo import BUILTIN_NAMES, builtin, builtin_source, format_machine, parse_machine

RANGES = {"M1": 2000, "M2": 1000, "M3": 1000, "M4": 1000, "M5": 1000, "M6": 1000, "M7": 1000, "M8": 1000}


@functools.lru_cache(maxsize=None)
def _range(name: str):
    return verify_range(name, 1, RANGES[name])


def _describe(reports) -> str:
    return "; ".join(r.to_text() for r in reports[:5])


@pytest.mark.criterion("m1-target")
def test_m1_target_bounded():
    """M1 reaches ^ω b 0^n (A1) b^ω for x in 1..2000 with checkpoints equal to the trajectory"""
    bad = [r for r in _range("M1").reports
           if r.outcome is not Outcome.THEOREM1 or r.comparison_mode != EXACT or r.verdict is not Verdict.PASS]
    assert not bad, _describe(bad)
    assert [r.input for r in _range("M1").reports] == list(range(1, 2001))


@pytest.mark.criterion("halting-m3-m5-m8")
def test_halting_unary_and_binary_pair():
    """M3, M5 and M8 halt in their halt state for n in 1..1000; zero stuck"""
    for name, halt in (("M3", "H"), ("M5", "H"), ("M8", "Z")):
        reports = _range(name).reports
        assert len(reports) == 1000
        bad = [r for r in reports if r.outcome is not Outcome.HALTED or r.halt_state != halt]
        assert not bad, _describe(bad)
        assert _range(name).outcome_counts["stuck"] == 0
        assert _range(name).all_passed


@pytest.mark.criterion("halting-m6")
def test_m6_halts():
    """M6 halts in H for x in 1..1000 (base 3)"""
    bad = [r for r in _range("M6").reports if r.outcome is not Outcome.HALTED or r.halt_state != "H"]
    assert not bad, _describe(bad)
    assert _range("M6").all_passed


@pytest.mark.criterion("never-halting")
def test_never_halting_structure_and_runs():
    """M1, M2, M4, M7 have no transition into a halt state and never halt on 1..1000"""
    for name in ("M1", "M2", "M4", "M7"):
        m = builtin(name).machine
        assert m.halting_transitions() == []
        assert not any(t.target in m.halt_states for t in m.transitions.values())
        reports = [r for r in _range(name).reports if r.input <= 1000]
        assert len(reports) == 1000
        bad = [r for r in reports if r.outcome in (Outcome.HALTED, Outcome.STUCK) or not r.passed]
        assert not bad, _describe(bad)


@pytest.mark.criterion("derivations")
def test_derivation_diffs():
    """diff(M2,M3), diff(M4,M5), diff(M7,M8), diff(M1,M6) are exactly the documented constructions"""
    results = {(r.base, r.derived): r for r in derivation_check()}
    assert set(results) == {("M2", "M3"), ("M4", "M5"), ("M7", "M8"), ("M1", "M6")}
    for r in results.values():
        assert r.ok, r.problems
    assert results[("M2", "M3")].description == "rows added: C; (A,1): xRB -> xRC"
    assert results[("M4", "M5")].description == "rows added: D; (A,1): xRB -> xRD"
    assert results[("M7", "M8")].description == "rows added: L, M; (A,1): 0RB -> 0RL"
    assert results[("M1", "M6")].description == "rows added: D, E; (B,b): 2LC -> 2LE; (C,b): bRA -> bRD"


@pytest.mark.criterion("oracle")
def test_oracle_identities():
    """t_step(2n) = n and t_step(2n+1) = 3n+2 for n in 1..10^5; trajectory(7) ends in 1 with length 12"""
    for n in range(1, 10**5 + 1):
        assert t_step(2 * n) == n
        assert t_step(2 * n + 1) == 3 * n + 2
    t = trajectory(7)
    assert t.values[-1] == 1 and len(t) == 12


@pytest.mark.criterion("engine-equivalence")
def test_engine_equivalence():
    """run_accelerated equals run on 8 machines x 200 random inputs x random budgets"""
    rng = random.Random(20240601)
    checked = 0
    for name in BUILTIN_NAMES:
        entry = builtin(name)
        for _ in range(200):
            value = rng.randint(1, 1000)
            budget = rng.choice((0, 1, rng.randint(2, 100), rng.randint(100, 5000), rng.randint(5000, 40000)))
            config = initial_configuration(entry.machine, encode(value, entry.encoding))
            naive = run(entry.machine, config, budget)
            fast = run_accelerated(entry.machine, config, budget)
            assert fast.same_as(naive), (name, value, budget, naive.status, fast.status)
            checked += 1
    assert checked == 1600


@pytest.mark.criterion("round-trips")
def test_round_trips():
    """encode/decode are inverse on 1..10^4 for every representation; parse/format round-trips all 8 sources"""
    for rep in Representation:
        for n in range(1, 10**4 + 1):
            assert decode(encode(n, rep), rep) == n
    for name in BUILTIN_NAMES:
        m = parse_machine(builtin_source(name))
        assert parse_machine(format_machine(m)) == m
        assert format_machine(parse_machine(format_machine(m))) == format_machine(m)


@pytest.mark.criterion("desk-checks")
def test_spot_desk_checks():
    """M8 halts on n = 1 in exactly 3 steps; M1 from x = 2 reaches its target configuration in exactly 4 steps"""
    m8 = builtin("M8").machine
    r = run(m8, initial_configuration(m8, encode(1, "binary-pair")), 100)
    assert (r.status, r.halt_state, r.steps) == (Status.HALTED, "Z", 3)
    assert verify_halting("M8", 1).steps == 3

    m1 = builtin("M1").machine
    r = run(m1, initial_configuration(m1, encode(2, "base3")), 4)
    assert str(r.configuration) == "^ω b(A1)b^ω"
    report = verify_theorem1(2)
    assert (report.steps, report.theorem1_n) == (4, 0)


if __name__ == "__main__":
    raise SystemExit(pytest.main([__file__, "-v"]))

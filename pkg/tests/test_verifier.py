from __future__ import annotations

import json

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from collatz_tm.encodings import EXACT, SUBSEQUENCE
from collatz_tm.errors import UsageError
from collatz_tm.oracle import trajectory
from collatz_tm.verifier import (
    Outcome,
    Verdict,
    compare_checkpoints,
    derivation_check,
    verify,
    verify_halting,
    verify_never_halting,
    verify_range,
    verify_theorem1,
)


class TestM1Target:
    def test_x2(self):
        r = verify_theorem1(2)
        assert r.verdict is Verdict.PASS
        assert r.outcome is Outcome.THEOREM1
        assert r.theorem1_n == 0
        assert r.steps == 4

    def test_x1_runs_round_the_loop(self):
        r = verify_theorem1(1)
        assert r.verdict is Verdict.PASS
        assert r.checkpoints == (1, 2, 1)
        assert r.theorem1_n == 1

    def test_x7(self):
        r = verify_theorem1(7)
        assert r.verdict is Verdict.PASS
        assert r.checkpoints == (7, 11, 17, 26, 13, 20, 10, 5, 8, 4, 2, 1)
        assert r.comparison_mode == EXACT

    def test_budget_is_inconclusive(self):
        r = verify_theorem1(27, max_steps=100)
        assert r.verdict is Verdict.INCONCLUSIVE
        assert r.outcome is Outcome.BUDGET
        assert r.steps == 100
        assert r.checkpoints == trajectory(27).values[: len(r.checkpoints)]

    def test_bad_input(self):
        with pytest.raises(UsageError):
            verify_theorem1(0)


class TestHalting:
    def test_m8_n1(self):
        r = verify_halting("M8", 1)
        assert r.verdict is Verdict.PASS
        assert r.halt_state == "Z"
        assert r.steps == 3

    def test_m6_x1(self):
        r = verify_halting("M6", 1)
        assert r.verdict is Verdict.PASS and r.halt_state == "H"

    def test_m3_n1(self):
        r = verify_halting("M3", 1)
        assert r.verdict is Verdict.PASS and r.halt_state == "H"

    def test_m5_exact_trajectory(self):
        r = verify_halting("M5", 27)
        assert r.verdict is Verdict.PASS
        assert r.checkpoints == trajectory(27).values

    def test_budget_is_inconclusive(self):
        r = verify_halting("M3", 27, max_steps=1000)
        assert r.verdict is Verdict.INCONCLUSIVE
        assert not r.passed

    def test_wrong_kind(self):
        with pytest.raises(UsageError):
            verify_halting("M2", 3)


class TestNeverHalting:
    def test_m1_delegates(self):
        r = verify_never_halting("M1", 2)
        assert r.outcome is Outcome.THEOREM1 and r.theorem1_n == 0

    def test_m2_n1(self):
        r = verify_never_halting("M2", 1)
        assert r.passed
        assert r.checkpoints[0] == 1

    def test_m4_n2(self):
        r = verify_never_halting("M4", 2)
        assert r.verdict is Verdict.PASS
        assert r.outcome is Outcome.LOOP_REACHED

    def test_m4_n1_runs_away(self):
        # from (A1)b this machine walks left forever; only the budget stops it
        r = verify_never_halting("M4", 1, max_steps=10**6)
        assert r.verdict is Verdict.WEAK_PASS
        assert r.outcome is Outcome.BUDGET

    def test_m7(self):
        r = verify_never_halting("M7", 27)
        assert r.verdict is Verdict.PASS
        assert r.checkpoints == trajectory(27).values

    def test_wrong_kind(self):
        with pytest.raises(UsageError):
            verify_never_halting("M8", 3)


class TestCompare:
    def test_exact_with_loop_tail(self):
        assert compare_checkpoints((4, 2, 1, 2, 1), (4, 2, 1), complete=True) == EXACT

    def test_subsequence(self):
        assert compare_checkpoints((7, 17, 1), trajectory(7).values, complete=True) == SUBSEQUENCE

    def test_incomplete(self):
        assert compare_checkpoints((7, 11), trajectory(7).values, complete=False) == EXACT
        assert compare_checkpoints((7, 11), trajectory(7).values, complete=True) is None

    def test_wrong_value(self):
        assert compare_checkpoints((7, 12), trajectory(7).values, complete=False) is None
        assert compare_checkpoints((), (1,), complete=False) is None

    @given(st.integers(1, 5000), st.data())
    def test_any_prefix_is_exact(self, x, data):
        vals = trajectory(x).values
        k = data.draw(st.integers(1, len(vals)))
        assert compare_checkpoints(vals[:k], vals, complete=False) == EXACT


class TestRange:
    def test_m1(self):
        s = verify_range("M1", 1, 100)
        assert s.verdict_counts["pass"] == 100
        assert s.exit_code == 0

    def test_m8(self):
        s = verify_range("M8", 1, 100, jobs=4)
        assert s.outcome_counts["halted"] == 100
        assert [r.input for r in s.reports] == list(range(1, 101))

    def test_m6_single(self):
        assert verify_range("M6", 1, 1).all_passed

    def test_budget_exit_code(self):
        s = verify_range("M3", 26, 27, max_steps=1000)
        assert s.exit_code == 2

    def test_jobs_do_not_change_output(self):
        a = verify_range("M7", 1, 40, jobs=1)
        b = verify_range("M7", 1, 40, jobs=3)
        assert [r.to_record() for r in a.reports] == [r.to_record() for r in b.reports]

    def test_json_lines(self):
        lines = verify_range("M8", 1, 3).to_json_lines().split("\n")
        records = [json.loads(line) for line in lines]
        assert [r["input"] for r in records[:3]] == [1, 2, 3]
        assert records[-1]["summary"]["count"] == 3

    @pytest.mark.parametrize("lo, hi", [(0, 5), (5, 4), (-1, 1)])
    def test_bad_bounds(self, lo, hi):
        with pytest.raises(UsageError):
            verify_range("M1", lo, hi)

    def test_unknown_machine(self):
        with pytest.raises(UsageError):
            verify("M9", 1)


@settings(max_examples=30, deadline=None)
@given(st.sampled_from(["M1", "M6", "M7", "M8"]), st.integers(1, 10**5))
def test_random_inputs_pass(name, value):
    assert verify(name, value).verdict is Verdict.PASS


def test_derivations():
    results = {(r.base, r.derived): r for r in derivation_check()}
    assert all(r.ok for r in results.values()), [r.problems for r in results.values()]
    assert results[("M2", "M3")].description == "rows added: C; (A,1): xRB -> xRC"
    assert results[("M4", "M5")].description == "rows added: D; (A,1): xRB -> xRD"
    assert results[("M7", "M8")].description == "rows added: L, M; (A,1): 0RB -> 0RL"
    assert results[("M1", "M6")].description == "rows added: D, E; (B,b): 2LC -> 2LE; (C,b): bRA -> bRD"

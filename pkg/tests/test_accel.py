from __future__ import annotations

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from collatz_tm.accel import MAX_BUDGET, AcceleratedRun, Probe, run_accelerated
from collatz_tm.core import Configuration, Status, Tape, initial_configuration, run, run_with_observer
from collatz_tm.encodings import encode
from collatz_tm.zoo import BUILTIN_NAMES, builtin

from strategies import machine_and_word


def _matches(probe: Probe, c: Configuration) -> bool:
    """Probe predicate evaluated directly on a configuration."""
    if c.state != probe.state:
        return False
    if probe.head_symbols is not None and c.symbol not in probe.head_symbols:
        return False
    left = c.left_of_head().strip(c.blank)
    if probe.left == "empty" and left:
        return False
    if probe.left == "blank-neighbor" and c.tape[c.head - 1] != c.blank:
        return False
    if probe.max_right_blocks is not None:
        right = c.right_of_head().rstrip(c.blank)
        blocks = sum(1 for i, ch in enumerate(right) if i == 0 or right[i - 1] != ch)
        if blocks > probe.max_right_blocks:
            return False
    return True


@st.composite
def probes(draw, states=("A", "B", "C", "D"), symbols=("b", "1", "x", "y")):
    heads = draw(st.one_of(st.none(), st.frozensets(st.sampled_from(symbols), min_size=1)))
    return Probe(
        draw(st.sampled_from(states)),
        heads,
        draw(st.sampled_from(["any", "empty", "blank-neighbor"])),
        draw(st.one_of(st.none(), st.integers(0, 3))),
    )


class TestEquivalence:
    @settings(max_examples=300, deadline=None)
    @given(machine_and_word(), st.integers(0, 2000))
    def test_random_machines(self, mw, budget):
        m, w = mw
        c = initial_configuration(m, w)
        assert run_accelerated(m, c, budget).same_as(run(m, c, budget))

    @pytest.mark.parametrize("name", BUILTIN_NAMES)
    def test_builtin_machines(self, name):
        entry = builtin(name)
        for value in (1, 2, 3, 7, 27):
            c = initial_configuration(entry.machine, encode(value, entry.encoding))
            for budget in (0, 1, 50, 5000):
                assert run_accelerated(entry.machine, c, budget).same_as(run(entry.machine, c, budget))

    def test_resumed_config_keeps_step_count(self):
        entry = builtin("M2")
        c = run(entry.machine, initial_configuration(entry.machine, "111"), 40).configuration
        assert run_accelerated(entry.machine, c, 300).same_as(run(entry.machine, c, 300))


class TestProbes:
    @settings(max_examples=300, deadline=None)
    @given(machine_and_word(), st.lists(probes(), min_size=1, max_size=3), st.integers(0, 1500))
    def test_stops_at_first_match(self, mw, ps, budget):
        m, w = mw
        c0 = initial_configuration(m, w)
        ps = tuple(ps)
        sim = AcceleratedRun(m, c0)
        status = sim.advance(budget, ps)
        first = []

        def watch(c):
            if any(_matches(p, c) for p in ps):
                first.append(c)
                return True
            return False

        ref = run_with_observer(m, c0, budget, watch)
        if status is None:
            assert first, "probe fired where the naive run saw no match"
            assert sim.configuration().same_as(first[0])
        else:
            assert ref.status is status
            assert sim.configuration().same_as(ref.configuration)

    def test_resume_does_not_refire(self):
        entry = builtin("M1")
        sim = AcceleratedRun(entry.machine, initial_configuration(entry.machine, "21"))
        probe = (Probe("A", frozenset("12"), "empty", None),)
        assert sim.advance(1000, probe) is None
        first = sim.steps_taken
        assert sim.advance(1000, probe) is None
        assert sim.steps_taken > first

    def test_probe_matches_start(self):
        entry = builtin("M1")
        sim = AcceleratedRun(entry.machine, initial_configuration(entry.machine, "2"))
        assert sim.advance(10, (Probe("A", None, "any", None),)) is None
        assert sim.steps_taken == 0


class TestLimits:
    def test_budget_cap(self):
        entry = builtin("M1")
        with pytest.raises(ValueError):
            run_accelerated(entry.machine, initial_configuration(entry.machine, "2"), MAX_BUDGET)

    def test_runaway_tape_costs_nothing(self):
        # M4 from 1 walks left writing 1s forever; blocks keep this O(1)
        entry = builtin("M4")
        sim = AcceleratedRun(entry.machine, initial_configuration(entry.machine, "1"))
        assert sim.advance(10**15) is Status.BUDGET_EXHAUSTED
        assert sim.stored_cells() > 10**14
        assert sim.left_blocks() == []

    def test_blocks(self):
        m = builtin("M2").machine
        sim = AcceleratedRun(m, Configuration(Tape("11x11", 0, "b"), 2, "A"))
        assert sim.left_blocks() == [("1", 2)]
        assert sim.right_blocks() == [("1", 2)]
        assert sim.symbol == "x" and sim.state == "A"

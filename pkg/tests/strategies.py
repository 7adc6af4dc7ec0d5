"""Hypothesis strategies shared by the test modules."""

from __future__ import annotations

from hypothesis import strategies as st

from collatz_tm.core import MachineSpec, Transition

STATE_NAMES = ("A", "B", "C", "D")
SYMBOL_NAMES = ("b", "1", "x", "y")


@st.composite
def machines(draw, max_states: int = 4, max_symbols: int = 4, halting: bool = True) -> MachineSpec:
    """Random partial tables over a small alphabet; some cells undefined, maybe a halt state."""
    nq = draw(st.integers(1, max_states))
    ns = draw(st.integers(2, max_symbols))
    states = STATE_NAMES[:nq]
    symbols = SYMBOL_NAMES[:ns]
    halts = ("H",) if halting and draw(st.booleans()) else ()
    targets = states + halts
    table = {}
    for q in states:
        for a in symbols:
            if draw(st.integers(0, 9)) == 0:
                continue
            table[(q, a)] = Transition(
                draw(st.sampled_from(symbols)), draw(st.sampled_from("LR")), draw(st.sampled_from(targets))
            )
    return MachineSpec("rand", states, symbols, "b", "A", halts, table)


@st.composite
def machine_and_word(draw, max_len: int = 12):
    machine = draw(machines())
    word = draw(st.text(alphabet=machine.symbols, min_size=1, max_size=max_len))
    return machine, word

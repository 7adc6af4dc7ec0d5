"""Exact accelerated engine: run-length tape blocks plus chain steps.

The tape is held as two stacks of ``(symbol, count)`` blocks, one on each side
of the head, with the block nearest the head on top.  When a transition keeps
the machine in the same state and moves onto a block of the symbol it just
read, the whole block is crossed in one macro step (a *chain step*).
Everything else falls back to a single ordinary step, so the result is always
identical to :func:`collatz_tm.core.run`, step count included.

The inner loop is written in the numba-compatible subset of Python and is
compiled with ``numba.njit`` when numba is importable; otherwise it runs as
plain Python with the same semantics.

Callers that need to inspect specific configurations (checkpoint extraction)
pass :class:`Probe` clauses.  The kernel stops at every configuration matching
one of them without materialising anything, and chain steps are disabled on
``(state, symbol)`` pairs a probe could match, so no matching configuration is
skipped inside a chain.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .core import (
    RIGHT,
    Configuration,
    MachineSpec,
    RunResult,
    Status,
    Tape,
    _check_budget,
    _require_running,
)

try:
    from numba import njit
except ImportError:  # pragma: no cover - exercised only without numba
    def njit(*args, **kwargs):
        if args and callable(args[0]):
            return args[0]
        return lambda f: f


MAX_BUDGET = 2**62

_CONTINUE = 0
_HALTED = 1
_STUCK = 2
_BUDGET = 3
_PROBE = 4
_GROW = 5

LEFT_ANY = 0
LEFT_EMPTY = 1
LEFT_BLANK_NEIGHBOR = 2

_LEFT_MODES = {"any": LEFT_ANY, "empty": LEFT_EMPTY, "blank-neighbor": LEFT_BLANK_NEIGHBOR}


@dataclass(frozen=True)
class Probe:
    """Stop condition evaluated by the kernel before every transition.

    state           control state that must be current
    head_symbols    symbols accepted under the head, ``None`` for any
    left            ``"any"``, ``"empty"`` (everything left of the head is
                    blank) or ``"blank-neighbor"`` (the cell left of the head
                    is blank)
    max_right_blocks  upper bound on the number of run-length blocks right of
                    the head, ``None`` for no bound
    """

    state: str
    head_symbols: frozenset[str] | None = None
    left: str = "any"
    max_right_blocks: int | None = None


@njit(cache=True)
def _push(sym, cnt, p, s, c):
    if p > 0 and sym[p - 1] == s:
        cnt[p - 1] += c
        return p
    if p == 0 and s == 0:
        # blanks beyond the support are implicit
        return p
    sym[p] = s
    cnt[p] = c
    return p + 1


@njit(cache=True)
def _trim(sym, p):
    # a blank block left at the bottom of a stack is part of the blank infinity
    if p == 1 and sym[0] == 0:
        return 0
    return p


@njit(cache=True)
def _pop(sym, cnt, p):
    if p == 0:
        return 0, p
    s = sym[p - 1]
    cnt[p - 1] -= 1
    if cnt[p - 1] == 0:
        p = _trim(sym, p - 1)
    return s, p


@njit(cache=True, nogil=True)
def _kernel(write, move, nxt, nstates, nochain,
            lsym, lcnt, lp, rsym, rcnt, rp,
            head, state, pos, budget,
            p_state, p_head, p_left, p_right, skip):
    steps = 0
    cap_l = lsym.shape[0]
    cap_r = rsym.shape[0]
    while True:
        if lp + 1 >= cap_l or rp + 1 >= cap_r:
            return _GROW, lp, rp, head, state, pos, steps, skip
        if not skip:
            for k in range(p_state.shape[0]):
                if p_state[k] != state or not p_head[k, head]:
                    continue
                mode = p_left[k]
                if mode == LEFT_EMPTY and lp != 0:
                    continue
                if mode == LEFT_BLANK_NEIGHBOR and lp != 0 and lsym[lp - 1] != 0:
                    continue
                if p_right[k] >= 0 and rp > p_right[k]:
                    continue
                return _PROBE, lp, rp, head, state, pos, steps, True
        skip = False
        if steps >= budget:
            return _BUDGET, lp, rp, head, state, pos, steps, False
        d = move[state, head]
        if d == 0:
            return _STUCK, lp, rp, head, state, pos, steps, False
        w = write[state, head]
        q = nxt[state, head]
        remaining = budget - steps
        if q == state and not nochain[state, head]:
            # chain step: cross the run of `head` symbols ahead of the head
            if d == 1:
                ssym, scnt, sp = rsym, rcnt, rp
            else:
                ssym, scnt, sp = lsym, lcnt, lp
            unbounded = sp == 0 and head == 0
            k = 1
            if sp > 0 and ssym[sp - 1] == head:
                k += scnt[sp - 1]
            if unbounded or k > remaining:
                r = remaining
                if not unbounded:
                    # r < k, so the head lands inside the block
                    scnt[sp - 1] -= r
                    if scnt[sp - 1] == 0:
                        sp -= 1
                # the head is still inside the run, so the read symbol is unchanged
                if d == 1:
                    lp = _push(lsym, lcnt, lp, w, r)
                    rp = sp
                else:
                    rp = _push(rsym, rcnt, rp, w, r)
                    lp = sp
                pos += d * r
                steps += r
                continue
            if k > 1:
                sp = _trim(ssym, sp - 1)
            if d == 1:
                rp = sp
                lp = _push(lsym, lcnt, lp, w, k)
                head, rp = _pop(rsym, rcnt, rp)
            else:
                lp = sp
                rp = _push(rsym, rcnt, rp, w, k)
                head, lp = _pop(lsym, lcnt, lp)
            pos += d * k
            steps += k
            continue
        if d == 1:
            lp = _push(lsym, lcnt, lp, w, 1)
            head, rp = _pop(rsym, rcnt, rp)
        else:
            rp = _push(rsym, rcnt, rp, w, 1)
            head, lp = _pop(lsym, lcnt, lp)
        pos += d
        steps += 1
        state = q
        if q >= nstates:
            return _HALTED, lp, rp, head, state, pos, steps, False


class _Tables:
    def __init__(self, machine: MachineSpec):
        self.machine = machine
        self.symbols = (machine.blank,) + tuple(s for s in machine.symbols if s != machine.blank)
        self.states = tuple(machine.states) + tuple(machine.halt_states)
        self.sym_code = {s: i for i, s in enumerate(self.symbols)}
        self.state_code = {s: i for i, s in enumerate(self.states)}
        nq, ns = len(machine.states), len(self.symbols)
        self.nstates = nq
        self.write = np.zeros((nq, ns), dtype=np.int64)
        self.move = np.zeros((nq, ns), dtype=np.int64)
        self.nxt = np.zeros((nq, ns), dtype=np.int64)
        for (q, a), tr in machine.transitions.items():
            i, j = self.state_code[q], self.sym_code[a]
            self.write[i, j] = self.sym_code[tr.write]
            self.move[i, j] = 1 if tr.move == RIGHT else -1
            self.nxt[i, j] = self.state_code[tr.target]

    def compile_probes(self, probes):
        k = len(probes)
        ns = len(self.symbols)
        p_state = np.full(k, -1, dtype=np.int64)
        p_head = np.zeros((k, ns), dtype=np.bool_)
        p_left = np.zeros(k, dtype=np.int64)
        p_right = np.full(k, -1, dtype=np.int64)
        nochain = np.zeros((self.nstates, ns), dtype=np.bool_)
        for i, probe in enumerate(probes):
            if probe.state not in self.state_code:
                continue
            p_state[i] = self.state_code[probe.state]
            if probe.head_symbols is None:
                p_head[i, :] = True
            else:
                for s in probe.head_symbols:
                    if s in self.sym_code:
                        p_head[i, self.sym_code[s]] = True
            p_left[i] = _LEFT_MODES[probe.left]
            if probe.max_right_blocks is not None:
                p_right[i] = probe.max_right_blocks
            if p_state[i] < self.nstates:
                nochain[p_state[i], :] |= p_head[i, :]
        return p_state, p_head, p_left, p_right, nochain


def _rle(codes: list[int]) -> tuple[list[int], list[int]]:
    syms: list[int] = []
    cnts: list[int] = []
    for c in codes:
        if syms and syms[-1] == c:
            cnts[-1] += 1
        else:
            syms.append(c)
            cnts.append(1)
    return syms, cnts


class AcceleratedRun:
    """Resumable accelerated simulation of one machine from one configuration.

    >>> from collatz_tm.zoo import builtin
    >>> from collatz_tm.core import initial_configuration
    >>> m1 = builtin("M1").machine
    >>> sim = AcceleratedRun(m1, initial_configuration(m1, "2"))
    >>> sim.advance(4)
    <Status.BUDGET_EXHAUSTED: 'budget-exhausted'>
    >>> str(sim.configuration())
    '^ω b(A1)b^ω'
    """

    def __init__(self, machine: MachineSpec, config: Configuration):
        _require_running(machine, config)
        self.machine = machine
        self._t = _Tables(machine)
        code = self._t.sym_code
        self._no_probes = self._t.compile_probes(())
        self._probe_cache: dict[tuple[Probe, ...], tuple] = {}

        left = config.left_of_head()
        right = config.right_of_head()
        lsyms, lcnts = _rle([code[c] for c in left])
        rsyms, rcnts = _rle([code[c] for c in reversed(right)])
        cap = max(64, 2 * (len(lsyms) + len(rsyms)))
        self._lsym = np.zeros(cap, dtype=np.int64)
        self._lcnt = np.zeros(cap, dtype=np.int64)
        self._rsym = np.zeros(cap, dtype=np.int64)
        self._rcnt = np.zeros(cap, dtype=np.int64)
        self._lsym[: len(lsyms)] = lsyms
        self._lcnt[: len(lsyms)] = lcnts
        self._rsym[: len(rsyms)] = rsyms
        self._rcnt[: len(rsyms)] = rcnts
        self._lp = len(lsyms)
        self._rp = len(rsyms)
        self._head = code[config.symbol]
        self._state = self._t.state_code[config.state]
        self._pos = config.head
        self.steps_taken = config.steps_taken
        self._skip = False
        self.status: Status | None = None

    @property
    def state(self) -> str:
        return self._t.states[self._state]

    @property
    def symbol(self) -> str:
        return self._t.symbols[self._head]

    @property
    def halted(self) -> bool:
        return self._state >= self._t.nstates

    def _grow(self) -> None:
        def bigger(a):
            out = np.zeros(2 * a.shape[0], dtype=a.dtype)
            out[: a.shape[0]] = a
            return out

        self._lsym, self._lcnt = bigger(self._lsym), bigger(self._lcnt)
        self._rsym, self._rcnt = bigger(self._rsym), bigger(self._rcnt)

    def advance(self, max_steps: int, probes: tuple[Probe, ...] = ()) -> Status | None:
        """Run up to ``max_steps`` more steps.

        Returns the terminal :class:`Status`, or ``None`` when a probe matched;
        the matching configuration is then current and the next call resumes
        past it.
        """
        _check_budget(max_steps)
        if max_steps >= MAX_BUDGET:
            raise ValueError(f"max_steps must be below 2**62, got {max_steps}")
        if self.halted:
            raise RuntimeError("simulation already halted")
        if probes:
            compiled = self._probe_cache.get(probes)
            if compiled is None:
                compiled = self._probe_cache[probes] = self._t.compile_probes(probes)
        else:
            compiled = self._no_probes
        p_state, p_head, p_left, p_right, nochain = compiled
        t = self._t
        remaining = max_steps
        while True:
            status, lp, rp, head, state, pos, steps, skip = _kernel(
                t.write, t.move, t.nxt, t.nstates, nochain,
                self._lsym, self._lcnt, self._lp, self._rsym, self._rcnt, self._rp,
                self._head, self._state, self._pos, remaining,
                p_state, p_head, p_left, p_right, self._skip,
            )
            self._lp, self._rp, self._head, self._state, self._pos = lp, rp, head, state, pos
            self._skip = skip
            self.steps_taken += steps
            remaining -= steps
            if status == _GROW:
                self._grow()
                continue
            if status == _PROBE:
                return None
            self.status = {
                _HALTED: Status.HALTED,
                _STUCK: Status.STUCK,
                _BUDGET: Status.BUDGET_EXHAUSTED,
            }[status]
            return self.status

    def left_blocks(self) -> list[tuple[str, int]]:
        """Run-length blocks left of the head, leftmost first."""
        return [(self._t.symbols[s], int(c)) for s, c in zip(self._lsym[: self._lp], self._lcnt[: self._lp])]

    def right_blocks(self) -> list[tuple[str, int]]:
        """Run-length blocks right of the head, nearest first."""
        return [
            (self._t.symbols[s], int(c))
            for s, c in zip(self._rsym[: self._rp][::-1], self._rcnt[: self._rp][::-1])
        ]

    def stored_cells(self) -> int:
        """Number of cells held in the block stacks, head included."""
        return int(self._lcnt[: self._lp].sum() + self._rcnt[: self._rp].sum()) + 1

    def configuration(self) -> Configuration:
        syms = self._t.symbols
        left = "".join(syms[s] * int(c) for s, c in zip(self._lsym[: self._lp], self._lcnt[: self._lp]))
        right = "".join(
            syms[s] * int(c) for s, c in zip(self._rsym[: self._rp][::-1], self._rcnt[: self._rp][::-1])
        )
        cells = left + self._t.symbols[self._head] + right
        tape = Tape(cells, self._pos - len(left), self.machine.blank)
        return Configuration(tape, int(self._pos), self.state, int(self.steps_taken))


def run_accelerated(machine: MachineSpec, config: Configuration, max_steps: int) -> RunResult:
    """Same contract and result as :func:`collatz_tm.core.run`, computed on compressed blocks."""
    _check_budget(max_steps)
    sim = AcceleratedRun(machine, config)
    status = sim.advance(max_steps)
    final = sim.configuration()
    stuck_key = (final.state, final.symbol) if status is Status.STUCK else None
    return RunResult(status, final, final.steps_taken - config.steps_taken, stuck_key)

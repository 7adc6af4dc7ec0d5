"""Deterministic single-tape Turing machines on a two-way infinite tape.

This module holds the value types (:class:`MachineSpec`, :class:`Tape`,
:class:`Configuration`) and the reference stepping engine.  The engine here is
deliberately plain: one transition per loop iteration, no caching beyond the
transition dict.  :mod:`collatz_tm.accel` provides the fast path and is tested
against this one.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass
from types import MappingProxyType
from typing import Callable, Iterable, Mapping, NamedTuple, Sequence

from .errors import InvalidInputError, MachineDefinitionError, UsageError

LEFT = "L"
RIGHT = "R"
DIRECTIONS = (LEFT, RIGHT)


class Transition(NamedTuple):
    write: str
    move: str
    target: str

    def __str__(self) -> str:
        return f"{self.write}{self.move}{self.target}"


def _check_identifier(kind: str, name: object) -> None:
    if not isinstance(name, str) or not name or any(c.isspace() for c in name) or "#" in name:
        raise MachineDefinitionError(f"invalid {kind} identifier {name!r}")


@dataclass(frozen=True, eq=False)
class MachineSpec:
    """A deterministic machine with a partial transition table.

    ``transitions`` maps ``(state, symbol)`` to a :class:`Transition`; a
    missing key is an undefined cell, which the engines report as *stuck*
    rather than as a halt.  Symbols are single characters.

    Equality ignores the declaration order of ``states``, ``symbols`` and
    ``halt_states``; the order only drives display and formatting.
    """

    name: str
    states: tuple[str, ...]
    symbols: tuple[str, ...]
    blank: str
    start: str
    halt_states: tuple[str, ...]
    transitions: Mapping[tuple[str, str], Transition]

    def __post_init__(self) -> None:
        object.__setattr__(self, "states", tuple(self.states))
        object.__setattr__(self, "symbols", tuple(self.symbols))
        object.__setattr__(self, "halt_states", tuple(self.halt_states))
        table = {key: Transition(*value) for key, value in dict(self.transitions).items()}
        object.__setattr__(self, "transitions", MappingProxyType(table))
        self._validate()

    def _validate(self) -> None:
        _check_identifier("machine", self.name)
        for group, kind in ((self.states, "state"), (self.halt_states, "halt state")):
            for s in group:
                _check_identifier(kind, s)
            if len(set(group)) != len(group):
                raise MachineDefinitionError(f"duplicate {kind} in {group!r}")
        for sym in self.symbols:
            if not isinstance(sym, str) or len(sym) != 1 or sym.isspace() or sym == "#":
                raise MachineDefinitionError(f"symbols must be single printable characters, got {sym!r}")
        if len(set(self.symbols)) != len(self.symbols):
            raise MachineDefinitionError("duplicate symbol")
        if self.blank not in self.symbols:
            raise MachineDefinitionError(f"blank symbol {self.blank!r} is not in the alphabet")
        if self.start not in self.states:
            raise MachineDefinitionError(f"start state {self.start!r} is not a machine state")
        overlap = set(self.states) & set(self.halt_states)
        if overlap:
            raise MachineDefinitionError(f"halt states overlap machine states: {sorted(overlap)}")
        targets = set(self.states) | set(self.halt_states)
        for (state, sym), tr in self.transitions.items():
            cell = f"({state},{sym})"
            if state not in self.states:
                raise MachineDefinitionError(f"{cell}: unknown state {state!r}")
            if sym not in self.symbols:
                raise MachineDefinitionError(f"{cell}: unknown symbol {sym!r}")
            if tr.write not in self.symbols:
                raise MachineDefinitionError(f"{cell}: write symbol {tr.write!r} not declared")
            if tr.move not in DIRECTIONS:
                raise MachineDefinitionError(f"{cell}: invalid direction {tr.move!r}")
            if tr.target not in targets:
                raise MachineDefinitionError(f"{cell}: target state {tr.target!r} not declared")

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, MachineSpec):
            return NotImplemented
        return (
            self.name == other.name
            and set(self.states) == set(other.states)
            and set(self.symbols) == set(other.symbols)
            and self.blank == other.blank
            and self.start == other.start
            and set(self.halt_states) == set(other.halt_states)
            and dict(self.transitions) == dict(other.transitions)
        )

    __hash__ = None  # type: ignore[assignment]

    @property
    def shape(self) -> tuple[int, int]:
        """(number of states, number of symbols); halt states are not counted."""
        return len(self.states), len(self.symbols)

    def undefined_cells(self) -> list[tuple[str, str]]:
        return [(q, a) for q in self.states for a in self.symbols if (q, a) not in self.transitions]

    def halting_transitions(self) -> list[tuple[str, str]]:
        halts = set(self.halt_states)
        return [key for key, tr in self.transitions.items() if tr.target in halts]

    def is_halt_state(self, state: str) -> bool:
        return state in self.halt_states


@dataclass(frozen=True)
class Tape:
    """Immutable bi-infinite tape.

    Only the non-blank support is stored: ``cells[i]`` is the symbol at
    absolute index ``origin + i`` and every other cell holds ``blank``.  The
    constructor trims blanks at both ends, so two tapes with the same content
    compare equal whatever window they were built from.
    """

    cells: str
    origin: int
    blank: str

    def __post_init__(self) -> None:
        cells = self.cells
        start = len(cells) - len(cells.lstrip(self.blank))
        stripped = cells.strip(self.blank)
        origin = self.origin + start if stripped else 0
        object.__setattr__(self, "cells", stripped)
        object.__setattr__(self, "origin", origin)

    @classmethod
    def from_word(cls, word: Iterable[str], blank: str, origin: int = 0) -> "Tape":
        return cls("".join(word), origin, blank)

    def __getitem__(self, index: int) -> str:
        i = index - self.origin
        if 0 <= i < len(self.cells):
            return self.cells[i]
        return self.blank

    def bounds(self) -> tuple[int, int] | None:
        """Inclusive bounds of the non-blank support, or ``None`` if all blank."""
        if not self.cells:
            return None
        return self.origin, self.origin + len(self.cells) - 1

    def window(self, lo: int, hi: int) -> str:
        """Symbols at indices ``lo..hi`` inclusive."""
        if hi < lo:
            return ""
        o, end = self.origin, self.origin + len(self.cells)
        below = max(0, min(hi, o - 1) - lo + 1)
        above = max(0, hi - max(lo, end) + 1)
        a, b = max(lo, o), min(hi, end - 1)
        mid = self.cells[a - o : b - o + 1] if a <= b else ""
        return self.blank * below + mid + self.blank * above

    def write(self, index: int, symbol: str) -> "Tape":
        if not self.cells:
            return Tape(symbol, index, self.blank)
        lo = min(self.origin, index)
        hi = max(self.origin + len(self.cells) - 1, index)
        chars = list(self.window(lo, hi))
        chars[index - lo] = symbol
        return Tape("".join(chars), lo, self.blank)

    def shifted(self, offset: int) -> "Tape":
        return Tape(self.cells, self.origin + offset, self.blank)


@dataclass(frozen=True, eq=False)
class Configuration:
    """Tape, head position, control state and the number of steps taken.

    Configurations compare by their canonical form: state, non-blank support
    and the head offset from the leftmost non-blank cell.  Absolute position
    and ``steps_taken`` do not take part in equality.
    """

    tape: Tape
    head: int
    state: str
    steps_taken: int = 0

    @property
    def symbol(self) -> str:
        return self.tape[self.head]

    @property
    def blank(self) -> str:
        return self.tape.blank

    def canonical(self) -> tuple[str, str, int]:
        bounds = self.tape.bounds()
        anchor = bounds[0] if bounds else self.head
        return self.state, self.tape.cells, self.head - anchor

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, Configuration):
            return NotImplemented
        return self.blank == other.blank and self.canonical() == other.canonical()

    def __hash__(self) -> int:
        return hash((self.blank, self.canonical()))

    def same_as(self, other: "Configuration") -> bool:
        """Exact equality including absolute head position and step count."""
        return (
            self == other
            and self.head == other.head
            and self.tape.origin == other.tape.origin
            and self.steps_taken == other.steps_taken
        )

    def translated(self, offset: int) -> "Configuration":
        return Configuration(self.tape.shifted(offset), self.head + offset, self.state, self.steps_taken)

    def left_of_head(self) -> str:
        """Support content strictly left of the head (may include blanks)."""
        bounds = self.tape.bounds()
        if bounds is None or bounds[0] >= self.head:
            return ""
        return self.tape.window(bounds[0], self.head - 1)

    def right_of_head(self) -> str:
        """Support content strictly right of the head (may include blanks)."""
        bounds = self.tape.bounds()
        if bounds is None or bounds[1] <= self.head:
            return ""
        return self.tape.window(self.head + 1, bounds[1])

    def __str__(self) -> str:
        b = self.blank
        return f"^ω {b}{self.left_of_head()}({self.state}{self.symbol}){self.right_of_head()}{b}^ω"


@dataclass(frozen=True)
class Continued:
    configuration: Configuration


@dataclass(frozen=True)
class Halted:
    configuration: Configuration
    halt_state: str


@dataclass(frozen=True)
class Stuck:
    configuration: Configuration
    key: tuple[str, str]


StepOutcome = Continued | Halted | Stuck


class Status(str, enum.Enum):
    HALTED = "halted"
    STUCK = "stuck"
    BUDGET_EXHAUSTED = "budget-exhausted"
    OBSERVER_STOPPED = "observer-stopped"


@dataclass(frozen=True)
class RunResult:
    """Result of a bounded run.

    ``steps`` counts transitions applied during this run; the configuration's
    ``steps_taken`` is cumulative over its whole history.
    """

    status: Status
    configuration: Configuration
    steps: int
    stuck_key: tuple[str, str] | None = None

    @property
    def halted(self) -> bool:
        return self.status is Status.HALTED

    @property
    def halt_state(self) -> str | None:
        return self.configuration.state if self.halted else None

    def same_as(self, other: "RunResult") -> bool:
        return (
            self.status is other.status
            and self.steps == other.steps
            and self.stuck_key == other.stuck_key
            and self.configuration.same_as(other.configuration)
        )


def initial_configuration(machine: MachineSpec, word: Sequence[str] | str) -> Configuration:
    """Write ``word`` on a blank tape and put the head on its first symbol in the start state."""
    word = "".join(word)
    if not word:
        raise InvalidInputError("input word must be non-empty")
    alphabet = set(machine.symbols)
    for i, sym in enumerate(word):
        if sym not in alphabet:
            raise InvalidInputError(f"symbol {sym!r} at position {i} is not in the alphabet of {machine.name}")
    return Configuration(Tape(word, 0, machine.blank), 0, machine.start, 0)


def _require_running(machine: MachineSpec, config: Configuration) -> None:
    if config.state in machine.halt_states:
        raise UsageError(f"configuration is already halted in {config.state}")
    if config.state not in machine.states:
        raise UsageError(f"state {config.state!r} does not belong to {machine.name}")
    if config.blank != machine.blank:
        raise UsageError("configuration tape uses a different blank symbol")


def step(machine: MachineSpec, config: Configuration) -> StepOutcome:
    """Apply exactly one transition."""
    _require_running(machine, config)
    key = (config.state, config.symbol)
    tr = machine.transitions.get(key)
    if tr is None:
        return Stuck(config, key)
    head = config.head + (1 if tr.move == RIGHT else -1)
    nxt = Configuration(config.tape.write(config.head, tr.write), head, tr.target, config.steps_taken + 1)
    if tr.target in machine.halt_states:
        return Halted(nxt, tr.target)
    return Continued(nxt)


Observer = Callable[[Configuration], object]


def run(machine: MachineSpec, config: Configuration, max_steps: int) -> RunResult:
    """Step until halt, stuck, or ``max_steps`` transitions have been applied."""
    return _run(machine, config, max_steps, None)


def run_with_observer(
    machine: MachineSpec, config: Configuration, max_steps: int, observer: Observer
) -> RunResult:
    """Like :func:`run`, calling ``observer`` on every configuration.

    The observer sees each configuration before its transition is applied and
    the final configuration once more at the end, so a run of ``k`` steps
    makes ``k + 1`` calls.  A truthy return value requests an early stop; the
    run then ends with :attr:`Status.OBSERVER_STOPPED` at the configuration
    just observed.  Stop requests on the final configuration are ignored.
    """
    return _run(machine, config, max_steps, observer)


def _check_budget(max_steps: int) -> None:
    if not isinstance(max_steps, int) or isinstance(max_steps, bool) or max_steps < 0:
        raise ValueError(f"max_steps must be a non-negative integer, got {max_steps!r}")


def _run(machine: MachineSpec, config: Configuration, max_steps: int, observer: Observer | None) -> RunResult:
    _check_budget(max_steps)
    _require_running(machine, config)
    table = machine.transitions
    halts = frozenset(machine.halt_states)
    blank = machine.blank

    bounds = config.tape.bounds()
    lo = config.head if bounds is None else min(bounds[0], config.head)
    hi = config.head if bounds is None else max(bounds[1], config.head)
    cells = list(config.tape.window(lo, hi))
    base = lo
    pos = config.head - lo
    state = config.state
    start_steps = config.steps_taken
    steps = 0

    def snapshot() -> Configuration:
        return Configuration(Tape("".join(cells), base, blank), base + pos, state, start_steps + steps)

    while True:
        if steps >= max_steps:
            final = snapshot()
            if observer is not None:
                observer(final)
            return RunResult(Status.BUDGET_EXHAUSTED, final, steps)
        key = (state, cells[pos])
        tr = table.get(key)
        if tr is None:
            final = snapshot()
            if observer is not None:
                observer(final)
            return RunResult(Status.STUCK, final, steps, key)
        if observer is not None and observer(snapshot()):
            return RunResult(Status.OBSERVER_STOPPED, snapshot(), steps)
        cells[pos] = tr.write
        state = tr.target
        steps += 1
        if tr.move == RIGHT:
            pos += 1
            if pos == len(cells):
                cells.extend(blank * max(16, len(cells)))
        else:
            if pos == 0:
                grow = max(16, len(cells))
                cells[0:0] = blank * grow
                base -= grow
                pos += grow
            pos -= 1
        if state in halts:
            final = snapshot()
            if observer is not None:
                observer(final)
            return RunResult(Status.HALTED, final, steps)

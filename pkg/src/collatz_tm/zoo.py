"""Machine-definition text format and the eight shipped Collatz machines.

Format, one item per line (LF line endings)::

    machine <name>
    blank <symbol>
    start <state>
    halt <state> ...            # optional
    <state> <symbol> -> <write> <L|R> <state>

Tokens are separated by single spaces and ``#`` starts a comment.  Undefined
cells are simply absent.  States are the start state followed by every state
that has at least one rule, in order of first appearance; symbols are the
blank followed by every symbol read by some rule.  Rule targets and written
symbols must come from those sets (or from the halt line).
"""

from __future__ import annotations

import enum
import functools
from dataclasses import dataclass, field
from importlib import resources
from pathlib import Path

from .core import DIRECTIONS, MachineSpec, Transition
from .encodings import Representation
from .errors import MachineDefinitionError

BUILTIN_NAMES = ("M1", "M2", "M3", "M4", "M5", "M6", "M7", "M8")

_HEADER = ("machine", "blank", "start")


def _tokens(line: str, lineno: int) -> list[tuple[str, int]]:
    """Split on single spaces, returning (token, 1-based column) pairs."""
    if "\r" in line:
        raise MachineDefinitionError("carriage return in line (LF line endings only)", lineno, line.index("\r") + 1)
    if "\t" in line:
        raise MachineDefinitionError("tab character; tokens are separated by single spaces", lineno, line.index("\t") + 1)
    out = []
    col = 1
    for tok in line.split(" "):
        if not tok:
            raise MachineDefinitionError("tokens must be separated by exactly one space", lineno, col)
        out.append((tok, col))
        col += len(tok) + 1
    return out


def parse_machine(source: str) -> MachineSpec:
    """Parse machine-definition text into a validated :class:`MachineSpec`."""
    header: dict[str, str] = {}
    halts: list[str] = []
    rules: list[tuple[int, list[tuple[str, int]]]] = []
    for lineno, raw in enumerate(source.split("\n"), start=1):
        content = raw.split("#", 1)[0].rstrip(" ")
        if not content:
            continue
        toks = _tokens(content, lineno)
        word = toks[0][0]
        expected = next((h for h in _HEADER if h not in header), None)
        if expected is not None:
            if word != expected:
                raise MachineDefinitionError(f"missing header field {expected!r}", lineno, 1)
            if len(toks) != 2:
                raise MachineDefinitionError(f"{expected!r} takes exactly one argument", lineno, 1)
            header[expected] = toks[1][0]
            continue
        if word == "halt" and not rules and not halts:
            if len(toks) < 2:
                raise MachineDefinitionError("'halt' needs at least one state", lineno, 1)
            halts = [t for t, _ in toks[1:]]
            continue
        if word in _HEADER or word == "halt":
            raise MachineDefinitionError(f"unexpected {word!r} line", lineno, 1)
        rules.append((lineno, toks))
    for h in _HEADER:
        if h not in header:
            raise MachineDefinitionError(f"missing header field {h!r}")

    blank = header["blank"]
    if len(blank) != 1:
        raise MachineDefinitionError(f"blank symbol must be one character, got {blank!r}")
    states = [header["start"]]
    symbols = [blank]
    table: dict[tuple[str, str], Transition] = {}
    for lineno, toks in rules:
        if len(toks) != 6 or toks[2][0] != "->":
            col = toks[2][1] if len(toks) > 2 else toks[-1][1]
            raise MachineDefinitionError("expected '<state> <symbol> -> <write> <L|R> <state>'", lineno, col)
        (state, _), (sym, scol), _, (write, wcol), (move, mcol), (target, tcol) = toks
        if move not in DIRECTIONS:
            raise MachineDefinitionError(f"invalid direction {move!r} (expected L or R)", lineno, mcol)
        for tok, col in ((sym, scol), (write, wcol)):
            if len(tok) != 1:
                raise MachineDefinitionError(f"symbol {tok!r} must be a single character", lineno, col)
        if (state, sym) in table:
            raise MachineDefinitionError(f"duplicate rule for ({state},{sym}): machine must be deterministic", lineno, 1)
        if state in halts:
            raise MachineDefinitionError(f"halt state {state!r} cannot have rules", lineno, 1)
        if state not in states:
            states.append(state)
        if sym not in symbols:
            symbols.append(sym)
        table[(state, sym)] = Transition(write, move, target)

    known_states = set(states) | set(halts)
    for lineno, toks in rules:
        (_, _), _, _, (write, wcol), _, (target, tcol) = toks
        if write not in symbols:
            raise MachineDefinitionError(f"write symbol {write!r} is never read by any rule", lineno, wcol)
        if target not in known_states:
            raise MachineDefinitionError(f"target state {target!r} not declared", lineno, tcol)
    return MachineSpec(header["machine"], tuple(states), tuple(symbols), blank, header["start"], tuple(halts), table)


def load_machine(path: str | Path) -> MachineSpec:
    return parse_machine(Path(path).read_text(encoding="utf-8"))


def format_machine(machine: MachineSpec) -> str:
    """Canonical text: header, then rules in (state, symbol) declaration order."""
    lines = [f"machine {machine.name}", f"blank {machine.blank}", f"start {machine.start}"]
    if machine.halt_states:
        lines.append("halt " + " ".join(machine.halt_states))
    order = [machine.start] + [q for q in machine.states if q != machine.start]
    for q in order:
        for a in machine.symbols:
            tr = machine.transitions.get((q, a))
            if tr is not None:
                lines.append(f"{q} {a} -> {tr.write} {tr.move} {tr.target}")
    return "\n".join(lines) + "\n"


class HaltingKind(str, enum.Enum):
    NEVER_HALTING = "never-halting"
    HALTS_ON_LOOP = "halts-on-loop"


@dataclass(frozen=True)
class MachineSource:
    text: str
    note: str


@dataclass(frozen=True)
class ZooEntry:
    machine: MachineSpec
    source: MachineSource
    encoding: Representation
    halting_kind: HaltingKind
    template_id: str
    theorem: int | None

    @property
    def name(self) -> str:
        return self.machine.name

    @property
    def halts(self) -> bool:
        return self.halting_kind is HaltingKind.HALTS_ON_LOOP

    @property
    def halt_state(self) -> str | None:
        return self.machine.halt_states[0] if self.halts else None


# name -> (encoding, halting kind, checkpoint template, theorem, note)
_CATALOGUE = {
    "M1": (Representation.BASE3, HaltingKind.NEVER_HALTING, "base3-pass", 1, "3x4 never-halting, base 3"),
    "M2": (Representation.UNARY, HaltingKind.NEVER_HALTING, "unary-block", None, "2x10 never-halting, unary"),
    "M3": (Representation.UNARY, HaltingKind.HALTS_ON_LOOP, "unary-block", 2, "3x10 halting, M2 + state C"),
    "M4": (Representation.UNARY, HaltingKind.NEVER_HALTING, "unary-block", None, "3x6 never-halting, unary, (A,z) corrected"),
    "M5": (Representation.UNARY, HaltingKind.HALTS_ON_LOOP, "unary-block", 3, "4x6 halting, M4 + state D"),
    "M6": (Representation.BASE3, HaltingKind.HALTS_ON_LOOP, "base3-pass-wiping", 4, "5x4 halting, M1 + states D, E"),
    "M7": (Representation.BINARY_PAIR, HaltingKind.NEVER_HALTING, "binary-pair", None, "11x2 never-halting, binary pairs"),
    "M8": (Representation.BINARY_PAIR, HaltingKind.HALTS_ON_LOOP, "binary-pair", 5, "13x2 halting, M7 + states L, M"),
}


def builtin_source(name: str) -> str:
    if name not in _CATALOGUE:
        raise KeyError(f"unknown builtin machine {name!r}; expected one of {', '.join(BUILTIN_NAMES)}")
    return resources.files("collatz_tm").joinpath("machines").joinpath(f"{name}.tm").read_text(encoding="utf-8")


@functools.lru_cache(maxsize=None)
def builtin(name: str) -> ZooEntry:
    """The shipped machine ``name`` (``"M1"`` .. ``"M8"``)."""
    text = builtin_source(name)
    encoding, kind, template_id, theorem, note = _CATALOGUE[name]
    return ZooEntry(parse_machine(text), MachineSource(text, note), encoding, kind, template_id, theorem)


def zoo() -> list[ZooEntry]:
    return [builtin(n) for n in BUILTIN_NAMES]


@dataclass(frozen=True)
class MachineDiff:
    """Structural difference from a base machine to a derived one."""

    added_states: tuple[str, ...]
    removed_states: tuple[str, ...]
    added_halt_states: tuple[str, ...]
    changed: dict[tuple[str, str], tuple[Transition, Transition]]
    added_cells: dict[tuple[str, str], Transition]
    removed_cells: dict[tuple[str, str], Transition]

    def describe(self) -> str:
        parts = []
        if self.added_states:
            parts.append("rows added: " + ", ".join(self.added_states))
        if self.removed_states:
            parts.append("rows removed: " + ", ".join(self.removed_states))
        for (q, a), (old, new) in self.changed.items():
            parts.append(f"({q},{a}): {old} -> {new}")
        for (q, a), tr in self.added_cells.items():
            parts.append(f"({q},{a}) defined as {tr}")
        for (q, a), tr in self.removed_cells.items():
            parts.append(f"({q},{a}) {tr} removed")
        return "; ".join(parts) or "identical"


def diff_machines(base: MachineSpec, derived: MachineSpec) -> MachineDiff:
    base_states = set(base.states)
    added = tuple(q for q in derived.states if q not in base_states)
    removed = tuple(q for q in base.states if q not in set(derived.states))
    new_halts = tuple(h for h in derived.halt_states if h not in base.halt_states)
    changed, added_cells, removed_cells = {}, {}, {}
    for q in base.states:
        if q in removed:
            continue
        for a in dict.fromkeys(base.symbols + derived.symbols):
            old = base.transitions.get((q, a))
            new = derived.transitions.get((q, a))
            if old == new:
                continue
            if old is None:
                added_cells[(q, a)] = new
            elif new is None:
                removed_cells[(q, a)] = old
            else:
                changed[(q, a)] = (old, new)
    return MachineDiff(added, removed, new_halts, changed, added_cells, removed_cells)


def _t(s: str) -> Transition:
    return Transition(s[0], s[1], s[2:])


# (base, derived) -> (added rows, added halt states, redirected cells)
EXPECTED_DERIVATIONS = {
    ("M2", "M3"): (("C",), ("H",), {("A", "1"): (_t("xRB"), _t("xRC"))}),
    ("M4", "M5"): (("D",), ("H",), {("A", "1"): (_t("xRB"), _t("xRD"))}),
    ("M7", "M8"): (("L", "M"), ("Z",), {("A", "1"): (_t("0RB"), _t("0RL"))}),
    ("M1", "M6"): (("D", "E"), ("H",), {("B", "b"): (_t("2LC"), _t("2LE")), ("C", "b"): (_t("bRA"), _t("bRD"))}),
}

# (states, symbols) per machine; halt states are not counted
EXPECTED_SHAPES = {
    "M1": (3, 4), "M2": (2, 10), "M3": (3, 10), "M4": (3, 6),
    "M5": (4, 6), "M6": (5, 4), "M7": (11, 2), "M8": (13, 2),
}

# undefined cells as transcribed from the published tables
EXPECTED_UNDEFINED = {"M1": 0, "M2": 1, "M3": 8, "M4": 1, "M5": 4, "M6": 1, "M7": 1, "M8": 1}


def derivation_problems(base_name: str, derived_name: str) -> list[str]:
    """Differences between the observed and the documented construction."""
    added_rows, added_halts, redirected = EXPECTED_DERIVATIONS[(base_name, derived_name)]
    d = diff_machines(builtin(base_name).machine, builtin(derived_name).machine)
    where = f"{base_name}->{derived_name}"
    problems = []
    if d.added_states != added_rows:
        problems.append(f"{where}: added rows {d.added_states}, expected {added_rows}")
    if d.removed_states:
        problems.append(f"{where}: rows removed {d.removed_states}")
    if d.added_halt_states != added_halts:
        problems.append(f"{where}: new halt states {d.added_halt_states}, expected {added_halts}")
    for cell in sorted(set(d.changed) | set(redirected)):
        if d.changed.get(cell) != redirected.get(cell):
            problems.append(f"{where}: cell ({cell[0]},{cell[1]}) changed {d.changed.get(cell)}, expected {redirected.get(cell)}")
    for cell in d.added_cells:
        problems.append(f"{where}: cell ({cell[0]},{cell[1]}) newly defined")
    for cell in d.removed_cells:
        problems.append(f"{where}: cell ({cell[0]},{cell[1]}) no longer defined")
    return problems


@dataclass
class ZooReport:
    problems: list[str] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.problems

    def __str__(self) -> str:
        return "zoo OK" if self.ok else "\n".join(self.problems)


def validate_zoo() -> ZooReport:
    """Check every shipped machine's class, blanks, halting cells, round trip and derivation."""
    report = ZooReport()
    for entry in zoo():
        m, name = entry.machine, entry.name
        if m.shape != EXPECTED_SHAPES[name]:
            report.problems.append(f"{name}: class {m.shape[0]}x{m.shape[1]}, expected {EXPECTED_SHAPES[name]}")
        undefined = m.undefined_cells()
        if len(undefined) != EXPECTED_UNDEFINED[name]:
            report.problems.append(f"{name}: {len(undefined)} undefined cells {undefined}, expected {EXPECTED_UNDEFINED[name]}")
        halting = m.halting_transitions()
        want = 1 if entry.halts else 0
        if len(halting) != want:
            report.problems.append(f"{name}: {len(halting)} transitions into a halt state {halting}, expected {want}")
        if parse_machine(format_machine(m)) != m:
            report.problems.append(f"{name}: format/parse round trip changed the machine")
    for base, derived in EXPECTED_DERIVATIONS:
        report.problems.extend(derivation_problems(base, derived))
    return report

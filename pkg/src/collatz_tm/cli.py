"""Command-line interface: ``collatz-tm <command> ...``.

Exit codes: 0 pass / halted, 1 fail or stuck, 2 budget exhausted, 3 usage error.
"""

from __future__ import annotations

import argparse
import json
import sys
import time
from dataclasses import dataclass
from pathlib import Path
from typing import Callable, Sequence, TextIO

from .accel import run_accelerated
from .core import Configuration, Halted, MachineSpec, Status, Stuck, initial_configuration, run, step
from .encodings import Representation, checkpoint, decode, encode, template, theorem1_target
from .errors import CollatzTMError, InvalidInputError, MachineDefinitionError, UsageError
from .verifier import Verdict, verify, verify_range
from .zoo import BUILTIN_NAMES, ZooEntry, builtin, diff_machines, format_machine, load_machine

DEFAULT_CLI_MAX_STEPS = 10**8
# longer final tapes are printed as a clipped window around the head
_RUN_PRINT_LIMIT = 1000

EXIT_OK = 0
EXIT_FAIL = 1
EXIT_BUDGET = 2
EXIT_USAGE = 3

_VERDICT_EXIT = {
    Verdict.PASS: EXIT_OK,
    Verdict.FAIL: EXIT_FAIL,
    Verdict.WEAK_PASS: EXIT_BUDGET,
    Verdict.INCONCLUSIVE: EXIT_BUDGET,
}


class _Parser(argparse.ArgumentParser):
    # argparse exits with 2 on bad usage; 2 is taken by budget exhaustion here
    def error(self, message: str):
        raise UsageError(message)


@dataclass
class _Target:
    machine: MachineSpec
    entry: ZooEntry | None
    label: str


def _resolve_machine(selector: str | None) -> _Target:
    if not selector:
        raise UsageError("no machine given (use -m NAME or a path to a machine file)")
    if selector in BUILTIN_NAMES:
        entry = builtin(selector)
        return _Target(entry.machine, entry, selector)
    path = Path(selector)
    if not path.is_file():
        raise UsageError(f"{selector!r} is neither a builtin machine ({', '.join(BUILTIN_NAMES)}) nor a file")
    return _Target(load_machine(path), None, str(path))


def _parse_int(text: str, what: str = "input") -> int:
    try:
        value = int(text, 10)
    except ValueError:
        raise UsageError(f"{what} must be a decimal integer, got {text!r}") from None
    return value


def _positive_int(text: str | None, what: str = "input") -> int:
    if text is None:
        raise UsageError(f"no {what} given")
    value = _parse_int(text, what)
    if value < 1:
        raise UsageError(f"{what} must be a positive integer, got {value}")
    return value


def _machine_arg(args) -> str | None:
    if args.machine and args.machine_pos and args.machine != args.machine_pos:
        raise UsageError("machine given twice")
    return args.machine or args.machine_pos


def _input_arg(args) -> str | None:
    if args.input and args.input_pos and args.input != args.input_pos:
        raise UsageError("input given twice")
    return args.input or args.input_pos


def _start(target: _Target, args) -> tuple[Configuration, int | None]:
    """Initial configuration and the integer it encodes (``None`` for raw words)."""
    raw = getattr(args, "raw_word", None)
    text = _input_arg(args)
    if raw is not None:
        if text is not None:
            raise UsageError("give either an integer input or --raw-word, not both")
        return initial_configuration(target.machine, raw), None
    value = _positive_int(text)
    rep = getattr(args, "encoding", None) or (target.entry.encoding if target.entry else None)
    if rep is None:
        raise UsageError("machine files have no default encoding; pass --encoding or --raw-word")
    return initial_configuration(target.machine, encode(value, rep)), value


def _max_steps(args) -> int:
    if args.max_steps < 0:
        raise UsageError(f"--max-steps must be non-negative, got {args.max_steps}")
    return args.max_steps


def _emit(out: TextIO, record: dict) -> None:
    out.write(json.dumps(record, separators=(",", ":"), ensure_ascii=False) + "\n")


# -- trace rendering ---------------------------------------------------------

def render_window(config: Configuration, width: int | None = None) -> str:
    """Non-blank support plus the head cell, head bracketed, clipped to ``width`` cells.

    >>> from collatz_tm.core import Tape
    >>> render_window(Configuration(Tape("1", 0, "b"), 0, "A"))
    '|[1]|'
    """
    bounds = config.tape.bounds()
    lo, hi = (config.head, config.head) if bounds is None else (min(bounds[0], config.head), max(bounds[1], config.head))
    left_cut = right_cut = False
    if width is not None and hi - lo + 1 > width:
        half = (width - 1) // 2
        new_lo = max(lo, min(config.head - half, hi - width + 1))
        new_hi = new_lo + width - 1
        left_cut, right_cut = new_lo > lo, new_hi < hi
        lo, hi = new_lo, new_hi
    cells = config.tape.window(lo, hi)
    k = config.head - lo
    body = f"{cells[:k]}[{cells[k]}]{cells[k + 1:]}"
    return ("…" if left_cut else "|") + body + ("…" if right_cut else "|")


def head_offset(config: Configuration) -> int:
    return config.canonical()[2]


def trace_lines(target: _Target, config: Configuration, max_steps: int, window: int | None,
                structured: bool = False, emit: Callable[[str], None] = print) -> tuple[Status | str, Configuration]:
    """Print one line per configuration; returns the terminal status and configuration.

    Builtin machines get checkpoint flags; M1 stops at the Theorem-1 target and
    the other never-halting machines stop at the first return to 1.
    """
    entry = target.entry
    tmpl = template(entry.template_id) if entry else None
    watch_t1 = entry is not None and entry.name == "M1"
    stop_at_loop = entry is not None and not entry.halts and not watch_t1
    last_reading = None
    status: Status | str | None = None
    while True:
        flags: list[str] = []
        reading = checkpoint(tmpl, config) if tmpl else None
        if reading is not None and not (tmpl.collapse_repeats and reading == last_reading):
            flags.append(f"CHECKPOINT {reading}")
            last_reading = reading
        if config.steps_taken > 0:
            if watch_t1 and (n := theorem1_target(config)) is not None:
                flags.append(f"THEOREM1 n={n}")
                status = "theorem1"
            elif stop_at_loop and reading == 1:
                flags.append("LOOP")
                status = "loop"
        if status is None and config.state in target.machine.halt_states:
            flags.append(f"HALT {config.state} steps={config.steps_taken}")
            status = Status.HALTED
        stuck_key = None
        if status is None and (config.state, config.symbol) not in target.machine.transitions:
            stuck_key = (config.state, config.symbol)
            flags.append(f"STUCK ({stuck_key[0]},{stuck_key[1]}) steps={config.steps_taken}")
            status = Status.STUCK
        if structured:
            emit(json.dumps({
                "step": config.steps_taken,
                "state": config.state,
                "offset": head_offset(config),
                "tape": render_window(config, window),
                "flags": flags,
            }, separators=(",", ":"), ensure_ascii=False))
        else:
            line = f"{config.steps_taken} {config.state} {head_offset(config)} {render_window(config, window)}"
            emit(" ".join([line] + flags))
        if status is not None:
            return status, config
        if config.steps_taken >= max_steps:
            return Status.BUDGET_EXHAUSTED, config
        outcome = step(target.machine, config)
        if isinstance(outcome, Stuck):  # pragma: no cover - caught above
            return Status.STUCK, config
        config = outcome.configuration
        if isinstance(outcome, Halted):
            continue


# -- commands ----------------------------------------------------------------

def cmd_list(args, out: TextIO) -> int:
    for entry in (builtin(n) for n in BUILTIN_NAMES):
        nstates, nsymbols = entry.machine.shape
        if args.format == "structured":
            _emit(out, {"machine": entry.name, "states": nstates, "symbols": nsymbols,
                        "encoding": entry.encoding.value, "halting": entry.halting_kind.value,
                        "halt_state": entry.halt_state})
        else:
            halt = f" halt={entry.halt_state}" if entry.halts else ""
            out.write(f"{entry.name} {nstates}x{nsymbols} {entry.encoding.value} {entry.halting_kind.value}{halt}\n")
    return EXIT_OK


def cmd_show(args, out: TextIO) -> int:
    target = _resolve_machine(_machine_arg(args))
    m = target.machine
    if args.format == "structured":
        _emit(out, {
            "machine": target.label,
            "states": list(m.states),
            "symbols": list(m.symbols),
            "blank": m.blank,
            "start": m.start,
            "halt_states": sorted(m.halt_states),
            "transitions": {f"{q} {a}": str(t) for (q, a), t in m.transitions.items()},
            "undefined": [list(k) for k in m.undefined_cells()],
        })
        return EXIT_OK
    out.write(format_machine(m))
    undefined = m.undefined_cells()
    out.write(f"# {len(undefined)} undefined cell(s): {' '.join(f'({q},{a})' for q, a in undefined) or '-'}\n")
    if target.entry and target.entry.source.note:
        out.write(f"# {target.entry.source.note}\n")
    if args.base:
        base = _resolve_machine(args.base)
        out.write("# diff against " + base.label + ":\n")
        for line in diff_machines(base.machine, m).describe().splitlines():
            out.write(f"#   {line}\n")
    return EXIT_OK


def _status_exit(status: Status) -> int:
    if status is Status.HALTED:
        return EXIT_OK
    if status is Status.STUCK:
        return EXIT_FAIL
    return EXIT_BUDGET


def cmd_run(args, out: TextIO, err: TextIO) -> int:
    target = _resolve_machine(_machine_arg(args))
    config, _ = _start(target, args)
    budget = _max_steps(args)
    runner = run if args.engine == "naive" else run_accelerated
    result = runner(target.machine, config, budget)
    final = result.configuration
    shown = str(final) if len(final.tape.cells) <= _RUN_PRINT_LIMIT else render_window(final, _RUN_PRINT_LIMIT)
    if args.format == "structured":
        _emit(out, {
            "machine": target.label,
            "status": result.status.value,
            "steps": result.steps,
            "state": final.state,
            "configuration": shown,
            "stuck_key": list(result.stuck_key) if result.stuck_key else None,
        })
    else:
        out.write(f"{result.status.value} steps={result.steps} state={final.state}\n{shown}\n")
    if result.status is Status.BUDGET_EXHAUSTED:
        err.write(f"budget of {budget} steps exhausted\n")
    return _status_exit(result.status)


def cmd_trace(args, out: TextIO, err: TextIO) -> int:
    target = _resolve_machine(_machine_arg(args))
    config, _ = _start(target, args)
    budget = _max_steps(args)
    if args.window is not None and args.window < 1:
        raise UsageError("--window must be at least 1")
    status, final = trace_lines(target, config, budget, args.window, args.format == "structured",
                                lambda line: out.write(line + "\n"))
    if status == Status.BUDGET_EXHAUSTED:
        err.write(f"budget of {budget} steps exhausted at step {final.steps_taken}\n")
        return EXIT_BUDGET
    if status == Status.STUCK:
        return EXIT_FAIL
    return EXIT_OK


def _require_builtin(selector: str | None) -> str:
    if selector not in BUILTIN_NAMES:
        raise UsageError(f"verification needs a builtin machine ({', '.join(BUILTIN_NAMES)}), got {selector!r}")
    return selector


def cmd_verify(args, out: TextIO) -> int:
    name = _require_builtin(_machine_arg(args))
    value = _positive_int(_input_arg(args))
    report = verify(name, value, _max_steps(args))
    out.write((report.to_json() if args.format == "structured" else report.to_text()) + "\n")
    return _VERDICT_EXIT[report.verdict]


def cmd_verify_range(args, out: TextIO) -> int:
    name = _require_builtin(args.machine_pos or args.machine)
    lo = _positive_int(args.lo, "lo")
    hi = _positive_int(args.hi, "hi")
    if hi < lo:
        raise UsageError(f"need lo <= hi, got {lo} > {hi}")
    if args.jobs < 1:
        raise UsageError("--jobs must be at least 1")
    summary = verify_range(name, lo, hi, _max_steps(args), args.jobs)
    out.write((summary.to_json_lines() if args.format == "structured" else summary.to_text()) + "\n")
    return summary.exit_code


def _representation(args) -> Representation:
    if args.representation:
        return Representation(args.representation)
    selector = _machine_arg(args)
    if selector is None:
        raise UsageError("give -m MACHINE or --representation")
    return builtin(_require_builtin(selector)).encoding


def cmd_encode(args, out: TextIO) -> int:
    rep = _representation(args)
    value = _positive_int(args.value, "value")
    word = encode(value, rep)
    if args.format == "structured":
        _emit(out, {"value": value, "representation": rep.value, "word": word})
    else:
        out.write(word + "\n")
    return EXIT_OK


def cmd_decode(args, out: TextIO) -> int:
    rep = _representation(args)
    value = decode(args.word, rep)
    if args.format == "structured":
        _emit(out, {"word": args.word, "representation": rep.value, "value": value})
    else:
        out.write(f"{value}\n")
    return EXIT_OK


def cmd_bench(args, out: TextIO, err: TextIO) -> int:
    target = _resolve_machine(_machine_arg(args))
    config, _ = _start(target, args)
    budget = _max_steps(args)
    if args.repetitions < 1:
        raise UsageError(f"--repetitions must be at least 1, got {args.repetitions}")
    # load or compile the kernel outside the timed region
    run_accelerated(target.machine, config, min(budget, 1))
    timings = {}
    results = {}
    for label, runner in (("naive", run), ("accelerated", run_accelerated)):
        best = float("inf")
        for _ in range(args.repetitions):
            t0 = time.perf_counter()
            results[label] = runner(target.machine, config, budget)
            best = min(best, time.perf_counter() - t0)
        timings[label] = best
    a, b = results["naive"], results["accelerated"]
    same = a.same_as(b)
    if not same:
        err.write(f"engine mismatch: naive {a.status.value}/{a.steps} vs accelerated {b.status.value}/{b.steps}\n")
        return EXIT_FAIL
    rates = {k: (a.steps / t if t > 0 else float("inf")) for k, t in timings.items()}
    if args.format == "structured":
        _emit(out, {
            "machine": target.label,
            "status": a.status.value,
            "steps": a.steps,
            "identical": True,
            "timing_naive_seconds": timings["naive"],
            "timing_accelerated_seconds": timings["accelerated"],
            "timing_naive_steps_per_second": rates["naive"],
            "timing_accelerated_steps_per_second": rates["accelerated"],
        })
    else:
        out.write(f"{target.label} {a.status.value} steps={a.steps} identical final configurations\n")
        for k in ("naive", "accelerated"):
            out.write(f"  {k:<12} {timings[k]:.4f}s  {rates[k]:.3g} steps/s\n")
    return EXIT_OK


# -- argument parsing --------------------------------------------------------

def _common(p: argparse.ArgumentParser, *, machine=True, value=True, budget=True) -> None:
    p.add_argument("--format", choices=("text", "structured"), default="text")
    if machine:
        p.add_argument("-m", "--machine", help="builtin name (M1..M8) or path to a machine file")
        p.add_argument("machine_pos", nargs="?", metavar="MACHINE")
    if value:
        p.add_argument("-n", "--input", help="positive integer, encoded per the machine")
        p.add_argument("input_pos", nargs="?", metavar="INPUT")
    if budget:
        p.add_argument("--max-steps", type=int, default=DEFAULT_CLI_MAX_STEPS)


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="collatz-tm", description="Simulate and verify small 3x+1 Turing machines.")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("list", help="list builtin machines")
    _common(p, machine=False, value=False, budget=False)

    p = sub.add_parser("show", help="print a machine table")
    _common(p, value=False, budget=False)
    p.add_argument("--base", help="also print the diff against this machine")

    for name, helptext in (("run", "run to halt, stuck or budget"), ("trace", "print every configuration"),
                           ("bench", "time naive vs accelerated engine")):
        p = sub.add_parser(name, help=helptext)
        _common(p)
        p.add_argument("--raw-word", help="tape symbols to start on instead of an encoded integer")
        p.add_argument("--encoding", choices=[r.value for r in Representation],
                       help="numeral system for machine files")
        if name == "run":
            p.add_argument("--engine", choices=("accelerated", "naive"), default="accelerated")
        if name == "trace":
            p.add_argument("--window", type=int, default=None, help="clip the tape to this many cells")
        if name == "bench":
            p.add_argument("--repetitions", type=int, default=1)

    p = sub.add_parser("verify", help="check one input against the oracle")
    _common(p)

    p = sub.add_parser("verify-range", help="check every input in [LO, HI]")
    _common(p, value=False)
    p.add_argument("lo", metavar="LO")
    p.add_argument("hi", metavar="HI")
    p.add_argument("--jobs", type=int, default=1)

    for name in ("encode", "decode"):
        p = sub.add_parser(name, help=f"{name} an integer for a machine or representation")
        p.add_argument("--format", choices=("text", "structured"), default="text")
        p.add_argument("-m", "--machine")
        p.add_argument("-r", "--representation", choices=[r.value for r in Representation])
        p.add_argument("value" if name == "encode" else "word")
        p.set_defaults(machine_pos=None)
    return parser


def main(argv: Sequence[str] | None = None, out: TextIO | None = None, err: TextIO | None = None) -> int:
    out = out or sys.stdout
    err = err or sys.stderr
    try:
        args = build_parser().parse_args(argv)
        if args.command == "verify-range" and args.machine and args.machine_pos:
            # "-m M1 1 5": argparse gives LO to MACHINE
            args.machine_pos, args.lo, args.hi = None, args.machine_pos, args.lo
        handlers = {
            "list": lambda: cmd_list(args, out),
            "show": lambda: cmd_show(args, out),
            "run": lambda: cmd_run(args, out, err),
            "trace": lambda: cmd_trace(args, out, err),
            "verify": lambda: cmd_verify(args, out),
            "verify-range": lambda: cmd_verify_range(args, out),
            "encode": lambda: cmd_encode(args, out),
            "decode": lambda: cmd_decode(args, out),
            "bench": lambda: cmd_bench(args, out, err),
        }
        return handlers[args.command]()
    except (UsageError, InvalidInputError, MachineDefinitionError, ValueError) as exc:
        err.write(f"collatz-tm: error: {exc}\n")
        return EXIT_USAGE
    except CollatzTMError as exc:
        err.write(f"collatz-tm: error: {exc}\n")
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())

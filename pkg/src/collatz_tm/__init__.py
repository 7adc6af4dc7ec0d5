"""Simulate and check small Turing machines that iterate the 3x+1 map."""

from .accel import AcceleratedRun, Probe, run_accelerated
from .core import (
    Configuration,
    Continued,
    Halted,
    MachineSpec,
    RunResult,
    Status,
    Stuck,
    Tape,
    Transition,
    initial_configuration,
    run,
    run_with_observer,
    step,
)
from .encodings import Representation, checkpoint, decode, encode, template, theorem1_target
from .errors import DomainError, InvalidInputError, MachineDefinitionError, UsageError
from .oracle import CollatzLikeSpec, collatz_like_step, t_step, trajectory
from .verifier import Verdict, verify, verify_range
from .zoo import builtin, format_machine, parse_machine, validate_zoo

__all__ = [
    "AcceleratedRun", "Probe", "run_accelerated",
    "Configuration", "Continued", "Halted", "MachineSpec", "RunResult", "Status", "Stuck", "Tape", "Transition",
    "initial_configuration", "run", "run_with_observer", "step",
    "Representation", "checkpoint", "decode", "encode", "template", "theorem1_target",
    "DomainError", "InvalidInputError", "MachineDefinitionError", "UsageError",
    "CollatzLikeSpec", "collatz_like_step", "t_step", "trajectory",
    "Verdict", "verify", "verify_range",
    "builtin", "format_machine", "parse_machine", "validate_zoo",
]

__version__ = "0.1.0"

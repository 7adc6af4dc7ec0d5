"""Integer <-> tape-word conversions and checkpoint templates.

Three numeral systems are used by the shipped machines:

``base3``        most significant digit first, digits ``0 1 2`` (M1, M6)
``unary``        ``n`` is ``1^n`` (M2 .. M5)
``binary-pair``  least significant bit first, bit ``x`` written as the two
                 cells ``1x``; the head starts on the first ``1`` (M7, M8)

A checkpoint template recognises the configurations at which a machine's tape
holds the next iterate of the 3x+1 map and reads that integer off the tape.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass
from typing import Callable

from .accel import Probe
from .core import Configuration
from .errors import DomainError, InvalidInputError


class Representation(str, enum.Enum):
    BASE3 = "base3"
    UNARY = "unary"
    BINARY_PAIR = "binary-pair"


def _positive(value: int) -> None:
    if not isinstance(value, int) or isinstance(value, bool):
        raise DomainError(f"expected an integer, got {value!r}")
    if value < 1:
        raise DomainError(f"value must be a positive integer, got {value}")


def encode(value: int, representation: Representation | str) -> str:
    """Tape word for ``value``; for binary-pair the word includes the leading 1."""
    rep = Representation(representation)
    _positive(value)
    if rep is Representation.UNARY:
        return "1" * value
    if rep is Representation.BASE3:
        digits = []
        while value:
            value, r = divmod(value, 3)
            digits.append("012"[r])
        return "".join(reversed(digits))
    return "".join("1" + b for b in reversed(format(value, "b")))


def decode(word: str, representation: Representation | str) -> int:
    """Inverse of :func:`encode`; base-3 words may carry leading zeros."""
    rep = Representation(representation)
    if not word:
        raise InvalidInputError("cannot decode an empty word")
    if rep is Representation.UNARY:
        if set(word) != {"1"}:
            raise InvalidInputError(f"unary word must consist of 1s only: {word!r}")
        return len(word)
    if rep is Representation.BASE3:
        bad = set(word) - set("012")
        if bad:
            raise InvalidInputError(f"base-3 word contains {sorted(bad)}: {word!r}")
        value = int(word, 3)
        if value == 0:
            raise InvalidInputError(f"base-3 word {word!r} encodes zero")
        return value
    if len(word) % 2:
        raise InvalidInputError(f"binary-pair word has odd length: {word!r}")
    value = 0
    for i in range(0, len(word), 2):
        sep, bit = word[i], word[i + 1]
        if sep != "1":
            raise InvalidInputError(f"binary-pair word has separator {sep!r} at position {i}: {word!r}")
        if bit not in "01":
            raise InvalidInputError(f"binary-pair word has digit {bit!r} at position {i + 1}: {word!r}")
        value |= int(bit) << (i // 2)
    if value == 0:
        raise InvalidInputError(f"binary-pair word {word!r} encodes zero")
    return value


@dataclass(frozen=True)
class Numeral:
    value: int
    representation: Representation
    word: str

    @classmethod
    def of(cls, value: int, representation: Representation | str) -> "Numeral":
        rep = Representation(representation)
        return cls(value, rep, encode(value, rep))


EXACT = "exact-trajectory"
SUBSEQUENCE = "ordered-subsequence"


@dataclass(frozen=True)
class CheckpointTemplate:
    """Where a machine's tape encodes an iterate, and how to read it.

    ``anchor`` is a cheap positional test; ``extractor`` decodes the tape and
    returns ``None`` when the content does not parse.  ``probes`` describe a
    superset of the matching configurations in a form the accelerated engine
    can test without materialising the tape.  With ``collapse_repeats`` set,
    consecutive equal readings count once (M6 reads the same value at D and
    again at A after blanking a leading zero).
    """

    template_id: str
    state_set: frozenset[str]
    anchor: Callable[[Configuration], bool]
    extractor: Callable[[Configuration], int | None]
    comparison_mode: str
    probes: tuple[Probe, ...]
    collapse_repeats: bool = False


def _at_left_end(config: Configuration) -> bool:
    bounds = config.tape.bounds()
    return bounds is not None and bounds[0] == config.head


def _blank_left_neighbor(config: Configuration) -> bool:
    return config.symbol == "1" and config.tape[config.head - 1] == config.blank


def _base3_value(config: Configuration) -> int | None:
    word = config.tape.cells
    if word.strip("012") or not word.strip("0"):
        return None
    return int(word, 3)


def _unary_value(config: Configuration) -> int | None:
    block = config.symbol + config.right_of_head()
    if block.strip("1"):
        return None
    return len(block)


def _binary_pair_value(config: Configuration) -> int | None:
    try:
        return decode(config.tape.cells, Representation.BINARY_PAIR)
    except InvalidInputError:
        return None


TEMPLATES = {
    "base3-pass": CheckpointTemplate(
        "base3-pass",
        frozenset("A"),
        _at_left_end,
        _base3_value,
        EXACT,
        (Probe("A", None, "empty"),),
    ),
    "base3-pass-wiping": CheckpointTemplate(
        "base3-pass-wiping",
        frozenset("AD"),
        _at_left_end,
        _base3_value,
        EXACT,
        (Probe("A", None, "empty"), Probe("D", None, "empty")),
        collapse_repeats=True,
    ),
    # Left of the block the tape keeps marker residue (x, a, b runs) from
    # earlier passes; only the cell next to the head has to be blank.
    "unary-block": CheckpointTemplate(
        "unary-block",
        frozenset("A"),
        _blank_left_neighbor,
        _unary_value,
        SUBSEQUENCE,
        (Probe("A", frozenset("1"), "blank-neighbor", 1),),
    ),
    "binary-pair": CheckpointTemplate(
        "binary-pair",
        frozenset("A"),
        lambda c: c.symbol == "1" and _at_left_end(c),
        _binary_pair_value,
        SUBSEQUENCE,
        (Probe("A", frozenset("1"), "empty"),),
    ),
}


def template(template_id: str) -> CheckpointTemplate:
    return TEMPLATES[template_id]


def checkpoint(template: CheckpointTemplate, config: Configuration) -> int | None:
    """The integer encoded by ``config`` if it matches ``template``, else ``None``."""
    if config.state not in template.state_set:
        return None
    if not template.anchor(config):
        return None
    return template.extractor(config)


THEOREM1_PROBE = Probe("A", frozenset("1"), "any", 0)


def theorem1_target(config: Configuration) -> int | None:
    """``n`` if ``config`` is ``^ω b 0^n (A1) b^ω``, else ``None``."""
    if config.state != "A" or config.symbol != "1":
        return None
    bounds = config.tape.bounds()
    if bounds is None or bounds[1] != config.head:
        return None
    zeros = config.left_of_head()
    if zeros.strip("0"):
        return None
    return len(zeros)

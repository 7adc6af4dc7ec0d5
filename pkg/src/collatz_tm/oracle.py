"""Machine-free reference implementation of the 3x+1 map and Collatz-like maps.

All arithmetic is on Python integers, so values never wrap; there is no
fixed-width path to overflow.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass
from typing import Sequence

from .errors import DomainError


def _require_positive(x: int) -> None:
    if not isinstance(x, int) or isinstance(x, bool):
        raise DomainError(f"expected an integer, got {x!r}")
    if x < 1:
        raise DomainError(f"the 3x+1 map is applied to positive integers only, got {x}")


def t_step(x: int) -> int:
    """x/2 for even x, (3x+1)/2 for odd x."""
    _require_positive(x)
    if x % 2 == 0:
        return x // 2
    return (3 * x + 1) // 2


def t_step_halves(x: int) -> int:
    """The same map written as T(2n) = n, T(2n+1) = 3n+2."""
    _require_positive(x)
    n, r = divmod(x, 2)
    return 3 * n + 2 if r else n


@dataclass(frozen=True)
class CollatzLikeSpec:
    """f(x) = (a_i x + b_i) / d where i = x mod d.

    ``coefficients[i]`` is the pair ``(a_i, b_i)``.  Construction fails unless
    every residue class maps to integers.
    """

    d: int
    coefficients: tuple[tuple[int, int], ...]

    def __post_init__(self) -> None:
        object.__setattr__(self, "coefficients", tuple((int(a), int(b)) for a, b in self.coefficients))
        if self.d < 2:
            raise DomainError(f"modulus must be at least 2, got {self.d}")
        if len(self.coefficients) != self.d:
            raise DomainError(f"need {self.d} coefficient pairs, got {len(self.coefficients)}")
        for i, (a, b) in enumerate(self.coefficients):
            if (a * i + b) % self.d:
                raise DomainError(f"residue {i}: ({a}*{i} + {b}) is not divisible by {self.d}")

    def __call__(self, x: int) -> int:
        return collatz_like_step(self, x)


T_SPEC = CollatzLikeSpec(2, ((1, 0), (3, 1)))


def collatz_like_step(spec: CollatzLikeSpec, x: int) -> int:
    a, b = spec.coefficients[x % spec.d]
    q, r = divmod(a * x + b, spec.d)
    assert r == 0
    return q


class Termination(str, enum.Enum):
    REACHED_1 = "reached-1"
    BUDGET = "budget"
    LEFT_POSITIVE_DOMAIN = "left-positive-domain"


@dataclass(frozen=True)
class Trajectory:
    start: int
    values: tuple[int, ...]
    terminated_by: Termination

    def __len__(self) -> int:
        return len(self.values)

    @property
    def maximum(self) -> int:
        return max(self.values)


DEFAULT_MAX_ITERS = 10**6


def trajectory(x: int, max_iters: int = DEFAULT_MAX_ITERS) -> Trajectory:
    """Iterates of T from ``x``, stopping at the first 1 or after ``max_iters`` steps.

    >>> trajectory(7).values
    (7, 11, 17, 26, 13, 20, 10, 5, 8, 4, 2, 1)
    """
    _require_positive(x)
    values = [x]
    while values[-1] != 1:
        if len(values) > max_iters:
            return Trajectory(x, tuple(values), Termination.BUDGET)
        values.append(t_step(values[-1]))
    return Trajectory(x, tuple(values), Termination.REACHED_1)


def collatz_like_trajectory(spec: CollatzLikeSpec, x: int, max_iters: int = DEFAULT_MAX_ITERS) -> Trajectory:
    """Iterates of a Collatz-like map; stops at 1, at a non-positive value, or at the budget."""
    values = [x]
    while True:
        v = values[-1]
        if v < 1:
            return Trajectory(x, tuple(values), Termination.LEFT_POSITIVE_DOMAIN)
        if v == 1:
            return Trajectory(x, tuple(values), Termination.REACHED_1)
        if len(values) > max_iters:
            return Trajectory(x, tuple(values), Termination.BUDGET)
        values.append(collatz_like_step(spec, v))


def in_final_loop(x: int) -> bool:
    """Membership in the cycle 1 -> 2 -> 1."""
    return x in (1, 2)


def loop_continuation(length: int) -> tuple[int, ...]:
    """The values after a trajectory's final 1 when iteration continues: 2, 1, 2, ..."""
    return tuple(2 if i % 2 == 0 else 1 for i in range(length))


def is_subsequence(needle: Sequence[int], haystack: Sequence[int]) -> bool:
    it = iter(haystack)
    return all(any(v == h for h in it) for v in needle)

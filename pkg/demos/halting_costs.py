"""
How long the halting machines run
=================================

The unary machines pay for every iterate with a sweep over a block whose
length is the iterate itself, so their step counts grow roughly with the sum
of squares along the trajectory.  The base-3 and binary-pair machines only
sweep over the digits.
"""

import numpy as np

from collatz_tm.oracle import trajectory
from collatz_tm.verifier import verify_halting

inputs = np.arange(1, 201)
steps = {name: np.array([verify_halting(name, int(n)).steps for n in inputs]) for name in ("M3", "M5", "M6", "M8")}

###############################################################################
# For the unary machines, compare the step count with the sum of squares of
# the trajectory.  The ratio settles to a constant per machine.

sq = np.array([sum(v * v for v in trajectory(int(n)).values) for n in inputs])
for name in ("M3", "M5"):
    ratio = steps[name][20:] / sq[20:]
    print(f"{name}: steps / sum(v^2)  mean {ratio.mean():.3f}  spread {ratio.std():.3f}")

###############################################################################
# For the digit machines, the step count grows with the total numeral length.

digits = np.array([sum(len(bin(v)) - 2 for v in trajectory(int(n)).values) for n in inputs])
for name in ("M6", "M8"):
    slope, intercept = np.polyfit(digits, steps[name], 1)
    print(f"{name}: about {slope:.1f} steps per bit, summed over the trajectory")

print("longest runs:", {k: int(v.max()) for k, v in steps.items()})

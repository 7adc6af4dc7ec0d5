"""
Watching M1 divide by two
=========================

M1 keeps a base-3 numeral on its tape and sweeps left to right.  Each time
the head is back on the leftmost digit in state A, the tape holds the next
iterate of the 3x+1 map, possibly behind some leading zeros.
"""

from collatz_tm import builtin, encode, initial_configuration, run_with_observer, trajectory
from collatz_tm.encodings import checkpoint, template, theorem1_target

entry = builtin("M1")
x = 7
start = initial_configuration(entry.machine, encode(x, entry.encoding))
print(f"start  {start}")

###############################################################################
# Collect a reading every time the checkpoint template matches, and stop at
# the first configuration ^ω b 0^n (A1) b^ω after the start.

readings = []
tmpl = template(entry.template_id)


def watch(config):
    v = checkpoint(tmpl, config)
    if v is not None:
        readings.append(v)
        print(f"{config.steps_taken:5d}  {v:4d}  {config}")
    return config.steps_taken > 0 and theorem1_target(config) is not None


result = run_with_observer(entry.machine, start, 10_000, watch)

###############################################################################
# The readings are the oracle trajectory, value for value.

print("machine:", readings)
print("oracle: ", list(trajectory(x).values))
print("leading zeros at the end:", theorem1_target(result.configuration))

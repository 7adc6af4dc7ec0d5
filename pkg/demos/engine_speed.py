"""
Naive stepping against block stepping
=====================================

The reference engine applies one transition per loop iteration.  The
accelerated engine stores the tape as runs of equal symbols and crosses a
whole run in one go when the machine just moves over it.  Both give the same
final configuration; only the time differs.
"""

import time

from collatz_tm import builtin, encode, initial_configuration, run, run_accelerated

entry = builtin("M2")
machine = entry.machine
run_accelerated(machine, initial_configuration(machine, "1"), 1)  # load the compiled kernel

for n in (10, 100, 1000):
    config = initial_configuration(machine, encode(n, entry.encoding))
    budget = 300_000
    t0 = time.perf_counter()
    slow = run(machine, config, budget)
    t1 = time.perf_counter()
    fast = run_accelerated(machine, config, budget)
    t2 = time.perf_counter()
    assert slow.same_as(fast)
    print(f"n={n:5d}  {slow.status.value:17s} steps={slow.steps:7d}  naive {t1 - t0:.3f}s  blocks {t2 - t1:.4f}s")

###############################################################################
# Without a naive run to compare against, the block engine goes much further.

config = initial_configuration(machine, encode(703, entry.encoding))
t0 = time.perf_counter()
far = run_accelerated(machine, config, 10**10)
print(f"n=703  {far.steps} steps in {time.perf_counter() - t0:.2f}s")

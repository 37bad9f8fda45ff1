"""Counter wraparound and why deltas need correcting.

RAPL energy counters are cumulative microjoule counts that wrap to zero
once they reach the zone's max_energy_range_uj. A naive end-minus-start
goes negative across a wrap; corrected_delta treats the counter as modular
with that period and assumes at most one wrap per interval.
"""

from jouletrack import CorruptCounterError, corrected_delta

RANGE = 262_143_328_850  # a real package zone's range, in microjoules

# The common case: no wrap, plain subtraction.
print("no wrap:      ", corrected_delta(100, 250, RANGE))  # 150

# The counter wrapped between the two readings: 50 uJ consumed before the
# wrap, 30 after it.
print("single wrap:  ", corrected_delta(RANGE - 50, 30, RANGE))  # 80

# Same reading twice means nothing was consumed.
print("identity:     ", corrected_delta(4096, 4096, RANGE))  # 0

# A small worked example: range 5000, counter runs 4900 -> 300.
print("worked wrap:  ", corrected_delta(4900, 300, 5000))  # 400

# Readings above the declared range mean the counter (or our view of it)
# is corrupt, never a valid delta.
try:
    corrected_delta(RANGE + 1, 0, RANGE)
except CorruptCounterError as exc:
    print("corrupt read: ", exc)

# The caveat that motivates checkpointing: if an interval spans MORE than
# one wrap period, the missing full periods are unrecoverable. Splitting a
# long run into short intervals keeps each one inside a single period; see
# 03_checkpoints_additivity.py.
true_consumption = 2 * RANGE + 70
print("two wraps under-report:", corrected_delta(0, true_consumption % RANGE, RANGE))

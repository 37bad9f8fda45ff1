"""Checkpointing: split one long interval into many, losing nothing.

checkpoint() closes the open interval and reopens a new one using a single
set of counter reads, so there is no gap between intervals and the split
totals telescope to exactly the unsplit total. Short intervals are the
defense against counter wraps during long executions.
"""

from jouletrack import Channel, ChannelKind, EnergyTracker, FakeProbe

# A scripted probe stands in for hardware: successive reads of the package
# channel return these values.
script = [100, 200, 350, 900, 1500]
channel = Channel(
    id="cpu:0:package-0",
    name="package-0",
    max_energy_range=1_000_000,
    kind=ChannelKind.CPU_DOMAIN,
)

# One long interval: consumes only the first and last reading.
whole = EnergyTracker(
    cpu_probe=FakeProbe([channel], {"cpu:0:package-0": [script[0], script[-1]]})
)
whole.start()
whole.stop()
print("whole-interval total:", whole.calculate_energy().energy["cpu:0:package-0"])

# The same span split by checkpoints: every scripted reading participates.
split = EnergyTracker(cpu_probe=FakeProbe([channel], {"cpu:0:package-0": script}))
split.start()
for _ in range(len(script) - 2):
    split.checkpoint()
split.stop()
print("split-interval total:", split.calculate_energy().energy["cpu:0:package-0"])
print("closed intervals:    ", split.closed_intervals)

# Exact integer equality, not approximately equal - the acceptance suite
# asserts this over a thousand random scripts and split placements.
assert (
    whole.calculate_energy().energy == split.calculate_energy().energy
)

# A wrap inside one short interval is still corrected: range 5000,
# counter 4900 -> 300 means 400 uJ consumed.
wrap = EnergyTracker(
    cpu_probe=FakeProbe(
        [
            Channel(
                id="cpu:0:package-0",
                name="package-0",
                max_energy_range=5000,
                kind=ChannelKind.CPU_DOMAIN,
            )
        ],
        {"cpu:0:package-0": [4900, 300]},
    )
)
wrap.start()
wrap.stop()
print("wrap-corrected delta:", wrap.calculate_energy().energy["cpu:0:package-0"])

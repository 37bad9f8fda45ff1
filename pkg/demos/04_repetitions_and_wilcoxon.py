"""Benchmark methodology: repeated runs, cool-downs, paired comparison.

Single energy readings are noisy; the harness runs a task N times with an
idle gap between runs (residual power draw tails off after a workload), and
the signed-rank test then compares two measurement series pair by pair with
an exact two-sided p-value.
"""

import random

from jouletrack import (
    Channel,
    ChannelKind,
    EnergyTracker,
    FakeProbe,
    RepetitionPlan,
    comparison_table,
    mean,
    run_repetitions,
    wilcoxon_signed_rank,
)

rng = random.Random(2024)

# Scripted counters give each repetition a noisy but distinct delta.
channel = Channel(
    id="cpu:0:package-0",
    name="package-0",
    max_energy_range=10**12,
    kind=ChannelKind.CPU_DOMAIN,
)


def scripted_factory(per_run_uj: list[int]):
    # One long script: 2 reads per repetition (start + stop).
    script, counter = [], 0
    for delta in per_run_uj:
        script.append(counter)
        counter += delta
        script.append(counter)
    probe = FakeProbe([channel], {"cpu:0:package-0": script})
    return lambda label: EnergyTracker(cpu_probe=probe, label=label)

# Ten repetitions, no real sleeping in a demo: inject a recording sleeper.
plan = RepetitionPlan(repetitions=10, idle_seconds=30, label="task-a")
sleeps: list[float] = []

deltas_a = [1_000_000 + rng.randrange(50_000) for _ in range(10)]
measurements = run_repetitions(
    plan,
    task=lambda: None,  # the workload would run here
    tracker_factory=scripted_factory(deltas_a),
    sleep=sleeps.append,
)
series_a = [m.energy["cpu:0:package-0"] / 1e6 for m in measurements]
print("repetitions:", len(measurements), " idle sleeps:", len(sleeps))
print("series A (J):", [round(v, 3) for v in series_a])
print("mean A (J):  ", round(mean(series_a), 6))

# A second, cheaper variant of the task for the paired comparison.
deltas_b = [400_000 + rng.randrange(50_000) for _ in range(10)]
measurements_b = run_repetitions(
    plan,
    task=lambda: None,
    tracker_factory=scripted_factory(deltas_b),
    sleep=lambda _s: None,
)
series_b = [m.energy["cpu:0:package-0"] / 1e6 for m in measurements_b]
print("series B (J):", [round(v, 3) for v in series_b])

# Exact signed-rank test: with ten pairs all favoring B, the two-sided
# p-value is 2/2^10 = 0.00195..., which prints as 0.002.
result = wilcoxon_signed_rank(series_a, series_b)
print()
print("W =", result.w_statistic, " n_effective =", result.n_effective)
print("exact p =", result.p_value)
print()
print(comparison_table("task-a-vs-b", result))

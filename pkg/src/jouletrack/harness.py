"""Repetition harness and paired-series statistics.

Reliable energy numbers come from repeated runs with an idle cool-down
between them (power draw tails off after a workload ends), followed by a
paired comparison. The signed-rank test here computes the exact two-sided
p-value by enumerating the null distribution of the positive rank sum for
up to 25 effective pairs, switching to a continuity-corrected normal
approximation above that.
"""

from __future__ import annotations

import math
import time
from dataclasses import dataclass
from typing import Callable, Sequence

from scipy.stats import rankdata

from .errors import RepetitionError, ZeroVarianceError
from .tracker import EnergyTracker, Measurement

# Exact enumeration is cheap up to here; typical series (10 repetitions)
# sit firmly inside the exact regime.
EXACT_ENUMERATION_LIMIT = 25


@dataclass(frozen=True)
class RepetitionPlan:
    """How many measured runs to take and how long to idle between them."""

    repetitions: int
    idle_seconds: float = 0.0
    label: str = "measurement"

    def __post_init__(self) -> None:
        if self.repetitions < 1:
            raise ValueError(f"repetitions must be >= 1, got {self.repetitions}")
        if self.idle_seconds < 0:
            raise ValueError(f"idle_seconds must be >= 0, got {self.idle_seconds}")


@dataclass(frozen=True)
class SeriesComparison:
    """Two paired series with their means and signed-rank statistics."""

    series_a: tuple[float, ...]
    series_b: tuple[float, ...]
    mean_a: float
    mean_b: float
    w_statistic: float
    p_value: float
    n_effective: int


def run_repetitions(
    plan: RepetitionPlan,
    task: Callable[[], None],
    tracker_factory: Callable[[str], EnergyTracker],
    *,
    sleep: Callable[[float], None] = time.sleep,
) -> list[Measurement]:
    """Measure ``task`` ``plan.repetitions`` times with idle gaps between.

    Each repetition gets a fresh tracker from ``tracker_factory`` (called
    with the plan's label); ``sleep`` runs exactly repetitions-1 times, never
    after the last run. A failing task aborts the series with a
    RepetitionError carrying the measurements completed so far.
    """
    measurements: list[Measurement] = []
    for rep in range(plan.repetitions):
        if rep > 0:
            sleep(plan.idle_seconds)
        tracker = tracker_factory(plan.label)
        tracker.start()
        try:
            task()
        except Exception as exc:
            raise RepetitionError(
                f"task failed on repetition {rep + 1} of {plan.repetitions}: {exc}",
                measurements,
            ) from exc
        tracker.stop()
        measurements.append(tracker.calculate_energy())
    return measurements


def mean(values: Sequence[float]) -> float:
    """Arithmetic mean of a non-empty series."""
    if len(values) == 0:
        raise ValueError("mean of an empty series is undefined")
    return math.fsum(values) / len(values)


def _exact_two_sided_p(ranks: Sequence[float], w: float, n: int) -> float:
    # Null distribution of W+ over all 2^n sign assignments, keeping the
    # observed (possibly tied, half-integral) ranks. Doubling the ranks makes
    # every achievable sum an integer, so a subset-sum count is exact.
    scaled = [int(round(2 * r)) for r in ranks]
    total = sum(scaled)
    counts = [0] * (total + 1)
    counts[0] = 1
    for s in scaled:
        for value in range(total - s, -1, -1):
            if counts[value]:
                counts[value + s] += counts[value]
    threshold = int(math.floor(2 * w + 1e-9))
    favorable = sum(counts[: threshold + 1])
    return min(1.0, 2 * favorable / 2**n)


def _normal_two_sided_p(w: float, n: int) -> float:
    mu = n * (n + 1) / 4
    sigma = math.sqrt(n * (n + 1) * (2 * n + 1) / 24)
    z = (w + 0.5 - mu) / sigma
    lower_tail = 0.5 * math.erfc(-z / math.sqrt(2))
    return min(1.0, 2 * lower_tail)


def wilcoxon_signed_rank(
    series_a: Sequence[float], series_b: Sequence[float]
) -> SeriesComparison:
    """Exact two-sided Wilcoxon signed-rank comparison of paired series.

    Differences of zero are dropped (``n_effective`` reports what remains),
    absolute differences are ranked with average ranks for ties, and the
    statistic is ``min(W+, W-)``. The two-sided p-value is
    ``2 * P(W+ <= w)`` under the enumerated null, capped at 1.

    Raises:
        ValueError: series lengths differ or are empty.
        ZeroVarianceError: every pair is identical.
    """
    if len(series_a) != len(series_b):
        raise ValueError(
            f"paired series must have equal length: {len(series_a)} vs {len(series_b)}"
        )
    if len(series_a) == 0:
        raise ValueError("paired series must be non-empty")
    a = tuple(float(x) for x in series_a)
    b = tuple(float(x) for x in series_b)
    diffs = [x - y for x, y in zip(a, b)]
    nonzero = [d for d in diffs if d != 0.0]
    if not nonzero:
        raise ZeroVarianceError("all paired differences are zero")
    n = len(nonzero)
    ranks = rankdata([abs(d) for d in nonzero])
    w_plus = math.fsum(r for d, r in zip(nonzero, ranks) if d > 0)
    w_minus = math.fsum(r for d, r in zip(nonzero, ranks) if d < 0)
    w = min(w_plus, w_minus)
    if n <= EXACT_ENUMERATION_LIMIT:
        p = _exact_two_sided_p(ranks, w, n)
    else:
        p = _normal_two_sided_p(w, n)
    return SeriesComparison(
        series_a=a,
        series_b=b,
        mean_a=mean(a),
        mean_b=mean(b),
        w_statistic=w,
        p_value=p,
        n_effective=n,
    )


def comparison_table(task: str, comparison: SeriesComparison) -> str:
    """Two-line summary: task, per-series means, p-value to 3 decimals."""
    header = "task\tmean_a\tmean_b\tp_value"
    row = (
        f"{task}\t{comparison.mean_a:.6f}\t{comparison.mean_b:.6f}"
        f"\t{comparison.p_value:.3f}"
    )
    return header + "\n" + row

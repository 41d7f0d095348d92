"""Sweep runner and CSV writer.

One row per cycle count n. Post-selected mode runs the protocol once per n;
stochastic mode runs `trials` independent protocol executions per n, each
with a seed derived from (master seed, n, trial) through a splitmix64-style
mixer, so any single trial can be reproduced without replaying the others.

The CSV is a byte-reproducible artifact: (config, seed) determines every
written byte. Because measured wall time cannot satisfy that, the
wall_time_ms column is normalized to 0 unless the caller explicitly opts
into keeping timings; measured values stay available on the in-memory rows.
"""
from __future__ import annotations

import csv
import math
import time
from dataclasses import dataclass, field

from .analysis import single_qubit_survival
from .config import ExperimentConfig
from .protocol import MODE_STOCHASTIC, ZenoSchedule, run_protocol

CSV_COLUMNS = (
    "n",
    "survival_probability",
    "mean_post_selected_fidelity",
    "detection_rate",
    "analytic_reference",
    "wall_time_ms",
)

_MASK64 = (1 << 64) - 1


def mix64(x: int) -> int:
    """splitmix64 finalizer: one-round avalanche of a 64-bit value."""
    x = (x + 0x9E3779B97F4A7C15) & _MASK64
    x = ((x ^ (x >> 30)) * 0xBF58476D1CE4E5B9) & _MASK64
    x = ((x ^ (x >> 27)) * 0x94D049BB133111EB) & _MASK64
    return x ^ (x >> 31)


def derive_trial_seed(master_seed: int, n: int, trial: int) -> int:
    """Order-independent per-trial seed: mix64 chained over (seed, n, trial)."""
    s = mix64(master_seed & _MASK64)
    s = mix64(s ^ (n & _MASK64))
    return mix64(s ^ (trial & _MASK64))


@dataclass
class SweepRow:
    """One sweep point. wall_time_ms is measured and not reproducible; every
    other field is a pure function of (config, seed)."""

    n: int
    survival_probability: float
    mean_post_selected_fidelity: float
    detection_rate: float
    analytic_reference: float
    wall_time_ms: float
    failed: bool = False


@dataclass
class SweepResult:
    rows: list[SweepRow] = field(default_factory=list)


def run_sweep(config: ExperimentConfig) -> SweepResult:
    """Execute the configured protocol for every n; never returns a short
    result — a row that raises is marked failed (NaN fields) instead."""
    data = config.data_state()
    noise = config.noise_spec()
    rows = []
    for n in config.n_values:
        reference = single_qubit_survival(config.lam[0], config.total_time, n)
        start = time.perf_counter()
        try:
            if config.mode == MODE_STOCHASTIC:
                survival, fidelity_mean, detection = _stochastic_point(config, data, noise, n)
            else:
                schedule = ZenoSchedule(
                    total_time=config.total_time,
                    cycles=n,
                    aux_strategy=config.aux_strategy,
                    measurement_mode=config.mode,
                    abort_policy=config.abort_policy,
                )
                result = run_protocol(data, noise, schedule)
                survival = result.survival_probability
                fidelity_mean = result.final_fidelity
                detection = 1.0 if result.detected else 0.0
            row = SweepRow(
                n=n,
                survival_probability=survival,
                mean_post_selected_fidelity=fidelity_mean,
                detection_rate=detection,
                analytic_reference=reference,
                wall_time_ms=(time.perf_counter() - start) * 1e3,
            )
        except Exception:
            row = SweepRow(
                n=n,
                survival_probability=math.nan,
                mean_post_selected_fidelity=math.nan,
                detection_rate=math.nan,
                analytic_reference=reference,
                wall_time_ms=(time.perf_counter() - start) * 1e3,
                failed=True,
            )
        rows.append(row)
    return SweepResult(rows=rows)


def _stochastic_point(config, data, noise, n) -> tuple[float, float, float]:
    survivors = 0
    detections = 0
    fidelity_sum = 0.0
    for trial in range(config.trials):
        schedule = ZenoSchedule(
            total_time=config.total_time,
            cycles=n,
            aux_strategy=config.aux_strategy,
            measurement_mode=config.mode,
            seed=derive_trial_seed(config.seed, n, trial),
            abort_policy=config.abort_policy,
        )
        result = run_protocol(data, noise, schedule)
        if result.detected:
            detections += 1
        if result.survival_probability == 1.0:
            survivors += 1
            fidelity_sum += result.final_fidelity
    survival = survivors / config.trials
    fidelity_mean = fidelity_sum / survivors if survivors else math.nan
    return survival, fidelity_mean, detections / config.trials


def write_csv(result: SweepResult, path, keep_timings: bool = False) -> None:
    """Write the sweep as CSV with the fixed column order and 12-significant-
    digit formatting. wall_time_ms is written as 0 unless keep_timings, so
    identical (config, seed) runs produce byte-identical files."""
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(CSV_COLUMNS)
        for row in result.rows:
            wall = row.wall_time_ms if keep_timings else 0.0
            writer.writerow(
                [
                    row.n,
                    _fmt(row.survival_probability),
                    _fmt(row.mean_post_selected_fidelity),
                    _fmt(row.detection_rate),
                    _fmt(row.analytic_reference),
                    _fmt(wall),
                ]
            )


def _fmt(value: float) -> str:
    return format(value, ".12g")

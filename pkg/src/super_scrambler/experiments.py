"""Experiment harness: deterministic GHZ circuit, random T/C3 ensembles,
and the growth-rate / saturation-time analyses.
"""

from __future__ import annotations

import json
import math
import os
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from typing import List, Optional, Sequence, Tuple

import numpy as np

from .model import C3, OperatorProgram, SuperGate, T, localize_c3
from .tableau import Region, SuperStabilizerTableau


class ExperimentError(ValueError):
    pass


@dataclass
class ExperimentConfig:
    n_qubits: int
    time_steps: int
    realizations: int
    rng_seed: int
    cut: Optional[Region] = None  # defaults to prefix(N // 2)
    sample_every: int = 1
    output: Optional[str] = None

    def __post_init__(self):
        if self.n_qubits < 3:
            raise ExperimentError("random runs need at least 3 qubits")
        if self.time_steps < 0 or self.realizations < 1 or self.sample_every < 1:
            raise ExperimentError("bad time_steps/realizations/sample_every")
        if self.cut is None:
            self.cut = Region.prefix(self.n_qubits // 2)
        self.cut.validate(self.n_qubits)

    def to_dict(self) -> dict:
        return {
            "n_qubits": self.n_qubits,
            "time_steps": self.time_steps,
            "realizations": self.realizations,
            "rng_seed": self.rng_seed,
            "cut": sorted(self.cut.sites),
            "sample_every": self.sample_every,
            "output": self.output,
        }


@dataclass
class EntropySeries:
    """Sampled entropy per step: one column per realization."""

    steps: np.ndarray  # (n_samples,)
    values: np.ndarray  # (n_samples, realizations)

    @property
    def mean(self) -> np.ndarray:
        return self.values.mean(axis=1)

    @property
    def stderr(self) -> np.ndarray:
        r = self.values.shape[1]
        if r < 2:
            return np.zeros(len(self.steps))
        return self.values.std(axis=1, ddof=1) / math.sqrt(r)

    @property
    def realizations(self) -> int:
        return self.values.shape[1]


def build_ghz_program(n_qubits: int, localized: bool = False) -> OperatorProgram:
    """T on the first N/3 sites, then the block-coupling C3 layer.

    Gates are listed in operator-space application order.  With
    `localized`, each C3 is expanded into nearest-neighbor SWAPs around a
    local C3, giving an O(N^2) total gate count.
    """
    if n_qubits % 3 != 0 or n_qubits < 3:
        raise ExperimentError("GHZ circuit needs n_qubits divisible by 3")
    k = n_qubits // 3
    gates: List[SuperGate] = [T(j) for j in range(1, k + 1)]
    for j in range(1, k + 1):
        c3 = C3(j, k + j, 2 * k + j)
        if localized:
            gates.extend(localize_c3(c3, n_qubits))
        else:
            gates.append(c3)
    return OperatorProgram(n_qubits, tuple(gates))


def random_step(rng: np.random.Generator, n_qubits: int) -> List[SuperGate]:
    """One time step: a T on a uniform site, then a C3 on a uniform
    contiguous 3-site window with a uniformly chosen control."""
    if n_qubits < 3:
        raise ExperimentError("random step needs at least 3 qubits")
    t_site = int(rng.integers(1, n_qubits + 1))
    base = int(rng.integers(1, n_qubits - 1))  # window start, 1..N-2
    window = [base, base + 1, base + 2]
    control = window.pop(int(rng.integers(0, 3)))
    return [T(t_site), C3(control, window[0], window[1])]


def _run_realization(
    args: Tuple[int, int, int, Tuple[int, ...], np.random.SeedSequence]
) -> List[int]:
    n_qubits, time_steps, sample_every, cut_sites, seed_seq = args
    rng = np.random.default_rng(seed_seq)
    tableau = SuperStabilizerTableau.new_all_x(n_qubits)
    region = Region(cut_sites)
    out = [tableau.entropy(region)]
    for step in range(1, time_steps + 1):
        for gate in random_step(rng, n_qubits):
            tableau.apply_gate(gate)
        if step % sample_every == 0:
            out.append(tableau.entropy(region))
    return out


def run_random_ensemble(
    config: ExperimentConfig, max_workers: int = 1
) -> EntropySeries:
    """Evolve `realizations` independent tableaus and aggregate entropies.

    Realization r uses the r-th child of SeedSequence(rng_seed), so results
    are reproducible and independent of worker count.
    """
    children = np.random.SeedSequence(config.rng_seed).spawn(config.realizations)
    cut_sites = tuple(sorted(config.cut.sites))
    jobs = [
        (
            config.n_qubits,
            config.time_steps,
            config.sample_every,
            cut_sites,
            child,
        )
        for child in children
    ]
    if max_workers > 1:
        with ProcessPoolExecutor(max_workers=max_workers) as pool:
            columns = list(pool.map(_run_realization, jobs))
    else:
        columns = [_run_realization(j) for j in jobs]
    steps = np.arange(0, config.time_steps + 1)
    steps = steps[(steps % config.sample_every == 0)]
    values = np.array(columns, dtype=float).T  # (n_samples, realizations)
    return EntropySeries(steps=steps, values=values)


def plateau_estimate(series: EntropySeries) -> float:
    """Mean entropy over the final 10% of samples."""
    n = len(series.steps)
    tail = max(1, n // 10)
    return float(series.mean[-tail:].mean())


def fit_growth_rate(series: EntropySeries) -> float:
    """Least-squares slope (bits/step) over the window where the ensemble
    mean lies between 10% and 50% of its plateau."""
    mean = series.mean
    plateau = plateau_estimate(series)
    if plateau <= 0:
        raise ExperimentError("series never grows: no growth window")
    lo, hi = 0.1 * plateau, 0.5 * plateau
    window = (mean >= lo) & (mean <= hi)
    if window.sum() < 2:
        raise ExperimentError("growth window too short for a slope fit")
    x = series.steps[window].astype(float)
    y = mean[window]
    slope, _ = np.polyfit(x, y, 1)
    return float(slope)


def estimate_saturation_time(
    series: EntropySeries, threshold_fraction: float = 0.95
) -> int:
    """First sampled step where the mean exceeds threshold x plateau.

    Requires the final 10% of the series to be flat (slope consistent
    with zero within noise), otherwise the plateau is not established.
    """
    n = len(series.steps)
    tail = max(2, n // 10)
    x = series.steps[-tail:].astype(float)
    y = series.mean[-tail:]
    slope, _ = np.polyfit(x, y, 1)
    plateau = plateau_estimate(series)
    drift = abs(slope) * (x[-1] - x[0])
    noise = max(0.02 * plateau, 2.0 * float(series.stderr[-tail:].mean()))
    if plateau <= 0 or drift > noise:
        raise ExperimentError("plateau not reached")
    above = series.mean >= threshold_fraction * plateau
    idx = np.argmax(above)
    if not above[idx]:
        raise ExperimentError("mean never exceeds the saturation threshold")
    return int(series.steps[idx])


def page_value(n_qubits: int, cut_size: int) -> float:
    """Average entanglement entropy (bits) of a Haar-random pure state for
    a 2^cut x 2^(N-cut) bipartition, cut being the smaller factor."""
    if not 1 <= cut_size <= n_qubits // 2:
        raise ExperimentError("cut_size must be in 1..N/2")
    return cut_size - 2.0 ** (2 * cut_size - n_qubits - 1) / math.log(2)


# -- result emission --------------------------------------------------------


def format_float(x: float) -> str:
    return f"{x:.9g}"


def write_csv(series: EntropySeries, path: str) -> None:
    """CSV schema: step,mean_entropy,stderr,realizations; LF endings."""
    mean = series.mean
    err = series.stderr
    r = series.realizations
    with open(path, "w", newline="\n") as f:
        f.write("step,mean_entropy,stderr,realizations\n")
        for i, step in enumerate(series.steps):
            f.write(f"{step},{format_float(mean[i])},{format_float(err[i])},{r}\n")


def summarize(config: ExperimentConfig, series: EntropySeries) -> dict:
    summary: dict = {"config": config.to_dict()}
    try:
        summary["plateau"] = plateau_estimate(series)
    except ExperimentError:
        summary["plateau"] = None
    for key, fn in (
        ("growth_rate", fit_growth_rate),
        ("saturation_step", estimate_saturation_time),
    ):
        try:
            summary[key] = fn(series)
        except ExperimentError as e:
            summary[key] = None
            summary[f"{key}_error"] = str(e)
    cut_size = min(len(config.cut), config.n_qubits - len(config.cut))
    summary["page_value"] = (
        page_value(config.n_qubits, cut_size) if cut_size >= 1 else None
    )
    return summary


def write_summary(summary: dict, path: str) -> None:
    with open(path, "w", newline="\n") as f:
        json.dump(summary, f, indent=2)
        f.write("\n")

"""Traffic-demand tensors for planning windows.

A demand instance holds the downlink load in bits per (grid, slice, interval).
Terminals are placed by independent Poisson counts per grid and slice, drawn
once per window; each terminal's per-interval load is Poisson around a mean
sampled uniformly from a configured range.
"""

from __future__ import annotations

from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .geometry import NetworkLayout

_DTD_MAGIC = "ranslice-dtd 1"


class DtdFormatError(ValueError):
    """Raised when a demand file cannot be parsed or has inconsistent shape."""


@dataclass(frozen=True)
class DtdInstance:
    """Per-window demand tensor, indexed [grid, slice, interval], in bits."""

    loads_bits: np.ndarray
    num_intervals: int
    interval_duration_s: float

    def __post_init__(self):
        arr = np.asarray(self.loads_bits, dtype=float)
        if arr.ndim != 3:
            raise ValueError(f"loads must be a 3-d tensor, got shape {arr.shape}")
        if arr.shape[2] != self.num_intervals:
            raise ValueError(
                f"interval axis ({arr.shape[2]}) does not match num_intervals ({self.num_intervals})"
            )
        if self.num_intervals < 1:
            raise ValueError("need at least one interval")
        if self.interval_duration_s <= 0:
            raise ValueError("interval duration must be positive")
        if not np.all(np.isfinite(arr)) or np.any(arr < 0):
            raise ValueError("loads must be finite and nonnegative")
        object.__setattr__(self, "loads_bits", arr)

    @property
    def num_grids(self) -> int:
        return self.loads_bits.shape[0]

    @property
    def num_slices(self) -> int:
        return self.loads_bits.shape[1]


@dataclass(frozen=True)
class TrafficParams:
    """Demand-generation knobs for one planning window."""

    ppp_rate_per_grid: float
    mean_load_bits_low: float
    mean_load_bits_high: float
    seed: int
    load_quantum_bits: float = 1e4

    def __post_init__(self):
        if self.ppp_rate_per_grid < 0:
            raise ValueError("terminal rate must be nonnegative")
        if not (0 < self.mean_load_bits_low <= self.mean_load_bits_high):
            raise ValueError("need 0 < low <= high for the mean-load range")
        if self.load_quantum_bits <= 0:
            raise ValueError("load quantum must be positive")


def draw_terminal_counts(
    layout: NetworkLayout, num_slices: int, params: TrafficParams
) -> np.ndarray:
    """Per-(grid, slice) terminal counts for one window.

    This is exactly the first draw :func:`generate_dtd` makes from the same
    seed, so the count distribution can be checked independently.
    """
    rng = np.random.default_rng(params.seed)
    return rng.poisson(params.ppp_rate_per_grid, size=(layout.num_grids, num_slices))


def generate_dtd(
    layout: NetworkLayout,
    num_slices: int,
    params: TrafficParams,
    num_intervals: int,
    interval_duration_s: float,
) -> DtdInstance:
    """Draw one demand instance; deterministic for a given seed.

    Terminal counts per (grid, slice) are Poisson with the configured rate and
    stay fixed across the window's intervals. Each terminal gets a mean load
    uniform in [low, high] bits; its per-interval load is Poisson in units of
    the load quantum around that mean.
    """
    if num_slices < 1:
        raise ValueError("need at least one slice")
    if layout.num_grids < 1:
        raise ValueError("layout has no grids")
    rng = np.random.default_rng(params.seed)
    I, N, T = layout.num_grids, num_slices, num_intervals
    counts = rng.poisson(params.ppp_rate_per_grid, size=(I, N))
    total_uts = int(counts.sum())
    loads = np.zeros((I, N, T))
    if total_uts > 0:
        means = rng.uniform(params.mean_load_bits_low, params.mean_load_bits_high, size=total_uts)
        quanta = rng.poisson(means[:, None] / params.load_quantum_bits, size=(total_uts, T))
        per_ut = quanta * params.load_quantum_bits
        owner = np.repeat(np.arange(I * N), counts.reshape(-1))
        flat = np.zeros((I * N, T))
        np.add.at(flat, owner, per_ut)
        loads = flat.reshape(I, N, T)
    return DtdInstance(loads_bits=loads, num_intervals=T, interval_duration_s=interval_duration_s)


def save_dtd(instance: DtdInstance, path: str | Path) -> None:
    """Write a demand instance as self-describing text.

    Line 1: magic/version. Line 2: ``I N T tau``. Then one line per
    (grid, slice, interval) triple: ``i n t load_bits``, floats in repr form
    so the round trip is bit exact.
    """
    arr = instance.loads_bits
    I, N, T = arr.shape
    lines = [_DTD_MAGIC, f"{I} {N} {T} {instance.interval_duration_s!r}"]
    for i in range(I):
        for n in range(N):
            for t in range(T):
                lines.append(f"{i} {n} {t} {float(arr[i, n, t])!r}")
    Path(path).write_text("\n".join(lines) + "\n")


def load_dtd(
    path: str | Path,
    *,
    expect_grids: int | None = None,
    expect_slices: int | None = None,
) -> DtdInstance:
    """Parse a demand file written by :func:`save_dtd`."""
    text = Path(path).read_text()
    lines = [ln for ln in text.splitlines() if ln.strip()]
    if not lines or lines[0] != _DTD_MAGIC:
        raise DtdFormatError(f"{path}: missing '{_DTD_MAGIC}' header")
    try:
        I, N, T, tau = lines[1].split()
        I, N, T, tau = int(I), int(N), int(T), float(tau)
    except (IndexError, ValueError) as exc:
        raise DtdFormatError(f"{path}: malformed dimension line") from exc
    body = lines[2:]
    if len(body) != I * N * T:
        raise DtdFormatError(f"{path}: expected {I * N * T} load lines, found {len(body)}")
    loads = np.zeros((I, N, T))
    seen = np.zeros((I, N, T), dtype=bool)
    for ln in body:
        try:
            i_s, n_s, t_s, w_s = ln.split()
            i, n, t, w = int(i_s), int(n_s), int(t_s), float(w_s)
        except ValueError as exc:
            raise DtdFormatError(f"{path}: malformed load line {ln!r}") from exc
        if not (0 <= i < I and 0 <= n < N and 0 <= t < T):
            raise DtdFormatError(f"{path}: index out of range in line {ln!r}")
        if seen[i, n, t]:
            raise DtdFormatError(f"{path}: duplicate entry for ({i}, {n}, {t})")
        seen[i, n, t] = True
        loads[i, n, t] = w
    if expect_grids is not None and I != expect_grids:
        raise DtdFormatError(f"{path}: file has {I} grids, layout expects {expect_grids}")
    if expect_slices is not None and N != expect_slices:
        raise DtdFormatError(f"{path}: file has {N} slices, expected {expect_slices}")
    return DtdInstance(loads_bits=loads, num_intervals=T, interval_duration_s=tau)

"""Propagation model and the coefficients feeding the power solver.

Path loss follows the COST 231-Hata form for the 150-2000 MHz band; gains are
kept linear everywhere past the configuration boundary. Interference between
two reservations is weighted by a collision-likeliness factor in [0, 1],
either a constant or the occupied fraction of the interferer's per-interval
block budget.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .geometry import BsSite, NetworkLayout, euclid_distance_km
from .slicing import CoverageMap, SliceSpec
from .traffic import DtdInstance

THETA_MODES = ("occupancy", "constant")


@dataclass(frozen=True)
class RadioConfig:
    """Spectrum-level parameters shared by all BSs.

    rb_budget is the total number of resource blocks per BS over a whole
    planning window; rb_bandwidth_hz sets the per-block noise bandwidth.
    """

    noise_density_dbm_hz: float = -174.0
    rb_bandwidth_hz: float = 360e3
    rb_budget: float = 1e5
    theta_mode: str = "occupancy"
    theta_constant: float = 1.0

    def __post_init__(self):
        if self.rb_bandwidth_hz <= 0:
            raise ValueError("block bandwidth must be positive")
        if self.rb_budget <= 0:
            raise ValueError("block budget must be positive")
        if self.theta_mode not in THETA_MODES:
            raise ValueError(f"theta_mode must be one of {THETA_MODES}")
        if not (0.0 <= self.theta_constant <= 1.0):
            raise ValueError("theta_constant must lie in [0, 1]")

    @property
    def noise_rb_w(self) -> float:
        """Noise power over one resource block, in watts."""
        density_w_hz = 10.0 ** ((self.noise_density_dbm_hz - 30.0) / 10.0)
        return density_w_hz * self.rb_bandwidth_hz


def path_loss_db(bs: BsSite, d_km: float) -> float:
    """COST 231-Hata path loss (dB) from a BS to a point d_km away."""
    if d_km <= 0:
        raise ValueError(f"distance must be positive, got {d_km}")
    log_h = math.log10(bs.antenna_height_m)
    return (
        46.55
        + 33.81 * math.log10(bs.carrier_freq_mhz)
        - 13.82 * log_h
        + (44.9 - 6.55 * log_h) * math.log10(d_km)
    )


def linear_gain(bs: BsSite, d_km: float) -> float:
    """Linear power gain from path loss, capped at unity."""
    return min(1.0, 10.0 ** (-path_loss_db(bs, d_km) / 10.0))


@dataclass(frozen=True)
class GainTable:
    """Average linear gain from every BS (macro first) to every grid center."""

    gain: np.ndarray  # (M+1, I)

    def serving(self, coverage: CoverageMap) -> np.ndarray:
        """Gain of each (grid, slice) pair's serving BS, shape (I, N)."""
        return self.gain[coverage.assoc, np.arange(self.gain.shape[1])[:, None]]


def build_gain_table(layout: NetworkLayout) -> GainTable:
    g = np.empty((layout.num_sbs + 1, layout.num_grids))
    for m in range(layout.num_sbs + 1):
        site = layout.bs_site(m)
        for i in range(layout.num_grids):
            g[m, i] = linear_gain(site, euclid_distance_km(layout, m, i))
    return GainTable(gain=g)


def theta(
    coverage: CoverageMap,
    dtd: DtdInstance,
    slice_spec: SliceSpec,
    radio: RadioConfig,
    i: int,
    n: int,
    i2: int,
    n2: int,
    t: int,
) -> float:
    """Likeliness that the reservation for (i2, n2) collides with (i, n) in
    interval t. Occupancy mode uses the fraction of the interferer's
    per-interval block budget its own demand occupies."""
    if radio.theta_mode == "constant":
        return radio.theta_constant
    per_interval_budget = radio.rb_budget / dtd.num_intervals
    demand = dtd.loads_bits[i2, n2, t] * slice_spec.rb_per_bit[n2]
    return min(1.0, demand / per_interval_budget)


def theta_factors(
    dtd: DtdInstance,
    slice_spec: SliceSpec,
    radio: RadioConfig,
    t: int,
) -> np.ndarray:
    """Collision likeliness of every potential interferer, shape (I, N)."""
    if radio.theta_mode == "constant":
        return np.full(dtd.loads_bits.shape[:2], radio.theta_constant)
    per_interval_budget = radio.rb_budget / dtd.num_intervals
    eta = np.asarray(slice_spec.rb_per_bit)
    return np.minimum(1.0, dtd.loads_bits[:, :, t] * eta[None, :] / per_interval_budget)


def delta(b: int, theta_value: float, gain: float) -> float:
    """Composite interference coefficient: indicator x likeliness x gain."""
    return b * theta_value * gain

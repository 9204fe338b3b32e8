"""Energy accounting and the weighted energy-efficiency objective.

Efficiency of a slice over a window is its delivered bits divided by the
product of consumed transmission energy and reserved blocks (bit/RB/J); the
network objective is the weighted sum over slices. A slice with no traffic
contributes zero rather than an undefined ratio.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .power import PowerPlan
from .slicing import CoverageMap, SliceSpec
from .traffic import DtdInstance


@dataclass(frozen=True)
class EeReport:
    """Window-level efficiency summary.

    per_bs_slice_energy[m, n, t] is the transmission energy (J) BS m spends
    on slice n in interval t; the per-slice aggregates follow from it.
    """

    per_slice_ee: np.ndarray  # bit/RB/J
    objective: float
    per_slice_energy_j: np.ndarray
    per_slice_bits: np.ndarray
    per_slice_rbs: np.ndarray
    per_bs_slice_energy: np.ndarray  # (M+1, N, T)


def energy(plan: PowerPlan, coverage: CoverageMap, tau_s: float) -> np.ndarray:
    """Per-(BS, slice, interval) transmission energy: interval length times
    the BS's total reserved power over its coverage for that slice."""
    M1 = coverage.num_bs
    N = coverage.num_slices
    T = plan.power_w.shape[2]
    out = np.zeros((M1, N, T))
    for m in range(M1):
        for n in range(N):
            grids = coverage.sc_sets[m][n]
            out[m, n, :] = tau_s * plan.power_w[grids, n, :].sum(axis=0)
    return out


def slice_ee(
    dtd: DtdInstance,
    plan: PowerPlan,
    coverage: CoverageMap,
    slice_spec: SliceSpec,
    tau_s: float,
) -> np.ndarray:
    """Per-slice efficiency xi = bits / (energy * reserved blocks)."""
    bits = dtd.loads_bits.sum(axis=(0, 2))
    e = energy(plan, coverage, tau_s).sum(axis=(0, 2))
    rbs = bits * np.asarray(slice_spec.rb_per_bit)
    out = np.zeros(coverage.num_slices)
    for n in range(coverage.num_slices):
        if bits[n] == 0:
            continue
        if e[n] <= 0:
            raise ValueError(f"slice {n} carries traffic but consumed no energy")
        out[n] = bits[n] / (e[n] * rbs[n])
    return out


def objective(report: EeReport, ee_weight: Sequence[float]) -> float:
    """Weighted network efficiency over one window."""
    return float(np.dot(np.asarray(ee_weight), report.per_slice_ee))


def ee_report(
    dtd: DtdInstance,
    plan: PowerPlan,
    coverage: CoverageMap,
    slice_spec: SliceSpec,
    tau_s: float,
) -> EeReport:
    """Assemble the full efficiency summary for one feasible window plan."""
    per_bs = energy(plan, coverage, tau_s)
    bits = dtd.loads_bits.sum(axis=(0, 2))
    rbs = bits * np.asarray(slice_spec.rb_per_bit)
    xi = slice_ee(dtd, plan, coverage, slice_spec, tau_s)
    return EeReport(
        per_slice_ee=xi,
        objective=float(np.dot(np.asarray(slice_spec.ee_weight), xi)),
        per_slice_energy_j=per_bs.sum(axis=(0, 2)),
        per_slice_bits=bits,
        per_slice_rbs=rbs,
        per_bs_slice_energy=per_bs,
    )


def interval_objective(
    dtd: DtdInstance,
    plan: PowerPlan,
    coverage: CoverageMap,
    slice_spec: SliceSpec,
    tau_s: float,
    t: int,
) -> float:
    """Single-interval efficiency: per slice, bits-per-block over energy.

    Used by the convexity and monotonicity property checks; slices idle in
    the interval contribute zero.
    """
    total = 0.0
    eta = slice_spec.rb_per_bit
    weights = slice_spec.ee_weight
    for n in range(coverage.num_slices):
        bits = dtd.loads_bits[:, n, t].sum()
        if bits == 0:
            continue
        spent = tau_s * plan.power_w[:, n, t].sum()
        if spent <= 0:
            raise ValueError(f"slice {n} has interval-{t} traffic but no power")
        per_block = bits / (bits * eta[n])
        total += weights[n] * per_block / spent
    return total

"""Per-interval downlink power planning under per-slice SINR targets.

Active (grid, slice) pairs -- those with traffic in the interval -- form a
linear system: each pair's per-block received power must equal its scaled
SINR target times noise plus weighted interference. The direct solve of that
system is the production path; a monotone fixed-point iteration of the same
balance equations serves as an independent verification oracle. A standard
positive-systems argument ties the two together: the iteration converges
exactly when the targets are jointly feasible, and in the infeasible case the
direct solve necessarily yields a nonpositive component (or a near-singular
matrix), so both paths flag the same instances.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .channel import GainTable, RadioConfig, theta_factors
from .geometry import NetworkLayout
from .slicing import CoverageMap, SliceSpec, check_rb_budgets, indicator_matrix
from .traffic import DtdInstance

# Infeasibility taxonomy surfaced on plans.
SINGULAR_SYSTEM = "singular_system"
NONPOSITIVE_POWER = "nonpositive_power"
BUDGET_VIOLATION = "budget_violation"
RB_BUDGET_VIOLATION = "rb_budget_violation"

# Beyond this condition number the closed-form inverse is numerically void.
COND_LIMIT = 1e12

FIXED_POINT_TOL = 1e-12
FIXED_POINT_MAX_ITER = 100_000
_DIVERGENCE_CAP = 1e30


@dataclass(frozen=True)
class PowerPlan:
    """Reserved transmission power per (grid, slice, interval), in watts.

    Inactive pairs carry exactly zero power. When infeasible, the reason
    records which check failed first.
    """

    power_w: np.ndarray
    feasible: bool
    infeasibility_reason: str | None = None

    def total_power_w(self, t: int | None = None) -> float:
        if t is None:
            return float(self.power_w.sum())
        return float(self.power_w[:, :, t].sum())


@dataclass(frozen=True)
class LinearSystem:
    """Assembled balance equations over the interval's active pairs.

    Row k demands: hhat[k] * p[k] - scale * gamma[k] * (omega @ p)[k]
    = scale * gamma[k] * noise_w, with hhat the serving gain per reserved
    block and omega the composite interference coefficients.
    """

    a: np.ndarray  # (K, K)
    c: np.ndarray  # (K,)
    pairs: np.ndarray  # (K, 2) of (grid, slice)
    hhat: np.ndarray  # (K,)
    gamma: np.ndarray  # (K,) linear SINR targets
    omega: np.ndarray  # (K, K)
    noise_w: float
    scale: float

    @property
    def size(self) -> int:
        return len(self.c)


def assemble_system(
    coverage: CoverageMap,
    dtd: DtdInstance,
    gains: GainTable,
    slice_spec: SliceSpec,
    radio: RadioConfig,
    t: int,
    *,
    indicator: np.ndarray | None = None,
) -> LinearSystem:
    """Build the interval-t system over pairs with nonzero traffic.

    `indicator` lets callers reuse the (I, N, I, N) interference indicator
    across the intervals of one window.
    """
    w = dtd.loads_bits[:, :, t]
    pairs = np.argwhere(w > 0)
    K = len(pairs)
    gamma_lin = slice_spec.sinr_min_linear
    scale = slice_spec.sinr_scale
    noise = radio.noise_rb_w
    if K == 0:
        empty = np.zeros((0, 0))
        return LinearSystem(
            a=empty,
            c=np.zeros(0),
            pairs=pairs,
            hhat=np.zeros(0),
            gamma=np.zeros(0),
            omega=empty,
            noise_w=noise,
            scale=scale,
        )
    gi, gn = pairs[:, 0], pairs[:, 1]
    eta = np.asarray(slice_spec.rb_per_bit)
    serving_bs = coverage.assoc[gi, gn]
    hhat = gains.gain[serving_bs, gi] / (w[gi, gn] * eta[gn])
    gamma = gamma_lin[gn]
    if indicator is None:
        indicator = indicator_matrix(coverage)
    b_sub = indicator[gi[:, None], gn[:, None], gi[None, :], gn[None, :]].astype(float)
    th = theta_factors(dtd, slice_spec, radio, t)[gi, gn]  # per interferer column
    cross_gain = gains.gain[serving_bs[None, :], gi[:, None]]  # (victim k, interferer k')
    omega = b_sub * th[None, :] * cross_gain
    a = np.diag(hhat) - scale * gamma[:, None] * omega
    c = scale * gamma * noise
    return LinearSystem(
        a=a, c=c, pairs=pairs, hhat=hhat, gamma=gamma, omega=omega, noise_w=noise, scale=scale
    )


@dataclass(frozen=True)
class IntervalSolve:
    """Outcome of one interval's power computation."""

    powers: np.ndarray | None  # per active pair, in system row order
    status: str  # "ok" or an infeasibility reason


def _normalized(system: LinearSystem) -> tuple[np.ndarray, np.ndarray]:
    """Row-equilibrated form (I - B) p = c'; diag(omega) is always zero."""
    B = system.scale * system.gamma[:, None] * system.omega / system.hhat[:, None]
    c = system.c / system.hhat
    return B, c


def solve_power_interval(system: LinearSystem) -> IntervalSolve:
    """Direct solve of the balance equations.

    Declares the system singular when the (row-equilibrated) condition number
    exceeds COND_LIMIT, and infeasible when any component is nonpositive.
    """
    if system.size == 0:
        return IntervalSolve(powers=np.zeros(0), status="ok")
    B, c = _normalized(system)
    a = np.eye(system.size) - B
    if np.linalg.cond(a) > COND_LIMIT:
        return IntervalSolve(powers=None, status=SINGULAR_SYSTEM)
    p = np.linalg.solve(a, c)
    if np.any(p <= 0):
        return IntervalSolve(powers=None, status=NONPOSITIVE_POWER)
    return IntervalSolve(powers=p, status="ok")


def fixed_point_oracle(
    system: LinearSystem,
    tol: float = FIXED_POINT_TOL,
    max_iter: int = FIXED_POINT_MAX_ITER,
) -> tuple[np.ndarray | None, bool, int]:
    """Iterate the SINR-equality balance directly; verification path only.

    Starts from the zero-interference powers and repeats
    p <- B p + c'. Returns (powers, converged, iterations); the iteration
    grows without bound exactly when the targets are infeasible.
    """
    if system.size == 0:
        return np.zeros(0), True, 0
    B, c = _normalized(system)
    p = c.copy()
    for it in range(1, max_iter + 1):
        p_next = B @ p + c
        rel = np.max(np.abs(p_next - p) / p)
        p = p_next
        if rel < tol:
            return p, True, it
        if np.max(p) > _DIVERGENCE_CAP:
            return None, False, it
    return None, False, max_iter


def validate_power(plan: PowerPlan, coverage: CoverageMap, layout: NetworkLayout, t: int) -> bool:
    """True iff every BS's summed reservation in interval t fits its budget."""
    for m in range(layout.num_sbs + 1):
        total = sum(
            plan.power_w[coverage.sc_sets[m][n], n, t].sum() for n in range(coverage.num_slices)
        )
        if total > layout.bs_site(m).max_power_w:
            return False
    return True


def sinr_map(
    plan: PowerPlan,
    coverage: CoverageMap,
    dtd: DtdInstance,
    gains: GainTable,
    slice_spec: SliceSpec,
    radio: RadioConfig,
    t: int,
) -> np.ndarray:
    """Achieved SINR of every active pair in interval t; NaN where idle."""
    system = assemble_system(coverage, dtd, gains, slice_spec, radio, t)
    out = np.full(dtd.loads_bits.shape[:2], np.nan)
    if system.size == 0:
        return out
    gi, gn = system.pairs[:, 0], system.pairs[:, 1]
    p = plan.power_w[gi, gn, t]
    interference = system.omega @ p
    out[gi, gn] = system.hhat * p / (system.noise_w + interference)
    return out


def sinr(
    plan: PowerPlan,
    coverage: CoverageMap,
    dtd: DtdInstance,
    gains: GainTable,
    slice_spec: SliceSpec,
    radio: RadioConfig,
    i: int,
    n: int,
    t: int,
) -> float:
    """Achieved SINR of one active (grid, slice) pair in interval t."""
    if dtd.loads_bits[i, n, t] <= 0:
        raise ValueError(f"pair (grid {i}, slice {n}) carries no traffic in interval {t}")
    return float(sinr_map(plan, coverage, dtd, gains, slice_spec, radio, t)[i, n])


def _scatter(shape, pairs, values, t, into):
    into[pairs[:, 0], pairs[:, 1], t] = values


def plan_window(
    layout: NetworkLayout,
    coverage: CoverageMap,
    dtd: DtdInstance,
    gains: GainTable,
    slice_spec: SliceSpec,
    radio: RadioConfig,
    *,
    solver: str = "grid",
    check_rb: bool = True,
) -> PowerPlan:
    """Solve every interval of the window and apply the feasibility checks.

    Intervals are independent given the coverage decision, so they are solved
    one by one: block budgets first (when `check_rb`), then the per-interval
    power solve ("grid" = per-grid closed form, "cell" = uniform-per-cell
    benchmark), then the per-BS power budgets.
    """
    if solver not in ("grid", "cell"):
        raise ValueError(f"unknown power solver {solver!r}")
    I, N, T = dtd.loads_bits.shape
    zeros = np.zeros((I, N, T))
    if check_rb:
        budget = check_rb_budgets(coverage, dtd, slice_spec, radio.rb_budget)
        if not budget.all_ok:
            return PowerPlan(power_w=zeros, feasible=False, infeasibility_reason=RB_BUDGET_VIOLATION)
    indicator = indicator_matrix(coverage)
    power = zeros.copy()
    for t in range(T):
        system = assemble_system(
            coverage, dtd, gains, slice_spec, radio, t, indicator=indicator
        )
        if solver == "grid":
            solved = solve_power_interval(system)
        else:
            solved = _cell_interval(system, coverage)
        if solved.status != "ok":
            return PowerPlan(power_w=zeros, feasible=False, infeasibility_reason=solved.status)
        _scatter((I, N), system.pairs, solved.powers, t, power)
    plan = PowerPlan(power_w=power, feasible=True, infeasibility_reason=None)
    for t in range(T):
        if not validate_power(plan, coverage, layout, t):
            return PowerPlan(power_w=zeros, feasible=False, infeasibility_reason=BUDGET_VIOLATION)
    return plan


def _cell_interval(
    system: LinearSystem,
    coverage: CoverageMap,
    tol: float = 1e-10,
    max_iter: int = FIXED_POINT_MAX_ITER,
) -> IntervalSolve:
    """Uniform-per-cell benchmark solve for one interval.

    All active grids of one (BS, slice) share a single power value, pinned
    each sweep by the worst grid of the group. The sweep map is monotone and
    starts below any feasible point, so divergence means no uniform plan can
    satisfy the targets within finite power; that is reported as a budget
    violation.
    """
    if system.size == 0:
        return IntervalSolve(powers=np.zeros(0), status="ok")
    B, c = _normalized(system)
    gi, gn = system.pairs[:, 0], system.pairs[:, 1]
    serving = coverage.assoc[gi, gn]
    groups: dict[tuple[int, int], np.ndarray] = {}
    for key in sorted({(int(m), int(n)) for m, n in zip(serving, gn)}):
        groups[key] = np.flatnonzero((serving == key[0]) & (gn == key[1]))
    p = np.zeros(system.size)
    for rows in groups.values():
        p[rows] = c[rows].max()
    for _ in range(max_iter):
        req = B @ p + c  # per-pair minimum to hit its target
        p_next = np.empty_like(p)
        for rows in groups.values():
            p_next[rows] = req[rows].max()
        rel = np.max(np.abs(p_next - p) / np.maximum(p, 1e-300))
        p = p_next
        if rel < tol:
            return IntervalSolve(powers=p, status="ok")
        if np.max(p) > _DIVERGENCE_CAP:
            break
    return IntervalSolve(powers=None, status=BUDGET_VIOLATION)


def cell_based_power(
    layout: NetworkLayout,
    coverage: CoverageMap,
    dtd: DtdInstance,
    gains: GainTable,
    slice_spec: SliceSpec,
    radio: RadioConfig,
    *,
    check_rb: bool = True,
) -> PowerPlan:
    """Benchmark plan with one shared power value per (BS, slice) group."""
    return plan_window(
        layout, coverage, dtd, gains, slice_spec, radio, solver="cell", check_rb=check_rb
    )

"""Coverage-decision search: seeded per-SBS local improvement, an exhaustive
oracle for tiny instances, and the common-radius (cell-zooming) restriction.

The local search scans one small BS at a time over its legal moves, accepts
only strict objective improvements, and restarts the scan queue after every
acceptance; it stops when a full pass over all BSs yields no improvement, so
the returned decision is locally optimal under single-BS moves.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass

import numpy as np

from .channel import GainTable, RadioConfig, build_gain_table
from .geometry import NetworkLayout, validate_non_overlap
from .metrics import ee_report
from .power import PowerPlan, plan_window
from .slicing import (
    ScmDecision,
    SliceSpec,
    build_coverage,
    candidate_tuples,
    default_scm,
    enumerate_candidates,
)
from .traffic import DtdInstance

EXHAUSTIVE_CAP = 100_000


class SearchSpaceTooLarge(ValueError):
    """Raised when the joint configuration count exceeds the oracle cap."""


@dataclass(frozen=True)
class SearchResult:
    """Best decision found, its power plan, and the improvement trace."""

    scm: ScmDecision
    plan: PowerPlan
    objective: float
    trace: tuple[tuple[int, float], ...]
    evaluations: int


def evaluate_scm(
    layout: NetworkLayout,
    dtd: DtdInstance,
    slice_spec: SliceSpec,
    radio: RadioConfig,
    gains: GainTable,
    scm: ScmDecision,
    *,
    power_solver: str = "grid",
) -> tuple[PowerPlan, float]:
    """Plan one window for a fixed decision; -inf objective when infeasible."""
    coverage = build_coverage(layout, scm, slice_spec)
    plan = plan_window(layout, coverage, dtd, gains, slice_spec, radio, solver=power_solver)
    if not plan.feasible:
        return plan, -math.inf
    report = ee_report(dtd, plan, coverage, slice_spec, dtd.interval_duration_s)
    return plan, report.objective


def loscs(
    layout: NetworkLayout,
    dtd: DtdInstance,
    slice_spec: SliceSpec,
    radio: RadioConfig,
    init: ScmDecision | None = None,
    seed: int = 0,
    *,
    gains: GainTable | None = None,
    power_solver: str = "grid",
    cz: bool = False,
) -> SearchResult:
    """Seeded local search over per-SBS coverage moves.

    An infeasible starting decision is kept with a -inf objective so the
    first feasible candidate is accepted immediately. The order in which BSs
    are visited is drawn from the seed; candidate order is deterministic, so
    identical inputs and seed reproduce the result exactly.
    """
    if gains is None:
        gains = build_gain_table(layout)
    scm = init if init is not None else default_scm(layout, slice_spec.num_slices)
    if not validate_non_overlap(layout, scm.l_full):
        raise ValueError("initial decision violates the non-overlap constraint")
    rng = np.random.default_rng(seed)
    plan, best = evaluate_scm(layout, dtd, slice_spec, radio, gains, scm, power_solver=power_solver)
    evaluations = 1
    trace = [(0, best)]
    pending = list(range(layout.num_sbs))
    iteration = 0
    if pending:
        current = pending[rng.integers(len(pending))]
    while pending:
        iteration += 1
        for cand in enumerate_candidates(layout, scm, current, cz=cz):
            trial = scm.replace_sbs(current, *cand)
            trial_plan, trial_obj = evaluate_scm(
                layout, dtd, slice_spec, radio, gains, trial, power_solver=power_solver
            )
            evaluations += 1
            if trial_obj > best:
                scm, plan, best = trial, trial_plan, trial_obj
                pending = list(range(layout.num_sbs))
        trace.append((iteration, best))
        pending.remove(current)
        if pending:
            current = pending[rng.integers(len(pending))]
    return SearchResult(
        scm=scm, plan=plan, objective=best, trace=tuple(trace), evaluations=evaluations
    )


def cz_search(
    layout: NetworkLayout,
    dtd: DtdInstance,
    slice_spec: SliceSpec,
    radio: RadioConfig,
    init: ScmDecision | None = None,
    seed: int = 0,
    *,
    gains: GainTable | None = None,
    power_solver: str = "grid",
) -> SearchResult:
    """Local search restricted to one coverage radius shared by all slices."""
    return loscs(
        layout,
        dtd,
        slice_spec,
        radio,
        init=init,
        seed=seed,
        gains=gains,
        power_solver=power_solver,
        cz=True,
    )


def exhaustive_search(
    layout: NetworkLayout,
    dtd: DtdInstance,
    slice_spec: SliceSpec,
    radio: RadioConfig,
    *,
    gains: GainTable | None = None,
    power_solver: str = "grid",
    cz: bool = False,
    cap: int = EXHAUSTIVE_CAP,
) -> SearchResult:
    """Evaluate every joint decision; the global optimum on tiny instances.

    The product of per-BS candidate counts must stay within `cap`. Ties keep
    the first maximizer in enumeration order.
    """
    if gains is None:
        gains = build_gain_table(layout)
    M = layout.num_sbs
    N = slice_spec.num_slices
    per_sbs = candidate_tuples(layout.max_sc_layers, N, cz=cz)
    total = len(per_sbs) ** M if M else 1
    if total > cap:
        raise SearchSpaceTooLarge(f"{total} joint configurations exceed the cap of {cap}")

    best_scm = default_scm(layout, N)
    best_plan, best = None, -math.inf
    evaluations = 0
    trace: list[tuple[int, float]] = []

    def joint(combo):
        return ScmDecision(
            l_full=tuple(c[0] for c in combo),
            l_reduced=tuple(c[1] for c in combo),
            zoom=tuple(c[2] for c in combo),
        )

    for combo in itertools.product(per_sbs, repeat=M):
        scm = joint(combo) if M else best_scm
        if M and not validate_non_overlap(layout, scm.l_full):
            continue
        plan, obj = evaluate_scm(
            layout, dtd, slice_spec, radio, gains, scm, power_solver=power_solver
        )
        evaluations += 1
        if obj > best:
            best_scm, best_plan, best = scm, plan, obj
            trace.append((evaluations, best))
    if best_plan is None:
        # nothing feasible (or M = 0 loop never ran): report the default decision
        best_plan, best = evaluate_scm(
            layout, dtd, slice_spec, radio, gains, best_scm, power_solver=power_solver
        )
        evaluations += 1
        trace.append((evaluations, best))
    return SearchResult(
        scm=best_scm,
        plan=best_plan,
        objective=best,
        trace=tuple(trace),
        evaluations=evaluations,
    )

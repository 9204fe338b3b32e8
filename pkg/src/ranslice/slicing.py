"""Coverage decisions per small BS and slice, derived coverage sets, and
spectrum-budget / interference-indicator logic.

BS indexing convention used across the package: BS index m = 0 is the macro
BS and m = 1..M are the small BSs. Arrays that only concern small BSs (full
and reduced radii, zoom flags, ring sets) are indexed by the SBS position
s = m - 1.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import NamedTuple, Sequence

import numpy as np

from .geometry import NetworkLayout, bs_grid_layers, hex_distance, validate_non_overlap
from .traffic import DtdInstance


class InvalidDecisionError(ValueError):
    """Raised when a coverage decision violates the non-overlap constraint."""


@dataclass(frozen=True)
class SliceSpec:
    """Per-slice service parameters.

    sinr_min_db: minimum SINR target per slice (dB).
    rb_per_bit: average resource blocks needed per bit of traffic.
    ee_weight: weight of the slice in the network objective.
    sinr_scale: global scaling applied to every linear SINR target.
    """

    num_slices: int
    sinr_min_db: tuple[float, ...]
    rb_per_bit: tuple[float, ...]
    ee_weight: tuple[float, ...]
    sinr_scale: float = 1.0

    def __post_init__(self):
        n = self.num_slices
        if n < 1:
            raise ValueError("need at least one slice")
        for name in ("sinr_min_db", "rb_per_bit", "ee_weight"):
            vals = tuple(float(v) for v in getattr(self, name))
            if len(vals) != n:
                raise ValueError(f"{name} must have {n} entries, got {len(vals)}")
            object.__setattr__(self, name, vals)
        if any(v <= 0 for v in self.rb_per_bit):
            raise ValueError("rb_per_bit entries must be positive")
        if any(v <= 0 for v in self.ee_weight):
            raise ValueError("ee_weight entries must be positive")
        if self.sinr_scale <= 0:
            raise ValueError("sinr_scale must be positive")

    @property
    def sinr_min_linear(self) -> np.ndarray:
        return 10.0 ** (np.asarray(self.sinr_min_db) / 10.0)


@dataclass(frozen=True)
class ScmDecision:
    """Coverage decision for one planning window.

    Per small BS: a full-size radius, a reduced-size radius (both in hex
    layers), and a binary zoom flag per slice selecting which of the two
    applies to that slice.
    """

    l_full: tuple[int, ...]
    l_reduced: tuple[int, ...]
    zoom: tuple[tuple[int, ...], ...]

    def __post_init__(self):
        lf = tuple(int(v) for v in self.l_full)
        lr = tuple(int(v) for v in self.l_reduced)
        zm = tuple(tuple(int(v) for v in row) for row in self.zoom)
        if not (len(lf) == len(lr) == len(zm)):
            raise ValueError("per-SBS fields must have equal length")
        for s, (f, r) in enumerate(zip(lf, lr)):
            if r < 1 or f < r:
                raise ValueError(f"SBS {s}: need 1 <= reduced ({r}) <= full ({f})")
        widths = {len(row) for row in zm}
        if len(widths) > 1:
            raise ValueError("zoom rows must all have the same slice count")
        for row in zm:
            if any(v not in (0, 1) for v in row):
                raise ValueError("zoom entries must be 0 or 1")
        object.__setattr__(self, "l_full", lf)
        object.__setattr__(self, "l_reduced", lr)
        object.__setattr__(self, "zoom", zm)

    @property
    def num_sbs(self) -> int:
        return len(self.l_full)

    def replace_sbs(self, sbs: int, l_full: int, l_reduced: int, zoom_row: Sequence[int]) -> "ScmDecision":
        lf = list(self.l_full)
        lr = list(self.l_reduced)
        zm = list(self.zoom)
        lf[sbs], lr[sbs], zm[sbs] = l_full, l_reduced, tuple(zoom_row)
        return ScmDecision(tuple(lf), tuple(lr), tuple(zm))


def default_scm(layout: NetworkLayout, num_slices: int) -> ScmDecision:
    """Minimal legal decision: every small BS covers one layer for all slices."""
    M = layout.num_sbs
    return ScmDecision(
        l_full=tuple([1] * M),
        l_reduced=tuple([1] * M),
        zoom=tuple([tuple([1] * num_slices)] * M),
    )


def random_scm(layout: NetworkLayout, num_slices: int, seed: int) -> ScmDecision:
    """Seeded random decision satisfying all structural constraints.

    Radii are drawn smallest-first per SBS so the non-overlap filter always
    leaves at least the single-layer fallback.
    """
    rng = np.random.default_rng(seed)
    M = layout.num_sbs
    lf, lr, zm = [], [], []
    for s in range(M):
        feasible = []
        for f in range(1, layout.max_sc_layers + 1):
            trial = list(lf) + [f] + [1] * (M - s - 1)
            if validate_non_overlap(layout, trial):
                feasible.append(f)
        f = int(rng.choice(feasible)) if feasible else 1
        r = int(rng.integers(1, f + 1))
        lf.append(f)
        lr.append(r)
        zm.append(tuple(int(v) for v in rng.integers(0, 2, size=num_slices)))
    return ScmDecision(tuple(lf), tuple(lr), tuple(zm))


def sc_radius(scm: ScmDecision, sbs: int, n: int) -> int:
    """Effective coverage radius of SBS `sbs` (position index) for slice n."""
    return scm.l_full[sbs] if scm.zoom[sbs][n] == 1 else scm.l_reduced[sbs]


@dataclass(frozen=True)
class CoverageMap:
    """Derived coverage sets for one decision.

    sc_sets[m][n]: sorted grid indices served by BS m for slice n (m = 0 is
    the macro BS). ring_sets[s]: grids strictly between the reduced and full
    radius of SBS s. assoc[i, n]: serving BS index for each (grid, slice).
    ring_owner[i]: SBS position whose ring contains grid i, else -1.
    """

    sc_sets: tuple[tuple[np.ndarray, ...], ...]
    ring_sets: tuple[np.ndarray, ...]
    assoc: np.ndarray
    ring_owner: np.ndarray
    zoom: tuple[tuple[int, ...], ...]

    @property
    def num_slices(self) -> int:
        return self.assoc.shape[1]

    @property
    def num_bs(self) -> int:
        return len(self.sc_sets)


def build_coverage(layout: NetworkLayout, scm: ScmDecision, slice_spec: SliceSpec) -> CoverageMap:
    """Materialise coverage sets; raises if full-size discs overlap.

    For every slice the sets over BSs partition the grids: each grid belongs
    to the unique small BS whose effective radius reaches it, or to the macro
    BS otherwise.
    """
    M = layout.num_sbs
    N = slice_spec.num_slices
    I = layout.num_grids
    if scm.num_sbs != M:
        raise ValueError(f"decision covers {scm.num_sbs} SBSs, layout has {M}")
    if scm.zoom and len(scm.zoom[0]) != N:
        raise ValueError(f"decision has {len(scm.zoom[0])} slices, spec has {N}")
    if any(f > layout.max_sc_layers for f in scm.l_full):
        raise InvalidDecisionError("full-size radius exceeds the physical coverage limit")
    if not validate_non_overlap(layout, scm.l_full):
        raise InvalidDecisionError("full-size coverage discs of the small BSs overlap")

    layers = np.asarray(bs_grid_layers(layout))  # (M+1, I)
    assoc = np.zeros((I, N), dtype=int)
    ring_owner = np.full(I, -1, dtype=int)
    for s in range(M):
        m = s + 1
        for n in range(N):
            members = layers[m] <= sc_radius(scm, s, n)
            assoc[members, n] = m
        if scm.l_full[s] > scm.l_reduced[s]:
            in_ring = (layers[m] > scm.l_reduced[s]) & (layers[m] <= scm.l_full[s])
            ring_owner[in_ring] = s
    sc_sets = tuple(
        tuple(np.flatnonzero(assoc[:, n] == m) for n in range(N)) for m in range(M + 1)
    )
    ring_sets = tuple(np.flatnonzero(ring_owner == s) for s in range(M))
    return CoverageMap(
        sc_sets=sc_sets,
        ring_sets=ring_sets,
        assoc=assoc,
        ring_owner=ring_owner,
        zoom=scm.zoom,
    )


class RbBudgetCheck(NamedTuple):
    """Outcome of the three reservation-budget constraints."""

    sbs_ok: np.ndarray  # per small BS: own coverage fits the budget
    mbs_ok: bool  # macro coverage fits the budget
    ring_ok: np.ndarray  # per small BS: ring demand leaves room for orthogonal reservation

    @property
    def all_ok(self) -> bool:
        return bool(self.sbs_ok.all() and self.mbs_ok and self.ring_ok.all())


def check_rb_budgets(
    coverage: CoverageMap,
    dtd: DtdInstance,
    slice_spec: SliceSpec,
    rb_budget: float,
) -> RbBudgetCheck:
    """Evaluate the per-BS and per-ring resource-block budgets.

    Demands are whole-window block counts: traffic bits times blocks-per-bit,
    summed over intervals and the relevant grid set.
    """
    eta = np.asarray(slice_spec.rb_per_bit)
    # (I, N) whole-window RB demand per grid and slice
    demand = dtd.loads_bits.sum(axis=2) * eta[None, :]
    M = len(coverage.ring_sets)
    N = coverage.num_slices
    sbs_ok = np.zeros(M, dtype=bool)
    ring_ok = np.zeros(M, dtype=bool)
    for s in range(M):
        own = sum(demand[coverage.sc_sets[s + 1][n], n].sum() for n in range(N))
        sbs_ok[s] = own <= rb_budget
        ring_ok[s] = demand[coverage.ring_sets[s], :].sum() <= rb_budget
    mbs = sum(demand[coverage.sc_sets[0][n], n].sum() for n in range(N))
    return RbBudgetCheck(sbs_ok=sbs_ok, mbs_ok=bool(mbs <= rb_budget), ring_ok=ring_ok)


def interference_indicator(
    coverage: CoverageMap,
    scm: ScmDecision,
    i: int,
    n: int,
    i2: int,
    n2: int,
) -> int:
    """1 if the transmission to (grid i2, slice n2) interferes with the one
    to (grid i, slice n); 0 in the orthogonal cases.

    Zero cases: both served by the same BS; or the pair couples a small BS's
    coverage with the macro transmissions inside that BS's ring, where the
    two sides reserve disjoint blocks.
    """
    if coverage.assoc[i, n] == coverage.assoc[i2, n2]:
        return 0
    owner2 = coverage.ring_owner[i2]
    if (
        owner2 >= 0
        and coverage.assoc[i, n] == owner2 + 1
        and scm.zoom[owner2][n] == 1
        and scm.zoom[owner2][n2] == 0
    ):
        return 0
    owner1 = coverage.ring_owner[i]
    if (
        owner1 >= 0
        and scm.zoom[owner1][n] == 0
        and coverage.assoc[i2, n2] == owner1 + 1
        and scm.zoom[owner1][n2] == 1
    ):
        return 0
    return 1


def indicator_matrix(coverage: CoverageMap) -> np.ndarray:
    """Dense (I, N, I, N) interference indicator; constant within a window."""
    assoc = coverage.assoc
    I, N = assoc.shape
    b = (assoc[:, :, None, None] != assoc[None, None, :, :]).astype(np.uint8)
    for s in range(len(coverage.ring_sets)):
        m = s + 1
        zoom = coverage.zoom[s]
        ring = coverage.ring_owner == s
        for n in range(N):
            for n2 in range(N):
                if zoom[n] == 1 and zoom[n2] == 0:
                    victims = assoc[:, n] == m
                    b[np.ix_(victims, [n], ring, [n2])] = 0
                if zoom[n] == 0 and zoom[n2] == 1:
                    sources = assoc[:, n2] == m
                    b[np.ix_(ring, [n], sources, [n2])] = 0
    return b


def candidate_tuples(
    max_layers: int,
    num_slices: int,
    *,
    dedupe: bool = True,
    cz: bool = False,
) -> list[tuple[int, int, tuple[int, ...]]]:
    """Every structurally valid (full, reduced, zoom-row) tuple for one SBS.

    Radius pairs run over 1 <= reduced <= full <= max_layers, zoom rows over
    every binary vector. When the two radii coincide the zoom row is
    irrelevant; `dedupe` collapses those to a single all-ones row. `cz`
    restricts to one common radius for all slices (no per-slice zooming).
    """
    ones = tuple([1] * num_slices)
    out: list[tuple[int, int, tuple[int, ...]]] = []
    for l_f in range(1, max_layers + 1):
        if cz:
            out.append((l_f, l_f, ones))
            continue
        for l_r in range(1, l_f + 1):
            if l_r == l_f and dedupe:
                out.append((l_f, l_r, ones))
                continue
            for row in itertools.product((0, 1), repeat=num_slices):
                out.append((l_f, l_r, row))
    return out


def enumerate_candidates(
    layout: NetworkLayout,
    scm: ScmDecision,
    sbs: int,
    *,
    dedupe: bool = True,
    cz: bool = False,
) -> list[tuple[int, int, tuple[int, ...]]]:
    """Legal (full, reduced, zoom-row) moves for one small BS.

    Tuples from :func:`candidate_tuples` are kept only if the candidate's
    full-size disc stays disjoint from the other BSs' current full-size
    discs.
    """
    M = layout.num_sbs
    if not (0 <= sbs < M):
        raise ValueError(f"SBS position {sbs} out of range for {M} SBSs")
    N = len(scm.zoom[sbs])
    own = layout.sbs[sbs].coord
    others = [
        (hex_distance(own, layout.sbs[o].coord), scm.l_full[o]) for o in range(M) if o != sbs
    ]
    return [
        cand
        for cand in candidate_tuples(layout.max_sc_layers, N, dedupe=dedupe, cz=cz)
        if all(dist >= cand[0] + lf_other for dist, lf_other in others)
    ]

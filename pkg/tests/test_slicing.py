import numpy as np
import pytest

from ranslice.geometry import HexCoord, hex_distance
from ranslice.slicing import (
    InvalidDecisionError,
    ScmDecision,
    SliceSpec,
    build_coverage,
    check_rb_budgets,
    default_scm,
    enumerate_candidates,
    indicator_matrix,
    interference_indicator,
    random_scm,
    sc_radius,
)

from conftest import make_dtd, make_layout, manual_dtd


def test_sc_radius_zoom_cases():
    scm = ScmDecision((3,), (1,), ((1, 0),))
    assert sc_radius(scm, 0, 0) == 3  # full-size selected
    assert sc_radius(scm, 0, 1) == 1  # reduced-size selected
    flat = ScmDecision((2,), (2,), ((0, 1),))
    assert sc_radius(flat, 0, 0) == 2 == sc_radius(flat, 0, 1)


def test_decision_invariants():
    with pytest.raises(ValueError):
        ScmDecision((1,), (2,), ((1,),))  # reduced above full
    with pytest.raises(ValueError):
        ScmDecision((2,), (0,), ((1,),))  # radius below one
    with pytest.raises(ValueError):
        ScmDecision((2,), (1,), ((2,),))  # non-binary zoom
    with pytest.raises(ValueError):
        ScmDecision((2, 2), (1,), ((1,),))  # ragged per-SBS fields


def test_coverage_mbs_only(spec2):
    lay = make_layout(extent=2, sbs_coords=())
    cov = build_coverage(lay, default_scm(lay, 2), spec2)
    for n in range(2):
        assert len(cov.sc_sets[0][n]) == lay.num_grids
    assert np.all(cov.assoc == 0)


def test_coverage_counts_and_partition(spec2):
    # extent comfortably contains the whole coverage disc of the SBS
    lay = make_layout(extent=5, sbs_coords=((3, -1),))
    scm = ScmDecision((2,), (1,), ((1, 0),))
    cov = build_coverage(lay, scm, spec2)
    # slice 0 full-size: 3k(k+1)+1 grids at radius 2; slice 1 reduced: 7
    assert len(cov.sc_sets[1][0]) == 19
    assert len(cov.sc_sets[1][1]) == 7
    assert len(cov.ring_sets[0]) == 12  # second ring around the SBS
    for n in range(2):
        union = np.concatenate([cov.sc_sets[m][n] for m in range(2)])
        assert sorted(union) == list(range(lay.num_grids))


def test_coverage_partition_under_random_decisions(spec2):
    lay = make_layout(extent=4, sbs_coords=((4, -2), (-4, 2)), max_layers=3)
    for seed in range(25):
        scm = random_scm(lay, 2, seed)
        cov = build_coverage(lay, scm, spec2)
        for n in range(2):
            union = np.concatenate([cov.sc_sets[m][n] for m in range(3)])
            assert sorted(union) == list(range(lay.num_grids))
            # membership agrees with the association map
            for m in range(3):
                assert np.all(cov.assoc[cov.sc_sets[m][n], n] == m)


def test_coverage_rejects_overlap(spec2):
    lay = make_layout(extent=3, sbs_coords=((3, -1), (0, 2)), max_layers=2)
    with pytest.raises(InvalidDecisionError):
        build_coverage(lay, ScmDecision((2, 2), (1, 1), ((1, 1), (1, 1))), spec2)
    with pytest.raises(InvalidDecisionError):
        build_coverage(
            make_layout(extent=3, sbs_coords=((3, -1),), max_layers=2),
            ScmDecision((3,), (1,), ((1, 1),)),  # beyond the physical limit
            spec2,
        )


def test_rb_budget_boundaries():
    lay = make_layout(extent=1, sbs_coords=((1, 0),), max_layers=1)
    spec = SliceSpec(num_slices=1, sinr_min_db=(7.0,), rb_per_bit=(2.0,), ee_weight=(1.0,))
    scm = default_scm(lay, 1)
    cov = build_coverage(lay, scm, spec)
    # exactly one loaded grid inside the SBS coverage: demand = w * eta = 20
    loads = np.zeros((lay.num_grids, 1, 1))
    loads[lay.bs_grid(1), 0, 0] = 10.0
    dtd = manual_dtd(loads)
    at_boundary = check_rb_budgets(cov, dtd, spec, rb_budget=20.0)
    assert bool(at_boundary.sbs_ok[0]) and at_boundary.mbs_ok and bool(at_boundary.ring_ok[0])
    below = check_rb_budgets(cov, dtd, spec, rb_budget=19.0)
    assert not below.sbs_ok[0] and below.mbs_ok  # macro covers no demand here
    # no ring when both radii agree: vacuously fine even with zero budget left
    assert bool(below.ring_ok[0])


def test_rb_budget_mbs_and_ring():
    lay = make_layout(extent=3, sbs_coords=((3, -1),), max_layers=2)
    spec = SliceSpec(num_slices=1, sinr_min_db=(7.0,), rb_per_bit=(1.0,), ee_weight=(1.0,))
    scm = ScmDecision((2,), (1,), ((0,),))
    cov = build_coverage(lay, scm, spec)
    loads = np.ones((lay.num_grids, 1, 2))
    dtd = manual_dtd(loads)
    mbs_grids = len(cov.sc_sets[0][0])
    ring_grids = len(cov.ring_sets[0])
    res = check_rb_budgets(cov, dtd, spec, rb_budget=2.0 * mbs_grids)
    assert res.mbs_ok
    assert not check_rb_budgets(cov, dtd, spec, rb_budget=2.0 * mbs_grids - 1).mbs_ok
    assert bool(check_rb_budgets(cov, dtd, spec, rb_budget=2.0 * ring_grids).ring_ok[0])
    assert not check_rb_budgets(cov, dtd, spec, rb_budget=2.0 * ring_grids - 1).ring_ok[0]


def test_interference_indicator_cases(layout1, spec2):
    scm = ScmDecision((2,), (1,), ((1, 0),))
    cov = build_coverage(layout1, scm, spec2)
    sbs_grid = layout1.bs_grid(1)
    ring_grid = int(cov.ring_sets[0][0])
    mbs_far = layout1.grid_index(HexCoord(-3, 0))
    # same serving BS, any slices
    assert interference_indicator(cov, scm, sbs_grid, 0, ring_grid, 0) == 0
    # SBS coverage victim vs macro transmission into the ring (zoom 1 vs 0)
    assert cov.assoc[ring_grid, 1] == 0
    assert interference_indicator(cov, scm, sbs_grid, 0, ring_grid, 1) == 0
    # mirrored: ring grid served by the macro vs the SBS's full-size slice
    assert interference_indicator(cov, scm, ring_grid, 1, sbs_grid, 0) == 0
    # plain cross-BS interference
    assert interference_indicator(cov, scm, sbs_grid, 0, mbs_far, 0) == 1
    assert interference_indicator(cov, scm, mbs_far, 1, sbs_grid, 0) == 1


def test_indicator_matrix_matches_scalar(layout1, spec2):
    scm = ScmDecision((2,), (1,), ((0, 1),))
    cov = build_coverage(layout1, scm, spec2)
    b = indicator_matrix(cov)
    rng = np.random.default_rng(5)
    for _ in range(200):
        i, i2 = rng.integers(layout1.num_grids, size=2)
        n, n2 = rng.integers(2, size=2)
        assert b[i, n, i2, n2] == interference_indicator(cov, scm, i, n, i2, n2)
    # same-BS zeros are symmetric
    for _ in range(100):
        i, i2 = rng.integers(layout1.num_grids, size=2)
        n, n2 = rng.integers(2, size=2)
        same = cov.assoc[i, n] == cov.assoc[i2, n2]
        if same:
            assert b[i, n, i2, n2] == 0 and b[i2, n2, i, n] == 0


def test_candidate_counts(layout1):
    scm = default_scm(layout1, 1)
    # raw product: pairs * 2^N
    assert len(enumerate_candidates(layout1, scm, 0, dedupe=False)) == 3 * 2
    # equal radii collapse to one zoom row
    assert len(enumerate_candidates(layout1, scm, 0)) == 4
    scm2 = default_scm(layout1, 2)
    assert len(enumerate_candidates(layout1, scm2, 0, dedupe=False)) == 3 * 4
    assert len(enumerate_candidates(layout1, scm2, 0)) == 1 * 4 + 2
    assert enumerate_candidates(layout1, scm2, 0, cz=True) == [(1, 1, (1, 1)), (2, 2, (1, 1))]


def test_candidates_with_single_layer_limit():
    lay = make_layout(extent=2, sbs_coords=((2, -1),), max_layers=1)
    scm = default_scm(lay, 2)
    assert len(enumerate_candidates(lay, scm, 0, dedupe=False)) == 2**2
    assert enumerate_candidates(lay, scm, 0) == [(1, 1, (1, 1))]


def test_candidates_filtered_by_neighbor():
    lay = make_layout(extent=3, sbs_coords=((2, -1), (0, 1)), max_layers=2)
    assert hex_distance(HexCoord(2, -1), HexCoord(0, 1)) == 2
    scm = default_scm(lay, 1)  # neighbor at distance 2 with full radius 1
    cands = enumerate_candidates(lay, scm, 0)
    assert all(c[0] == 1 for c in cands)  # every full radius 2 removed


def test_candidates_contain_current_configuration(layout1):
    scm = ScmDecision((2,), (1,), ((1, 0),))
    assert (2, 1, (1, 0)) in enumerate_candidates(layout1, scm, 0)
    flat = ScmDecision((2,), (2,), ((1, 0),))
    cands = enumerate_candidates(layout1, flat, 0)
    assert (2, 2, (1, 1)) in cands  # coverage-equivalent canonical form
    assert (2, 2, (1, 0)) in enumerate_candidates(layout1, flat, 0, dedupe=False)


def test_random_scm_is_always_legal(spec2):
    lay = make_layout(extent=4, sbs_coords=((4, -2), (-4, 2), (0, 4)), max_layers=3)
    for seed in range(30):
        scm = random_scm(lay, 2, seed)
        build_coverage(lay, scm, spec2)  # raises if anything is off


def test_theta_relevant_loads_zero(layout1, spec2):
    # indicator zeros must kill the composite coefficient path: checked at
    # the channel/power level, here just the same-BS symmetry property
    scm = default_scm(layout1, 2)
    cov = build_coverage(layout1, scm, spec2)
    dtd = make_dtd(layout1, 2, seed=0)
    assert dtd.num_grids == layout1.num_grids

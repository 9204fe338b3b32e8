import math

import numpy as np
import pytest

from ranslice.geometry import (
    BsSite,
    HexCoord,
    NetworkLayout,
    build_layout,
    center_distance_km,
    disc_coords,
    euclid_distance_km,
    hex_center_xy,
    hex_distance,
    nearest_hex,
    ring_coords,
    validate_non_overlap,
)

from conftest import make_layout

ORIGIN = HexCoord(0, 0)


def brute_disc(center, layers):
    """Independent ring oracle: scan a coordinate box."""
    span = layers + 1
    return {
        HexCoord(center.q + dq, center.r + dr)
        for dq in range(-span, span + 1)
        for dr in range(-span, span + 1)
        if hex_distance(center, HexCoord(center.q + dq, center.r + dr)) <= layers
    }


def test_hex_distance_examples():
    assert hex_distance(ORIGIN, ORIGIN) == 0
    assert hex_distance(ORIGIN, HexCoord(2, -1)) == 2
    assert len(brute_disc(ORIGIN, 2)) == 19


def test_disc_and_ring_counts_match_brute_force():
    for k in range(5):
        ring = ring_coords(HexCoord(1, -2), k)
        assert len(ring) == (1 if k == 0 else 6 * k)
        assert all(hex_distance(HexCoord(1, -2), c) == k for c in ring)
        disc = disc_coords(HexCoord(1, -2), k)
        assert len(disc) == 3 * k * (k + 1) + 1
        assert set(disc) == brute_disc(HexCoord(1, -2), k)
        assert len(set(disc)) == len(disc)


def test_hex_distance_symmetry_and_triangle():
    rng = np.random.default_rng(0)
    for _ in range(300):
        a, b, c = (HexCoord(int(q), int(r)) for q, r in rng.integers(-8, 9, size=(3, 2)))
        assert hex_distance(a, b) == hex_distance(b, a)
        assert hex_distance(a, c) <= hex_distance(a, b) + hex_distance(b, c)
        assert (hex_distance(a, b) == 0) == (a == b)


def test_center_spacing_flat_top():
    # adjacent centers sit sqrt(3)/2 of the diameter apart
    spacing = 0.1 * math.sqrt(3) / 2
    for nb in ring_coords(ORIGIN, 1):
        assert center_distance_km(ORIGIN, nb, 0.1) == pytest.approx(spacing, rel=1e-12)
    # two layers along an axis: twice the spacing
    assert center_distance_km(ORIGIN, HexCoord(0, 2), 0.1) == pytest.approx(2 * spacing, rel=1e-12)


def test_euclid_distance_clamp(layout1):
    # the BS's own grid is clamped to half the grid diameter
    own = layout1.bs_grid(0)
    assert euclid_distance_km(layout1, 0, own) == pytest.approx(0.05)
    nb = layout1.grid_index(HexCoord(1, 0))
    assert euclid_distance_km(layout1, 0, nb) == pytest.approx(0.0866025403784, rel=1e-9)
    rng = np.random.default_rng(1)
    for _ in range(100):
        g = int(rng.integers(layout1.num_grids))
        m = int(rng.integers(layout1.num_sbs + 1))
        assert euclid_distance_km(layout1, m, g) >= layout1.grid_diameter_km / 2


def test_validate_non_overlap():
    single = make_layout(extent=3, sbs_coords=((3, -1),))
    assert validate_non_overlap(single, [2])

    two = make_layout(extent=4, sbs_coords=((4, -2), (-4, 2)), max_layers=4)
    sep = hex_distance(HexCoord(4, -2), HexCoord(-4, 2))
    assert sep == 8
    assert validate_non_overlap(two, [4, 4])  # boundary: 8 >= 4 + 4
    assert not validate_non_overlap(two, [4, 5] if sep == 8 else [5, 5])

    closer = make_layout(extent=3, sbs_coords=((3, -1), (0, 2)), max_layers=3)
    assert hex_distance(HexCoord(3, -1), HexCoord(0, 2)) == 3
    assert not validate_non_overlap(closer, [2, 2])
    assert validate_non_overlap(closer, [2, 1])


def test_bs_site_validation():
    with pytest.raises(ValueError):
        BsSite(ORIGIN, -1.0, 1500.0, 10.0)
    with pytest.raises(ValueError):
        BsSite(ORIGIN, 10.0, 100.0, 10.0)  # below the model's frequency range
    with pytest.raises(ValueError):
        BsSite(ORIGIN, 10.0, 2500.0, 10.0)
    with pytest.raises(ValueError):
        BsSite(ORIGIN, 10.0, 1500.0, 0.0)


def test_layout_invariants():
    mbs = BsSite(ORIGIN, 50.0, 1500.0, 40.0)
    good = disc_coords(ORIGIN, 2)
    with pytest.raises(ValueError):  # duplicate grid
        NetworkLayout(0.1, tuple(good) + (ORIGIN,), mbs, (), 1, 1.0)
    with pytest.raises(ValueError):  # SBS off the grid
        NetworkLayout(0.1, tuple(good), mbs,
                      (BsSite(HexCoord(5, 5), 15.0, 1500.0, 10.0),), 1, 1.0)
    with pytest.raises(ValueError):  # two BSs on one grid
        NetworkLayout(0.1, tuple(good), mbs,
                      (BsSite(ORIGIN, 15.0, 1500.0, 10.0),), 1, 1.0)
    with pytest.raises(ValueError):  # macro BS away from the origin
        NetworkLayout(0.1, tuple(good),
                      BsSite(HexCoord(1, 0), 50.0, 1500.0, 40.0), (), 1, 1.0)


def test_build_layout_km_extent():
    mbs = BsSite(ORIGIN, 50.0, 1500.0, 40.0)
    lay = build_layout(0.1, mbs, max_sc_layers=1, mbs_sc_radius_km=0.26)
    # spacing 0.0866: layers 1-3 sit at 0.0866, 0.1732, 0.2598 along axes
    dists = [center_distance_km(ORIGIN, c, 0.1) for c in lay.grid_coords]
    assert max(dists) <= 0.26 + 1e-9
    assert lay.num_grids > 19  # all of layers 0..2 plus part of layer 3


def test_nearest_hex_roundtrip():
    rng = np.random.default_rng(2)
    for _ in range(200):
        c = HexCoord(int(rng.integers(-6, 7)), int(rng.integers(-6, 7)))
        x, y = hex_center_xy(c, 0.15)
        assert nearest_hex(x, y, 0.15) == c

import numpy as np
import pytest

from ranslice.traffic import (
    DtdFormatError,
    DtdInstance,
    TrafficParams,
    draw_terminal_counts,
    generate_dtd,
    load_dtd,
    save_dtd,
)

from conftest import make_layout


def params(seed, rate=1.5, lo=1e5, hi=3e5):
    return TrafficParams(ppp_rate_per_grid=rate, mean_load_bits_low=lo,
                         mean_load_bits_high=hi, seed=seed)


def test_zero_rate_gives_empty_window():
    lay = make_layout(extent=1, sbs_coords=())
    dtd = generate_dtd(lay, 2, params(0, rate=0.0), 3, 60.0)
    assert dtd.loads_bits.shape == (7, 2, 3)
    assert np.all(dtd.loads_bits == 0)


def test_same_seed_reproduces_tensor():
    lay = make_layout(extent=2, sbs_coords=())
    a = generate_dtd(lay, 2, params(42), 3, 60.0)
    b = generate_dtd(lay, 2, params(42), 3, 60.0)
    assert np.array_equal(a.loads_bits, b.loads_bits)
    c = generate_dtd(lay, 2, params(43), 3, 60.0)
    assert not np.array_equal(a.loads_bits, c.loads_bits)


def test_window_mean_matches_law_of_large_numbers():
    # expected per-interval slice total: I * rate * mean(load)
    lay = make_layout(extent=1, sbs_coords=())
    rate, lo, hi = 2.0, 1e5, 3e5
    expect = lay.num_grids * rate * (lo + hi) / 2
    totals = [
        generate_dtd(lay, 1, params(seed, rate=rate, lo=lo, hi=hi), 1, 60.0).loads_bits.sum()
        for seed in range(1000)
    ]
    assert np.mean(totals) == pytest.approx(expect, rel=0.05)


def test_terminal_counts_are_poisson():
    lay = make_layout(extent=1, sbs_coords=())
    rate = 1.5
    counts = np.concatenate(
        [draw_terminal_counts(lay, 2, params(seed, rate=rate)).ravel() for seed in range(1000)]
    )
    assert counts.mean() == pytest.approx(rate, rel=0.03)
    assert counts.var() == pytest.approx(rate, rel=0.05)
    # and the helper really is the prefix of the generation stream
    dtd = generate_dtd(lay, 2, params(7, rate=rate), 2, 60.0)
    drawn = draw_terminal_counts(lay, 2, params(7, rate=rate))
    assert np.all((dtd.loads_bits.sum(axis=2) > 0) <= (drawn > 0))


def test_loads_are_finite_nonnegative_quantized():
    lay = make_layout(extent=2, sbs_coords=())
    dtd = generate_dtd(lay, 2, params(3), 3, 60.0)
    w = dtd.loads_bits
    assert np.all(np.isfinite(w)) and np.all(w >= 0)
    assert np.allclose(w % 1e4, 0.0)  # integer multiples of the load quantum


def test_save_load_roundtrip(tmp_path):
    lay = make_layout(extent=2, sbs_coords=())
    dtd = generate_dtd(lay, 2, params(11), 3, 60.0)
    path = tmp_path / "window.txt"
    save_dtd(dtd, path)
    back = load_dtd(path)
    assert np.array_equal(back.loads_bits, dtd.loads_bits)
    assert back.num_intervals == dtd.num_intervals
    assert back.interval_duration_s == dtd.interval_duration_s


def test_load_rejects_truncated_file(tmp_path):
    lay = make_layout(extent=1, sbs_coords=())
    dtd = generate_dtd(lay, 1, params(1), 2, 60.0)
    path = tmp_path / "window.txt"
    save_dtd(dtd, path)
    lines = path.read_text().splitlines()
    path.write_text("\n".join(lines[:-3]) + "\n")
    with pytest.raises(DtdFormatError):
        load_dtd(path)


def test_load_rejects_wrong_dimensions(tmp_path):
    lay = make_layout(extent=1, sbs_coords=())
    dtd = generate_dtd(lay, 1, params(1), 2, 60.0)
    path = tmp_path / "window.txt"
    save_dtd(dtd, path)
    with pytest.raises(DtdFormatError):
        load_dtd(path, expect_grids=dtd.num_grids + 5)
    with pytest.raises(DtdFormatError):
        load_dtd(path, expect_slices=2)


def test_load_rejects_garbage(tmp_path):
    path = tmp_path / "bad.txt"
    path.write_text("not a demand file\n")
    with pytest.raises(DtdFormatError):
        load_dtd(path)
    path.write_text("ranslice-dtd 1\n1 1 1 60.0\n0 0 zero 10.0\n")
    with pytest.raises(DtdFormatError):
        load_dtd(path)


def test_instance_validation():
    with pytest.raises(ValueError):
        DtdInstance(loads_bits=np.full((2, 1, 1), -1.0), num_intervals=1,
                    interval_duration_s=60.0)
    with pytest.raises(ValueError):
        DtdInstance(loads_bits=np.zeros((2, 1, 3)), num_intervals=2,
                    interval_duration_s=60.0)
    with pytest.raises(ValueError):
        TrafficParams(1.0, 2e5, 1e5, 0)  # low above high

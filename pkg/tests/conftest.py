import numpy as np
import pytest

from ranslice.channel import RadioConfig, build_gain_table
from ranslice.geometry import BsSite, HexCoord, build_layout
from ranslice.slicing import SliceSpec
from ranslice.traffic import DtdInstance, TrafficParams, generate_dtd

MBS_H, SBS_H, CARRIER = 50.0, 15.0, 1500.0


def make_layout(extent=3, sbs_coords=((3, -1),), diameter=0.1, max_layers=2,
                mbs_power=500.0, sbs_power=50.0):
    mbs = BsSite(HexCoord(0, 0), MBS_H, CARRIER, mbs_power)
    sbs = tuple(BsSite(HexCoord(q, r), SBS_H, CARRIER, sbs_power) for q, r in sbs_coords)
    return build_layout(diameter, mbs, sbs, max_sc_layers=max_layers, extent_layers=extent)


def make_dtd(layout, num_slices, seed, rate=1.0, lo=1e5, hi=1.5e6, T=3, tau=60.0):
    params = TrafficParams(rate, lo, hi, seed)
    return generate_dtd(layout, num_slices, params, T, tau)


def manual_dtd(loads, tau=60.0):
    arr = np.asarray(loads, dtype=float)
    return DtdInstance(loads_bits=arr, num_intervals=arr.shape[2], interval_duration_s=tau)


@pytest.fixture
def layout1():
    """Macro BS plus one small BS three layers out; 37 grids."""
    return make_layout()


@pytest.fixture
def layout0():
    """Macro-only layout, 19 grids."""
    return make_layout(extent=2, sbs_coords=())


@pytest.fixture
def spec2():
    return SliceSpec(num_slices=2, sinr_min_db=(7.0, 11.0), rb_per_bit=(1e-5, 1e-5),
                     ee_weight=(1.0, 1.0))


@pytest.fixture
def spec1():
    return SliceSpec(num_slices=1, sinr_min_db=(7.0,), rb_per_bit=(1e-5,), ee_weight=(1.0,))


@pytest.fixture
def radio():
    """Roomy block budget so interference stays in the feasible regime."""
    return RadioConfig(rb_budget=1e6)


@pytest.fixture
def gains1(layout1):
    return build_gain_table(layout1)

"""Hexagonal-grid world model: coordinates, distances, BS placement.

Convention: flat-top hexagons of corner-to-corner diameter ``r`` km, so the
circumradius is r/2 and the center spacing of adjacent grids is r*sqrt(3)/2.
Coverage radii and BS separations are counted in integer hex layers; channel
distances are Euclidean kilometers between grid centers.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Sequence

# COST-231 Hata validity range for the carrier frequency (MHz).
CARRIER_MHZ_MIN = 150.0
CARRIER_MHZ_MAX = 2000.0

# Axial steps of the six hex neighbours, in ring-walk order.
_NEIGHBOR_STEPS = ((1, 0), (1, -1), (0, -1), (-1, 0), (-1, 1), (0, 1))


@dataclass(frozen=True)
class HexCoord:
    """Axial hex coordinate; cube form is (x=q, z=r, y=-q-r)."""

    q: int
    r: int

    def __add__(self, other: "HexCoord") -> "HexCoord":
        return HexCoord(self.q + other.q, self.r + other.r)

    def __sub__(self, other: "HexCoord") -> "HexCoord":
        return HexCoord(self.q - other.q, self.r - other.r)


def hex_distance(a: HexCoord, b: HexCoord) -> int:
    """Hex-lattice distance in layers between two axial coordinates."""
    dq = a.q - b.q
    dr = a.r - b.r
    return (abs(dq) + abs(dr) + abs(dq + dr)) // 2


def ring_coords(center: HexCoord, layer: int) -> list[HexCoord]:
    """All coordinates at exactly `layer` hex layers from `center`.

    Layer 0 is the center itself; layer k >= 1 holds 6k coordinates, walked
    in a fixed order so enumeration is deterministic.
    """
    if layer < 0:
        raise ValueError(f"layer must be >= 0, got {layer}")
    if layer == 0:
        return [center]
    out = []
    # start at the "(-1, 1) * layer" corner and walk the six edges
    cur = HexCoord(center.q - layer, center.r + layer)
    for step_q, step_r in _NEIGHBOR_STEPS:
        for _ in range(layer):
            out.append(cur)
            cur = HexCoord(cur.q + step_q, cur.r + step_r)
    return out


def disc_coords(center: HexCoord, layers: int) -> list[HexCoord]:
    """All coordinates within `layers` hex layers of `center` (spiral order)."""
    out = []
    for k in range(layers + 1):
        out.extend(ring_coords(center, k))
    return out


def hex_center_xy(coord: HexCoord, grid_diameter_km: float) -> tuple[float, float]:
    """Cartesian center (km) of a grid under the flat-top convention."""
    circum = grid_diameter_km / 2.0
    x = 1.5 * circum * coord.q
    y = math.sqrt(3.0) * circum * (coord.r + coord.q / 2.0)
    return x, y


def center_distance_km(a: HexCoord, b: HexCoord, grid_diameter_km: float) -> float:
    ax, ay = hex_center_xy(a, grid_diameter_km)
    bx, by = hex_center_xy(b, grid_diameter_km)
    return math.hypot(ax - bx, ay - by)


def nearest_hex(x_km: float, y_km: float, grid_diameter_km: float) -> HexCoord:
    """Axial coordinate of the grid whose center is nearest to (x, y) km."""
    circum = grid_diameter_km / 2.0
    qf = x_km / (1.5 * circum)
    rf = y_km / (math.sqrt(3.0) * circum) - qf / 2.0
    # cube rounding
    xf, zf = qf, rf
    yf = -xf - zf
    rx, ry, rz = round(xf), round(yf), round(zf)
    dx, dy, dz = abs(rx - xf), abs(ry - yf), abs(rz - zf)
    if dx > dy and dx > dz:
        rx = -ry - rz
    elif dy > dz:
        pass  # y is derived, nothing to fix
    else:
        rz = -rx - ry
    return HexCoord(int(rx), int(rz))


@dataclass(frozen=True)
class BsSite:
    """One base-station site placed at a grid center."""

    coord: HexCoord
    antenna_height_m: float
    carrier_freq_mhz: float
    max_power_w: float

    def __post_init__(self):
        if self.antenna_height_m <= 0:
            raise ValueError(f"antenna height must be positive, got {self.antenna_height_m}")
        if not (CARRIER_MHZ_MIN <= self.carrier_freq_mhz <= CARRIER_MHZ_MAX):
            raise ValueError(
                f"carrier frequency {self.carrier_freq_mhz} MHz outside "
                f"[{CARRIER_MHZ_MIN}, {CARRIER_MHZ_MAX}]"
            )
        if self.max_power_w <= 0:
            raise ValueError(f"max power must be positive, got {self.max_power_w}")


@dataclass(frozen=True)
class NetworkLayout:
    """One macro BS plus M small BSs on a finite hexagonal grid.

    ``grid_coords`` fixes the grid enumeration: grid index i is the position
    of its coordinate in this sequence. The macro BS sits at the origin grid.
    """

    grid_diameter_km: float
    grid_coords: tuple[HexCoord, ...]
    mbs: BsSite
    sbs: tuple[BsSite, ...]
    max_sc_layers: int
    mbs_sc_radius_km: float
    _index: dict = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        if self.grid_diameter_km <= 0:
            raise ValueError("grid diameter must be positive")
        if self.max_sc_layers < 1:
            raise ValueError("max_sc_layers must be >= 1")
        if self.mbs_sc_radius_km <= 0:
            raise ValueError("mbs_sc_radius_km must be positive")
        if len(self.grid_coords) < 1:
            raise ValueError("layout needs at least one grid")
        index = {}
        for i, c in enumerate(self.grid_coords):
            if c in index:
                raise ValueError(f"duplicate grid coordinate {c}")
            index[c] = i
        if self.mbs.coord != HexCoord(0, 0):
            raise ValueError("the macro BS must sit on the origin grid")
        occupied = {self.mbs.coord}
        for site in self.sbs:
            if site.coord not in index:
                raise ValueError(f"SBS coordinate {site.coord} is not a grid of the layout")
            if site.coord in occupied:
                raise ValueError(f"two BSs share grid {site.coord}")
            occupied.add(site.coord)
        if HexCoord(0, 0) not in index:
            raise ValueError("the origin grid must belong to the layout")
        object.__setattr__(self, "_index", index)

    @property
    def num_grids(self) -> int:
        return len(self.grid_coords)

    @property
    def num_sbs(self) -> int:
        return len(self.sbs)

    def grid_index(self, coord: HexCoord) -> int:
        return self._index[coord]

    def bs_site(self, m: int) -> BsSite:
        """Site of BS m; m = 0 is the macro BS, 1..M the small BSs."""
        if m == 0:
            return self.mbs
        return self.sbs[m - 1]

    def bs_grid(self, m: int) -> int:
        return self._index[self.bs_site(m).coord]


def euclid_distance_km(layout: NetworkLayout, bs: int, grid: int) -> float:
    """Center distance (km) between BS `bs` and grid `grid`, floored at r/2.

    The floor keeps the propagation model finite on the BS's own grid: r/2
    is the closest plausible terminal distance inside a diameter-r hexagon.
    """
    site = layout.bs_site(bs)
    coord = layout.grid_coords[grid]
    d = center_distance_km(site.coord, coord, layout.grid_diameter_km)
    return max(d, layout.grid_diameter_km / 2.0)


def bs_grid_layers(layout: NetworkLayout) -> list[list[int]]:
    """Hex-layer distance from every BS (macro first) to every grid."""
    out = []
    for m in range(layout.num_sbs + 1):
        c = layout.bs_site(m).coord
        out.append([hex_distance(c, g) for g in layout.grid_coords])
    return out


def sbs_separation_layers(layout: NetworkLayout) -> list[list[int]]:
    """Pairwise hex-layer separation between small BSs (M x M)."""
    coords = [s.coord for s in layout.sbs]
    return [[hex_distance(a, b) for b in coords] for a in coords]


def validate_non_overlap(layout: NetworkLayout, l_full: Sequence[int]) -> bool:
    """True iff full-size coverage discs of the small BSs are pairwise disjoint.

    Two discs of radii lf and lf' are disjoint exactly when the BS separation
    is at least lf + lf' layers.
    """
    if len(l_full) != layout.num_sbs:
        raise ValueError("l_full must have one entry per SBS")
    coords = [s.coord for s in layout.sbs]
    for a in range(len(coords)):
        for b in range(a + 1, len(coords)):
            if hex_distance(coords[a], coords[b]) < l_full[a] + l_full[b]:
                return False
    return True


def build_layout(
    grid_diameter_km: float,
    mbs: BsSite,
    sbs: Sequence[BsSite] = (),
    *,
    max_sc_layers: int = 1,
    mbs_sc_radius_km: float | None = None,
    extent_layers: int | None = None,
) -> NetworkLayout:
    """Assemble a layout whose grids tile a disc around the origin.

    The extent is either ``extent_layers`` hex layers or every grid whose
    center lies within ``mbs_sc_radius_km`` of the origin. Exactly one of
    the two may drive the extent; if both are given, layers win.
    """
    if extent_layers is None and mbs_sc_radius_km is None:
        raise ValueError("give extent_layers or mbs_sc_radius_km")
    origin = HexCoord(0, 0)
    if extent_layers is not None:
        coords = disc_coords(origin, extent_layers)
        if mbs_sc_radius_km is None:
            spacing = grid_diameter_km * math.sqrt(3.0) / 2.0
            mbs_sc_radius_km = max(extent_layers, 1) * spacing
    else:
        spacing = grid_diameter_km * math.sqrt(3.0) / 2.0
        max_layers = int(math.ceil(mbs_sc_radius_km / spacing)) + 1
        coords = [
            c
            for c in disc_coords(origin, max_layers)
            if center_distance_km(origin, c, grid_diameter_km) <= mbs_sc_radius_km + 1e-12
        ]
    return NetworkLayout(
        grid_diameter_km=grid_diameter_km,
        grid_coords=tuple(coords),
        mbs=mbs,
        sbs=tuple(sbs),
        max_sc_layers=max_sc_layers,
        mbs_sc_radius_km=mbs_sc_radius_km,
    )

"""Scenario configuration, experiment orchestration, and result export.

A scenario lives in one YAML file with layout / slices / radio / traffic /
run / learning sections. The orchestrator loops planning windows: draw a
demand instance, run the configured scheme and solver, re-validate every
constraint on the result, and emit one flat result row per window. Sweeps
repeat that loop while varying one axis and tag rows with the axis value.
"""

from __future__ import annotations

import csv
import json
import math
import time
from dataclasses import dataclass, field, replace
from pathlib import Path

import numpy as np
import yaml

from .channel import GainTable, RadioConfig, build_gain_table
from .geometry import BsSite, HexCoord, NetworkLayout, build_layout, hex_center_xy, nearest_hex
from .learning import Autoencoder, DataRecord, RecordStore, ulscs
from .metrics import ee_report
from .power import PowerPlan, sinr_map, validate_power
from .search import SearchResult, cz_search, exhaustive_search, loscs
from .slicing import ScmDecision, SliceSpec, build_coverage, check_rb_budgets
from .traffic import DtdInstance, TrafficParams, generate_dtd

SCHEMES = ("sz+grid", "cz+grid", "cz+cell")
SOLVERS = ("loscs", "ulscs", "exhaustive")
SWEEP_AXES = ("num_sbs", "num_slices", "bandwidth", "grid_diameter", "k", "capacity")

BASE_COLUMNS = (
    "window",
    "scheme",
    "solver",
    "seed",
    "xi_per_slice",
    "objective",
    "total_power_w",
    "feasible",
    "infeasibility_reason",
    "wall_time_s",
)
SWEEP_COLUMNS = ("axis", "value", "error") + BASE_COLUMNS

SINR_EQUALITY_RTOL = 1e-9


class ConfigError(ValueError):
    """Raised when a scenario file is malformed or out of range."""


@dataclass(frozen=True)
class LayoutSection:
    grid_diameter_km: float
    max_sc_layers: int
    mbs_height_m: float
    mbs_carrier_mhz: float
    mbs_max_power_w: float
    sbs_sites: tuple[tuple[int, int], ...]
    sbs_height_m: float
    sbs_carrier_mhz: float
    sbs_max_power_w: float
    extent_layers: int | None = None
    mbs_sc_radius_km: float | None = None


@dataclass(frozen=True)
class SliceSection:
    count: int
    sinr_min_db: tuple[float, ...]
    rb_per_bit: tuple[float, ...]
    ee_weight: tuple[float, ...]
    sinr_scale: float = 1.0


@dataclass(frozen=True)
class RadioSection:
    noise_density_dbm_hz: float = -174.0
    rb_bandwidth_hz: float = 360e3
    rb_budget: float | None = None
    bandwidth_hz: float | None = None
    slots_per_window: float | None = None
    theta_mode: str = "occupancy"
    theta_constant: float = 1.0

    def resolved_budget(self) -> float:
        if self.rb_budget is not None:
            return self.rb_budget
        if self.bandwidth_hz is None or self.slots_per_window is None:
            raise ConfigError("radio needs rb_budget or bandwidth_hz + slots_per_window")
        return (self.bandwidth_hz / self.rb_bandwidth_hz) * self.slots_per_window


@dataclass(frozen=True)
class TrafficSection:
    ppp_rate_per_grid: float
    mean_load_bits: tuple[float, float]
    load_quantum_bits: float = 1e4
    ppp_rate_range: tuple[float, float] | None = None


@dataclass(frozen=True)
class RunSection:
    num_intervals: int
    interval_s: float
    windows: int = 1
    base_seed: int = 0
    scheme: str = "sz+grid"
    solver: str = "loscs"
    top_k: int = 5
    store_capacity: int = 500
    exhaustive_cap: int = 100_000


@dataclass(frozen=True)
class LearningSection:
    hidden_sizes: tuple[int, ...] = (512, 64)
    hidden_activation: str = "relu"
    epochs: int = 50
    batch_size: int = 32
    learning_rate: float = 1e-3
    train_instances: int = 200
    train_seed_offset: int = 1_000_000
    model_path: str = "model.npz"
    store_path: str = "store.jsonl"


@dataclass(frozen=True)
class ScenarioConfig:
    layout: LayoutSection
    slices: SliceSection
    radio: RadioSection
    traffic: TrafficSection
    run: RunSection
    learning: LearningSection = field(default_factory=LearningSection)

    def build_layout(self) -> NetworkLayout:
        lay = self.layout
        mbs = BsSite(
            coord=HexCoord(0, 0),
            antenna_height_m=lay.mbs_height_m,
            carrier_freq_mhz=lay.mbs_carrier_mhz,
            max_power_w=lay.mbs_max_power_w,
        )
        sbs = tuple(
            BsSite(
                coord=HexCoord(q, r),
                antenna_height_m=lay.sbs_height_m,
                carrier_freq_mhz=lay.sbs_carrier_mhz,
                max_power_w=lay.sbs_max_power_w,
            )
            for q, r in lay.sbs_sites
        )
        return build_layout(
            lay.grid_diameter_km,
            mbs,
            sbs,
            max_sc_layers=lay.max_sc_layers,
            mbs_sc_radius_km=lay.mbs_sc_radius_km,
            extent_layers=lay.extent_layers,
        )

    def slice_spec(self) -> SliceSpec:
        s = self.slices
        return SliceSpec(
            num_slices=s.count,
            sinr_min_db=s.sinr_min_db,
            rb_per_bit=s.rb_per_bit,
            ee_weight=s.ee_weight,
            sinr_scale=s.sinr_scale,
        )

    def radio_config(self) -> RadioConfig:
        r = self.radio
        return RadioConfig(
            noise_density_dbm_hz=r.noise_density_dbm_hz,
            rb_bandwidth_hz=r.rb_bandwidth_hz,
            rb_budget=r.resolved_budget(),
            theta_mode=r.theta_mode,
            theta_constant=r.theta_constant,
        )

    def window_rate(self, window_seed: int) -> float:
        """Per-window terminal rate; redrawn per window when a range is set."""
        t = self.traffic
        if t.ppp_rate_range is None:
            return t.ppp_rate_per_grid
        lo, hi = t.ppp_rate_range
        rng = np.random.default_rng(1_000_003 * window_seed + 17)
        return float(rng.uniform(lo, hi))

    def traffic_params(self, window_seed: int) -> TrafficParams:
        t = self.traffic
        return TrafficParams(
            ppp_rate_per_grid=self.window_rate(window_seed),
            mean_load_bits_low=t.mean_load_bits[0],
            mean_load_bits_high=t.mean_load_bits[1],
            seed=window_seed,
            load_quantum_bits=t.load_quantum_bits,
        )


def _require(cond: bool, message: str) -> None:
    if not cond:
        raise ConfigError(message)


def config_from_dict(raw: dict) -> ScenarioConfig:
    """Build a validated scenario from a parsed YAML mapping."""
    try:
        lay = raw["layout"]
        sls = raw["slices"]
        rad = raw.get("radio", {})
        tra = raw["traffic"]
        run = raw["run"]
        lrn = raw.get("learning", {})
    except KeyError as exc:
        raise ConfigError(f"missing config section: {exc}") from exc

    layout = LayoutSection(
        grid_diameter_km=float(lay["grid_diameter_km"]),
        max_sc_layers=int(lay["max_sc_layers"]),
        mbs_height_m=float(lay["mbs"]["antenna_height_m"]),
        mbs_carrier_mhz=float(lay["mbs"]["carrier_freq_mhz"]),
        mbs_max_power_w=float(lay["mbs"]["max_power_w"]),
        sbs_sites=tuple((int(q), int(r)) for q, r in lay.get("sbs_sites", [])),
        sbs_height_m=float(lay["sbs"]["antenna_height_m"]),
        sbs_carrier_mhz=float(lay["sbs"]["carrier_freq_mhz"]),
        sbs_max_power_w=float(lay["sbs"]["max_power_w"]),
        extent_layers=None if lay.get("extent_layers") is None else int(lay["extent_layers"]),
        mbs_sc_radius_km=(
            None if lay.get("mbs_sc_radius_km") is None else float(lay["mbs_sc_radius_km"])
        ),
    )
    _require(layout.grid_diameter_km > 0, "grid_diameter_km must be positive")
    _require(layout.max_sc_layers >= 1, "max_sc_layers must be >= 1")
    _require(
        layout.extent_layers is not None or layout.mbs_sc_radius_km is not None,
        "layout needs extent_layers or mbs_sc_radius_km",
    )

    count = int(sls["count"])
    slices = SliceSection(
        count=count,
        sinr_min_db=tuple(float(v) for v in sls["sinr_min_db"][:count]),
        rb_per_bit=tuple(float(v) for v in sls["rb_per_bit"][:count]),
        ee_weight=tuple(float(v) for v in sls["ee_weight"][:count]),
        sinr_scale=float(sls.get("sinr_scale", 1.0)),
    )
    _require(count >= 1, "need at least one slice")
    for name in ("sinr_min_db", "rb_per_bit", "ee_weight"):
        _require(
            len(getattr(slices, name)) == count,
            f"slices.{name} must list at least `count` values",
        )
    _require(slices.sinr_scale > 0, "sinr_scale must be positive")

    radio = RadioSection(
        noise_density_dbm_hz=float(rad.get("noise_density_dbm_hz", -174.0)),
        rb_bandwidth_hz=float(rad.get("rb_bandwidth_hz", 360e3)),
        rb_budget=None if rad.get("rb_budget") is None else float(rad["rb_budget"]),
        bandwidth_hz=None if rad.get("bandwidth_hz") is None else float(rad["bandwidth_hz"]),
        slots_per_window=(
            None if rad.get("slots_per_window") is None else float(rad["slots_per_window"])
        ),
        theta_mode=str(rad.get("theta_mode", "occupancy")),
        theta_constant=float(rad.get("theta_constant", 1.0)),
    )
    _require(radio.rb_bandwidth_hz > 0, "rb_bandwidth_hz must be positive")
    _require(radio.resolved_budget() > 0, "resolved block budget must be positive")

    rate_range = tra.get("ppp_rate_range")
    traffic = TrafficSection(
        ppp_rate_per_grid=float(tra["ppp_rate_per_grid"]),
        mean_load_bits=tuple(float(v) for v in tra["mean_load_bits"]),
        load_quantum_bits=float(tra.get("load_quantum_bits", 1e4)),
        ppp_rate_range=None if rate_range is None else (float(rate_range[0]), float(rate_range[1])),
    )
    _require(traffic.ppp_rate_per_grid >= 0, "ppp_rate_per_grid must be nonnegative")
    _require(
        0 < traffic.mean_load_bits[0] <= traffic.mean_load_bits[1],
        "mean_load_bits must be an increasing positive pair",
    )

    runsec = RunSection(
        num_intervals=int(run["num_intervals"]),
        interval_s=float(run["interval_s"]),
        windows=int(run.get("windows", 1)),
        base_seed=int(run.get("base_seed", 0)),
        scheme=str(run.get("scheme", "sz+grid")).lower(),
        solver=str(run.get("solver", "loscs")).lower(),
        top_k=int(run.get("top_k", 5)),
        store_capacity=int(run.get("store_capacity", 500)),
        exhaustive_cap=int(run.get("exhaustive_cap", 100_000)),
    )
    _require(runsec.num_intervals > 1, "num_intervals must exceed 1 (dual time-scale planning)")
    _require(runsec.interval_s > 0, "interval_s must be positive")
    _require(runsec.windows >= 1, "windows must be >= 1")
    _require(runsec.scheme in SCHEMES, f"scheme must be one of {SCHEMES}")
    _require(runsec.solver in SOLVERS, f"solver must be one of {SOLVERS}")
    _require(runsec.top_k >= 0, "top_k must be >= 0")
    _require(runsec.store_capacity >= 1, "store_capacity must be >= 1")

    learning = LearningSection(
        hidden_sizes=tuple(int(v) for v in lrn.get("hidden_sizes", (512, 64))),
        hidden_activation=str(lrn.get("hidden_activation", "relu")),
        epochs=int(lrn.get("epochs", 50)),
        batch_size=int(lrn.get("batch_size", 32)),
        learning_rate=float(lrn.get("learning_rate", 1e-3)),
        train_instances=int(lrn.get("train_instances", 200)),
        train_seed_offset=int(lrn.get("train_seed_offset", 1_000_000)),
        model_path=str(lrn.get("model_path", "model.npz")),
        store_path=str(lrn.get("store_path", "store.jsonl")),
    )
    _require(all(v >= 1 for v in learning.hidden_sizes), "hidden sizes must be >= 1")
    _require(learning.epochs >= 1 and learning.batch_size >= 1, "bad training hyperparameters")

    config = ScenarioConfig(
        layout=layout, slices=slices, radio=radio, traffic=traffic, run=runsec, learning=learning
    )
    config.build_layout()  # fail fast on geometric inconsistencies
    return config


def load_config(path: str | Path) -> ScenarioConfig:
    with open(Path(path)) as fh:
        raw = yaml.safe_load(fh)
    if not isinstance(raw, dict):
        raise ConfigError(f"{path}: expected a mapping at the top level")
    return config_from_dict(raw)


def validate_solution(
    layout: NetworkLayout,
    dtd: DtdInstance,
    slice_spec: SliceSpec,
    radio: RadioConfig,
    scm: ScmDecision,
    plan: PowerPlan,
    gains: GainTable,
    *,
    power_solver: str = "grid",
) -> list[str]:
    """Independent re-check of every constraint; returns violation messages.

    The per-grid solver must meet each SINR target with equality; the
    cell-based benchmark only from above.
    """
    problems: list[str] = []
    if any(f > layout.max_sc_layers for f in scm.l_full):
        problems.append("full radius exceeds the physical limit")
    try:
        coverage = build_coverage(layout, scm, slice_spec)
    except ValueError as exc:
        return [f"coverage: {exc}"]
    budget = check_rb_budgets(coverage, dtd, slice_spec, radio.rb_budget)
    if not budget.all_ok:
        problems.append("block budgets violated")
    w = dtd.loads_bits
    active = w > 0
    if np.any(plan.power_w[active] <= 0):
        problems.append("active reservation with nonpositive power")
    if np.any(plan.power_w[~active] != 0):
        problems.append("idle pair with nonzero power")
    targets = slice_spec.sinr_scale * slice_spec.sinr_min_linear
    for t in range(dtd.num_intervals):
        if not validate_power(plan, coverage, layout, t):
            problems.append(f"interval {t}: BS power budget violated")
        achieved = sinr_map(plan, coverage, dtd, gains, slice_spec, radio, t)
        for i, n in np.argwhere(active[:, :, t]):
            ratio = achieved[i, n] / targets[n]
            if power_solver == "grid":
                if abs(ratio - 1.0) > SINR_EQUALITY_RTOL:
                    problems.append(f"interval {t}: pair ({i},{n}) off target by {ratio - 1.0:.2e}")
            elif ratio < 1.0 - SINR_EQUALITY_RTOL:
                problems.append(f"interval {t}: pair ({i},{n}) below target")
    return problems


def _dispatch(
    config: ScenarioConfig,
    layout: NetworkLayout,
    dtd: DtdInstance,
    slice_spec: SliceSpec,
    radio: RadioConfig,
    gains: GainTable,
    seed: int,
    *,
    ae: Autoencoder | None,
    store: RecordStore | None,
) -> SearchResult:
    scheme = config.run.scheme
    solver = config.run.solver
    cz = scheme.startswith("cz")
    power_solver = "cell" if scheme.endswith("cell") else "grid"
    if solver == "exhaustive":
        return exhaustive_search(
            layout, dtd, slice_spec, radio, gains=gains, power_solver=power_solver,
            cz=cz, cap=config.run.exhaustive_cap,
        )
    if solver == "ulscs":
        if ae is None or store is None:
            raise ConfigError("the ulscs solver needs a trained model and a record store")
        return ulscs(
            layout, dtd, slice_spec, radio, ae, store, config.run.top_k, seed=seed,
            gains=gains, power_solver=power_solver, cz=cz,
        )
    if cz:
        return cz_search(layout, dtd, slice_spec, radio, seed=seed, gains=gains,
                         power_solver=power_solver)
    return loscs(layout, dtd, slice_spec, radio, seed=seed, gains=gains,
                 power_solver=power_solver)


def run_windows(
    config: ScenarioConfig,
    *,
    ae: Autoencoder | None = None,
    store: RecordStore | None = None,
) -> tuple[list[dict], RecordStore | None]:
    """Plan every window of the scenario and emit one result row each.

    Every feasible result is re-validated against all constraints before it
    is reported; a validation failure is a solver bug and raises. Infeasible
    windows become rows with feasible=false rather than errors.
    """
    layout = config.build_layout()
    slice_spec = config.slice_spec()
    radio = config.radio_config()
    gains = build_gain_table(layout)
    if config.run.solver == "ulscs" and store is None:
        store = RecordStore(config.run.store_capacity)
    power_solver = "cell" if config.run.scheme.endswith("cell") else "grid"
    rows: list[dict] = []
    for w in range(config.run.windows):
        seed = config.run.base_seed + w
        dtd = generate_dtd(
            layout,
            slice_spec.num_slices,
            config.traffic_params(seed),
            config.run.num_intervals,
            config.run.interval_s,
        )
        start = time.perf_counter()
        result = _dispatch(
            config, layout, dtd, slice_spec, radio, gains, seed, ae=ae, store=store
        )
        wall = time.perf_counter() - start
        feasible = result.plan.feasible and math.isfinite(result.objective)
        if feasible:
            problems = validate_solution(
                layout, dtd, slice_spec, radio, result.scm, result.plan, gains,
                power_solver=power_solver,
            )
            if problems:
                raise RuntimeError(f"window {w}: plan failed re-validation: {problems}")
            coverage = build_coverage(layout, result.scm, slice_spec)
            report = ee_report(dtd, result.plan, coverage, slice_spec, dtd.interval_duration_s)
            xi = [float(v) for v in report.per_slice_ee]
        else:
            xi = [0.0] * slice_spec.num_slices
        rows.append(
            {
                "window": w,
                "scheme": config.run.scheme,
                "solver": config.run.solver,
                "seed": seed,
                "xi_per_slice": xi,
                "objective": result.objective,
                "total_power_w": result.plan.total_power_w(),
                "feasible": feasible,
                "infeasibility_reason": result.plan.infeasibility_reason or "",
                "wall_time_s": wall,
            }
        )
    return rows, store


def _with_axis(config: ScenarioConfig, axis: str, value) -> ScenarioConfig:
    """Scenario variant for one sweep cell."""
    if axis == "num_sbs":
        v = int(value)
        sites = config.layout.sbs_sites
        if v > len(sites):
            raise ConfigError(f"config lists {len(sites)} SBS sites, sweep asked for {v}")
        return replace(config, layout=replace(config.layout, sbs_sites=sites[:v]))
    if axis == "num_slices":
        v = int(value)
        s = config.slices
        if v > len(s.sinr_min_db):
            raise ConfigError(f"config lists {len(s.sinr_min_db)} slices, sweep asked for {v}")
        # hold the total offered load fixed while splitting it over v slices
        scale = s.count / v
        new_traffic = replace(
            config.traffic,
            ppp_rate_per_grid=config.traffic.ppp_rate_per_grid * scale,
            ppp_rate_range=None
            if config.traffic.ppp_rate_range is None
            else (
                config.traffic.ppp_rate_range[0] * scale,
                config.traffic.ppp_rate_range[1] * scale,
            ),
        )
        new_slices = replace(
            s,
            count=v,
            sinr_min_db=s.sinr_min_db[:v],
            rb_per_bit=s.rb_per_bit[:v],
            ee_weight=s.ee_weight[:v],
        )
        return replace(config, slices=new_slices, traffic=new_traffic)
    if axis == "bandwidth":
        v = float(value)
        return replace(
            config, radio=replace(config.radio, bandwidth_hz=v, rb_budget=None)
        )
    if axis == "grid_diameter":
        v = float(value)
        base = config.layout.grid_diameter_km
        radius = config.layout.mbs_sc_radius_km
        if radius is None:
            spacing = base * math.sqrt(3.0) / 2.0
            radius = config.layout.extent_layers * spacing
        # keep BS sites and coverage reach physically fixed while regridding
        sites = []
        for q, r in config.layout.sbs_sites:
            x, y = hex_center_xy(HexCoord(q, r), base)
            c = nearest_hex(x, y, v)
            sites.append((c.q, c.r))
        if len({(0, 0)} | set(sites)) != len(sites) + 1:
            raise ConfigError(f"grid diameter {v}: BS sites collide after regridding")
        layers = max(1, round(config.layout.max_sc_layers * base / v))
        area_scale = (v / base) ** 2
        new_traffic = replace(
            config.traffic,
            ppp_rate_per_grid=config.traffic.ppp_rate_per_grid * area_scale,
            ppp_rate_range=None
            if config.traffic.ppp_rate_range is None
            else (
                config.traffic.ppp_rate_range[0] * area_scale,
                config.traffic.ppp_rate_range[1] * area_scale,
            ),
        )
        new_layout = replace(
            config.layout,
            grid_diameter_km=v,
            sbs_sites=tuple(sites),
            max_sc_layers=layers,
            extent_layers=None,
            mbs_sc_radius_km=radius,
        )
        return replace(config, layout=new_layout, traffic=new_traffic)
    if axis == "k":
        return replace(config, run=replace(config.run, top_k=int(value)))
    if axis == "capacity":
        return replace(config, run=replace(config.run, store_capacity=int(value)))
    raise ConfigError(f"unknown sweep axis {axis!r}; pick one of {SWEEP_AXES}")


def sweep(
    config: ScenarioConfig,
    axis: str,
    values,
    *,
    ae: Autoencoder | None = None,
    records: list[DataRecord] | None = None,
) -> list[dict]:
    """Repeat the window loop per axis value; long-format tagged rows.

    For the k and capacity axes each cell starts from a fresh store seeded
    with `records` (the newest `capacity` survive), so cells differ only in
    the swept knob. Per-cell failures become error rows and the sweep moves
    on.
    """
    rows: list[dict] = []
    for value in values:
        try:
            cell = _with_axis(config, axis, value)
            store = None
            if cell.run.solver == "ulscs":
                store = RecordStore(cell.run.store_capacity)
                for rec in records or []:
                    store.insert(rec)
            cell_rows, _ = run_windows(cell, ae=ae, store=store)
            for row in cell_rows:
                rows.append({"axis": axis, "value": value, "error": "", **row})
        except Exception as exc:  # noqa: BLE001 - a failed cell must not kill the sweep
            rows.append(
                {
                    "axis": axis,
                    "value": value,
                    "error": f"{type(exc).__name__}: {exc}",
                    **{col: "" for col in BASE_COLUMNS},
                }
            )
    return rows


def _canonical(rows: list[dict]) -> tuple[list[str], list[dict]]:
    columns = list(SWEEP_COLUMNS if any("axis" in r for r in rows) else BASE_COLUMNS)
    if not rows:
        columns = list(BASE_COLUMNS)

    def key(row):
        return tuple(
            (0, v) if isinstance(v, (int, float, bool)) and not isinstance(v, str) else (1, str(v))
            for v in (row.get(c, "") for c in ("axis", "value", "window", "scheme", "solver", "seed"))
        )

    return columns, sorted(rows, key=key)


def export(rows: list[dict], path: str | Path, fmt: str = "csv") -> None:
    """Write rows in canonical order as CSV or JSON lines."""
    columns, ordered = _canonical(rows)
    path = Path(path)
    if fmt == "csv":
        with open(path, "w", newline="") as fh:
            writer = csv.writer(fh)
            writer.writerow(columns)
            for row in ordered:
                writer.writerow([_csv_cell(row.get(c, "")) for c in columns])
    elif fmt == "jsonl":
        with open(path, "w") as fh:
            for row in ordered:
                fh.write(json.dumps({c: row.get(c, "") for c in columns}) + "\n")
    else:
        raise ValueError(f"unknown export format {fmt!r}")


def _csv_cell(value):
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, list):
        return json.dumps(value)
    if isinstance(value, float):
        return repr(value)
    return value


_INT_COLUMNS = {"window", "seed"}
_FLOAT_COLUMNS = {"objective", "total_power_w", "wall_time_s", "value"}
_BOOL_COLUMNS = {"feasible"}
_JSON_COLUMNS = {"xi_per_slice"}


def load_rows(path: str | Path) -> list[dict]:
    """Read back an exported table (either format) with native cell types."""
    path = Path(path)
    rows: list[dict] = []
    if path.suffix == ".jsonl":
        for line in path.read_text().splitlines():
            if line.strip():
                rows.append(json.loads(line))
        return rows
    with open(path, newline="") as fh:
        for raw in csv.DictReader(fh):
            row: dict = {}
            for key, cell in raw.items():
                if cell == "" and key not in _JSON_COLUMNS:
                    row[key] = ""
                elif key in _INT_COLUMNS:
                    row[key] = int(cell)
                elif key in _FLOAT_COLUMNS:
                    row[key] = float(cell)
                elif key in _BOOL_COLUMNS:
                    row[key] = cell == "true"
                elif key in _JSON_COLUMNS:
                    row[key] = json.loads(cell) if cell else ""
                else:
                    row[key] = cell
            rows.append(row)
    return rows

"""Planning-stage resource management for a sliced two-tier radio access
network: coverage decisions and per-grid downlink power plans that maximize
weighted energy efficiency under per-slice SINR targets."""

from .channel import GainTable, RadioConfig, build_gain_table, linear_gain, path_loss_db
from .geometry import (
    BsSite,
    HexCoord,
    NetworkLayout,
    build_layout,
    euclid_distance_km,
    hex_distance,
    validate_non_overlap,
)
from .harness import ScenarioConfig, export, load_config, run_windows, sweep, validate_solution
from .learning import (
    Autoencoder,
    DataRecord,
    RecordStore,
    TrainConfig,
    encode,
    init_autoencoder,
    load_model,
    load_store,
    reconstruction_loss,
    save_model,
    save_store,
    similarity,
    train,
    ulscs,
)
from .metrics import EeReport, ee_report, energy, interval_objective, objective, slice_ee
from .power import (
    PowerPlan,
    assemble_system,
    cell_based_power,
    fixed_point_oracle,
    plan_window,
    sinr,
    solve_power_interval,
    validate_power,
)
from .search import SearchResult, cz_search, exhaustive_search, loscs
from .slicing import (
    CoverageMap,
    ScmDecision,
    SliceSpec,
    build_coverage,
    check_rb_budgets,
    default_scm,
    enumerate_candidates,
    interference_indicator,
    sc_radius,
)
from .traffic import DtdInstance, TrafficParams, generate_dtd, load_dtd, save_dtd

__version__ = "0.1.0"

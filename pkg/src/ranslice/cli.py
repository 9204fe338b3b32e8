"""Command-line front end: traffic generation, model training, planning runs,
sweeps, and table format conversion.

Every subcommand takes --config pointing at a scenario YAML; frequently
overridden fields (seed, scheme, solver) have dedicated flags. Failures exit
nonzero with a one-line JSON error on stderr.
"""

from __future__ import annotations

import argparse
import json
import sys
from dataclasses import replace
from pathlib import Path

from .harness import ScenarioConfig, export, load_config, load_rows, run_windows, sweep
from .learning import (
    RecordStore,
    TrainConfig,
    init_autoencoder,
    load_model,
    load_store,
    save_model,
    save_store,
    train,
)
from .traffic import generate_dtd, save_dtd


def _apply_overrides(config: ScenarioConfig, args) -> ScenarioConfig:
    run = config.run
    if getattr(args, "seed", None) is not None:
        run = replace(run, base_seed=args.seed)
    if getattr(args, "scheme", None) is not None:
        run = replace(run, scheme=args.scheme)
    if getattr(args, "solver", None) is not None:
        run = replace(run, solver=args.solver)
    if getattr(args, "windows", None) is not None:
        run = replace(run, windows=args.windows)
    return replace(config, run=run)


def _training_set(config: ScenarioConfig):
    layout = config.build_layout()
    n = config.slices.count
    offset = config.learning.train_seed_offset
    return [
        generate_dtd(
            layout,
            n,
            config.traffic_params(offset + j),
            config.run.num_intervals,
            config.run.interval_s,
        )
        for j in range(config.learning.train_instances)
    ]


def _load_learning_state(config: ScenarioConfig):
    ae = load_model(config.learning.model_path)
    store_path = Path(config.learning.store_path)
    if store_path.exists():
        store = load_store(store_path, config.run.store_capacity)
    else:
        store = RecordStore(config.run.store_capacity)
    return ae, store


def cmd_gen_traffic(args) -> int:
    config = _apply_overrides(load_config(args.config), args)
    layout = config.build_layout()
    outdir = Path(args.out)
    outdir.mkdir(parents=True, exist_ok=True)
    for w in range(config.run.windows):
        seed = config.run.base_seed + w
        dtd = generate_dtd(
            layout,
            config.slices.count,
            config.traffic_params(seed),
            config.run.num_intervals,
            config.run.interval_s,
        )
        save_dtd(dtd, outdir / f"dtd_w{w:04d}_s{seed}.txt")
    print(f"wrote {config.run.windows} demand files to {outdir}")
    return 0


def cmd_train_ae(args) -> int:
    config = _apply_overrides(load_config(args.config), args)
    dataset = _training_set(config)
    dim = dataset[0].loads_bits.size
    sizes = (dim, *config.learning.hidden_sizes)
    ae = init_autoencoder(
        sizes,
        hidden_activation=config.learning.hidden_activation,
        seed=config.run.base_seed,
    )
    report = train(
        ae,
        dataset,
        TrainConfig(
            epochs=config.learning.epochs,
            batch_size=config.learning.batch_size,
            learning_rate=config.learning.learning_rate,
        ),
        seed=config.run.base_seed,
    )
    save_model(ae, config.learning.model_path)
    print(
        f"trained on {len(dataset)} instances: loss "
        f"{report.initial_loss:.6f} -> {report.epoch_losses[-1]:.6f}; "
        f"model saved to {config.learning.model_path}"
    )
    return 0


def _run(config: ScenarioConfig):
    ae = store = None
    if config.run.solver == "ulscs":
        ae, store = _load_learning_state(config)
    rows, store = run_windows(config, ae=ae, store=store)
    if store is not None:
        save_store(store, config.learning.store_path)
    return rows


def cmd_plan(args) -> int:
    config = _apply_overrides(load_config(args.config), args)
    config = replace(config, run=replace(config.run, windows=1))
    rows = _run(config)
    print(json.dumps(rows[0]))
    return 0


def cmd_run(args) -> int:
    config = _apply_overrides(load_config(args.config), args)
    rows = _run(config)
    export(rows, args.out, fmt=args.format)
    feasible = sum(1 for r in rows if r["feasible"])
    print(f"{len(rows)} windows ({feasible} feasible) -> {args.out}")
    return 0


def cmd_sweep(args) -> int:
    config = _apply_overrides(load_config(args.config), args)
    values = [json.loads(v) for v in args.values.split(",")]
    ae = records = None
    if config.run.solver == "ulscs":
        ae, store = _load_learning_state(config)
        records = list(store.records)
    rows = sweep(config, args.axis, values, ae=ae, records=records)
    export(rows, args.out, fmt=args.format)
    print(f"{len(rows)} rows -> {args.out}")
    return 0


def cmd_export(args) -> int:
    rows = load_rows(args.infile)
    export(rows, args.out, fmt=args.format)
    print(f"{len(rows)} rows -> {args.out}")
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="ranslice",
        description="Planning-stage coverage and downlink power simulator "
        "for a sliced two-tier radio access network.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p, windows=True):
        p.add_argument("--config", required=True, help="scenario YAML file")
        p.add_argument("--seed", type=int, help="override run.base_seed")
        p.add_argument("--scheme", choices=["sz+grid", "cz+grid", "cz+cell"])
        p.add_argument("--solver", choices=["loscs", "ulscs", "exhaustive"])
        if windows:
            p.add_argument("--windows", type=int, help="override run.windows")

    p = sub.add_parser("gen-traffic", help="write demand files for every window")
    common(p)
    p.add_argument("--out", default="dtd", help="output directory")
    p.set_defaults(func=cmd_gen_traffic)

    p = sub.add_parser("train-ae", help="train and save the retrieval model")
    common(p, windows=False)
    p.set_defaults(func=cmd_train_ae)

    p = sub.add_parser("plan", help="plan a single window and print its row")
    common(p, windows=False)
    p.set_defaults(func=cmd_plan)

    p = sub.add_parser("run", help="plan every window and export the table")
    common(p)
    p.add_argument("--out", default="results.csv")
    p.add_argument("--format", choices=["csv", "jsonl"], default="csv")
    p.set_defaults(func=cmd_run)

    p = sub.add_parser("sweep", help="repeat the run over one swept axis")
    common(p)
    p.add_argument("--axis", required=True,
                   choices=["num_sbs", "num_slices", "bandwidth", "grid_diameter", "k", "capacity"])
    p.add_argument("--values", required=True, help="comma-separated axis values")
    p.add_argument("--out", default="sweep.csv")
    p.add_argument("--format", choices=["csv", "jsonl"], default="csv")
    p.set_defaults(func=cmd_sweep)

    p = sub.add_parser("export", help="convert a result table between formats")
    p.add_argument("--infile", required=True)
    p.add_argument("--out", required=True)
    p.add_argument("--format", choices=["csv", "jsonl"], default="jsonl")
    p.set_defaults(func=cmd_export)

    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except Exception as exc:  # noqa: BLE001 - CLI boundary
        print(json.dumps({"error": str(exc), "type": type(exc).__name__}), file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())

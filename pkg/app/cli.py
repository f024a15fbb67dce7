"""park-sim command line.

Global options come before the subcommand::

    park-sim --seed 7 --out out/ simulate --site dense
    park-sim --synthetic preset table1 --param seeds=20

Exit codes: 0 on success, 2 for invalid input or configuration, 1 for
unexpected failures.
"""
import argparse
import logging
import sys
from pathlib import Path
from typing import Any, Dict, List, Optional, Sequence

import pandas as pd
import yaml

from app.config import Config
from app.errors import ConfigError, DataFileError, ParkSimError
from app.experiments import (
    SITES,
    ExperimentPreset,
    dense_network,
    load_scenario,
    preset_names,
    run_preset,
)
from app.ingest import (
    ColumnMap,
    apply_lot_map,
    connected_stream,
    day_origin,
    high_demand_profile,
    light_demand_profile,
    load_lot_map,
    read_occupancy,
    read_transactions,
    synth_dataset,
    traces_by_lot,
)
from app.logging_config import configure_logging, set_run_id
from app.models.cascade import CascadeCase, CascadeScenario, cascade_report
from app.models.core import ParkingNetwork, WaitConvention, load_network
from app.models.observer import (
    RateUnit,
    expected_time_error,
    exponential_law_report,
    linear_law_report,
    random_walk_mae,
)
from app.models.strategy import (
    best_patient_lot,
    cluster_value,
    patient_values,
    sensitivity_table,
    validate_cluster,
    value_iteration,
)
from app.monitoring.metrics import snapshot
from app.simulation import compare_modes, run_batch
from app.tools.config_validator import validate_config
from app.utils.io import dumps_json, round_frame, write_csv, write_json
from app.utils.seeding import derive_seed

logger = logging.getLogger(__name__)


def _floats(text: str) -> List[float]:
    try:
        return [float(v) for v in text.split(",") if v.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated numbers, got '{text}'")


def _param(text: str) -> tuple:
    key, sep, value = text.partition("=")
    if not sep or not key:
        raise argparse.ArgumentTypeError(f"expected key=value, got '{text}'")
    return key.strip(), yaml.safe_load(value)


def _emit(payload: Dict[str, Any], args: argparse.Namespace, stem: str) -> None:
    if args.metrics:
        payload["metrics"] = snapshot()
    if args.out:
        write_json(payload, Path(args.out) / f"{stem}.json")
    sys.stdout.write(dumps_json(payload))


def _network(args: argparse.Namespace) -> ParkingNetwork:
    """Network from ``--config`` (bare network or scenario file), or the dense site under --synthetic."""
    if not args.config:
        if args.synthetic:
            return dense_network()
        raise ConfigError("this command needs --config with a network definition (or --synthetic)")
    try:
        with open(args.config, "r", encoding="utf-8") as fh:
            data = yaml.safe_load(fh) or {}
    except (OSError, yaml.YAMLError) as e:
        raise ConfigError(f"cannot read config file {args.config}: {e}")
    if isinstance(data, dict) and isinstance(data.get("network"), dict):
        return ParkingNetwork.from_dict(data["network"])
    return load_network(args.config)


# --- subcommands ---

def cmd_closed_form(args: argparse.Namespace) -> int:
    net = _network(args)
    convention = WaitConvention(args.convention)
    values = patient_values(net, convention)
    lot, best = best_patient_lot(net, convention)
    solved = value_iteration(net)
    payload: Dict[str, Any] = {
        "convention": convention.value,
        "patient_values": {str(j): float(values[j - 1]) for j in net.lots},
        "best_patient_lot": lot,
        "best_patient_value": best,
        "optimal": {
            "origin_action": solved.action(0),
            "origin_expected_time": float(solved.costs[0]),
            "policy": {str(i): solved.action(i) for i in range(net.n_lots + 1)},
            "switches_after_failure": {str(j): solved.switches_after_failure(j) for j in net.lots},
            "sweeps": solved.sweeps,
        },
        "sensitivity": round_frame(sensitivity_table(net, lot)).to_dict(orient="records"),
    }
    if args.cluster:
        members = [int(m) for m in args.cluster]
        violations = validate_cluster(net, members)
        if violations:
            raise ConfigError("cluster does not satisfy the cluster conditions", violations)
        strategy = cluster_value(net, members)
        payload["cluster"] = {"members": strategy.target, "expected_time": strategy.expected_time}
    _emit(payload, args, "closed_form")
    return 0


def cmd_cascade(args: argparse.Namespace) -> int:
    case = CascadeCase(args.case)
    scenario = CascadeScenario(case, tuple(args.probs), args.n or 1)
    seed = derive_seed(args.seed, "cascade-cli")
    _emit(cascade_report(scenario, args.samples, seed, args.workers), args, "cascade")
    return 0


def cmd_observe_error(args: argparse.Namespace) -> int:
    unit = RateUnit(args.unit)
    seed = derive_seed(args.seed, "observe-error", args.law)
    if args.law == "linear":
        payload = linear_law_report(args.m, args.lam, args.r, args.draws, seed, unit)
    else:
        payload = exponential_law_report(args.b, args.lam, args.r, args.draws, seed, unit)
    if args.p_true is not None and args.p_obs is not None:
        net = _network(args)
        payload["time_error"] = {
            "lot": args.lot,
            "p_true": args.p_true,
            "p_obs": args.p_obs,
            "minutes": expected_time_error(args.p_true, args.p_obs, net, args.lot),
        }
    _emit(payload, args, "observe_error")
    return 0


def cmd_random_walk(args: argparse.Namespace) -> int:
    table = round_frame(random_walk_mae(args.lambdas, args.adoptions, args.seeds, args.seed,
                                        args.start, args.minutes))
    if args.out:
        write_csv(table, Path(args.out) / "random_walk_mae.csv")
    means = table.groupby(["lambda_per_hour", "adoption"])["mae"].mean()
    _emit({
        "seeds": args.seeds,
        "mean_mae": {f"{lam:g}@{r:g}": float(v) for (lam, r), v in means.items()},
    }, args, "random_walk")
    return 0


def cmd_ingest(args: argparse.Namespace) -> int:
    out = Path(args.out or Config.OUT_DIR)
    if args.synthetic:
        profile = high_demand_profile() if args.profile == "high-demand" else light_demand_profile()
        dataset = synth_dataset(profile, derive_seed(args.seed, "synth"), out / "data")
        occupancy, transactions = dataset.occupancy, dataset.transactions
    else:
        base = Path(args.data_dir or Config.DATA_DIR)
        occ, txn = base / Config.OCCUPANCY_FILE, base / Config.TRANSACTIONS_FILE
        missing = [str(p) for p in (occ, txn) if not p.exists()]
        if missing:
            raise DataFileError(f"missing input files: {', '.join(missing)}")
        columns = ColumnMap.load(args.columns)
        lot_map = load_lot_map(args.lot_map)
        occupancy = apply_lot_map(read_occupancy(str(occ), columns), lot_map)
        transactions = read_transactions(str(txn), columns)
        if lot_map:
            transactions = transactions.assign(
                lot_id=transactions["lot_id"].astype(str).map(lot_map)).dropna(subset=["lot_id"])

    lot_ids = sorted(occupancy["lot_id"].astype(str).unique())
    index = {lid: j for j, lid in enumerate(lot_ids, start=1)}
    traces = traces_by_lot(occupancy, index)
    origin = day_origin(occupancy)

    trace_rows, obs_rows = [], []
    for lid, trace in traces.items():
        frame = trace.to_frame()
        trace_rows.append(pd.DataFrame({"minute": frame["minute"], "lot_id": index[lid],
                                        "source_lot": lid, "p": frame["p"]}))
        stream = connected_stream(trace, transactions, lid, args.adoption,
                                  derive_seed(args.seed, "connected", lid, args.adoption, 0), origin)
        obs_rows.append(stream.to_frame().assign(source_lot=lid))
    write_csv(round_frame(pd.concat(trace_rows, ignore_index=True)), out / "traces.csv")
    write_csv(round_frame(pd.concat(obs_rows, ignore_index=True)), out / "observations.csv")
    _emit({"lots": index, "adoption": args.adoption, "origin": origin.isoformat(),
           "files": ["traces.csv", "observations.csv"]}, args, "ingest")
    return 0


def cmd_simulate(args: argparse.Namespace) -> int:
    if args.site:
        site = SITES[args.site](seeds=args.seeds or 5, master_seed=args.seed)
    elif args.config:
        site = load_scenario(args.config, args.seed)
    else:
        raise ConfigError("simulate needs --config with a scenario file or --site")
    batch = run_batch(site.scenario, seeds=args.seeds, workers=args.workers)
    out = Path(args.out or Config.OUT_DIR)
    episodes = round_frame(batch.episodes)
    table = round_frame(batch.aggregate)
    write_csv(episodes, out / f"{site.scenario.name}_episodes.csv")
    write_csv(table, out / f"{site.scenario.name}_aggregate.csv")
    _emit({
        "scenario": site.scenario.name,
        "episodes": len(episodes),
        "means": {f"{row.policy}@{row.adoption:g}": row.mean for row in table.itertuples()},
    }, args, "simulate")
    return 0


def cmd_compare(args: argparse.Namespace) -> int:
    if args.results:
        try:
            results = pd.read_csv(args.results)
        except (OSError, pd.errors.ParserError) as e:
            raise DataFileError(f"cannot read results file {args.results}: {e}")
        results = results[~results["policy"].astype(str).str.endswith("-oracle")]
    elif args.mean:
        results = dict(args.mean)
    else:
        raise ConfigError("compare needs --results or at least one --mean policy=minutes")
    table = round_frame(compare_modes(results, args.time_to_drive, args.transit_time))
    if args.out:
        write_csv(table, Path(args.out) / "compare.csv")
    _emit({"rows": table.to_dict(orient="records")}, args, "compare")
    return 0


def cmd_preset(args: argparse.Namespace) -> int:
    spec = ExperimentPreset(
        name=args.name,
        parameters=dict(args.param or []),
        master_seed=args.seed,
        synthetic=args.synthetic,
        data_dir=args.data_dir,
        scenario_path=args.config,
        include_metrics=args.metrics,
        workers=args.workers,
    )
    out = Path(args.out or Config.OUT_DIR) / args.name
    outcome = run_preset(spec, out)
    sys.stdout.write(dumps_json(outcome.summary))
    return 0


def cmd_validate(args: argparse.Namespace) -> int:
    path = args.path or args.config
    if not path:
        raise ConfigError("validate needs a file path")
    report = validate_config(path)
    sys.stdout.write(dumps_json(report.as_dict()))
    return 0 if report.valid else 2


# --- parser ---

def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="park-sim", description="Parking-lot selection under uncertain availability")
    parser.add_argument("--config", help="Network or scenario YAML file")
    parser.add_argument("--seed", type=int, default=Config.MASTER_SEED, help="Master seed")
    parser.add_argument("--out", help="Output directory")
    parser.add_argument("--synthetic", action="store_true", help="Use built-in sites or generated data")
    parser.add_argument("--workers", type=int, default=None, help="Process pool size")
    parser.add_argument("--verbose", "-v", action="store_true", help="Debug logging")
    parser.add_argument("--metrics", action="store_true", help="Include a metrics snapshot in the output")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("closed-form", help="Patient values, optimal policy and sensitivity")
    p.add_argument("--convention", default=WaitConvention.CHARGE_FIRST_FLIP.value,
                   choices=[c.value for c in WaitConvention])
    p.add_argument("--cluster", nargs="+", help="Lots forming a cluster")
    p.set_defaults(func=cmd_closed_form)

    p = sub.add_parser("cascade", help="Cascade closed form against its oracle")
    p.add_argument("--case", required=True, choices=[c.value for c in CascadeCase])
    p.add_argument("--probs", type=_floats, required=True, help="Comma-separated probabilities")
    p.add_argument("--n", type=int, help="Flips at lot 1 for the first order")
    p.add_argument("--samples", type=int, default=1_000_000)
    p.set_defaults(func=cmd_cascade)

    p = sub.add_parser("observe-error", help="Observation-error laws against the renewal oracle")
    p.add_argument("--law", choices=["linear", "exponential"], required=True)
    p.add_argument("--m", type=float, default=0.01, help="Slope of the linear law")
    p.add_argument("--b", type=float, default=1.0, help="Exponent of the exponential law")
    p.add_argument("--lambda", dest="lam", type=float, default=20.0)
    p.add_argument("--r", type=float, default=0.2)
    p.add_argument("--unit", choices=[u.value for u in RateUnit], default=RateUnit.PER_HOUR.value)
    p.add_argument("--draws", type=int, default=100_000)
    p.add_argument("--p-true", type=float)
    p.add_argument("--p-obs", type=float)
    p.add_argument("--lot", type=int, default=1)
    p.set_defaults(func=cmd_observe_error)

    p = sub.add_parser("random-walk", help="Hold-last MAE over bounded random walks")
    p.add_argument("--lambdas", type=_floats, default=[20.0])
    p.add_argument("--adoptions", type=_floats, default=[0.2])
    p.add_argument("--seeds", type=int, default=100)
    p.add_argument("--start", type=float, default=0.5)
    p.add_argument("--minutes", type=int, default=720)
    p.set_defaults(func=cmd_random_walk)

    p = sub.add_parser("ingest", help="Occupancy and transactions to traces and observations")
    p.add_argument("--data-dir")
    p.add_argument("--columns", help="YAML column map")
    p.add_argument("--lot-map", help="YAML lot map")
    p.add_argument("--adoption", type=float, default=0.2)
    p.add_argument("--profile", choices=["high-demand", "light-demand"], default="high-demand")
    p.set_defaults(func=cmd_ingest)

    p = sub.add_parser("simulate", help="Run a batch of episodes")
    p.add_argument("--site", choices=sorted(SITES))
    p.add_argument("--seeds", type=int)
    p.set_defaults(func=cmd_simulate)

    p = sub.add_parser("compare", help="Gaps against time-to-drive and transit")
    p.add_argument("--results", help="Aggregate CSV from simulate")
    p.add_argument("--mean", type=_param, action="append", help="policy=minutes")
    p.add_argument("--time-to-drive", type=float, default=Config.TIME_TO_DRIVE_DENSE)
    p.add_argument("--transit-time", type=float, default=Config.TRANSIT_TIME)
    p.set_defaults(func=cmd_compare)

    p = sub.add_parser("preset", help="Run a named experiment preset")
    p.add_argument("name", choices=preset_names())
    p.add_argument("--param", type=_param, action="append", help="Override as key=value (YAML value)")
    p.add_argument("--data-dir")
    p.set_defaults(func=cmd_preset)

    p = sub.add_parser("validate", help="Check a network or scenario file")
    p.add_argument("path", nargs="?")
    p.set_defaults(func=cmd_validate)
    return parser


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    configure_logging("DEBUG" if args.verbose else None)
    set_run_id(f"{args.command}:{args.seed}")
    try:
        return args.func(args)
    except ParkSimError as e:
        logger.error(f"{args.command} failed: {e}")
        sys.stderr.write(f"error: {e}\n")
        return 2
    except Exception as e:
        logger.exception(f"Unexpected error in {args.command}: {e}")
        return 1


if __name__ == "__main__":
    sys.exit(main())

"""Command-line entry point: ``arvaseek <command> ...``."""

from __future__ import annotations

import argparse
import json
import logging
import sys
from pathlib import Path

import numpy as np

from .metrics import Metrics, RunLog, compute_metrics
from .optimum import planar_optimum, worst_case_orientation
from .runner import NumericDivergenceError, oracle, run, sweep
from .scenario import InvalidScenarioError, Scenario

EXIT_OK = 0
EXIT_INVALID = 2
EXIT_DIVERGED = 3

log = logging.getLogger("arvaseek")


def _load(path: str | None, **overrides) -> Scenario:
    sc = Scenario.load(path) if path else Scenario.default()
    ov = {k: v for k, v in overrides.items() if v is not None}
    return sc.with_overrides(ov) if ov else sc


def cmd_simulate(args) -> int:
    sc = _load(args.scenario, seed=args.seed, duration=args.duration)
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    runlog, metrics = run(sc)
    runlog.to_csv(out / "log.csv")
    metrics.save(out / "metrics.json")
    sc.save(out / "scenario.json")
    print(json.dumps(metrics.to_dict(), indent=2))
    return EXIT_OK


def cmd_oracle(args) -> int:
    sc = _load(args.scenario)
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    rows = oracle(sc)
    np.savetxt(out / "oracle.csv", rows, delimiter=",", fmt="%.9g",
               header="t,x,y,alpha,dist_opt", comments="")
    print(f"final distance to p*: {rows[-1, 4]:.6f} m")
    return EXIT_OK


def cmd_optimum(args) -> int:
    sc = _load(args.scenario)
    p_star = planar_optimum(sc.transmitter)
    proj = sc.transmitter.projection
    print(json.dumps({"p_star": p_star[:2].tolist(), "p_t_proj": proj[:2].tolist(),
                      "offset": float(np.linalg.norm(p_star - proj))}, indent=2))
    return EXIT_OK


def cmd_worst_case(args) -> int:
    R, offset = worst_case_orientation(args.dt)
    print(json.dumps({"axis_plane": R[:, 0].tolist(), "R_pt": R.tolist(),
                      "offset": offset}, indent=2))
    return EXIT_OK


def cmd_sweep(args) -> int:
    base = _load(args.scenario)
    overrides = json.loads(Path(args.overrides).read_text())
    if not isinstance(overrides, list):
        raise InvalidScenarioError("overrides file must hold a JSON list of objects")
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    results = sweep(base, overrides, workers=args.workers)
    rows = []
    for ov, res in zip(overrides, results):
        if isinstance(res, Metrics):
            rows.append({"overrides": ov, "metrics": res.to_dict()})
        else:
            rows.append({"overrides": ov, "error": f"{type(res).__name__}: {res}"})
    (out / "sweep.json").write_text(json.dumps(rows, indent=2) + "\n")
    print(json.dumps(rows, indent=2))
    return EXIT_OK


def cmd_metrics(args) -> int:
    path = Path(args.log)
    runlog = RunLog.from_csv(path)
    scenario_path = args.scenario or path.with_name("scenario.json")
    sc = Scenario.load(scenario_path)
    metrics = compute_metrics(runlog, planar_optimum(sc.transmitter), sc.es.omega)
    print(json.dumps(metrics.to_dict(), indent=2))
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="arvaseek", description=__doc__)
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("simulate", help="run one closed-loop simulation")
    p.add_argument("--scenario")
    p.add_argument("--seed", type=int)
    p.add_argument("--out", default="out")
    p.add_argument("--duration", type=float)
    p.set_defaults(func=cmd_simulate)

    p = sub.add_parser("oracle", help="integrate the average gradient flow")
    p.add_argument("--scenario")
    p.add_argument("--out", default="out")
    p.set_defaults(func=cmd_oracle)

    p = sub.add_parser("optimum", help="print p*, the transmitter projection and their offset")
    p.add_argument("--scenario")
    p.set_defaults(func=cmd_optimum)

    p = sub.add_parser("worst-case", help="orientation maximising the p* offset")
    p.add_argument("--dt", type=float, required=True, help="transmitter depth below the plane [m]")
    p.set_defaults(func=cmd_worst_case)

    p = sub.add_parser("sweep", help="run a list of scenario overrides")
    p.add_argument("--scenario")
    p.add_argument("--overrides", required=True)
    p.add_argument("--out", default="out")
    p.add_argument("--workers", type=int, default=1)
    p.set_defaults(func=cmd_sweep)

    p = sub.add_parser("metrics", help="recompute metrics from a log CSV")
    p.add_argument("--log", required=True)
    p.add_argument("--scenario", help="defaults to scenario.json next to the log")
    p.set_defaults(func=cmd_metrics)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    try:
        return args.func(args)
    except InvalidScenarioError as exc:
        log.error("invalid scenario: %s", exc)
        return EXIT_INVALID
    except NumericDivergenceError as exc:
        log.error("numeric divergence: %s", exc)
        return EXIT_DIVERGED


if __name__ == "__main__":
    sys.exit(main())

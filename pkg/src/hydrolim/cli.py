"""Batch entry point: run / sweep / check / besov.

Exit codes: 0 success, 1 usage or configuration error, 2 numerical
divergence. All outputs land under the configured output directory; reruns
with the same config and seed produce byte-identical CSV files.
"""

from __future__ import annotations

import argparse
import json
import sys
import time
from pathlib import Path

from .checks import run_all_checks
from .config import ConfigError, RunConfig, load_run_config, load_sweep_config
from .diagnostics import DiagnosticsRecord, convergence_study
from .initdata import make_initial
from .lp import besov_norm
from .snapshot import SnapshotFormatError, read_snapshot, write_snapshot
from .solvers import DivergedError, InadmissibleDataError, SystemKind, run

EXIT_OK = 0
EXIT_CONFIG = 1
EXIT_DIVERGED = 2


def _write_diagnostics_csv(path: Path, diagnostics) -> None:
    lines = [",".join(DiagnosticsRecord.CSV_COLUMNS)]
    lines.extend(rec.csv_row() for rec in diagnostics)
    path.write_text("\n".join(lines) + "\n")


def _write_summary(path: Path, traj, cfg_hash: str, wall: float, system) -> None:
    last = traj.diagnostics[-1]
    summary = {
        "config_hash": cfg_hash,
        "system": system.kind.value,
        "epsilon": system.epsilon,
        "probes": len(traj.times),
        "t_final": traj.times[-1],
        "terminal": {c: getattr(last, c) for c in DiagnosticsRecord.CSV_COLUMNS},
        "wall_time_s": wall,
    }
    path.write_text(json.dumps(summary, indent=2, sort_keys=True) + "\n")


def _snapshot_sink(outdir: Path):
    snapdir = outdir / "snapshots"
    snapdir.mkdir(parents=True, exist_ok=True)

    def sink(step: int, state) -> None:
        for name, field in (("v1", state.v1), ("v2", state.v2), ("w", state.w)):
            write_snapshot(snapdir / f"step_{step:06d}_{name}.peqs", field)

    return sink


def _execute_run(cfg: RunConfig, outdir: Path) -> int:
    system = cfg.system
    state = make_initial(cfg.init, cfg.grid)
    outdir.mkdir(parents=True, exist_ok=True)
    sink = _snapshot_sink(outdir) if cfg.probes.snapshot_every else None
    start = time.perf_counter()
    traj = run(
        state,
        system,
        cfg.solver,
        cfg.probes,
        alpha_limit=cfg.init.alpha,
        snapshot_sink=sink,
    )
    wall = time.perf_counter() - start
    _write_diagnostics_csv(outdir / "diagnostics.csv", traj.diagnostics)
    _write_summary(outdir / "summary.json", traj, cfg.config_hash(), wall, system)
    return EXIT_OK


def cmd_run(args) -> int:
    try:
        cfg = load_run_config(args.config)
        return _execute_run(cfg, Path(cfg.output_dir))
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except InadmissibleDataError as exc:
        print(f"inadmissible data: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except DivergedError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_DIVERGED


def cmd_sweep(args) -> int:
    try:
        scfg = load_sweep_config(args.config)
        base = scfg.base
        root = Path(base.output_dir)
        root.mkdir(parents=True, exist_ok=True)

        def hook(label: str, traj) -> None:
            subdir = root / label
            subdir.mkdir(parents=True, exist_ok=True)
            _write_diagnostics_csv(subdir / "diagnostics.csv", traj.diagnostics)

        report = convergence_study(
            base.grid,
            base.init,
            base.solver,
            scfg.epsilons,
            scfg.coupling,
            probes=base.probes,
            run_hook=hook,
            workers=scfg.workers,
        )
        doc = report.to_json_dict()
        doc["config_hash"] = scfg.config_hash()
        (root / "convergence_report.json").write_text(
            json.dumps(doc, indent=2, sort_keys=True) + "\n"
        )
        print(
            f"slope = {report.slope:.4f}, slope_pdz = {report.slope_pdz:.4f} "
            f"over epsilons {report.epsilons}"
        )
        return EXIT_OK
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except (ValueError, InadmissibleDataError) as exc:
        print(f"sweep error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except DivergedError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_DIVERGED


def cmd_check(args) -> int:
    results = run_all_checks(seed=args.seed)
    width = max(len(r.name) for r in results)
    failures = 0
    for r in results:
        status = "PASS" if r.passed else "FAIL"
        failures += 0 if r.passed else 1
        tol = f"{r.tolerance:.1e}" if r.tolerance else "exact"
        line = f"[{status}] {r.name:<{width}}  measured={r.measured:<12.3e} tol={tol}"
        if r.detail:
            line += f"  ({r.detail})"
        print(line)
    print(f"{len(results) - failures}/{len(results)} checks passed")
    return EXIT_OK if failures == 0 else EXIT_CONFIG


def cmd_besov(args) -> int:
    try:
        field = read_snapshot(args.field)
    except (SnapshotFormatError, OSError) as exc:
        print(f"snapshot error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    try:
        rec = besov_norm(field, args.s)
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    print(
        json.dumps(
            {"s": rec.s, "value": rec.value, "blocks": [[j, c] for j, c in rec.per_block]}
        )
    )
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="hydrolim",
        description="Pseudo-spectral thin-layer solver and Besov diagnostics",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p_run = sub.add_parser("run", help="execute one run from a JSON config")
    p_run.add_argument("--config", required=True, help="path to the run config")
    p_run.set_defaults(func=cmd_run)

    p_sweep = sub.add_parser("sweep", help="convergence sweep over epsilon")
    p_sweep.add_argument("--config", required=True, help="path to the sweep config")
    p_sweep.set_defaults(func=cmd_sweep)

    p_check = sub.add_parser("check", help="run the invariant battery")
    p_check.add_argument("--seed", type=int, default=0)
    p_check.set_defaults(func=cmd_check)

    p_besov = sub.add_parser("besov", help="Besov norm of a field snapshot")
    p_besov.add_argument("--field", required=True, help="PEQS1 snapshot path")
    p_besov.add_argument("--s", type=float, required=True, help="regularity index")
    p_besov.set_defaults(func=cmd_besov)

    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    return args.func(args)


if __name__ == "__main__":
    sys.exit(main())

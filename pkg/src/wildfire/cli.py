"""Command-line entry point: ``fire <N> <p> <threads>`` plus flags.

Modes: a scenario run (default), ``--bench`` for the strong-scaling benchmark
(including a numba-vs-numpy kernel comparison), and ``--mms`` for the
manufactured-solution time-step sweep.
"""

from __future__ import annotations

import os
import sys

from .config import ScenarioConfig, parse_cli
from .errors import ConfigurationError, FormatError


def _run(cfg: ScenarioConfig) -> int:
    from .run import run_simulation

    state = run_simulation(cfg, log=lambda msg: print(msg))
    if state.diverged:
        print("run diverged; snapshots up to the last finite step were written", file=sys.stderr)
        return 1
    print(f"done: {cfg.steps} steps, outputs in {cfg.out_dir}/")
    return 0


def _bench(cfg: ScenarioConfig) -> int:
    from .bench import bench_backends, bench_csv, run_bench

    rows = run_bench(cfg)
    csv = bench_csv(rows)
    os.makedirs(cfg.out_dir, exist_ok=True)
    path = os.path.join(cfg.out_dir, "bench.csv")
    with open(path, "w", encoding="ascii") as fh:
        fh.write(csv)
    print(csv, end="")
    backends = bench_backends(cfg, n_steps=min(cfg.steps, 20))
    for name, t in backends.items():
        print(f"backend {name}: median step {t * 1e3:.3f} ms")
    print(f"wrote {path}")
    return 0


def _mms(cfg: ScenarioConfig) -> int:
    from .mms import fitted_order, records_to_csv, records_to_plot_data, run_sweep

    records = run_sweep(
        meshes=cfg.mms_meshes,
        degree=cfg.degree,
        progress=lambda r: print(
            f"{r.scheme:10s} mesh={r.mesh:4d} dt={r.dt:<12g} "
            + ("diverged" if r.diverged else f"err_max={r.error_max:.4e}")
        ),
    )
    os.makedirs(cfg.out_dir, exist_ok=True)
    csv_path = os.path.join(cfg.out_dir, "mms.csv")
    with open(csv_path, "w", encoding="ascii") as fh:
        fh.write(records_to_csv(records))
    dat_path = os.path.join(cfg.out_dir, "mms_loglog.dat")
    with open(dat_path, "w", encoding="ascii") as fh:
        fh.write(records_to_plot_data(records))
    for mesh in cfg.mms_meshes:
        for scheme in ("explicit", "pr", "strang-cn"):
            try:
                order = fitted_order(records, scheme, mesh)
                print(f"observed order {scheme} mesh {mesh}: {order:.2f}")
            except ConfigurationError:
                print(f"observed order {scheme} mesh {mesh}: too few stable points")
    print(f"wrote {csv_path} and {dat_path}")
    return 0


def main(argv=None) -> int:
    try:
        cfg = parse_cli(sys.argv[1:] if argv is None else argv)
    except SystemExit as exc:  # --help
        return 0 if exc.code in (0, None) else 2
    except ConfigurationError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    try:
        if cfg.mode == "bench":
            return _bench(cfg)
        if cfg.mode == "mms":
            return _mms(cfg)
        return _run(cfg)
    except (ConfigurationError, FormatError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())

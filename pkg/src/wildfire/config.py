"""Scenario configuration: defaults, flat ``key = value`` files, CLI parsing.

Precedence is flags over config-file values over defaults. The file format is
a flat INI-like text: one ``key = value`` pair per line, ``#`` comments, wind
segments as ``wind.N = t_start t_end bx by`` lines, and model-parameter
overrides as ``params.<name> = value``. Unknown keys are rejected.
"""

from __future__ import annotations

import argparse
import dataclasses
from dataclasses import dataclass, field

from .errors import ConfigurationError
from .physics import ModelParams, WindField
from .schemes import SchemeKind

__all__ = ["IgnitionSpec", "ScenarioConfig", "parse_cli", "load_config_file", "dumps", "loads"]


@dataclass(frozen=True)
class IgnitionSpec:
    """Smooth circular ignition bump added to the ambient temperature."""

    center: tuple[float, float] = (50.0, 50.0)
    r: float = 10.0
    big_r: float = 30.0
    t0: float = 300.0
    t_comb: float = 1200.0


@dataclass
class ScenarioConfig:
    nx: int = 100
    ny: int = 100
    degree: int = 2
    domain: tuple[float, float, float, float] = (0.0, 100.0, 0.0, 100.0)
    scheme: SchemeKind = SchemeKind.PEACEMAN_RACHFORD
    dt: float = 2e-7
    steps: int = 120
    output_every: int = 30
    workers: int = 1
    params: dict = field(default_factory=dict)  # ModelParams field overrides
    wind: WindField = field(default_factory=WindField)
    ignition: IgnitionSpec = field(default_factory=IgnitionSpec)
    fuel: float | str = 1.0  # constant value or CSV path
    availability_scale: float = 0.725
    out_dir: str = "out"
    snapshot_samples: int | None = None  # default: mesh size nx
    snapshot_pgm: bool = False
    dump_coeffs: bool = False
    mode: str = "run"  # run | bench | mms
    mms_meshes: tuple[int, ...] = (50,)
    bench_workers: tuple[int, ...] = (1, 2, 4, 8)

    def model_params(self) -> ModelParams:
        try:
            return ModelParams(**self.params)
        except TypeError as exc:
            raise ConfigurationError(f"unknown model parameter override: {exc}") from None

    def validate(self) -> "ScenarioConfig":
        if self.degree < 1:
            raise ConfigurationError(f"degree must be >= 1, got {self.degree}")
        if self.nx < 1 or self.ny < 1:
            raise ConfigurationError(f"mesh sizes must be >= 1, got {self.nx} x {self.ny}")
        ax, bx, ay, by = self.domain
        if not (ax < bx and ay < by):
            raise ConfigurationError(f"invalid domain rectangle {self.domain}")
        if self.dt <= 0:
            raise ConfigurationError(f"time step must be positive, got {self.dt}")
        if self.steps < 0:
            raise ConfigurationError(f"step count must be nonnegative, got {self.steps}")
        if self.output_every < 1:
            raise ConfigurationError(f"output period must be >= 1, got {self.output_every}")
        if self.workers < 1:
            raise ConfigurationError(f"worker count must be >= 1, got {self.workers}")
        if isinstance(self.fuel, float) and not 0.0 <= self.fuel <= 1.0:
            raise ConfigurationError(f"constant fuel must lie in [0, 1], got {self.fuel}")
        if self.mode not in ("run", "bench", "mms"):
            raise ConfigurationError(f"unknown mode {self.mode!r}")
        self.model_params()  # raises on bad overrides
        return self


def _parse_fuel(text: str):
    try:
        return float(text)
    except ValueError:
        return text  # CSV path


_SCALAR_KEYS = {
    "degree": ("degree", int),
    "dt": ("dt", float),
    "steps": ("steps", int),
    "output_every": ("output_every", int),
    "workers": ("workers", int),
    "availability_scale": ("availability_scale", float),
    "out_dir": ("out_dir", str),
    "snapshot_samples": ("snapshot_samples", int),
    "snapshot_pgm": ("snapshot_pgm", lambda s: s.lower() in ("1", "true", "yes")),
    "dump_coeffs": ("dump_coeffs", lambda s: s.lower() in ("1", "true", "yes")),
    "fuel": ("fuel", _parse_fuel),
    "mode": ("mode", str),
}


def loads(text: str, base: ScenarioConfig | None = None) -> ScenarioConfig:
    """Parse config text on top of ``base`` (or the defaults)."""
    cfg = dataclasses.replace(base) if base is not None else ScenarioConfig()
    cfg.params = dict(cfg.params)
    wind_segments: dict[int, tuple] = {}
    ignition = dict(
        center=cfg.ignition.center, r=cfg.ignition.r, big_r=cfg.ignition.big_r,
        t0=cfg.ignition.t0, t_comb=cfg.ignition.t_comb,
    )
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ConfigurationError(f"line {lineno}: expected 'key = value', got {raw!r}")
        key, value = (part.strip() for part in line.split("=", 1))
        try:
            if key == "mesh":
                parts = value.split()
                if len(parts) == 1:
                    cfg.nx = cfg.ny = int(parts[0])
                elif len(parts) == 2:
                    cfg.nx, cfg.ny = int(parts[0]), int(parts[1])
                else:
                    raise ValueError("mesh takes one or two integers")
            elif key == "domain":
                ax, bx, ay, by = (float(v) for v in value.split())
                cfg.domain = (ax, bx, ay, by)
            elif key == "scheme":
                cfg.scheme = SchemeKind.parse(value)
            elif key == "mms_meshes":
                cfg.mms_meshes = tuple(int(v) for v in value.replace(",", " ").split())
            elif key == "bench_workers":
                cfg.bench_workers = tuple(int(v) for v in value.replace(",", " ").split())
            elif key in _SCALAR_KEYS:
                attr, conv = _SCALAR_KEYS[key]
                setattr(cfg, attr, conv(value))
            elif key.startswith("params."):
                cfg.params[key[len("params."):]] = float(value)
            elif key.startswith("wind."):
                idx = int(key[len("wind."):])
                t0, t1, bx, by = (float(v) for v in value.split())
                wind_segments[idx] = (t0, t1, bx, by)
            elif key == "ignition.center":
                cx, cy = (float(v) for v in value.split())
                ignition["center"] = (cx, cy)
            elif key in ("ignition.r", "ignition.R", "ignition.t0", "ignition.t_comb"):
                name = {"ignition.r": "r", "ignition.R": "big_r",
                        "ignition.t0": "t0", "ignition.t_comb": "t_comb"}[key]
                ignition[name] = float(value)
            else:
                raise ConfigurationError(f"line {lineno}: unknown key {key!r}")
        except ConfigurationError:
            raise
        except (ValueError, TypeError) as exc:
            raise ConfigurationError(f"line {lineno}: bad value for {key!r}: {exc}") from None
    if wind_segments:
        cfg.wind = WindField.from_segments([wind_segments[i] for i in sorted(wind_segments)])
    cfg.ignition = IgnitionSpec(**ignition)
    return cfg


def load_config_file(path: str, base: ScenarioConfig | None = None) -> ScenarioConfig:
    try:
        with open(path, "r", encoding="utf-8") as fh:
            text = fh.read()
    except OSError as exc:
        raise ConfigurationError(f"cannot read config file {path}: {exc}") from None
    try:
        return loads(text, base)
    except ConfigurationError as exc:
        raise ConfigurationError(f"{path}: {exc}") from None


def dumps(cfg: ScenarioConfig) -> str:
    """Serialize; ``loads(dumps(cfg))`` reproduces the config exactly."""
    lines = [
        f"mode = {cfg.mode}",
        f"mesh = {cfg.nx} {cfg.ny}",
        f"degree = {cfg.degree}",
        "domain = " + " ".join(repr(v) for v in cfg.domain),
        f"scheme = {cfg.scheme.value}",
        f"dt = {cfg.dt!r}",
        f"steps = {cfg.steps}",
        f"output_every = {cfg.output_every}",
        f"workers = {cfg.workers}",
        f"fuel = {cfg.fuel!r}" if isinstance(cfg.fuel, float) else f"fuel = {cfg.fuel}",
        f"availability_scale = {cfg.availability_scale!r}",
        f"out_dir = {cfg.out_dir}",
        f"snapshot_pgm = {str(cfg.snapshot_pgm).lower()}",
        f"dump_coeffs = {str(cfg.dump_coeffs).lower()}",
        f"ignition.center = {cfg.ignition.center[0]!r} {cfg.ignition.center[1]!r}",
        f"ignition.r = {cfg.ignition.r!r}",
        f"ignition.R = {cfg.ignition.big_r!r}",
        f"ignition.t0 = {cfg.ignition.t0!r}",
        f"ignition.t_comb = {cfg.ignition.t_comb!r}",
        "mms_meshes = " + " ".join(str(m) for m in cfg.mms_meshes),
        "bench_workers = " + " ".join(str(w) for w in cfg.bench_workers),
    ]
    if cfg.snapshot_samples is not None:
        lines.append(f"snapshot_samples = {cfg.snapshot_samples}")
    for name, value in sorted(cfg.params.items()):
        lines.append(f"params.{name} = {value!r}")
    for i, (t0, t1, bx, by) in enumerate(cfg.wind.segments):
        lines.append(f"wind.{i} = {t0!r} {t1!r} {bx!r} {by!r}")
    return "\n".join(lines) + "\n"


def _build_argparser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(
        prog="fire",
        description="Wildfire spread simulator (B-spline finite elements, "
        "alternating-direction quasi-implicit time stepping).",
    )
    ap.add_argument("N", nargs="?", type=int, help="mesh size in each dimension")
    ap.add_argument("p", nargs="?", type=int, help="B-spline degree")
    ap.add_argument("threads", nargs="?", type=int, help="number of worker threads")
    ap.add_argument("--config", metavar="FILE", help="scenario config file")
    ap.add_argument("--scheme", help="time integrator: explicit | pr | strang-cn")
    ap.add_argument("--dt", type=float, help="time step")
    ap.add_argument("--steps", type=int, help="number of time steps")
    ap.add_argument("--fuel", help="constant fuel value or fuel-map CSV path")
    ap.add_argument("--out-dir", help="output directory")
    ap.add_argument("--output-every", type=int, help="snapshot period in steps")
    ap.add_argument("--bench", action="store_true", help="run the scaling benchmark")
    ap.add_argument("--mms", action="store_true",
                    help="run the manufactured-solution time-step sweep")
    ap.add_argument("--mms-meshes", help="comma-separated mesh sizes for --mms")
    ap.add_argument("--dump-coeffs", action="store_true",
                    help="also write raw coefficient snapshots for exact restart")
    return ap


def parse_cli(argv) -> ScenarioConfig:
    """CLI entry: positional ``fire N p threads`` plus overriding flags."""
    ap = _build_argparser()
    try:
        ns = ap.parse_args(argv)
    except SystemExit as exc:
        if exc.code not in (0, None):
            raise ConfigurationError("invalid command line") from None
        raise
    cfg = ScenarioConfig()
    if ns.config:
        cfg = load_config_file(ns.config, cfg)
    if ns.N is not None:
        cfg.nx = cfg.ny = ns.N
    if ns.p is not None:
        cfg.degree = ns.p
    if ns.threads is not None:
        cfg.workers = ns.threads
    if ns.scheme is not None:
        cfg.scheme = SchemeKind.parse(ns.scheme)
    if ns.dt is not None:
        cfg.dt = ns.dt
    if ns.steps is not None:
        cfg.steps = ns.steps
    if ns.fuel is not None:
        cfg.fuel = _parse_fuel(ns.fuel)
    if ns.out_dir is not None:
        cfg.out_dir = ns.out_dir
    if ns.output_every is not None:
        cfg.output_every = ns.output_every
    if ns.dump_coeffs:
        cfg.dump_coeffs = True
    if ns.bench and ns.mms:
        raise ConfigurationError("--bench and --mms are mutually exclusive")
    if ns.bench:
        cfg.mode = "bench"
        if ns.threads is not None:
            # strong-scaling convention: powers of two up to the thread count
            counts = []
            w = 1
            while w < ns.threads:
                counts.append(w)
                w *= 2
            counts.append(ns.threads)
            cfg.bench_workers = tuple(counts)
    elif ns.mms:
        cfg.mode = "mms"
        if ns.N is not None and not ns.mms_meshes:
            cfg.mms_meshes = (ns.N,)
    if ns.mms_meshes:
        cfg.mms_meshes = tuple(int(v) for v in ns.mms_meshes.replace(",", " ").split())
    return cfg.validate()

"""Experiment orchestration: config files, seeded sweeps, CSV persistence.

A sweep runs every (trial, snr, L, algorithm) cell on its own derived seed;
the channel seed depends only on (trial, snr, L), so algorithms within a
cell see identical instances and paired comparisons are meaningful. Rows
are emitted in sorted order regardless of execution order, and the CSV
bytes are independent of the worker count. Measured wall times stay on the
in-memory rows; the CSV carries zeros in the timing column unless timing
output is explicitly requested, since real timings would break the
byte-determinism contract of the output file.
"""

import concurrent.futures
import json
import math
import os
from dataclasses import asdict, dataclass, field, fields

import numpy as np

from .ao import AoOptions
from .channel import ChannelConfig, sample_network
from .dispatch import ALGORITHMS, solve_instance
from .model import SystemDims
from .pdd import PddOptions
from .rng import mix_seed
from .sparse import SparseOptions

__all__ = [
    "ExperimentConfig",
    "ResultRow",
    "load_config",
    "parse_config",
    "serialize_config",
    "run_sweep",
    "summarize",
    "write_csv",
    "rows_to_csv",
]

CSV_SCHEMA = "v1"
CSV_HEADER = (
    "schema,trial,seed,algorithm,N,K,L,snr_db,error_db,status,"
    "iters_outer,iters_inner_total,wall_ms"
)


@dataclass(frozen=True)
class ExperimentConfig:
    """Everything a sweep needs; unspecified fields take these defaults."""

    n_antennas: int = 128
    n_devices: int = 50
    channel: ChannelConfig = field(default_factory=ChannelConfig)
    snr_grid_db: tuple = (10.0,)
    l_grid: tuple = (16,)
    algorithms: tuple = ("pdd", "lasso", "fista", "random", "greedy", "all")
    trials: int = 1
    seed: int = 0
    power_limit: float = 1.0
    pdd: PddOptions = field(default_factory=PddOptions)
    sparse: SparseOptions = field(default_factory=SparseOptions)
    ao: AoOptions = field(default_factory=AoOptions)
    flsim: dict = field(
        default_factory=lambda: {
            "rounds": 50,
            "dim": 8,
            "mu": 1.0,
            "l_lip": 4.0,
            "coherence_rounds": 5,
            "n_fl_devices": 5,
            "gamma": None,
        }
    )
    output_path: str | None = None

    def __post_init__(self):
        if self.trials < 1:
            raise ValueError("trials must be >= 1")
        if not self.snr_grid_db or not self.l_grid:
            raise ValueError("snr_grid_db and l_grid must be non-empty")
        for l_val in self.l_grid:
            if not 1 <= l_val <= self.n_antennas:
                raise ValueError(
                    f"l_grid entry {l_val} outside 1..N={self.n_antennas}"
                )
        for name in self.algorithms:
            if name not in ALGORITHMS:
                raise ValueError(
                    f"unknown algorithm {name!r}; choose from {ALGORITHMS}"
                )


@dataclass(frozen=True)
class ResultRow:
    """One solve outcome; ``wall_ms`` is measured and excluded from CSV
    determinism."""

    trial: int
    seed: int
    algorithm: str
    n: int
    k: int
    l: int
    snr_db: float
    error_db: float
    status: str
    iters_outer: int
    iters_inner_total: int
    wall_ms: float


# ---------------------------------------------------------------------------
# Config parsing
# ---------------------------------------------------------------------------


def _build_options(cls, data, context):
    known = {f.name: f for f in fields(cls)}
    kwargs = {}
    for key, value in data.items():
        if key not in known:
            raise ValueError(f"unknown key {key!r} in {context}")
        if key in ("inner", "refine") and isinstance(value, dict):
            value = _build_options(AoOptions, value, f"{context}.{key}")
        if key in ("eta_grid",) and value is not None:
            value = tuple(value)
        kwargs[key] = value
    return cls(**kwargs)


def parse_config(data):
    """Build an ExperimentConfig from a parsed JSON object."""
    if not isinstance(data, dict):
        raise ValueError("config root must be an object")
    known = {
        "dims",
        "channel",
        "snr_grid_db",
        "l_grid",
        "algorithms",
        "trials",
        "seed",
        "power_limit",
        "options",
        "flsim",
        "output_path",
    }
    for key in data:
        if key not in known:
            raise ValueError(f"unknown key {key!r} in config")
    kwargs = {}
    dims = data.get("dims", {})
    for key in dims:
        if key not in ("n", "k"):
            raise ValueError(f"unknown key {key!r} in dims")
    if "n" in dims:
        kwargs["n_antennas"] = int(dims["n"])
    if "k" in dims:
        kwargs["n_devices"] = int(dims["k"])
    if "channel" in data:
        chan = dict(data["channel"])
        if "angular_spread_deg" in chan:
            chan["angular_spread_deg"] = tuple(chan["angular_spread_deg"])
        kwargs["channel"] = _build_options(ChannelConfig, chan, "channel")
    if "snr_grid_db" in data:
        kwargs["snr_grid_db"] = tuple(float(x) for x in data["snr_grid_db"])
    if "l_grid" in data:
        kwargs["l_grid"] = tuple(int(x) for x in data["l_grid"])
    if "algorithms" in data:
        kwargs["algorithms"] = tuple(data["algorithms"])
    for key in ("trials", "seed"):
        if key in data:
            kwargs[key] = int(data[key])
    if "power_limit" in data:
        kwargs["power_limit"] = float(data["power_limit"])
    options = data.get("options", {})
    for key in options:
        if key not in ("pdd", "sparse", "ao"):
            raise ValueError(f"unknown key {key!r} in options")
    if "pdd" in options:
        kwargs["pdd"] = _build_options(PddOptions, options["pdd"], "options.pdd")
    if "sparse" in options:
        kwargs["sparse"] = _build_options(
            SparseOptions, options["sparse"], "options.sparse"
        )
    if "ao" in options:
        kwargs["ao"] = _build_options(AoOptions, options["ao"], "options.ao")
    if "flsim" in data:
        base = ExperimentConfig().flsim
        for key in data["flsim"]:
            if key not in base:
                raise ValueError(f"unknown key {key!r} in flsim")
        base.update(data["flsim"])
        kwargs["flsim"] = base
    if "output_path" in data:
        kwargs["output_path"] = data["output_path"]
    return ExperimentConfig(**kwargs)


def load_config(path):
    """Parse and validate a JSON config file."""
    with open(path, "r", encoding="utf-8") as fh:
        text = fh.read()
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ValueError(f"config parse error at line {exc.lineno}: {exc.msg}")
    return parse_config(data)


def serialize_config(cfg):
    """JSON text that parses back to an identical config."""
    data = {
        "dims": {"n": cfg.n_antennas, "k": cfg.n_devices},
        "channel": asdict(cfg.channel),
        "snr_grid_db": list(cfg.snr_grid_db),
        "l_grid": list(cfg.l_grid),
        "algorithms": list(cfg.algorithms),
        "trials": cfg.trials,
        "seed": cfg.seed,
        "power_limit": cfg.power_limit,
        "options": {
            "pdd": asdict(cfg.pdd),
            "sparse": asdict(cfg.sparse),
            "ao": asdict(cfg.ao),
        },
        "flsim": cfg.flsim,
        "output_path": cfg.output_path,
    }
    data["channel"]["angular_spread_deg"] = list(
        data["channel"]["angular_spread_deg"]
    )
    sparse = data["options"]["sparse"]
    if sparse["eta_grid"] is not None:
        sparse["eta_grid"] = list(sparse["eta_grid"])
    return json.dumps(data, indent=2)


# ---------------------------------------------------------------------------
# Sweep execution
# ---------------------------------------------------------------------------


def _default_threads():
    env = os.environ.get("AIRSEL_THREADS")
    if env:
        return max(1, int(env))
    return os.cpu_count() or 1


def _run_cell(cfg, trial, snr_idx, l_idx, algorithm):
    snr_db = cfg.snr_grid_db[snr_idx]
    l_val = cfg.l_grid[l_idx]
    cell_seed = mix_seed(cfg.seed, trial, snr_idx, l_idx)
    dims = SystemDims(cfg.n_antennas, cfg.n_devices, l_val)
    try:
        inst = sample_network(
            dims,
            cfg.channel,
            cell_seed,
            snr_db=snr_db,
            power_limit=cfg.power_limit,
        )
        report = solve_instance(
            inst,
            l_val,
            algorithm,
            seed=mix_seed(cell_seed, 3),
            pdd_opts=cfg.pdd,
            sparse_opts=cfg.sparse,
            ao_opts=cfg.ao,
        )
        return ResultRow(
            trial=trial,
            seed=cell_seed,
            algorithm=algorithm,
            n=cfg.n_antennas,
            k=cfg.n_devices,
            l=l_val,
            snr_db=snr_db,
            error_db=report.error_db,
            status="ok" if report.converged else "ok-maxiter",
            iters_outer=report.iters_outer,
            iters_inner_total=report.iters_inner_total,
            wall_ms=report.wall_ms,
        )
    except Exception as exc:  # noqa: BLE001 - a failed cell must not kill the sweep
        return ResultRow(
            trial=trial,
            seed=cell_seed,
            algorithm=algorithm,
            n=cfg.n_antennas,
            k=cfg.n_devices,
            l=l_val,
            snr_db=snr_db,
            error_db=float("nan"),
            status=f"failed:{type(exc).__name__}",
            iters_outer=0,
            iters_inner_total=0,
            wall_ms=0.0,
        )


def run_sweep(cfg, threads=None):
    """Run all cells and return rows sorted by (trial, snr, L, algorithm)."""
    cells = [
        (trial, snr_idx, l_idx, algorithm)
        for trial in range(cfg.trials)
        for snr_idx in range(len(cfg.snr_grid_db))
        for l_idx in range(len(cfg.l_grid))
        for algorithm in cfg.algorithms
    ]
    threads = threads or _default_threads()
    if threads == 1:
        rows = [_run_cell(cfg, *cell) for cell in cells]
    else:
        with concurrent.futures.ThreadPoolExecutor(max_workers=threads) as pool:
            rows = list(pool.map(lambda cell: _run_cell(cfg, *cell), cells))
    rows.sort(key=lambda r: (r.trial, r.snr_db, r.l, r.algorithm))
    return rows


# ---------------------------------------------------------------------------
# Summaries and persistence
# ---------------------------------------------------------------------------


def summarize(rows):
    """Per-(algorithm, snr, L) mean/median/stderr of error_db plus timing."""
    groups = {}
    for row in rows:
        if not math.isfinite(row.error_db):
            continue
        groups.setdefault((row.algorithm, row.snr_db, row.l), []).append(row)
    out = {}
    for key in sorted(groups):
        vals = np.array([r.error_db for r in groups[key]])
        walls = np.array([r.wall_ms for r in groups[key]])
        stderr = (
            float(vals.std(ddof=1) / math.sqrt(len(vals))) if len(vals) > 1 else 0.0
        )
        out[key] = {
            "n": len(vals),
            "mean_db": float(vals.mean()),
            "median_db": float(np.median(vals)),
            "stderr_db": stderr,
            "mean_wall_ms": float(walls.mean()),
        }
    return out


def rows_to_csv(rows, include_timing=False):
    """Render rows as CSV text (LF endings, shortest round-trip floats)."""
    lines = [CSV_HEADER]
    for r in rows:
        wall = repr(r.wall_ms) if include_timing else "0"
        lines.append(
            f"{CSV_SCHEMA},{r.trial},{r.seed},{r.algorithm},{r.n},{r.k},"
            f"{r.l},{repr(r.snr_db)},{repr(r.error_db)},{r.status},"
            f"{r.iters_outer},{r.iters_inner_total},{wall}"
        )
    return "\n".join(lines) + "\n"


def write_csv(rows, path, include_timing=False):
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(rows_to_csv(rows, include_timing=include_timing))

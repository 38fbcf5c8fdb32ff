"""Command-line front end.

Subcommands: ``solve`` (one instance), ``sweep`` (Monte-Carlo grid to CSV),
``oracle-check`` (small-instance dominance suite), ``flsim`` (federated run
to a per-round CSV), ``version``. Exit codes: 0 success, 1 usage/validation
error, 2 runtime failure.
"""

import argparse
import os
import sys

import numpy as np

from . import __version__
from .baselines import brute_force_oracle
from .channel import sample_network
from .dispatch import ALGORITHMS, solve_instance
from .flsim import make_synthetic_task, run_fl
from .harness import (
    ExperimentConfig,
    load_config,
    run_sweep,
    summarize,
    write_csv,
)
from .model import SystemDims
from .rng import mix_seed

__all__ = ["cli_main", "main"]


class _UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise _UsageError(message)


def _build_parser():
    parser = _Parser(prog="airsel", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p, need_config=False):
        p.add_argument("--config", required=need_config, help="JSON config path")
        p.add_argument("--seed", type=int, help="override the config seed")
        p.add_argument("--out", help="output path (overrides config)")
        p.add_argument("--algo", choices=ALGORITHMS, help="algorithm to run")
        p.add_argument("--trials", type=int, help="override trial count")
        p.add_argument(
            "--threads",
            type=int,
            help="parallel cells (default: AIRSEL_THREADS or all cores)",
        )
        p.add_argument(
            "--timing",
            action="store_true",
            help="write measured wall times into the CSV "
            "(breaks byte-determinism of the output)",
        )

    common(sub.add_parser("solve", help="solve one sampled instance"))
    common(sub.add_parser("sweep", help="run the Monte-Carlo sweep"), need_config=True)
    common(sub.add_parser("oracle-check", help="exhaustive dominance suite"))
    common(sub.add_parser("flsim", help="federated simulation to CSV"))
    sub.add_parser("version", help="print the package version")
    return parser


def _config_from_args(args):
    cfg = load_config(args.config) if args.config else ExperimentConfig()
    overrides = {}
    if args.seed is not None:
        overrides["seed"] = args.seed
    if args.trials is not None:
        overrides["trials"] = args.trials
    if args.algo is not None:
        overrides["algorithms"] = (args.algo,)
    if args.out is not None:
        overrides["output_path"] = args.out
    if overrides:
        from dataclasses import replace

        cfg = replace(cfg, **overrides)
    return cfg


def _cmd_solve(args):
    cfg = _config_from_args(args)
    algorithm = cfg.algorithms[0]
    l_val = cfg.l_grid[0]
    snr_db = cfg.snr_grid_db[0]
    dims = SystemDims(cfg.n_antennas, cfg.n_devices, l_val)
    inst = sample_network(
        dims, cfg.channel, cfg.seed, snr_db=snr_db, power_limit=cfg.power_limit
    )
    report = solve_instance(
        inst,
        l_val,
        algorithm,
        seed=mix_seed(cfg.seed, 3),
        pdd_opts=cfg.pdd,
        sparse_opts=cfg.sparse,
        ao_opts=cfg.ao,
    )
    selected = np.flatnonzero(report.selection.s).tolist()
    print(f"algorithm      : {report.algorithm}")
    print(f"N, K, L, SNR   : {cfg.n_antennas}, {cfg.n_devices}, {l_val}, {snr_db} dB")
    print(f"selected       : {selected}")
    print(f"error          : {report.error:.6e} ({report.error_db:.3f} dB)")
    print(f"converged      : {report.converged}")
    print(f"iterations     : outer={report.iters_outer}, "
          f"inner_total={report.iters_inner_total}")
    print(f"wall time      : {report.wall_ms:.1f} ms")
    return 0


def _cmd_sweep(args):
    cfg = _config_from_args(args)
    rows = run_sweep(cfg, threads=args.threads)
    out = cfg.output_path
    if out is None:
        raise ValueError("sweep needs an output path (--out or output_path)")
    write_csv(rows, out, include_timing=args.timing)
    stats = summarize(rows)
    for (algorithm, snr_db, l_val), st in stats.items():
        print(
            f"{algorithm:>8s}  snr={snr_db:+6.1f} dB  L={l_val:<4d} "
            f"mean={st['mean_db']:+7.3f} dB  stderr={st['stderr_db']:.3f}  "
            f"n={st['n']}"
        )
    failed = [r for r in rows if r.status.startswith("failed")]
    print(f"wrote {len(rows)} rows to {out} ({len(failed)} failed)")
    return 0


def _cmd_oracle_check(args):
    cfg = _config_from_args(args) if args.config else None
    if cfg is None:
        n, k, l_val, snr_db, power = 8, 3, 2, 10.0, 1.0
        channel = ExperimentConfig().channel
        seed = args.seed if args.seed is not None else 0
        trials = args.trials if args.trials is not None else 5
        pdd_opts = sparse_opts = ao_opts = None
    else:
        n, k = cfg.n_antennas, cfg.n_devices
        l_val, snr_db, power = cfg.l_grid[0], cfg.snr_grid_db[0], cfg.power_limit
        channel, seed, trials = cfg.channel, cfg.seed, cfg.trials
        pdd_opts, sparse_opts, ao_opts = cfg.pdd, cfg.sparse, cfg.ao
    algorithms = ("pdd", "lasso", "fista")
    worst_gap = 0.0
    ok = True
    for trial in range(trials):
        inst_seed = mix_seed(seed, trial)
        inst = sample_network(
            SystemDims(n, k, l_val), channel, inst_seed,
            snr_db=snr_db, power_limit=power,
        )
        oracle = brute_force_oracle(inst, l_val, ao_opts)
        for algorithm in algorithms:
            report = solve_instance(
                inst, l_val, algorithm, seed=mix_seed(inst_seed, 3),
                pdd_opts=pdd_opts, sparse_opts=sparse_opts, ao_opts=ao_opts,
            )
            gap_db = report.error_db - 10.0 * np.log10(oracle.best_error)
            worst_gap = max(worst_gap, gap_db)
            dominated = report.error >= oracle.best_error - 1e-9
            ok = ok and dominated
            flag = "ok" if dominated else "VIOLATION"
            print(
                f"trial {trial}  {algorithm:>6s}  error={report.error_db:+8.3f} dB"
                f"  oracle={10.0 * np.log10(oracle.best_error):+8.3f} dB"
                f"  gap={gap_db:6.3f} dB  {flag}"
            )
    print(f"worst gap over {trials} trials: {worst_gap:.3f} dB")
    print("dominance suite:", "PASS" if ok else "FAIL")
    return 0 if ok else 1


def _cmd_flsim(args):
    cfg = _config_from_args(args)
    fl = cfg.flsim
    algorithm = cfg.algorithms[0]
    l_val = cfg.l_grid[0]
    snr_db = cfg.snr_grid_db[0]
    dims = SystemDims(cfg.n_antennas, fl["n_fl_devices"], l_val)
    task = make_synthetic_task(
        fl["n_fl_devices"], fl["dim"], fl["mu"], fl["l_lip"], mix_seed(cfg.seed, 7)
    )

    def sample_inst(seed):
        return sample_network(
            dims, cfg.channel, seed, snr_db=snr_db, power_limit=cfg.power_limit
        )

    records = run_fl(
        sample_inst,
        algorithm,
        task,
        fl["rounds"],
        cfg.seed,
        gamma=fl["gamma"],
        coherence_rounds=fl["coherence_rounds"],
        l_budget=l_val,
        pdd_opts=cfg.pdd,
        sparse_opts=cfg.sparse,
        ao_opts=cfg.ao,
    )
    lines = ["round,gap,agg_error,bound_rhs"]
    for rec in records:
        lines.append(
            f"{rec.t},{repr(rec.gap)},{repr(rec.agg_error)},{repr(rec.bound_rhs)}"
        )
    text = "\n".join(lines) + "\n"
    if cfg.output_path:
        with open(cfg.output_path, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(text)
        print(f"wrote {len(records)} rounds to {cfg.output_path}")
    else:
        print(text, end="")
    final = records[-1]
    print(f"final gap after {fl['rounds']} rounds: {final.gap:.6e}")
    return 0


def cli_main(argv=None):
    """Entry point used by tests; returns the process exit status."""
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
    except _UsageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    if args.command == "version":
        print(__version__)
        return 0
    if args.threads is not None:
        os.environ["AIRSEL_THREADS"] = str(max(1, args.threads))
    try:
        if args.command == "solve":
            return _cmd_solve(args)
        if args.command == "sweep":
            return _cmd_sweep(args)
        if args.command == "oracle-check":
            return _cmd_oracle_check(args)
        if args.command == "flsim":
            return _cmd_flsim(args)
    except (ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except Exception as exc:  # noqa: BLE001 - runtime failures exit 2
        print(f"runtime failure: {type(exc).__name__}: {exc}", file=sys.stderr)
        return 2
    return 0


def main():
    raise SystemExit(cli_main())

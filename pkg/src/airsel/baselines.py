"""Reference selection policies and the exhaustive small-instance oracle.

The oracle enumerates every L-subset and evaluates each with the same
deterministic fixed-selection AO that the full solvers use for their final
refinement, so no solver can report an error below the oracle's best.
"""

import itertools
import math
import time
from dataclasses import dataclass

import numpy as np

from .ao import AoOptions, SolveReport, fixed_selection_ao
from .model import SelectionVector
from .rng import make_rng

__all__ = [
    "OracleReport",
    "random_selection",
    "greedy_selection",
    "all_antenna",
    "brute_force_oracle",
    "solve_fixed_policy",
]

# Enumeration guard: refuse instances with more subsets than this.
MAX_ORACLE_SUBSETS = 20_000


@dataclass(frozen=True)
class OracleReport:
    """Best subset, its refined error, and the full enumeration."""

    best_selection: SelectionVector
    best_error: float
    per_selection_errors: tuple


def random_selection(n, l_budget, seed):
    """Uniformly random L-subset of the N antennas."""
    rng = make_rng(seed)
    idx = rng.choice(n, size=l_budget, replace=False)
    s = np.zeros(n)
    s[idx] = 1.0
    return SelectionVector(s, mode="binary")


def greedy_selection(h, l_budget):
    """The L antennas with the largest summed channel gains sum_k |h_nk|^2."""
    gains = (np.abs(h) ** 2).sum(axis=1)
    order = np.argsort(-gains, kind="stable")
    s = np.zeros(h.shape[0])
    s[order[:l_budget]] = 1.0
    return SelectionVector(s, mode="binary")


def all_antenna(n):
    """All antennas active (the L = N reference)."""
    return SelectionVector(np.ones(n), mode="binary")


def brute_force_oracle(inst, l_budget, ao_opts=None):
    """Exhaustive minimum over all L-subsets, refined with the shared AO.

    Subsets are visited (and reported) in lexicographic order; ties keep the
    first minimizer, so the result is deterministic.
    """
    ao_opts = ao_opts or AoOptions()
    n = inst.dims.n_antennas
    n_subsets = math.comb(n, l_budget)
    if n_subsets > MAX_ORACLE_SUBSETS:
        raise ValueError(
            f"C({n}, {l_budget}) = {n_subsets} subsets exceeds the "
            f"enumeration guard of {MAX_ORACLE_SUBSETS}"
        )
    per_selection = []
    best_idx = None
    best_error = np.inf
    for subset in itertools.combinations(range(n), l_budget):
        s = np.zeros(n)
        s[list(subset)] = 1.0
        _, _, error, _ = fixed_selection_ao(inst, s, ao_opts)
        per_selection.append((subset, error))
        if error < best_error:
            best_error = error
            best_idx = subset
    s = np.zeros(n)
    s[list(best_idx)] = 1.0
    return OracleReport(
        best_selection=SelectionVector(s, mode="binary"),
        best_error=float(best_error),
        per_selection_errors=tuple(per_selection),
    )


def solve_fixed_policy(inst, l_budget, policy, ao_opts=None, seed=0):
    """Run a non-iterative policy and refine it; wraps into a SolveReport."""
    ao_opts = ao_opts or AoOptions()
    n = inst.dims.n_antennas
    if not 1 <= l_budget <= n:
        raise ValueError(f"need 1 <= L <= N, got L={l_budget}, N={n}")
    t0 = time.perf_counter()
    if policy == "random":
        selection = random_selection(n, l_budget, seed)
    elif policy == "greedy":
        selection = greedy_selection(inst.channel.entries, l_budget)
    elif policy == "all":
        selection = all_antenna(n)
    else:
        raise ValueError(f"unknown fixed policy: {policy!r}")
    m, b, error, trace = fixed_selection_ao(inst, selection, ao_opts)
    wall_ms = (time.perf_counter() - t0) * 1e3
    return SolveReport(
        algorithm=policy,
        selection=selection,
        m=m,
        b=b,
        error=error,
        converged=trace.iters_used < ao_opts.max_iters,
        iters_outer=1,
        iters_inner=(trace.iters_used,),
        objective_traces=(trace.objective_per_iter,),
        wall_ms=wall_ms,
    )

"""Uniform entry point for running any selection algorithm by name."""

from .baselines import solve_fixed_policy
from .pdd import PddOptions, pdd_solve
from .sparse import SparseOptions, fista_solve, lasso_solve

ALGORITHMS = ("pdd", "lasso", "fista", "random", "greedy", "all")


def solve_instance(inst, l_budget, algorithm, *, seed=0, pdd_opts=None,
                   sparse_opts=None, ao_opts=None):
    """Solve one instance with the named algorithm and return a SolveReport."""
    if algorithm == "pdd":
        return pdd_solve(inst, l_budget, pdd_opts or PddOptions(), seed=seed)
    if algorithm == "lasso":
        return lasso_solve(inst, l_budget, sparse_opts or SparseOptions(), seed=seed)
    if algorithm == "fista":
        return fista_solve(inst, l_budget, sparse_opts or SparseOptions(), seed=seed)
    if algorithm in ("random", "greedy", "all"):
        return solve_fixed_policy(inst, l_budget, algorithm, ao_opts, seed=seed)
    raise ValueError(f"unknown algorithm: {algorithm!r}")

"""Penalty-dual-decomposition solver for the joint selection problem.

The binary selection constraint is rewritten through an auxiliary copy
s_bar (s_bar = s and s * (1 - s_bar) = 0 force 0/1 entries) plus the budget
sum(s) = L, and all three are moved into augmented-Lagrangian penalties
with multipliers (lambda, mu, beta) and penalty parameter rho. The inner
loop alternates exact marginal minimizers of the penalized objective over
(m, b, s_bar, s); the outer loop either updates the multipliers (when the
constraint violation is already below a threshold) or shrinks rho, and
tightens the threshold each round. The returned selection is always
feasible: the relaxed s is projected onto its L largest entries and the
remaining design refined with the fixed-selection AO.
"""

import time
from dataclasses import dataclass, field

import numpy as np

from . import kernels
from .ao import (
    AoOptions,
    DesignState,
    SolveReport,
    fixed_selection_ao,
    solve_receiver,
    update_transmit,
)
from .model import _aggregation_error, _lasso_quadratic, _receiver_normal_system
from .sparse import binarize_top_l

__all__ = [
    "DualState",
    "PddOptions",
    "penalty_value",
    "update_auxiliary",
    "update_selection_pdd",
    "violation_metric",
    "update_duals",
    "pdd_solve",
]


@dataclass(frozen=True)
class DualState:
    """Multipliers for the three selection constraints and the penalty rho."""

    beta: float
    lam: np.ndarray
    mu: np.ndarray
    rho: float

    def __post_init__(self):
        if not self.rho > 0:
            raise ValueError("penalty parameter rho must be positive")
        if not (
            np.isfinite(self.beta)
            and np.all(np.isfinite(self.lam))
            and np.all(np.isfinite(self.mu))
        ):
            raise ValueError("dual state contains non-finite values")

    @classmethod
    def zeros(cls, n, rho):
        return cls(beta=0.0, lam=np.zeros(n), mu=np.zeros(n), rho=rho)


@dataclass(frozen=True)
class PddOptions:
    """Outer-loop schedule and inner AO budget."""

    rho0: float = 1.0
    kappa: float = 0.8
    h_threshold0: float = 1.0
    h_stop: float = 1e-4
    max_outer: int = 60
    inner: AoOptions = field(
        default_factory=lambda: AoOptions(max_iters=50, rel_tol=1e-5)
    )
    refine: AoOptions = field(default_factory=AoOptions)

    def __post_init__(self):
        if not 0 < self.kappa < 1:
            raise ValueError("kappa must lie in (0, 1)")
        if self.rho0 <= 0:
            raise ValueError("rho0 must be positive")
        if self.max_outer < 1:
            raise ValueError("max_outer must be >= 1")


def penalty_value(s, s_bar, dual, l_budget):
    """Total augmented-Lagrangian penalty at (s, s_bar) for the given duals."""
    rho = dual.rho
    f = ((s - s_bar + rho * dual.lam) ** 2 - (rho * dual.lam) ** 2).sum()
    h = ((s * (1.0 - s_bar) + rho * dual.mu) ** 2 - (rho * dual.mu) ** 2).sum()
    g = (s.sum() - l_budget + rho * dual.beta) ** 2 - (rho * dual.beta) ** 2
    return float((f + h + g) / (2.0 * rho))


def update_auxiliary(s, dual):
    """Exact minimizer of the penalty over the auxiliary copy, per entry."""
    rho = dual.rho
    a_bar = 1.0 + s * s
    c_bar = s * s + (1.0 + rho * dual.mu) * s + rho * dual.lam
    return c_bar / a_bar


def selection_system(m, b, s_bar, dual, inst, l_budget):
    """Real symmetric (Q, u) with penalized objective = s'Qs - 2u's + const.

    Q adds the penalty curvature (an all-ones coupling from the budget term,
    plus diagonal terms) to the error quadratic; u pairs lambda with the
    copy residual (s - s_bar) and mu with the complementarity residual
    s * (1 - s_bar), which makes the Gauss-Seidel sweep the exact coordinate
    minimizer.
    """
    rho = dual.rho
    q_err, c_lin = _lasso_quadratic(
        m, b, inst.channel.entries, inst.weights.phi, inst.noise.sigma2
    )
    n = c_lin.shape[0]
    q = np.real(q_err)
    q = q + (0.5 / rho) * np.ones((n, n))
    diag = (0.5 / rho) * (1.0 + (1.0 - s_bar) ** 2)
    q[np.diag_indices(n)] += diag
    u = c_lin - (0.5 / rho) * (
        (rho * dual.beta - l_budget)
        + (rho * dual.lam - s_bar)
        + rho * dual.mu * (1.0 - s_bar)
    )
    return np.ascontiguousarray(q), u


def update_selection_pdd(state, dual, inst, l_budget):
    """One Gauss-Seidel sweep of exact coordinate minimizers over s.

    Coordinates are visited in ascending index using the latest values; the
    result is written back into ``state.s`` and returned.
    """
    q, u = selection_system(state.m, state.b, state.s_bar, dual, inst, l_budget)
    if np.min(np.diag(q)) <= 0:
        raise ArithmeticError(
            "selection system lost positive diagonal (numerical degeneracy)"
        )
    s = np.ascontiguousarray(state.s, np.float64)
    kernels.gs_qp_sweep(q, u, s)
    state.s = s
    return s


def violation_metric(s, s_bar, l_budget):
    """Max absolute deviation from the selection equality constraints."""
    budget = abs(float(s.sum()) - l_budget)
    copy = float(np.max(np.abs(s_bar - s))) if s.size else 0.0
    comp = float(np.max(np.abs(s * (1.0 - s_bar)))) if s.size else 0.0
    return max(budget, copy, comp)


def update_duals(dual, s, s_bar, l_budget):
    """Steepest-ascent multiplier update with step 1/(2 rho); rho unchanged."""
    rho = dual.rho
    return DualState(
        beta=dual.beta + (float(s.sum()) - l_budget) / (2.0 * rho),
        lam=dual.lam + (s_bar - s) / (2.0 * rho),
        mu=dual.mu + s * (1.0 - s_bar) / (2.0 * rho),
        rho=rho,
    )


def _penalized_merit(state, dual, inst, l_budget, ridge_eps):
    err = _aggregation_error(
        state.m,
        state.s,
        state.b,
        inst.channel.entries,
        inst.weights.phi,
        inst.noise.sigma2,
    )
    ridge = ridge_eps * float(np.real(np.vdot(state.m, state.m)))
    return err + penalty_value(state.s, state.s_bar, dual, l_budget) + ridge


def pdd_solve(inst, l_budget, opts=None, seed=0):
    """Two-tier penalty-dual solve; always returns a feasible refined design.

    ``seed`` is accepted for interface uniformity with the randomized
    policies; the initialization here is deterministic.
    """
    opts = opts or PddOptions()
    n = inst.dims.n_antennas
    if not 1 <= l_budget <= n:
        raise ValueError(f"need 1 <= L <= N, got L={l_budget}, N={n}")
    t0 = time.perf_counter()
    h_mat, phi, sigma2 = (
        inst.channel.entries,
        inst.weights.phi,
        inst.noise.sigma2,
    )
    inner = opts.inner
    frac = l_budget / n
    state = DesignState(
        m=np.zeros(n, np.complex128),
        b=np.full(inst.dims.n_devices, np.sqrt(inst.power_limit), np.complex128),
        s=np.full(n, frac),
        s_bar=np.full(n, frac),
    )
    a_mat, a_vec = _receiver_normal_system(state.s, state.b, h_mat, phi, sigma2)
    state.m = solve_receiver(a_mat, a_vec, inner.ridge_eps)

    dual = DualState.zeros(n, opts.rho0)
    h_threshold = opts.h_threshold0
    violation_trace = []
    objective_traces = []
    iters_inner = []
    converged = False

    for _ in range(opts.max_outer):
        trace = []
        prev = _penalized_merit(state, dual, inst, l_budget, inner.ridge_eps)
        used = 0
        for _ in range(inner.max_iters):
            a_mat, a_vec = _receiver_normal_system(
                state.s, state.b, h_mat, phi, sigma2
            )
            state.m = solve_receiver(a_mat, a_vec, inner.ridge_eps)
            state.b = update_transmit(state.m, state.s, inst)
            state.s_bar = update_auxiliary(state.s, dual)
            update_selection_pdd(state, dual, inst, l_budget)
            used += 1
            cur = _penalized_merit(state, dual, inst, l_budget, inner.ridge_eps)
            trace.append(cur)
            if abs(prev - cur) < inner.rel_tol * max(abs(prev), 1e-12):
                break
            prev = cur
        iters_inner.append(used)
        objective_traces.append(tuple(trace))

        h_val = violation_metric(state.s, state.s_bar, l_budget)
        violation_trace.append(h_val)
        if h_val <= opts.h_stop:
            converged = True
            break
        if h_val < h_threshold:
            dual = update_duals(dual, state.s, state.s_bar, l_budget)
        else:
            dual = DualState(
                beta=dual.beta, lam=dual.lam, mu=dual.mu, rho=opts.kappa * dual.rho
            )
        h_threshold = opts.kappa * h_val

    selection = binarize_top_l(state.s, l_budget)
    m, b, error, _ = fixed_selection_ao(inst, selection, opts.refine)
    wall_ms = (time.perf_counter() - t0) * 1e3
    return SolveReport(
        algorithm="pdd",
        selection=selection,
        m=m,
        b=b,
        error=error,
        converged=converged,
        iters_outer=len(iters_inner),
        iters_inner=tuple(iters_inner),
        objective_traces=tuple(objective_traces),
        violation_trace=tuple(violation_trace),
        wall_ms=wall_ms,
    )

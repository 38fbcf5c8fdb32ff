"""Shared alternating-optimization building blocks.

Every solver in the package alternates the same two marginal updates: a
Hermitian ridge solve for the receiver and a per-device closed form for the
transmit scalars. The fixed-selection AO here is also the common refinement
step run after binarization, and the exhaustive oracle evaluates subsets
with it, so dominance of the oracle over the full solvers holds by
construction rather than statistically.
"""

import math
from dataclasses import dataclass

import numpy as np

from .model import SelectionVector, _aggregation_error, _receiver_normal_system

__all__ = [
    "AoOptions",
    "AoTrace",
    "DesignState",
    "SolveReport",
    "solve_receiver",
    "transmit_deltas",
    "update_transmit_scalar",
    "update_transmit",
    "fixed_selection_ao",
]


@dataclass(frozen=True)
class AoOptions:
    """Iteration budget and tolerances of the alternating loops."""

    max_iters: int = 200
    rel_tol: float = 1e-6
    ridge_eps: float = 1e-10
    init_policy: str = "mmse_warm"

    def __post_init__(self):
        if self.max_iters < 1:
            raise ValueError("max_iters must be >= 1")
        if self.rel_tol <= 0:
            raise ValueError("rel_tol must be positive")
        if self.ridge_eps < 0:
            raise ValueError("ridge_eps must be non-negative")
        if self.init_policy not in ("mmse_warm", "ones", "given"):
            raise ValueError(f"unknown init policy: {self.init_policy!r}")


@dataclass(frozen=True)
class AoTrace:
    """Merit value per iteration (non-increasing) and iterations used."""

    objective_per_iter: tuple
    iters_used: int


@dataclass
class DesignState:
    """Mutable optimization variables owned by one solve."""

    m: np.ndarray
    b: np.ndarray
    s: np.ndarray
    s_bar: np.ndarray | None = None


@dataclass(frozen=True)
class SolveReport:
    """Outcome of a full selection-and-beamforming solve."""

    algorithm: str
    selection: SelectionVector
    m: np.ndarray
    b: np.ndarray
    error: float
    converged: bool
    iters_outer: int
    iters_inner: tuple
    objective_traces: tuple
    violation_trace: tuple = ()
    eta: float | None = None
    wall_ms: float = 0.0

    @property
    def iters_inner_total(self):
        return int(sum(self.iters_inner))

    @property
    def error_db(self):
        return 10.0 * math.log10(self.error)


# Residual contract of the receiver solve: ||(A + eps I) m - a|| below this
# times (1 + ||a||), else the dense solve is replaced by least squares.
_RECEIVER_RESID_TOL = 1e-8


def solve_receiver(a_mat, a_vec, ridge_eps=0.0):
    """Minimize (1/2) m^H (A + eps I) m - Re{m^H a} for Hermitian PSD A.

    A direct dense solve is used when it meets the residual contract; a
    semidefinite system (zeroed rows from unselected antennas make det A
    vanish) falls back to the least-squares pseudo-solution, which puts
    exact zeros on dead antennas since their right-hand side vanishes.
    """
    a_mat = np.asarray(a_mat, np.complex128)
    a_vec = np.asarray(a_vec, np.complex128)
    if not (np.all(np.isfinite(a_mat)) and np.all(np.isfinite(a_vec))):
        raise ValueError("receiver system contains non-finite values")
    if ridge_eps > 0:
        a_mat = a_mat + ridge_eps * np.eye(a_vec.shape[0])
    bound = _RECEIVER_RESID_TOL * (1.0 + float(np.linalg.norm(a_vec)))
    try:
        m = np.linalg.solve(a_mat, a_vec)
        if float(np.linalg.norm(a_mat @ m - a_vec)) <= bound:
            return m
    except np.linalg.LinAlgError:
        pass
    m, *_ = np.linalg.lstsq(a_mat, a_vec, rcond=None)
    return m


def transmit_deltas(m, s, inst):
    """Per-device curvature delta_k = |m^H S h_k|^2 and linear term eps_k.

    eps_k = (m^H S h_k)^* phi_k, the conjugation that makes the closed-form
    transmit update a descent step on the aggregation error.
    """
    g = (np.conj(m) * s) @ inst.channel.entries  # m^H S h_k, length K
    delta = np.abs(g) ** 2
    eps = np.conj(g) * inst.weights.phi
    return delta, eps


def update_transmit_scalar(delta_k, eps_k, power_limit):
    """Closed-form minimizer of the per-device transmit subproblem.

    Interior solution eps/delta when it satisfies |b|^2 <= P, otherwise full
    power with the phase of eps; a dead device (delta = eps = 0) keeps b = 0.
    """
    if delta_k > 0:
        b = eps_k / delta_k
        if abs(b) ** 2 <= power_limit:
            return b
    mag = abs(eps_k)
    if mag > 0:
        return math.sqrt(power_limit) * eps_k / mag
    return 0.0 + 0.0j


def update_transmit(m, s, inst):
    """Vectorized transmit update for all devices."""
    delta, eps = transmit_deltas(m, s, inst)
    p = inst.power_limit
    safe_delta = np.where(delta > 0, delta, 1.0)
    ratio = np.where(delta > 0, eps / safe_delta, 0.0)
    interior = (delta > 0) & (np.abs(ratio) ** 2 <= p)
    mag = np.abs(eps)
    safe_mag = np.where(mag > 0, mag, 1.0)
    clipped = np.where(mag > 0, math.sqrt(p) * eps / safe_mag, 0.0)
    return np.where(interior, ratio, clipped)


def _merit(m, s, b, inst, ridge_eps):
    err = _aggregation_error(
        m, s, b, inst.channel.entries, inst.weights.phi, inst.noise.sigma2
    )
    return err + ridge_eps * float(np.real(np.vdot(m, m)))


def init_design(inst, s, opts, m0=None, b0=None):
    """Initial (m, b) for a fixed selection: full power, then MMSE receiver."""
    k = inst.dims.n_devices
    if opts.init_policy == "given":
        if m0 is None or b0 is None:
            raise ValueError("init_policy 'given' requires m0 and b0")
        return np.array(m0, np.complex128), np.array(b0, np.complex128)
    b = np.full(k, math.sqrt(inst.power_limit), np.complex128)
    if opts.init_policy == "ones":
        m = np.ones(inst.dims.n_antennas, np.complex128)
    else:
        a_mat, a_vec = _receiver_normal_system(
            s, b, inst.channel.entries, inst.weights.phi, inst.noise.sigma2
        )
        m = solve_receiver(a_mat, a_vec, opts.ridge_eps)
    return m, b


def fixed_selection_ao(inst, s_binary, opts=None, m0=None, b0=None):
    """Alternate receiver / transmit updates for a fixed binary selection.

    Returns (m, b, error, trace); the recorded objective is the merit
    err + ridge * ||m||^2, which each marginal update cannot increase.
    """
    opts = opts or AoOptions()
    if isinstance(s_binary, SelectionVector):
        if s_binary.mode != "binary":
            raise ValueError("fixed_selection_ao requires a binary selection")
        s = s_binary.s
    else:
        s = np.asarray(s_binary, np.float64)
    h, phi, sigma2 = inst.channel.entries, inst.weights.phi, inst.noise.sigma2

    m, b = init_design(inst, s, opts, m0=m0, b0=b0)
    trace = []
    prev = _merit(m, s, b, inst, opts.ridge_eps)
    iters = 0
    for _ in range(opts.max_iters):
        a_mat, a_vec = _receiver_normal_system(s, b, h, phi, sigma2)
        m = solve_receiver(a_mat, a_vec, opts.ridge_eps)
        b = update_transmit(m, s, inst)
        iters += 1
        cur = _merit(m, s, b, inst, opts.ridge_eps)
        trace.append(cur)
        if abs(prev - cur) < opts.rel_tol * max(abs(prev), 1e-12):
            break
        prev = cur
    error = _aggregation_error(m, s, b, h, phi, sigma2)
    return m, b, error, AoTrace(tuple(trace), iters)

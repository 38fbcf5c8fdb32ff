"""Domain types and the model-aggregation error objective.

The uplink is an over-the-air computation link: K single-antenna devices
transmit scaled model parameters simultaneously, an N-antenna receiver with
L RF chains selects antennas (diagonal 0/1 switch S), applies a linear
receive vector m, and targets the weighted sum of the device parameters.
The mean-square aggregation error for a design (m, s, b) is

    err(m, s, b) = || m^H S H B - phi^H ||^2 + sigma^2 * || m^H S ||^2

with B = Diag(b). Everything downstream (alternating optimization, penalty
methods, sparse-selection solvers) minimizes this quantity, so the quadratic
forms it induces in m and in s are exposed here as well.
"""

from dataclasses import dataclass, field

import numpy as np

__all__ = [
    "SystemDims",
    "ChannelMatrix",
    "AggregationWeights",
    "ReceiverVector",
    "TransmitScalars",
    "SelectionVector",
    "NoiseModel",
    "ProblemInstance",
    "aggregation_error",
    "receiver_normal_system",
    "lasso_quadratic",
    "selection_gain_vector",
]

# Relative slack on the per-device power bound check.
_POWER_SLACK = 1e-9


def _frozen_array(x, dtype):
    arr = np.array(x, dtype=dtype, copy=True)
    arr.setflags(write=False)
    return arr


@dataclass(frozen=True)
class SystemDims:
    """Array size N, device count K, and RF-chain budget L (1 <= L <= N)."""

    n_antennas: int
    n_devices: int
    n_rf_chains: int

    def __post_init__(self):
        if self.n_antennas < 1:
            raise ValueError("n_antennas must be >= 1")
        if self.n_devices < 1:
            raise ValueError("n_devices must be >= 1")
        if not 1 <= self.n_rf_chains <= self.n_antennas:
            raise ValueError(
                f"n_rf_chains must satisfy 1 <= L <= N, got "
                f"L={self.n_rf_chains}, N={self.n_antennas}"
            )


@dataclass(frozen=True)
class ChannelMatrix:
    """Complex N x K uplink gains; entry (n, k) is device k seen at antenna n."""

    entries: np.ndarray

    def __post_init__(self):
        arr = _frozen_array(self.entries, np.complex128)
        if arr.ndim != 2:
            raise ValueError("channel matrix must be 2-D (N x K)")
        if not np.all(np.isfinite(arr)):
            raise ValueError("channel matrix contains non-finite entries")
        object.__setattr__(self, "entries", arr)

    @property
    def n_antennas(self):
        return self.entries.shape[0]

    @property
    def n_devices(self):
        return self.entries.shape[1]


@dataclass(frozen=True)
class AggregationWeights:
    """Positive aggregation weights phi summing to one (federated averaging).

    Unnormalized inputs are rejected rather than rescaled, so a weight bug
    upstream cannot silently change the target.
    """

    phi: np.ndarray

    def __post_init__(self):
        arr = _frozen_array(self.phi, np.float64)
        if arr.ndim != 1:
            raise ValueError("weights must be a 1-D vector")
        if not np.all(arr > 0):
            raise ValueError("weights must be strictly positive")
        if abs(float(arr.sum()) - 1.0) > 1e-9:
            raise ValueError(
                f"weights must sum to one, got sum={float(arr.sum())!r}"
            )
        object.__setattr__(self, "phi", arr)

    @classmethod
    def uniform(cls, k):
        return cls(np.full(k, 1.0 / k))


@dataclass(frozen=True)
class ReceiverVector:
    """Linear receive beamformer m of length N."""

    m: np.ndarray

    def __post_init__(self):
        arr = _frozen_array(self.m, np.complex128)
        if arr.ndim != 1:
            raise ValueError("receiver vector must be 1-D")
        if not np.all(np.isfinite(arr)):
            raise ValueError("receiver vector contains non-finite entries")
        object.__setattr__(self, "m", arr)


@dataclass(frozen=True)
class TransmitScalars:
    """Per-device complex scalings b_k under the power limit |b_k|^2 <= P."""

    b: np.ndarray
    power_limit: float

    def __post_init__(self):
        arr = _frozen_array(self.b, np.complex128)
        if arr.ndim != 1:
            raise ValueError("transmit scalars must be a 1-D vector")
        if self.power_limit <= 0:
            raise ValueError("power limit must be positive")
        if np.any(np.abs(arr) ** 2 > self.power_limit * (1.0 + _POWER_SLACK)):
            raise ValueError("|b_k|^2 exceeds the power limit")
        object.__setattr__(self, "b", arr)


@dataclass(frozen=True)
class SelectionVector:
    """Antenna selection vector, either relaxed in [0,1]^N or binary 0/1."""

    s: np.ndarray
    mode: str = "relaxed"

    def __post_init__(self):
        arr = _frozen_array(self.s, np.float64)
        if arr.ndim != 1:
            raise ValueError("selection vector must be 1-D")
        if self.mode == "relaxed":
            if np.any(arr < 0) or np.any(arr > 1):
                raise ValueError("relaxed selection entries must lie in [0, 1]")
        elif self.mode == "binary":
            if not np.all((arr == 0.0) | (arr == 1.0)):
                raise ValueError("binary selection entries must be 0 or 1")
        else:
            raise ValueError(f"unknown selection mode: {self.mode!r}")
        object.__setattr__(self, "s", arr)

    @property
    def n_selected(self):
        return int(round(float(self.s.sum()))) if self.mode == "binary" else None


@dataclass(frozen=True)
class NoiseModel:
    """Receiver AWGN variance sigma^2 (per antenna, watts)."""

    sigma2: float

    def __post_init__(self):
        if not self.sigma2 > 0:
            raise ValueError("noise variance must be positive")


@dataclass(frozen=True)
class ProblemInstance:
    """One channel draw plus the static quantities every solver needs."""

    dims: SystemDims
    channel: ChannelMatrix
    weights: AggregationWeights
    noise: NoiseModel
    power_limit: float = field(default=1.0)

    def __post_init__(self):
        n, k = self.dims.n_antennas, self.dims.n_devices
        if self.channel.entries.shape != (n, k):
            raise ValueError(
                f"channel shape {self.channel.entries.shape} does not match "
                f"dims (N={n}, K={k})"
            )
        if self.weights.phi.shape != (k,):
            raise ValueError("weights length does not match n_devices")
        if self.power_limit <= 0:
            raise ValueError("power limit must be positive")


# ---------------------------------------------------------------------------
# Raw-array core. Solvers call these in their inner loops; the public
# operations below unwrap the typed values and delegate.
# ---------------------------------------------------------------------------


def _check_shapes(m, s, b, h):
    n, k = h.shape
    if m.shape != (n,):
        raise ValueError(f"receiver length {m.shape} != N={n}")
    if s.shape != (n,):
        raise ValueError(f"selection length {s.shape} != N={n}")
    if b.shape != (k,):
        raise ValueError(f"transmit length {b.shape} != K={k}")


def _aggregation_error(m, s, b, h, phi, sigma2):
    ms = np.conj(m) * s
    row = ms @ h * b  # m^H S H B, length K
    resid = row - phi
    return float(np.real(resid @ np.conj(resid)) + sigma2 * np.real(ms @ np.conj(ms)))


def _receiver_normal_system(s, b, h, phi, sigma2):
    e = s[:, None] * h * b[None, :]  # S H B
    a_mat = e @ np.conj(e.T) + np.diag(sigma2 * s * s)
    a_mat = 0.5 * (a_mat + np.conj(a_mat.T))
    a_vec = e @ phi.astype(np.complex128)
    return a_mat, a_vec


def _lasso_quadratic(m, b, h, phi, sigma2):
    ct = np.conj(m)[:, None] * h * b[None, :]  # M^H H B
    q = ct @ np.conj(ct.T) + np.diag(sigma2 * np.abs(m) ** 2)
    q = 0.5 * (q + np.conj(q.T))
    c_lin = np.real(ct @ phi.astype(np.complex128))
    return q, c_lin


# ---------------------------------------------------------------------------
# Public operations
# ---------------------------------------------------------------------------


def _unwrap(m, s, b, inst):
    mv = m.m if isinstance(m, ReceiverVector) else np.asarray(m, np.complex128)
    sv = s.s if isinstance(s, SelectionVector) else np.asarray(s, np.float64)
    bv = b.b if isinstance(b, TransmitScalars) else np.asarray(b, np.complex128)
    _check_shapes(mv, sv, bv, inst.channel.entries)
    return mv, sv, bv


def aggregation_error(m, s, b, inst):
    """Mean-square aggregation error of the design (m, s, b).

    Equals E|theta - theta_hat|^2 over unit-variance uncorrelated device
    parameters and the receiver noise; always >= 0 and equals ||phi||^2 at
    m = 0.
    """
    mv, sv, bv = _unwrap(m, s, b, inst)
    return _aggregation_error(
        mv, sv, bv, inst.channel.entries, inst.weights.phi, inst.noise.sigma2
    )


def receiver_normal_system(s, b, inst):
    """Hermitian PSD system (A, a) of the receiver subproblem.

    The best receiver for fixed (s, b) minimizes
    (1/2) m^H A m - Re{m^H a}, which equals (err(m) - ||phi||^2) / 2, with
    A = S H B B^H H^H S + sigma^2 S S^H and a = S H B phi.
    """
    mv = np.zeros(inst.dims.n_antennas, np.complex128)
    _, sv, bv = _unwrap(mv, s, b, inst)
    return _receiver_normal_system(
        sv, bv, inst.channel.entries, inst.weights.phi, inst.noise.sigma2
    )


def lasso_quadratic(m, b, inst):
    """Selection quadratic (Q, c) with s^T Q s - 2 s^T c + ||phi||^2 = err(s).

    Q includes the noise term sigma^2 Diag(|m_n|^2) so the identity holds for
    every real s, and c_n = Re{ m_n^* (H B phi)_n } is the gradient-consistent
    linear coefficient.
    """
    sv = np.zeros(inst.dims.n_antennas, np.float64)
    mv, _, bv = _unwrap(m, sv, b, inst)
    return _lasso_quadratic(
        mv, bv, inst.channel.entries, inst.weights.phi, inst.noise.sigma2
    )


def selection_gain_vector(m, b, inst):
    """Per-antenna complex gains g_n = (H B phi)_n * m_n^*.

    The real part is exactly the linear coefficient of the selection
    quadratic (``lasso_quadratic``'s c), which is what makes coordinate
    descent on the selection monotone; the imaginary part carries no
    objective information for real s.
    """
    sv = np.zeros(inst.dims.n_antennas, np.float64)
    mv, _, bv = _unwrap(m, sv, b, inst)
    return (inst.channel.entries @ (bv * inst.weights.phi)) * np.conj(mv)

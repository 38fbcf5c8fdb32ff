"""Seeded generation of problem instances.

Devices are dropped uniformly over an annulus around the receiver, large-
scale gain follows a reference-distance power law, and small-scale fading is
correlated Rayleigh on a uniform linear array: the covariance seen from a
device at angle kappa with angular spread theta is

    R[n, m] = exp(j 2 pi zeta sin(kappa))^(n-m)
              * exp(-2 theta^2 (pi (n-m) zeta cos(kappa))^2)

with zeta the antenna spacing in wavelengths. ``correlation='iid'`` replaces
R by the identity.
"""

import math
from dataclasses import dataclass

import numpy as np

from .model import (
    AggregationWeights,
    ChannelMatrix,
    NoiseModel,
    ProblemInstance,
)
from .rng import make_rng, mix_seed

__all__ = [
    "ChannelConfig",
    "DevicePlacement",
    "place_devices",
    "path_loss",
    "correlation_matrix",
    "sample_channel",
    "sample_network",
    "snr_db_to_sigma2",
]


@dataclass(frozen=True)
class ChannelConfig:
    """Cell geometry, path-loss law, and array-correlation parameters."""

    r_inner: float = 10.0
    r_outer: float = 100.0
    pathloss_exponent: float = 3.0
    ref_distance: float = 10.0
    ref_gain: float = 1.0
    antenna_spacing: float = 0.5
    angular_spread_deg: tuple = (12.0, 15.0)
    correlation: str = "iid"

    def __post_init__(self):
        # Equality gives the degenerate single-circle drop, which is allowed.
        if not 0 < self.r_inner <= self.r_outer:
            raise ValueError("annulus radii must satisfy 0 < r_inner <= r_outer")
        if self.pathloss_exponent <= 0:
            raise ValueError("path-loss exponent must be positive")
        lo, hi = self.angular_spread_deg
        if lo > hi:
            raise ValueError("angular spread interval must be ordered")
        if self.correlation not in ("iid", "correlated"):
            raise ValueError(f"unknown correlation mode: {self.correlation!r}")


@dataclass(frozen=True)
class DevicePlacement:
    """Per-device distance (m), angle of arrival (rad), angular std (rad)."""

    distance: np.ndarray
    aoa: np.ndarray
    angular_std: np.ndarray


def place_devices(k, cfg, seed):
    """Drop K devices area-uniformly on the annulus [r_inner, r_outer].

    Radii are sampled as sqrt(u * (R_out^2 - R_in^2) + R_in^2) so density is
    uniform per unit area; angles are uniform on [0, 2pi); the per-device
    angular spread is uniform on the configured interval (degrees in config,
    radians in the result).
    """
    rng = make_rng(seed)
    u = rng.uniform(size=k)
    distance = np.sqrt(u * (cfg.r_outer**2 - cfg.r_inner**2) + cfg.r_inner**2)
    aoa = rng.uniform(0.0, 2.0 * math.pi, size=k)
    lo, hi = cfg.angular_spread_deg
    angular_std = np.deg2rad(rng.uniform(lo, hi, size=k))
    return DevicePlacement(distance=distance, aoa=aoa, angular_std=angular_std)


def path_loss(d, cfg):
    """Large-scale gain ref_gain * (d / ref_distance)^(-alpha)."""
    d = np.asarray(d, np.float64)
    if np.any(d <= 0):
        raise ValueError("distance must be positive")
    out = cfg.ref_gain * (d / cfg.ref_distance) ** (-cfg.pathloss_exponent)
    return float(out) if out.ndim == 0 else out


def correlation_matrix(kappa, theta_std, cfg, n):
    """Hermitian antenna-correlation matrix for one device direction."""
    idx = np.arange(n)
    diff = idx[:, None] - idx[None, :]
    phase = 2.0 * math.pi * cfg.antenna_spacing * math.sin(kappa)
    spread = np.exp(
        -2.0
        * theta_std**2
        * (math.pi * diff * cfg.antenna_spacing * math.cos(kappa)) ** 2
    )
    r = np.exp(1j * phase * diff) * spread
    return 0.5 * (r + np.conj(r.T))


def _correlation_root(r):
    """PSD square root of R via eigen-decomposition, clipping negatives."""
    if not np.allclose(r, np.conj(r.T), atol=1e-10):
        raise ValueError("correlation matrix must be Hermitian")
    vals, vecs = np.linalg.eigh(r)
    vals = np.clip(vals, 0.0, None)
    return vecs * np.sqrt(vals)[None, :]


def sample_channel(r, large_scale, seed):
    """One correlated Rayleigh draw sqrt(large_scale) * R^(1/2) w."""
    root = _correlation_root(np.asarray(r, np.complex128))
    rng = make_rng(seed)
    return _fading_draw(root, large_scale, rng)


def _fading_draw(root, large_scale, rng):
    n = root.shape[0]
    w = (rng.standard_normal(n) + 1j * rng.standard_normal(n)) / math.sqrt(2.0)
    return math.sqrt(large_scale) * (root @ w)


def snr_db_to_sigma2(snr_db, power_limit):
    """Noise variance from SNR (defined as P / sigma^2)."""
    return power_limit / (10.0 ** (snr_db / 10.0))


def sample_network(dims, cfg, seed, *, snr_db=None, sigma2=None, power_limit=1.0, weights=None):
    """Assemble a seeded ProblemInstance: placement, path loss, fading, noise.

    Exactly one of ``snr_db`` / ``sigma2`` must be given. The channel is
    built column by column with per-device sub-seeds, so instances are
    bit-reproducible for a given (config, seed).
    """
    if (snr_db is None) == (sigma2 is None):
        raise ValueError("specify exactly one of snr_db or sigma2")
    if sigma2 is None:
        sigma2 = snr_db_to_sigma2(snr_db, power_limit)

    k, n = dims.n_devices, dims.n_antennas
    placement = place_devices(k, cfg, mix_seed(seed, 0))
    gains = path_loss(placement.distance, cfg)

    h = np.empty((n, k), np.complex128)
    eye_root = np.eye(n, dtype=np.complex128)
    for j in range(k):
        if cfg.correlation == "correlated":
            r = correlation_matrix(
                placement.aoa[j], placement.angular_std[j], cfg, n
            )
            root = _correlation_root(r)
        else:
            root = eye_root
        h[:, j] = _fading_draw(root, gains[j], make_rng(mix_seed(seed, 1, j)))

    if weights is None:
        weights = AggregationWeights.uniform(k)
    return ProblemInstance(
        dims=dims,
        channel=ChannelMatrix(h),
        weights=weights,
        noise=NoiseModel(sigma2),
        power_limit=power_limit,
    )

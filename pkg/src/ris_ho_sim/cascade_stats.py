"""Statistics of the two-hop cascaded channel.

Each element contributes the product of two independent Gaussian hop gains;
the panel sum is treated exactly by the Monte Carlo sampler and
approximately (central limit theorem) by the Gaussian combined-gain law,
whose density and the induced SNR density are exposed here. The SNR is the
average SNR times the squared combined gain, so its density is the folded
two-exponential form.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.special import erf

from .errors import (DegenerateDistributionError, InvalidArgumentError)


@dataclass(frozen=True)
class HopGainStats:
    """Mean and variance of a single Gaussian hop gain."""

    mean: float
    variance: float

    def __post_init__(self):
        if self.variance < 0:
            raise InvalidArgumentError("hop variance must be non-negative")


@dataclass(frozen=True)
class CascadeStats:
    """Moments of the summed per-element product gains.

    ``mean_g``  = N mu1 mu2
    ``var_total`` = N [ (s1^2 + mu1^2)(s2^2 + mu2^2) - (mu1 mu2)^2 ]

    ``var_total`` is the full variance of the sum; it enters every density
    exactly once.
    """

    n_elements: int
    mean_g: float
    var_total: float
    hop1: HopGainStats
    hop2: HopGainStats

    def __post_init__(self):
        if self.n_elements < 1:
            raise InvalidArgumentError("n_elements must be >= 1")
        if self.var_total < 0:
            raise InvalidArgumentError("var_total must be non-negative")
        expect = self.n_elements * self.hop1.mean * self.hop2.mean
        scale = max(abs(expect), 1.0)
        if abs(self.mean_g - expect) > 1e-9 * scale:
            raise InvalidArgumentError(
                "mean_g inconsistent with N * mu1 * mu2")


def cascade_moments(hop1: HopGainStats, hop2: HopGainStats,
                    n: int) -> CascadeStats:
    """Exact first two moments of the N-element product-gain sum."""
    if n < 1:
        raise InvalidArgumentError("element count must be >= 1")
    mean_g = n * hop1.mean * hop2.mean
    second = (hop1.variance + hop1.mean ** 2) * (hop2.variance + hop2.mean ** 2)
    var_total = n * (second - (hop1.mean * hop2.mean) ** 2)
    return CascadeStats(n, mean_g, var_total, hop1, hop2)


@dataclass(frozen=True)
class SnrModel:
    """Cascade statistics plus the average SNR (transmit power over noise)."""

    cascade: CascadeStats
    avg_snr: float

    def __post_init__(self):
        if not (self.avg_snr > 0):
            raise InvalidArgumentError("avg_snr must be positive")

    @property
    def is_deterministic(self) -> bool:
        return self.cascade.var_total == 0.0


def gain_pdf(g, stats: CascadeStats):
    """Gaussian density of the combined gain under the large-N approximation."""
    if stats.var_total == 0:
        raise DegenerateDistributionError(
            "combined gain is a point mass; densities are undefined")
    g_arr = np.asarray(g, dtype=float)
    v = stats.var_total
    out = np.exp(-(g_arr - stats.mean_g) ** 2 / (2.0 * v)) / math.sqrt(2.0 * math.pi * v)
    return float(out) if np.isscalar(g) else out


def folded_gain_pdf(t, stats: CascadeStats):
    """Density of |combined gain| on t >= 0 (sum of the two Gaussian lobes)."""
    if stats.var_total == 0:
        raise DegenerateDistributionError(
            "combined gain is a point mass; densities are undefined")
    t_arr = np.asarray(t, dtype=float)
    v = stats.var_total
    m = stats.mean_g
    norm = 1.0 / math.sqrt(2.0 * math.pi * v)
    out = norm * (np.exp(-(t_arr - m) ** 2 / (2.0 * v))
                  + np.exp(-(t_arr + m) ** 2 / (2.0 * v)))
    return float(out) if np.isscalar(t) else out


def snr_pdf(gamma, model: SnrModel):
    """Density of the instantaneous SNR gamma = avg_snr * G^2 with Gaussian G.

    Evaluates the folded two-exponential form; diverges integrably like
    1/sqrt(gamma) at the origin (reported as inf at gamma == 0 exactly).
    """
    gamma_arr = np.asarray(gamma, dtype=float)
    if np.any(gamma_arr < 0):
        raise InvalidArgumentError("gamma must be non-negative")
    if model.cascade.var_total == 0:
        raise DegenerateDistributionError(
            "SNR is a point mass; densities are undefined")
    v = model.cascade.var_total
    m = model.cascade.mean_g
    gbar = model.avg_snr
    with np.errstate(divide="ignore", invalid="ignore"):
        t = np.sqrt(gamma_arr / gbar)
        jac = 1.0 / (2.0 * np.sqrt(gamma_arr * gbar))
        norm = 1.0 / math.sqrt(2.0 * math.pi * v)
        body = (np.exp(-(t - m) ** 2 / (2.0 * v))
                + np.exp(-(t + m) ** 2 / (2.0 * v)))
        out = np.where(gamma_arr == 0.0, np.inf, jac * norm * body)
    return float(out) if np.isscalar(gamma) else out


def _norm_cdf(x):
    return 0.5 * (1.0 + erf(np.asarray(x) / math.sqrt(2.0)))


def snr_cdf(gamma, model: SnrModel):
    """P(SNR <= gamma) under the Gaussian combined-gain law (closed form)."""
    gamma_arr = np.asarray(gamma, dtype=float)
    if np.any(gamma_arr < 0):
        raise InvalidArgumentError("gamma must be non-negative")
    m = model.cascade.mean_g
    v = model.cascade.var_total
    if v == 0:
        point = model.avg_snr * m * m
        out = (gamma_arr >= point).astype(float)
        return float(out) if np.isscalar(gamma) else out
    sd = math.sqrt(v)
    u = np.sqrt(gamma_arr / model.avg_snr)
    out = _norm_cdf((u - m) / sd) - _norm_cdf((-u - m) / sd)
    return float(out) if np.isscalar(gamma) else out


def sample_snr_exact(rng: np.random.Generator, model: SnrModel, size=None):
    """Exact per-element SNR draw(s): N independent hop-gain pairs, product
    summed, squared, scaled by the average SNR. Reproducible per generator
    state; pass ``size`` for a vectorized batch."""
    stats = model.cascade
    n = stats.n_elements
    shape = (n,) if size is None else (size, n)
    g1 = rng.normal(stats.hop1.mean, math.sqrt(stats.hop1.variance), shape)
    g2 = rng.normal(stats.hop2.mean, math.sqrt(stats.hop2.variance), shape)
    total = np.sum(g1 * g2, axis=-1)
    out = model.avg_snr * total ** 2
    return float(out) if size is None else out

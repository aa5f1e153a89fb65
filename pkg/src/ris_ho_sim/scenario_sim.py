"""Geometry and mobility layer.

Places base stations and reflecting panels (fixed two-cell layouts or
Poisson fields), walks a user terminal along a straight trajectory, builds
received-power traces combining the direct path with the reflected path,
and runs the trigger-distance and handover-probability sweeps.

Link-budget model (the papered channel statistics leave the absolute scale
open, so the choices here are explicit and config-exposed):

* direct paths use free-space amplitude loss ``lambda / (4 pi d)``;
* inside the panel's radiative near field the reflected path behaves like a
  virtual source: free-space loss over the unfolded path length d1 + d2,
  scaled by a saturating element-count efficiency N / (N + N_half) and a
  fixed boost factor — beam refocusing tracks the terminal, so no extra
  spreading penalty applies;
* outside that region the reflected path falls back to the coherent
  product budget ``N * (lambda/(4 pi d1)) * (lambda/(4 pi d2))``, which is
  negligible at cell scale (that is the point of the near-field regime);
* randomness enters as the exact per-element cascade sum normalized by its
  mean, with per-hop variance kappa * mean^2.

Powers from the two paths add non-coherently.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, replace
from typing import NamedTuple

import numpy as np

from .cascade_stats import HopGainStats, SnrModel, cascade_moments, sample_snr_exact
from .errors import DomainError, InvalidArgumentError
from .field_model import CarrierConfig, Region, RisPanel, classify_region
from .ho_engine import HoThresholds, hho_probability, sho_probability
from .link_metrics import ber_kernel


# ---------------------------------------------------------------------------
# domain types


@dataclass(frozen=True)
class ScenarioLayout:
    """Two-cell layout: serving and target transmitters, one panel between
    them. The panel must sit in the radiative near field of the target."""

    serving_bs_pos: np.ndarray
    target_bs_pos: np.ndarray
    ris_pos: np.ndarray
    tx_power_dbm: float
    noise_power_dbm: float
    panel: RisPanel
    carrier: CarrierConfig
    scattering_kappa: float = 0.1
    ris_eff_half_n: float = 64.0
    ris_boost_db: float = 1.7

    def __post_init__(self):
        for name in ("serving_bs_pos", "target_bs_pos", "ris_pos"):
            object.__setattr__(self, name,
                               np.asarray(getattr(self, name), dtype=float))
            if getattr(self, name).shape != (3,):
                raise InvalidArgumentError(f"{name} must be a 3-vector")
        pts = [self.serving_bs_pos, self.target_bs_pos, self.ris_pos]
        for i in range(3):
            for j in range(i + 1, 3):
                if np.allclose(pts[i], pts[j]):
                    raise InvalidArgumentError("layout positions must be distinct")
        if self.scattering_kappa < 0:
            raise InvalidArgumentError("scattering_kappa must be non-negative")
        if self.ris_eff_half_n <= 0:
            raise InvalidArgumentError("ris_eff_half_n must be positive")
        d_rt = float(np.linalg.norm(self.ris_pos - self.target_bs_pos))
        region = classify_region(d_rt, self.panel.aperture_d_m,
                                 self.carrier.wavelength_m)
        if region != Region.RADIATIVE_NEAR_FIELD:
            raise InvalidArgumentError(
                f"panel sits {d_rt:.1f} m from the target, outside its "
                f"radiative near field ({region.value})")

    @property
    def avg_snr(self) -> float:
        return 10.0 ** ((self.tx_power_dbm - self.noise_power_dbm) / 10.0)


@dataclass(frozen=True)
class PppConfig:
    """Homogeneous Poisson deployment over an axis-aligned rectangle."""

    region: tuple  # (x_min, y_min, x_max, y_max)
    bs_density: float
    ris_density: float
    seed: int

    def __post_init__(self):
        x0, y0, x1, y1 = self.region
        if not (x1 > x0 and y1 > y0):
            raise InvalidArgumentError("region must have positive area")
        if self.bs_density < 0 or self.ris_density < 0:
            raise InvalidArgumentError("densities must be non-negative")


class DeployedPoints(NamedTuple):
    bs_positions: np.ndarray   # (k, 2)
    ris_positions: np.ndarray  # (m, 2)


@dataclass(frozen=True)
class Trajectory:
    start: np.ndarray
    end: np.ndarray
    speed_mps: float
    sample_interval_s: float

    def __post_init__(self):
        object.__setattr__(self, "start", np.asarray(self.start, dtype=float))
        object.__setattr__(self, "end", np.asarray(self.end, dtype=float))
        if self.start.shape != (3,) or self.end.shape != (3,):
            raise InvalidArgumentError("trajectory endpoints must be 3-vectors")
        if np.allclose(self.start, self.end):
            raise InvalidArgumentError("trajectory must have nonzero length")
        if not (self.speed_mps > 0 and self.sample_interval_s > 0):
            raise InvalidArgumentError("speed and sample interval must be positive")

    @property
    def step_m(self) -> float:
        return self.speed_mps * self.sample_interval_s

    @property
    def length_m(self) -> float:
        return float(np.linalg.norm(self.end - self.start))


@dataclass(frozen=True)
class RsrpTrace:
    """Per-sample received powers along a trajectory (dBm columns)."""

    path_s_m: np.ndarray
    positions: np.ndarray
    serving_direct_dbm: np.ndarray
    serving_via_ris_dbm: np.ndarray
    serving_combined_dbm: np.ndarray
    target_dbm: np.ndarray
    region_flags: list
    ris_distance_m: np.ndarray

    def __len__(self):
        return self.path_s_m.size


class TriggerResult(NamedTuple):
    distance_m: float
    triggered: bool


# ---------------------------------------------------------------------------
# deployment and budgets


def deploy_ppp(cfg: PppConfig, rng: np.random.Generator | None = None) -> DeployedPoints:
    """Draw base-station and panel positions as independent Poisson fields."""
    if rng is None:
        rng = np.random.default_rng(np.random.SeedSequence(cfg.seed))
    x0, y0, x1, y1 = cfg.region
    area = (x1 - x0) * (y1 - y0)

    def field(density):
        count = rng.poisson(density * area)
        xs = rng.uniform(x0, x1, count)
        ys = rng.uniform(y0, y1, count)
        return np.column_stack([xs, ys])

    return DeployedPoints(field(cfg.bs_density), field(cfg.ris_density))


def free_space_gain_db(distance_m, wavelength_m: float):
    """Free-space power gain 20 log10(lambda / (4 pi d))."""
    d = np.asarray(distance_m, dtype=float)
    if np.any(d <= 0):
        raise DomainError("free-space distance must be positive")
    return 20.0 * np.log10(wavelength_m / (4.0 * np.pi * d))


def ris_efficiency(n_elements: int, half_n: float) -> float:
    """Saturating element-count efficiency N / (N + N_half)."""
    if n_elements < 1:
        raise InvalidArgumentError("n_elements must be >= 1")
    return n_elements / (n_elements + half_n)


def hop_stats_from_geometry(layout: ScenarioLayout, ue_pos,
                            bs: str = "serving") -> tuple[HopGainStats, HopGainStats]:
    """Free-space per-hop gain statistics for the BS-panel and panel-UE hops:
    mean amplitude lambda / (4 pi d), variance kappa * mean^2."""
    if bs == "serving":
        bs_pos = layout.serving_bs_pos
    elif bs == "target":
        bs_pos = layout.target_bs_pos
    else:
        raise InvalidArgumentError("bs must be 'serving' or 'target'")
    ue = np.asarray(ue_pos, dtype=float)
    d1 = float(np.linalg.norm(bs_pos - layout.ris_pos))
    d2 = float(np.linalg.norm(layout.ris_pos - ue))
    if d1 <= 0 or d2 <= 0:
        raise DomainError("hop distances must be positive")
    lam = layout.carrier.wavelength_m
    kappa = layout.scattering_kappa
    stats = []
    for d in (d1, d2):
        mean = lam / (4.0 * np.pi * d)
        stats.append(HopGainStats(mean, kappa * mean * mean))
    return stats[0], stats[1]


def _cascade_fade(rng: np.random.Generator, n_samples: int, n_elements: int,
                  kappa: float) -> np.ndarray:
    """Exact cascade sum over unit-mean hops, normalized to unit mean:
    mean over elements of (1 + sqrt(kappa) a)(1 + sqrt(kappa) b)."""
    root = math.sqrt(kappa)
    a = rng.normal(0.0, 1.0, (n_samples, n_elements))
    b = rng.normal(0.0, 1.0, (n_samples, n_elements))
    return np.mean((1.0 + root * a) * (1.0 + root * b), axis=1)


# ---------------------------------------------------------------------------
# traces and triggers


def rsrp_along_trajectory(layout: ScenarioLayout, traj: Trajectory,
                          ris_enabled: bool,
                          rng: np.random.Generator | None = None) -> RsrpTrace:
    """Received-power trace along a straight walk.

    Direct serving/target powers follow free-space loss. With the panel
    enabled, the reflected serving path uses the virtual-source budget
    inside the panel's radiative near field and the coherent product budget
    elsewhere; powers add non-coherently. Passing ``rng`` draws one cascade
    fading realization per sample; without it the trace is the mean channel.
    """
    step = traj.step_m
    n = int(math.floor(traj.length_m / step)) + 1
    s = np.arange(n) * step
    direction = (traj.end - traj.start) / traj.length_m
    positions = traj.start[None, :] + s[:, None] * direction[None, :]

    d_serv = np.linalg.norm(positions - layout.serving_bs_pos[None, :], axis=1)
    d_targ = np.linalg.norm(positions - layout.target_bs_pos[None, :], axis=1)
    d_ris = np.linalg.norm(positions - layout.ris_pos[None, :], axis=1)
    lam = layout.carrier.wavelength_m

    serving_direct_dbm = layout.tx_power_dbm + free_space_gain_db(d_serv, lam)
    target_dbm = layout.tx_power_dbm + free_space_gain_db(d_targ, lam)

    regions = [classify_region(float(d), layout.panel.aperture_d_m, lam)
               for d in d_ris]

    tx_lin = 10.0 ** (layout.tx_power_dbm / 10.0)
    if ris_enabled:
        n_el = layout.panel.n_elements
        d1 = float(np.linalg.norm(layout.serving_bs_pos - layout.ris_pos))
        if rng is None:
            fade = np.ones(n)
        else:
            fade = _cascade_fade(rng, n, n_el, layout.scattering_kappa)
        q = ris_efficiency(n_el, layout.ris_eff_half_n) \
            * 10.0 ** (layout.ris_boost_db / 10.0)
        virtual_amp = lam / (4.0 * np.pi * (d1 + d_ris))
        product_amp = n_el * (lam / (4.0 * np.pi * d1)) * (lam / (4.0 * np.pi * d_ris))
        rnf = np.array([r == Region.RADIATIVE_NEAR_FIELD for r in regions])
        via_lin = tx_lin * np.where(rnf, q * virtual_amp ** 2,
                                    product_amp ** 2) * fade ** 2
    else:
        via_lin = np.zeros(n)

    direct_lin = 10.0 ** (serving_direct_dbm / 10.0)
    combined_lin = direct_lin + via_lin
    with np.errstate(divide="ignore"):
        via_dbm = 10.0 * np.log10(via_lin)
        combined_dbm = 10.0 * np.log10(combined_lin)

    return RsrpTrace(s, positions, serving_direct_dbm, via_dbm, combined_dbm,
                     target_dbm, regions, d_ris)


def ho_trigger_distance(trace: RsrpTrace, t_h_db: float) -> TriggerResult:
    """Distance from the trajectory start to the first sample where the
    target power reaches the combined serving power plus the margin; the
    full trace length (flagged untriggered) if that never happens."""
    if len(trace) == 0:
        raise InvalidArgumentError("trace must be non-empty")
    hits = np.nonzero(trace.target_dbm >= trace.serving_combined_dbm + t_h_db)[0]
    if hits.size == 0:
        return TriggerResult(float(trace.path_s_m[-1]), False)
    return TriggerResult(float(trace.path_s_m[hits[0]]), True)


def ris_ue_distance_histogram(trace: RsrpTrace, bins: int = 20):
    """Empirical panel-to-terminal distance distribution along a walk
    (diagnostic; no closed form is claimed for it)."""
    counts, edges = np.histogram(trace.ris_distance_m, bins=bins)
    return edges, counts


# ---------------------------------------------------------------------------
# sweep scenarios


@dataclass(frozen=True)
class SweepScenario:
    """Parameter bundle for the two-cell sweep experiments. The serving
    transmitter sits at the origin, the target on the x-axis at
    ``separation_factor`` times the serving-to-panel distance, the panel
    laterally offset from the walk line."""

    aperture_d_m: float = 0.9
    wavelength_m: float = 0.01
    separation_factor: float = 2.0
    lateral_offset_m: float = 10.0
    tx_power_dbm: float = 30.0
    noise_power_dbm: float = -94.0
    scattering_kappa: float = 0.1
    eff_half_n: float = 64.0
    ris_boost_db: float = 1.7
    step_m: float = 0.1
    start_offset_m: float = 1.0


def build_layout(params: SweepScenario, d_serving_ris_m: float,
                 n_elements: int) -> ScenarioLayout:
    if d_serving_ris_m <= 0:
        raise InvalidArgumentError("d_serving_ris_m must be positive")
    length = params.separation_factor * d_serving_ris_m
    return ScenarioLayout(
        serving_bs_pos=np.array([0.0, 0.0, 0.0]),
        target_bs_pos=np.array([length, 0.0, 0.0]),
        ris_pos=np.array([d_serving_ris_m, params.lateral_offset_m, 0.0]),
        tx_power_dbm=params.tx_power_dbm,
        noise_power_dbm=params.noise_power_dbm,
        panel=RisPanel.abstract(n_elements, params.aperture_d_m),
        carrier=CarrierConfig.from_wavelength(params.wavelength_m),
        scattering_kappa=params.scattering_kappa,
        ris_eff_half_n=params.eff_half_n,
        ris_boost_db=params.ris_boost_db,
    )


def build_trajectory(params: SweepScenario, d_serving_ris_m: float) -> Trajectory:
    """Straight walk from just outside the serving transmitter toward the
    target, along the inter-site axis."""
    length = params.separation_factor * d_serving_ris_m
    return Trajectory(
        start=np.array([params.start_offset_m, 0.0, 0.0]),
        end=np.array([length - params.start_offset_m, 0.0, 0.0]),
        speed_mps=1.0,
        sample_interval_s=params.step_m,
    )


def trigger_distance_sweep(params: SweepScenario, n_values, t_h_db_values,
                           d_values, realizations: int = 200,
                           master_seed: int = 0) -> list[dict]:
    """Mean trigger distances per (serving-panel distance, element count,
    margin) cell, averaged over seeded fading realizations, plus the
    panel-free baseline rows (one per distance and margin).

    Per-cell seeds derive from the cell identity, so any execution order
    reproduces the same table.
    """
    if realizations < 1:
        raise InvalidArgumentError("realizations must be >= 1")
    rows = []
    for d in d_values:
        traj = build_trajectory(params, d)
        baseline_layout = build_layout(params, d, max(int(n) for n in n_values))
        base_trace = rsrp_along_trajectory(baseline_layout, traj, ris_enabled=False)
        for t_h in t_h_db_values:
            res = ho_trigger_distance(base_trace, t_h)
            rows.append({
                "d_serving_ris_m": float(d), "n_elements": 0,
                "t_h_db": float(t_h), "ris_enabled": 0,
                "mean_trigger_m": res.distance_m, "std_err_m": 0.0,
                "triggered_fraction": float(res.triggered),
                "realizations": 1,
            })
        for n in n_values:
            layout = build_layout(params, d, int(n))
            dists = {t_h: [] for t_h in t_h_db_values}
            trig = {t_h: [] for t_h in t_h_db_values}
            for r in range(realizations):
                seed = np.random.SeedSequence(
                    [master_seed, int(round(d * 1000)), int(n), r])
                rng = np.random.default_rng(seed)
                trace = rsrp_along_trajectory(layout, traj, ris_enabled=True,
                                              rng=rng)
                for t_h in t_h_db_values:
                    res = ho_trigger_distance(trace, t_h)
                    dists[t_h].append(res.distance_m)
                    trig[t_h].append(res.triggered)
            for t_h in t_h_db_values:
                arr = np.asarray(dists[t_h])
                se = float(arr.std(ddof=1) / math.sqrt(arr.size)) \
                    if arr.size > 1 else 0.0
                rows.append({
                    "d_serving_ris_m": float(d), "n_elements": int(n),
                    "t_h_db": float(t_h), "ris_enabled": 1,
                    "mean_trigger_m": float(arr.mean()), "std_err_m": se,
                    "triggered_fraction": float(np.mean(trig[t_h])),
                    "realizations": realizations,
                })
    return rows


# ---------------------------------------------------------------------------
# handover-probability sweeps


def direct_link_snr_samples(params: SweepScenario, layout: ScenarioLayout,
                            ue_x: np.ndarray,
                            rng: np.random.Generator) -> np.ndarray:
    """Instantaneous SNR of the direct serving link at pooled positions:
    exact single-hop Gaussian fading scaled by the free-space budget."""
    hop = HopGainStats(1.0, params.scattering_kappa)
    unit = SnrModel(cascade_moments(hop, HopGainStats(1.0, 0.0), 1), 1.0)
    fade_sq = sample_snr_exact(rng, unit, size=ue_x.size)
    d = np.abs(ue_x - layout.serving_bs_pos[0])
    amp = params.wavelength_m / (4.0 * np.pi * d)
    return layout.avg_snr * amp ** 2 * fade_sq


def ris_link_snr_samples(params: SweepScenario, layout: ScenarioLayout,
                         n_elements: int, ue_x: np.ndarray,
                         rng: np.random.Generator) -> np.ndarray:
    """Instantaneous SNR of the target-via-panel link at pooled positions:
    exact N-element cascade fading (normalized to unit mean) scaled by the
    virtual-source budget."""
    hop = HopGainStats(1.0, params.scattering_kappa)
    unit = SnrModel(cascade_moments(hop, hop, n_elements), 1.0)
    fade_sq = sample_snr_exact(rng, unit, size=ue_x.size) / n_elements ** 2
    d_tr = float(np.linalg.norm(layout.target_bs_pos - layout.ris_pos))
    d2 = np.sqrt((ue_x - layout.ris_pos[0]) ** 2 + layout.ris_pos[1] ** 2)
    amp = params.wavelength_m / (4.0 * np.pi * (d_tr + d2))
    q = ris_efficiency(n_elements, params.eff_half_n) \
        * 10.0 ** (params.ris_boost_db / 10.0)
    return layout.avg_snr * amp ** 2 * q * fade_sq


def ho_probability_sweep(params: SweepScenario, d_serving_ris_m: float,
                         n_values, hho_thresholds, sho_thresholds,
                         n_samples: int = 100_000,
                         master_seed: int = 0,
                         sho_t_hh: float = 2e-2) -> list[dict]:
    """Hard and soft trigger probabilities over threshold grids for each
    element count.

    Error-rate pairs are pooled along the segment between the panel and the
    target: the serving link is direct, the candidate reaches the target
    through the panel. The soft sweep holds the hard threshold at
    ``sho_t_hh`` (above the soft grid, keeping the threshold ordering
    valid across the whole range).
    """
    if n_samples < 1:
        raise InvalidArgumentError("n_samples must be >= 1")
    layout = build_layout(params, d_serving_ris_m, max(int(n) for n in n_values))
    length = params.separation_factor * d_serving_ris_m
    pos_rng = np.random.default_rng(np.random.SeedSequence([master_seed, 1]))
    ue_x = pos_rng.uniform(d_serving_ris_m, length - params.start_offset_m,
                           n_samples)
    serving_rng = np.random.default_rng(np.random.SeedSequence([master_seed, 2]))
    serving_ber = ber_kernel(
        direct_link_snr_samples(params, layout, ue_x, serving_rng))

    rows = []
    for n in sorted(int(v) for v in n_values):
        cand_rng = np.random.default_rng(np.random.SeedSequence([master_seed, 3, n]))
        cand_ber = ber_kernel(
            ris_link_snr_samples(params, layout, n, ue_x, cand_rng))
        for t_hh in hho_thresholds:
            th = HoThresholds(t_hh=float(t_hh), t_hs=float(t_hh) / 100.0,
                              epsilon=float(t_hh) / 10.0, load_threshold=0)
            p = hho_probability(serving_ber, cand_ber, th)
            rows.append({"kind": "hho", "n_elements": n,
                         "threshold": float(t_hh), "probability": p,
                         "n_samples": n_samples})
        for t_hs in sho_thresholds:
            th = HoThresholds(t_hh=sho_t_hh, t_hs=float(t_hs),
                              epsilon=sho_t_hh / 10.0, load_threshold=0)
            p = sho_probability(serving_ber, cand_ber, th)
            rows.append({"kind": "sho", "n_elements": n,
                         "threshold": float(t_hs), "probability": p,
                         "n_samples": n_samples})
    return rows

"""Batch experiment runner.

Configs are flat ``key = value`` text files with dotted namespaces; values
use JSON syntax (numbers, strings, booleans, arrays). ``ris-ho-sim schema``
prints every key with its type and default. Each run writes
``<experiment>.csv``, optionally ``<experiment>.svg``, and a
``manifest.json`` with the config hash and seed so artifacts can be
reproduced bit-exactly.

Exit codes: 0 success, 2 config validation failure, 3 numerical failure.
"""

from __future__ import annotations

import argparse
import csv
import hashlib
import io
import json
import os
import sys
import time
from dataclasses import dataclass

import numpy as np

from . import svg_plot
from .cascade_stats import HopGainStats, SnrModel, cascade_moments
from .errors import ConfigError, NumericalFailureError, RisHoSimError
from .field_model import (HeatmapGrid, RisPanel, SourceGeometry, beam_heatmap,
                          configure_focus_phases)
from .ho_engine import (HoDecision, HoThresholds, LinkKind, LinkMeasurement,
                        ServingState, decide_handover)
from .link_metrics import (OutageThreshold, average_ber, ergodic_capacity,
                           mc_metrics, outage_probability)
from .scenario_sim import (SweepScenario, ho_probability_sweep,
                           trigger_distance_sweep)

TOOL_VERSION = "0.1.0"

EXPERIMENTS = ("metrics_vs_n", "heatmap", "trigger_distance",
               "ho_probability", "decide")

# key -> (type tag, default, help)
SCHEMA: dict[str, tuple] = {
    "experiment": ("str", None, "one of " + ", ".join(EXPERIMENTS)),
    "seed": ("int", 12345, "master seed for every random stream"),
    "output_dir": ("str", "out", "artifact directory"),
    "plots": ("bool", True, "emit SVG plots next to the CSV"),

    "thresholds.t_hh": ("float", 1e-3, "hard handover error-rate threshold"),
    "thresholds.t_hs": ("float", 1e-5, "soft handover error-rate threshold"),
    "thresholds.epsilon": ("float", 1e-4, "ping-pong margin around t_hh"),
    "thresholds.load": ("int", 50, "active-connection count triggering load shedding"),

    "metrics.n_values": ("list_int", [32, 64, 128], "element counts to sweep"),
    "metrics.hop1_mean": ("float", 0.1, "first-hop mean gain"),
    "metrics.hop1_var": ("float", 1e-3, "first-hop gain variance"),
    "metrics.hop2_mean": ("float", 0.1, "second-hop mean gain"),
    "metrics.hop2_var": ("float", 1e-3, "second-hop gain variance"),
    "metrics.avg_snr": ("float", 100.0, "average SNR (linear)"),
    "metrics.outage_gamma_th": ("float", 10.0, "outage SNR threshold (linear)"),
    "metrics.mc_samples": ("int", 1_000_000, "Monte Carlo sample count"),

    "heatmap.n_elements": ("int", 64, "element count (perfect square)"),
    "heatmap.aperture_d_m": ("float", 1.0, "panel aperture diameter"),
    "heatmap.wavelength_m": ("float", 0.1, "carrier wavelength"),
    "heatmap.rho_m": ("float", 30.0, "transmitter-to-panel distance"),
    "heatmap.theta_i_rad": ("float", 0.0, "incidence angle"),
    "heatmap.focal_x_m": ("float", 0.0, "focal point, transverse"),
    "heatmap.focal_z_m": ("float", 8.0, "focal point, depth"),
    "heatmap.x_half_span_m": ("float", 1.5, "half-extent of the x grid"),
    "heatmap.nx": ("int", 61, "grid points along x"),
    "heatmap.z_min_m": ("float", 3.0, "grid start depth"),
    "heatmap.z_max_m": ("float", 18.0, "grid end depth"),
    "heatmap.nz": ("int", 76, "grid points along z"),
    "heatmap.gauss_order": ("int", 8, "per-element quadrature order"),

    "scenario.aperture_d_m": ("float", 0.9, "panel aperture diameter"),
    "scenario.wavelength_m": ("float", 0.01, "carrier wavelength"),
    "scenario.separation_factor": ("float", 2.0,
                                   "inter-site distance over serving-panel distance"),
    "scenario.lateral_offset_m": ("float", 10.0, "panel offset from the walk line"),
    "scenario.tx_power_dbm": ("float", 30.0, "transmit power"),
    "scenario.noise_power_dbm": ("float", -94.0, "noise power"),
    "scenario.kappa": ("float", 0.1, "per-hop scattering factor (var/mean^2)"),
    "scenario.eff_half_n": ("float", 64.0, "element count at half efficiency"),
    "scenario.boost_db": ("float", 1.7, "reflected-path budget offset"),
    "scenario.step_m": ("float", 0.1, "trace sample spacing along the walk"),

    "trigger.d_values": ("list_float", [60.0, 150.0],
                         "serving-to-panel distances"),
    "trigger.n_values": ("list_int", [32, 64, 128, 256], "element counts"),
    "trigger.t_h_db_values": ("list_float", [-2.0, 0.0, 2.0], "margins (dB)"),
    "trigger.realizations": ("int", 200, "fading realizations per cell"),

    "ho.d_serving_ris_m": ("float", 150.0, "serving-to-panel distance"),
    "ho.n_values": ("list_int", [32, 64, 128], "element counts"),
    "ho.hho_grid_min": ("float", 1e-7, "hard-threshold grid start"),
    "ho.hho_grid_max": ("float", 1e-2, "hard-threshold grid end"),
    "ho.hho_grid_points": ("int", 11, "hard-threshold grid size"),
    "ho.sho_grid_min": ("float", 1e-7, "soft-threshold grid start"),
    "ho.sho_grid_max": ("float", 1e-2, "soft-threshold grid end"),
    "ho.sho_grid_points": ("int", 11, "soft-threshold grid size"),
    "ho.samples": ("int", 100_000, "paired realizations per cell"),
    "ho.sho_t_hh": ("float", 2e-2, "hard threshold held fixed during the soft sweep"),

    "decide.serving_id": ("str", "serving", "serving link id"),
    "decide.serving_ber": ("float", 1e-2, "serving link error rate"),
    "decide.active_connections": ("int", 10, "serving cell load"),
    "decide.direct_ids": ("list_str", [], "candidate direct link ids"),
    "decide.direct_bers": ("list_float", [], "candidate direct link error rates"),
    "decide.nondirect_ids": ("list_str", [], "reflected link ids"),
    "decide.nondirect_bers": ("list_float", [], "reflected link error rates"),
}


@dataclass(frozen=True)
class ExperimentConfig:
    values: dict

    def __getitem__(self, key):
        return self.values[key]

    def canonical_text(self) -> str:
        lines = []
        for key in sorted(self.values):
            lines.append(f"{key} = {json.dumps(self.values[key])}")
        return "\n".join(lines) + "\n"

    def config_hash(self) -> str:
        return hashlib.sha256(self.canonical_text().encode()).hexdigest()


def _coerce(key: str, raw, errors: list):
    kind = SCHEMA[key][0]
    try:
        if kind == "str":
            if not isinstance(raw, str):
                raise TypeError
            return raw
        if kind == "bool":
            if not isinstance(raw, bool):
                raise TypeError
            return raw
        if kind == "int":
            if isinstance(raw, bool) or not isinstance(raw, int):
                raise TypeError
            return raw
        if kind == "float":
            if isinstance(raw, bool) or not isinstance(raw, (int, float)):
                raise TypeError
            return float(raw)
        if kind.startswith("list_"):
            if not isinstance(raw, list):
                raise TypeError
            inner = kind[5:]
            out = []
            for item in raw:
                if inner == "int":
                    if isinstance(item, bool) or not isinstance(item, int):
                        raise TypeError
                    out.append(item)
                elif inner == "float":
                    if isinstance(item, bool) or not isinstance(item, (int, float)):
                        raise TypeError
                    out.append(float(item))
                else:
                    if not isinstance(item, str):
                        raise TypeError
                    out.append(item)
            return out
        raise AssertionError(f"unhandled schema kind {kind}")
    except TypeError:
        errors.append(f"{key}: expected {kind}, got {raw!r}")
        return SCHEMA[key][1]


def _cross_validate(values: dict, errors: list):
    if values["experiment"] and values["experiment"] not in EXPERIMENTS:
        errors.append(
            f"experiment: {values['experiment']!r} is not one of {EXPERIMENTS}")
    if values["seed"] < 0:
        errors.append("seed: must be non-negative")
    t_hh, t_hs = values["thresholds.t_hh"], values["thresholds.t_hs"]
    eps = values["thresholds.epsilon"]
    if not (0 < t_hs < t_hh < 0.5):
        errors.append("thresholds: need 0 < t_hs < t_hh < 0.5")
    if not (0 < eps < t_hh):
        errors.append("thresholds: need 0 < epsilon < t_hh")
    if values["thresholds.load"] < 0:
        errors.append("thresholds.load: must be non-negative")
    for key in ("metrics.hop1_var", "metrics.hop2_var"):
        if values[key] < 0:
            errors.append(f"{key}: must be non-negative")
    for key in ("metrics.avg_snr", "heatmap.aperture_d_m",
                "heatmap.wavelength_m", "heatmap.rho_m", "heatmap.focal_z_m",
                "scenario.aperture_d_m", "scenario.wavelength_m",
                "scenario.step_m", "ho.d_serving_ris_m"):
        if values[key] <= 0:
            errors.append(f"{key}: must be positive")
    for key in ("metrics.n_values", "trigger.n_values", "ho.n_values"):
        if not values[key] or any(n < 1 for n in values[key]):
            errors.append(f"{key}: needs at least one element count >= 1")
    side = int(round(values["heatmap.n_elements"] ** 0.5))
    if side * side != values["heatmap.n_elements"]:
        errors.append("heatmap.n_elements: must be a perfect square")
    for key in ("metrics.mc_samples", "trigger.realizations", "ho.samples"):
        if values[key] < 1:
            errors.append(f"{key}: must be >= 1")
    for lo_key, hi_key in (("ho.hho_grid_min", "ho.hho_grid_max"),
                           ("ho.sho_grid_min", "ho.sho_grid_max")):
        if not (0 < values[lo_key] <= values[hi_key] < 0.5):
            errors.append(f"{lo_key}/{hi_key}: need 0 < min <= max < 0.5")
    if values["ho.sho_t_hh"] <= values["ho.sho_grid_max"]:
        errors.append("ho.sho_t_hh: must exceed ho.sho_grid_max "
                      "(soft threshold stays below the hard one)")
    if len(values["decide.direct_ids"]) != len(values["decide.direct_bers"]):
        errors.append("decide.direct_ids/direct_bers: lengths differ")
    if len(values["decide.nondirect_ids"]) != len(values["decide.nondirect_bers"]):
        errors.append("decide.nondirect_ids/nondirect_bers: lengths differ")


def validate_config(text: str) -> ExperimentConfig:
    """Parse and normalize config text; raises ``ConfigError`` listing every
    problem at once. Normalization fills all defaults, so the result echoes
    the complete schema and is idempotent."""
    errors: list[str] = []
    seen: dict = {}
    for lineno, line in enumerate(text.splitlines(), start=1):
        stripped = line.strip()
        if not stripped or stripped.startswith("#"):
            continue
        if "=" not in stripped:
            errors.append(f"line {lineno}: expected 'key = value'")
            continue
        key, _, raw = stripped.partition("=")
        key = key.strip()
        raw = raw.strip()
        if key not in SCHEMA:
            errors.append(f"line {lineno}: unknown key {key!r}")
            continue
        if key in seen:
            errors.append(f"line {lineno}: duplicate key {key!r}")
            continue
        try:
            seen[key] = json.loads(raw)
        except json.JSONDecodeError:
            seen[key] = raw  # bare strings allowed for str-typed keys
    values = {}
    for key, (kind, default, _help) in SCHEMA.items():
        if key in seen:
            values[key] = _coerce(key, seen[key], errors)
        elif default is None:
            errors.append(f"{key}: required key missing")
            values[key] = ""
        else:
            values[key] = default
    _cross_validate(values, errors)
    if errors:
        raise ConfigError(errors)
    return ExperimentConfig(values)


# ---------------------------------------------------------------------------
# CSV / manifest / plot output


def _fmt_cell(v) -> str:
    if isinstance(v, bool):
        return "1" if v else "0"
    if isinstance(v, float):
        if not np.isfinite(v):
            raise NumericalFailureError(f"non-finite value {v} in result table")
        return f"{v:.17g}"
    return str(v)


def _write_csv(path: str, columns: list[str], rows: list[dict]) -> None:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(columns)
    for row in rows:
        writer.writerow([_fmt_cell(row[c]) for c in columns])
    with open(path, "w", encoding="utf-8", newline="") as fh:
        fh.write(buf.getvalue())


def _read_csv(path: str) -> tuple[list[str], list[dict]]:
    with open(path, encoding="utf-8", newline="") as fh:
        reader = csv.reader(fh)
        columns = next(reader)
        rows = [dict(zip(columns, row)) for row in reader]
    return columns, rows


def _write_manifest(out_dir: str, cfg: ExperimentConfig, artifacts: list[str],
                    elapsed_s: float, extra: dict | None = None) -> None:
    manifest = {
        "tool_version": TOOL_VERSION,
        "experiment": cfg["experiment"],
        "seed": cfg["seed"],
        "config_hash": cfg.config_hash(),
        "config": cfg.values,
        "artifacts": artifacts,
        "wall_clock_s": round(elapsed_s, 3),
    }
    if extra:
        manifest.update(extra)
    path = os.path.join(out_dir, "manifest.json")
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(manifest, fh, indent=2, sort_keys=True)
        fh.write("\n")


# ---------------------------------------------------------------------------
# experiments


def _run_metrics_vs_n(cfg: ExperimentConfig, out_dir: str) -> list[str]:
    hop1 = HopGainStats(cfg["metrics.hop1_mean"], cfg["metrics.hop1_var"])
    hop2 = HopGainStats(cfg["metrics.hop2_mean"], cfg["metrics.hop2_var"])
    th = OutageThreshold(cfg["metrics.outage_gamma_th"])
    rows = []
    for n in cfg["metrics.n_values"]:
        model = SnrModel(cascade_moments(hop1, hop2, n), cfg["metrics.avg_snr"])
        quad = {"ber": average_ber(model),
                "outage": outage_probability(model, th),
                "capacity": ergodic_capacity(model)}
        rng = np.random.default_rng(np.random.SeedSequence([cfg["seed"], n]))
        mc = mc_metrics(rng, model, cfg["metrics.mc_samples"], th)._asdict()
        for metric in ("ber", "outage", "capacity"):
            rows.append({
                "n_elements": n, "metric": metric,
                "quad_value": quad[metric].value,
                "quad_abs_err": quad[metric].abs_error_est,
                "mc_value": mc[metric].value,
                "mc_std_err": mc[metric].abs_error_est,
                "mc_samples": mc[metric].n_samples,
            })
    columns = ["n_elements", "metric", "quad_value", "quad_abs_err",
               "mc_value", "mc_std_err", "mc_samples"]
    csv_path = os.path.join(out_dir, "metrics_vs_n.csv")
    _write_csv(csv_path, columns, rows)
    artifacts = ["metrics_vs_n.csv"]
    if cfg["plots"]:
        artifacts.append(_plot_metrics_vs_n(csv_path, out_dir))
    return artifacts


def _plot_metrics_vs_n(csv_path: str, out_dir: str) -> str:
    _, rows = _read_csv(csv_path)
    series = []
    for metric, log_y in (("ber", True), ("outage", True), ("capacity", False)):
        pts = [(int(r["n_elements"]), float(r["quad_value"]))
               for r in rows if r["metric"] == metric]
        mcs = [(int(r["n_elements"]), float(r["mc_value"]))
               for r in rows if r["metric"] == metric]
        series.append({"label": f"{metric} (quadrature)",
                       "x": [p[0] for p in pts], "y": [p[1] for p in pts]})
        series.append({"label": f"{metric} (monte carlo)",
                       "x": [p[0] for p in mcs], "y": [p[1] for p in mcs]})
    svg = svg_plot.line_chart(series, "Link metrics vs element count",
                              "element count N", "metric value", log_y=True)
    name = "metrics_vs_n.svg"
    with open(os.path.join(out_dir, name), "w", encoding="utf-8") as fh:
        fh.write(svg)
    return name


def _run_heatmap(cfg: ExperimentConfig, out_dir: str) -> tuple[list[str], dict]:
    panel = RisPanel.square_grid(cfg["heatmap.n_elements"],
                                 cfg["heatmap.aperture_d_m"])
    src = SourceGeometry(cfg["heatmap.rho_m"], cfg["heatmap.theta_i_rad"])
    lam = cfg["heatmap.wavelength_m"]
    panel = configure_focus_phases(panel, src, cfg["heatmap.focal_x_m"],
                                   cfg["heatmap.focal_z_m"], lam,
                                   cfg["heatmap.gauss_order"])
    grid = HeatmapGrid(
        np.linspace(-cfg["heatmap.x_half_span_m"], cfg["heatmap.x_half_span_m"],
                    cfg["heatmap.nx"]),
        np.linspace(cfg["heatmap.z_min_m"], cfg["heatmap.z_max_m"],
                    cfg["heatmap.nz"]))
    bmap = beam_heatmap(panel, src, grid, lam, cfg["heatmap.gauss_order"])
    rows = []
    for iz, z in enumerate(bmap.z_m):
        for ix, x in enumerate(bmap.x_m):
            rows.append({"x_m": float(x), "z_m": float(z),
                         "power_db": float(bmap.power_db[iz, ix])})
    csv_path = os.path.join(out_dir, "heatmap.csv")
    _write_csv(csv_path, ["x_m", "z_m", "power_db"], rows)
    artifacts = ["heatmap.csv"]
    if cfg["plots"]:
        artifacts.append(_plot_heatmap(csv_path, out_dir))
    stats = {"beam_stats": {
        "peak_x_m": bmap.stats.peak_x_m, "peak_z_m": bmap.stats.peak_z_m,
        "width_x_3db_m": bmap.stats.width_x_3db_m,
        "depth_z_3db_m": bmap.stats.depth_z_3db_m,
    }}
    return artifacts, stats


def _plot_heatmap(csv_path: str, out_dir: str) -> str:
    _, rows = _read_csv(csv_path)
    xs = sorted({float(r["x_m"]) for r in rows})
    zs = sorted({float(r["z_m"]) for r in rows})
    xi = {x: i for i, x in enumerate(xs)}
    zi = {z: i for i, z in enumerate(zs)}
    grid = [[0.0] * len(xs) for _ in zs]
    for r in rows:
        grid[zi[float(r["z_m"])]][xi[float(r["x_m"])]] = float(r["power_db"])
    svg = svg_plot.heatmap_chart(xs, zs, grid, "Focused beam power (dB)",
                                 "x (m)", "z (m)")
    name = "heatmap.svg"
    with open(os.path.join(out_dir, name), "w", encoding="utf-8") as fh:
        fh.write(svg)
    return name


def _scenario_params(cfg: ExperimentConfig) -> SweepScenario:
    return SweepScenario(
        aperture_d_m=cfg["scenario.aperture_d_m"],
        wavelength_m=cfg["scenario.wavelength_m"],
        separation_factor=cfg["scenario.separation_factor"],
        lateral_offset_m=cfg["scenario.lateral_offset_m"],
        tx_power_dbm=cfg["scenario.tx_power_dbm"],
        noise_power_dbm=cfg["scenario.noise_power_dbm"],
        scattering_kappa=cfg["scenario.kappa"],
        eff_half_n=cfg["scenario.eff_half_n"],
        ris_boost_db=cfg["scenario.boost_db"],
        step_m=cfg["scenario.step_m"],
    )


def _run_trigger_distance(cfg: ExperimentConfig, out_dir: str) -> list[str]:
    rows = trigger_distance_sweep(
        _scenario_params(cfg), cfg["trigger.n_values"],
        cfg["trigger.t_h_db_values"], cfg["trigger.d_values"],
        realizations=cfg["trigger.realizations"], master_seed=cfg["seed"])
    columns = ["d_serving_ris_m", "n_elements", "t_h_db", "ris_enabled",
               "mean_trigger_m", "std_err_m", "triggered_fraction",
               "realizations"]
    csv_path = os.path.join(out_dir, "trigger_distance.csv")
    _write_csv(csv_path, columns, rows)
    artifacts = ["trigger_distance.csv"]
    if cfg["plots"]:
        artifacts.append(_plot_trigger_distance(csv_path, out_dir))
    return artifacts


def _plot_trigger_distance(csv_path: str, out_dir: str) -> str:
    _, rows = _read_csv(csv_path)
    series = []
    keys = sorted({(float(r["d_serving_ris_m"]), float(r["t_h_db"]))
                   for r in rows})
    for d, t_h in keys:
        pts = sorted((int(r["n_elements"]), float(r["mean_trigger_m"]))
                     for r in rows
                     if float(r["d_serving_ris_m"]) == d
                     and float(r["t_h_db"]) == t_h and r["ris_enabled"] == "1")
        series.append({"label": f"D={d:g} m, margin {t_h:+g} dB",
                       "x": [p[0] for p in pts], "y": [p[1] for p in pts]})
    svg = svg_plot.line_chart(series, "Trigger distance vs element count",
                              "element count N", "trigger distance (m)")
    name = "trigger_distance.svg"
    with open(os.path.join(out_dir, name), "w", encoding="utf-8") as fh:
        fh.write(svg)
    return name


def _log_grid(lo: float, hi: float, points: int) -> list[float]:
    return list(np.logspace(np.log10(lo), np.log10(hi), points))


def _run_ho_probability(cfg: ExperimentConfig, out_dir: str) -> list[str]:
    rows = ho_probability_sweep(
        _scenario_params(cfg), cfg["ho.d_serving_ris_m"], cfg["ho.n_values"],
        _log_grid(cfg["ho.hho_grid_min"], cfg["ho.hho_grid_max"],
                  cfg["ho.hho_grid_points"]),
        _log_grid(cfg["ho.sho_grid_min"], cfg["ho.sho_grid_max"],
                  cfg["ho.sho_grid_points"]),
        n_samples=cfg["ho.samples"], master_seed=cfg["seed"],
        sho_t_hh=cfg["ho.sho_t_hh"])
    columns = ["kind", "n_elements", "threshold", "probability", "n_samples"]
    csv_path = os.path.join(out_dir, "ho_probability.csv")
    _write_csv(csv_path, columns, rows)
    artifacts = ["ho_probability.csv"]
    if cfg["plots"]:
        artifacts.append(_plot_ho_probability(csv_path, out_dir))
    return artifacts


def _plot_ho_probability(csv_path: str, out_dir: str) -> str:
    _, rows = _read_csv(csv_path)
    series = []
    keys = sorted({(r["kind"], int(r["n_elements"])) for r in rows})
    for kind, n in keys:
        pts = sorted((float(r["threshold"]), float(r["probability"]))
                     for r in rows
                     if r["kind"] == kind and int(r["n_elements"]) == n)
        series.append({"label": f"{kind.upper()}, N={n}",
                       "x": [p[0] for p in pts], "y": [p[1] for p in pts]})
    svg = svg_plot.line_chart(series, "Handover probability vs threshold",
                              "error-rate threshold", "probability",
                              log_x=True)
    name = "ho_probability.svg"
    with open(os.path.join(out_dir, name), "w", encoding="utf-8") as fh:
        fh.write(svg)
    return name


def _run_decide(cfg: ExperimentConfig, out_dir: str) -> list[str]:
    serving = LinkMeasurement(cfg["decide.serving_id"], LinkKind.DIRECT,
                              cfg["decide.serving_ber"])
    state = ServingState(serving, cfg["decide.active_connections"])
    direct = [LinkMeasurement(i, LinkKind.DIRECT, b)
              for i, b in zip(cfg["decide.direct_ids"],
                              cfg["decide.direct_bers"])]
    non_direct = [LinkMeasurement(i, LinkKind.NON_DIRECT, b)
                  for i, b in zip(cfg["decide.nondirect_ids"],
                                  cfg["decide.nondirect_bers"])]
    th = HoThresholds(cfg["thresholds.t_hh"], cfg["thresholds.t_hs"],
                      cfg["thresholds.epsilon"], cfg["thresholds.load"])
    decision: HoDecision = decide_handover(state, direct, non_direct, th)
    rows = [{
        "serving_ber": cfg["decide.serving_ber"],
        "active_connections": cfg["decide.active_connections"],
        "mode": decision.mode.value,
        "chosen_link": decision.chosen_link or "",
    }]
    csv_path = os.path.join(out_dir, "decide.csv")
    _write_csv(csv_path, ["serving_ber", "active_connections", "mode",
                          "chosen_link"], rows)
    return ["decide.csv"]


def run_experiment(cfg: ExperimentConfig) -> list[str]:
    """Execute the configured experiment, writing artifacts plus the
    manifest into the output directory. Returns artifact names."""
    out_dir = cfg["output_dir"]
    os.makedirs(out_dir, exist_ok=True)
    start = time.monotonic()
    extra = None
    name = cfg["experiment"]
    if name == "metrics_vs_n":
        artifacts = _run_metrics_vs_n(cfg, out_dir)
    elif name == "heatmap":
        artifacts, extra = _run_heatmap(cfg, out_dir)
    elif name == "trigger_distance":
        artifacts = _run_trigger_distance(cfg, out_dir)
    elif name == "ho_probability":
        artifacts = _run_ho_probability(cfg, out_dir)
    elif name == "decide":
        artifacts = _run_decide(cfg, out_dir)
    else:  # pragma: no cover - validation rejects unknown names
        raise ConfigError([f"experiment: unknown {name!r}"])
    _write_manifest(out_dir, cfg, artifacts, time.monotonic() - start, extra)
    return artifacts


# ---------------------------------------------------------------------------
# entry point


def _load_config(path: str, seed_override, out_override,
                 no_plots: bool) -> ExperimentConfig:
    with open(path, encoding="utf-8") as fh:
        text = fh.read()
    cfg = validate_config(text)
    values = dict(cfg.values)
    env_seed = os.environ.get("RIS_HO_SEED")
    if env_seed is not None:
        try:
            values["seed"] = int(env_seed)
        except ValueError:
            raise ConfigError([f"RIS_HO_SEED: not an integer: {env_seed!r}"])
    if seed_override is not None:
        values["seed"] = seed_override
    if out_override is not None:
        values["output_dir"] = out_override
    if no_plots:
        values["plots"] = False
    return ExperimentConfig(values)


def print_schema(stream=None) -> None:
    stream = stream or sys.stdout
    stream.write("# configuration schema: key = value per line, JSON values\n")
    for key, (kind, default, help_text) in SCHEMA.items():
        default_str = "required" if default is None \
            else f"default {json.dumps(default)}"
        stream.write(f"{key:28s} {kind:10s} {default_str:24s} # {help_text}\n")


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(
        prog="ris-ho-sim",
        description="Batch experiments for the reflecting-panel handover simulator")
    sub = parser.add_subparsers(dest="command", required=True)
    for cmd in ("run", "validate"):
        p = sub.add_parser(cmd)
        p.add_argument("--config", required=True, help="config file path")
        if cmd == "run":
            p.add_argument("--seed", type=int, default=None,
                           help="override the config seed")
            p.add_argument("--out", default=None,
                           help="override the output directory")
            p.add_argument("--no-plots", action="store_true",
                           help="skip SVG artifacts")
    sub.add_parser("schema")
    args = parser.parse_args(argv)

    if args.command == "schema":
        print_schema()
        return 0
    try:
        if args.command == "validate":
            with open(args.config, encoding="utf-8") as fh:
                cfg = validate_config(fh.read())
            sys.stdout.write(cfg.canonical_text())
            return 0
        cfg = _load_config(args.config, args.seed, args.out, args.no_plots)
        artifacts = run_experiment(cfg)
        for name in artifacts:
            print(os.path.join(cfg["output_dir"], name))
        return 0
    except ConfigError as exc:
        for err in exc.errors:
            print(f"config error: {err}", file=sys.stderr)
        return 2
    except NumericalFailureError as exc:
        print(f"numerical failure: {exc}", file=sys.stderr)
        return 3
    except (RisHoSimError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())

import math

import numpy as np
import pytest

from ris_ho_sim import (CarrierConfig, FocusConfig, HeatmapGrid, Region,
                        RisPanel, SourceGeometry, array_fraunhofer_distance,
                        beam_heatmap, classify_region,
                        compound_channel_element, configure_focus_phases,
                        focusing_gain_closed, focusing_gain_integral,
                        fraunhofer_distance, fresnel_integrals,
                        incident_field, reflected_field_at_ue)
from ris_ho_sim.errors import (DomainError, InvalidArgumentError,
                               SingularFocusError)
from ris_ho_sim.quadrature import adaptive_quad

LAM = 0.01


# ---------------------------------------------------------------------------
# carrier / panel / geometry types


def test_carrier_consistency_enforced():
    CarrierConfig(0.01, 29979245800.0)
    with pytest.raises(InvalidArgumentError):
        CarrierConfig(0.01, 3.1e10)
    c = CarrierConfig.from_wavelength(0.01)
    assert c.carrier_freq_hz == pytest.approx(29979245800.0)


def test_panel_grid_centers_follow_the_index_formula():
    panel = RisPanel.square_grid(16, 1.0)
    pitch = 1.0 / math.sqrt(2.0)
    # row-major over (r, c), 1-based index formula
    for r in range(4):
        for c in range(4):
            cx, cy = panel.element_centers[panel.element_index(r, c)]
            assert cx == pytest.approx(((r + 1) - 2.5) * pitch)
            assert cy == pytest.approx(((c + 1) - 2.5) * pitch)


def test_panel_rejects_non_square_grid():
    with pytest.raises(InvalidArgumentError):
        RisPanel.square_grid(12, 1.0)


def test_abstract_panel_allows_any_count():
    panel = RisPanel.abstract(32, 1.0)
    assert not panel.has_grid
    with pytest.raises(InvalidArgumentError):
        panel.element_index(0, 0)


def test_panel_validates_phase_and_amplitude_ranges():
    with pytest.raises(InvalidArgumentError):
        RisPanel.square_grid(4, 1.0, phase_shifts=[0, 0, 0, 7.0])
    with pytest.raises(InvalidArgumentError):
        RisPanel.square_grid(4, 1.0, amplitudes=[0.5, 1.0, 1.2, 0.1])


def test_source_geometry_requires_positive_distance():
    with pytest.raises(InvalidArgumentError):
        SourceGeometry(rho_m=0.0, theta_i_rad=0.0)


# ---------------------------------------------------------------------------
# region boundaries


def test_fraunhofer_distance_values():
    assert fraunhofer_distance(1.0, 0.01) == pytest.approx(200.0)
    assert fraunhofer_distance(0.0, 0.01) == 0.0
    assert array_fraunhofer_distance(100, 1.0, 0.01) == pytest.approx(20000.0)
    with pytest.raises(InvalidArgumentError):
        fraunhofer_distance(1.0, 0.0)
    with pytest.raises(InvalidArgumentError):
        fraunhofer_distance(1.0, -0.01)


def test_classify_region_boundaries():
    # far-field boundary inclusive
    assert classify_region(200.0, 1.0, LAM) == Region.FAR_FIELD
    # radiative lower boundary inclusive
    assert classify_region(1.2, 1.0, LAM) == Region.RADIATIVE_NEAR_FIELD
    assert classify_region(50.0, 1.0, LAM) == Region.RADIATIVE_NEAR_FIELD
    assert classify_region(1.1999, 1.0, LAM) == Region.REACTIVE_NEAR_FIELD
    with pytest.raises(InvalidArgumentError):
        classify_region(-1.0, 1.0, LAM)


def test_classify_region_partitions_distances():
    rng = np.random.default_rng(3)
    for d in rng.uniform(0.0, 400.0, 200):
        region = classify_region(float(d), 1.0, LAM)
        assert region in (Region.REACTIVE_NEAR_FIELD,
                          Region.RADIATIVE_NEAR_FIELD, Region.FAR_FIELD)
        if d >= 200.0:
            assert region == Region.FAR_FIELD
        elif d >= 1.2:
            assert region == Region.RADIATIVE_NEAR_FIELD
        else:
            assert region == Region.REACTIVE_NEAR_FIELD


# ---------------------------------------------------------------------------
# fields


def test_incident_field_magnitude_uniform():
    src = SourceGeometry(rho_m=250.0, theta_i_rad=0.0, e_incident=2.0)
    expected = 2.0 / (2.0 * math.sqrt(math.pi * 250.0))
    for x in (-0.4, 0.0, 1.3):
        assert abs(incident_field(x, 0.7, src, LAM)) == pytest.approx(expected)


def test_incident_field_phase_at_origin():
    src = SourceGeometry(rho_m=250.0, theta_i_rad=0.3)
    val = incident_field(0.0, 0.0, src, LAM)
    expected_phase = (-2.0 * math.pi * 250.0 / LAM) % (2.0 * math.pi)
    assert np.angle(val) % (2.0 * math.pi) == pytest.approx(expected_phase,
                                                            abs=1e-6)


def test_incident_field_relative_phase_shift_with_angle():
    # moving one wavelength along x at 30 degrees incidence shifts the phase
    # by -2 pi sin(pi/6) = -pi
    src = SourceGeometry(rho_m=250.0, theta_i_rad=math.pi / 6.0)
    ratio = incident_field(LAM, 0.0, src, LAM) / incident_field(0.0, 0.0, src, LAM)
    # -pi and +pi are the same point on the circle; compare as complex
    assert ratio == pytest.approx(np.exp(-1j * math.pi), abs=1e-9)


def test_incident_field_independent_of_y():
    src = SourceGeometry(rho_m=250.0, theta_i_rad=0.4)
    assert incident_field(0.2, -5.0, src, LAM) == pytest.approx(
        incident_field(0.2, 5.0, src, LAM))


def test_incident_field_domain_error():
    src = SourceGeometry(rho_m=1.0, theta_i_rad=0.0)
    object.__setattr__(src, "rho_m", 0.0)
    with pytest.raises(DomainError):
        incident_field(0.0, 0.0, src, LAM)


def test_reflected_field_on_axis_magnitude():
    # on axis the printed amplitude reduces to e0 / (2 sqrt(pi) z)
    for z in (1.0, 2.5, math.pi):
        val = reflected_field_at_ue(0.0, 0.0, z, 2.0, LAM)
        assert abs(val) == pytest.approx(2.0 / (2.0 * math.sqrt(math.pi) * z))
    val = reflected_field_at_ue(0.0, 0.0, math.pi, 2.0, LAM)
    assert abs(val) == pytest.approx(math.pi ** -1.5)


def test_reflected_field_even_in_x_and_y():
    for x, y in ((0.3, 0.8), (1.1, -0.2)):
        base = abs(reflected_field_at_ue(x, y, 4.0, 1.0, LAM))
        assert abs(reflected_field_at_ue(-x, y, 4.0, 1.0, LAM)) == \
            pytest.approx(base)
        assert abs(reflected_field_at_ue(x, -y, 4.0, 1.0, LAM)) == \
            pytest.approx(base)


def test_reflected_field_matches_printed_formula():
    x, y, z, e0 = 0.4, -0.9, 3.0, 1.7
    r_sq = x * x + y * y + z * z
    expected = (e0 / 2.0) * math.sqrt(
        z * (x * x + z * z) / (math.pi * r_sq ** 2.5)) \
        * np.exp(-0.5j * math.pi * math.sqrt(r_sq))
    assert reflected_field_at_ue(x, y, z, e0, LAM) == pytest.approx(expected)


def test_reflected_field_rejects_nonpositive_depth():
    with pytest.raises(DomainError):
        reflected_field_at_ue(0.0, 0.0, 0.0, 1.0, LAM)
    with pytest.raises(DomainError):
        reflected_field_at_ue(0.0, 0.0, -2.0, 1.0, LAM)


# ---------------------------------------------------------------------------
# fresnel integrals and focusing gain


def test_fresnel_at_zero_exact():
    c, s = fresnel_integrals(0.0)
    assert c == 0.0 and s == 0.0


def test_fresnel_known_point_against_quadrature_oracle():
    c, s = fresnel_integrals(1.0)
    c_oracle = adaptive_quad(lambda t: np.cos(np.pi * t * t / 2.0),
                             0.0, 1.0).value
    s_oracle = adaptive_quad(lambda t: np.sin(np.pi * t * t / 2.0),
                             0.0, 1.0).value
    assert c == pytest.approx(c_oracle, abs=1e-10)
    assert s == pytest.approx(s_oracle, abs=1e-10)
    # frozen values from the quadrature oracle
    assert c == pytest.approx(0.7798934003768228, abs=1e-12)
    assert s == pytest.approx(0.4382591473903547, abs=1e-12)


def test_fresnel_large_argument_limit():
    c, s = fresnel_integrals(80.0)
    assert c == pytest.approx(0.5, abs=1e-2)
    assert s == pytest.approx(0.5, abs=1e-2)


def test_fresnel_odd_symmetry():
    rng = np.random.default_rng(11)
    for a in rng.uniform(-4.0, 4.0, 30):
        c, s = fresnel_integrals(float(a))
        cn, sn = fresnel_integrals(float(-a))
        assert cn == pytest.approx(-c, abs=1e-14)
        assert sn == pytest.approx(-s, abs=1e-14)


def test_fresnel_rejects_nonfinite():
    with pytest.raises(InvalidArgumentError):
        fresnel_integrals(float("nan"))
    with pytest.raises(InvalidArgumentError):
        fresnel_integrals(float("inf"))


def _focus(f_dev, panel, lam=LAM):
    d_fa = array_fraunhofer_distance(panel.n_elements, panel.aperture_d_m, lam)
    return FocusConfig(focal_z_m=100.0, obs_z_m=50.0, f_deviation=f_dev,
                       d_fa_m=d_fa)


def test_focusing_gain_closed_positive_and_vanishes_for_large_argument():
    panel = RisPanel.square_grid(16, 1.0)
    small = focusing_gain_closed(_focus(1e-3, panel))
    assert small > 0
    assert small < 1e-8
    assert focusing_gain_closed(_focus(5.0, panel)) > 0


def test_focusing_gain_closed_singular_at_focus():
    panel = RisPanel.square_grid(16, 1.0)
    cfg = FocusConfig.from_panel(50.0, 50.0, panel, LAM)
    assert cfg.at_focus
    with pytest.raises(SingularFocusError):
        focusing_gain_closed(cfg)


def test_focusing_gain_integral_at_focus_is_area_limit():
    panel = RisPanel.square_grid(16, 1.0)
    cfg = FocusConfig.from_panel(50.0, 50.0, panel, LAM)
    area = 32.0 * panel.aperture_d_m ** 2 / panel.n_elements
    expected = (2.0 / (panel.aperture_d_m ** 2 * panel.n_elements)) ** 2 \
        * area ** 2
    assert focusing_gain_integral(cfg, panel, LAM) == pytest.approx(expected,
                                                                    rel=1e-12)


def test_focusing_gain_integral_against_riemann_oracle():
    # brute-force midpoint grid over the printed double integral
    panel = RisPanel.square_grid(16, 1.0)
    f_dev = 5.0
    half = panel.aperture_d_m * math.sqrt(8.0 / panel.n_elements)
    k = math.pi / (LAM * f_dev)
    n = 6001
    xs = (np.arange(n) + 0.5) / n * (2 * half) - half
    line = np.sum(np.exp(-1j * k * xs ** 2)) * (2 * half / n)
    oracle = (2.0 / (panel.aperture_d_m ** 2 * panel.n_elements)) ** 2 \
        * abs(line) ** 4
    val = focusing_gain_integral(_focus(f_dev, panel), panel, LAM)
    assert val == pytest.approx(oracle, rel=1e-4)


def test_focusing_gain_integral_sign_flip_invariance():
    panel = RisPanel.square_grid(16, 1.0)
    d_fa = array_fraunhofer_distance(16, 1.0, LAM)
    ahead = FocusConfig.from_depths(100.0, 80.0, d_fa)
    behind = FocusConfig.from_depths(100.0, 120.0, d_fa)
    assert ahead.f_deviation == pytest.approx(behind.f_deviation)
    assert focusing_gain_integral(ahead, panel, LAM) == pytest.approx(
        focusing_gain_integral(behind, panel, LAM), rel=1e-12)


def test_focusing_gain_integral_error_estimate_is_honest():
    panel = RisPanel.square_grid(16, 1.0)
    cfg = _focus(2.0, panel)
    coarse, err = focusing_gain_integral(cfg, panel, LAM, with_error=True)
    fine = focusing_gain_integral(cfg, panel, LAM,
                                  abs_tol=1e-12, rel_tol=1e-10)
    assert coarse >= 0
    assert abs(coarse - fine) <= 10.0 * max(err, 1e-14)


def test_closed_vs_integral_comparison_is_reported():
    # the two forms of the focusing gain disagree away from the plateau of
    # the Fresnel integrals; the comparison must run and surface the
    # discrepancy rather than hide it
    panel = RisPanel.square_grid(16, 1.0)
    rows = []
    for f_dev in np.logspace(-1, 3, 12):
        cfg = _focus(float(f_dev), panel)
        g_closed = focusing_gain_closed(cfg)
        g_int = focusing_gain_integral(cfg, panel, LAM)
        rows.append((float(f_dev), g_closed, g_int,
                     abs(g_closed - g_int) / g_int))
    assert len(rows) == 12
    assert all(g > 0 for _, g, _, _ in rows)
    max_rel = max(r[-1] for r in rows)
    # documented anomaly: the printed closed form vanishes toward the focus
    assert max_rel > 1e-3


# ---------------------------------------------------------------------------
# compound channels


SRC = SourceGeometry(rho_m=300.0, theta_i_rad=0.0, e_incident=1.0, e0=1.0)


def test_compound_element_phase_factor_exact():
    panel = RisPanel.square_grid(16, 1.0)
    base = compound_channel_element(0, 0, 0.0, SRC, panel, 30.0, LAM)
    shifted = compound_channel_element(0, 0, math.pi, SRC, panel, 30.0, LAM)
    assert shifted == pytest.approx(-base, rel=1e-12)


def test_compound_element_magnitude_invariant_under_phase():
    panel = RisPanel.square_grid(16, 1.0)
    rng = np.random.default_rng(2)
    base = abs(compound_channel_element(1, 2, 0.0, SRC, panel, 30.0, LAM))
    for phase in rng.uniform(0.0, 2.0 * math.pi, 4):
        val = compound_channel_element(1, 2, float(phase), SRC, panel,
                                       30.0, LAM)
        assert abs(val) == pytest.approx(base, rel=1e-12)


def test_compound_element_mirror_rows_match_at_normal_incidence():
    # at normal incidence the integrand is even in x, so elements mirrored
    # across the panel center produce identical gains (magnitudes equal,
    # phases equal rather than opposite)
    panel = RisPanel.square_grid(16, 1.0)
    left = compound_channel_element(0, 1, 0.0, SRC, panel, 30.0, LAM)
    right = compound_channel_element(3, 1, 0.0, SRC, panel, 30.0, LAM)
    assert right == pytest.approx(left, rel=1e-10)
    assert abs(right) == pytest.approx(abs(left), rel=1e-12)


def test_compound_element_amplitude_scaling():
    amps = np.full(16, 1.0)
    amps[5] = 0.25
    panel = RisPanel.square_grid(16, 1.0, amplitudes=amps)
    full = compound_channel_element(1, 1, 0.0, SRC,
                                    RisPanel.square_grid(16, 1.0), 30.0, LAM)
    scaled = compound_channel_element(1, 1, 0.0, SRC, panel, 30.0, LAM)
    assert scaled == pytest.approx(0.25 * full, rel=1e-12)


def test_compound_element_index_validation():
    panel = RisPanel.square_grid(16, 1.0)
    with pytest.raises(InvalidArgumentError):
        compound_channel_element(4, 0, 0.0, SRC, panel, 30.0, LAM)
    with pytest.raises(DomainError):
        compound_channel_element(0, 0, 0.0, SRC, panel, 0.0, LAM)


def test_compound_element_requires_far_source():
    panel = RisPanel.square_grid(16, 1.0)
    near = SourceGeometry(rho_m=50.0, theta_i_rad=0.0)  # boundary is 200 m
    with pytest.raises(InvalidArgumentError):
        compound_channel_element(0, 0, 0.0, near, panel, 30.0, LAM)


# ---------------------------------------------------------------------------
# beam maps


HEAT_LAM = 0.1
HEAT_SRC = SourceGeometry(rho_m=30.0, theta_i_rad=0.0)


def _focused_map(n_elements, grid, focal=(0.0, 8.0)):
    panel = RisPanel.square_grid(n_elements, 1.0)
    panel = configure_focus_phases(panel, HEAT_SRC, focal[0], focal[1],
                                   HEAT_LAM, gauss_order=8)
    return beam_heatmap(panel, HEAT_SRC, grid, HEAT_LAM, gauss_order=8)


def test_heatmap_peak_at_configured_focus():
    grid = HeatmapGrid(np.linspace(-1.5, 1.5, 61), np.linspace(3.0, 18.0, 76))
    bm = _focused_map(64, grid)
    dx = grid.x_m[1] - grid.x_m[0]
    dz = grid.z_m[1] - grid.z_m[0]
    assert abs(bm.stats.peak_x_m - 0.0) <= dx + 1e-12
    assert abs(bm.stats.peak_z_m - 8.0) <= dz + 1e-12


def test_heatmap_symmetric_in_x_at_normal_incidence():
    grid = HeatmapGrid(np.linspace(-1.0, 1.0, 41), np.linspace(6.0, 10.0, 9))
    bm = _focused_map(64, grid)
    assert np.allclose(bm.power, bm.power[:, ::-1], rtol=1e-9, atol=0)


def test_heatmap_width_shrinks_with_element_count():
    grid = HeatmapGrid(np.linspace(-1.2, 1.2, 97), np.linspace(7.0, 9.0, 5))
    widths = []
    for n in (16, 64, 144):
        bm = _focused_map(n, grid)
        assert np.isfinite(bm.stats.width_x_3db_m)
        widths.append(bm.stats.width_x_3db_m)
    assert widths[0] >= widths[1] >= widths[2]
    assert widths[2] < widths[0]


def test_heatmap_rejects_bad_grid():
    with pytest.raises(InvalidArgumentError):
        HeatmapGrid(np.array([]), np.array([1.0]))
    with pytest.raises(InvalidArgumentError):
        HeatmapGrid(np.array([0.0]), np.array([0.0, 1.0]))


def test_heatmap_normalization_peak_zero_db():
    grid = HeatmapGrid(np.linspace(-0.5, 0.5, 21), np.linspace(7.0, 9.0, 5))
    bm = _focused_map(16, grid)
    assert np.max(bm.power_db) == pytest.approx(0.0, abs=1e-12)

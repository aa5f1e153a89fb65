import math

import numpy as np
import pytest
from scipy.special import erfc

from ris_ho_sim import (HopGainStats, MetricResult, OutageThreshold, SnrModel,
                        average_ber, ber_kernel, cascade_moments,
                        ergodic_capacity, mc_metrics, outage_probability,
                        snr_pdf)
from ris_ho_sim.errors import InvalidArgumentError
from ris_ho_sim.quadrature import adaptive_quad


def _model(n=64, mu=0.1, kappa=0.01, snr=100.0):
    hop = HopGainStats(mu, kappa * mu * mu)
    return SnrModel(cascade_moments(hop, hop, n), snr)


def _det_model(n=10, mu=1.0, snr=1.0):
    hop = HopGainStats(mu, 0.0)
    return SnrModel(cascade_moments(hop, hop, n), snr)


# ---------------------------------------------------------------------------
# average error rate


def test_ber_zero_snr_limit_is_half():
    model = _model(snr=1e-30)
    res = average_ber(model)
    assert res.value == pytest.approx(0.5, abs=1e-6)


def test_ber_deterministic_cascade_closed_form():
    res = average_ber(_det_model(n=10, mu=1.0, snr=1.0))
    assert res.value == pytest.approx(0.5 * erfc(5.0), rel=1e-12)
    assert res.method == "quadrature"
    assert res.abs_error_est == 0.0


def test_ber_both_integral_forms_agree():
    # the gamma-space form (error kernel against the SNR density) and the
    # substituted form used by the module are the same integral
    model = _model(n=32, mu=0.15, kappa=0.05, snr=40.0)
    st = model.cascade
    module_val = average_ber(model).value
    upper = math.sqrt(model.avg_snr) * (st.mean_g + 14 * math.sqrt(st.var_total))
    gamma_form = adaptive_quad(
        lambda u: 2.0 * u * 0.5 * erfc(u / 2.0) * snr_pdf(u * u, model),
        0.0, upper, abs_tol=1e-13, rel_tol=1e-10).value
    assert module_val == pytest.approx(gamma_form, abs=1e-9)


def test_ber_decreases_with_snr_and_elements():
    for n_pair in ((32, 64), (64, 128)):
        lo = average_ber(_model(n=n_pair[0])).value
        hi = average_ber(_model(n=n_pair[1])).value
        assert hi <= lo
    assert average_ber(_model(snr=50.0)).value >= \
        average_ber(_model(snr=200.0)).value


# ---------------------------------------------------------------------------
# outage


def test_outage_zero_threshold():
    res = outage_probability(_model(), OutageThreshold(0.0))
    assert res.value == 0.0


def test_outage_total_probability_at_huge_threshold():
    res = outage_probability(_model(), OutageThreshold(1e12))
    assert res.value == pytest.approx(1.0, abs=1e-9)


def test_outage_deterministic_step():
    model = _det_model(n=10, mu=1.0, snr=1.0)  # point mass at gamma = 100
    assert outage_probability(model, OutageThreshold(99.0)).value == 0.0
    assert outage_probability(model, OutageThreshold(100.0)).value == 1.0
    assert outage_probability(model, OutageThreshold(101.0)).value == 1.0


def test_outage_monotone_in_threshold():
    model = _model(n=32, kappa=0.05)
    det = model.avg_snr * model.cascade.mean_g ** 2
    values = [outage_probability(model, OutageThreshold(g)).value
              for g in np.linspace(0.0, 3.0 * det, 12)]
    assert all(b >= a for a, b in zip(values, values[1:]))
    assert all(0.0 <= v <= 1.0 for v in values)


def test_outage_threshold_validation():
    with pytest.raises(InvalidArgumentError):
        OutageThreshold(-1.0)


# ---------------------------------------------------------------------------
# capacity


def test_capacity_zero_snr_limit():
    res = ergodic_capacity(_model(snr=1e-30))
    assert res.value == pytest.approx(0.0, abs=1e-10)


def test_capacity_deterministic_closed_form():
    model = _det_model(n=10, mu=1.0, snr=1.0)
    res = ergodic_capacity(model)
    assert res.value == pytest.approx(math.log2(101.0), rel=1e-12)


def test_capacity_increases_with_snr_and_elements():
    caps = [ergodic_capacity(_model(n=n)).value for n in (32, 64, 128)]
    assert caps[0] < caps[1] < caps[2]
    assert ergodic_capacity(_model(snr=50.0)).value < \
        ergodic_capacity(_model(snr=400.0)).value


# ---------------------------------------------------------------------------
# Monte Carlo estimator


def test_mc_deterministic_model_matches_closed_forms_exactly():
    model = _det_model(n=4, mu=0.5, snr=3.0)
    gamma = 3.0 * (4 * 0.25) ** 2
    rng = np.random.default_rng(0)
    mc = mc_metrics(rng, model, 1000, OutageThreshold(gamma - 0.5))
    assert mc.ber.value == pytest.approx(float(ber_kernel(gamma)), rel=1e-15)
    assert mc.outage.value == 0.0
    assert mc.capacity.value == pytest.approx(math.log2(1 + gamma), rel=1e-15)
    assert mc.ber.abs_error_est == 0.0
    assert mc.ber.n_samples == 1000
    assert mc.ber.method == "monte_carlo"


def test_mc_standard_error_scales_with_samples():
    model = _model(n=32, kappa=0.05)
    th = OutageThreshold(model.avg_snr * model.cascade.mean_g ** 2)
    se1 = mc_metrics(np.random.default_rng(1), model, 20_000, th).ber.abs_error_est
    se2 = mc_metrics(np.random.default_rng(1), model, 80_000, th).ber.abs_error_est
    assert se2 == pytest.approx(se1 / 2.0, rel=0.15)


def test_mc_agrees_with_quadrature_within_three_standard_errors():
    # weak per-hop scatter keeps the large-N Gaussian law within Monte Carlo
    # resolution, making the 3-sigma comparison meaningful
    model = _model(n=64, mu=0.1, kappa=1e-3, snr=100.0)
    st = model.cascade
    th = OutageThreshold(model.avg_snr
                         * (st.mean_g - 0.5 * math.sqrt(st.var_total)) ** 2)
    rng = np.random.default_rng(2024)
    mc = mc_metrics(rng, model, 400_000, th)
    quad = (average_ber(model), outage_probability(model, th),
            ergodic_capacity(model))
    for q, m in zip(quad, (mc.ber, mc.outage, mc.capacity)):
        assert abs(q.value - m.value) <= 3.0 * max(m.abs_error_est, 1e-12)


def test_mc_rejects_empty_sample_budget():
    with pytest.raises(InvalidArgumentError):
        mc_metrics(np.random.default_rng(0), _model(), 0, OutageThreshold(1.0))


def test_metric_result_validation():
    with pytest.raises(InvalidArgumentError):
        MetricResult(0.1, -1.0, "quadrature")
    with pytest.raises(InvalidArgumentError):
        MetricResult(0.1, 0.0, "guesswork")


def test_probability_outputs_clamped_range():
    model = _model(n=32, kappa=0.05)
    det = model.avg_snr * model.cascade.mean_g ** 2
    for g in (0.0, 0.3 * det, det, 5.0 * det):
        res = outage_probability(model, OutageThreshold(g))
        assert 0.0 <= res.value <= 1.0
    assert 0.0 <= average_ber(model).value <= 0.5

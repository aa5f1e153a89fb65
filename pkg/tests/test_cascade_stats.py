import math

import numpy as np
import pytest
from scipy.stats import chi2, kstest, norm

from ris_ho_sim import (CascadeStats, HopGainStats, SnrModel, cascade_moments,
                        gain_pdf, sample_snr_exact, snr_cdf, snr_pdf)
from ris_ho_sim.errors import (DegenerateDistributionError,
                               InvalidArgumentError)
from ris_ho_sim.quadrature import adaptive_quad


def test_moments_deterministic_hops():
    st = cascade_moments(HopGainStats(1.0, 0.0), HopGainStats(1.0, 0.0), 10)
    assert st.mean_g == 10.0
    assert st.var_total == 0.0


def test_moments_zero_mean_hops():
    st = cascade_moments(HopGainStats(0.0, 1.0), HopGainStats(0.0, 1.0), 4)
    assert st.mean_g == 0.0
    assert st.var_total == pytest.approx(4.0)


def test_moments_general_formula():
    st = cascade_moments(HopGainStats(1.0, 0.1), HopGainStats(1.0, 0.1), 64)
    assert st.mean_g == pytest.approx(64.0)
    assert st.var_total == pytest.approx(64.0 * (1.1 * 1.1 - 1.0))


def test_moments_match_exact_sampler():
    # Monte Carlo moment oracle: sample mean/variance of the exact cascade
    # match the closed forms within 3 standard errors
    hop = HopGainStats(1.0, 0.1)
    st = cascade_moments(hop, hop, 64)
    rng = np.random.default_rng(123)
    n = 2_000_000
    g1 = rng.normal(hop.mean, math.sqrt(hop.variance), (n, 64))
    g2 = rng.normal(hop.mean, math.sqrt(hop.variance), (n, 64))
    sums = np.sum(g1 * g2, axis=1)
    se_mean = sums.std(ddof=1) / math.sqrt(n)
    assert abs(sums.mean() - st.mean_g) <= 3.0 * se_mean
    # variance of the sample variance ~ (mu4 - var^2)/n
    centered = sums - sums.mean()
    mu4 = np.mean(centered ** 4)
    se_var = math.sqrt(max(mu4 - st.var_total ** 2, 0.0) / n)
    assert abs(centered.var(ddof=1) - st.var_total) <= 3.0 * se_var


def test_moments_reject_zero_elements():
    with pytest.raises(InvalidArgumentError):
        cascade_moments(HopGainStats(1.0, 0.1), HopGainStats(1.0, 0.1), 0)


def test_cascade_stats_consistency_enforced():
    hop = HopGainStats(1.0, 0.1)
    with pytest.raises(InvalidArgumentError):
        CascadeStats(4, 99.0, 1.0, hop, hop)
    with pytest.raises(InvalidArgumentError):
        HopGainStats(1.0, -0.5)


def test_gain_pdf_peak_and_normalization():
    st = cascade_moments(HopGainStats(0.9, 0.05), HopGainStats(0.9, 0.05), 32)
    peak = gain_pdf(st.mean_g, st)
    assert peak >= gain_pdf(st.mean_g + 0.5, st)
    assert peak >= gain_pdf(st.mean_g - 0.5, st)
    sd = math.sqrt(st.var_total)
    res = adaptive_quad(lambda g: gain_pdf(g, st),
                        st.mean_g - 10 * sd, st.mean_g + 10 * sd)
    assert res.value == pytest.approx(1.0, abs=1e-8)


def test_gain_pdf_matches_exact_samples_in_clt_regime():
    hop = HopGainStats(0.9, 0.05)
    st = cascade_moments(hop, hop, 128)
    rng = np.random.default_rng(5)
    n = 1_000_000
    g1 = rng.normal(hop.mean, math.sqrt(hop.variance), (n, 128))
    g2 = rng.normal(hop.mean, math.sqrt(hop.variance), (n, 128))
    gains = np.sum(g1 * g2, axis=1)
    stat = kstest(gains, lambda x: norm.cdf(x, st.mean_g,
                                            math.sqrt(st.var_total))).statistic
    assert stat < 0.01


def test_gain_pdf_degenerate_rejected():
    st = cascade_moments(HopGainStats(1.0, 0.0), HopGainStats(1.0, 0.0), 4)
    with pytest.raises(DegenerateDistributionError):
        gain_pdf(4.0, st)
    with pytest.raises(DegenerateDistributionError):
        snr_pdf(1.0, SnrModel(st, 1.0))


def _model(n=64, mu=0.5, var=0.02, snr=10.0):
    hop = HopGainStats(mu, var)
    return SnrModel(cascade_moments(hop, hop, n), snr)


def test_snr_pdf_normalizes_to_one():
    model = _model()
    st = model.cascade
    upper = math.sqrt(model.avg_snr) * (abs(st.mean_g)
                                        + 14.0 * math.sqrt(st.var_total))
    # substitute gamma = u^2 to absorb the 1/sqrt(gamma) endpoint
    res = adaptive_quad(lambda u: 2.0 * u * snr_pdf(u * u, model), 0.0, upper,
                        abs_tol=1e-12, rel_tol=1e-10)
    assert res.value == pytest.approx(1.0, abs=1e-6)


def test_snr_pdf_central_case_is_scaled_chi2():
    # zero-mean combined gain: gamma = c * chi2(1) with c = avg_snr * var
    hop = HopGainStats(0.0, 0.25)
    model = SnrModel(cascade_moments(hop, hop, 16), 4.0)
    c = model.avg_snr * model.cascade.var_total
    for gamma in (0.01, 0.1, 1.0, 5.0):
        expected = chi2.pdf(gamma / c, df=1) / c
        assert snr_pdf(gamma, model) == pytest.approx(expected, rel=1e-10)


def test_snr_pdf_rejects_negative_argument():
    with pytest.raises(InvalidArgumentError):
        snr_pdf(-1.0, _model())


def test_snr_pdf_matches_exact_samples():
    hop = HopGainStats(0.9, 0.05)
    model = SnrModel(cascade_moments(hop, hop, 128), 10.0)
    rng = np.random.default_rng(77)
    samples = sample_snr_exact(rng, model, size=1_000_000)
    stat = kstest(samples, lambda x: snr_cdf(x, model)).statistic
    assert stat < 0.02


def test_gain_and_snr_pdfs_consistent_under_change_of_variables():
    # CDF of avg_snr * G^2 computed from the gain density equals the CDF
    # from the SNR density at random points
    model = _model(n=32, mu=0.4, var=0.05, snr=7.0)
    st = model.cascade
    rng = np.random.default_rng(9)
    det = model.avg_snr * st.mean_g ** 2
    for gamma in rng.uniform(0.05 * det, 3.0 * det, 20):
        u = math.sqrt(gamma / model.avg_snr)
        from_gain = adaptive_quad(lambda g: gain_pdf(g, st), -u, u,
                                  abs_tol=1e-12, rel_tol=1e-10).value
        from_snr = adaptive_quad(
            lambda w: 2.0 * w * snr_pdf(w * w, model), 0.0, math.sqrt(gamma),
            abs_tol=1e-12, rel_tol=1e-10).value
        assert from_gain == pytest.approx(from_snr, abs=1e-6)
        assert snr_cdf(float(gamma), model) == pytest.approx(from_snr,
                                                             abs=1e-6)


def test_sampler_deterministic_per_seed():
    model = _model()
    a = sample_snr_exact(np.random.default_rng(42), model, size=16)
    b = sample_snr_exact(np.random.default_rng(42), model, size=16)
    assert np.array_equal(a, b)
    s1 = sample_snr_exact(np.random.default_rng(1), model)
    assert isinstance(s1, float)


def test_sampler_degenerate_case():
    hop = HopGainStats(1.0, 0.0)
    model = SnrModel(cascade_moments(hop, hop, 8), 2.0)
    vals = sample_snr_exact(np.random.default_rng(0), model, size=5)
    assert np.allclose(vals, 2.0 * 64.0)


def test_sampler_second_moment_identity():
    # E[gamma] = avg_snr * (mean_g^2 + var_total) holds exactly
    model = _model(n=64, mu=1.0, var=0.1, snr=2.0)
    rng = np.random.default_rng(3)
    s = sample_snr_exact(rng, model, size=2_000_000)
    expected = model.avg_snr * (model.cascade.mean_g ** 2
                                + model.cascade.var_total)
    se = s.std(ddof=1) / math.sqrt(s.size)
    assert abs(s.mean() - expected) <= 3.0 * se


def test_clt_quality_improves_with_element_count():
    hop = HopGainStats(0.9, 0.05)
    stats = []
    for n in (8, 32, 128):
        model = SnrModel(cascade_moments(hop, hop, n), 10.0)
        rng = np.random.default_rng(60 + n)
        samples = sample_snr_exact(rng, model, size=400_000)
        stats.append(kstest(samples, lambda x: snr_cdf(x, model)).statistic)
    assert stats[0] > stats[1] > stats[2]


def test_snr_model_requires_positive_average():
    with pytest.raises(InvalidArgumentError):
        SnrModel(cascade_moments(HopGainStats(1.0, 0.1),
                                 HopGainStats(1.0, 0.1), 4), 0.0)

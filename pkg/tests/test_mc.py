import math
from dataclasses import replace

import numpy as np
import pytest
from numpy.random import default_rng
from scipy.stats import kstest

import mmrelay as mr
from mmrelay.config import default_config
from mmrelay.mc import McEstimate, RngSeed, _interferer_gains, _ru_serving_distance

CFG = default_config()


class TestMcEstimate:
    def test_from_bernoulli(self):
        est = McEstimate.from_bernoulli(250, 1000)
        assert est.mean == 0.25
        assert est.trials == 1000
        assert est.half_width_95 == pytest.approx(1.96 * math.sqrt(0.25 * 0.75 / 1000))

    def test_validation(self):
        with pytest.raises(ValueError):
            McEstimate(0.5, 0, 0.01)
        with pytest.raises(ValueError):
            McEstimate(1.5, 10, 0.01)
        with pytest.raises(ValueError):
            McEstimate(0.5, 10, -0.01)


class TestRngSeed:
    def test_substreams_reproduce(self):
        a = RngSeed(12345, 7).trial_rng(3).random(4)
        b = RngSeed(12345, 7).trial_rng(3).random(4)
        assert np.array_equal(a, b)

    def test_substreams_differ_across_indices(self):
        a = RngSeed(12345, 7).trial_rng(3).random(4)
        b = RngSeed(12345, 7).trial_rng(4).random(4)
        c = RngSeed(12345, 8).trial_rng(3).random(4)
        assert not np.array_equal(a, b)
        assert not np.array_equal(a, c)

    def test_validation(self):
        with pytest.raises(ValueError):
            RngSeed(-1, 0)
        with pytest.raises(ValueError):
            RngSeed(0, 2 ** 64)


class TestSamplePppDisk:
    def test_zero_density_always_empty(self):
        rng = default_rng(0)
        for _ in range(50):
            assert mr.sample_ppp_disk(0.0, 100.0, rng).shape == (0, 2)

    def test_poisson_mean_count(self):
        # density * pi * r_max^2 = 10
        r_max = 100.0
        density = 10.0 / (math.pi * r_max * r_max)
        rng = default_rng(42)
        counts = [mr.sample_ppp_disk(density, r_max, rng).shape[0] for _ in range(10_000)]
        assert abs(np.mean(counts) - 10.0) <= 3.0 * math.sqrt(10.0 / 10_000)

    def test_distances_sorted_and_in_range(self):
        rng = default_rng(7)
        for _ in range(20):
            pts = mr.sample_ppp_disk(1e-3, 200.0, rng)
            r = pts[:, 0]
            assert np.all(np.diff(r) >= 0.0)
            assert np.all((r >= 0.0) & (r <= 200.0))
            assert np.all((pts[:, 1] >= 0.0) & (pts[:, 1] < 2.0 * math.pi))

    def test_nearest_distance_cdf(self):
        # Kolmogorov-Smirnov against 1 - exp(-pi lambda r^2)
        density, r_max = 1e-3, 150.0
        rng = default_rng(123)
        nearest = []
        for _ in range(10_000):
            pts = mr.sample_ppp_disk(density, r_max, rng)
            assert pts.shape[0] > 0
            nearest.append(pts[0, 0])
        stat, _ = kstest(nearest, lambda r: 1.0 - np.exp(-math.pi * density * r * r))
        assert stat < 0.02

    def test_validation(self):
        rng = default_rng(0)
        with pytest.raises(ValueError):
            mr.sample_ppp_disk(-1.0, 100.0, rng)
        with pytest.raises(ValueError):
            mr.sample_ppp_disk(1e-3, 0.0, rng)


class TestSampleNakagami:
    def test_unit_mean_exponential(self):
        rng = default_rng(5)
        draws = np.array([mr.sample_nakagami_power(1, rng) for _ in range(100_000)])
        assert abs(draws.mean() - 1.0) <= 0.01
        assert np.all(draws >= 0.0)

    @pytest.mark.parametrize("N", [1, 2, 3, 5])
    def test_variance_is_inverse_shape(self, N):
        rng = default_rng(100 + N)
        draws = np.array([mr.sample_nakagami_power(N, rng) for _ in range(20_000)])
        var = draws.var()
        # self-normalized three-sigma band for the sample variance
        centered = (draws - draws.mean()) ** 2
        band = 3.0 * centered.std() / math.sqrt(draws.size)
        assert abs(var - 1.0 / N) <= band

    def test_validation(self):
        with pytest.raises(ValueError):
            mr.sample_nakagami_power(0, default_rng(0))


class TestSampleInterfererGain:
    def test_omni_always_double_main(self):
        ant = mr.AntennaPattern(100.0, 0.1, 2.0 * math.pi)
        rng = default_rng(3)
        for _ in range(200):
            assert mr.sample_interferer_gain(ant, rng) == ant.aligned_gain

    def test_half_beam_pmf(self):
        ant = mr.AntennaPattern(100.0, 0.1, math.pi)
        rng = default_rng(17)
        gains = _interferer_gains(ant, rng, 100_000)
        for level, p in zip((10_000.0, 10.0, 0.01), (0.25, 0.5, 0.25)):
            frac = np.mean(gains == level)
            assert abs(frac - p) <= 3.0 * math.sqrt(p * (1.0 - p) / gains.size)

    @pytest.mark.parametrize("theta_deg", [10.0, 30.0, 90.0, 180.0, 300.0])
    def test_pmf_matches_model_for_any_beamwidth(self, theta_deg):
        ant = mr.AntennaPattern(50.0, 0.5, math.radians(theta_deg))
        pmf = mr.gain_distribution(ant)
        rng = default_rng(int(theta_deg))
        gains = _interferer_gains(ant, rng, 100_000)
        for level, p in pmf.levels:
            frac = np.mean(gains == level)
            assert abs(frac - p) <= 3.0 * math.sqrt(p * (1.0 - p) / gains.size) + 1e-12

    def test_scalar_matches_vectorized_distribution(self):
        ant = CFG.antenna
        rng = default_rng(29)
        scalar = np.array([mr.sample_interferer_gain(ant, rng) for _ in range(10_000)])
        pmf = mr.gain_distribution(ant)
        for level, p in pmf.levels:
            frac = np.mean(scalar == level)
            assert abs(frac - p) <= 4.0 * math.sqrt(p * (1.0 - p) / scalar.size) + 1e-3


class TestCoverageSimulation:
    def test_deterministic(self):
        a = mr.mc_coverage_bu(CFG, 2_000, 31337)
        b = mr.mc_coverage_bu(CFG, 2_000, 31337)
        assert a == b

    def test_zero_threshold_geometric_limit(self):
        cfg = replace(CFG, threshold_T=1e-12)
        est = mr.mc_coverage_bu(cfg, 20_000, 8)
        expected = 1.0 - math.exp(-math.pi * cfg.lambda_B * cfg.blockage.ball_radius_RB ** 2)
        assert abs(est.mean - expected) <= est.half_width_95

    def test_vanishing_density_never_covered(self):
        cfg = default_config(1e-9)
        est = mr.mc_coverage_bu(cfg, 2_000, 9)
        assert est.mean <= 1e-3

    def test_monotone_in_threshold_under_common_randomness(self):
        means = [
            mr.mc_coverage_bu(replace(CFG, threshold_T=t), 10_000, 77).mean
            for t in (10.0, 100.0, 1000.0)
        ]
        assert means[0] >= means[1] >= means[2]

    def test_br_indistinguishable_from_bu_when_relays_dense(self):
        bu = mr.mc_coverage_bu(CFG, 30_000, 5)
        br = mr.mc_coverage_br(CFG, 30_000, 5)
        sigma = math.sqrt(bu.half_width_95 ** 2 + br.half_width_95 ** 2) / 1.96
        assert abs(bu.mean - br.mean) <= 3.0 * sigma

    def test_br_blackout_under_huge_noise(self):
        est = mr.mc_coverage_br(replace(CFG, sigma2=1e8), 3_000, 4)
        assert est.mean == 0.0

    def test_ru_clean_channel_always_covered(self):
        cfg = replace(CFG, sigma2=1e-30)
        est = mr.mc_coverage_ru(cfg, 0.0, 3_000, 6)
        assert est.mean == 1.0

    def test_ru_serving_distance_mean(self):
        rng = default_rng(55)
        a = CFG.relay_disk_a
        draws = np.array([_ru_serving_distance(a, rng) for _ in range(100_000)])
        sigma = a * math.sqrt(1.0 / 2.0 - 4.0 / 9.0)
        assert abs(draws.mean() - 2.0 * a / 3.0) <= 3.0 * sigma / math.sqrt(draws.size)
        assert np.all((draws >= 0.0) & (draws <= a))

    def test_window_override_validation(self):
        with pytest.raises(ValueError):
            mr.mc_coverage_bu(CFG, 100, 1, r_max=50.0)
        with pytest.raises(ValueError):
            mr.mc_coverage_bu(CFG, 0, 1)
        with pytest.raises(ValueError):
            mr.mc_coverage_ru(CFG, -1e-6, 100, 1)


class TestValidation:
    def test_rejects_small_trial_counts(self):
        with pytest.raises(ValueError):
            mr.mc_validate(CFG, 9_999, 1)

    def test_baseline_report_passes(self):
        rows = mr.mc_validate(CFG, 10_000, 2026)
        assert [r.link for r in rows] == [
            "bu", "br", "ru", "bu_beam_error", "br_beam_error", "ru_beam_error",
        ]
        assert all(r.passed for r in rows), rows

    def test_zero_beam_error_rows_match_aligned_rows(self):
        rows = mr.mc_validate(CFG, 10_000, 2027)
        for aligned, with_error in zip(rows[:3], rows[3:]):
            assert with_error.analytic == aligned.analytic
            assert with_error.mc_mean == aligned.mc_mean

    def test_formula_tampering_is_detected(self):
        # an analytic engine computed with a corrupted NLOS exponent must fail
        # validation against the honest simulation
        est = mr.mc_coverage_bu(CFG, 20_000, 99)
        corrupted = mr.coverage_bu(default_config(alpha_N=3.0))
        tol = max(mr.mc.MC_TOLERANCE, 3.0 * est.half_width_95)
        assert abs(corrupted - est.mean) > tol

    def test_degenerate_single_slope_model_cross_check(self):
        cfg = default_config(
            M_dB=0.0, m_dB=0.0, theta_deg=360.0,
            alpha_L=4.0, alpha_N=4.0, N_L=2, N_N=2,
        )
        cov = mr.coverage_all(cfg)
        est = mr.mc_coverage_bu(cfg, 20_000, 7)
        assert abs(cov.p_bu - est.mean) <= max(0.015, 3.0 * est.half_width_95)

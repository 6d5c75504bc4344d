import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st
from scipy import integrate, stats

from gsti.ggd_stats import (BETA_GRID, BETA_STEP, KURTOSIS_GRID, KURTOSIS_MAX, KURTOSIS_MIN,
                            VAR_FLOOR, GgdParams, block_scaled_entropies, ggd_alpha,
                            ggd_entropy, ggd_kurtosis, ggd_variance, invert_kurtosis,
                            latent_block_params, latent_moments, scaled_entropy)


def sample_ggd(rng, alpha, beta, n):
    """|X| = alpha * G**(1/beta) with G ~ Gamma(1/beta), random sign."""
    mag = alpha * rng.gamma(1.0 / beta, 1.0, n) ** (1.0 / beta)
    return np.where(rng.random(n) < 0.5, -mag, mag)


def params_for(sigma2, beta):
    return GgdParams(float(ggd_alpha(math.sqrt(sigma2), beta)), beta, sigma2)


class TestKurtosis:
    def test_anchors(self):
        assert ggd_kurtosis(2.0) == 3.0
        assert ggd_kurtosis(1.0) == 6.0
        # G(10) G(2) / G(6)^2 = 362880 / 14400
        assert ggd_kurtosis(0.5) == pytest.approx(25.2, rel=1e-14)

    def test_matches_quadrature(self):
        for beta in (0.7, 1.5, 3.0):
            pdf = stats.gennorm(beta).pdf
            m2 = integrate.quad(lambda x: x ** 2 * pdf(x), -np.inf, np.inf)[0]
            m4 = integrate.quad(lambda x: x ** 4 * pdf(x), -np.inf, np.inf)[0]
            assert ggd_kurtosis(beta) == pytest.approx(m4 / m2 ** 2, rel=1e-8)

    def test_invalid_beta(self):
        for b in (0.0, -1.0, float("nan")):
            with pytest.raises(ValueError):
                ggd_kurtosis(b)

    def test_strictly_decreasing_on_grid(self):
        assert np.all(np.diff(KURTOSIS_GRID) < 0)


class TestInvertKurtosis:
    @pytest.mark.parametrize("kurt, beta", [(3.0, 2.0), (6.0, 1.0), (25.2, 0.5)])
    def test_anchors(self, kurt, beta):
        assert invert_kurtosis(kurt) == pytest.approx(beta, abs=BETA_STEP)

    def test_round_trip_whole_grid(self):
        recovered = invert_kurtosis(KURTOSIS_GRID)
        assert np.max(np.abs(recovered - BETA_GRID)) <= BETA_STEP

    def test_clamps(self):
        assert invert_kurtosis(1.0) == pytest.approx(BETA_GRID[-1])
        assert invert_kurtosis(1e20) == pytest.approx(BETA_GRID[0])
        assert KURTOSIS_MIN < 1.9 and KURTOSIS_MAX > 1e12

    def test_nan(self):
        with pytest.raises(ValueError):
            invert_kurtosis(float("nan"))

    @settings(max_examples=100, deadline=None)
    @given(st.floats(1.5, 1e6), st.floats(1.5, 1e6))
    def test_monotone(self, a, b):
        if a < b:
            assert invert_kurtosis(a) >= invert_kurtosis(b)


class TestAlpha:
    def test_values(self):
        assert ggd_alpha(1.0, 2.0) == pytest.approx(math.sqrt(2))
        assert ggd_alpha(1.0, 1.0) == pytest.approx(math.sqrt(0.5))
        assert ggd_alpha(0.0, 1.3) == 0.0

    def test_errors(self):
        with pytest.raises(ValueError):
            ggd_alpha(1.0, 0.0)
        with pytest.raises(ValueError):
            ggd_alpha(-1.0, 2.0)

    @settings(max_examples=50, deadline=None)
    @given(st.floats(0.01, 100), st.floats(0.05, 10))
    def test_variance_consistency(self, sigma, beta):
        assert ggd_variance(ggd_alpha(sigma, beta), beta) == pytest.approx(sigma ** 2, rel=1e-10)


class TestEntropy:
    def test_gaussian(self):
        assert ggd_entropy(params_for(1.0, 2.0)) == pytest.approx(0.5 * math.log(2 * math.pi * math.e), abs=1e-12)

    def test_laplacian(self):
        assert ggd_entropy(GgdParams(1.0, 1.0, 2.0)) == pytest.approx(1 + math.log(2), abs=1e-12)

    def test_monte_carlo_heavy_tail(self):
        rng = np.random.default_rng(20)
        p = params_for(1.0, 0.5)
        x = sample_ggd(rng, p.alpha, p.beta, 10 ** 6)
        mc = -np.mean(stats.gennorm(p.beta, scale=p.alpha).logpdf(x))
        assert ggd_entropy(p) == pytest.approx(mc, rel=0.01)

    def test_matches_scipy(self):
        for beta in (0.3, 1.7, 6.0):
            p = GgdParams(1.3, beta, 0.0)
            assert ggd_entropy(p) == pytest.approx(stats.gennorm(beta, scale=1.3).entropy(), rel=1e-10)

    @settings(max_examples=50, deadline=None)
    @given(st.floats(0.05, 10), st.floats(1e-3, 1e3), st.floats(1.0001, 10))
    def test_increasing_in_alpha(self, beta, alpha, factor):
        assert ggd_entropy(GgdParams(alpha * factor, beta, 0)) > ggd_entropy(GgdParams(alpha, beta, 0))

    def test_invalid(self):
        with pytest.raises(ValueError):
            ggd_entropy(GgdParams(0.0, 2.0, 0.0))


class TestLatentParams:
    def test_gaussian_no_noise(self):
        rng = np.random.default_rng(1)
        p = latent_block_params(rng.normal(0, 2, 10 ** 5), 0.0)
        assert p.beta == pytest.approx(2.0, rel=0.05)
        assert p.sigma2 == pytest.approx(4.0, rel=0.05)

    def test_zero_block(self):
        p = latent_block_params(np.zeros(25), 0.1)
        assert p.sigma2 == VAR_FLOOR
        assert p.beta == BETA_GRID[-1]
        assert p.alpha > 0

    def test_laplacian_through_channel(self):
        rng = np.random.default_rng(2)
        a = ggd_alpha(math.sqrt(2.0), 1.0)
        x = sample_ggd(rng, a, 1.0, 10 ** 5) + rng.normal(0, math.sqrt(0.1), 10 ** 5)
        p = latent_block_params(x, 0.1)
        assert p.beta == pytest.approx(1.0, rel=0.10)
        assert p.sigma2 == pytest.approx(2.0, rel=0.05)

    def test_noise_free_is_plain_moment_matching(self):
        rng = np.random.default_rng(3)
        x = rng.laplace(size=25)
        p = latent_block_params(x, 0.0)
        m2, m4 = np.mean(x ** 2), np.mean(x ** 4)
        assert p.sigma2 == pytest.approx(m2, rel=1e-14)
        assert p.beta == pytest.approx(invert_kurtosis(m4 / m2 ** 2), abs=BETA_STEP)
        assert p.alpha == pytest.approx(ggd_alpha(math.sqrt(m2), p.beta), rel=1e-14)

    def test_errors(self):
        with pytest.raises(ValueError):
            latent_block_params([], 0.1)
        with pytest.raises(ValueError):
            latent_block_params([1.0, 2.0, 3.0], 0.1)
        with pytest.raises(ValueError):
            latent_block_params(np.ones(25), -0.1)

    @pytest.mark.parametrize("beta", [1.0, 2.0])
    def test_convergence_with_sample_size(self, beta):
        a = ggd_alpha(1.5, beta)
        errs = []
        for n, seed in ((10 ** 3, 7), (10 ** 4, 8), (10 ** 5, 9)):
            rng = np.random.default_rng(seed)
            p = latent_block_params(sample_ggd(rng, a, beta, n), 0.0)
            errs.append((abs(p.beta - beta) / beta, abs(p.alpha - a) / a))
        for (eb, ea), tol in zip(errs, (0.25, 0.08, 0.03)):
            assert eb < tol and ea < tol


class TestScaledEntropy:
    def test_zero_block(self):
        s = scaled_entropy(np.zeros(25), 0.1)
        assert s.gamma == 0.0 and s.epsilon == 0.0

    def test_exact_gaussian_moments(self):
        # second moment 1, fourth moment 3: kurtosis of the normal law
        block = np.array([math.sqrt(3), -math.sqrt(3), 0, 0, 0, 0])
        s = scaled_entropy(block, 0.0)
        assert s.gamma == pytest.approx(math.log(2))
        assert s.raw_entropy == pytest.approx(0.5 * math.log(2 * math.pi * math.e), abs=1e-12)
        # ln 2 * 0.5 ln(2 pi e) = 0.983533...
        assert s.epsilon == pytest.approx(math.log(2) * 0.5 * math.log(2 * math.pi * math.e), rel=1e-12)
        assert s.epsilon == pytest.approx(s.gamma * s.raw_entropy)

    @settings(max_examples=30, deadline=None)
    @given(st.integers(0, 2**32 - 1))
    def test_permutation_invariant(self, seed):
        rng = np.random.default_rng(seed)
        block = rng.normal(0, 5, 25)
        assert scaled_entropy(block) == scaled_entropy(rng.permutation(block))

    def test_batched_matches_single(self):
        rng = np.random.default_rng(6)
        blocks = rng.normal(0, 3, (4, 5, 25))
        eps, h, g = block_scaled_entropies(blocks, 0.1)
        assert eps.shape == (4, 5)
        s = scaled_entropy(blocks[2, 3], 0.1)
        assert (eps[2, 3], h[2, 3], g[2, 3]) == (s.epsilon, s.raw_entropy, s.gamma)

    def test_gamma_non_negative(self):
        rng = np.random.default_rng(7)
        _, _, g = block_scaled_entropies(rng.normal(0, 0.2, (500, 25)), 0.1)
        assert np.all(g >= 0)


def test_latent_moments_floor_keeps_kurtosis_attainable():
    # second moment 0.04 sits below the noise variance
    var_raw, var, kurt = latent_moments(np.full(25, 0.2), 0.1)
    assert var_raw == 0.0
    assert var == VAR_FLOOR
    assert kurt == pytest.approx(1.8)
    assert invert_kurtosis(kurt) == BETA_GRID[-1]

import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from scipy.special import zeta

import lnt.powerlaw as pl
from lnt.errors import DegenerateFitError, InsufficientDataError
from lnt.powerlaw import (
    PowerLawFit,
    bootstrap_p,
    fit_alpha,
    fit_alpha_approx,
    fit_power_law,
    ks_stat,
    sample_power_law,
    select_xmin,
)


def oracle_sample(
    alpha: float, size: int, rng: np.random.Generator, x_min: int = 1
) -> np.ndarray:
    """Truncated-table inverse-CDF sampler, independent of the library's."""
    xs = np.arange(x_min, 10**6 + x_min, dtype=np.float64)
    cdf = np.cumsum(xs**-alpha)
    cdf /= cdf[-1]
    return x_min + np.searchsorted(cdf, rng.random(size), side="left")


def oracle_ks(degrees, alpha, x_min):
    """Brute-force sup over every integer in the tail range."""
    tail = np.sort(np.asarray([d for d in degrees if d >= x_min]))
    norm = zeta(alpha, x_min)
    best = 0.0
    for x in range(x_min, int(tail.max()) + 1):
        ecdf = np.searchsorted(tail, x, side="right") / tail.size
        model = 1.0 - zeta(alpha, x + 1) / norm
        best = max(best, abs(ecdf - model))
    return best


class TestFitAlpha:
    def test_closed_form_hand_value(self):
        # 1 + 3 / (ln2 + ln4 + ln8) = 1 + 1/(2 ln 2)
        alpha = fit_alpha_approx([1, 2, 4] * 4, 1)  # 12 observations clear the floor
        assert alpha == pytest.approx(1 + 1 / (2 * math.log(2)), rel=1e-12)

    def test_exact_mle_recovers_generating_exponent(self):
        for seed in (1, 2, 3):
            degrees = oracle_sample(2.5, 10_000, np.random.default_rng(seed))
            assert fit_alpha(degrees, 1) == pytest.approx(2.5, abs=0.1)

    def test_approximation_tracks_exact_mle_for_large_cutoff(self):
        degrees = oracle_sample(2.5, 5000, np.random.default_rng(9), x_min=10)
        assert fit_alpha_approx(degrees, 10) == pytest.approx(
            fit_alpha(degrees, 10), rel=0.02
        )

    @pytest.mark.parametrize("fn", [fit_alpha, fit_alpha_approx])
    def test_all_tail_at_xmin_is_degenerate(self, fn):
        with pytest.raises(DegenerateFitError):
            fn([3] * 50, 3)

    @pytest.mark.parametrize("fn", [fit_alpha, fit_alpha_approx])
    def test_small_tail_is_insufficient(self, fn):
        with pytest.raises(InsufficientDataError):
            fn([1, 2, 3, 4, 5], 1)

    @settings(max_examples=40, deadline=None)
    @given(st.lists(st.integers(min_value=1, max_value=40), min_size=10, max_size=60))
    def test_duplicating_observations_preserves_alpha(self, degrees):
        if max(degrees) == 1:
            return
        assert fit_alpha_approx(degrees + degrees, 1) == pytest.approx(
            fit_alpha_approx(degrees, 1), rel=1e-12
        )
        # the numeric MLE is only located to its solver tolerance, and the
        # likelihood is flat near the optimum for small heavy-tailed samples
        assert fit_alpha(degrees + degrees, 1) == pytest.approx(
            fit_alpha(degrees, 1), abs=1e-6
        )


class TestKsStat:
    def test_matches_full_grid_enumeration(self):
        degrees = [1, 1, 1, 2]
        assert ks_stat(degrees, 2.0, 1) == pytest.approx(oracle_ks(degrees, 2.0, 1), abs=1e-15)

    def test_exact_sup_on_random_data(self):
        rng = np.random.default_rng(7)
        for _ in range(10):
            degrees = oracle_sample(2.2, 400, rng)
            alpha = fit_alpha(degrees, 1)
            assert ks_stat(degrees, alpha, 1) == pytest.approx(
                oracle_ks(degrees, alpha, 1), abs=1e-12
            )

    def test_quantile_constructed_data_is_near_zero(self):
        # stratified model quantiles: the empirical CDF tracks the model
        # CDF to within one grid cell
        n = 2000
        rng = np.random.default_rng(0)
        u = (np.arange(n) + 0.5) / n
        xs = np.arange(1, 10**5, dtype=np.float64)
        cdf = 1.0 - zeta(2.5, xs + 1) / zeta(2.5, 1)
        degrees = 1 + np.searchsorted(cdf, u, side="left")
        assert ks_stat(degrees, 2.5, 1) <= 1.5 / n + 1e-6

    def test_bounds(self):
        rng = np.random.default_rng(11)
        degrees = oracle_sample(2.0, 500, rng)
        d = ks_stat(degrees, 2.0, 1)
        assert 0.0 <= d <= 1.0

    def test_alpha_at_most_one_rejected(self):
        with pytest.raises(ValueError):
            ks_stat([1, 2, 3], 1.0, 1)


class TestSelectXmin:
    def test_pure_power_law_prefers_smallest_cutoff(self):
        hits = 0
        for seed in range(20):
            degrees = oracle_sample(2.5, 5000, np.random.default_rng(seed))
            if select_xmin(degrees) == 1:
                hits += 1
        assert hits >= 18

    def test_noisy_head_pushes_cutoff_up(self):
        hits = 0
        for seed in range(20):
            rng = np.random.default_rng(1000 + seed)
            tail = 3 + oracle_sample(2.5, 3000, rng)  # support starts at 4
            head = rng.integers(1, 4, size=2000)  # flat head on {1,2,3}
            degrees = np.concatenate([head, tail])
            if select_xmin(degrees) >= 2:
                hits += 1
        assert hits >= 14

    def test_constant_degrees_rejected(self):
        with pytest.raises(InsufficientDataError):
            select_xmin([4] * 100)

    def test_ties_resolve_to_smallest(self):
        # two identical halves cannot make a larger cutoff strictly better
        degrees = [1, 2] * 50
        assert select_xmin(degrees) in (1, 2)


class TestSampler:
    def test_matches_oracle_distribution(self):
        ours = sample_power_law(2.5, 1, 20_000, np.random.default_rng(3))
        ref = oracle_sample(2.5, 20_000, np.random.default_rng(4))
        for k in (1, 2, 3):
            assert np.mean(ours == k) == pytest.approx(np.mean(ref == k), abs=0.02)

    def test_bisection_fallback_agrees_with_table(self, monkeypatch):
        rng_a = np.random.default_rng(5)
        rng_b = np.random.default_rng(5)
        full = sample_power_law(2.2, 2, 5000, rng_a)
        monkeypatch.setattr(pl, "_TABLE_START", 4)
        monkeypatch.setattr(pl, "_TABLE_CAP", 8)
        tiny = sample_power_law(2.2, 2, 5000, rng_b)
        assert np.array_equal(full, tiny)

    def test_respects_xmin(self):
        out = sample_power_law(3.0, 5, 1000, np.random.default_rng(6))
        assert out.min() >= 5


class TestBootstrap:
    def _fit(self, degrees):
        return fit_power_law(degrees)

    def test_deterministic_and_order_invariant(self):
        rng = np.random.default_rng(8)
        degrees = oracle_sample(2.5, 1500, rng)
        fit = self._fit(degrees)
        p1 = bootstrap_p(degrees, fit, n_boot=50, seed=13)
        p2 = bootstrap_p(degrees, fit, n_boot=50, seed=13)
        shuffled = degrees.copy()
        np.random.default_rng(99).shuffle(shuffled)
        p3 = bootstrap_p(shuffled, fit, n_boot=50, seed=13)
        assert p1 == p2 == p3

    def test_genuine_power_law_is_not_rejected(self):
        good = 0
        for seed in range(5):
            degrees = oracle_sample(2.5, 2000, np.random.default_rng(20 + seed))
            fit = self._fit(degrees)
            if bootstrap_p(degrees, fit, n_boot=100, seed=seed) > 0.1:
                good += 1
        assert good >= 4

    def test_truncated_geometric_is_rejected(self):
        rejected = 0
        for seed in range(5):
            rng = np.random.default_rng(40 + seed)
            degrees = rng.geometric(0.25, size=6000)
            degrees = degrees[degrees <= 15][:3000]
            fit = self._fit(degrees)
            if bootstrap_p(degrees, fit, n_boot=100, seed=seed) < 0.05:
                rejected += 1
        assert rejected >= 4

    def test_nboot_validation(self):
        with pytest.raises(ValueError):
            bootstrap_p([1] * 20, PowerLawFit(2.0, 1, 0.1, 20), n_boot=0)


class TestFitPipeline:
    def test_fields_are_consistent(self):
        degrees = oracle_sample(2.3, 3000, np.random.default_rng(17))
        fit = fit_power_law(degrees)
        assert fit.n_tail == int(np.sum(degrees >= fit.x_min))
        assert fit.alpha > 1
        assert 0 <= fit.ks_stat <= 1
        assert fit.p_value is None

    def test_fixed_xmin_override(self):
        degrees = oracle_sample(2.3, 3000, np.random.default_rng(18))
        fit = fit_power_law(degrees, x_min=3)
        assert fit.x_min == 3

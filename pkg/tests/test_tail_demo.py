import math

import numpy as np
import pytest
from scipy import stats

from expectile_hydro.errors import DomainError, InvalidArgumentError
from expectile_hydro.risk_measures import expectile_level_of_value
from expectile_hydro.tail_demo import (
    GpParams,
    gp_inverse_cdf,
    gp_sample,
    histogram_bins,
    run_tail_experiment,
)


def test_gp_inverse_cdf_closed_form():
    # (0.025**-0.2 - 1) / 0.2
    assert gp_inverse_cdf(0.975, GpParams()) == pytest.approx(5.456395525912732, abs=1e-12)
    assert gp_inverse_cdf(0.0, GpParams()) == 0.0


def test_gp_exponential_limit():
    p = GpParams(mu=1.0, sigma=2.0, xi=0.0)
    assert gp_inverse_cdf(0.5, p) == pytest.approx(1.0 + 2.0 * math.log(2.0), rel=1e-14)
    close = GpParams(mu=1.0, sigma=2.0, xi=1e-9)
    assert gp_inverse_cdf(0.5, close) == pytest.approx(gp_inverse_cdf(0.5, p), rel=1e-8)


def test_gp_cdf_roundtrip():
    p = np.linspace(0, 0.999, 50)
    for params in (GpParams(), GpParams(0.5, 2.0, -0.3), GpParams(xi=0.0)):
        np.testing.assert_allclose(params.cdf(gp_inverse_cdf(p, params)), p, atol=1e-12)


def test_gp_rejects_bad_arguments():
    with pytest.raises(DomainError):
        gp_inverse_cdf(1.0, GpParams())
    with pytest.raises(DomainError):
        gp_inverse_cdf(-0.1, GpParams())
    with pytest.raises(InvalidArgumentError):
        GpParams(sigma=0.0)


def test_gp_sample_is_seeded():
    a = gp_sample(GpParams(), 1000, 7)
    assert np.array_equal(a, gp_sample(GpParams(), 1000, 7))
    assert not np.array_equal(a, gp_sample(GpParams(), 1000, 8))


def test_gp_sample_distribution():
    x = gp_sample(GpParams(), 1_000_000, 42)
    assert np.mean(x) == pytest.approx(1.25, abs=0.01)
    ks = stats.kstest(x, stats.genpareto(c=0.2).cdf).statistic
    assert ks <= 0.002


def test_tail_experiment_small():
    rep = run_tail_experiment(n=100_000, seed=3)
    assert rep.q_after == rep.q_before
    assert rep.e_after > rep.e_before
    assert rep.rp_before == 40.0
    assert 38.0 <= rep.rp_after < 40.0
    assert all(d == 0.0 for _, d in rep.lower_level_quantile_deltas)
    assert all(d > 0.0 for _, d in rep.all_level_expectile_deltas)
    assert rep.level_check == pytest.approx(0.975, abs=1e-9)


def test_tail_experiment_rp_after_definition():
    rep = run_tail_experiment(n=20_000, seed=5)
    x = gp_sample(GpParams(), 20_000, 5)
    y = np.where(x > rep.q_before, x + 0.1, x)
    assert rep.rp_after == pytest.approx(1 / (1 - expectile_level_of_value(y, rep.e_before)), rel=1e-12)


def test_tail_report_rows_are_deterministic():
    a = run_tail_experiment(n=5000, seed=9).rows()
    b = run_tail_experiment(n=5000, seed=9).rows()
    assert a == b
    keys = [k for k, _ in a]
    assert keys[:3] == ["mu", "sigma", "xi"] and "bit_generator" in keys


def test_tail_experiment_rejects_bad_shift():
    with pytest.raises(InvalidArgumentError):
        run_tail_experiment(n=100, shift=0.0)


def test_histogram_bins():
    edges, counts = histogram_bins([0.05, 0.15, 0.15, 7.95, 9.0], bin_width=0.1, upper=8.0)
    assert len(edges) == 81 and len(counts) == 80
    assert counts[0] == 1 and counts[1] == 2 and counts[-1] == 1
    assert counts.sum() == 4

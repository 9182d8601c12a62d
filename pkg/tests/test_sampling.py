import math

import numpy as np
import pytest

from natureopt.sampling import (
    LevyParams,
    RngStream,
    ccdf_slope,
    gaussian,
    hill_estimator,
    levy_step,
    levy_tail_density,
    mantegna_sigma,
    uniform,
)

N = 1_000_000


def test_uniform_degenerate_interval():
    assert uniform(RngStream(0), 2.5, 2.5) == 2.5


def test_uniform_rejects_inverted_interval():
    with pytest.raises(ValueError):
        uniform(RngStream(0), 1.0, 0.0)


def test_uniform_moments():
    u = RngStream(11).uniform(0.0, 1.0, N)
    assert abs(u.mean() - 0.5) < 0.002
    assert abs(u.var() - 1 / 12) < 0.002
    assert u.min() >= 0.0 and u.max() < 1.0


def test_uniform_deterministic():
    a, b = RngStream(99), RngStream(99)
    assert [uniform(a, -1, 3) for _ in range(100)] == [uniform(b, -1, 3) for _ in range(100)]


def test_gaussian_moments_and_tail():
    z = RngStream(12).normal(N)
    assert abs(z.mean()) < 0.005
    assert abs(z.var() - 1.0) < 0.01
    assert abs(np.mean(np.abs(z) > 1.96) - 0.05) < 0.005


def test_gaussian_deterministic():
    a, b = RngStream(3), RngStream(3)
    assert [gaussian(a) for _ in range(50)] == [gaussian(b) for _ in range(50)]


def test_child_streams_depend_only_on_seed_and_index():
    parent = RngStream(7)
    parent.random(10)
    assert parent.spawn(2).random(5).tolist() == RngStream(7).spawn(2).random(5).tolist()
    assert parent.spawn(1).random(5).tolist() != parent.spawn(2).random(5).tolist()
    assert RngStream(7).child_seed(3) == RngStream(7).child_seed(3)
    assert RngStream(7).child_seed(3) != RngStream(7).child_seed(4)


def test_seed_range():
    RngStream(2**64 - 1)
    with pytest.raises(ValueError):
        RngStream(-1)
    with pytest.raises(ValueError):
        RngStream(2**64)


def test_levy_params_range():
    with pytest.raises(ValueError):
        LevyParams(1.0)
    with pytest.raises(ValueError):
        LevyParams(3.0)
    with pytest.raises(ValueError):
        LevyParams(1.5, -1.0)


def test_levy_zero_scale_gives_zero_steps():
    assert np.all(RngStream(1).levy(LevyParams(1.5, 0.0), 1000) == 0.0)
    small = np.abs(RngStream(1).levy(LevyParams(1.5, 1e-12), 1000))
    assert small.max() < 1e-12 * np.abs(RngStream(1).levy(LevyParams(1.5, 1.0), 1000)).max() * 1.0000001


def test_levy_step_scalar_and_deterministic():
    a = [levy_step(RngStream(4)) for _ in range(3)]
    assert all(isinstance(v, float) for v in a)
    assert a[0] == a[1] == a[2]


def test_levy_scale_linearity():
    base = RngStream(21).levy(LevyParams(1.5, 1.0), 20_000)
    scaled = RngStream(21).levy(LevyParams(1.5, 3.0), 20_000)
    # Same stream, so the scaled sample is exactly the scaled base sample.
    assert np.allclose(scaled, 3.0 * base, rtol=1e-15, atol=0)
    # Independent streams: quantiles agree in distribution.
    other = RngStream(22).levy(LevyParams(1.5, 3.0), 200_000)
    ref = 3.0 * RngStream(23).levy(LevyParams(1.5, 1.0), 200_000)
    qs = [0.1, 0.25, 0.5, 0.75, 0.9]
    assert np.allclose(np.quantile(other, qs), np.quantile(ref, qs), rtol=0.05, atol=0.02)


def test_levy_symmetric():
    s = RngStream(5).levy(LevyParams(1.5), 200_000)
    assert abs(np.mean(s > 0) - 0.5) < 0.005


@pytest.mark.slow
def test_levy_tail_index_hill():
    s = RngStream(2024).levy(LevyParams(1.5, 1.0), N)
    # The Hill estimate targets the survival exponent lam; the density exponent is 1 + lam.
    assert abs((1.0 + hill_estimator(s, 0.01)) - 2.5) < 0.15


@pytest.mark.slow
def test_levy_tail_ratio():
    s = np.abs(RngStream(2025).levy(LevyParams(1.5, 1.0), N))
    ratio = np.mean(s > 10.0) / np.mean(s > 20.0)
    assert abs(ratio - 2**1.5) / 2**1.5 < 0.2


@pytest.mark.slow
def test_levy_ccdf_slope():
    s = RngStream(2026).levy(LevyParams(1.5, 1.0), N)
    slope = ccdf_slope(s, 10.0, 100.0)
    assert abs(-slope - 1.5) / 1.5 < 0.10


def test_hill_estimator_on_exact_pareto():
    # Oracle: inverse-CDF Pareto sample with survival exponent 2.
    u = RngStream(8).random(200_000)
    x = (1.0 - u) ** (-1.0 / 2.0)
    assert abs(hill_estimator(x, 0.05) - 2.0) < 0.1


@pytest.mark.parametrize("lam", [1.1, 1.5, 1.9, 2.5])
def test_tail_density_ratio(lam):
    p = LevyParams(lam)
    assert levy_tail_density(3.0, p) / levy_tail_density(6.0, p) == pytest.approx(2 ** (1 + lam), rel=1e-12)


def test_tail_density_hand_value():
    gamma_15 = math.sqrt(math.pi) / 2
    expected = 1.5 * gamma_15 * (math.sqrt(2) / 2) / math.pi * 10 ** -2.5
    assert levy_tail_density(10.0, LevyParams(1.5)) == pytest.approx(expected, rel=1e-14)


def test_tail_density_zero_at_lambda_two():
    assert levy_tail_density(1.0, LevyParams(2.0)) == pytest.approx(0.0, abs=1e-15)


def test_tail_density_domain():
    with pytest.raises(ValueError):
        levy_tail_density(0.0, LevyParams())


def test_mantegna_sigma_known_value():
    # lam = 1.5: (Gamma(2.5) sin(0.75 pi) / (Gamma(1.25) * 1.5 * 2**0.25)) ** (2/3)
    expected = (math.gamma(2.5) * math.sin(0.75 * math.pi) / (math.gamma(1.25) * 1.5 * 2**0.25)) ** (2 / 3)
    assert mantegna_sigma(1.5) == pytest.approx(expected, rel=1e-15)
    assert mantegna_sigma(1.5) == pytest.approx(0.6966, abs=1e-4)
    assert mantegna_sigma(2.5) == 1.0

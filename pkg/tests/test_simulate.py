import math

import numpy as np
import pytest

from specvar import (DomainError, NumericError, SpectralMeasure,
                     autocovariance, counterexample, empirical_variance,
                     quadratic, simulate, variance_spectral, white_noise,
                     with_origin_atom)

PI = math.pi


def test_bit_exact_reproducibility():
    m = quadratic()
    a = simulate(m, N=512, P=64, seed=20260101)
    b = simulate(m, N=512, P=64, seed=20260101)
    assert np.array_equal(a.paths, b.paths)
    assert a.method == b.method == "circulant"
    assert a.embedding_min_eigenvalue == b.embedding_min_eigenvalue


def test_different_seeds_differ():
    m = white_noise()
    a = simulate(m, N=128, P=8, seed=1)
    b = simulate(m, N=128, P=8, seed=2)
    assert not np.array_equal(a.paths, b.paths)


def test_whitenoise_lag1_small():
    batch = simulate(white_noise(), N=2048, P=500, seed=99)
    x = batch.paths
    lag1 = float((x[:, :-1] * x[:, 1:]).mean())
    assert abs(lag1) <= 4.0 / math.sqrt(x.size)


def test_single_atom_alternating_paths():
    m = SpectralMeasure(atoms=((PI, 1.0),))
    batch = simulate(m, N=256, P=400, seed=5)
    per_path = (batch.paths[:, :-1] * batch.paths[:, 1:]).mean(axis=1)
    se = per_path.std(ddof=1) / math.sqrt(len(per_path))
    assert abs(per_path.mean() - (-1.0)) <= 4.0 * se


def test_sample_covariance_lags(gallery_measures):
    m = gallery_measures["whitenoise"]
    batch = simulate(m, N=512, P=1000, seed=31415)
    for lag in range(0, 9):
        x0 = batch.paths[:, : 512 - lag]
        xl = batch.paths[:, lag:]
        per_path = (x0 * xl).mean(axis=1)
        se = per_path.std(ddof=1) / math.sqrt(batch.n_paths)
        assert abs(per_path.mean() - autocovariance(m, lag)) <= 5.0 * se


def test_empirical_matches_spectral_quadratic():
    m = quadratic()
    batch = simulate(m, N=512, P=800, seed=271828)
    est, se = empirical_variance(batch, 256)
    assert abs(est - variance_spectral(m, 256)) <= 4.0 * se


def test_counterexample_uses_dense_fallback():
    m = counterexample()
    batch = simulate(m, N=512, P=50, seed=17)
    assert batch.method == "cholesky"
    assert batch.embedding_min_eigenvalue is None
    est, se = empirical_variance(batch, 64)
    assert abs(est - variance_spectral(m, 64)) <= 4.0 * se


def test_origin_atom_random_level():
    m = with_origin_atom(white_noise(), 0.5)
    batch = simulate(m, N=64, P=3000, seed=777)
    n = 64
    est, se = empirical_variance(batch, n)
    assert abs(est - (0.5 * n ** 2 + n)) <= 4.0 * se
    # the level is constant within each path: per-path mean variance ~ 0.5
    level_est = batch.paths.mean(axis=1)
    assert abs(np.mean(level_est ** 2) - (0.5 + 1.0 / n)) <= 0.1


def test_single_path_standard_error_inf():
    batch = simulate(white_noise(), N=32, P=1, seed=4)
    est, se = empirical_variance(batch, 8)
    assert math.isfinite(est)
    assert se == math.inf


def test_empirical_variance_domain():
    batch = simulate(white_noise(), N=32, P=4, seed=4)
    with pytest.raises(DomainError):
        empirical_variance(batch, 33)
    with pytest.raises(DomainError):
        empirical_variance(batch, 0)


def test_simulate_domain():
    with pytest.raises(DomainError):
        simulate(white_noise(), N=0, P=1, seed=1)
    with pytest.raises(DomainError):
        simulate(white_noise(), N=2 ** 16 + 1, P=1, seed=1)
    with pytest.raises(DomainError):
        simulate(white_noise(), N=8, P=0, seed=1)


def test_indefinite_embedding_large_n_raises():
    # the staircase measure has an indefinite embedding; beyond the dense
    # fallback limit this must surface as a numeric error telling the caller
    # to reduce N
    with pytest.raises(NumericError):
        simulate(counterexample(), N=8192, P=1, seed=1)


def test_path_length_one():
    m = white_noise()
    batch = simulate(m, N=1, P=200, seed=12)
    assert batch.paths.shape == (200, 1)
    assert abs(batch.paths.var() - 1.0) <= 0.3

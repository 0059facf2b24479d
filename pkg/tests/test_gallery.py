import math

import numpy as np
import pytest

from specvar import (DomainError, counterexample, g_eval, nonergodic,
                     power_law, quadratic, robinson_integral,
                     variance_spectral, white_noise, with_origin_atom)
from specvar.gallery import GALLERY, build

PI = math.pi


def test_counterexample_structure():
    m = counterexample()
    assert m.atom_at_zero == 0.0
    locs = [loc for loc, _ in m.atoms]
    masses = [mass for _, mass in m.atoms]
    assert locs == sorted(locs)
    assert locs[-1] == 0.5 and masses[-1] == 0.5
    assert len(m.atoms) == 60
    assert m.meta["tail_mass_bound"] == 2.0 ** -60


def test_counterexample_g_staircase():
    m = counterexample()
    assert g_eval(m, 0.3) == pytest.approx(0.5, abs=1e-15)
    # right-continuity at the jump: G(2^-k) includes the atom there
    assert g_eval(m, 0.5) == pytest.approx(1.0 - 2.0 ** -60, abs=1e-15)
    assert g_eval(m, 0.49) == pytest.approx(0.5, abs=1e-15)


def test_counterexample_total_mass():
    m = counterexample()
    assert g_eval(m, PI) == pytest.approx(1.0 - 2.0 ** -60, abs=1e-16)


def test_counterexample_dyadic_column_converges():
    m = counterexample()
    v18 = variance_spectral(m, 2 ** 18) / 2 ** 18
    v24 = variance_spectral(m, 2 ** 24) / 2 ** 24
    assert abs(v18 - v24) < 1e-3
    # limit value from the direct atom-sum oracle
    assert v24 == pytest.approx(4.754058, abs=1e-4)


def test_counterexample_full_sequence_does_not_settle():
    m = counterexample()
    window = np.arange(2 ** 12, 2 ** 13 + 1)
    locs, masses = m.atom_arrays()
    s2 = np.sin(locs / 2.0) ** 2
    ratios = np.array([
        float((np.sin(n * locs / 2.0) ** 2 / s2 * masses).sum()) / n
        for n in window[:: 16]])
    assert ratios.max() - ratios.min() >= 0.01


def test_counterexample_kmax_validation():
    with pytest.raises(DomainError):
        counterexample(4)


def test_power_law_exact_mass():
    m = power_law(0.5)
    assert g_eval(m, 0.25) == pytest.approx(0.25 ** 1.5, rel=1e-14)
    m2 = power_law(1.3, scale=2.5)
    x = 0.63
    assert g_eval(m2, x) == pytest.approx(2.5 * x ** 0.7, rel=1e-14)


def test_power_law_whitenoise_alias():
    m = white_noise()
    assert m.density[0].exponent == 0.0
    assert g_eval(m, 1.0) == pytest.approx(1.0 / PI, rel=1e-14)
    assert variance_spectral(m, 9) == pytest.approx(9.0, rel=1e-12)


def test_power_law_domain():
    for bad in (0.0, 2.0, -1.0):
        with pytest.raises(DomainError):
            power_law(bad)
    with pytest.raises(DomainError):
        power_law(1.0, scale=0.0)


def test_quadratic_measure():
    m = quadratic()
    assert g_eval(m, PI) == pytest.approx(PI ** 2, rel=1e-14)
    assert g_eval(m, 0.5) == pytest.approx(0.25, rel=1e-14)
    from specvar import autocovariance
    assert autocovariance(m, 1) == pytest.approx(-4.0, abs=1e-12)


def test_quadratic_log_band():
    from specvar import variance_profile
    prof = variance_profile(quadratic(), 2 ** 10)
    n = np.arange(2, 2 ** 10 + 1)
    dev = prof[1:] - 4.0 * np.log(n)
    # oracle band at full scale is [8.9666, 9.2144]
    assert dev.max() - dev.min() <= 2.0
    assert 8.9 <= dev.min() and dev.max() <= 9.3


def test_nonergodic_structure():
    m = nonergodic()
    assert len(m.atoms) == 39
    locs, masses = m.atom_arrays()
    assert locs.max() == pytest.approx(PI / 2.0, rel=1e-15)
    # total mass sum_{k=2}^{40} 4^-k = (1/12)(1 - 4^-39)
    assert g_eval(m, PI) == pytest.approx((1.0 - 4.0 ** -39) / 12.0, rel=1e-14)


def test_nonergodic_dyadic_bounded_full_grows():
    m = nonergodic()
    dyadic_max = max(variance_spectral(m, 2 ** j) for j in range(0, 19))
    assert dyadic_max == pytest.approx(0.19854569229312555, rel=1e-10)
    # strong resonances: alternating-bit integers light up every other atom
    n_star = int("10" * 9, 2)  # 174762
    v_star = variance_spectral(m, n_star)
    assert v_star == pytest.approx(1.4364406573, rel=1e-8)
    assert v_star > 5.0 * dyadic_max


def test_nonergodic_robinson_finite():
    assert robinson_integral(nonergodic()) == pytest.approx(39.0 / (4.0 * PI ** 2),
                                                            rel=1e-12)


def test_truncation_robustness():
    for build_fn, kmaxes in ((counterexample, (60, 120)), (nonergodic, (40, 80))):
        small, big = (build_fn(k) for k in kmaxes)
        for n in (1, 64, 2 ** 10, 2 ** 14):
            a = variance_spectral(small, n)
            b = variance_spectral(big, n)
            assert abs(a - b) <= small.meta["tail_mass_bound"] * n ** 2 + 1e-12
            assert abs(a - b) <= 1e-6


def test_with_origin_atom():
    base = white_noise()
    m = with_origin_atom(base, 0.7)
    assert m.atom_at_zero == pytest.approx(0.7)
    assert g_eval(m, PI) == pytest.approx(g_eval(base, PI) + 0.7, abs=1e-14)
    for n in (2, 64, 1000):
        assert variance_spectral(m, n) == pytest.approx(0.7 * n ** 2 + n,
                                                        rel=1e-12)
    with pytest.raises(DomainError):
        with_origin_atom(base, 0.0)


def test_gallery_outputs_validate(gallery_measures):
    for m in gallery_measures.values():
        xs = np.linspace(0.0, PI, 50)
        gs = g_eval(m, xs)
        assert np.all(np.diff(gs) >= -1e-12)
        assert np.isfinite(g_eval(m, PI))


def test_registry_build():
    m = build("power", gamma="0.5", scale="2.0")
    assert m.meta["gamma"] == 0.5 and m.meta["scale"] == 2.0
    with pytest.raises(DomainError):
        build("missing")
    with pytest.raises(DomainError):
        build("power")  # gamma is required
    with pytest.raises(DomainError):
        build("quadratic", k_max="12")
    assert set(GALLERY) == {"counterexample", "power", "quadratic",
                            "nonergodic", "whitenoise"}

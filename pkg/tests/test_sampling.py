import math

import numpy as np
import pytest

from rankone.harmonic import harmonic_dimension
from rankone.poly import bw_norm, laplacian, multi_bw_norm, multinomial, num_monomials
from rankone.sampling import (
    DomainError,
    SeedSpec,
    gaussian_harmonic,
    gaussian_multi_harmonic,
    gaussian_tensor,
    kostlan_form,
    kostlan_multi,
    projection_ratio_sample,
    uniform_sphere,
)
from rankone.tensor import COMPLEX, REAL, frobenius_norm


def test_gaussian_tensor_determinism():
    a = gaussian_tensor((2, 3), REAL, 7, index=5)
    b = gaussian_tensor((2, 3), REAL, 7, index=5)
    np.testing.assert_array_equal(a.data, b.data)
    c = gaussian_tensor((2, 3), REAL, 7, index=6)
    assert not np.array_equal(a.data, c.data)


def test_gaussian_tensor_moments():
    vals = [frobenius_norm(gaussian_tensor((2, 2, 2), REAL, 1, i)) ** 2 for i in range(3000)]
    assert np.mean(vals) == pytest.approx(8.0, rel=0.05)
    cv = [gaussian_tensor((4,), COMPLEX, 2, i).data for i in range(3000)]
    cv = np.concatenate(cv)
    assert np.mean(np.abs(cv) ** 2) == pytest.approx(1.0, rel=0.05)
    # real and imaginary parts each have variance 1/2
    assert np.var(cv.real) == pytest.approx(0.5, rel=0.05)
    assert np.var(cv.imag) == pytest.approx(0.5, rel=0.05)


def test_kostlan_bw_norm_expectation():
    # E |f|^2 = binom(d+n-1, d) = 4 for d=3, n=2
    vals = [bw_norm(kostlan_form(3, 2, REAL, 3, i)) ** 2 for i in range(4000)]
    assert np.mean(vals) == pytest.approx(4.0, rel=0.05)
    # chi-squared with N degrees of freedom: variance 2N
    assert np.var(vals) == pytest.approx(8.0, rel=0.15)


def test_kostlan_coefficient_variance():
    # coefficient at (1,1,1), d=3, n=3 has variance binom = 6
    coefs = [
        kostlan_form(3, 3, REAL, 4, i).coefficient((1, 1, 1)) for i in range(4000)
    ]
    assert np.var(coefs) == pytest.approx(6.0, rel=0.1)
    assert multinomial(3, (1, 1, 1)) == 6


def test_kostlan_multi_norm_expectation():
    n_mon = math.comb(3, 2) * math.comb(4, 3)
    vals = [
        multi_bw_norm(kostlan_multi((2, 3), (2, 2), REAL, 5, i)) ** 2 for i in range(2000)
    ]
    assert np.mean(vals) == pytest.approx(n_mon, rel=0.07)


def test_gaussian_harmonic_properties():
    dim = harmonic_dimension(4, 3)
    vals = []
    for i in range(1500):
        h = gaussian_harmonic(4, 3, 6, i)
        vals.append(bw_norm(h) ** 2)
        if i < 50:
            assert np.linalg.norm(laplacian(h).coeffs) < 1e-9
    assert np.mean(vals) == pytest.approx(dim, rel=0.07)


def test_gaussian_multi_harmonic():
    dims = harmonic_dimension(2, 2) * harmonic_dimension(2, 3)
    vals = [
        multi_bw_norm(gaussian_multi_harmonic((2, 2), (2, 3), 7, i)) ** 2
        for i in range(2000)
    ]
    assert np.mean(vals) == pytest.approx(dims, rel=0.07)


def test_uniform_sphere():
    for field, dim in [(REAL, 5), (COMPLEX, 5)]:
        xs = np.array([uniform_sphere(dim, field, 8, i) for i in range(2000)])
        np.testing.assert_allclose(np.linalg.norm(xs, axis=1), 1.0, atol=1e-14)
        assert np.max(np.abs(np.mean(xs.real, axis=0))) < 3.0 / math.sqrt(2000 * dim)
    xs = np.array([uniform_sphere(4, REAL, 9, i) for i in range(3000)])
    assert np.mean(xs[:, 0] ** 2) == pytest.approx(0.25, rel=0.1)
    with pytest.raises(DomainError):
        uniform_sphere(0, REAL, 1)


def test_projection_ratio_basics():
    assert projection_ratio_sample(7, 7, 1) == 1.0
    with pytest.raises(DomainError):
        projection_ratio_sample(3, 5, 1)
    vals = np.array([projection_ratio_sample(10, 3, 2, i) for i in range(20000)])
    assert np.all((vals > 0) & (vals <= 1))
    assert np.mean(vals**2) == pytest.approx(0.3, rel=0.02)


def test_projection_ratio_gamma_path():
    # k > 64 goes through the Gamma sampler
    vals = np.array([projection_ratio_sample(200, 100, 3, i) for i in range(5000)])
    assert np.mean(vals**2) == pytest.approx(0.5, rel=0.03)


def test_purpose_tags_give_independent_streams():
    a = SeedSpec(11, "alpha").rng(0).standard_normal(1000)
    b = SeedSpec(11, "beta").rng(0).standard_normal(1000)
    assert not np.array_equal(a, b)
    corr = np.corrcoef(a, b)[0, 1]
    assert abs(corr) < 3.0 / math.sqrt(1000)


def test_seedspec_matches_plain_int_seed():
    t1 = gaussian_tensor((2, 2), REAL, 13, 4)
    t2 = gaussian_tensor((2, 2), REAL, SeedSpec(13, "gaussian_tensor"), 4)
    np.testing.assert_array_equal(t1.data, t2.data)

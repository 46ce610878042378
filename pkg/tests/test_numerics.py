import math

import numpy as np
import pytest

from loopsphere import numerics
from loopsphere.prng import SplitMix64


def test_gauss_legendre_exact_on_polynomials():
    rule = numerics.gauss_legendre(6)
    # Exact for degree <= 11 on [-1, 1].
    for deg in range(12):
        val = numerics.integrate(lambda x: x**deg, (-1.0, 1.0), rule)
        exact = 0.0 if deg % 2 else 2.0 / (deg + 1)
        assert abs(val - exact) < 1e-14


def test_integrate_interval_mapping():
    rule = numerics.gauss_legendre(20)
    val = numerics.integrate(math.sin, (0.0, math.pi), rule)
    assert abs(val - 2.0) < 1e-13


def test_integrate_rejects_non_finite():
    rule = numerics.gauss_legendre(4)
    with np.errstate(divide="ignore"), pytest.raises(ValueError, match="non-finite"):
        numerics.integrate(lambda x: 1.0 / (x - x), (0.0, 1.0), rule)


def test_check_symmetric():
    m = np.array([[1.0, 2.0], [2.0, 3.0]])
    out = numerics.check_symmetric(m)
    assert np.array_equal(out, m)
    with pytest.raises(ValueError, match="not symmetric"):
        numerics.check_symmetric(np.array([[1.0, 2.0], [0.0, 3.0]]))
    with pytest.raises(ValueError, match="square"):
        numerics.check_symmetric(np.zeros((2, 3)))


def test_eig_symmetric_matches_lapack():
    rng = SplitMix64(99)
    for n in (1, 2, 5, 12):
        raw = np.array(rng.gauss_vector(n * n)).reshape(n, n)
        m = 0.5 * (raw + raw.T)
        w, v = numerics.eig_symmetric(m)
        w_ref = np.linalg.eigvalsh(m)
        assert np.allclose(w, w_ref, atol=1e-12 * max(1.0, np.linalg.norm(m)))
        # Residual and orthogonality of the eigenvectors.
        assert np.linalg.norm(m @ v - v @ np.diag(w)) < 1e-11 * max(1.0, np.linalg.norm(m))
        assert np.linalg.norm(v.T @ v - np.eye(n)) < 1e-12


def test_bisect_root():
    root = numerics.bisect_root(lambda x: x**2 - 2.0, (0.0, 2.0))
    assert abs(root - math.sqrt(2.0)) < 1e-11
    with pytest.raises(ValueError, match="does not change sign"):
        numerics.bisect_root(lambda x: 1.0 + x * x, (0.0, 1.0))

import numpy as np
import pytest

from loopsphere import resolution, trigpoly
from loopsphere.cli import random_loop
from loopsphere.prng import SplitMix64


def random_pair(rng, dim):
    a = np.array(rng.gauss_vector(dim))
    b = np.array(rng.gauss_vector(dim))
    a /= np.linalg.norm(a)
    b -= (a @ b) * a
    b /= np.linalg.norm(b)
    return a, b


def test_plane_rotation_validation():
    with pytest.raises(ValueError, match="orthogonal with equal lengths"):
        resolution.rotation_from_basis(np.array([1.0, 0.0, 0.0]), np.array([1.0, 1.0, 0.0]))
    with pytest.raises(ValueError, match="nonzero"):
        resolution.rotation_from_basis(np.zeros(3), np.array([1.0, 0.0, 0.0]))
    rng = SplitMix64(21)
    a, b = random_pair(rng, 4)
    rot = resolution.rotation_from_basis(a, b)
    # Defining identities.
    p, w = rot.projection, rot.rotation
    assert np.allclose(w @ w, -p, atol=1e-12)
    assert np.allclose(p @ w, w, atol=1e-12)
    assert np.allclose(w @ b, a, atol=1e-12)
    assert np.allclose(w @ a, -b, atol=1e-12)
    # lambda(theta) is orthogonal for every theta.
    for theta in (0.0, 0.4, 2.2):
        m = rot.matrix(theta)
        assert np.allclose(m @ m.T, np.eye(4), atol=1e-12)


def test_apply_rotation_matches_pointwise_product():
    rng = SplitMix64(22)
    n = random_loop(3, 2, 1.0, seed=5)
    a, b = random_pair(rng, 4)
    rot = resolution.rotation_from_basis(a, b)
    out = resolution.apply_rotation(rot, n)
    thetas = np.linspace(0.0, 2 * np.pi, 17, endpoint=False)
    expected = np.array([rot.matrix(th) @ n.eval(th) for th in thetas])
    assert np.allclose(out.eval(thetas), expected, atol=1e-12)
    # Inverse application undoes it.
    back = resolution.apply_rotation(rot, out, inverse=True)
    assert np.allclose(back.eval(thetas), n.eval(thetas), atol=1e-12)


def test_peel_lowers_degree_by_one():
    n = random_loop(2, 3, 1.0, seed=9)
    factor, lowered = resolution.peel(n)
    assert lowered.degree == n.degree - 1
    rebuilt = resolution.apply_rotation(factor, lowered)
    thetas = np.linspace(0.0, 2 * np.pi, 25, endpoint=False)
    assert np.allclose(rebuilt.eval(thetas), n.eval(thetas), atol=1e-11)


def test_peel_errors():
    const = trigpoly.trig_poly(np.array([1.0, 0.0, 0.0]))
    with pytest.raises(resolution.PeelError, match="constant"):
        resolution.peel(const)


def test_factorize_compose_roundtrip():
    thetas = np.linspace(0.0, 2 * np.pi, 41, endpoint=False)
    for seed in range(10):
        n = random_loop(3, 3, 1.0, seed=seed)
        fact = resolution.factorize(n, 1.0)
        assert len(fact.rotations) == n.degree
        back = resolution.compose(fact)
        assert np.max(np.abs(back.eval(thetas) - n.eval(thetas))) < 1e-11


def test_factorize_rejects_off_sphere_loops():
    n = trigpoly.trig_poly(np.array([1.0, 0.0, 0.0]), a=np.array([[0.3, 0.0, 0.0]]),
                           b=np.array([[0.0, 0.3, 0.0]]))
    with pytest.raises(ValueError, match="does not map into the sphere"):
        resolution.factorize(n, 1.0)


def test_repeel_determinism():
    n = random_loop(2, 4, 1.0, seed=17)
    f1 = resolution.factorize(n, 1.0)
    f2 = resolution.factorize(n, 1.0)
    assert np.array_equal(f1.base, f2.base)
    for r1, r2 in zip(f1.rotations, f2.rotations):
        assert np.array_equal(r1.projection, r2.projection)
        assert np.array_equal(r1.rotation, r2.rotation)


def test_is_singular_rotation_both_ways():
    rng = SplitMix64(23)
    n = random_loop(3, 2, 1.0, seed=31)
    # The inverse of the peeling factor lowers the degree: singular.
    factor, _ = resolution.peel(n)
    lowering = factor.inverse()
    assert resolution.is_singular_rotation(lowering, n)
    assert resolution.apply_rotation(lowering, n).degree <= n.degree
    # A generic rotation raises the degree: not singular.
    a, b = random_pair(rng, 4)
    generic = resolution.rotation_from_basis(a, b)
    assert not resolution.is_singular_rotation(generic, n)
    assert resolution.apply_rotation(generic, n).degree == n.degree + 1


def test_orthogonal_loop_identities_and_degree_lowering():
    rng = SplitMix64(24)
    a, b = random_pair(rng, 4)
    phi = resolution.orthogonal_loop_from_pair(a, b)
    for name, err in phi.residuals().items():
        assert err < 1e-12, name
    for theta in (0.1, 1.0, 3.0):
        m = phi.matrix(theta)
        assert np.allclose(m @ m.T, np.eye(4), atol=1e-12)
    n = random_loop(3, 2, 1.0, seed=12)
    rep = resolution.compare_peel_mechanisms(n)
    assert rep["peel_degree"] == rep["input_degree"] - 1
    assert rep["orthogonal_loop_degree"] == rep["input_degree"] - 1
    assert rep["same_norm"]


def test_rotations_json_roundtrip():
    n = random_loop(2, 2, 1.0, seed=3)
    fact = resolution.factorize(n, 1.0)
    data = resolution.rotations_to_dict(fact)
    back = resolution.rotations_from_dict(data)
    assert np.array_equal(back.base, fact.base)
    assert back.radius == fact.radius
    thetas = np.linspace(0.0, 2 * np.pi, 19, endpoint=False)
    assert np.allclose(
        resolution.compose(back).eval(thetas), n.eval(thetas), atol=1e-11
    )
    data["base"] = [1.0]
    with pytest.raises(trigpoly.LoopFormatError, match="base point"):
        resolution.rotations_from_dict(data)

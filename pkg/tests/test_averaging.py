import numpy as np
import pytest

from conftest import near_pairs
from manifold_tv.averaging import MeanConfig, approx_mean5, karcher_mean, karcher_mean_batch
from manifold_tv.exceptions import NonConvergedError
from manifold_tv.manifolds import S1, S2, SO3, Euclidean, Pos3


def s2_cluster(rng, n_sets, k=5, radius=0.5):
    M = S2()
    centre = M.random_point(rng, n_sets)
    pts = []
    for _ in range(k):
        c = rng.standard_normal((n_sets, 2))
        c *= (radius * rng.uniform(0, 1, n_sets) / np.linalg.norm(c, axis=1))[:, None]
        pts.append(M.exp(centre, M.tangent_from_coords(centre, c)))
    return np.stack(pts)


def test_euclidean_mean_is_arithmetic(rng):
    pts = rng.standard_normal((5, 100, 3))
    mean, conv, _ = karcher_mean_batch(Euclidean(3), pts)
    assert conv.all()
    np.testing.assert_allclose(mean, pts.mean(axis=0), atol=1e-12)


def test_approx_mean5_is_arithmetic_on_euclidean(rng):
    pts = rng.standard_normal((5, 100, 2))
    np.testing.assert_allclose(approx_mean5(Euclidean(2), *pts), pts.mean(axis=0), atol=1e-12)


def test_sphere_clusters_converge(rng):
    M = S2()
    pts = s2_cluster(rng, 200)
    mean, conv, res = karcher_mean_batch(M, pts, tol=1e-10, max_iter=100)
    assert conv.all() and res.max() <= 1e-10
    grad = sum(M.log(mean, p) for p in pts)
    assert np.max(np.linalg.norm(grad, axis=-1)) <= 1e-8


def test_mean_of_identical_points(manifold, rng):
    x = manifold.random_point(rng, 3)
    mean, conv, _ = karcher_mean_batch(manifold, np.stack([x] * 5))
    assert conv.all()
    assert np.max(manifold.dist(mean, x)) <= 1e-12


def test_mean_is_permutation_invariant(rng):
    M = Pos3()
    a, _ = near_pairs(M, rng, 1)
    pts = np.stack([near_pairs(M, rng, 1)[1] for _ in range(5)])
    m1 = karcher_mean(M, pts[:, 0])
    m2 = karcher_mean(M, pts[::-1, 0])
    assert M.dist(m1, m2) <= 1e-9


def test_batch_entries_do_not_interact(rng):
    pts = s2_cluster(rng, 20)
    full, _, _ = karcher_mean_batch(S2(), pts)
    part, _, _ = karcher_mean_batch(S2(), pts[:, 7:8])
    assert full[7].tobytes() == part[0].tobytes()


def test_single_point_api_and_nonconvergence(rng):
    M = SO3()
    pts = M.random_point(rng, 5)
    with pytest.raises(NonConvergedError) as info:
        karcher_mean(M, pts, tol=1e-300, max_iter=1)
    assert info.value.residual > 0
    circle = karcher_mean(S1(), np.array([0.1, 0.2, 0.3]))
    assert circle == pytest.approx(0.2)


def test_mean_config_validation():
    with pytest.raises(ValueError):
        MeanConfig(tol=0)
    with pytest.raises(ValueError):
        MeanConfig(max_iter=0)

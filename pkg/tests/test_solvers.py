import numpy as np
import pytest

from manifold_tv.exceptions import CutLocusError
from manifold_tv.manifolds import S1, S2, Euclidean, Pos3
from manifold_tv.noise import tangent_gaussian_noise
from manifold_tv.solvers import (
    DenoiseParams,
    LambdaSchedule,
    cyclic_ppa,
    denoise,
    functional_value,
    parallel_ppa,
    resolve_threads,
)


def naive_cyclic(f, alpha, iters, c=3.0, om=0.95):
    """Scalar loop reference for l2-TV on a real-valued image."""
    x = f.astype(float).copy()
    n, m = f.shape
    for r in range(1, iters + 1):
        lam = c * r**-om
        x = x + lam / (1 + lam) * (f - x)
        mu = lam * alpha
        for j in range(m - 1):
            for i in range(n):
                d = abs(x[i, j + 1] - x[i, j])
                t = min(mu, d / 2)
                s = np.sign(x[i, j + 1] - x[i, j])
                x[i, j], x[i, j + 1] = x[i, j] + s * t, x[i, j + 1] - s * t
        for i in range(n - 1):
            for j in range(m):
                d = abs(x[i + 1, j] - x[i, j])
                t = min(mu, d / 2)
                s = np.sign(x[i + 1, j] - x[i, j])
                x[i, j], x[i + 1, j] = x[i, j] + s * t, x[i + 1, j] - s * t
    return x


def naive_parallel(f, alpha, iters, c=3.0, om=0.95):
    x = f.astype(float).copy()
    n, m = f.shape
    for r in range(1, iters + 1):
        lam = c * r**-om
        mu = lam * alpha
        new = np.empty_like(x)
        for i in range(n):
            for j in range(m):
                xs = x[i, j]
                cands = [xs + lam / (1 + lam) * (f[i, j] - xs)]
                for ii, jj in ((i, j + 1), (i, j - 1), (i + 1, j), (i - 1, j)):
                    nb = x[min(max(ii, 0), n - 1), min(max(jj, 0), m - 1)]
                    cands.append(xs + np.sign(nb - xs) * min(mu, abs(nb - xs) / 2))
                new[i, j] = np.mean(cands)
        x = new
    return x


@pytest.fixture
def small_image(rng):
    return rng.standard_normal((5, 4))


def test_cyclic_matches_scalar_reference(small_image):
    p = DenoiseParams(alpha=0.3, iterations=15)
    out = cyclic_ppa(Euclidean(1), small_image[..., None], p).output[..., 0]
    np.testing.assert_allclose(out, naive_cyclic(small_image, 0.3, 15), atol=1e-12)


def test_parallel_matches_scalar_reference(small_image):
    p = DenoiseParams(alpha=0.3, iterations=15, algorithm="parallel")
    out = parallel_ppa(Euclidean(1), small_image[..., None], p).output[..., 0]
    np.testing.assert_allclose(out, naive_parallel(small_image, 0.3, 15), atol=1e-12)


def test_fast_mean_agrees_on_euclidean(small_image):
    f = small_image[..., None]
    a = denoise(Euclidean(1), f, DenoiseParams(alpha=0.3, iterations=10, algorithm="parallel"))
    b = denoise(Euclidean(1), f, DenoiseParams(alpha=0.3, iterations=10,
                                               algorithm="parallel-fast"))
    np.testing.assert_allclose(a.output, b.output, atol=1e-12)


def test_step_signal_minimiser():
    f = np.array([0.0, 0.0, 1.0, 1.0])[:, None]
    p = DenoiseParams(alpha=0.25, iterations=1000)
    out = cyclic_ppa(Euclidean(1), f, p).output[:, 0]
    # the iterate oscillates with amplitude of order alpha * lambda_r
    np.testing.assert_allclose(out, [0.125, 0.125, 0.875, 0.875], atol=2e-3)


@pytest.mark.parametrize("algo", ["cyclic", "parallel", "parallel-fast"])
def test_alpha_zero_is_fixed_point(algo, rng):
    M = S2()
    f = M.random_point(rng, (4, 5))
    out = denoise(M, f, DenoiseParams(alpha=0.0, iterations=5, algorithm=algo)).output
    assert out.tobytes() == f.tobytes()


@pytest.mark.parametrize("algo", ["cyclic", "parallel", "parallel-fast"])
def test_constant_image_is_fixed_point(algo, rng):
    M = Pos3()
    f = np.broadcast_to(M.random_point(rng), (3, 3, 3, 3)).copy()
    out = denoise(M, f, DenoiseParams(alpha=1.0, iterations=5, algorithm=algo)).output
    assert out.tobytes() == f.tobytes()


def test_thread_count_does_not_change_result(rng, monkeypatch):
    import manifold_tv.solvers as solvers

    monkeypatch.setattr(solvers, "CHUNK_SIZE", 7)
    M = S2()
    g = M.random_point(rng, (6, 9))
    p = DenoiseParams(alpha=0.2, iterations=4, algorithm="parallel")
    one = parallel_ppa(M, g, p, n_jobs=1).output
    many = parallel_ppa(M, g, p, n_jobs=4).output
    assert one.tobytes() == many.tobytes()


def test_threads_from_environment(monkeypatch):
    monkeypatch.setenv("MANIFOLD_TV_THREADS", "3")
    assert resolve_threads(None) == 3
    assert resolve_threads(2) == 2
    monkeypatch.delenv("MANIFOLD_TV_THREADS")
    assert resolve_threads(None) == 1
    with pytest.raises(ValueError):
        resolve_threads(0)


def test_functional_decreases_on_hadamard_manifold(rng):
    M = Pos3()
    g = np.broadcast_to(np.eye(3), (6, 6, 3, 3))
    f = tangent_gaussian_noise(M, g, 0.3, seed=5)
    p = DenoiseParams(alpha=0.5, iterations=60)
    rep = cyclic_ppa(M, f, p)
    vals = rep.trace_values
    assert vals[-1] < functional_value(M, f, f, p)
    assert vals[-1] <= vals[0]
    assert [r for r, _ in rep.functional_trace] == sorted({r for r, _ in rep.functional_trace})


def test_functional_value_step_signal():
    f = np.array([0.0, 0.0, 1.0, 1.0])[:, None]
    x = np.array([0.125, 0.125, 0.875, 0.875])[:, None]
    p = DenoiseParams(alpha=0.25)
    expected = 0.5 * 4 * 0.125**2 + 0.25 * 0.75
    assert functional_value(Euclidean(1), x, f, p) == pytest.approx(expected)


def test_cut_locus_is_located():
    f = np.array([[0.0, np.pi]])
    with pytest.raises(CutLocusError) as info:
        cyclic_ppa(S1(), f, DenoiseParams(alpha=0.5, iterations=2))
    assert info.value.pixel == (0, 0) and info.value.stage == "horizontal"


def test_schedule_and_params_validation():
    assert LambdaSchedule()(1) == 3.0
    assert LambdaSchedule(2.0, 1.0)(4) == 0.5
    for bad in (dict(omega=0.5), dict(omega=1.1), dict(c=-1.0)):
        with pytest.raises(ValueError):
            LambdaSchedule(**bad)
    with pytest.raises(ValueError):
        DenoiseParams(algorithm="sequential")
    with pytest.raises(ValueError):
        DenoiseParams(alpha=-1)
    assert DenoiseParams().with_(alpha=0.4).alpha == 0.4


def test_x0_initialisation(rng):
    f = rng.standard_normal((3, 3, 1))
    p = DenoiseParams(alpha=0.0, iterations=1)
    out = cyclic_ppa(Euclidean(1), f, p, x0=np.zeros_like(f)).output
    np.testing.assert_allclose(out, 0.75 * f)

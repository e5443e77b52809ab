"""Cyclic and parallel proximal point solvers for l^p-TV^q on manifolds.

Images are arrays of shape ``(n, m) + point_shape``. One-dimensional signals
of shape ``(n,) + point_shape`` are handled as ``n x 1`` images, so only the
vertical couplings are active.
"""

import logging
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field, replace

import numpy as np

from .averaging import approx_mean5, karcher_mean_batch
from .exceptions import CutLocusError
from .prox import (
    DATA_TERMS,
    DEFAULT_OMEGA,
    DEFAULT_TAU,
    REGULARIZERS,
    calc_t_data,
    calc_t_reg,
    huber,
)

logger = logging.getLogger(__name__)

ALGORITHMS = ("cyclic", "parallel", "parallel-fast")
# Pixels per work unit in the parallel solver. Fixed so that the result never
# depends on how many workers process the chunks.
CHUNK_SIZE = 1024
THREADS_ENV = "MANIFOLD_TV_THREADS"


@dataclass(frozen=True)
class LambdaSchedule:
    """Proximal step sizes ``lambda_r = c * r**(-omega)``.

    For ``0.5 < omega <= 1`` the sequence is square-summable but not summable.
    """

    c: float = 3.0
    omega: float = 0.95

    def __post_init__(self):
        if self.c < 0:
            raise ValueError("schedule constant c must be nonnegative")
        if not 0.5 < self.omega <= 1.0:
            raise ValueError("schedule exponent omega must lie in (0.5, 1]")

    def __call__(self, r):
        return lambda_at(self, r)


def lambda_at(schedule, r):
    if r < 1:
        raise ValueError("iteration index starts at 1")
    return schedule.c * float(r) ** (-schedule.omega)


@dataclass(frozen=True)
class DenoiseParams:
    data_term: str = "l2"
    regularizer: str = "tv"
    alpha: float = 0.1
    schedule: LambdaSchedule = field(default_factory=LambdaSchedule)
    iterations: int = 100
    algorithm: str = "cyclic"
    tau: float = DEFAULT_TAU
    huber_omega: float = DEFAULT_OMEGA
    mean_tol: float = 1e-10
    mean_max_iter: int = 100

    def __post_init__(self):
        if self.data_term not in DATA_TERMS:
            raise ValueError(f"data_term must be one of {DATA_TERMS}")
        if self.regularizer not in REGULARIZERS:
            raise ValueError(f"regularizer must be one of {REGULARIZERS}")
        if self.algorithm not in ALGORITHMS:
            raise ValueError(f"algorithm must be one of {ALGORITHMS}")
        if not self.alpha >= 0:
            raise ValueError("alpha must be nonnegative")
        if int(self.iterations) < 1:
            raise ValueError("iterations must be at least 1")
        if not (self.tau > 0 and self.huber_omega > 0):
            raise ValueError("Huber parameters must be positive")

    def with_(self, **kw):
        return replace(self, **kw)


@dataclass
class SolveReport:
    output: np.ndarray
    functional_trace: list
    iterations_run: int
    mean_fallbacks: int = 0

    @property
    def trace_values(self):
        return [v for _, v in self.functional_trace]


def as_grid(manifold, img):
    """Return ``(grid, was_1d)`` with ``grid`` of shape ``(n, m) + point_shape``."""
    img = np.asarray(img, dtype=float)
    batch = manifold.batch_shape(img)
    if len(batch) == 1:
        return img.reshape((batch[0], 1) + tuple(manifold.point_shape)), True
    if len(batch) == 2:
        return img, False
    raise ValueError(f"expected a 1D or 2D image, got batch shape {batch}")


def _ungrid(manifold, grid, was_1d):
    return grid.reshape((grid.shape[0],) + tuple(manifold.point_shape)) if was_1d else grid


def _penalty(d, kind, tau, omega):
    if kind in ("l1", "tv"):
        return d
    if kind in ("l2", "tv2"):
        return 0.5 * d**2
    return huber(d, tau, omega)


def functional_value(manifold, x, f, params):
    """Value of the data term plus alpha times the anisotropic coupling terms."""
    x, _ = as_grid(manifold, x)
    f, _ = as_grid(manifold, f)
    if x.shape != f.shape:
        raise ValueError("x and f must have the same shape")
    p = params
    val = np.sum(_penalty(manifold.dist(x, f), p.data_term, p.tau, p.huber_omega))
    if p.alpha:
        reg = 0.0
        if x.shape[1] > 1:
            reg += np.sum(_penalty(manifold.dist(x[:, :-1], x[:, 1:]), p.regularizer,
                                   p.tau, p.huber_omega))
        if x.shape[0] > 1:
            reg += np.sum(_penalty(manifold.dist(x[:-1], x[1:]), p.regularizer,
                                   p.tau, p.huber_omega))
        val += p.alpha * reg
    return float(val)


def _record_every(iterations):
    return max(1, iterations // 100)


def _data_step(manifold, x, f, lam, p):
    t = calc_t_data(lam, manifold.dist(x, f), p.data_term, p.tau, p.huber_omega)
    return manifold.geodesic(x, f, t)


def cyclic_ppa(manifold, f, params, x0=None):
    """Cyclic proximal point algorithm.

    Each iteration applies the data prox to every pixel, then contracts
    horizontal pairs ``(j, j+1)`` for ascending ``j``, then vertical pairs
    ``(i, i+1)`` for ascending ``i``, each update seeing the previous ones.
    Rows (resp. columns) are independent within a sweep and are vectorised.
    """
    p = params
    f, was_1d = as_grid(manifold, f)
    x = f.copy() if x0 is None else as_grid(manifold, x0)[0].copy()
    if x.shape != f.shape:
        raise ValueError("x0 and f must have the same shape")
    n, m = f.shape[:2]
    every = _record_every(p.iterations)
    trace = []
    for r in range(1, p.iterations + 1):
        lam = lambda_at(p.schedule, r)
        lam_reg = lam * p.alpha
        try:
            x = _data_step(manifold, x, f, lam, p)
        except CutLocusError as err:
            raise err.locate(tuple(err.index[:2]), "data") from err
        if lam_reg > 0:
            for j in range(m - 1):
                try:
                    x[:, j], x[:, j + 1] = _contract(manifold, x[:, j], x[:, j + 1], lam_reg, p)
                except CutLocusError as err:
                    raise err.locate((err.index[0], j), "horizontal") from err
            for i in range(n - 1):
                try:
                    x[i], x[i + 1] = _contract(manifold, x[i], x[i + 1], lam_reg, p)
                except CutLocusError as err:
                    raise err.locate((i, err.index[0]), "vertical") from err
        if r % every == 0 or r == p.iterations:
            trace.append((r, functional_value(manifold, x, f, p)))
    return SolveReport(_ungrid(manifold, x, was_1d), trace, p.iterations)


def _contract(manifold, a, b, lam, p):
    t = calc_t_reg(lam, manifold.dist(a, b), p.regularizer, p.tau, p.huber_omega)
    return manifold.geodesic(a, b, t), manifold.geodesic(b, a, t)


def _toward(manifold, xs, nb, lam, p):
    t = calc_t_reg(lam, manifold.dist(xs, nb), p.regularizer, p.tau, p.huber_omega)
    return manifold.geodesic(xs, nb, t)


def _parallel_chunk(manifold, x, f, ii, jj, lam, p, fast, transpose):
    """New values of pixels ``(ii, jj)`` from the previous iterate ``x``."""
    n, m = x.shape[:2]
    xs = x[ii, jj]
    lam_reg = lam * p.alpha
    # Missing neighbours are clamped to the pixel itself: distance 0, so the
    # corresponding prox is the identity.
    right = x[ii, np.minimum(jj + 1, m - 1)]
    left = x[ii, np.maximum(jj - 1, 0)]
    down = x[np.minimum(ii + 1, n - 1), jj]
    up = x[np.maximum(ii - 1, 0), jj]
    z1 = _data_step(manifold, xs, f[ii, jj], lam, p)
    zs = [_toward(manifold, xs, nb, lam_reg, p) for nb in (right, left, down, up)]
    if transpose:
        zs = zs[2:] + zs[:2]
    z = [z1] + zs
    if fast:
        return approx_mean5(manifold, *z), 0
    mean, converged, _ = karcher_mean_batch(manifold, np.stack(z), p.mean_tol, p.mean_max_iter)
    bad = ~converged
    n_bad = int(bad.sum())
    if n_bad:
        mean[bad] = approx_mean5(manifold, *(zk[bad] for zk in z))
    return mean, n_bad


def resolve_threads(n_jobs=None):
    """Worker count from the argument, else ``MANIFOLD_TV_THREADS``, else 1."""
    if n_jobs is None:
        env = os.environ.get(THREADS_ENV, "").strip()
        n_jobs = int(env) if env else 1
    n_jobs = int(n_jobs)
    if n_jobs < 1:
        raise ValueError("thread count must be at least 1")
    return n_jobs


def parallel_ppa(manifold, f, params, x0=None, n_jobs=None, swap_axes=False):
    """Parallel proximal point algorithm (exact or fast mean).

    Every pixel forms five candidates from the previous iterate: the data prox
    and one geodesic step toward each of its four neighbours. The new value is
    their Karcher mean (``algorithm="parallel"``) or the five-point geodesic
    approximation (``"parallel-fast"``). Pixels are processed in fixed-size
    chunks across ``n_jobs`` threads; the result does not depend on ``n_jobs``.

    ``swap_axes`` lists the vertical candidates before the horizontal ones
    (only relevant for the order-sensitive fast mean).
    """
    p = params
    fast = p.algorithm == "parallel-fast"
    f, was_1d = as_grid(manifold, f)
    x = f.copy() if x0 is None else as_grid(manifold, x0)[0].copy()
    if x.shape != f.shape:
        raise ValueError("x0 and f must have the same shape")
    n, m = f.shape[:2]
    flat = np.arange(n * m)
    chunks = [flat[k : k + CHUNK_SIZE] for k in range(0, n * m, CHUNK_SIZE)]
    threads = resolve_threads(n_jobs)
    every = _record_every(p.iterations)
    trace = []
    fallbacks = 0
    pool = ThreadPoolExecutor(max_workers=threads) if threads > 1 and len(chunks) > 1 else None
    try:
        for r in range(1, p.iterations + 1):
            lam = lambda_at(p.schedule, r)

            def work(idx, x=x, lam=lam):
                ii, jj = np.divmod(idx, m)
                try:
                    return _parallel_chunk(manifold, x, f, ii, jj, lam, p, fast, swap_axes)
                except CutLocusError as err:
                    k = int(idx[err.index[0]]) if err.index else int(idx[0])
                    raise err.locate(divmod(k, m), "parallel") from err

            results = list(pool.map(work, chunks)) if pool else [work(c) for c in chunks]
            new = np.empty_like(x)
            new_flat = new.reshape((n * m,) + x.shape[2:])
            for idx, (vals, nb) in zip(chunks, results):
                new_flat[idx] = vals
                fallbacks += nb
            x = new
            if r % every == 0 or r == p.iterations:
                trace.append((r, functional_value(manifold, x, f, p)))
    finally:
        if pool is not None:
            pool.shutdown()
    if fallbacks:
        logger.warning("Karcher mean fell back to approx_mean5 for %d pixel updates", fallbacks)
    return SolveReport(_ungrid(manifold, x, was_1d), trace, p.iterations, fallbacks)


def denoise(manifold, f, params, x0=None, n_jobs=None):
    """Run the solver selected by ``params.algorithm``."""
    if params.algorithm == "cyclic":
        return cyclic_ppa(manifold, f, params, x0=x0)
    return parallel_ppa(manifold, f, params, x0=x0, n_jobs=n_jobs)

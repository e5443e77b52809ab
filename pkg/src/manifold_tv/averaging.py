"""Intrinsic (Karcher) mean and the fast five-point geodesic approximation."""

from dataclasses import dataclass

import numpy as np

from .exceptions import NonConvergedError


@dataclass(frozen=True)
class MeanConfig:
    """Stopping rule for the Karcher-mean gradient descent."""

    tol: float = 1e-10
    max_iter: int = 100

    def __post_init__(self):
        if not self.tol > 0:
            raise ValueError("tol must be positive")
        if int(self.max_iter) < 1:
            raise ValueError("max_iter must be at least 1")


def karcher_mean_batch(manifold, points, tol=1e-10, max_iter=100):
    """Batched Karcher mean of ``points`` stacked along axis 0.

    ``points`` has shape ``(N,) + batch + point_shape``. Each batch entry is
    iterated independently and frozen once its mean tangent update has norm
    ``<= tol``, so the result for one entry never depends on its batch mates.

    Returns
    -------
    mean : ndarray, shape ``batch + point_shape``
    converged : bool ndarray, shape ``batch``
    residual : float ndarray, shape ``batch``
    """
    points = np.asarray(points, dtype=float)
    N = points.shape[0]
    x = points[0].copy()
    batch = manifold.batch_shape(x)
    residual = np.full(batch, np.inf)
    active = np.ones(batch, dtype=bool)
    for _ in range(max_iter):
        pa = points[:, active]
        xa = x[active]
        step = manifold.log(xa, pa[0])
        for k in range(1, N):
            step = step + manifold.log(xa, pa[k])
        step = step / N
        res = np.asarray(manifold.norm(xa, step))
        residual[active] = res
        done = res <= tol
        move = ~done
        if move.any():
            upd = x[active]
            upd[move] = manifold.exp(xa[move], step[move])
            x[active] = upd
        idx = np.argwhere(active)
        active[tuple(idx[done].T)] = False
        if not active.any():
            break
    return x, ~active, residual


def karcher_mean(manifold, points, tol=1e-10, max_iter=100):
    """Intrinsic mean of a list of points by Riemannian gradient descent.

    Starts at ``points[0]`` and iterates ``x <- exp_x(mean_i log_x(p_i))``
    until the update norm drops to ``tol``.

    Raises
    ------
    NonConvergedError
        If ``max_iter`` is reached first; carries the final residual.
    """
    points = np.asarray(points, dtype=float)
    if points.shape[0] < 1:
        raise ValueError("karcher_mean needs at least one point")
    single = manifold.batch_shape(points[0]) == ()
    if single:
        points = points[:, None]
    x, converged, residual = karcher_mean_batch(manifold, points, tol, max_iter)
    if single:
        x, converged, residual = x[0], converged[0], residual[0]
    if not np.all(converged):
        bad = np.argwhere(~np.asarray(converged))
        idx = tuple(int(i) for i in bad[0]) if bad.size else ()
        raise NonConvergedError(
            f"Karcher mean did not reach tol={tol} in {max_iter} iterations",
            residual=float(np.max(residual)),
            index=idx,
        )
    return x


def approx_mean5(manifold, z1, z2, z3, z4, z5):
    """Five-point mean surrogate built from four geodesic interpolations.

    Mirrors ``(((z1 + z2)/2 + (z3 + z4)/2)/2) * 0.8 + 0.2 * z5``, replacing
    each convex combination with a point on the connecting geodesic.
    """
    def step(a, b, s):
        return manifold.geodesic(a, b, s * manifold.dist(a, b))

    a = step(z1, z2, 0.5)
    b = step(z3, z4, 0.5)
    c = step(a, b, 0.5)
    return step(c, z5, 0.2)

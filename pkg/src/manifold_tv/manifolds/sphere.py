import numpy as np

from .base import Manifold

# <a, b> at or below -1 + CUT_TOL counts as antipodal.
CUT_TOL = 1e-12
UNIT_TOL = 1e-12


def _dot(a, b):
    return np.sum(a * b, axis=-1)


def tangent_basis(x):
    """Deterministic orthonormal basis (e1, e2) of the plane orthogonal to ``x``.

    Uses the coordinate axis least aligned with ``x`` as the seed, so the
    construction is continuous away from ties and never degenerate.
    """
    x = np.asarray(x, dtype=float)
    seed = np.zeros_like(x)
    k = np.argmin(np.abs(x), axis=-1)
    np.put_along_axis(seed, k[..., None], 1.0, axis=-1)
    e1 = seed - _dot(seed, x)[..., None] * x
    e1 /= np.linalg.norm(e1, axis=-1, keepdims=True)
    e2 = np.cross(x, e1)
    return e1, e2


class S2(Manifold):
    """The unit sphere in R^3, points stored as unit 3-vectors."""

    tag = "s2"
    point_shape = (3,)
    dim = 2

    def exp(self, x, v):
        x = np.asarray(x, dtype=float)
        v = np.asarray(v, dtype=float)
        nv = np.linalg.norm(v, axis=-1, keepdims=True)
        # sin(|v|)/|v| -> 1 as |v| -> 0
        sinc = np.sinc(nv / np.pi)
        y = np.cos(nv) * x + sinc * v
        return y / np.linalg.norm(y, axis=-1, keepdims=True)

    def log(self, x, y):
        self._check_same(x, y)
        x = np.asarray(x, dtype=float)
        y = np.asarray(y, dtype=float)
        c = _dot(x, y)
        cut = c <= -1 + CUT_TOL
        if np.any(cut):
            self._raise_cut(cut, x, y)
        u = y - c[..., None] * x
        nu = np.linalg.norm(u, axis=-1)
        theta = np.arctan2(np.linalg.norm(np.cross(x, y), axis=-1), c)
        scale = np.divide(theta, nu, out=np.zeros_like(nu), where=nu > 0)
        return scale[..., None] * u

    def norm(self, x, v):
        return np.linalg.norm(np.asarray(v, dtype=float), axis=-1)

    def dist(self, x, y):
        self._check_same(x, y)
        x = np.asarray(x, dtype=float)
        y = np.asarray(y, dtype=float)
        return np.arctan2(np.linalg.norm(np.cross(x, y), axis=-1), _dot(x, y))

    def check_points(self, x):
        x = np.asarray(x, dtype=float)
        n = np.linalg.norm(x, axis=-1)
        return ~np.isfinite(n) | (np.abs(n - 1) > UNIT_TOL)

    def canonical(self, x):
        x = np.asarray(x, dtype=float)
        return x / np.linalg.norm(x, axis=-1, keepdims=True)

    def project_tangent(self, x, v):
        return v - _dot(v, x)[..., None] * x

    def tangent_from_coords(self, x, c):
        e1, e2 = tangent_basis(x)
        c = np.asarray(c, dtype=float)
        return c[..., 0:1] * e1 + c[..., 1:2] * e2

    def random_point(self, rng, size=()):
        size = (size,) if np.isscalar(size) else tuple(size)
        return self.canonical(rng.standard_normal(size + (3,)))

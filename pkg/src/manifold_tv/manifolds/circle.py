import numpy as np

from .base import Manifold

# |wrap(b - a)| within this of pi counts as antipodal.
CUT_TOL = 1.5e-6


def wrap(a):
    """Map angles to the half-open interval (-pi, pi]."""
    return np.pi - np.mod(np.pi - np.asarray(a, dtype=float), 2 * np.pi)


class S1(Manifold):
    """The unit circle, points stored as angles in (-pi, pi]."""

    tag = "s1"
    point_shape = ()
    dim = 1

    def exp(self, x, v):
        return wrap(np.asarray(x, dtype=float) + v)

    def log(self, x, y):
        self._check_same(x, y)
        v = wrap(np.asarray(y, dtype=float) - x)
        cut = np.abs(np.abs(v) - np.pi) < CUT_TOL
        if np.any(cut):
            self._raise_cut(cut, x, y)
        return v

    def norm(self, x, v):
        return np.abs(np.asarray(v, dtype=float))

    def dist(self, x, y):
        self._check_same(x, y)
        return np.abs(wrap(np.asarray(y, dtype=float) - x))

    def check_points(self, x):
        x = np.asarray(x, dtype=float)
        return ~np.isfinite(x) | (x <= -np.pi) | (x > np.pi)

    def canonical(self, x):
        return wrap(x)

    def tangent_from_coords(self, x, c):
        return np.asarray(c, dtype=float)[..., 0]

    def random_point(self, rng, size=()):
        return wrap(rng.uniform(-np.pi, np.pi, size=size))

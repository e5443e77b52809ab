import numpy as np

from .base import Manifold


class Euclidean(Manifold):
    """R^k with the standard inner product. Mostly useful as an oracle."""

    dim = None

    def __init__(self, k=1):
        k = int(k)
        if k < 1:
            raise ValueError("Euclidean dimension must be positive")
        self.k = k
        self.dim = k
        self.point_shape = (k,)
        self.tag = f"euclidean:{k}"

    def __repr__(self):
        return f"Euclidean({self.k})"

    def exp(self, x, v):
        return np.asarray(x, dtype=float) + v

    def log(self, x, y):
        self._check_same(x, y)
        return np.asarray(y, dtype=float) - x

    def norm(self, x, v):
        return np.linalg.norm(np.asarray(v, dtype=float), axis=-1)

    def dist(self, x, y):
        self._check_same(x, y)
        return np.linalg.norm(np.asarray(y, dtype=float) - x, axis=-1)

    def check_points(self, x):
        return ~np.all(np.isfinite(np.asarray(x, dtype=float)), axis=-1)

    def tangent_from_coords(self, x, c):
        return np.asarray(c, dtype=float)

    def random_point(self, rng, size=()):
        size = (size,) if np.isscalar(size) else tuple(size)
        return rng.standard_normal(size + (self.k,))

import numpy as np

from ..exceptions import CutLocusError
from .base import Manifold
from .circle import S1
from .euclidean import Euclidean


class Product(Manifold):
    """Cartesian product of manifolds with the product metric.

    Points are flat vectors: each component's ambient coordinates, flattened
    and concatenated in order. ``dist`` is the root of the summed squared
    component distances.
    """

    def __init__(self, components, tag=None):
        components = list(components)
        if not components:
            raise ValueError("a product needs at least one component")
        self.components = components
        self._sizes = [c.element_len for c in components]
        self._offsets = np.cumsum([0] + self._sizes)
        self.point_shape = (int(self._offsets[-1]),)
        self.dim = sum(c.dim for c in components)
        self.tag = tag or "product(" + ",".join(c.tag for c in components) + ")"

    def __repr__(self):
        return f"Product({self.components!r})"

    def split(self, x):
        """Component views of flat product coordinates."""
        x = np.asarray(x, dtype=float)
        batch = x.shape[:-1]
        return [
            x[..., lo:hi].reshape(batch + tuple(c.point_shape))
            for c, lo, hi in zip(self.components, self._offsets[:-1], self._offsets[1:])
        ]

    def join(self, parts):
        parts = [np.asarray(p, dtype=float) for p in parts]
        batch = parts[0].shape[: parts[0].ndim - self.components[0].point_ndim]
        return np.concatenate([p.reshape(batch + (-1,)) for p in parts], axis=-1)

    def _map(self, name, x, y):
        out = []
        for c, a, b in zip(self.components, self.split(x), self.split(y)):
            try:
                out.append(getattr(c, name)(a, b))
            except CutLocusError as err:
                raise CutLocusError(
                    f"{self!r}: component {c!r}: {err}", index=err.index,
                    pair=(np.asarray(x)[err.index], np.asarray(y)[err.index]),
                ) from err
        return out

    def exp(self, x, v):
        return self.join(self._map("exp", x, v))

    def log(self, x, y):
        self._check_same(x, y)
        return self.join(self._map("log", x, y))

    def norm(self, x, v):
        parts = self._map("norm", x, v)
        return np.sqrt(sum(np.asarray(p) ** 2 for p in parts))

    def dist(self, x, y):
        self._check_same(x, y)
        return np.sqrt(sum(np.asarray(p) ** 2 for p in self._map("dist", x, y)))

    def check_points(self, x):
        bad = None
        for c, a in zip(self.components, self.split(x)):
            m = np.asarray(c.check_points(a))
            bad = m if bad is None else bad | m
        return bad

    def canonical(self, x):
        return self.join([c.canonical(a) for c, a in zip(self.components, self.split(x))])

    def tangent_from_coords(self, x, c):
        c = np.asarray(c, dtype=float)
        parts, lo = [], 0
        for comp, a in zip(self.components, self.split(x)):
            parts.append(comp.tangent_from_coords(a, c[..., lo : lo + comp.dim]))
            lo += comp.dim
        return self.join(parts)

    def random_point(self, rng, size=()):
        return self.join([c.random_point(rng, size) for c in self.components])


class LChManifold(Product):
    """The LCh color cylinder R^2 x S^1, coordinates ordered (L, C, h)."""

    def __init__(self):
        super().__init__([Euclidean(2), S1()], tag="lch")

    def __repr__(self):
        return "LCh()"

    def check_points(self, x):
        x = np.asarray(x, dtype=float)
        bad = super().check_points(x)
        # luminance and chroma are nonnegative (tiny slack for rounding)
        return bad | (x[..., 0] < -1e-12) | (x[..., 1] < -1e-12)

    def random_point(self, rng, size=()):
        size = (size,) if np.isscalar(size) else tuple(size)
        # kept off the L = 0 and C = 0 boundaries
        L = rng.uniform(1, 99, size)
        C = rng.uniform(1, 100, size)
        h = rng.uniform(-np.pi, np.pi, size)
        return np.stack([L, C, S1().canonical(h)], axis=-1)


def LCh():
    return LChManifold()

"""Common interface for the closed-form manifolds.

Every manifold works on batched numpy arrays. A batch of points has shape
``batch_shape + point_shape``; tangent vectors use the same layout as the
point they are attached to. All operations are pure and return fresh arrays.
"""

import math

import numpy as np

from ..exceptions import CutLocusError, InvariantError

# Arc lengths may exceed the computed distance by this much (rounding in
# calc_t versus norm(log)); anything beyond is a caller error.
_T_SLACK_ABS = 1e-9
_T_SLACK_REL = 1e-9


class Manifold:
    """Riemannian manifold with closed-form exponential and logarithm.

    Subclasses implement :meth:`exp`, :meth:`log`, :meth:`norm`, :meth:`dist`,
    :meth:`check_points` and :meth:`tangent_from_coords`. Geodesics, batching
    and cut-locus bookkeeping are shared.

    Attributes
    ----------
    tag : str
        Short identifier used by the MVF container (``"s2"``, ``"pos3"``...).
    point_shape : tuple of int
        Ambient shape of one point.
    dim : int
        Intrinsic dimension (number of tangent coordinates).
    """

    tag = None
    point_shape = ()
    dim = 0

    @property
    def element_len(self):
        return int(math.prod(self.point_shape))

    @property
    def point_ndim(self):
        return len(self.point_shape)

    def __repr__(self):
        return f"{type(self).__name__}()"

    def __eq__(self, other):
        return type(self) is type(other) and self.tag == other.tag

    def __hash__(self):
        return hash((type(self).__name__, self.tag))

    # -- batching helpers -------------------------------------------------

    def batch_shape(self, x):
        x = np.asarray(x)
        nd = x.ndim - self.point_ndim
        if nd < 0 or x.shape[nd:] != tuple(self.point_shape):
            raise ValueError(
                f"{self!r}: expected trailing shape {self.point_shape}, got {x.shape}"
            )
        return x.shape[:nd]

    def _expand(self, s):
        """Append singleton axes so a batch scalar broadcasts over point axes."""
        s = np.asarray(s)
        return s.reshape(s.shape + (1,) * self.point_ndim)

    def _check_same(self, x, y):
        bx, by = self.batch_shape(x), self.batch_shape(y)
        if bx != by:
            raise ValueError(f"batch shapes differ: {bx} vs {by}")
        return bx

    def _raise_cut(self, mask, x, y, what="antipodal pair"):
        idx = tuple(int(i) for i in np.argwhere(mask)[0])
        a, b = np.asarray(x)[idx], np.asarray(y)[idx]
        raise CutLocusError(
            f"{self!r}: log undefined for {what} at batch index {idx}",
            index=idx,
            pair=(a.copy(), b.copy()),
        )

    # -- the interface ----------------------------------------------------

    def exp(self, x, v):
        raise NotImplementedError

    def log(self, x, y):
        raise NotImplementedError

    def norm(self, x, v):
        raise NotImplementedError

    def dist(self, x, y):
        raise NotImplementedError

    def check_points(self, x):
        """Return a boolean batch mask of points violating the invariants."""
        raise NotImplementedError

    def canonical(self, x):
        """Return ``x`` in canonical representation (wrapping, symmetrising...)."""
        return np.array(x, dtype=float)

    def tangent_from_coords(self, x, c):
        """Map coordinates ``c`` (shape ``batch + (dim,)``) in an orthonormal
        tangent basis at ``x`` to ambient tangent vectors."""
        raise NotImplementedError

    def random_point(self, rng, size=()):
        raise NotImplementedError

    def zero_tangent(self, x):
        return np.zeros_like(np.asarray(x, dtype=float))

    # -- shared operations ------------------------------------------------

    def validate(self, x):
        """Raise :class:`InvariantError` naming the first invalid point."""
        x = np.asarray(x, dtype=float)
        self.batch_shape(x)
        bad = np.asarray(self.check_points(x))
        if bad.any():
            idx = tuple(int(i) for i in np.argwhere(bad)[0]) if bad.ndim else ()
            raise InvariantError(f"{self!r}: invalid point at index {idx}", index=idx)

    def geodesic(self, x, y, t):
        """Point at arc length ``t`` on the unit-speed geodesic from ``x`` to ``y``.

        ``t`` broadcasts over the batch. Entries with ``t == 0`` are returned
        bit-identical to ``x`` and never touch the logarithm, so a cut-locus
        pair only raises when it actually has to be traversed. The same holds
        where ``x`` and ``y`` are identical, whatever rounding ``dist`` shows.
        """
        x = np.asarray(x, dtype=float)
        y = np.asarray(y, dtype=float)
        batch = self._check_same(x, y)
        t = np.broadcast_to(np.asarray(t, dtype=float), batch)
        if np.any(t < 0):
            raise ValueError("geodesic arc length must be nonnegative")
        out = x.copy()
        same = np.all(x == y, axis=tuple(range(len(batch), x.ndim)))
        active = (t > 0) & ~same
        if not active.any():
            return out
        if active.all():
            return self._geodesic(x, y, t)
        try:
            out[active] = self._geodesic(x[active], y[active], t[active])
        except CutLocusError as err:
            # index refers to the compressed active subset; map back
            if err.index is not None and len(err.index) >= 1:
                err.index = tuple(int(i) for i in np.argwhere(active)[err.index[0]])
            raise
        return out

    def _geodesic(self, x, y, t):
        v = self.log(x, y)
        d = np.asarray(self.norm(x, v))
        if np.any(t > d * (1 + _T_SLACK_REL) + _T_SLACK_ABS):
            raise ValueError("geodesic arc length exceeds the distance between the points")
        scale = np.divide(np.minimum(t, d), d, out=np.zeros_like(d), where=d > 0)
        return self.exp(x, v * self._expand(scale))

    def geodesic_fraction(self, x, y, s):
        """Convenience: the point a fraction ``s`` of the way from ``x`` to ``y``."""
        return self.geodesic(x, y, np.asarray(s) * self.dist(x, y))

import numpy as np

from .base import Manifold

# Rotation angles of the relative rotation within CUT_TOL of pi count as cut locus.
CUT_TOL = 1e-6
ORTHO_TOL = 1e-10


def skew(w):
    """3-vector(s) to skew-symmetric matrices, ``skew(w) @ u == cross(w, u)``."""
    w = np.asarray(w, dtype=float)
    z = np.zeros(w.shape[:-1])
    return np.stack(
        [
            np.stack([z, -w[..., 2], w[..., 1]], axis=-1),
            np.stack([w[..., 2], z, -w[..., 0]], axis=-1),
            np.stack([-w[..., 1], w[..., 0], z], axis=-1),
        ],
        axis=-2,
    )


def unskew(m):
    m = np.asarray(m, dtype=float)
    return 0.5 * np.stack(
        [m[..., 2, 1] - m[..., 1, 2], m[..., 0, 2] - m[..., 2, 0], m[..., 1, 0] - m[..., 0, 1]],
        axis=-1,
    )


def rodrigues(W):
    """Matrix exponential of skew-symmetric ``W``.

    Uses the rotation angle ``theta = |W|_F / sqrt(2)``; ``np.sinc`` keeps both
    coefficients finite at ``theta = 0``.
    """
    W = np.asarray(W, dtype=float)
    theta = np.linalg.norm(unskew(W), axis=-1)[..., None, None]
    a = np.sinc(theta / np.pi)
    b = 0.5 * np.sinc(theta / (2 * np.pi)) ** 2
    return np.eye(3) + a * W + b * (W @ W)


def rotation_angle(R):
    """Rotation angle in [0, pi] computed with atan2 for accuracy near 0."""
    R = np.asarray(R, dtype=float)
    c = 0.5 * (np.trace(R, axis1=-2, axis2=-1) - 1.0)
    s = np.linalg.norm(unskew(R), axis=-1)
    return np.arctan2(s, c)


def principal_log(R):
    """Principal logarithm ``theta / (2 sin theta) * (R - R^T)`` of rotations."""
    R = np.asarray(R, dtype=float)
    theta = rotation_angle(R)
    # theta / sin(theta) == 1 / sinc(theta / pi)
    k = 0.5 / np.sinc(theta / np.pi)
    L = k[..., None, None] * (R - np.swapaxes(R, -1, -2))
    return 0.5 * (L - np.swapaxes(L, -1, -2))


def orthonormalize(M):
    """Nearest rotation (polar factor) to each 3x3 matrix."""
    U, _, Vt = np.linalg.svd(M)
    Q = U @ Vt
    flip = np.linalg.det(Q) < 0
    if np.any(flip):
        U = U.copy()
        U[flip, :, -1] *= -1
        Q = U @ Vt
    return Q


class SO3(Manifold):
    """Rotation group, points stored as 3x3 rotation matrices.

    Tangent vectors are left-trivialised: a skew matrix ``W`` at ``P`` moves
    to ``exp(W) P``. The metric is the Frobenius norm of ``W``.
    """

    tag = "so3"
    point_shape = (3, 3)
    dim = 3

    def exp(self, x, v):
        return orthonormalize(rodrigues(v) @ np.asarray(x, dtype=float))

    def log(self, x, y):
        self._check_same(x, y)
        x = np.asarray(x, dtype=float)
        y = np.asarray(y, dtype=float)
        R = y @ np.swapaxes(x, -1, -2)
        cut = np.abs(rotation_angle(R) - np.pi) < CUT_TOL
        if np.any(cut):
            self._raise_cut(cut, x, y, what="rotation by pi")
        return principal_log(R)

    def norm(self, x, v):
        return np.linalg.norm(np.asarray(v, dtype=float), axis=(-2, -1))

    def dist(self, x, y):
        self._check_same(x, y)
        R = np.asarray(y, dtype=float) @ np.swapaxes(np.asarray(x, dtype=float), -1, -2)
        return np.sqrt(2.0) * rotation_angle(R)

    def check_points(self, x):
        x = np.asarray(x, dtype=float)
        gram = np.swapaxes(x, -1, -2) @ x
        orth = np.max(np.abs(gram - np.eye(3)), axis=(-2, -1))
        det = np.linalg.det(x)
        bad = ~(orth <= ORTHO_TOL) | ~(np.abs(det - 1) <= ORTHO_TOL)
        return bad

    def canonical(self, x):
        return orthonormalize(np.asarray(x, dtype=float))

    def tangent_from_coords(self, x, c):
        # skew(e_k) / sqrt(2) is Frobenius-orthonormal
        return skew(np.asarray(c, dtype=float)) / np.sqrt(2.0)

    def random_point(self, rng, size=()):
        size = (size,) if np.isscalar(size) else tuple(size)
        q = rng.standard_normal(size + (4,))
        q /= np.linalg.norm(q, axis=-1, keepdims=True)
        w, x, y, z = np.moveaxis(q, -1, 0)
        R = np.stack(
            [
                np.stack([1 - 2 * (y * y + z * z), 2 * (x * y - z * w), 2 * (x * z + y * w)], -1),
                np.stack([2 * (x * y + z * w), 1 - 2 * (x * x + z * z), 2 * (y * z - x * w)], -1),
                np.stack([2 * (x * z - y * w), 2 * (y * z + x * w), 1 - 2 * (x * x + y * y)], -1),
            ],
            axis=-2,
        )
        return orthonormalize(R)

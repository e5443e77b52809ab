import numpy as np

from ..exceptions import DomainError
from .base import Manifold, _T_SLACK_ABS, _T_SLACK_REL

MIN_EIG = 1e-14
SYM_TOL = 1e-10

_SQRT_HALF = np.sqrt(0.5)
# Frobenius-orthonormal basis of the symmetric 3x3 matrices.
_SYM_BASIS = np.zeros((6, 3, 3))
for _k, (_i, _j) in enumerate([(0, 0), (1, 1), (2, 2), (0, 1), (0, 2), (1, 2)]):
    if _i == _j:
        _SYM_BASIS[_k, _i, _i] = 1.0
    else:
        _SYM_BASIS[_k, _i, _j] = _SYM_BASIS[_k, _j, _i] = _SQRT_HALF


def sym(A):
    return 0.5 * (A + np.swapaxes(A, -1, -2))


def _eigh_spd(A):
    w, U = np.linalg.eigh(sym(A))
    if np.any(~(w > MIN_EIG)):
        raise DomainError("matrix is not symmetric positive definite")
    return w, U


def _recompose(w, U):
    return sym((U * w[..., None, :]) @ np.swapaxes(U, -1, -2))


def sqrtm_pair(D):
    """``(D^{1/2}, D^{-1/2})`` via one eigendecomposition."""
    w, U = _eigh_spd(D)
    r = np.sqrt(w)
    return _recompose(r, U), _recompose(1.0 / r, U)


def expm_sym(A):
    w, U = np.linalg.eigh(sym(A))
    return _recompose(np.exp(w), U)


def logm_spd(A):
    w, U = _eigh_spd(A)
    return _recompose(np.log(w), U)


class Pos3(Manifold):
    """Symmetric positive definite 3x3 matrices with the affine-invariant metric
    ``g_D(W, V) = trace(D^{-1/2} W D^{-1} V D^{-1/2})``."""

    tag = "pos3"
    point_shape = (3, 3)
    dim = 6

    def exp(self, x, v):
        s, si = sqrtm_pair(x)
        return sym(s @ expm_sym(si @ v @ si) @ s)

    def log(self, x, y):
        self._check_same(x, y)
        s, si = sqrtm_pair(x)
        return sym(s @ logm_spd(si @ np.asarray(y, dtype=float) @ si) @ s)

    def norm(self, x, v):
        _, si = sqrtm_pair(x)
        return np.linalg.norm(si @ np.asarray(v, dtype=float) @ si, axis=(-2, -1))

    def dist(self, x, y):
        self._check_same(x, y)
        _, si = sqrtm_pair(x)
        kappa = np.linalg.eigvalsh(sym(si @ np.asarray(y, dtype=float) @ si))
        if np.any(~(kappa > MIN_EIG)):
            raise DomainError("matrix is not symmetric positive definite")
        return np.sqrt(np.sum(np.log(kappa) ** 2, axis=-1))

    def _geodesic(self, x, y, t):
        # D^{1/2} (D^{-1/2} E D^{-1/2})^{t/d} D^{1/2}, two eigendecompositions.
        s, si = sqrtm_pair(x)
        kappa, U = _eigh_spd(si @ y @ si)
        logk = np.log(kappa)
        d = np.sqrt(np.sum(logk**2, axis=-1))
        if np.any(t > d * (1 + _T_SLACK_REL) + _T_SLACK_ABS):
            raise ValueError("geodesic arc length exceeds the distance between the points")
        r = np.divide(np.minimum(t, d), d, out=np.zeros_like(d), where=d > 0)
        return sym(s @ _recompose(np.exp(r[..., None] * logk), U) @ s)

    def check_points(self, x):
        x = np.asarray(x, dtype=float)
        asym = np.max(np.abs(x - np.swapaxes(x, -1, -2)), axis=(-2, -1))
        finite = np.all(np.isfinite(x), axis=(-2, -1))
        bad = ~finite | ~(asym <= SYM_TOL)
        w = np.linalg.eigvalsh(np.where(finite[..., None, None], sym(x), np.eye(3)))
        return bad | ~(w[..., 0] > MIN_EIG)

    def canonical(self, x):
        return sym(np.asarray(x, dtype=float))

    def tangent_from_coords(self, x, c):
        s, _ = sqrtm_pair(x)
        B = np.tensordot(np.asarray(c, dtype=float), _SYM_BASIS, axes=([-1], [0]))
        return sym(s @ B @ s)

    def random_point(self, rng, size=(), scale=1.0):
        size = (size,) if np.isscalar(size) else tuple(size)
        c = scale * rng.standard_normal(size + (6,))
        return expm_sym(np.tensordot(c, _SYM_BASIS, axes=([-1], [0])))

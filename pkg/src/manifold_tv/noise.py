"""Noise models and the diffusion-weighted imaging forward/inverse pipeline."""

from dataclasses import dataclass, field

import numpy as np

from .exceptions import ConfigurationError
from .manifolds import S1, S2, SO3, Product
from .manifolds.circle import wrap
from .manifolds.sphere import tangent_basis
from .rng import CounterRNG, pixel_ids

DEFAULT_B = 800.0
DEFAULT_A0 = 1000.0
DEFAULT_N_DIRECTIONS = 15
DWI_CLAMP = 1e-3  # fraction of A0 below which DWI values are clamped before the log


def fibonacci_directions(k=DEFAULT_N_DIRECTIONS):
    """``k`` gradient directions on the upper hemisphere (Fibonacci lattice).

    Diffusion signals are even in ``v``, so a hemisphere suffices.
    """
    k = int(k)
    if k < 6:
        raise ConfigurationError("at least 6 gradient directions are needed")
    idx = np.arange(k) + 0.5
    z = 1.0 - idx / k
    r = np.sqrt(1.0 - z**2)
    phi = np.pi * (3.0 - np.sqrt(5.0)) * np.arange(k)
    return np.stack([r * np.cos(phi), r * np.sin(phi), z], axis=-1)


@dataclass(frozen=True)
class DwiProtocol:
    directions: np.ndarray = field(default_factory=fibonacci_directions)
    b: float = DEFAULT_B
    A0: float = DEFAULT_A0

    def __post_init__(self):
        d = np.asarray(self.directions, dtype=float)
        if d.ndim != 2 or d.shape[1] != 3 or d.shape[0] < 6:
            raise ConfigurationError("need at least 6 gradient directions of length 3")
        if np.any(np.abs(np.linalg.norm(d, axis=1) - 1) > 1e-12):
            raise ConfigurationError("gradient directions must be unit vectors")
        if not (self.b > 0 and self.A0 > 0):
            raise ConfigurationError("b and A0 must be positive")
        object.__setattr__(self, "directions", d)

    def design_matrix(self):
        """Rows ``[x^2, y^2, z^2, 2xy, 2xz, 2yz]`` so that ``G @ s == v^T S v``."""
        x, y, z = self.directions.T
        return np.stack([x * x, y * y, z * z, 2 * x * y, 2 * x * z, 2 * y * z], axis=1)


def stejskal_tanner_forward(S, proto=None):
    """Diffusion weighted images ``A0 * exp(-b v^T S v)``, one per direction.

    ``S`` has shape ``batch + (3, 3)``; the result has shape ``(K,) + batch``.
    """
    proto = proto or DwiProtocol()
    S = np.asarray(S, dtype=float)
    v = proto.directions
    q = np.einsum("ka,...ab,kb->k...", v, S, v)
    return proto.A0 * np.exp(-proto.b * q)


def rician_corrupt(img, sigma, seed, stream=0):
    """Rician corruption ``sqrt((D + X)^2 + Y^2)`` with ``X, Y ~ N(0, sigma^2)``."""
    img = np.asarray(img, dtype=float)
    if sigma < 0:
        raise ValueError("sigma must be nonnegative")
    if sigma == 0:
        return np.abs(img)
    rng = CounterRNG(seed, stream)
    ids = pixel_ids(img.shape)
    X = sigma * rng.normal(ids, 0)
    Y = sigma * rng.normal(ids, 1)
    return np.sqrt((img + X) ** 2 + Y**2)


def _floor_spd(S):
    w, U = np.linalg.eigh(S)
    top = w[..., -1:]
    floor = np.where(top > 0, 1e-6 * top, 1e-9)
    need = np.any(w < floor, axis=-1)
    if not need.any():
        return S
    out = S.copy()
    wf = np.maximum(w[need], floor[need])
    Un = U[need]
    out[need] = (Un * wf[:, None, :]) @ np.swapaxes(Un, -1, -2)
    out[need] = 0.5 * (out[need] + np.swapaxes(out[need], -1, -2))
    return out


def dti_ls_fit(dwis, proto=None):
    """Least-squares tensor fit of log-linearised DWIs.

    Values below ``1e-3 * A0`` (including nonpositive ones) are clamped before
    taking the log. Fitted tensors are made SPD by flooring eigenvalues at
    ``1e-6`` times the largest one (``1e-9`` if none is positive).

    Parameters
    ----------
    dwis : array, shape ``(K,) + batch``

    Returns
    -------
    ndarray, shape ``batch + (3, 3)``
    """
    proto = proto or DwiProtocol()
    G = proto.design_matrix()
    if np.linalg.matrix_rank(G) < 6:
        raise ConfigurationError("gradient design matrix is rank deficient")
    dwis = np.asarray(dwis, dtype=float)
    K = dwis.shape[0]
    if K != G.shape[0]:
        raise ConfigurationError(f"got {K} DWIs for {G.shape[0]} directions")
    batch = dwis.shape[1:]
    clamped = np.maximum(dwis, DWI_CLAMP * proto.A0)
    rhs = -np.log(clamped / proto.A0).reshape(K, -1) / proto.b
    coef, *_ = np.linalg.lstsq(G, rhs, rcond=None)
    xx, yy, zz, xy, xz, yz = coef
    S = np.stack(
        [np.stack([xx, xy, xz], -1), np.stack([xy, yy, yz], -1), np.stack([xz, yz, zz], -1)],
        axis=-2,
    ).reshape(batch + (3, 3))
    return _floor_spd(S)


def vmf_sample(mu, kappa, seed, stream=0):
    """One von Mises-Fisher sample on S^2 per mean direction in ``mu``.

    Wood's rejection scheme: the cosine to the mean is drawn from its
    envelope and accepted per pixel; the azimuth is uniform. Pixels retry
    on fresh counters until accepted.
    """
    mu = np.asarray(mu, dtype=float)
    if not kappa > 0:
        raise ValueError("kappa must be positive")
    batch = mu.shape[:-1]
    ids = pixel_ids(batch).ravel()
    rng = CounterRNG(seed, stream)
    # b = (-2k + sqrt(4k^2 + 4)) / 2, written without cancellation
    b = 2.0 / (2.0 * kappa + np.sqrt(4.0 * kappa**2 + 4.0))
    x0 = (1.0 - b) / (1.0 + b)
    c = kappa * x0 + 2.0 * np.log(1.0 - x0**2)
    w = np.empty(ids.shape)
    pending = np.arange(ids.size)
    counter = 1
    while pending.size:
        # Beta(1, 1) is uniform for the 2-sphere
        z = rng.uniform(ids[pending], counter)
        u = rng.uniform(ids[pending], counter + 1)
        cand = (1.0 - (1.0 + b) * z) / (1.0 - (1.0 - b) * z)
        ok = kappa * cand + 2.0 * np.log(1.0 - x0 * cand) - c >= np.log(u)
        w[pending[ok]] = cand[ok]
        pending = pending[~ok]
        counter += 2
    phi = 2.0 * np.pi * rng.uniform(ids, 0)
    w = w.reshape(batch)
    phi = phi.reshape(batch)
    e1, e2 = tangent_basis(mu)
    s = np.sqrt(np.maximum(0.0, 1.0 - w**2))
    out = w[..., None] * mu + s[..., None] * (np.cos(phi)[..., None] * e1
                                              + np.sin(phi)[..., None] * e2)
    return out / np.linalg.norm(out, axis=-1, keepdims=True)


def kappa_to_sigma(kappa):
    """Tangent-Gaussian spread standing in for a concentration ``kappa``."""
    if not kappa > 0:
        raise ValueError("kappa must be positive")
    return 1.0 / np.sqrt(kappa)


_CLAMPED = (S1, S2, SO3)
MAX_TANGENT_NORM = np.pi / 2


def _tangent_step(manifold, x, sigma, rng, ids, counter):
    if isinstance(manifold, Product):
        parts, lo = [], counter
        for comp, xc in zip(manifold.components, manifold.split(x)):
            parts.append(_tangent_step(comp, xc, sigma, rng, ids, lo))
            lo += comp.dim
        return manifold.join(parts)
    coords = np.stack([rng.normal(ids, counter + k) for k in range(manifold.dim)], axis=-1)
    W = manifold.tangent_from_coords(x, sigma * coords)
    if isinstance(manifold, _CLAMPED):
        nrm = np.asarray(manifold.norm(x, W))
        scale = np.minimum(1.0, MAX_TANGENT_NORM / np.maximum(nrm, 1e-300))
        W = W * manifold._expand(scale)
    return manifold.exp(x, W)


def tangent_gaussian_noise(manifold, x, sigma, seed, stream=0):
    """``exp_x(W)`` with ``W`` isotropic Gaussian in an orthonormal tangent basis.

    Each tangent coordinate has standard deviation ``sigma``. On S1, S2 and
    SO(3) the tangent norm is clamped to pi/2 so the perturbation stays
    inside the injectivity radius.
    """
    x = np.asarray(x, dtype=float)
    if sigma < 0:
        raise ValueError("sigma must be nonnegative")
    if sigma == 0:
        return x.copy()
    batch = manifold.batch_shape(x)
    return _tangent_step(manifold, x, sigma, CounterRNG(seed, stream), pixel_ids(batch), 0)


def wrapped_gaussian_noise(x, sigma, seed, stream=0):
    """Wrapped normal noise on S1 angles (no clamping)."""
    x = np.asarray(x, dtype=float)
    if sigma < 0:
        raise ValueError("sigma must be nonnegative")
    if sigma == 0:
        return x.copy()
    rng = CounterRNG(seed, stream)
    return wrap(x + sigma * rng.normal(pixel_ids(x.shape), 0))


def dwi_noise_pipeline(S, sigma, seed, proto=None):
    """Forward model, Rician corruption of every DWI, and tensor refit."""
    proto = proto or DwiProtocol()
    dwis = stejskal_tanner_forward(S, proto)
    noisy = np.stack([rician_corrupt(d, sigma, seed, stream=k) for k, d in enumerate(dwis)])
    return dti_ls_fit(noisy, proto)

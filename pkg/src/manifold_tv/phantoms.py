"""Deterministic piecewise-smooth test images with sharp discontinuities."""

import numpy as np

from .manifolds.rotations import orthonormalize, rodrigues, skew


def _rot_z(phi):
    c, s = np.cos(phi), np.sin(phi)
    z, o = np.zeros_like(phi), np.ones_like(phi)
    return np.stack([np.stack([c, -s, z], -1), np.stack([s, c, z], -1),
                     np.stack([z, z, o], -1)], -2)


def _rot_y(phi):
    c, s = np.cos(phi), np.sin(phi)
    z, o = np.zeros_like(phi), np.ones_like(phi)
    return np.stack([np.stack([c, z, s], -1), np.stack([z, o, z], -1),
                     np.stack([-s, z, c], -1)], -2)


def _check(n, m=2):
    if n < 2 or m < 2:
        raise ValueError("phantom dimensions must be at least 2")


def synth_pos3_image(n, m, scale=1e-3):
    """Diffusion-tensor phantom of shape ``(n, m, 3, 3)``.

    Left half: prolate tensors, eigenvalues ``(1.8, 0.4, 0.4) * scale``, whose
    principal axis turns smoothly in the xy-plane from 0 to pi/2 down the rows.
    Right half: oblate tensors ``(1.2, 1.0, 0.3) * scale`` tilted about y by an
    angle growing from pi/6 to pi/3 across the columns. A centred disc of
    radius ``min(n, m) / 5`` holds isotropic tensors ``0.8 * scale * I``.
    """
    _check(n, m)
    i, j = np.meshgrid(np.arange(n), np.arange(m), indexing="ij")
    left = j < m // 2
    phi = 0.5 * np.pi * i / (n - 1)
    R_left = _rot_z(phi)
    R_right = _rot_y(np.pi / 6 + (np.pi / 6) * j / (m - 1))
    R = np.where(left[..., None, None], R_left, R_right)
    ev = np.where(left[..., None], np.array([1.8, 0.4, 0.4]), np.array([1.2, 1.0, 0.3])) * scale
    S = (R * ev[..., None, :]) @ np.swapaxes(R, -1, -2)
    disc = (i - (n - 1) / 2) ** 2 + (j - (m - 1) / 2) ** 2 <= (min(n, m) / 5) ** 2
    S[disc] = 0.8 * scale * np.eye(3)
    return 0.5 * (S + np.swapaxes(S, -1, -2))


def synth_s2_image(n, m):
    """Sphere-valued phantom of shape ``(n, m, 3)`` with latitude bands.

    The polar angle is constant within three horizontal bands (pi/6, pi/2,
    5 pi/6 from top to bottom); the azimuth increases smoothly from 0 to
    0.6 pi across the columns.
    """
    _check(n, m)
    i, j = np.meshgrid(np.arange(n), np.arange(m), indexing="ij")
    band = np.minimum(3 * i // n, 2)
    theta = np.array([np.pi / 6, np.pi / 2, 5 * np.pi / 6])[band]
    phi = 0.6 * np.pi * j / (m - 1)
    x = np.stack([np.sin(theta) * np.cos(phi), np.sin(theta) * np.sin(phi), np.cos(theta)], -1)
    return x / np.linalg.norm(x, axis=-1, keepdims=True)


def synth_so3_series(n=130, jump_at=None):
    """Rotation time series of shape ``(n, 3, 3)`` with one jump.

    Smooth part: ``exp(skew(0.8 sin(pi k / n) a1 + 0.5 k / n a2))`` for unit
    axes ``a1, a2``. From sample ``jump_at`` on, the signal is pre-multiplied
    by a fixed rotation of angle 1 rad, so the step between samples
    ``jump_at - 1`` and ``jump_at`` (0-based) is the largest. By default
    the jump sits at 50, or at ``n // 2`` for series of 50 samples or fewer.
    """
    if n < 2:
        raise ValueError("series length must be at least 2")
    if jump_at is None:
        jump_at = 50 if n > 50 else n // 2
    if not 0 < jump_at < n:
        raise ValueError("jump position must lie inside the series")
    k = np.arange(n)[:, None]
    a1 = np.array([1.0, 0.0, 0.0])
    a2 = np.array([0.0, 0.6, 0.8])
    w = 0.8 * np.sin(np.pi * k / n) * a1 + 0.5 * k / n * a2
    R = rodrigues(skew(w))
    jump = rodrigues(skew(np.array([0.0, 0.0, 1.0])))
    R[jump_at:] = jump @ R[jump_at:]
    return orthonormalize(R)

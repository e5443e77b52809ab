"""sRGB <-> CIE LCh(ab) under the D65 illuminant, 2 degree observer.

Chain: sRGB gamma -> linear RGB -> XYZ -> Lab -> LCh. Hue is the angle
``atan2(b, a)`` in (-pi, pi]; for chroma below ``1e-8`` it is set to 0.
"""

import numpy as np

from ..manifolds.circle import wrap

# linear sRGB -> XYZ, D65
RGB_TO_XYZ = np.array([
    [0.4124564, 0.3575761, 0.1804375],
    [0.2126729, 0.7151522, 0.0721750],
    [0.0193339, 0.1191920, 0.9503041],
])
XYZ_TO_RGB = np.linalg.inv(RGB_TO_XYZ)
# reference white as the image of RGB (1, 1, 1), so white maps to a = b = 0
WHITE = RGB_TO_XYZ.sum(axis=1)
DELTA = 6.0 / 29.0
CHROMA_EPS = 1e-8


def srgb_to_linear(c):
    c = np.asarray(c, dtype=float)
    return np.where(c <= 0.04045, c / 12.92, ((c + 0.055) / 1.055) ** 2.4)


def linear_to_srgb(c):
    c = np.asarray(c, dtype=float)
    lo = c <= 0.0031308
    out = np.empty_like(c)
    out[lo] = 12.92 * c[lo]
    out[~lo] = 1.055 * np.power(c[~lo], 1 / 2.4) - 0.055
    return out


def _f(t):
    return np.where(t > DELTA**3, np.cbrt(t), t / (3 * DELTA**2) + 4.0 / 29.0)


def _finv(t):
    return np.where(t > DELTA, t**3, 3 * DELTA**2 * (t - 4.0 / 29.0))


def rgb_to_lab(rgb):
    xyz = srgb_to_linear(rgb) @ RGB_TO_XYZ.T / WHITE
    fx, fy, fz = _f(xyz[..., 0]), _f(xyz[..., 1]), _f(xyz[..., 2])
    return np.stack([116 * fy - 16, 500 * (fx - fy), 200 * (fy - fz)], axis=-1)


def lab_to_rgb_linear(lab):
    lab = np.asarray(lab, dtype=float)
    fy = (lab[..., 0] + 16) / 116
    fx = fy + lab[..., 1] / 500
    fz = fy - lab[..., 2] / 200
    xyz = np.stack([_finv(fx), _finv(fy), _finv(fz)], axis=-1) * WHITE
    return xyz @ XYZ_TO_RGB.T


def rgb_to_lch(rgb):
    """Map sRGB values in [0, 1] (shape ``(..., 3)``) to ``(L, C, h)``."""
    rgb = np.asarray(rgb, dtype=float)
    if rgb.shape[-1:] != (3,):
        raise ValueError("RGB arrays need a trailing axis of length 3")
    lab = rgb_to_lab(rgb)
    C = np.hypot(lab[..., 1], lab[..., 2])
    h = np.where(C < CHROMA_EPS, 0.0, wrap(np.arctan2(lab[..., 2], lab[..., 1])))
    L = np.maximum(lab[..., 0], 0.0)
    return np.stack([L, C, h], axis=-1)


def lch_to_rgb(lch, return_clipped=False):
    """Inverse of :func:`rgb_to_lch`, clipped to [0, 1].

    With ``return_clipped`` also returns the number of out-of-gamut pixels.
    """
    lch = np.asarray(lch, dtype=float)
    L, C, h = lch[..., 0], lch[..., 1], lch[..., 2]
    lab = np.stack([L, C * np.cos(h), C * np.sin(h)], axis=-1)
    rgb = linear_to_srgb(np.clip(lab_to_rgb_linear(lab), 0.0, None))
    tol = 1e-9
    out_of_gamut = np.any((rgb < -tol) | (rgb > 1 + tol), axis=-1) | np.any(
        lab_to_rgb_linear(lab) < -tol, axis=-1
    )
    rgb = np.clip(rgb, 0.0, 1.0)
    if return_clipped:
        return rgb, int(np.sum(out_of_gamut))
    return rgb

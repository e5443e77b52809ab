"""Restoration quality: manifold-valued delta-SNR and RGB PSNR."""

import math
from dataclasses import dataclass

import numpy as np

from .validation import check_manifold_image, check_same_shape

INF_TOKEN = "+inf"


@dataclass(frozen=True)
class MetricReport:
    name: str
    value: float
    pixel_count: int

    @property
    def is_infinite(self):
        return math.isinf(self.value)

    def format(self):
        return format_db(self.value)

    def to_dict(self):
        val = INF_TOKEN if self.is_infinite else self.value
        return {"name": self.name, "value": val, "unit": "dB", "pixel_count": self.pixel_count}


def format_db(value):
    """Fixed text form; perfect reconstructions print as ``+inf``."""
    if math.isinf(value):
        return INF_TOKEN if value > 0 else "-inf"
    return f"{value:.6f} dB"


def delta_snr(g, f, x, manifold=None):
    """Improvement in dB of the restored image ``x`` over the noisy ``f``.

    ``10 log10(sum d(g, f)^2 / sum d(g, x)^2)`` with ``g`` the ground truth.
    Returns ``inf`` when ``x`` equals ``g``.

    Raises
    ------
    ValueError
        If ``g`` and ``f`` coincide (the ratio is undefined).
    """
    M, g = check_manifold_image(g, manifold, validate=False)
    _, f = check_manifold_image(f, M, validate=False)
    _, x = check_manifold_image(x, M, validate=False)
    check_same_shape(g, f, x)
    num = float(np.sum(M.dist(g, f) ** 2))
    if num == 0.0:
        raise ValueError("delta SNR undefined: noisy image equals ground truth")
    den = float(np.sum(M.dist(g, x) ** 2))
    if den == 0.0:
        return math.inf
    return 10.0 * math.log10(num / den)


def psnr_rgb(g, x):
    """Peak SNR of RGB images with values in [0, 1], shape ``(..., 3)``.

    ``10 log10(3 n m max|g|^2 / sum |g - x|^2)``, the maximum running over all
    channels of ``g``.
    """
    g = np.asarray(g, dtype=float)
    x = np.asarray(x, dtype=float)
    check_same_shape(g, x)
    if g.shape[-1] != 3:
        raise ValueError("RGB images need a trailing axis of length 3")
    err = float(np.sum((g - x) ** 2))
    if err == 0.0:
        return math.inf
    peak = float(np.max(np.abs(g))) ** 2
    return 10.0 * math.log10(g.size * peak / err)


def dsnr_report(g, f, x, manifold=None):
    M, gd = check_manifold_image(g, manifold, validate=False)
    return MetricReport("dsnr", delta_snr(gd, f, x, M), int(np.prod(M.batch_shape(gd))))


def psnr_report(g, x):
    g = np.asarray(g)
    return MetricReport("psnr", psnr_rgb(g, x), int(np.prod(g.shape[:-1])))

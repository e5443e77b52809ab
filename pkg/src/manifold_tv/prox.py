"""Closed-form proximal maps of the data and coupling terms.

Every proximal map of the split functional moves points along geodesics; the
only problem-specific quantity is the arc length ``t`` travelled, which
depends on the step ``lam``, the current distance ``d`` and the penalty kind.
"""

import math

import numpy as np

from .exceptions import CutLocusError

SQRT2 = math.sqrt(2.0)
DEFAULT_TAU = SQRT2
DEFAULT_OMEGA = 1.0

DATA_TERMS = ("l1", "l2", "huber")
REGULARIZERS = ("tv", "tv2", "huber")


def huber(s, tau=DEFAULT_TAU, omega=DEFAULT_OMEGA):
    """Huber function: ``tau^2 s^2`` below ``omega / (sqrt(2) tau)``, linear above."""
    s = np.asarray(s, dtype=float)
    knee = omega / (SQRT2 * tau)
    return np.where(s < knee, tau**2 * s**2, omega * SQRT2 * tau * s - omega**2 / 2)


def _check_huber(tau, omega):
    if not (tau > 0 and omega > 0):
        raise ValueError("Huber parameters tau and omega must be positive")


def calc_t_data(lam, d, kind="l2", tau=DEFAULT_TAU, omega=DEFAULT_OMEGA):
    """Arc length travelled from ``x`` toward the datum ``f`` by ``prox_{lam F}``.

    Parameters
    ----------
    lam : float
        Proximal step, ``lam >= 0``.
    d : array_like
        Distance ``d(x, f)``.
    kind : {"l1", "l2", "huber"}

    Returns
    -------
    ndarray with ``0 <= t <= d``.
    """
    d = np.asarray(d, dtype=float)
    if kind == "l1":
        return np.minimum(lam, d)
    if kind == "l2":
        return lam / (1.0 + lam) * d
    if kind == "huber":
        _check_huber(tau, omega)
        a = 2.0 * lam * tau**2
        quad = a / (1.0 + a) * d
        lin = np.minimum(d, SQRT2 * lam * omega * tau)
        return np.where(d < omega * (1.0 + a) / (SQRT2 * tau), quad, lin)
    raise ValueError(f"unknown data term {kind!r}; expected one of {DATA_TERMS}")


def calc_t_reg(lam, d, kind="tv", tau=DEFAULT_TAU, omega=DEFAULT_OMEGA):
    """Arc length each endpoint of a neighbour pair moves toward the other
    under the coupling prox with step ``lam`` (already multiplied by alpha).

    Returns an array with ``0 <= t <= d / 2``.
    """
    d = np.asarray(d, dtype=float)
    if kind == "tv":
        return np.minimum(lam, d / 2.0)
    if kind == "tv2":
        return lam / (1.0 + 2.0 * lam) * d
    if kind == "huber":
        _check_huber(tau, omega)
        a = 4.0 * lam * tau**2
        quad = 0.5 * a / (1.0 + a) * d
        lin = np.minimum(d / 2.0, SQRT2 * lam * omega * tau)
        return np.where(d < omega * (1.0 + a) / (SQRT2 * tau), quad, lin)
    raise ValueError(f"unknown regularizer {kind!r}; expected one of {REGULARIZERS}")


def prox_data(manifold, x, f, lam, kind="l2", tau=DEFAULT_TAU, omega=DEFAULT_OMEGA):
    """Pixelwise prox of the data term: ``x_ij -> [x_ij, f_ij]_t``."""
    x = np.asarray(x, dtype=float)
    f = np.asarray(f, dtype=float)
    t = calc_t_data(lam, manifold.dist(x, f), kind, tau, omega)
    return manifold.geodesic(x, f, t)


def prox_pair(manifold, a, b, t):
    """Move both endpoints of a pair toward each other by arc length ``t``.

    Returns ``([a, b]_t, [b, a]_t)``; requires ``t <= d(a, b) / 2``.
    """
    d = manifold.dist(a, b)
    t = np.broadcast_to(np.asarray(t, dtype=float), np.shape(d))
    if np.any(t > d / 2 * (1 + 1e-9) + 1e-12):
        raise ValueError("prox_pair: t exceeds half the pair distance")
    return manifold.geodesic(a, b, t), manifold.geodesic(b, a, t)


def _pair_slices(n, parity):
    start = 0 if parity == "even" else 1
    left = np.arange(start, n - 1, 2)
    return left, left + 1


def prox_coupling(manifold, x, lam, kind="tv", axis="horizontal", parity="even",
                  tau=DEFAULT_TAU, omega=DEFAULT_OMEGA):
    """Prox of one even/odd family of neighbour couplings.

    ``x`` is an image of shape ``(n, m) + point_shape``. Pairs ``(j, j+1)``
    along ``axis`` whose (0-based) left index ``j`` has the requested parity
    are contracted; every other pixel is returned unchanged. Since pairs of one
    parity are disjoint, the update is a single vectorised step.
    """
    x = np.asarray(x, dtype=float)
    if axis not in ("horizontal", "vertical"):
        raise ValueError("axis must be 'horizontal' or 'vertical'")
    if parity not in ("even", "odd"):
        raise ValueError("parity must be 'even' or 'odd'")
    ax = 1 if axis == "horizontal" else 0
    out = x.copy()
    left, right = _pair_slices(x.shape[ax], parity)
    if left.size == 0:
        return out
    a = np.take(x, left, axis=ax)
    b = np.take(x, right, axis=ax)
    d = manifold.dist(a, b)
    t = calc_t_reg(lam, d, kind, tau, omega)
    try:
        na, nb = manifold.geodesic(a, b, t), manifold.geodesic(b, a, t)
    except CutLocusError as err:
        i, j = err.index[:2]
        pixel = (i, int(left[j])) if ax == 1 else (int(left[i]), j)
        raise err.locate(pixel, axis) from err
    idx = [slice(None)] * x.ndim
    idx[ax] = left
    out[tuple(idx)] = na
    idx[ax] = right
    out[tuple(idx)] = nb
    return out

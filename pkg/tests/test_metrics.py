import math

import numpy as np
import pytest

from manifold_tv.metrics import MetricReport, delta_snr, format_db, psnr_rgb
from manifold_tv.manifolds import S1, Euclidean
from manifold_tv.manifolds.circle import wrap


def test_dsnr_examples(rng):
    E = Euclidean(2)
    g = rng.standard_normal((4, 4, 2))
    f = g + rng.standard_normal((4, 4, 2))
    assert delta_snr(g, f, f, E) == 0.0
    half = g + (f - g) / 2
    assert delta_snr(g, f, half, E) == pytest.approx(10 * math.log10(4))
    assert delta_snr(g, f, g, E) == math.inf
    with pytest.raises(ValueError):
        delta_snr(g, g, f, E)


def test_dsnr_isometry_invariance(rng):
    M = S1()
    g = rng.uniform(-np.pi, np.pi, (5, 5))
    f = wrap(g + 0.3 * rng.standard_normal((5, 5)))
    x = wrap(g + 0.1 * rng.standard_normal((5, 5)))
    rot = lambda a: wrap(a + 1.234)  # noqa: E731
    assert delta_snr(rot(g), rot(f), rot(x), M) == pytest.approx(delta_snr(g, f, x, M), abs=1e-9)
    E = Euclidean(1)
    g1, f1, x1 = g[..., None], f[..., None], x[..., None]
    assert delta_snr(g1 + 5, f1 + 5, x1 + 5, E) == pytest.approx(delta_snr(g1, f1, x1, E))


def test_psnr_examples(rng):
    g = np.ones((4, 5, 3))
    assert psnr_rgb(g, np.full_like(g, 0.9)) == pytest.approx(20.0)
    assert psnr_rgb(g, g) == math.inf
    x = rng.uniform(0, 1, g.shape)
    assert psnr_rgb(g, x) - psnr_rgb(g, g + 2 * (x - g)) == pytest.approx(10 * math.log10(4))


def test_report_formatting():
    assert format_db(0.0) == "0.000000 dB"
    assert format_db(math.inf) == "+inf"
    rep = MetricReport("dsnr", math.inf, 9)
    assert rep.to_dict()["value"] == "+inf" and rep.format() == "+inf"

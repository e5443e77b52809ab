import numpy as np
import pytest
from sklearn.base import clone

from manifold_tv import ManifoldImage, TVDenoiser
from manifold_tv.exceptions import InvariantError
from manifold_tv.manifolds import S2
from manifold_tv.noise import vmf_sample
from manifold_tv.phantoms import synth_s2_image


def test_params_round_trip():
    est = TVDenoiser("s2", alpha=0.4, algorithm="parallel")
    params = est.get_params()
    assert params["alpha"] == 0.4 and params["manifold"] == "s2"
    twin = clone(est).set_params(iterations=7)
    assert twin.iterations == 7 and est.iterations == 100


def test_transform_improves_snr():
    g = synth_s2_image(12, 12)
    f = vmf_sample(g, 20.0, seed=1)
    est = TVDenoiser("s2", alpha=0.2, iterations=40).fit(f)
    assert est.score(f, g) > 3.0
    assert est.n_iter_ == 40 and len(est.functional_trace_) > 0


def test_manifold_image_in_and_out():
    g = ManifoldImage(S2(), synth_s2_image(4, 4))
    out = TVDenoiser(S2(), alpha=0.0, iterations=2).fit_transform(g)
    assert isinstance(out, ManifoldImage) and out == g


def test_input_validation():
    est = TVDenoiser("s2").fit()
    with pytest.raises(InvariantError):
        est.transform(np.full((3, 3, 3), 2.0))
    with pytest.raises(ValueError):
        est.transform(np.full((3, 3, 2), 0.5))
    with pytest.raises(ValueError):
        TVDenoiser("s2", data_term="l7").fit()
    with pytest.raises(ValueError):
        TVDenoiser("s2", alpha=np.nan).fit()


def test_transform_requires_fit():
    from sklearn.exceptions import NotFittedError

    with pytest.raises(NotFittedError):
        TVDenoiser("s2").transform(synth_s2_image(3, 3))

"""Input checking shared by the estimator, metrics and CLI."""

import numpy as np

from .image import ManifoldImage
from .manifolds import Manifold, from_tag


def check_manifold(manifold):
    """Accept a :class:`Manifold` instance or a container tag."""
    if isinstance(manifold, Manifold):
        return manifold
    if isinstance(manifold, str):
        return from_tag(manifold)
    raise TypeError(f"expected a Manifold or tag string, got {type(manifold).__name__}")


def check_manifold_image(X, manifold=None, validate=True):
    """Return ``(manifold, data)`` for an image given as array or ManifoldImage.

    Arrays need an explicit ``manifold``. Points are checked against the
    manifold invariants unless ``validate`` is false.
    """
    if isinstance(X, ManifoldImage):
        if manifold is not None and check_manifold(manifold) != X.manifold:
            raise ValueError(f"image is on {X.manifold!r}, expected {manifold!r}")
        img = X
    else:
        if manifold is None:
            raise ValueError("a manifold is required for plain arrays")
        img = ManifoldImage(check_manifold(manifold), np.asarray(X, dtype=float))
    if not np.all(np.isfinite(img.data)):
        raise ValueError("image contains non-finite values")
    if validate:
        img.validate()
    return img.manifold, img.data


def check_same_shape(*arrays):
    shapes = {np.shape(a) for a in arrays}
    if len(shapes) != 1:
        raise ValueError(f"shape mismatch: {sorted(shapes)}")

"""A manifold tag paired with its pixel array."""

from dataclasses import dataclass

import numpy as np

from .manifolds import Manifold, from_tag


@dataclass(frozen=True, eq=False)
class ManifoldImage:
    """Image or signal of manifold-valued pixels.

    ``data`` has shape ``(n,) + point_shape`` or ``(n, m) + point_shape``.
    """

    manifold: Manifold
    data: np.ndarray

    def __post_init__(self):
        m = self.manifold
        if isinstance(m, str):
            m = from_tag(m)
            object.__setattr__(self, "manifold", m)
        data = np.asarray(self.data, dtype=np.float64)
        batch = m.batch_shape(data)
        if len(batch) not in (1, 2) or min(batch, default=0) < 1:
            raise ValueError(f"image must have 1 or 2 nonempty pixel axes, got {batch}")
        object.__setattr__(self, "data", data)

    @property
    def tag(self):
        return self.manifold.tag

    @property
    def shape(self):
        return self.manifold.batch_shape(self.data)

    def validate(self):
        self.manifold.validate(self.data)
        return self

    def with_data(self, data):
        return ManifoldImage(self.manifold, data)

    def __eq__(self, other):
        return (
            isinstance(other, ManifoldImage)
            and self.manifold == other.manifold
            and self.data.shape == other.data.shape
            and np.array_equal(self.data, other.data)
        )

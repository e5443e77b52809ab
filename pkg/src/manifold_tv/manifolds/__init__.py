"""Closed-form manifolds: S1, S2, SO(3), Pos(3), R^k and products (LCh)."""

from .base import Manifold
from .circle import S1, wrap
from .euclidean import Euclidean
from .product import LCh, LChManifold, Product
from .rotations import SO3, rodrigues, skew, unskew
from .sphere import S2
from .spd import Pos3

TAGS = ("s1", "s2", "so3", "pos3", "euclidean:<k>", "lch")


def from_tag(tag):
    """Instantiate a manifold from its container tag."""
    tag = str(tag).strip().lower()
    simple = {"s1": S1, "s2": S2, "so3": SO3, "pos3": Pos3, "lch": LCh}
    if tag in simple:
        return simple[tag]()
    if tag.startswith("euclidean:"):
        try:
            k = int(tag.split(":", 1)[1])
        except ValueError:
            raise ValueError(f"bad Euclidean tag {tag!r}") from None
        return Euclidean(k)
    raise ValueError(f"unknown manifold tag {tag!r}; expected one of {TAGS}")


__all__ = [
    "Manifold", "S1", "S2", "SO3", "Pos3", "Euclidean", "Product", "LCh", "LChManifold",
    "from_tag", "wrap", "skew", "unskew", "rodrigues", "TAGS",
]

"""Counter-based random numbers with per-pixel substreams.

Each variate is a pure function of ``(seed, stream, pixel id, counter)``, so
noise applied to one pixel never depends on how many other pixels are
processed alongside it, in what order, or by how many workers.

Generator: SplitMix64 finaliser applied to a hashed counter tuple. Its name
and version are recorded in :data:`RNG_VERSION` and in CLI reports.
"""

import numpy as np

RNG_VERSION = "splitmix64-ctr/1"

_GOLDEN = np.uint64(0x9E3779B97F4A7C15)
_M1 = np.uint64(0xBF58476D1CE4E5B9)
_M2 = np.uint64(0x94D049BB133111EB)
_PIX = np.uint64(0xD1B54A32D192ED03)
_CTR = np.uint64(0x8CB92BA72F3D8DD7)


def _mix64(z):
    z = (z ^ (z >> np.uint64(30))) * _M1
    z = (z ^ (z >> np.uint64(27))) * _M2
    return z ^ (z >> np.uint64(31))


class CounterRNG:
    """Keyed generator; ``seed`` is an unsigned 64-bit integer."""

    def __init__(self, seed, stream=0):
        seed = int(seed)
        if not 0 <= seed < 2**64:
            raise ValueError("seed must be an unsigned 64-bit integer")
        self.seed = seed
        self.stream = int(stream)
        with np.errstate(over="ignore"):
            self._key = _mix64(
                np.array([seed], dtype=np.uint64) + _GOLDEN * np.uint64(self.stream + 1)
            )[0]

    def substream(self, stream):
        return CounterRNG(self.seed, stream)

    def bits(self, ids, counter):
        ids = np.asarray(ids, dtype=np.uint64)
        with np.errstate(over="ignore"):
            h = _mix64(self._key ^ (ids * _PIX))
            h = _mix64(h ^ (np.uint64(counter) * _CTR + _GOLDEN))
        return h

    def uniform(self, ids, counter):
        """Uniform variates in the open interval (0, 1)."""
        h = self.bits(ids, counter)
        return ((h >> np.uint64(11)).astype(float) + 0.5) * 2.0**-53

    def normal(self, ids, counter):
        """Standard normal variates (Box-Muller, counters ``2c`` and ``2c+1``)."""
        u1 = self.uniform(ids, 2 * counter)
        u2 = self.uniform(ids, 2 * counter + 1)
        return np.sqrt(-2.0 * np.log(u1)) * np.cos(2.0 * np.pi * u2)


def pixel_ids(shape):
    return np.arange(int(np.prod(shape, dtype=np.int64)), dtype=np.uint64).reshape(shape)

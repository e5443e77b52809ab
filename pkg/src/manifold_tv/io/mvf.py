"""MVF: a minimal binary container for manifold-valued images.

Layout::

    b"MVF1"                      magic
    uint32 little-endian         length of the JSON header in bytes
    UTF-8 JSON header            {"manifold", "shape", "element_len", "dtype": "f64"}
    float64 little-endian data   row-major pixels, element_len scalars each

Pixels are checked against the manifold invariants on read.
"""

import json
import math
import struct

import numpy as np

from ..exceptions import FormatError
from ..image import ManifoldImage
from ..manifolds import from_tag

MAGIC = b"MVF1"
DTYPE = "f64"
_LE_F64 = np.dtype("<f8")


def encode_mvf(img):
    """Serialise ``img`` to bytes."""
    M = img.manifold
    shape = list(img.shape)
    header = {"manifold": M.tag, "shape": shape, "element_len": M.element_len, "dtype": DTYPE}
    hb = json.dumps(header, separators=(",", ":")).encode("utf-8")
    payload = np.ascontiguousarray(img.data, dtype=_LE_F64).tobytes()
    return MAGIC + struct.pack("<I", len(hb)) + hb + payload


def decode_mvf(buf, validate=True):
    """Parse bytes produced by :func:`encode_mvf`.

    Raises
    ------
    FormatError
        Bad magic, malformed header or a payload of the wrong length.
    InvariantError
        A decoded pixel is not a valid manifold point.
    """
    buf = bytes(buf)
    if len(buf) < 8:
        raise FormatError("file too short for an MVF header")
    if buf[:4] != MAGIC:
        raise FormatError(f"bad magic {buf[:4]!r}, expected {MAGIC!r}")
    (hlen,) = struct.unpack("<I", buf[4:8])
    if len(buf) < 8 + hlen:
        raise FormatError("truncated MVF header")
    try:
        header = json.loads(buf[8 : 8 + hlen].decode("utf-8"))
    except (UnicodeDecodeError, json.JSONDecodeError) as err:
        raise FormatError(f"malformed MVF header: {err}") from None
    if not isinstance(header, dict):
        raise FormatError("MVF header must be a JSON object")
    missing = {"manifold", "shape", "element_len", "dtype"} - header.keys()
    if missing:
        raise FormatError(f"MVF header lacks {sorted(missing)}")
    if header["dtype"] != DTYPE:
        raise FormatError(f"unsupported dtype {header['dtype']!r}")
    try:
        M = from_tag(header["manifold"])
    except ValueError as err:
        raise FormatError(str(err)) from None
    shape = header["shape"]
    if (not isinstance(shape, list) or len(shape) not in (1, 2)
            or not all(isinstance(s, int) and s >= 1 for s in shape)):
        raise FormatError(f"bad shape {shape!r}")
    if header["element_len"] != M.element_len:
        raise FormatError(
            f"element_len {header['element_len']} does not match {M.tag} ({M.element_len})"
        )
    payload = buf[8 + hlen :]
    want = 8 * M.element_len * math.prod(shape)
    if len(payload) != want:
        raise FormatError(f"payload has {len(payload)} bytes, expected {want}")
    data = np.frombuffer(payload, dtype=_LE_F64).astype(np.float64)
    data = data.reshape(tuple(shape) + tuple(M.point_shape))
    if validate:
        if not np.all(np.isfinite(data)):
            raise FormatError("payload contains non-finite values")
        M.validate(data)
    return ManifoldImage(M, data)


def write_mvf(img, path):
    with open(path, "wb") as fh:
        fh.write(encode_mvf(img))


def read_mvf(path, validate=True):
    with open(path, "rb") as fh:
        return decode_mvf(fh.read(), validate=validate)

"""Visual and text exports: hue PPM for S1, CSV, and glyph JSON.

CSV layout: a first line ``# manifold=<tag> shape=<n>[,<m>]``, then one pixel
per line in row-major order with its ``element_len`` values comma separated
(``%.17g``, so values survive a round trip exactly).

Glyph JSON (``"schema": "glyph/1"``) lists one record per pixel: eigenvalues
and eigenvectors for pos3, axis and angle for so3, the direction for s2.
"""

import colorsys
import json
import math

import numpy as np

from ..exceptions import FormatError
from ..image import ManifoldImage
from ..manifolds import S1, SO3, S2, Pos3, from_tag
from ..manifolds.rotations import rotation_angle, unskew, principal_log

EXPORT_MODES = ("hue_raster", "csv", "glyph_json")
GLYPH_SCHEMA = "glyph/1"


def angle_to_rgb8(theta):
    """Hue raster colours: angle in (-pi, pi] mapped to HSV hue, full S and V."""
    hue = (np.asarray(theta, dtype=float) + np.pi) / (2 * np.pi)
    flat = np.mod(hue.ravel(), 1.0)
    rgb = np.array([colorsys.hsv_to_rgb(h, 1.0, 1.0) for h in flat]).reshape(hue.shape + (3,))
    return np.rint(rgb * 255).astype(np.uint8)


def _grid(img):
    data = img.data
    if len(img.shape) == 1:
        data = data.reshape((img.shape[0], 1) + tuple(img.manifold.point_shape))
    return data


def write_ppm(img, path):
    if not isinstance(img.manifold, S1):
        raise ValueError("hue_raster export needs an S1 image")
    pix = angle_to_rgb8(_grid(img))
    n, m = pix.shape[:2]
    with open(path, "wb") as fh:
        fh.write(f"P6\n{m} {n}\n255\n".encode("ascii"))
        fh.write(pix.tobytes())


def read_ppm(path):
    """Read a binary P6 PPM with maxval 255; returns uint8 ``(n, m, 3)``."""
    with open(path, "rb") as fh:
        buf = fh.read()
    tokens, pos = [], 0
    while len(tokens) < 4:
        while pos < len(buf) and buf[pos : pos + 1].isspace():
            pos += 1
        if buf[pos : pos + 1] == b"#":
            pos = buf.index(b"\n", pos) + 1
            continue
        end = pos
        while end < len(buf) and not buf[end : end + 1].isspace():
            end += 1
        if end == pos:
            raise FormatError("truncated PPM header")
        tokens.append(buf[pos:end])
        pos = end
    if tokens[0] != b"P6":
        raise FormatError("only binary P6 PPM files are supported")
    try:
        m, n, maxval = (int(t) for t in tokens[1:])
    except ValueError:
        raise FormatError("bad PPM header") from None
    if maxval != 255:
        raise FormatError("only 8-bit PPM files are supported")
    raw = buf[pos + 1 : pos + 1 + 3 * n * m]
    if len(raw) != 3 * n * m:
        raise FormatError("truncated PPM payload")
    return np.frombuffer(raw, dtype=np.uint8).reshape(n, m, 3).copy()


def write_ppm_rgb(rgb, path):
    """Write float RGB in [0, 1] with shape ``(n, m, 3)`` as 8-bit P6."""
    rgb = np.asarray(rgb, dtype=float)
    pix = np.rint(np.clip(rgb, 0, 1) * 255).astype(np.uint8)
    n, m = pix.shape[:2]
    with open(path, "wb") as fh:
        fh.write(f"P6\n{m} {n}\n255\n".encode("ascii"))
        fh.write(pix.tobytes())


def format_csv(img):
    M = img.manifold
    lines = [f"# manifold={M.tag} shape={','.join(str(s) for s in img.shape)}"]
    flat = img.data.reshape(-1, M.element_len)
    lines.extend(",".join(f"{v:.17g}" for v in row) for row in flat)
    return "\n".join(lines) + "\n"


def write_csv(img, path):
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(format_csv(img))


def parse_csv(text, validate=True):
    lines = [ln for ln in text.splitlines() if ln.strip()]
    if not lines or not lines[0].startswith("#"):
        raise FormatError("CSV lacks the '# manifold=... shape=...' header")
    fields = dict(tok.split("=", 1) for tok in lines[0][1:].split() if "=" in tok)
    try:
        M = from_tag(fields["manifold"])
        shape = tuple(int(s) for s in fields["shape"].split(","))
    except (KeyError, ValueError) as err:
        raise FormatError(f"bad CSV header: {err}") from None
    rows = lines[1:]
    if len(rows) != math.prod(shape):
        raise FormatError(f"CSV has {len(rows)} pixels, header says {math.prod(shape)}")
    try:
        vals = np.array([[float(v) for v in r.split(",")] for r in rows], dtype=float)
    except ValueError as err:
        raise FormatError(f"bad CSV value: {err}") from None
    if vals.ndim != 2 or vals.shape[1] != M.element_len:
        raise FormatError(f"each CSV line needs {M.element_len} values")
    img = ManifoldImage(M, vals.reshape(shape + tuple(M.point_shape)))
    if validate:
        img.validate()
    return img


def read_csv(path, validate=True):
    with open(path, encoding="utf-8") as fh:
        return parse_csv(fh.read(), validate=validate)


def glyph_records(img):
    M = img.manifold
    batch = img.shape
    flat = img.data.reshape((-1,) + tuple(M.point_shape))
    idx = [list(map(int, np.unravel_index(k, batch))) for k in range(flat.shape[0])]
    if isinstance(M, Pos3):
        w, U = np.linalg.eigh(flat)
        return [{"index": i, "eigenvalues": wk.tolist(), "eigenvectors": Uk.T.tolist()}
                for i, wk, Uk in zip(idx, w, U)]
    if isinstance(M, SO3):
        theta = rotation_angle(flat)
        axis = unskew(principal_log(flat))
        nrm = np.linalg.norm(axis, axis=-1, keepdims=True)
        axis = np.where(nrm > 1e-12, axis / np.where(nrm > 0, nrm, 1), [0.0, 0.0, 1.0])
        # near pi the skew part vanishes; take the axis from R + I instead
        near_pi = theta > np.pi - 1e-6
        if near_pi.any():
            B = flat[near_pi] + np.eye(3)
            col = np.argmax(np.linalg.norm(B, axis=-2), axis=-1)
            ax = B[np.arange(len(col)), :, col]
            axis[near_pi] = ax / np.linalg.norm(ax, axis=-1, keepdims=True)
        return [{"index": i, "axis": a.tolist(), "angle": float(t)}
                for i, a, t in zip(idx, axis, theta)]
    if isinstance(M, S2):
        return [{"index": i, "direction": v.tolist()} for i, v in zip(idx, flat)]
    raise ValueError(f"glyph_json export supports pos3, so3 and s2, not {M.tag}")


def write_glyph_json(img, path):
    doc = {"schema": GLYPH_SCHEMA, "manifold": img.manifold.tag, "shape": list(img.shape),
           "glyphs": glyph_records(img)}
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(doc, fh, indent=1)
        fh.write("\n")


def export_visual(img, path, mode):
    """Write ``img`` to ``path`` as ``"hue_raster"``, ``"csv"`` or ``"glyph_json"``."""
    if mode == "hue_raster":
        write_ppm(img, path)
    elif mode == "csv":
        write_csv(img, path)
    elif mode == "glyph_json":
        write_glyph_json(img, path)
    else:
        raise ValueError(f"unknown export mode {mode!r}; expected one of {EXPORT_MODES}")

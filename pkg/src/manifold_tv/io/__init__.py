"""File formats: MVF container, CSV, PPM, glyph JSON and colour conversion."""

from .color import lch_to_rgb, rgb_to_lch
from .export import (
    EXPORT_MODES,
    export_visual,
    format_csv,
    parse_csv,
    read_csv,
    read_ppm,
    write_csv,
    write_glyph_json,
    write_ppm,
    write_ppm_rgb,
)
from .mvf import MAGIC, decode_mvf, encode_mvf, read_mvf, write_mvf

__all__ = [
    "MAGIC", "encode_mvf", "decode_mvf", "read_mvf", "write_mvf",
    "rgb_to_lch", "lch_to_rgb", "export_visual", "EXPORT_MODES",
    "format_csv", "parse_csv", "read_csv", "write_csv", "read_ppm",
    "write_ppm", "write_ppm_rgb", "write_glyph_json",
]

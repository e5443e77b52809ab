import json
import struct

import numpy as np
import pytest

from manifold_tv.exceptions import FormatError, InvariantError
from manifold_tv.image import ManifoldImage
from manifold_tv.io import (
    decode_mvf,
    encode_mvf,
    export_visual,
    format_csv,
    lch_to_rgb,
    read_csv,
    read_mvf,
    read_ppm,
    rgb_to_lch,
    write_mvf,
)
from manifold_tv.manifolds import S1, S2, SO3, Euclidean, LCh, Pos3

TAG_MANIFOLDS = [S1(), S2(), SO3(), Pos3(), Euclidean(3), LCh()]


@pytest.mark.parametrize("M", TAG_MANIFOLDS, ids=lambda m: m.tag)
@pytest.mark.parametrize("shape", [(7,), (3, 4)])
def test_mvf_round_trip_bit_exact(M, shape, rng, tmp_path):
    img = ManifoldImage(M, M.random_point(rng, shape))
    path = tmp_path / "a.mvf"
    write_mvf(img, path)
    back = read_mvf(path)
    assert back.manifold == M and back.data.tobytes() == img.data.tobytes()
    assert encode_mvf(back) == path.read_bytes()


def test_mvf_layout():
    img = ManifoldImage(Euclidean(2), np.array([[1.0, 2.0], [3.0, 4.0]]))
    buf = encode_mvf(img)
    assert buf[:4] == b"MVF1"
    (hlen,) = struct.unpack("<I", buf[4:8])
    header = json.loads(buf[8 : 8 + hlen])
    assert header == {"manifold": "euclidean:2", "shape": [2], "element_len": 2, "dtype": "f64"}
    assert np.frombuffer(buf[8 + hlen :], "<f8").tolist() == [1.0, 2.0, 3.0, 4.0]


def test_mvf_errors():
    good = encode_mvf(ManifoldImage(S1(), np.zeros((2, 2))))
    with pytest.raises(FormatError):
        decode_mvf(b"MVF0" + good[4:])
    with pytest.raises(FormatError):
        decode_mvf(good[:-3])
    with pytest.raises(FormatError):
        decode_mvf(good[:6])
    with pytest.raises(FormatError):
        decode_mvf(good.replace(b'"s1"', b'"t2"'))
    with pytest.raises(FormatError):
        decode_mvf(good.replace(b'"f64"', b'"f32"'))


def test_mvf_invariant_violation_names_pixel():
    hdr = json.dumps({"manifold": "s1", "shape": [3], "element_len": 1, "dtype": "f64"}).encode()
    payload = np.array([0.0, 1.0, 7.0], "<f8").tobytes()
    with pytest.raises(InvariantError) as info:
        decode_mvf(b"MVF1" + struct.pack("<I", len(hdr)) + hdr + payload)
    assert info.value.index == (2,)


def test_csv_example_and_round_trip(tmp_path, rng):
    img = ManifoldImage(Euclidean(1), np.array([[[0.0], [1.0]]]))
    text = format_csv(img)
    assert text.splitlines() == ["# manifold=euclidean:1 shape=1,2", "0", "1"]
    img2 = ManifoldImage(SO3(), SO3().random_point(rng, (2, 3)))
    export_visual(img2, tmp_path / "r.csv", "csv")
    assert read_csv(tmp_path / "r.csv").data.tobytes() == img2.data.tobytes()


def test_hue_raster(tmp_path):
    img = ManifoldImage(S1(), np.full((3, 4), 0.5))
    export_visual(img, tmp_path / "a.ppm", "hue_raster")
    pix = read_ppm(tmp_path / "a.ppm")
    assert pix.shape == (3, 4, 3)
    assert (pix == pix[0, 0]).all()
    assert (tmp_path / "a.ppm").read_bytes().startswith(b"P6\n4 3\n255\n")
    with pytest.raises(ValueError):
        export_visual(ManifoldImage(S2(), np.tile([0, 0, 1.0], (2, 2, 1))), tmp_path / "b.ppm",
                      "hue_raster")


def test_glyph_json(tmp_path, rng):
    export_visual(ManifoldImage(Pos3(), np.eye(3)[None]), tmp_path / "g.json", "glyph_json")
    doc = json.loads((tmp_path / "g.json").read_text())
    assert doc["schema"] == "glyph/1"
    np.testing.assert_allclose(doc["glyphs"][0]["eigenvalues"], [1, 1, 1])
    c, s = np.cos(0.7), np.sin(0.7)
    R = np.array([[[1, 0, 0], [0, c, -s], [0, s, c]]])
    export_visual(ManifoldImage(SO3(), R), tmp_path / "r.json", "glyph_json")
    g = json.loads((tmp_path / "r.json").read_text())["glyphs"][0]
    assert g["angle"] == pytest.approx(0.7)
    np.testing.assert_allclose(g["axis"], [1, 0, 0], atol=1e-12)
    with pytest.raises(ValueError):
        export_visual(ManifoldImage(S1(), np.zeros(2)), tmp_path / "x.json", "glyph_json")
    with pytest.raises(ValueError):
        export_visual(ManifoldImage(S1(), np.zeros(2)), tmp_path / "x", "png")


def test_color_reference_points():
    white = rgb_to_lch(np.ones(3))
    assert white[0] == pytest.approx(100.0, abs=1e-9)
    assert white[1] < 1e-8 and white[2] == 0.0
    np.testing.assert_allclose(rgb_to_lch(np.zeros(3)), [0, 0, 0], atol=1e-12)
    # sRGB red under D65: L 53.24, C 104.55, h 40.0 degrees
    red = rgb_to_lch(np.array([1.0, 0, 0]))
    np.testing.assert_allclose(red[:2], [53.24, 104.55], atol=0.02)
    assert np.degrees(red[2]) == pytest.approx(40.0, abs=0.05)


def test_color_round_trip(rng):
    rgb = rng.uniform(0, 1, (1000, 3))
    back, clipped = lch_to_rgb(rgb_to_lch(rgb), return_clipped=True)
    assert np.max(np.abs(back - rgb)) <= 1e-6
    assert clipped == 0
    assert not LCh().check_points(rgb_to_lch(rgb)).any()


def test_out_of_gamut_is_clamped_and_counted():
    rgb, n = lch_to_rgb(np.array([[50.0, 150.0, 2.0], [50.0, 0.0, 0.0]]), return_clipped=True)
    assert n == 1
    assert ((rgb >= 0) & (rgb <= 1)).all()


def test_gray_hue_is_ignored():
    a = lch_to_rgb(np.array([40.0, 0.0, 0.0]))
    b = lch_to_rgb(np.array([40.0, 0.0, 2.5]))
    np.testing.assert_allclose(a, b, atol=1e-15)

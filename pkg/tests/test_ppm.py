import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from kisengine.ppm import PpmError, decode_ppm, encode_ppm


def test_decode_two_pixel_image():
    data = b"P6\n2 1\n255\n" + bytes([255, 0, 0, 0, 0, 255])
    px = decode_ppm(data)
    assert px.shape == (1, 2, 3)
    assert px[0, 0].tolist() == [255, 0, 0]
    assert px[0, 1].tolist() == [0, 0, 255]


def test_decode_truncated_payload():
    data = b"P6\n4 4\n255\n" + bytes(9)  # 3 pixels instead of 16
    with pytest.raises(PpmError, match="truncated"):
        decode_ppm(data)


def test_decode_generated_uniform_gray():
    img = np.full((64, 64, 3), 128, dtype=np.uint8)
    px = decode_ppm(encode_ppm(img))
    assert px.shape == (64, 64, 3)
    assert (px == 128).all()
    assert px.size == 64 * 64 * 3


def test_bad_magic():
    with pytest.raises(PpmError, match="magic"):
        decode_ppm(b"P5\n1 1\n255\n\x00")


def test_wrong_maxval():
    with pytest.raises(PpmError, match="maxval"):
        decode_ppm(b"P6\n1 1\n65535\n\x00\x00\x00\x00\x00\x00")


def test_header_comments_tolerated():
    data = b"P6\n# a comment\n2 2\n255\n" + bytes(12)
    assert decode_ppm(data).shape == (2, 2, 3)


@settings(max_examples=50, deadline=None)
@given(
    w=st.integers(1, 20),
    h=st.integers(1, 20),
    seed=st.integers(0, 2**31 - 1),
)
def test_roundtrip_random_images(w, h, seed):
    img = np.random.default_rng(seed).integers(0, 256, (h, w, 3), dtype=np.uint8)
    data = encode_ppm(img)
    decoded = decode_ppm(data)
    assert (decoded == img).all()
    # lossless both ways on canonical bytes
    assert encode_ppm(decoded) == data

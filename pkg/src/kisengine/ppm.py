"""Binary PPM (P6, maxval 255) decoding and encoding.

The on-disk keyframe format is deliberately minimal so corpora can be
generated and inspected without third-party image decoders.  The encoder
emits one canonical byte layout (``P6\\n<w> <h>\\n255\\n<payload>``); the
decoder additionally tolerates arbitrary header whitespace and ``#``
comments, as produced by common converters.
"""

from __future__ import annotations

import numpy as np


class PpmError(ValueError):
    """Raised for malformed PPM bytes."""


def _read_header_token(data: bytes, pos: int) -> tuple[bytes, int]:
    n = len(data)
    while pos < n:
        if data[pos : pos + 1].isspace():
            pos += 1
        elif data[pos : pos + 1] == b"#":
            while pos < n and data[pos] not in b"\r\n":
                pos += 1
        else:
            break
    if pos >= n:
        raise PpmError("truncated header")
    start = pos
    while pos < n and not data[pos : pos + 1].isspace() and data[pos : pos + 1] != b"#":
        pos += 1
    return data[start:pos], pos


def decode_ppm(data: bytes) -> np.ndarray:
    """Decode P6 bytes into an (h, w, 3) uint8 array. No color transform."""
    if data[:2] != b"P6":
        raise PpmError("bad magic: expected P6")
    pos = 2
    values = []
    for _ in range(3):
        token, pos = _read_header_token(data, pos)
        if not token.isdigit():
            raise PpmError(f"bad header token {token!r}")
        values.append(int(token))
    width, height, maxval = values
    if maxval != 255:
        raise PpmError(f"unsupported maxval {maxval} (only 255)")
    if width < 1 or height < 1:
        raise PpmError(f"bad dimensions {width}x{height}")
    # Exactly one whitespace byte separates the header from the payload.
    if pos >= len(data) or not data[pos : pos + 1].isspace():
        raise PpmError("missing payload separator")
    pos += 1
    expected = width * height * 3
    payload = data[pos : pos + expected]
    if len(payload) < expected:
        raise PpmError(
            f"truncated payload: expected {expected} bytes, got {len(payload)}"
        )
    pixels = np.frombuffer(payload, dtype=np.uint8).reshape(height, width, 3)
    return pixels.copy()


def encode_ppm(pixels: np.ndarray) -> bytes:
    """Encode an (h, w, 3) uint8 array into canonical P6 bytes."""
    arr = np.asarray(pixels, dtype=np.uint8)
    if arr.ndim != 3 or arr.shape[2] != 3:
        raise ValueError(f"expected (h, w, 3) array, got shape {arr.shape}")
    height, width = arr.shape[:2]
    header = b"P6\n%d %d\n255\n" % (width, height)
    return header + arr.tobytes()

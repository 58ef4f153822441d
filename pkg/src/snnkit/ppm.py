"""Binary PPM (P6) image IO, maxval 255 only.

Header parsing tolerates `#` comments and arbitrary whitespace, as the
format allows.  Anything that is not an 8-bit binary RGB PPM is rejected.
"""
from __future__ import annotations

import numpy as np


class PpmFormatError(ValueError):
    pass


def _tokens(data: bytes, count: int) -> tuple[list[bytes], int]:
    """First `count` header tokens and the offset one byte past the last."""
    toks: list[bytes] = []
    i = 0
    n = len(data)
    while len(toks) < count:
        while i < n and data[i:i + 1].isspace():
            i += 1
        if i < n and data[i:i + 1] == b"#":
            while i < n and data[i] not in (0x0A, 0x0D):
                i += 1
            continue
        start = i
        while i < n and not data[i:i + 1].isspace():
            i += 1
        if start == i:
            raise PpmFormatError("truncated header")
        toks.append(data[start:i])
    if i >= n:
        raise PpmFormatError("truncated file")
    return toks, i + 1  # exactly one whitespace byte after maxval


def load_ppm(path) -> np.ndarray:
    """Read a binary RGB image; returns (height, width, 3) uint8."""
    with open(path, "rb") as f:
        data = f.read()
    if not data.startswith(b"P6"):
        raise PpmFormatError("not a binary PPM (P6) file")
    toks, offset = _tokens(data, 4)
    try:
        width, height, maxval = int(toks[1]), int(toks[2]), int(toks[3])
    except ValueError:
        raise PpmFormatError("malformed header") from None
    if width < 1 or height < 1:
        raise PpmFormatError("image dimensions must be positive")
    if maxval != 255:
        raise PpmFormatError(f"only maxval 255 is supported, got {maxval}")
    need = width * height * 3
    body = data[offset:offset + need]
    if len(body) < need:
        raise PpmFormatError(f"pixel data truncated: need {need} bytes, got {len(body)}")
    return np.frombuffer(body, dtype=np.uint8).reshape(height, width, 3).copy()


def save_ppm(path, img: np.ndarray) -> None:
    a = np.asarray(img)
    if a.ndim != 3 or a.shape[2] != 3 or a.dtype != np.uint8:
        raise ValueError("expected a (h, w, 3) uint8 array")
    h, w = a.shape[:2]
    with open(path, "wb") as f:
        f.write(b"P6\n%d %d\n255\n" % (w, h))
        f.write(a.tobytes())

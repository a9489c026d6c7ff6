"""Binary 8-bit PGM (P5) and PPM (P6) reading and writing."""

from __future__ import annotations

import os

import numpy as np


class PNMError(ValueError):
    pass


def _tokens(data: bytes, count: int) -> tuple[list[bytes], int]:
    """Read ``count`` whitespace-separated header tokens, skipping comments."""
    out: list[bytes] = []
    pos = 0
    size = len(data)
    while len(out) < count:
        while pos < size and data[pos:pos + 1].isspace():
            pos += 1
        if pos >= size:
            raise PNMError("truncated header")
        if data[pos:pos + 1] == b"#":
            while pos < size and data[pos:pos + 1] not in (b"\n", b"\r"):
                pos += 1
            continue
        start = pos
        while pos < size and not data[pos:pos + 1].isspace() and data[pos:pos + 1] != b"#":
            pos += 1
        out.append(data[start:pos])
    # exactly one whitespace byte separates the header from the raster
    if pos >= size or not data[pos:pos + 1].isspace():
        raise PNMError("missing whitespace after maxval")
    return out, pos + 1


def decode_pnm(data: bytes) -> np.ndarray:
    if len(data) < 2:
        raise PNMError("file too short")
    magic = data[:2]
    if magic in (b"P1", b"P2", b"P3", b"P4"):
        raise PNMError(f"unsupported PNM variant {magic.decode()} (only binary P5/P6)")
    if magic not in (b"P5", b"P6"):
        raise PNMError(f"bad magic number {magic!r}")
    (w, h, maxval), offset = _tokens(data[2:], 3)
    try:
        width, height, maxv = int(w), int(h), int(maxval)
    except ValueError:
        raise PNMError("non-numeric header field") from None
    if width <= 0 or height <= 0:
        raise PNMError(f"bad dimensions {width} x {height}")
    if maxv != 255:
        raise PNMError(f"unsupported maxval {maxv} (only 255)")
    channels = 3 if magic == b"P6" else 1
    need = width * height * channels
    raster = data[2 + offset:]
    if len(raster) < need:
        raise PNMError(f"raster truncated: {len(raster)} of {need} bytes")
    arr = np.frombuffer(raster[:need], dtype=np.uint8)
    shape = (height, width, 3) if channels == 3 else (height, width)
    return arr.reshape(shape).copy()


def encode_pnm(image) -> bytes:
    image = np.asarray(image)
    if image.dtype != np.uint8:
        raise PNMError(f"expected uint8 pixels, got {image.dtype}")
    if image.ndim == 2:
        magic = b"P5"
    elif image.ndim == 3 and image.shape[2] == 3:
        magic = b"P6"
    else:
        raise PNMError(f"cannot encode image of shape {image.shape}")
    h, w = image.shape[:2]
    return magic + f"\n{w} {h}\n255\n".encode("ascii") + np.ascontiguousarray(image).tobytes()


def read_pnm(path: str | os.PathLike) -> np.ndarray:
    with open(path, "rb") as fh:
        return decode_pnm(fh.read())


def write_pnm(image, path: str | os.PathLike) -> None:
    data = encode_pnm(image)
    with open(path, "wb") as fh:
        fh.write(data)

"""Grayscale image helpers and NetPBM file I/O.

Only the two binary NetPBM flavors the toolchain needs are supported:
P5 (8-bit grayscale, used for plate frames) and P4 (1-bit, used for the
glyph template font). Writers always emit maxval 255 and no comments;
readers tolerate comment lines and arbitrary header whitespace.
"""

from __future__ import annotations

import numpy as np


def ensure_gray(img: np.ndarray, name: str = "image") -> np.ndarray:
    """Validate the uint8 grayscale convention; returns the array unchanged."""
    if not isinstance(img, np.ndarray) or img.ndim != 2:
        raise ValueError(f"{name} must be a 2-D array, got {type(img).__name__}")
    if img.dtype != np.uint8:
        raise ValueError(f"{name} must have dtype uint8, got {img.dtype}")
    if img.size == 0:
        raise ValueError(f"{name} must be non-empty")
    return img


def _read_header_tokens(data: bytes, count: int, offset: int) -> tuple[list[bytes], int]:
    # NetPBM headers are whitespace separated tokens; '#' starts a comment
    # that runs to end of line.
    tokens: list[bytes] = []
    i = offset
    while len(tokens) < count:
        if i >= len(data):
            raise ValueError("truncated NetPBM header")
        c = data[i : i + 1]
        if c == b"#":
            while i < len(data) and data[i : i + 1] != b"\n":
                i += 1
        elif c.isspace():
            i += 1
        else:
            j = i
            while j < len(data) and not data[j : j + 1].isspace():
                j += 1
            tokens.append(data[i:j])
            i = j
    # exactly one whitespace byte separates the header from raster data
    return tokens, i + 1


def write_pgm(path: str, img: np.ndarray) -> None:
    """Write a P5 (binary, maxval 255) grayscale file."""
    ensure_gray(img)
    h, w = img.shape
    with open(path, "wb") as fh:
        fh.write(b"P5\n%d %d\n255\n" % (w, h))
        fh.write(img.tobytes())


def read_pgm(path: str) -> np.ndarray:
    with open(path, "rb") as fh:
        data = fh.read()
    if not data.startswith(b"P5"):
        raise ValueError(f"{path}: not a binary PGM (P5) file")
    tokens, start = _read_header_tokens(data, 3, 2)
    w, h, maxval = (int(t) for t in tokens)
    if maxval != 255:
        raise ValueError(f"{path}: unsupported maxval {maxval}")
    raster = data[start : start + w * h]
    if len(raster) != w * h:
        raise ValueError(f"{path}: raster truncated ({len(raster)} of {w * h} bytes)")
    return np.frombuffer(raster, dtype=np.uint8).reshape(h, w).copy()


def write_pbm(path: str, bitmap: np.ndarray) -> None:
    """Write a P4 (binary) bitmap. True / nonzero means ink (black)."""
    if bitmap.ndim != 2:
        raise ValueError("bitmap must be 2-D")
    bits = (bitmap != 0).astype(np.uint8)
    h, w = bits.shape
    packed = np.packbits(bits, axis=1)  # MSB-first within each byte, per P4
    with open(path, "wb") as fh:
        fh.write(b"P4\n%d %d\n" % (w, h))
        fh.write(packed.tobytes())


def read_pbm(path: str) -> np.ndarray:
    """Read a P4 bitmap as a bool array, True = ink."""
    with open(path, "rb") as fh:
        data = fh.read()
    if not data.startswith(b"P4"):
        raise ValueError(f"{path}: not a binary PBM (P4) file")
    tokens, start = _read_header_tokens(data, 2, 2)
    w, h = (int(t) for t in tokens)
    row_bytes = (w + 7) // 8
    raster = data[start : start + row_bytes * h]
    if len(raster) != row_bytes * h:
        raise ValueError(f"{path}: raster truncated")
    rows = np.frombuffer(raster, dtype=np.uint8).reshape(h, row_bytes)
    return np.unpackbits(rows, axis=1)[:, :w].astype(bool)

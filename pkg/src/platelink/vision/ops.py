"""Classical pixel operations: brightness, Otsu threshold, Sobel, median.

All operations are pure functions on uint8 arrays and return new arrays.
"""

from __future__ import annotations

import numpy as np

from platelink.vision.image import ensure_gray


def adjust_brightness(img: np.ndarray, scale: float) -> np.ndarray:
    """Multiply intensities by ``scale``, round to nearest, clamp to [0, 255].

    scale must be > 0; e.g. pixel 100 at scale 2.0 becomes 200, pixel 200
    saturates at 255.
    """
    ensure_gray(img)
    if not (scale > 0):
        raise ValueError(f"scale must be > 0, got {scale}")
    out = np.rint(img.astype(np.float64) * scale)
    return np.clip(out, 0, 255).astype(np.uint8)


def threshold_otsu(img: np.ndarray) -> tuple[np.ndarray, int]:
    """Binarize by maximizing between-class variance over all 256 thresholds.

    Pixels <= t map to 0, pixels > t map to 255. Candidate thresholds that
    leave either class empty are skipped; among equal maxima the lowest
    threshold wins. A constant image has no valid candidate and thresholds
    at its own intensity (everything lands in the dark class).

    The argmax is computed in exact integer arithmetic: the between-class
    variance w0*w1*(mu0-mu1)^2 is proportional to (S0*n1 - S1*n0)^2/(n0*n1)
    with integer histogram moments, so candidates compare by cross
    multiplication with no floating point ties.
    """
    ensure_gray(img)
    hist = np.bincount(img.ravel(), minlength=256)
    n_total = int(hist.sum())
    s_total = int(np.dot(hist, np.arange(256, dtype=np.int64)))

    best_t = -1
    best_num = 0  # (S0*n1 - S1*n0)^2 as Python int
    best_den = 1  # n0*n1
    n0 = 0
    s0 = 0
    for t in range(256):
        n0 += int(hist[t])
        s0 += t * int(hist[t])
        n1 = n_total - n0
        if n0 == 0 or n1 == 0:
            continue
        s1 = s_total - s0
        num = (s0 * n1 - s1 * n0) ** 2
        den = n0 * n1
        if best_t < 0 or num * best_den > best_num * den:
            best_t, best_num, best_den = t, num, den
    if best_t < 0:
        best_t = int(img.flat[0])  # constant image
    return np.where(img <= best_t, 0, 255).astype(np.uint8), best_t


def detect_edges(img: np.ndarray) -> np.ndarray:
    """Gradient magnitude via 3x3 Sobel kernels, scaled to [0, 255].

    Border pixels are 0. The interior magnitude is scaled by its maximum,
    so a constant image comes back all zero.
    """
    ensure_gray(img)
    h, w = img.shape
    if h < 3 or w < 3:
        raise ValueError(f"image must be at least 3x3, got {w}x{h}")
    p = img.astype(np.float64)
    gx = (
        (p[:-2, 2:] + 2.0 * p[1:-1, 2:] + p[2:, 2:])
        - (p[:-2, :-2] + 2.0 * p[1:-1, :-2] + p[2:, :-2])
    )
    gy = (
        (p[2:, :-2] + 2.0 * p[2:, 1:-1] + p[2:, 2:])
        - (p[:-2, :-2] + 2.0 * p[:-2, 1:-1] + p[:-2, 2:])
    )
    mag = np.hypot(gx, gy)
    out = np.zeros((h, w), dtype=np.uint8)
    peak = mag.max()
    if peak > 0:
        out[1:-1, 1:-1] = np.rint(mag * (255.0 / peak)).astype(np.uint8)
    return out


# Comparator sequence of the standard 9-input median network; after all
# exchanges run, slot 4 holds the median.
_MEDIAN9_EXCHANGES = (
    (1, 2), (4, 5), (7, 8), (0, 1), (3, 4), (6, 7), (1, 2), (4, 5), (7, 8),
    (0, 3), (5, 8), (4, 7), (3, 6), (1, 4), (2, 5), (4, 7), (4, 2), (6, 4), (4, 2),
)


def denoise_median3(img: np.ndarray) -> np.ndarray:
    """3x3 median filter; border pixels are copied through unchanged."""
    ensure_gray(img)
    h, w = img.shape
    if h < 3 or w < 3:
        raise ValueError(f"image must be at least 3x3, got {w}x{h}")
    planes = [
        img[dy : dy + h - 2, dx : dx + w - 2].copy()
        for dy in range(3)
        for dx in range(3)
    ]
    for a, b in _MEDIAN9_EXCHANGES:
        lo = np.minimum(planes[a], planes[b])
        np.maximum(planes[a], planes[b], out=planes[b])
        planes[a] = lo
    out = img.copy()
    out[1:-1, 1:-1] = planes[4]
    return out

"""Synthetic plate frame rendering.

A frame is a 640x480 canvas with the six plate glyphs drawn dark on a
light background, degraded by an illumination profile: contrast is
compressed about mid-gray, the result is scaled by a brightness factor,
and Gaussian pixel noise is added before rounding and clamping to
[0, 255]. Rendering is fully determined by (text, profile, seed).
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from platelink import rng
from platelink.vision.font import TEMPLATE_H, TEMPLATE_W, TemplateSet, default_templates

CANVAS_W = 640
CANVAS_H = 480
# Glyphs render at 5x the template raster (80x120). Large glyphs keep the
# ink fraction of the frame high enough that Otsu's character/background
# split stays the variance maximizer under heavy noise; small glyphs make
# global thresholding collapse all at once instead of degrading gradually.
GLYPH_SCALE = 5
GLYPH_W = TEMPLATE_W * GLYPH_SCALE
GLYPH_H = TEMPLATE_H * GLYPH_SCALE
GLYPH_GAP = 24
BACKGROUND = 230
INK = 25


@dataclass(frozen=True)
class IlluminationProfile:
    """Capture conditions; these are tuning knobs, not physical units."""

    label: str
    brightness_scale: float
    contrast: float
    noise_sigma: float

    def __post_init__(self):
        if not (self.brightness_scale > 0):
            raise ValueError("brightness_scale must be > 0")
        if not (0 < self.contrast <= 1):
            raise ValueError("contrast must be in (0, 1]")
        if self.noise_sigma < 0:
            raise ValueError("noise_sigma must be >= 0")


# Calibrated presets. `optimal` clears the >= 0.90 recognition band with
# margin; `low_light` is tuned so recognition lands at least 0.10 below
# optimal, the shortfall coming from real pipeline failures (threshold
# drift, segment merges, template confusions), not an artificial cap.
# Brightness is the tuned knob: at 0.18 the mean-normalization step has to
# amplify the frame ~5x, which amplifies sensor noise with it and puts the
# thresholded glyphs in a gradual error regime (measured rate ~0.71-0.82
# over 300-plate corpora) instead of either reading perfectly or collapsing.
OPTIMAL = IlluminationProfile("optimal", brightness_scale=1.0, contrast=1.0, noise_sigma=4.0)
LOW_LIGHT = IlluminationProfile("low_light", brightness_scale=0.18, contrast=0.6, noise_sigma=13.0)

PRESETS = {p.label: p for p in (OPTIMAL, LOW_LIGHT)}


def render_plate(
    text: str,
    profile: IlluminationProfile = OPTIMAL,
    seed: int = 0,
    templates: TemplateSet | None = None,
) -> np.ndarray:
    """Render a six-glyph plate string to a uint8 frame."""
    if len(text) != 6 or any(c not in "0123456789ABCDEFGHIJKLMNOPQRSTUVWXYZ" for c in text):
        raise ValueError(f"plate text must be six glyphs from [A-Z0-9], got {text!r}")
    tset = templates if templates is not None else default_templates()

    canvas = np.full((CANVAS_H, CANVAS_W), float(BACKGROUND))
    total_w = 6 * GLYPH_W + 5 * GLYPH_GAP
    x = (CANVAS_W - total_w) // 2
    y = (CANVAS_H - GLYPH_H) // 2
    up = np.ones((GLYPH_SCALE, GLYPH_SCALE), dtype=bool)
    for ch in text:
        mask = np.kron(tset[ch].bitmap, up)
        block = canvas[y : y + GLYPH_H, x : x + GLYPH_W]
        block[mask] = float(INK)
        x += GLYPH_W + GLYPH_GAP

    canvas = 128.0 + (canvas - 128.0) * profile.contrast
    canvas *= profile.brightness_scale
    if profile.noise_sigma > 0:
        gen = rng.stream(seed)
        canvas += gen.normal(0.0, profile.noise_sigma, canvas.shape)
    return np.clip(np.rint(canvas), 0, 255).astype(np.uint8)

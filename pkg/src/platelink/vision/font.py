"""Glyph template font.

The package ships one 16x24 binary PBM per glyph (A-Z, 0-9) under
``platelink/vision/templates/``. The same bitmaps are used both to draw
synthetic plates and as the matching templates for recognition, which is
what makes noise-free recognition exact.
"""

from __future__ import annotations

import string
from dataclasses import dataclass
from functools import lru_cache
from importlib import resources
from pathlib import Path

import numpy as np

from platelink.vision.image import read_pbm, write_pbm

GLYPHS = string.digits + string.ascii_uppercase  # sorted ASCII order
TEMPLATE_W = 16
TEMPLATE_H = 24


@dataclass(frozen=True)
class CharTemplate:
    """One glyph bitmap; ``bitmap[row, col]`` True means ink."""

    glyph: str
    bitmap: np.ndarray

    def __post_init__(self):
        if len(self.glyph) != 1 or self.glyph not in GLYPHS:
            raise ValueError(f"glyph must be one of {GLYPHS!r}, got {self.glyph!r}")
        if self.bitmap.shape != (TEMPLATE_H, TEMPLATE_W) or self.bitmap.dtype != bool:
            raise ValueError("bitmap must be bool of shape (24, 16)")


class TemplateSet:
    """Immutable, score-ready collection of all 36 glyph templates.

    Glyphs are kept in ascending ASCII order; the matcher relies on that
    order to resolve score ties toward the lexicographically first glyph.
    """

    def __init__(self, templates: list[CharTemplate]):
        templates = sorted(templates, key=lambda t: t.glyph)
        got = "".join(t.glyph for t in templates)
        if got != GLYPHS:
            raise ValueError(f"expected glyphs {GLYPHS!r}, got {got!r}")
        self.templates = tuple(templates)
        self.glyphs = got
        flat = np.stack([t.bitmap.astype(np.float64).ravel() for t in templates])
        centered = flat - flat.mean(axis=1, keepdims=True)
        norms = np.sqrt((centered * centered).sum(axis=1))
        if (norms == 0).any():
            raise ValueError("a template has zero variance")
        self._centered = centered
        self._norms = norms

    def __len__(self) -> int:
        return len(self.templates)

    def __getitem__(self, glyph: str) -> CharTemplate:
        i = self.glyphs.find(glyph)
        if i < 0:
            raise KeyError(glyph)
        return self.templates[i]

    def scores(self, patch: np.ndarray) -> np.ndarray:
        """Normalized cross-correlation of a bool (24, 16) patch vs all glyphs.

        A patch with zero variance correlates with nothing; all scores 0.
        """
        v = patch.astype(np.float64).ravel()
        v -= v.mean()
        nv = np.sqrt((v * v).sum())
        if nv == 0.0:
            return np.zeros(len(self.templates))
        return (self._centered @ v) / (self._norms * nv)


def load_templates(directory: str | Path) -> TemplateSet:
    """Load ``<glyph>.pbm`` files for every glyph from a directory."""
    directory = Path(directory)
    templates = []
    for g in GLYPHS:
        path = directory / f"{g}.pbm"
        if not path.exists():
            raise FileNotFoundError(f"missing template {path}")
        templates.append(CharTemplate(g, read_pbm(str(path))))
    return TemplateSet(templates)


def export_templates(tset: TemplateSet, directory: str | Path) -> None:
    """Write the set back out as one PBM per glyph."""
    directory = Path(directory)
    directory.mkdir(parents=True, exist_ok=True)
    for t in tset.templates:
        write_pbm(str(directory / f"{t.glyph}.pbm"), t.bitmap)


@lru_cache(maxsize=1)
def default_templates() -> TemplateSet:
    """The font shipped with the package."""
    tpl_dir = resources.files("platelink.vision") / "templates"
    with resources.as_file(tpl_dir) as path:
        return load_templates(path)

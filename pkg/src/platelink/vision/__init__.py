"""Synthetic plate capture and classical template OCR.

Images are 2-D ``numpy.uint8`` arrays indexed ``[row, col]`` (so shape is
``(height, width)``), intensity 0 = black, 255 = white. Glyph ink is always
drawn dark on a light background.
"""

from platelink.vision.image import read_pbm, read_pgm, write_pbm, write_pgm
from platelink.vision.font import (
    GLYPHS,
    CharTemplate,
    TemplateSet,
    default_templates,
    load_templates,
)
from platelink.vision.render import IlluminationProfile, LOW_LIGHT, OPTIMAL, render_plate
from platelink.vision.ops import (
    adjust_brightness,
    denoise_median3,
    detect_edges,
    threshold_otsu,
)
from platelink.vision.segment import SegmentBox, segment_characters
from platelink.vision.ocr import (
    PLATE_RE,
    RecognitionResult,
    random_plate,
    recognize_char,
    recognize_plate,
    recognition_rate,
    validate_plate_text,
)

__all__ = [
    "read_pgm", "write_pgm", "read_pbm", "write_pbm",
    "GLYPHS", "CharTemplate", "TemplateSet", "default_templates", "load_templates",
    "IlluminationProfile", "OPTIMAL", "LOW_LIGHT", "render_plate",
    "adjust_brightness", "threshold_otsu", "detect_edges", "denoise_median3",
    "SegmentBox", "segment_characters",
    "PLATE_RE", "RecognitionResult", "recognize_char", "recognize_plate",
    "recognition_rate", "random_plate", "validate_plate_text",
]

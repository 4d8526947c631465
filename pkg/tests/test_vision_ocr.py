"""Template OCR: exact recovery, failure labeling, degradation order."""

import re

import numpy as np
import pytest

from platelink.vision.font import GLYPHS, default_templates
from platelink.vision.ocr import (
    PlateGrammarError,
    RecognitionResult,
    random_plate,
    recognize_char,
    recognize_plate,
    recognition_rate,
    validate_plate_text,
)
from platelink.vision.render import OPTIMAL, IlluminationProfile, render_plate

NOISELESS = IlluminationProfile("noiseless", 1.0, 1.0, 0.0)


def test_every_template_matches_itself_perfectly():
    tset = default_templates()
    for glyph in GLYPHS:
        bitmap = tset[glyph].bitmap
        region = np.where(bitmap, 0, 255).astype(np.uint8)  # ink drawn dark
        best, score = recognize_char(region)
        assert best == glyph
        assert score == pytest.approx(1.0, abs=1e-12)


def _covering_plates():
    """Plates that jointly exercise all 26 letters and 10 digits."""
    letters = "ABCDEFGHIJKLMNOPQRSTUVWXYZ" + "A"  # pad to a multiple of 3
    digits = "0123456789" + "90"
    plates = []
    for i in range(9):
        l3 = letters[3 * i : 3 * i + 3]
        d3 = digits[(3 * i) % 12 : (3 * i) % 12 + 3]
        plates.append(l3 + d3)
    return plates


def test_noiseless_full_alphabet_closure():
    """Every glyph recovered exactly from clean renders."""
    for text in _covering_plates():
        result = recognize_plate(render_plate(text, NOISELESS))
        assert result.text == text, f"{text} -> {result}"
        assert min(result.scores) > 0.99


def test_random_plate_grammar():
    gen = np.random.default_rng(1)
    pattern = re.compile(r"^[A-Z]{3}[0-9]{3}$")
    seen = {random_plate(gen) for _ in range(100)}
    assert all(pattern.match(p) for p in seen)
    assert len(seen) > 90  # draws are not degenerate


def test_validate_plate_text():
    assert validate_plate_text("QWE456") == "QWE456"
    with pytest.raises(PlateGrammarError) as exc:
        validate_plate_text("QW1456")
    assert exc.value.position == 2
    with pytest.raises(PlateGrammarError):
        validate_plate_text("QWE45")


def test_grammar_failure_keeps_scores():
    # six clean glyphs that cannot be a plate: letters where digits belong
    result = recognize_plate(render_plate("ABCDEF", NOISELESS))
    assert result.text is None
    assert result.failure == "grammar"
    assert len(result.scores) == 6


def test_segmentation_failure_on_empty_frame():
    result = recognize_plate(np.full((480, 640), 230, dtype=np.uint8))
    assert result.text is None
    assert result.failure == "segmentation"
    assert result.scores == ()


def test_recognition_result_ok():
    assert RecognitionResult("ABC123").ok
    assert not RecognitionResult(None, failure="grammar").ok


def test_recognition_rate_bands_small_corpus():
    from platelink.vision.render import LOW_LIGHT

    optimal = recognition_rate(60, OPTIMAL, seed=11)
    low = recognition_rate(60, LOW_LIGHT, seed=11)
    assert optimal >= 0.9
    assert low <= optimal - 0.1


def test_degradation_with_noise():
    """More sensor noise never helps, and enough of it breaks recognition."""
    dim = [
        IlluminationProfile("dim", 0.18, 0.6, sigma) for sigma in (0.0, 13.0, 40.0)
    ]
    rates = [recognition_rate(40, p, seed=3) for p in dim]
    assert rates[0] >= rates[1] >= rates[2]
    assert rates[0] > rates[2]
    assert rates[0] == 1.0  # noise-free low light still reads cleanly

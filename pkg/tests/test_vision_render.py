"""Synthetic frame generation."""

import numpy as np
import pytest

from platelink.vision.render import (
    CANVAS_H,
    CANVAS_W,
    LOW_LIGHT,
    OPTIMAL,
    PRESETS,
    IlluminationProfile,
    render_plate,
)


def test_canvas_geometry():
    frame = render_plate("ABC123")
    assert frame.shape == (CANVAS_H, CANVAS_W)
    assert frame.dtype == np.uint8


def test_render_is_deterministic_per_seed():
    a = render_plate("KLM455", OPTIMAL, seed=9)
    b = render_plate("KLM455", OPTIMAL, seed=9)
    assert np.array_equal(a, b)
    c = render_plate("KLM455", OPTIMAL, seed=10)
    assert not np.array_equal(a, c)


def test_noiseless_render_ignores_seed():
    quiet = IlluminationProfile("quiet", 1.0, 1.0, 0.0)
    a = render_plate("KLM455", quiet, seed=1)
    b = render_plate("KLM455", quiet, seed=2)
    assert np.array_equal(a, b)


def test_low_light_is_darker():
    bright = render_plate("ABC123", OPTIMAL, seed=0).mean()
    dark = render_plate("ABC123", LOW_LIGHT, seed=0).mean()
    assert dark < bright * 0.5


def test_text_validation():
    for bad in ("abc123", "ABC12", "ABC1234", "ABC12!"):
        with pytest.raises(ValueError):
            render_plate(bad)


def test_profile_validation():
    with pytest.raises(ValueError):
        IlluminationProfile("x", 0.0, 1.0, 1.0)
    with pytest.raises(ValueError):
        IlluminationProfile("x", 1.0, 1.5, 1.0)
    with pytest.raises(ValueError):
        IlluminationProfile("x", 1.0, 1.0, -1.0)


def test_presets_registered():
    assert PRESETS["optimal"] is OPTIMAL
    assert PRESETS["low_light"] is LOW_LIGHT

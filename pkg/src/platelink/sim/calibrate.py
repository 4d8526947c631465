"""Solve and verify the committed defaults.

Calibration covers four things: the channel closure (median RSSI equals
the sensitivity exactly at each environment's maximum range), the frame
loss fraction at the built-up operating point, the stage-mean solve that
lands mean capture-to-cloud latency on its target, and the illumination
presets' recognition bands. The output is the default scenario file.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, replace
from pathlib import Path

from .. import phy, rng
from ..vision.ocr import recognition_rate
from ..vision.render import PRESETS
from .engine import run_scenario
from .scenario import Scenario

LATENCY_TARGET_S = 3.2
LATENCY_SOLVE_TOL_S = 0.05
LOSS_PROBE_DISTANCE_M = 1200.0
LOSS_PROBE_EXPECTED = 0.078
OPTIMAL_RATE_FLOOR = 0.90
BAND_SEPARATION = 0.10


@dataclass(frozen=True)
class CalibrationOutcome:
    channels: dict[str, phy.ChannelModel]
    probe_loss_rate: float
    recognize_mean_s: float
    measured_latency_mean_s: float
    optimal_rate: float
    low_light_rate: float
    scenario: Scenario


def probe_loss_rate(
    environment: str = "urban",
    distance_m: float = LOSS_PROBE_DISTANCE_M,
    tx_power_dbm: float = phy.MAX_TX_POWER_DBM,
    n_trials: int = 100_000,
    seed: int = 0,
    anchors: phy.ChannelAnchors | None = None,
) -> float:
    """Fraction of frames lost over independent shadowing trials.

    Trial i draws from a counter-indexed stream keyed by (seed, trial),
    so any subset of trials reproduces the full run's per-trial outcomes.
    """
    if n_trials <= 0:
        raise ValueError("n_trials must be positive")
    channel = phy.calibrate_channel(environment, anchors)
    losses = 0
    for trial in range(n_trials):
        draw = float(rng.trial_stream(seed, rng.LOSS_PROBE, trial).standard_normal())
        if not phy.link_outcome(channel, distance_m, tx_power_dbm, draw).delivered:
            losses += 1
    return losses / n_trials


def _check_closure(channel: phy.ChannelModel, max_range_m: float, tx_power_dbm: float) -> None:
    median_rssi = tx_power_dbm - phy.path_loss_db(channel, max_range_m)
    if not math.isclose(median_rssi, phy.SENSITIVITY_DBM, abs_tol=1e-9):
        raise phy.CalibrationError(
            f"{channel.environment}: median RSSI at {max_range_m} m is "
            f"{median_rssi} dBm, expected {phy.SENSITIVITY_DBM}"
        )


def solve_latency(
    base: Scenario,
    target_s: float = LATENCY_TARGET_S,
    tol_s: float = LATENCY_SOLVE_TOL_S,
    max_iter: int = 6,
) -> tuple[Scenario, float]:
    """Adjust recognize_mean_s until the run's mean latency hits the target.

    Latency is a sum of the stage draws plus near-constant serial and air
    times, so the mean responds one-for-one to the recognition mean and a
    couple of corrections converge.
    """
    sc = base
    best: tuple[float, Scenario, float] | None = None
    for _ in range(max_iter):
        mean = run_scenario(sc).report.latency_mean_s
        if mean is None:
            raise phy.CalibrationError("no uploads; latency cannot be solved")
        err = abs(mean - target_s)
        if best is None or err < best[0]:
            best = (err, sc, mean)
        if err <= tol_s:
            return sc, mean
        adjusted = round(sc.timings.recognize_mean_s + (target_s - mean), 3)
        if adjusted <= 0:
            raise phy.CalibrationError(
                f"latency target {target_s} s needs recognize_mean_s {adjusted} <= 0"
            )
        sc = replace(sc, timings=replace(sc.timings, recognize_mean_s=adjusted))
    assert best is not None
    raise phy.CalibrationError(
        f"latency solve did not converge; best mean {best[2]:.3f} s with "
        f"recognize_mean_s={best[1].timings.recognize_mean_s}"
    )


def verify_illumination(seed: int = 0, corpus_size: int = 200) -> tuple[float, float]:
    """Measure the preset recognition rates and enforce the band contract."""
    optimal = recognition_rate(corpus_size, PRESETS["optimal"], seed)
    low = recognition_rate(corpus_size, PRESETS["low_light"], seed)
    if optimal < OPTIMAL_RATE_FLOOR:
        raise phy.CalibrationError(
            f"optimal preset rate {optimal:.3f} below {OPTIMAL_RATE_FLOOR}"
        )
    if low > optimal - BAND_SEPARATION:
        raise phy.CalibrationError(
            f"low_light rate {low:.3f} not {BAND_SEPARATION} under optimal {optimal:.3f}"
        )
    return optimal, low


def calibrate_all(
    out_path: str | Path | None = None,
    probe_trials: int = 100_000,
    probe_seed: int = 0,
    illumination_seed: int = 0,
    illumination_corpus: int = 200,
    base: Scenario | None = None,
) -> CalibrationOutcome:
    """Run every calibration step; optionally write the scenario file."""
    channels = {env: phy.calibrate_channel(env) for env in phy.DEFAULT_ANCHORS}
    for env, channel in channels.items():
        anchors = phy.DEFAULT_ANCHORS[env]
        _check_closure(channel, anchors.max_range_m, anchors.tx_power_dbm)

    loss = probe_loss_rate(n_trials=probe_trials, seed=probe_seed)

    sc = base if base is not None else Scenario()
    sc, measured = solve_latency(sc)
    optimal, low = verify_illumination(illumination_seed, illumination_corpus)

    outcome = CalibrationOutcome(
        channels=channels,
        probe_loss_rate=loss,
        recognize_mean_s=sc.timings.recognize_mean_s,
        measured_latency_mean_s=measured,
        optimal_rate=optimal,
        low_light_rate=low,
        scenario=sc,
    )
    if out_path is not None:
        Path(out_path).write_text(format_scenario_yaml(outcome), encoding="utf-8")
    return outcome


def format_scenario_yaml(outcome: CalibrationOutcome) -> str:
    """The default scenario file, annotated with how each value was fixed."""
    sc = outcome.scenario
    ill = sc.illumination
    radio = sc.radio
    t = sc.timings
    urban = outcome.channels["urban"]
    open_field = outcome.channels["open_field"]
    return f"""\
# Calibrated desk-scale defaults. Regenerate with `platelink calibrate`.
#
# Channel closure (median RSSI == {phy.SENSITIVITY_DBM:g} dBm at max range):
#   open_field: n={open_field.exponent:.4f}, sigma={open_field.shadowing_sigma_db:.4f} dB at {phy.OPEN_FIELD_RANGE_M:g} m
#   urban:      n={urban.exponent:.4f}, sigma={urban.shadowing_sigma_db:.4f} dB at {phy.URBAN_RANGE_M:g} m
# Frame loss probe at {LOSS_PROBE_DISTANCE_M:g} m urban: {outcome.probe_loss_rate:.4f} measured
# (target {LOSS_PROBE_EXPECTED}). Mean capture-to-cloud latency with the stage
# means below: {outcome.measured_latency_mean_s:.3f} s (target {LATENCY_TARGET_S}).
# Preset recognition rates: optimal {outcome.optimal_rate:.3f},
# low_light {outcome.low_light_rate:.3f}.

master_seed: {sc.master_seed}
n_vehicles: {sc.n_vehicles}
inter_arrival_s: {sc.inter_arrival_s}
distance_m: {sc.distance_m}
environment: {sc.environment}
tx_power_dbm: {sc.tx_power_dbm}

illumination:
  label: {ill.label}
  brightness_scale: {ill.brightness_scale}
  contrast: {ill.contrast}
  noise_sigma: {ill.noise_sigma}

radio:
  sf: {radio.sf}
  bw_hz: {radio.bw_hz}
  cr_denominator: {radio.cr_denominator}
  preamble_symbols: {radio.preamble_symbols}
  explicit_header: {str(radio.explicit_header).lower()}
  crc_on: {str(radio.crc_on).lower()}

stage_timings:
  capture_mean_s: {t.capture_mean_s}
  capture_sigma_s: {t.capture_sigma_s}
  # solved so the mean latency lands on {LATENCY_TARGET_S} s
  recognize_mean_s: {t.recognize_mean_s}
  recognize_sigma_s: {t.recognize_sigma_s}
  http_mean_s: {t.http_mean_s}
  http_sigma_s: {t.http_sigma_s}
  cooldown_s: {t.cooldown_s}

cloud:
  # no pacing on the desk; the public service's default is 15.0
  min_interval_s: {sc.cloud_min_interval_s}
"""

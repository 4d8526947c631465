"""Run configuration: a dataclass mirror of the YAML scenario files."""

from __future__ import annotations

from dataclasses import dataclass, field, replace
from importlib import resources
from pathlib import Path

import yaml

from .. import nodes, phy
from ..vision.render import PRESETS, IlluminationProfile

DEFAULT_SCENARIO_RESOURCE = "default_scenario.yaml"


class ScenarioError(ValueError):
    """A scenario file or mapping that cannot be turned into a run."""


@dataclass(frozen=True)
class Scenario:
    """Everything one end-to-end run depends on.

    The channel itself is not a field: it is solved from ``environment``
    by the link calibration, so scenarios stay portable across channel
    model revisions.
    """

    master_seed: int = 42
    n_vehicles: int = 1000
    inter_arrival_s: float = 6.0
    distance_m: float = 1200.0
    environment: str = "urban"
    tx_power_dbm: float = 22.0
    illumination: IlluminationProfile = field(
        default_factory=lambda: PRESETS["optimal"]
    )
    radio: phy.RadioParams = field(default_factory=phy.RadioParams)
    timings: nodes.StageTimings = field(default_factory=nodes.StageTimings)
    cloud_min_interval_s: float = 0.0

    def __post_init__(self):
        if self.n_vehicles < 0:
            raise ScenarioError(f"n_vehicles must be >= 0, got {self.n_vehicles}")
        if not self.inter_arrival_s > 0:
            raise ScenarioError(
                f"inter_arrival_s must be > 0, got {self.inter_arrival_s}"
            )
        if not self.distance_m >= 1.0:
            raise ScenarioError(f"distance_m must be >= 1, got {self.distance_m}")
        if not 0.0 <= self.tx_power_dbm <= phy.MAX_TX_POWER_DBM:
            raise ScenarioError(
                f"tx_power_dbm must be 0..{phy.MAX_TX_POWER_DBM}, got {self.tx_power_dbm}"
            )
        if self.cloud_min_interval_s < 0:
            raise ScenarioError(
                f"cloud_min_interval_s must be >= 0, got {self.cloud_min_interval_s}"
            )


_TOP_KEYS = {
    "master_seed",
    "n_vehicles",
    "inter_arrival_s",
    "distance_m",
    "environment",
    "tx_power_dbm",
    "illumination",
    "radio",
    "stage_timings",
    "cloud",
}


def _build(cls, mapping, what: str):
    if not isinstance(mapping, dict):
        raise ScenarioError(f"{what} must be a mapping, got {type(mapping).__name__}")
    try:
        return cls(**mapping)
    except (TypeError, ValueError) as exc:
        raise ScenarioError(f"bad {what} section: {exc}") from exc


def _illumination_from(value) -> IlluminationProfile:
    if isinstance(value, str):
        try:
            return PRESETS[value]
        except KeyError:
            raise ScenarioError(
                f"unknown illumination preset {value!r}; known: {sorted(PRESETS)}"
            ) from None
    return _build(IlluminationProfile, value, "illumination")


def scenario_from_dict(data: dict) -> Scenario:
    """Build a Scenario from a parsed YAML mapping; unknown keys are errors."""
    if not isinstance(data, dict):
        raise ScenarioError(f"scenario must be a mapping, got {type(data).__name__}")
    unknown = set(data) - _TOP_KEYS
    if unknown:
        raise ScenarioError(f"unknown scenario keys: {sorted(unknown)}")

    kwargs = {
        k: data[k]
        for k in (
            "master_seed",
            "n_vehicles",
            "inter_arrival_s",
            "distance_m",
            "environment",
            "tx_power_dbm",
        )
        if k in data
    }
    if "illumination" in data:
        kwargs["illumination"] = _illumination_from(data["illumination"])
    if "radio" in data:
        kwargs["radio"] = _build(phy.RadioParams, data["radio"], "radio")
    if "stage_timings" in data:
        kwargs["timings"] = _build(nodes.StageTimings, data["stage_timings"], "stage_timings")
    if "cloud" in data:
        cloud = data["cloud"]
        if not isinstance(cloud, dict) or set(cloud) - {"min_interval_s"}:
            raise ScenarioError("cloud section takes only min_interval_s")
        if "min_interval_s" in cloud:
            kwargs["cloud_min_interval_s"] = cloud["min_interval_s"]
    try:
        return Scenario(**kwargs)
    except (TypeError, ValueError) as exc:
        if isinstance(exc, ScenarioError):
            raise
        raise ScenarioError(str(exc)) from exc


def scenario_to_dict(scenario: Scenario) -> dict:
    """Plain nested mapping, the inverse of ``scenario_from_dict``."""
    ill = scenario.illumination
    radio = scenario.radio
    t = scenario.timings
    return {
        "master_seed": scenario.master_seed,
        "n_vehicles": scenario.n_vehicles,
        "inter_arrival_s": scenario.inter_arrival_s,
        "distance_m": scenario.distance_m,
        "environment": scenario.environment,
        "tx_power_dbm": scenario.tx_power_dbm,
        "illumination": {
            "label": ill.label,
            "brightness_scale": ill.brightness_scale,
            "contrast": ill.contrast,
            "noise_sigma": ill.noise_sigma,
        },
        "radio": {
            "sf": radio.sf,
            "bw_hz": radio.bw_hz,
            "cr_denominator": radio.cr_denominator,
            "preamble_symbols": radio.preamble_symbols,
            "explicit_header": radio.explicit_header,
            "crc_on": radio.crc_on,
        },
        "stage_timings": {
            "capture_mean_s": t.capture_mean_s,
            "capture_sigma_s": t.capture_sigma_s,
            "recognize_mean_s": t.recognize_mean_s,
            "recognize_sigma_s": t.recognize_sigma_s,
            "http_mean_s": t.http_mean_s,
            "http_sigma_s": t.http_sigma_s,
            "cooldown_s": t.cooldown_s,
        },
        "cloud": {"min_interval_s": scenario.cloud_min_interval_s},
    }


def load_scenario(path: str | Path) -> Scenario:
    text = Path(path).read_text(encoding="utf-8")
    try:
        data = yaml.safe_load(text)
    except yaml.YAMLError as exc:
        raise ScenarioError(f"cannot parse {path}: {exc}") from exc
    return scenario_from_dict(data)


def save_scenario(scenario: Scenario, path: str | Path) -> None:
    Path(path).write_text(
        yaml.safe_dump(scenario_to_dict(scenario), sort_keys=False),
        encoding="utf-8",
    )


def default_scenario(**overrides) -> Scenario:
    """The committed calibrated configuration, with optional field overrides."""
    ref = resources.files("platelink.sim") / "data" / DEFAULT_SCENARIO_RESOURCE
    scenario = scenario_from_dict(yaml.safe_load(ref.read_text(encoding="utf-8")))
    return replace(scenario, **overrides) if overrides else scenario

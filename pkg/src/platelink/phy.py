"""LoRa link arithmetic: air time, bitrate, path loss, energy.

The air-time model is the published CSS formula: a frame is the preamble
plus 4.25 sync symbols, then 8 mandatory payload symbols plus however
many interleaved blocks the payload needs, each block costing the coding
rate denominator in symbols. Propagation uses log-distance path loss
with log-normal shadowing; a frame is delivered iff its RSSI clears the
receiver sensitivity (ties deliver).
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from statistics import NormalDist

C_M_PER_S = 299_792_458.0
DEFAULT_FREQ_HZ = 433_000_000.0

SENSITIVITY_DBM = -138.0
MAX_TX_POWER_DBM = 22.0

# Free-space loss at the 1 m reference distance, 20*log10(4*pi*d*f/c)
# with d = 1 m and f = 433 MHz. Evaluates to 25.1775 dB.
PL0_DB = 20.0 * math.log10(4.0 * math.pi * DEFAULT_FREQ_HZ / C_M_PER_S)

# Default range anchors at +22 dBm where the median RSSI equals the
# sensitivity: 6 km line of sight, 3.8 km built-up. The urban loss anchor
# (fraction of frames under sensitivity at 1.2 km) sets the shadowing sigma.
OPEN_FIELD_RANGE_M = 6000.0
URBAN_RANGE_M = 3800.0
URBAN_LOSS_ANCHOR = (1200.0, 0.078)
OPEN_FIELD_SIGMA_DB = 2.0

VALID_BW_HZ = (125_000, 250_000, 500_000)


class CalibrationError(ValueError):
    """Channel anchors cannot be satisfied."""


@dataclass(frozen=True)
class RadioParams:
    """CSS modulation parameters.

    cr_denominator is the 4/x coding rate denominator (5..8).
    low_dr_optimize defaults to the usual rule: enabled iff the symbol
    time reaches 16 ms (SF11/SF12 at 125 kHz, SF12 at 250 kHz).
    """

    sf: int = 7
    bw_hz: int = 125_000
    cr_denominator: int = 6
    preamble_symbols: int = 8
    explicit_header: bool = True
    crc_on: bool = True
    low_dr_optimize: bool | None = None

    def __post_init__(self):
        if not 7 <= self.sf <= 12:
            raise ValueError(f"sf must be 7..12, got {self.sf}")
        if self.bw_hz not in VALID_BW_HZ:
            raise ValueError(f"bw_hz must be one of {VALID_BW_HZ}, got {self.bw_hz}")
        if not 5 <= self.cr_denominator <= 8:
            raise ValueError(f"cr_denominator must be 5..8, got {self.cr_denominator}")
        if self.preamble_symbols < 1:
            raise ValueError("preamble_symbols must be >= 1")

    @property
    def ldro(self) -> bool:
        if self.low_dr_optimize is not None:
            return self.low_dr_optimize
        return symbol_time(self) >= 0.016


DEFAULT_RADIO = RadioParams()


def symbol_time(radio: RadioParams) -> float:
    """One chirp: 2^sf / bw seconds."""
    return float(2**radio.sf) / radio.bw_hz


def bitrate(radio: RadioParams) -> float:
    """Nominal bit rate, sf * (bw / 2^sf) * (4 / cr_denominator) bit/s."""
    return radio.sf * (radio.bw_hz / float(2**radio.sf)) * (4.0 / radio.cr_denominator)


def time_on_air(radio: RadioParams, payload_octets: int) -> float:
    """Frame air time in seconds for a payload of 1..255 octets."""
    if not 1 <= payload_octets <= 255:
        raise ValueError(f"payload_octets must be 1..255, got {payload_octets}")
    t_sym = symbol_time(radio)
    de = 1 if radio.ldro else 0
    ih = 0 if radio.explicit_header else 1
    crc = 1 if radio.crc_on else 0
    num = 8 * payload_octets - 4 * radio.sf + 28 + 16 * crc - 20 * ih
    den = 4 * (radio.sf - 2 * de)
    blocks = -(-num // den)  # exact integer ceil
    payload_symbols = 8 + max(blocks * radio.cr_denominator, 0)
    return (radio.preamble_symbols + 4.25) * t_sym + payload_symbols * t_sym


@dataclass(frozen=True)
class ChannelModel:
    """Log-distance propagation with log-normal shadowing."""

    environment: str
    pl0_db: float
    exponent: float
    shadowing_sigma_db: float
    ref_distance_m: float = 1.0

    def __post_init__(self):
        if self.exponent <= 0:
            raise ValueError("exponent must be positive")
        if self.shadowing_sigma_db < 0:
            raise ValueError("shadowing_sigma_db must be >= 0")


@dataclass(frozen=True)
class LinkOutcome:
    rssi_dbm: float
    snr_db: float
    delivered: bool


def path_loss_db(channel: ChannelModel, distance_m: float) -> float:
    """Median path loss at a distance (>= the reference distance)."""
    if distance_m < channel.ref_distance_m:
        raise ValueError(
            f"distance {distance_m} m below reference {channel.ref_distance_m} m"
        )
    return channel.pl0_db + 10.0 * channel.exponent * math.log10(
        distance_m / channel.ref_distance_m
    )


def noise_floor_dbm(radio: RadioParams) -> float:
    # thermal floor + 6 dB receiver noise figure
    return -174.0 + 10.0 * math.log10(radio.bw_hz) + 6.0


def link_outcome(
    channel: ChannelModel,
    distance_m: float,
    tx_power_dbm: float,
    shadow_draw: float,
    radio: RadioParams = DEFAULT_RADIO,
    sensitivity_dbm: float = SENSITIVITY_DBM,
) -> LinkOutcome:
    """Resolve one frame. ``shadow_draw`` is a standard normal sample.

    rssi = tx_power - path_loss - shadow_draw * sigma; the frame is
    delivered iff rssi >= sensitivity (equality delivers).
    """
    if not 0.0 <= tx_power_dbm <= MAX_TX_POWER_DBM:
        raise ValueError(f"tx_power_dbm must be 0..{MAX_TX_POWER_DBM}, got {tx_power_dbm}")
    rssi = tx_power_dbm - path_loss_db(channel, distance_m) - shadow_draw * channel.shadowing_sigma_db
    return LinkOutcome(
        rssi_dbm=rssi,
        snr_db=rssi - noise_floor_dbm(radio),
        delivered=rssi >= sensitivity_dbm,
    )


@dataclass(frozen=True)
class ChannelAnchors:
    """Calibration inputs: where the link budget runs out, and for the
    built-up profile, an observed loss fraction closer in."""

    max_range_m: float
    tx_power_dbm: float = MAX_TX_POWER_DBM
    sensitivity_dbm: float = SENSITIVITY_DBM
    loss_anchor: tuple[float, float] | None = None  # (distance_m, loss fraction)
    sigma_db: float | None = None  # used when no loss anchor is given


DEFAULT_ANCHORS = {
    "open_field": ChannelAnchors(OPEN_FIELD_RANGE_M, sigma_db=OPEN_FIELD_SIGMA_DB),
    "urban": ChannelAnchors(URBAN_RANGE_M, loss_anchor=URBAN_LOSS_ANCHOR),
}


def calibrate_channel(environment: str, anchors: ChannelAnchors | None = None) -> ChannelModel:
    """Solve the channel so the anchors hold exactly.

    The exponent makes the median RSSI equal the sensitivity at max range:
    exponent = (tx_power - sensitivity - pl0) / (10 * log10(max_range)).
    With a loss anchor, sigma solves P[shadow > margin] = loss via the
    Gaussian tail at the anchor distance.
    """
    if anchors is None:
        try:
            anchors = DEFAULT_ANCHORS[environment]
        except KeyError:
            raise CalibrationError(
                f"no default anchors for {environment!r}; pass ChannelAnchors"
            ) from None
    budget = anchors.tx_power_dbm - anchors.sensitivity_dbm - PL0_DB
    if budget <= 0 or anchors.max_range_m <= 1.0:
        raise CalibrationError("anchors leave no budget beyond the reference distance")
    exponent = budget / (10.0 * math.log10(anchors.max_range_m))

    if anchors.loss_anchor is not None:
        d_anchor, loss = anchors.loss_anchor
        if not 0.0 < loss < 0.5:
            raise CalibrationError(f"loss anchor fraction must be in (0, 0.5), got {loss}")
        pl = PL0_DB + 10.0 * exponent * math.log10(d_anchor)
        margin = anchors.tx_power_dbm - pl - anchors.sensitivity_dbm
        if margin <= 0:
            raise CalibrationError(
                f"loss anchor at {d_anchor} m has non-positive margin {margin:.2f} dB"
            )
        sigma = margin / NormalDist().inv_cdf(1.0 - loss)
    else:
        sigma = anchors.sigma_db if anchors.sigma_db is not None else 0.0
    return ChannelModel(environment, PL0_DB, exponent, sigma)


@dataclass(frozen=True)
class EnergyProfile:
    """Supply currents in mA. The module pair covers the radio chip alone;
    the node pair covers the whole board."""

    module_tx_ma: float = 57.78
    module_rx_ma: float = 6.44
    node_tx_ma: float = 180.0
    node_rx_ma: float = 120.0
    node_standby_ma: float = 120.0


DEFAULT_ENERGY = EnergyProfile()


@dataclass(frozen=True)
class EnergyBudget:
    module_mah: float
    node_mah: float


def energy(
    profile: EnergyProfile,
    tx_time_s: float,
    rx_time_s: float = 0.0,
    standby_time_s: float = 0.0,
) -> EnergyBudget:
    """Charge drawn over a usage split, in mAh (linear in every duration)."""
    if min(tx_time_s, rx_time_s, standby_time_s) < 0:
        raise ValueError("durations must be >= 0")
    module = (profile.module_tx_ma * tx_time_s + profile.module_rx_ma * rx_time_s) / 3600.0
    node = (
        profile.node_tx_ma * tx_time_s
        + profile.node_rx_ma * rx_time_s
        + profile.node_standby_ma * standby_time_s
    ) / 3600.0
    return EnergyBudget(module_mah=module, node_mah=node)

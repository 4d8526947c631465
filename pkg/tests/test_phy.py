"""Link arithmetic against the independent oracle, plus channel closure."""

import math
from statistics import NormalDist

import pytest
from hypothesis import given, strategies as st

from platelink import phy
from toa_oracle import oracle_bitrate, oracle_ldro, oracle_time_on_air


def test_symbol_time():
    assert phy.symbol_time(phy.RadioParams(sf=7, bw_hz=125_000)) == 2**7 / 125_000
    assert phy.symbol_time(phy.RadioParams(sf=12, bw_hz=500_000)) == 2**12 / 500_000


@pytest.mark.parametrize(
    "sf,bw,cr,expected",
    [
        (7, 125_000, 5, 5468.75),
        (7, 125_000, 6, 4557.291666666666),
        (12, 125_000, 5, 292.96875),
    ],
)
def test_bitrate_reference_points(sf, bw, cr, expected):
    radio = phy.RadioParams(sf=sf, bw_hz=bw, cr_denominator=cr)
    assert phy.bitrate(radio) == pytest.approx(expected, rel=1e-12)
    assert phy.bitrate(radio) == pytest.approx(float(oracle_bitrate(sf, bw, cr)), rel=1e-12)


def test_low_dr_optimize_rule():
    cases = {
        (10, 125_000): False,
        (11, 125_000): True,
        (12, 125_000): True,
        (11, 250_000): False,
        (12, 250_000): True,
        (12, 500_000): False,
    }
    for (sf, bw), expected in cases.items():
        assert phy.RadioParams(sf=sf, bw_hz=bw).ldro is expected
        assert oracle_ldro(sf, bw) is expected


def test_time_on_air_reference_record():
    # 45-octet record at the default radio settings
    radio = phy.RadioParams(sf=7, bw_hz=125_000, cr_denominator=6)
    assert phy.time_on_air(radio, 45) == pytest.approx(0.106752, rel=1e-12)


@given(
    sf=st.integers(7, 12),
    bw=st.sampled_from([125_000, 250_000, 500_000]),
    cr=st.integers(5, 8),
    n=st.integers(1, 255),
    header=st.booleans(),
    crc=st.booleans(),
)
def test_time_on_air_matches_oracle(sf, bw, cr, n, header, crc):
    radio = phy.RadioParams(
        sf=sf, bw_hz=bw, cr_denominator=cr, explicit_header=header, crc_on=crc
    )
    ours = phy.time_on_air(radio, n)
    ref = float(oracle_time_on_air(sf, bw, cr, n, explicit_header=header, crc_on=crc))
    assert ours == pytest.approx(ref, rel=1e-9)


def test_radio_params_validation():
    with pytest.raises(ValueError):
        phy.RadioParams(sf=6)
    with pytest.raises(ValueError):
        phy.RadioParams(bw_hz=62_500)
    with pytest.raises(ValueError):
        phy.RadioParams(cr_denominator=9)


# --- propagation ----------------------------------------------------------


def test_free_space_intercept():
    # 20 log10(4 pi f / c) at 433 MHz, one meter reference
    expected = 20.0 * math.log10(4.0 * math.pi * 433e6 / 299_792_458.0)
    assert phy.PL0_DB == pytest.approx(expected, abs=1e-12)
    assert phy.PL0_DB == pytest.approx(25.1775, abs=5e-5)


def test_path_loss_monotone_and_guarded():
    ch = phy.calibrate_channel("urban")
    losses = [phy.path_loss_db(ch, d) for d in (1.0, 10.0, 100.0, 1000.0)]
    assert losses == sorted(losses)
    with pytest.raises(ValueError):
        phy.path_loss_db(ch, 0.5)


def test_closure_at_maximum_range():
    for env, rng_m in (("open_field", 6000.0), ("urban", 3800.0)):
        ch = phy.calibrate_channel(env)
        rssi = phy.MAX_TX_POWER_DBM - phy.path_loss_db(ch, rng_m)
        assert rssi == pytest.approx(phy.SENSITIVITY_DBM, abs=1e-9)


def test_urban_sigma_solves_loss_anchor():
    ch = phy.calibrate_channel("urban")
    dist, loss = phy.URBAN_LOSS_ANCHOR
    margin = phy.MAX_TX_POWER_DBM - phy.path_loss_db(ch, dist) - phy.SENSITIVITY_DBM
    tail = 1.0 - NormalDist().cdf(margin / ch.shadowing_sigma_db)
    assert tail == pytest.approx(loss, abs=1e-12)


def test_open_field_sigma_fixed():
    ch = phy.calibrate_channel("open_field")
    assert ch.shadowing_sigma_db == 2.0


def test_calibration_errors():
    with pytest.raises(phy.CalibrationError):
        phy.calibrate_channel("indoor")
    bad = phy.ChannelAnchors(3800.0, loss_anchor=(1200.0, 0.6))
    with pytest.raises(phy.CalibrationError):
        phy.calibrate_channel("urban", bad)


def test_delivery_boundary_inclusive():
    # exact-arithmetic channel: pl(10 m) = 110 dB, so a draw of 25 puts the
    # frame precisely on the sensitivity line
    ch = phy.ChannelModel("flat", pl0_db=100.0, exponent=1.0, shadowing_sigma_db=2.0)
    at_limit = phy.link_outcome(ch, 10.0, 22.0, 25.0)
    assert at_limit.rssi_dbm == phy.SENSITIVITY_DBM
    assert at_limit.delivered
    assert not phy.link_outcome(ch, 10.0, 22.0, 25.0000001).delivered
    assert phy.link_outcome(ch, 10.0, 22.0, 24.9999999).delivered


def test_link_outcome_validates_power():
    ch = phy.calibrate_channel("urban")
    with pytest.raises(ValueError):
        phy.link_outcome(ch, 100.0, 23.0, 0.0)
    with pytest.raises(ValueError):
        phy.link_outcome(ch, 100.0, -1.0, 0.0)


# --- energy ----------------------------------------------------------------


def test_energy_reference_values():
    module = phy.energy(phy.DEFAULT_ENERGY, tx_time_s=1.0).module_mah
    assert module == pytest.approx(57.78 / 3600.0, abs=1e-15)
    node = phy.energy(phy.DEFAULT_ENERGY, tx_time_s=1.0, standby_time_s=59.0).node_mah
    assert node == pytest.approx((180.0 + 120.0 * 59.0) / 3600.0, abs=1e-15)
    assert f"{node:.4f}" == "2.0167"


@given(
    a=st.floats(0, 1e4, allow_nan=False),
    b=st.floats(0, 1e4, allow_nan=False),
)
def test_energy_linear_in_time(a, b):
    ea = phy.energy(phy.DEFAULT_ENERGY, tx_time_s=a).module_mah
    eb = phy.energy(phy.DEFAULT_ENERGY, tx_time_s=b).module_mah
    together = phy.energy(phy.DEFAULT_ENERGY, tx_time_s=a + b).module_mah
    assert together == pytest.approx(ea + eb, rel=1e-9, abs=1e-15)


def test_energy_rejects_negative_time():
    with pytest.raises(ValueError):
        phy.energy(phy.DEFAULT_ENERGY, tx_time_s=-1.0)


def test_noise_floor():
    assert phy.noise_floor_dbm(phy.RadioParams(bw_hz=125_000)) == pytest.approx(
        -174.0 + 10.0 * math.log10(125_000) + 6.0
    )

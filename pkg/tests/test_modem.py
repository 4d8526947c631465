"""AT command grammar, register state, and the serial/radio boundary."""

import pytest

from platelink import modem


# --- parsing ------------------------------------------------------------


def test_parse_set_commands():
    assert modem.parse_at("AT+ADDRESS=7\r\n") == modem.SetAddress(7)
    assert modem.parse_at("AT+NETWORKID=3") == modem.SetNetworkId(3)
    assert modem.parse_at("AT+BAND=433000000") == modem.SetBand(433_000_000)


def test_parse_query():
    assert modem.parse_at("AT+ADDRESS?") == modem.Query("ADDRESS")
    assert modem.parse_at("AT+BAND?\r\n") == modem.Query("BAND")


def test_parse_send_payload_verbatim():
    payload = "Plate:ABC123, Link:img/a=b?c.jpg"
    line = f"AT+SEND=2,{len(payload)},{payload}"
    cmd = modem.parse_at(line)
    assert cmd == modem.Send(2, payload)
    # commas and equals signs inside the payload survive untouched
    assert cmd.payload == payload


def test_format_parse_round_trip():
    for cmd in (
        modem.SetAddress(1),
        modem.SetNetworkId(18),
        modem.SetBand(868_000_000),
        modem.Send(2, "hello world"),
        modem.Query("NETWORKID"),
    ):
        line = modem.format_at(cmd)
        assert line.endswith("\r\n")
        assert modem.parse_at(line) == cmd


@pytest.mark.parametrize(
    "line,code",
    [
        ("AT+FREQUENCY=1", modem.ERR_UNKNOWN_COMMAND),
        ("ATADDRESS=1", modem.ERR_UNKNOWN_COMMAND),
        ("AT+ADDRESS=1x", modem.ERR_BAD_INT),
        ("AT+SEND=2,٢,ab", modem.ERR_BAD_INT),  # non-ASCII digit
        ("AT+SEND=2,5,abcd", modem.ERR_LENGTH_MISMATCH),
        ("AT+SEND=2,3", modem.ERR_BAD_ARGS),
        ("AT+ADDRESS=", modem.ERR_BAD_INT),
    ],
)
def test_parse_errors(line, code):
    with pytest.raises(modem.AtParseError) as exc:
        modem.parse_at(line)
    assert exc.value.code == code


def test_error_codes_are_distinct():
    codes = {
        modem.ERR_UNKNOWN_COMMAND,
        modem.ERR_BAD_INT,
        modem.ERR_LENGTH_MISMATCH,
        modem.ERR_PAYLOAD_SIZE,
        modem.ERR_BAND_RANGE,
        modem.ERR_BAD_ARGS,
    }
    assert codes == {1, 2, 3, 4, 5, 6}


# --- register file ------------------------------------------------------


def test_apply_set_and_query():
    state = modem.ModemState()
    state, resp, req = modem.apply_command(state, modem.SetAddress(9))
    assert isinstance(resp, modem.Ok) and req is None
    assert state.address == 9
    _, resp, _ = modem.apply_command(state, modem.Query("ADDRESS"))
    assert resp == modem.Value("ADDRESS", 9)
    assert modem.format_response(resp) == "+ADDRESS=9\r\n"


def test_band_range_enforced():
    state = modem.ModemState()
    _, resp, _ = modem.apply_command(state, modem.SetBand(100_000_000))
    assert resp == modem.Error(modem.ERR_BAND_RANGE)
    _, resp, _ = modem.apply_command(state, modem.SetBand(970_000_000))
    assert resp == modem.Error(modem.ERR_BAND_RANGE)
    new, resp, _ = modem.apply_command(state, modem.SetBand(915_000_000))
    assert isinstance(resp, modem.Ok) and new.band_hz == 915_000_000


def test_send_produces_tx_request_with_registers():
    state = modem.ModemState(address=5, network_id=12, tx_power_dbm=17.0)
    state, resp, req = modem.apply_command(state, modem.Send(2, "abc"))
    assert isinstance(resp, modem.Ok)
    assert req.src == 5 and req.dest == 2 and req.network_id == 12
    assert req.payload == "abc" and req.tx_power_dbm == 17.0


def test_send_payload_size_limit():
    state = modem.ModemState()
    _, resp, req = modem.apply_command(state, modem.Send(2, "x" * 241))
    assert resp == modem.Error(modem.ERR_PAYLOAD_SIZE) and req is None
    _, resp, req = modem.apply_command(state, modem.Send(2, "x" * 240))
    assert isinstance(resp, modem.Ok) and req is not None


def test_handle_line_wraps_parse_errors():
    state = modem.ModemState()
    new_state, resp, req = modem.handle_line(state, "AT+NOPE=1")
    assert new_state == state and req is None
    assert resp == modem.Error(modem.ERR_UNKNOWN_COMMAND)


def test_format_response():
    assert modem.format_response(modem.Ok()) == "OK\r\n"
    assert modem.format_response(modem.Error(4)) == "+ERR=4\r\n"
    assert modem.format_response(modem.Value("BAND", "433000000")) == "+BAND=433000000\r\n"


# --- serial and receive paths --------------------------------------------


def test_uart_transfer_time():
    # 8N1: ten baud intervals per octet
    assert modem.uart_transfer_time(48) == pytest.approx(0.05)
    assert modem.uart_transfer_time(1) == pytest.approx(10 / 9600)


def test_deliver_receive_filters_and_rounds():
    state = modem.ModemState(address=2, network_id=3)
    rx = modem.RxEvent(
        src=1, dest=2, network_id=3, payload="hi", rssi_dbm=-97.4, snr_db=8.6
    )
    note = modem.deliver_receive(state, rx)
    assert note == modem.Received(src=1, length=2, payload="hi", rssi_dbm=-97, snr_db=9)
    assert modem.deliver_receive(state, modem.RxEvent(1, 9, 3, "hi", -97.4, 8.6)) is None
    assert modem.deliver_receive(state, modem.RxEvent(1, 2, 8, "hi", -97.4, 8.6)) is None


def test_received_notification_format():
    note = modem.Received(src=1, length=2, payload="hi", rssi_dbm=-121, snr_db=-4)
    assert modem.format_response(note) == "+RCV=1,2,hi,-121,-4\r\n"

"""AT command surface of the radio module.

Command lines look like ``AT+<NAME>=<ARGS>`` (set) or ``AT+<NAME>?``
(query), optionally CR/LF terminated. SEND argument order is
``<dest>,<length>,<payload>`` where the payload runs verbatim for
exactly <length> octets after the second comma, commas included.

Responses: ``OK``, ``+ERR=<code>``, ``+<NAME>=<value>`` for queries, and
``+RCV=<src>,<len>,<payload>,<rssi>,<snr>`` for received frames.

Error codes (artifact convention, pinned in tests):
1 unknown command, 2 malformed integer, 3 payload length mismatch,
4 payload size out of range, 5 band out of range, 6 malformed arguments.
"""

from __future__ import annotations

from dataclasses import dataclass, field, replace
from typing import Union

from platelink.phy import DEFAULT_RADIO, RadioParams

ERR_UNKNOWN_COMMAND = 1
ERR_BAD_INT = 2
ERR_LENGTH_MISMATCH = 3
ERR_PAYLOAD_SIZE = 4
ERR_BAND_RANGE = 5
ERR_BAD_ARGS = 6

MAX_PAYLOAD_OCTETS = 240
BAND_MIN_HZ = 150_000_000
BAND_MAX_HZ = 960_000_000

_QUERYABLE = ("ADDRESS", "NETWORKID", "BAND")
_SET_NAMES = ("ADDRESS", "NETWORKID", "BAND", "SEND")


class AtParseError(ValueError):
    def __init__(self, code: int, message: str):
        self.code = code
        super().__init__(message)


# --- commands ---------------------------------------------------------------


@dataclass(frozen=True)
class SetAddress:
    address: int


@dataclass(frozen=True)
class SetNetworkId:
    network_id: int


@dataclass(frozen=True)
class SetBand:
    freq_hz: int


@dataclass(frozen=True)
class Send:
    dest: int
    payload: str  # ASCII text; octet count == len(payload)


@dataclass(frozen=True)
class Query:
    name: str


AtCommand = Union[SetAddress, SetNetworkId, SetBand, Send, Query]


# --- responses --------------------------------------------------------------


@dataclass(frozen=True)
class Ok:
    pass


@dataclass(frozen=True)
class Error:
    code: int


@dataclass(frozen=True)
class Value:
    name: str
    value: int


@dataclass(frozen=True)
class Received:
    src: int
    length: int
    payload: str
    rssi_dbm: int
    snr_db: int


AtResponse = Union[Ok, Error, Value, Received]


@dataclass(frozen=True)
class UartConfig:
    """8N1 framing: each octet costs start + 8 data + stop = 10 bit times."""

    baud: int = 9600
    frame_bits: int = 10


@dataclass(frozen=True)
class TxRequest:
    """Radio transmission handed down by a SEND."""

    src: int
    dest: int
    network_id: int
    payload: str
    tx_power_dbm: float
    band_hz: int
    radio: RadioParams


@dataclass(frozen=True)
class RxEvent:
    """A frame arriving at the antenna, as the channel delivered it."""

    src: int
    dest: int
    network_id: int
    payload: str
    rssi_dbm: float
    snr_db: float


@dataclass(frozen=True)
class ModemState:
    address: int = 0
    network_id: int = 0
    band_hz: int = 433_000_000
    tx_power_dbm: float = 22.0
    radio: RadioParams = field(default_factory=lambda: DEFAULT_RADIO)

    def __post_init__(self):
        if not 0 <= self.address <= 0xFFFF:
            raise ValueError(f"address must fit 16 bits, got {self.address}")
        if not 0 <= self.network_id <= 0xFF:
            raise ValueError(f"network_id must fit 8 bits, got {self.network_id}")
        if not 0.0 <= self.tx_power_dbm <= 22.0:
            raise ValueError(f"tx_power_dbm must be 0..22, got {self.tx_power_dbm}")


# --- grammar ----------------------------------------------------------------


def _parse_int(text: str) -> int:
    if not text or not text.isascii() or not text.isdigit():
        raise AtParseError(ERR_BAD_INT, f"malformed integer {text!r}")
    return int(text)


def parse_at(line: str) -> AtCommand:
    """Parse one command line. Trailing CR/LF is stripped, nothing else."""
    line = line.rstrip("\r\n")
    if not line.startswith("AT+"):
        raise AtParseError(ERR_UNKNOWN_COMMAND, f"not an AT command: {line!r}")
    body = line[3:]

    if body.endswith("?") and "=" not in body:
        name = body[:-1]
        if name not in _QUERYABLE:
            raise AtParseError(ERR_UNKNOWN_COMMAND, f"unknown query {name!r}")
        return Query(name)

    name, sep, args = body.partition("=")
    if not sep:
        raise AtParseError(ERR_BAD_ARGS, f"missing '=' or '?' in {line!r}")
    if name not in _SET_NAMES:
        raise AtParseError(ERR_UNKNOWN_COMMAND, f"unknown command {name!r}")

    if name == "ADDRESS":
        return SetAddress(_parse_int(args))
    if name == "NETWORKID":
        return SetNetworkId(_parse_int(args))
    if name == "BAND":
        return SetBand(_parse_int(args))

    # SEND: <dest>,<length>,<payload> with the payload taken verbatim
    dest_s, sep1, rest = args.partition(",")
    length_s, sep2, payload = rest.partition(",")
    if not (sep1 and sep2):
        raise AtParseError(ERR_BAD_ARGS, "SEND needs <dest>,<length>,<payload>")
    dest = _parse_int(dest_s)
    length = _parse_int(length_s)
    if len(payload) != length:
        raise AtParseError(
            ERR_LENGTH_MISMATCH,
            f"declared {length} payload octets, got {len(payload)}",
        )
    if not payload.isascii():
        raise AtParseError(ERR_BAD_ARGS, "payload must be ASCII")
    return Send(dest, payload)


def format_at(cmd: AtCommand) -> str:
    """Command line for a structured command, CRLF terminated."""
    if isinstance(cmd, SetAddress):
        body = f"ADDRESS={cmd.address}"
    elif isinstance(cmd, SetNetworkId):
        body = f"NETWORKID={cmd.network_id}"
    elif isinstance(cmd, SetBand):
        body = f"BAND={cmd.freq_hz}"
    elif isinstance(cmd, Send):
        body = f"SEND={cmd.dest},{len(cmd.payload)},{cmd.payload}"
    elif isinstance(cmd, Query):
        body = f"{cmd.name}?"
    else:
        raise TypeError(f"not an AtCommand: {cmd!r}")
    return f"AT+{body}\r\n"


def format_response(resp: AtResponse) -> str:
    if isinstance(resp, Ok):
        return "OK\r\n"
    if isinstance(resp, Error):
        return f"+ERR={resp.code}\r\n"
    if isinstance(resp, Value):
        return f"+{resp.name}={resp.value}\r\n"
    if isinstance(resp, Received):
        return (
            f"+RCV={resp.src},{resp.length},{resp.payload},"
            f"{resp.rssi_dbm},{resp.snr_db}\r\n"
        )
    raise TypeError(f"not an AtResponse: {resp!r}")


# --- semantics --------------------------------------------------------------


def apply_command(
    state: ModemState, cmd: AtCommand
) -> tuple[ModemState, AtResponse, TxRequest | None]:
    """Apply one command; pure, returns the next state.

    Set commands update exactly one register and answer OK. SEND answers
    OK and emits a TxRequest. Queries answer the register's value. Range
    violations answer +ERR without touching the state.
    """
    if isinstance(cmd, SetAddress):
        if not 0 <= cmd.address <= 0xFFFF:
            return state, Error(ERR_BAD_ARGS), None
        return replace(state, address=cmd.address), Ok(), None
    if isinstance(cmd, SetNetworkId):
        if not 0 <= cmd.network_id <= 0xFF:
            return state, Error(ERR_BAD_ARGS), None
        return replace(state, network_id=cmd.network_id), Ok(), None
    if isinstance(cmd, SetBand):
        if not BAND_MIN_HZ <= cmd.freq_hz <= BAND_MAX_HZ:
            return state, Error(ERR_BAND_RANGE), None
        return replace(state, band_hz=cmd.freq_hz), Ok(), None
    if isinstance(cmd, Send):
        if not 1 <= len(cmd.payload) <= MAX_PAYLOAD_OCTETS:
            return state, Error(ERR_PAYLOAD_SIZE), None
        req = TxRequest(
            src=state.address,
            dest=cmd.dest,
            network_id=state.network_id,
            payload=cmd.payload,
            tx_power_dbm=state.tx_power_dbm,
            band_hz=state.band_hz,
            radio=state.radio,
        )
        return state, Ok(), req
    if isinstance(cmd, Query):
        value = {
            "ADDRESS": state.address,
            "NETWORKID": state.network_id,
            "BAND": state.band_hz,
        }[cmd.name]
        return state, Value(cmd.name, value), None
    raise TypeError(f"not an AtCommand: {cmd!r}")


def handle_line(
    state: ModemState, line: str
) -> tuple[ModemState, AtResponse, TxRequest | None]:
    """Feed one raw line; parse errors come back as +ERR responses."""
    try:
        cmd = parse_at(line)
    except AtParseError as exc:
        return state, Error(exc.code), None
    return apply_command(state, cmd)


def uart_transfer_time(octets: int, cfg: UartConfig = UartConfig()) -> float:
    """Seconds to shift ``octets`` across the serial line."""
    if octets < 0:
        raise ValueError("octets must be >= 0")
    return octets * cfg.frame_bits / cfg.baud


def deliver_receive(state: ModemState, rx: RxEvent) -> Received | None:
    """Receiver-side filter: frames for another address or network id are
    dropped silently; a match becomes a +RCV notification with the RSSI
    and SNR rounded to the nearest integer."""
    if rx.dest != state.address or rx.network_id != state.network_id:
        return None
    return Received(
        src=rx.src,
        length=len(rx.payload),
        payload=rx.payload,
        rssi_dbm=round(rx.rssi_dbm),
        snr_db=round(rx.snr_db),
    )

"""Transmitter and receiver node state machines.

Both machines are event driven and consume no wall time themselves: each
step returns how much simulated time the entered phase occupies, and the
harness schedules the completion event. Illegal event/phase pairs raise
immediately; the machines never guess.

Transmitter cycle:
    Idle -> Capturing -> Recognizing -> Encoding -> UartOut -> RadioTx
         -> Cooldown -> Idle
A failed recognition short-circuits Recognizing -> Cooldown and emits a
RecognitionFailed action instead of transmitting.

Receiver: Listening -> Decoding -> Displaying -> Uploading -> Listening,
with a decode failure falling straight back to Listening.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable, Union

import numpy as np

from platelink import codec, modem, phy
from platelink.vision.font import TemplateSet
from platelink.vision.ocr import RecognitionResult, recognize_plate
from platelink.vision.render import IlluminationProfile, OPTIMAL, render_plate

LCD_COLS = 16
LCD_ROWS = 2

TX_PHASES = ("Idle", "Capturing", "Recognizing", "Encoding", "UartOut", "RadioTx", "Cooldown")
RX_PHASES = ("Listening", "Decoding", "Displaying", "Uploading")

# Declared transition tables: (phase, event type name) -> next phase or a
# callable choosing it. Anything not listed is a contract violation.
TX_TRANSITIONS = {
    ("Idle", "Arrival"): "Capturing",
    ("Capturing", "PhaseDone"): "Recognizing",
    ("Recognizing", "PhaseDone"): ("Encoding", "Cooldown"),  # success / failure
    ("Encoding", "PhaseDone"): "UartOut",
    ("UartOut", "PhaseDone"): "RadioTx",
    ("RadioTx", "PhaseDone"): "Cooldown",
    ("Cooldown", "PhaseDone"): "Idle",
}


class IllegalTransition(RuntimeError):
    """An event arrived in a phase whose table has no entry for it."""


# --- events -----------------------------------------------------------------


@dataclass(frozen=True)
class Arrival:
    """A vehicle entered the camera's field of view."""

    plate_text: str
    vehicle_id: int
    render_seed: int


@dataclass(frozen=True)
class PhaseDone:
    """The running phase's time allowance elapsed."""


@dataclass(frozen=True)
class FrameReceived:
    """Radio frame up from the modem (already address-filtered)."""

    notification: modem.Received


TxEvent = Union[Arrival, PhaseDone]
RxEvent = Union[FrameReceived, PhaseDone]


# --- actions ----------------------------------------------------------------


@dataclass(frozen=True)
class RecognitionFailed:
    vehicle_id: int
    reason: str


@dataclass(frozen=True)
class Recognized:
    vehicle_id: int
    text: str
    exact: bool  # matches the ground-truth plate


@dataclass(frozen=True)
class UartWrite:
    line: str


@dataclass(frozen=True)
class RadioSend:
    request: modem.TxRequest
    vehicle_id: int


@dataclass(frozen=True)
class LcdFrame:
    line1: str
    line2: str


@dataclass(frozen=True)
class CloudUpload:
    record: codec.PlateRecord


@dataclass(frozen=True)
class DecodeFailed:
    reason: str


Action = Union[
    RecognitionFailed, Recognized, UartWrite, RadioSend, LcdFrame, CloudUpload, DecodeFailed
]


@dataclass
class StageTimings:
    """Durations of the timed stages, in seconds.

    capture/recognize/http are (mean, sigma) of a normal clipped at zero;
    cooldown is fixed. Defaults reproduce the calibrated 3.2 s end-to-end
    latency together with the serial and air times of a typical record.
    """

    capture_mean_s: float = 0.9
    capture_sigma_s: float = 0.10
    recognize_mean_s: float = 1.4
    recognize_sigma_s: float = 0.20
    http_mean_s: float = 0.73
    http_sigma_s: float = 0.10
    cooldown_s: float = 0.5

    def draw(self, gen: np.random.Generator) -> dict[str, float]:
        """Per-vehicle draws, one stream read per stage, order fixed."""
        return {
            "capture": max(0.0, gen.normal(self.capture_mean_s, self.capture_sigma_s)),
            "recognize": max(0.0, gen.normal(self.recognize_mean_s, self.recognize_sigma_s)),
            "http": max(0.0, gen.normal(self.http_mean_s, self.http_sigma_s)),
        }


def lcd_render(record: codec.PlateRecord) -> LcdFrame:
    """2x16 character display: plate on line 1, link head on line 2."""
    line1 = f"Plate: {record.plate}".ljust(LCD_COLS)[:LCD_COLS]
    line2 = record.link[:LCD_COLS].ljust(LCD_COLS)
    return LcdFrame(line1, line2)


def account_energy(
    trace: list[tuple[str, float]], profile: phy.EnergyProfile = phy.DEFAULT_ENERGY
) -> float:
    """Node charge in mAh for a (phase, seconds) trace.

    RadioTx is billed at the transmit current; every other phase draws the
    standby current. Durations must be non-negative.
    """
    tx_time = 0.0
    other = 0.0
    for phase, dt in trace:
        if dt < 0:
            raise ValueError(f"negative duration {dt} in phase {phase}")
        if phase == "RadioTx":
            tx_time += dt
        else:
            other += dt
    return phy.energy(profile, tx_time_s=tx_time, standby_time_s=other).node_mah


# --- transmitter ------------------------------------------------------------


@dataclass
class StepResult:
    actions: list[Action]
    elapsed: float  # simulated seconds the entered phase occupies


class TxNode:
    """Camera + OCR + serial-attached radio module."""

    def __init__(
        self,
        modem_state: modem.ModemState,
        dest_address: int,
        timings: StageTimings | None = None,
        illumination: IlluminationProfile = OPTIMAL,
        templates: TemplateSet | None = None,
        uart: modem.UartConfig | None = None,
        recognizer: Callable[[np.ndarray], RecognitionResult] | None = None,
    ):
        self.modem_state = modem_state
        self.dest_address = dest_address
        self.timings = timings or StageTimings()
        self.illumination = illumination
        self.templates = templates
        self.uart = uart or modem.UartConfig()
        self.recognizer = recognizer or (lambda img: recognize_plate(img, self.templates))
        self.phase = "Idle"
        self.seq = 0
        self.trace: list[tuple[str, float]] = []
        # per-vehicle working set
        self._vehicle_id = -1
        self._truth = ""
        self._render_seed = 0
        self._stage: dict[str, float] = {}
        self._frame: np.ndarray | None = None
        self._result: RecognitionResult | None = None
        self._at_line = ""

    def _enter(self, phase: str, elapsed: float, actions: list[Action]) -> StepResult:
        self.phase = phase
        if elapsed < 0:
            raise ValueError("phase duration must be >= 0")
        self.trace.append((phase, elapsed))
        return StepResult(actions=actions, elapsed=elapsed)

    def step(self, event: TxEvent, stage_gen: np.random.Generator | None = None) -> StepResult:
        """Advance one transition. ``stage_gen`` is consulted only on
        Arrival, to draw this vehicle's stage durations."""
        kind = type(event).__name__
        key = (self.phase, kind)
        if key not in TX_TRANSITIONS:
            raise IllegalTransition(f"event {kind} in phase {self.phase}")

        if self.phase == "Idle":
            assert isinstance(event, Arrival)
            self._vehicle_id = event.vehicle_id
            self._truth = event.plate_text
            self._render_seed = event.render_seed
            gen = stage_gen if stage_gen is not None else np.random.default_rng(event.render_seed)
            self._stage = self.timings.draw(gen)
            self._frame = None
            self._result = None
            return self._enter("Capturing", self._stage["capture"], [])

        if self.phase == "Capturing":
            self._frame = render_plate(
                self._truth, self.illumination, seed=self._render_seed, templates=self.templates
            )
            return self._enter("Recognizing", self._stage["recognize"], [])

        if self.phase == "Recognizing":
            assert self._frame is not None
            result = self.recognizer(self._frame)
            self._result = result
            if not result.ok:
                action = RecognitionFailed(self._vehicle_id, result.failure or "unknown")
                return self._enter("Cooldown", self.timings.cooldown_s, [action])
            return self._enter(
                "Encoding", 0.0, [Recognized(self._vehicle_id, result.text, result.text == self._truth)]
            )

        if self.phase == "Encoding":
            assert self._result is not None and self._result.text is not None
            self.seq += 1
            record = codec.PlateRecord(
                plate=self._result.text, link=f"img/{self._result.text}-{self.seq}.jpg"
            )
            wire = codec.encode_record(record)
            self._at_line = modem.format_at(modem.Send(self.dest_address, wire))
            uart_s = modem.uart_transfer_time(len(self._at_line), self.uart)
            return self._enter("UartOut", uart_s, [UartWrite(self._at_line)])

        if self.phase == "UartOut":
            state, resp, req = modem.handle_line(self.modem_state, self._at_line)
            self.modem_state = state
            if not isinstance(resp, modem.Ok) or req is None:
                # the machine only builds well-formed SENDs; anything else
                # is a programming error, not a runtime condition
                raise IllegalTransition(f"modem rejected SEND: {resp!r}")
            toa = phy.time_on_air(state.radio, len(req.payload))
            return self._enter("RadioTx", toa, [RadioSend(req, self._vehicle_id)])

        if self.phase == "RadioTx":
            return self._enter("Cooldown", self.timings.cooldown_s, [])

        # Cooldown
        return self._enter("Idle", 0.0, [])


# --- receiver ----------------------------------------------------------------


class RxNode:
    """Radio listener + display + cloud uplink.

    The radio keeps listening while an upload is in flight: frames decode
    and hit the display immediately, and their uploads queue FIFO, so
    back-to-back frames upload in arrival order. Decoding and displaying
    consume no simulated time; upload durations are the harness's job.
    """

    def __init__(self, modem_state: modem.ModemState):
        self.modem_state = modem_state
        self.phase = "Listening"
        self.lcd = LcdFrame(" " * LCD_COLS, " " * LCD_COLS)
        self.pending: list[codec.PlateRecord] = []

    def on_frame(self, notification: modem.Received) -> list[Action]:
        """Handle one +RCV notification; decode, display, queue the upload."""
        try:
            record = codec.decode_record(notification.payload)
        except codec.WireFormatError as exc:
            return [DecodeFailed(str(exc))]
        frame = lcd_render(record)
        self.lcd = frame
        self.pending.append(record)
        return [frame, CloudUpload(record)]

    def start_upload(self) -> codec.PlateRecord:
        """Begin the oldest queued upload; phase moves to Uploading."""
        if not self.pending:
            raise IllegalTransition("start_upload with no pending record")
        self.phase = "Uploading"
        return self.pending.pop(0)

    def upload_done(self) -> None:
        if self.phase != "Uploading":
            raise IllegalTransition(f"upload completion in phase {self.phase}")
        self.phase = "Listening"

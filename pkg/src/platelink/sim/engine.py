"""End-to-end event loop: arrivals through capture, recognition, framing,
serial transfer, air time, receive, display, and rate-limited upload."""

from __future__ import annotations

import json
from collections import deque
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .. import codec, modem, nodes, phy, rng
from ..cloud import ChannelUpdate, MockCloud, RateLimitedUploader, build_update_request
from ..vision.ocr import random_plate
from .events import EventQueue
from .metrics import MetricsReport
from .scenario import Scenario

TX_ADDRESS = 1
RX_ADDRESS = 2
NETWORK_ID = 3
BAND_HZ = 433_000_000


class EngineError(RuntimeError):
    """The run hit a state the model says cannot happen."""


@dataclass
class RunResult:
    scenario: Scenario
    channel: phy.ChannelModel
    report: MetricsReport
    log_lines: list[str]
    latencies_s: list[float]
    cloud: MockCloud


def write_run_log(result: RunResult, path: str | Path) -> None:
    """JSON-lines event log; one object per line, keys sorted."""
    Path(path).write_text("\n".join(result.log_lines) + "\n", encoding="utf-8")


def _init_modem(
    address: int,
    scenario: Scenario,
    emit,
    node_name: str,
) -> modem.ModemState:
    """Bring a module up the way the firmware does: one AT line per register."""
    state = modem.ModemState(radio=scenario.radio, tx_power_dbm=scenario.tx_power_dbm)
    for line in (
        f"AT+ADDRESS={address}",
        f"AT+NETWORKID={NETWORK_ID}",
        f"AT+BAND={BAND_HZ}",
    ):
        state, resp, _ = modem.handle_line(state, line)
        reply = modem.format_response(resp).rstrip("\r\n")
        emit(0.0, node_name, "at", line=line, response=reply)
        if not isinstance(resp, modem.Ok):
            raise EngineError(f"modem setup rejected {line!r}: {reply}")
    return state


def run_scenario(scenario: Scenario, anchors: phy.ChannelAnchors | None = None) -> RunResult:
    """Simulate one scenario from first arrival to last upload.

    Per-vehicle randomness comes from streams keyed by (master_seed,
    purpose, vehicle id), so any vehicle's draws are independent of how
    many other vehicles run alongside it.
    """
    seed = scenario.master_seed
    channel = phy.calibrate_channel(scenario.environment, anchors)
    cloud = MockCloud()
    limiter = RateLimitedUploader(scenario.cloud_min_interval_s)

    log: list[str] = []

    def emit(t: float, node: str, event: str, **fields) -> None:
        entry = {"t": round(t, 6), "node": node, "event": event}
        entry.update(fields)
        log.append(json.dumps(entry, sort_keys=True))

    tx_state = _init_modem(TX_ADDRESS, scenario, emit, "tx")
    rx_state = _init_modem(RX_ADDRESS, scenario, emit, "rx")
    tx = nodes.TxNode(
        tx_state,
        dest_address=RX_ADDRESS,
        timings=scenario.timings,
        illumination=scenario.illumination,
    )
    rx = nodes.RxNode(rx_state)

    queue = EventQueue()
    t_arrive = 0.0
    for v in range(scenario.n_vehicles):
        gap = float(rng.stream(seed, rng.ARRIVALS, v).exponential(scenario.inter_arrival_s))
        t_arrive += gap
        queue.push(t_arrive, ("arrival", v))

    counts = {
        "captures": 0,
        "recognitions": 0,
        "recognition_failures": 0,
        "exact_matches": 0,
        "tx_frames": 0,
        "delivered": 0,
        "decode_failures": 0,
        "uploaded": 0,
    }
    capture_start: dict[int, float] = {}
    http_s: dict[int, float] = {}
    latencies: list[float] = []
    wait_q: deque[tuple[int, str, int]] = deque()  # (vehicle, plate, render seed)
    upload_q: deque[tuple[int, codec.PlateRecord]] = deque()
    t_end = 0.0

    def begin_capture(v: int, truth: str, render_seed: int, t: float) -> None:
        counts["captures"] += 1
        capture_start[v] = t
        # Two generators opened on one stream read the same values, so the
        # engine can keep the http draw for the uplink side while the node
        # consumes an identical copy for its own stages.
        http_s[v] = scenario.timings.draw(rng.stream(seed, rng.STAGES, v))["http"]
        res = tx.step(
            nodes.Arrival(truth, v, render_seed),
            stage_gen=rng.stream(seed, rng.STAGES, v),
        )
        emit(t, "tx", "capture", vehicle=v, plate=truth)
        queue.push(t + res.elapsed, ("tx_phase",))

    def begin_upload(t: float) -> None:
        record = rx.start_upload()
        v, queued = upload_q.popleft()
        if queued != record:
            raise EngineError("upload bookkeeping out of step with the receiver")
        effective = limiter.submit(t)
        emit(t, "rx", "upload_start", vehicle=v, deferred_s=round(effective - t, 6))
        queue.push(effective + http_s[v], ("upload_done", v, record))

    def on_tx_actions(res: nodes.StepResult, t: float) -> None:
        for action in res.actions:
            if isinstance(action, nodes.Recognized):
                counts["recognitions"] += 1
                counts["exact_matches"] += int(action.exact)
                emit(t, "tx", "recognized", vehicle=action.vehicle_id,
                     text=action.text, exact=action.exact)
            elif isinstance(action, nodes.RecognitionFailed):
                counts["recognition_failures"] += 1
                emit(t, "tx", "recognition_failed", vehicle=action.vehicle_id,
                     reason=action.reason)
            elif isinstance(action, nodes.UartWrite):
                emit(t, "tx", "uart", octets=len(action.line),
                     line=action.line.rstrip("\r\n"))
            elif isinstance(action, nodes.RadioSend):
                counts["tx_frames"] += 1
                draw = float(rng.stream(seed, rng.SHADOW, action.vehicle_id).standard_normal())
                outcome = phy.link_outcome(
                    channel,
                    scenario.distance_m,
                    action.request.tx_power_dbm,
                    draw,
                    radio=action.request.radio,
                )
                emit(t, "tx", "tx", vehicle=action.vehicle_id,
                     octets=len(action.request.payload), toa_s=round(res.elapsed, 6),
                     rssi_dbm=round(outcome.rssi_dbm, 1), delivered=outcome.delivered)
                if outcome.delivered:
                    queue.push(t + res.elapsed, ("rx_frame", action.vehicle_id,
                                                 action.request, outcome))
            else:
                raise EngineError(f"unexpected transmitter action {action!r}")

    def on_rx_frame(v: int, request: modem.TxRequest, outcome: phy.LinkOutcome, t: float) -> None:
        counts["delivered"] += 1
        notification = modem.deliver_receive(
            rx.modem_state,
            modem.RxEvent(
                src=request.src,
                dest=request.dest,
                network_id=request.network_id,
                payload=request.payload,
                rssi_dbm=outcome.rssi_dbm,
                snr_db=outcome.snr_db,
            ),
        )
        if notification is None:
            raise EngineError("frame addressed to the receiver was filtered")
        emit(t, "rx", "rcv", src=notification.src, octets=notification.length,
             rssi_dbm=notification.rssi_dbm, snr_db=notification.snr_db)
        for action in rx.on_frame(notification):
            if isinstance(action, nodes.DecodeFailed):
                counts["decode_failures"] += 1
                emit(t, "rx", "decode_failed", reason=action.reason)
            elif isinstance(action, nodes.LcdFrame):
                emit(t, "rx", "lcd", line1=action.line1, line2=action.line2)
            elif isinstance(action, nodes.CloudUpload):
                upload_q.append((v, action.record))
                if rx.phase == "Listening":
                    begin_upload(t)
            else:
                raise EngineError(f"unexpected receiver action {action!r}")

    while queue:
        t, item = queue.pop()
        t_end = max(t_end, t)
        kind = item[0]
        if kind == "arrival":
            v = item[1]
            truth = random_plate(rng.stream(seed, rng.PLATES, v))
            render_seed = rng.substream_seed(seed, rng.VISION, v)
            emit(t, "tx", "arrival", vehicle=v, plate=truth)
            if tx.phase == "Idle":
                begin_capture(v, truth, render_seed, t)
            else:
                wait_q.append((v, truth, render_seed))
        elif kind == "tx_phase":
            res = tx.step(nodes.PhaseDone())
            on_tx_actions(res, t)
            if tx.phase == "Idle":
                if wait_q:
                    begin_capture(*wait_q.popleft(), t)
            else:
                queue.push(t + res.elapsed, ("tx_phase",))
        elif kind == "rx_frame":
            on_rx_frame(item[1], item[2], item[3], t)
        elif kind == "upload_done":
            v, record = item[1], item[2]
            body = cloud.handle_update(
                build_update_request(ChannelUpdate(cloud.write_key, record.plate, record.link)),
                clock_s=t,
            )
            if body == "0":
                raise EngineError(f"cloud dropped an update for vehicle {v}")
            counts["uploaded"] += 1
            latency = t - capture_start[v]
            latencies.append(latency)
            emit(t, "cloud", "uploaded", vehicle=v, entry_id=int(body),
                 latency_s=round(latency, 6))
            rx.upload_done()
            if rx.pending:
                begin_upload(t)
        else:
            raise EngineError(f"unknown event {kind!r}")

    report = _build_report(scenario, counts, latencies, tx, t_end)
    return RunResult(
        scenario=scenario,
        channel=channel,
        report=report,
        log_lines=log,
        latencies_s=latencies,
        cloud=cloud,
    )


def _build_report(
    scenario: Scenario,
    counts: dict[str, int],
    latencies: list[float],
    tx: nodes.TxNode,
    t_end: float,
) -> MetricsReport:
    captures = counts["captures"]
    tx_frames = counts["tx_frames"]
    if latencies:
        arr = np.asarray(latencies)
        lat_mean = float(arr.mean())
        lat_p50 = float(np.percentile(arr, 50))
        lat_p95 = float(np.percentile(arr, 95))
    else:
        lat_mean = lat_p50 = lat_p95 = None

    # Transmitter board: transmit current while the radio is on air,
    # standby for the rest of the run. Radio module alone: its own
    # transmit current on air, listen current for the receive module
    # across the whole run.
    air_s = sum(dt for phase, dt in tx.trace if phase == "RadioTx")
    node_mah = phy.energy(
        phy.DEFAULT_ENERGY, tx_time_s=air_s, standby_time_s=max(0.0, t_end - air_s)
    ).node_mah
    module_mah = phy.energy(phy.DEFAULT_ENERGY, tx_time_s=air_s, rx_time_s=t_end).module_mah

    report = MetricsReport(
        n_vehicles=scenario.n_vehicles,
        captures=captures,
        recognitions=counts["recognitions"],
        recognition_failures=counts["recognition_failures"],
        exact_matches=counts["exact_matches"],
        tx_frames=tx_frames,
        delivered=counts["delivered"],
        decode_failures=counts["decode_failures"],
        uploaded=counts["uploaded"],
        recognition_rate=(counts["exact_matches"] / captures) if captures else 0.0,
        packet_loss_rate=((tx_frames - counts["delivered"]) / tx_frames) if tx_frames else 0.0,
        latency_mean_s=lat_mean,
        latency_p50_s=lat_p50,
        latency_p95_s=lat_p95,
        duration_s=t_end,
        node_energy_mah=node_mah,
        module_energy_mah=module_mah,
    )
    report.check_conservation()
    return report

"""Run metrics: conservation checks, delimited output, text summary.

The CSV writer uses repr() for floats so a written value parses back to
the identical float; reports round-trip bit-exactly through the file.
"""

from __future__ import annotations

import csv
import dataclasses
from dataclasses import dataclass
from pathlib import Path
from typing import TYPE_CHECKING

if TYPE_CHECKING:
    from .engine import RunResult


class MetricsError(ValueError):
    """A report whose counters contradict each other."""


_COUNT_FIELDS = (
    "n_vehicles",
    "captures",
    "recognitions",
    "recognition_failures",
    "exact_matches",
    "tx_frames",
    "delivered",
    "decode_failures",
    "uploaded",
)
_FLOAT_FIELDS = (
    "recognition_rate",
    "packet_loss_rate",
    "latency_mean_s",
    "latency_p50_s",
    "latency_p95_s",
    "duration_s",
    "node_energy_mah",
    "module_energy_mah",
)
_OPTIONAL_FIELDS = {"latency_mean_s", "latency_p50_s", "latency_p95_s"}


@dataclass(frozen=True)
class MetricsReport:
    n_vehicles: int
    captures: int
    recognitions: int
    recognition_failures: int
    exact_matches: int
    tx_frames: int
    delivered: int
    decode_failures: int
    uploaded: int
    recognition_rate: float
    packet_loss_rate: float
    latency_mean_s: float | None
    latency_p50_s: float | None
    latency_p95_s: float | None
    duration_s: float
    node_energy_mah: float
    module_energy_mah: float

    def check_conservation(self) -> None:
        """Raise MetricsError unless every record is accounted for.

        In a drained run each capture either failed recognition or was
        framed and sent; each sent frame was delivered or lost on air;
        each delivered frame either failed decoding or reached the cloud.
        """
        checks = (
            ("captures split", self.captures,
             self.recognitions + self.recognition_failures),
            ("every recognition transmits", self.tx_frames, self.recognitions),
            ("delivered frames split", self.delivered,
             self.uploaded + self.decode_failures),
        )
        for name, left, right in checks:
            if left != right:
                raise MetricsError(f"{name}: {left} != {right}")
        ordered = (
            ("exact_matches", self.exact_matches, "recognitions", self.recognitions),
            ("recognitions", self.recognitions, "captures", self.captures),
            ("captures", self.captures, "n_vehicles", self.n_vehicles),
            ("delivered", self.delivered, "tx_frames", self.tx_frames),
        )
        for small_name, small, big_name, big in ordered:
            if small > big:
                raise MetricsError(f"{small_name} {small} > {big_name} {big}")
        if min(dataclasses.astuple(self)[:9]) < 0:
            raise MetricsError("negative counter")


def _format_value(value) -> str:
    if value is None:
        return ""
    if isinstance(value, bool):
        raise TypeError("no boolean metrics")
    if isinstance(value, int):
        return str(value)
    return repr(float(value))


def report_rows(report: MetricsReport) -> list[tuple[str, str]]:
    """(metric, value) rows in declaration order."""
    return [
        (f.name, _format_value(getattr(report, f.name)))
        for f in dataclasses.fields(report)
    ]


def write_report_csv(report: MetricsReport, path: str | Path) -> None:
    with open(path, "w", encoding="utf-8", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(["metric", "value"])
        writer.writerows(report_rows(report))


def read_report_csv(path: str | Path) -> MetricsReport:
    with open(path, encoding="utf-8", newline="") as fh:
        reader = csv.reader(fh)
        header = next(reader, None)
        if header != ["metric", "value"]:
            raise MetricsError(f"unexpected header {header!r}")
        raw = dict(reader)
    kwargs = {}
    for name in _COUNT_FIELDS:
        kwargs[name] = int(raw[name])
    for name in _FLOAT_FIELDS:
        text = raw[name]
        if text == "":
            if name not in _OPTIONAL_FIELDS:
                raise MetricsError(f"{name} must not be empty")
            kwargs[name] = None
        else:
            kwargs[name] = float(text)
    return MetricsReport(**kwargs)


def format_report_text(result: "RunResult") -> str:
    """Human-oriented fixed-layout summary of one run."""
    r = result.report
    sc = result.scenario
    ch = result.channel

    def pct(x: float) -> str:
        return f"{100.0 * x:.2f}%"

    def secs(x: float | None) -> str:
        return "n/a" if x is None else f"{x:.3f} s"

    lines = [
        "run summary",
        "===========",
        f"vehicles            {r.n_vehicles}",
        f"environment         {sc.environment} @ {sc.distance_m:g} m "
        f"(n={ch.exponent:.4f}, sigma={ch.shadowing_sigma_db:.4f} dB)",
        f"illumination        {sc.illumination.label}",
        f"radio               SF{sc.radio.sf}, {sc.radio.bw_hz // 1000} kHz, "
        f"CR 4/{sc.radio.cr_denominator}, {sc.tx_power_dbm:g} dBm",
        "",
        f"captures            {r.captures}",
        f"recognized          {r.recognitions} "
        f"({r.exact_matches} exact, rate {pct(r.recognition_rate)})",
        f"recognition failed  {r.recognition_failures}",
        f"frames sent         {r.tx_frames}",
        f"frames delivered    {r.delivered} (loss {pct(r.packet_loss_rate)})",
        f"decode failures     {r.decode_failures}",
        f"uploaded            {r.uploaded}",
        "",
        f"latency mean        {secs(r.latency_mean_s)}",
        f"latency p50         {secs(r.latency_p50_s)}",
        f"latency p95         {secs(r.latency_p95_s)}",
        f"run length          {secs(r.duration_s)}",
        f"node energy         {r.node_energy_mah:.4f} mAh",
        f"module energy       {r.module_energy_mah:.4f} mAh",
    ]
    return "\n".join(lines) + "\n"


def write_outputs(
    result: "RunResult", out_dir: str | Path, figures: bool = True
) -> list[Path]:
    """Write report.csv, report.txt, and run_log.jsonl under out_dir.

    With ``figures`` enabled, PNG charts land next to them. Returns the
    written paths.
    """
    from .engine import write_run_log  # local import to avoid a cycle

    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    paths = [out / "report.csv", out / "report.txt", out / "run_log.jsonl"]
    write_report_csv(result.report, paths[0])
    paths[1].write_text(format_report_text(result), encoding="utf-8")
    write_run_log(result, paths[2])
    if figures:
        from .figures import render_figures

        paths.extend(render_figures(result, out))
    return paths

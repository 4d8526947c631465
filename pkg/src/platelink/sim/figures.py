"""Optional report charts; written as PNG files next to the delimited output.

matplotlib runs on the file-only backend so the report path never needs a
display. Figures carry no reproducibility contract; the byte-stable
artifacts are the CSV, text, and log files.
"""

from __future__ import annotations

from pathlib import Path

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt  # noqa: E402  (backend must be pinned first)
import numpy as np

from .. import phy
from .engine import RunResult


def render_figures(result: RunResult, out_dir: str | Path) -> list[Path]:
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    written = [_link_budget(result, out / "link_budget.png")]
    if result.latencies_s:
        written.append(_latency_hist(result, out / "latency_hist.png"))
    return written


def _latency_hist(result: RunResult, path: Path) -> Path:
    lat = np.asarray(result.latencies_s)
    fig, ax = plt.subplots(figsize=(6, 4))
    ax.hist(lat, bins=40, color="#4878a8", edgecolor="white")
    mean = float(lat.mean())
    ax.axvline(mean, color="#b03a2e", linestyle="--", label=f"mean {mean:.2f} s")
    ax.set_xlabel("capture-to-cloud latency [s]")
    ax.set_ylabel("records")
    ax.set_title(f"latency over {lat.size} uploads")
    ax.legend()
    fig.tight_layout()
    fig.savefig(path, dpi=120)
    plt.close(fig)
    return path


def _link_budget(result: RunResult, path: Path) -> Path:
    ch = result.channel
    sc = result.scenario
    d = np.linspace(max(ch.ref_distance_m, 10.0), 1.25 * sc.distance_m + 5000.0, 400)
    median = sc.tx_power_dbm - (ch.pl0_db + 10.0 * ch.exponent * np.log10(d))
    sigma = ch.shadowing_sigma_db

    fig, ax = plt.subplots(figsize=(6, 4))
    ax.plot(d, median, color="#4878a8", label="median RSSI")
    if sigma > 0:
        ax.fill_between(d, median - sigma, median + sigma, color="#4878a8",
                        alpha=0.25, label="+/- 1 sigma shadowing")
    ax.axhline(phy.SENSITIVITY_DBM, color="#b03a2e", linestyle="--",
               label=f"sensitivity {phy.SENSITIVITY_DBM:g} dBm")
    ax.axvline(sc.distance_m, color="#666666", linestyle=":",
               label=f"operating point {sc.distance_m:g} m")
    ax.set_xscale("log")
    ax.set_xlabel("distance [m]")
    ax.set_ylabel("RSSI [dBm]")
    ax.set_title(f"{ch.environment} link budget (n={ch.exponent:.3f})")
    ax.legend(fontsize=8)
    fig.tight_layout()
    fig.savefig(path, dpi=120)
    plt.close(fig)
    return path

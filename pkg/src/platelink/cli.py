"""Command line front end.

Exit codes: 0 success, 1 domain error (bad wire text, failed calibration,
unreadable config), 2 usage error (argparse).
"""

from __future__ import annotations

import argparse
import sys
from pathlib import Path

from . import codec, phy, rng
from .sim.calibrate import calibrate_all, format_scenario_yaml
from .sim.engine import run_scenario
from .sim.metrics import format_report_text, write_outputs
from .sim.scenario import ScenarioError, default_scenario, load_scenario
from .vision.image import read_pgm, write_pgm
from .vision.ocr import random_plate, recognize_plate, validate_plate_text
from .vision.render import PRESETS, render_plate


def _cmd_render_plates(args) -> int:
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    profile = PRESETS[args.profile]
    for i in range(args.count):
        if args.text is not None:
            text = validate_plate_text(args.text)
            render_seed = rng.substream_seed(args.seed, rng.VISION, i)
        else:
            text = random_plate(rng.stream(args.seed, rng.PLATES, i))
            render_seed = rng.substream_seed(args.seed, rng.VISION, i)
        frame = render_plate(text, profile, seed=render_seed)
        path = out / f"plate_{i:03d}_{text}.pgm"
        write_pgm(path, frame)
        print(path)
    return 0


def _cmd_recognize(args) -> int:
    failures = 0
    for name in args.images:
        img = read_pgm(name)
        result = recognize_plate(img)
        if result.text is not None:
            print(f"{name}: {result.text}")
        else:
            failures += 1
            print(f"{name}: failed ({result.failure})")
    return 1 if failures and args.strict else 0


def _cmd_encode(args) -> int:
    print(codec.encode_record(codec.PlateRecord(args.plate, args.link)))
    return 0


def _cmd_decode(args) -> int:
    record = codec.decode_record(args.wire)
    print(f"plate={record.plate}")
    print(f"link={record.link}")
    return 0


def _cmd_toa(args) -> int:
    radio = phy.RadioParams(
        sf=args.sf,
        bw_hz=args.bw,
        cr_denominator=args.cr,
        preamble_symbols=args.preamble,
        explicit_header=not args.implicit_header,
        crc_on=not args.no_crc,
    )
    print(f"symbol_time_s={phy.symbol_time(radio)!r}")
    print(f"bitrate_bps={phy.bitrate(radio)!r}")
    print(f"time_on_air_s={phy.time_on_air(radio, args.payload_octets)!r}")
    return 0


def _cmd_simulate(args) -> int:
    if args.config is not None:
        scenario = load_scenario(args.config)
    else:
        scenario = default_scenario()
    overrides = {}
    if args.seed is not None:
        overrides["master_seed"] = args.seed
    if args.vehicles is not None:
        overrides["n_vehicles"] = args.vehicles
    if overrides:
        import dataclasses

        scenario = dataclasses.replace(scenario, **overrides)
    result = run_scenario(scenario)
    sys.stdout.write(format_report_text(result))
    if args.out is not None:
        for path in write_outputs(result, args.out, figures=not args.no_figures):
            print(f"wrote {path}")
    return 0


def _cmd_calibrate(args) -> int:
    outcome = calibrate_all(
        out_path=args.out,
        probe_trials=args.probe_trials,
        probe_seed=args.seed,
        illumination_seed=args.seed,
    )
    if args.out is None:
        sys.stdout.write(format_scenario_yaml(outcome))
    else:
        print(f"wrote {args.out}")
    print(
        f"probe_loss={outcome.probe_loss_rate:.4f} "
        f"latency_mean={outcome.measured_latency_mean_s:.3f}s "
        f"optimal={outcome.optimal_rate:.3f} low_light={outcome.low_light_rate:.3f}",
        file=sys.stderr,
    )
    return 0


def _cmd_serve(args) -> int:
    from .cloud import MockCloud, make_server

    cloud = MockCloud(feed_log_path=args.feed_log)
    server = make_server(cloud, args.host, args.port)
    host, port = server.server_address[:2]
    print(f"listening on http://{host}:{port} (channel {cloud.channel_id}, "
          f"write key {cloud.write_key!r}); Ctrl-C stops")
    try:
        server.serve_forever()
    except KeyboardInterrupt:
        pass
    finally:
        server.server_close()
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="platelink",
        description="Plate capture, framing, link, and cloud path on one desk.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("render-plates", help="write synthetic plate frames as PGM")
    p.add_argument("--count", type=int, default=1)
    p.add_argument("--out", required=True, help="output directory")
    p.add_argument("--profile", choices=sorted(PRESETS), default="optimal")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--text", default=None, help="fixed plate text instead of random")
    p.set_defaults(func=_cmd_render_plates)

    p = sub.add_parser("recognize", help="run the OCR pipeline over PGM frames")
    p.add_argument("images", nargs="+")
    p.add_argument("--strict", action="store_true",
                   help="exit 1 if any frame fails to recognize")
    p.set_defaults(func=_cmd_recognize)

    p = sub.add_parser("encode", help="frame a plate and link as wire text")
    p.add_argument("plate")
    p.add_argument("link")
    p.set_defaults(func=_cmd_encode)

    p = sub.add_parser("decode", help="parse wire text back into fields")
    p.add_argument("wire")
    p.set_defaults(func=_cmd_decode)

    p = sub.add_parser("toa", help="symbol time, bitrate, and frame air time")
    p.add_argument("--sf", type=int, default=7)
    p.add_argument("--bw", type=int, default=125_000)
    p.add_argument("--cr", type=int, default=6, help="coding rate denominator (4/x)")
    p.add_argument("--preamble", type=int, default=8)
    p.add_argument("--payload-octets", type=int, default=45)
    p.add_argument("--implicit-header", action="store_true")
    p.add_argument("--no-crc", action="store_true")
    p.set_defaults(func=_cmd_toa)

    p = sub.add_parser("simulate", help="run a scenario end to end")
    p.add_argument("--config", default=None, help="scenario YAML (default: built-in)")
    p.add_argument("--out", default=None, help="directory for report files")
    p.add_argument("--no-figures", action="store_true",
                   help="skip PNG charts in the report directory")
    p.add_argument("--seed", type=int, default=None, help="override master_seed")
    p.add_argument("--vehicles", type=int, default=None, help="override n_vehicles")
    p.set_defaults(func=_cmd_simulate)

    p = sub.add_parser("calibrate", help="solve and verify the default scenario")
    p.add_argument("--out", default=None, help="write the scenario YAML here")
    p.add_argument("--probe-trials", type=int, default=100_000)
    p.add_argument("--seed", type=int, default=0)
    p.set_defaults(func=_cmd_calibrate)

    p = sub.add_parser("serve-mock-cloud", help="HTTP front end for the mock cloud")
    p.add_argument("--host", default="127.0.0.1")
    p.add_argument("--port", type=int, default=8000)
    p.add_argument("--feed-log", default=None, help="append accepted updates here")
    p.set_defaults(func=_cmd_serve)

    return parser


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except (
        codec.WireFormatError,
        ScenarioError,
        phy.CalibrationError,
        ValueError,
        OSError,
    ) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())

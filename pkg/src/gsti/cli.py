"""Command-line interface: ``gsti score|psnr|eval|hist``.

Exit status is 0 on success, 2 on usage errors and 1 when the inputs
cannot be processed.
"""

from __future__ import annotations

import argparse
import json
import sys

from .bandpass import build_haar_packet, coefficient_histogram, temporal_filter_stack
from .evaluation import eval_report, format_report, psnr_video, read_records
from .indices import GstiConfig, score_pipeline
from .video_io import (LumaVideo, VideoFormatError, as_fps, load_raw_yuv, read_y4m,
                       spatial_downsample)

DEFAULTS = GstiConfig()


class UsageError(Exception):
    pass


def _fps_arg(text):
    try:
        return as_fps(text)
    except (ValueError, ZeroDivisionError):
        raise argparse.ArgumentTypeError(f"invalid frame rate {text!r}")


def _add_video_args(p, names):
    for name in names:
        p.add_argument(f"--{name}", required=True, metavar="PATH",
                       help=f"{name} video (.y4m, or raw planar with --width/--height)")
        p.add_argument(f"--{name}-fps", type=_fps_arg, metavar="FPS",
                       help=f"{name} frame rate (required for raw input, overrides Y4M)")
    p.add_argument("--width", type=int)
    p.add_argument("--height", type=int)
    p.add_argument("--pix-fmt", default="yuv420p", choices=("yuv420p", "gray8"))


def _add_model_args(p):
    p.add_argument("--levels", type=int, default=DEFAULTS.levels,
                   help="Haar packet depth (default %(default)s)")
    p.add_argument("--block", type=int, default=DEFAULTS.block,
                   help="entropy block side in pixels (default %(default)s)")
    p.add_argument("--noise-var", type=float, default=DEFAULTS.noise_var,
                   help="neural noise variance (default %(default)s)")
    p.add_argument("--downsample", type=int, default=DEFAULTS.downsample,
                   help="spatial downsampling factor (default %(default)s)")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="gsti", description="GSTI video quality tools")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("score", help="GSTI score of a distorted video against a reference")
    _add_video_args(p, ("ref", "dist"))
    _add_model_args(p)
    p.add_argument("--subband", type=int, default=1,
                   help="subband reported as primary_score (default %(default)s)")
    p.add_argument("--threads", type=int, default=1)
    p.add_argument("--out", default="-", help="JSON report path ('-' for stdout)")
    p.add_argument("--verbose", action="store_true", help="include per-frame traces")

    p = sub.add_parser("psnr", help="frame-averaged PSNR after frame duplication")
    _add_video_args(p, ("ref", "dist"))

    p = sub.add_parser("eval", help="correlate predicted scores with MOS from a CSV")
    p.add_argument("csv", help="video_id,fps,predicted,subjective[,content_id]")
    p.add_argument("--out", help="also write the report as JSON")

    p = sub.add_parser("hist", help="histogram of temporal subband coefficients")
    p.add_argument("video")
    p.add_argument("--video-fps", type=_fps_arg, metavar="FPS")
    p.add_argument("--width", type=int)
    p.add_argument("--height", type=int)
    p.add_argument("--pix-fmt", default="yuv420p", choices=("yuv420p", "gray8"))
    p.add_argument("--levels", type=int, default=DEFAULTS.levels)
    p.add_argument("--downsample", type=int, default=DEFAULTS.downsample)
    p.add_argument("--subband", type=int, default=1)
    p.add_argument("--bins", type=int, default=101)
    p.add_argument("--range", type=float, nargs=2, metavar=("LO", "HI"))
    p.add_argument("--out", default="-")
    return parser


def _load(path, fps, args) -> LumaVideo:
    if str(path).lower().endswith(".y4m"):
        video = read_y4m(path)
        return video if fps is None else LumaVideo(video.frames, fps)
    if args.width is None or args.height is None:
        raise UsageError(f"raw input {path}: --width and --height are required")
    if fps is None:
        raise UsageError(f"raw input {path}: a frame rate flag is required")
    return load_raw_yuv(path, args.width, args.height, fps, args.pix_fmt)


def _emit(text, out):
    if out in (None, "-"):
        sys.stdout.write(text)
    else:
        with open(out, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(text)


def cmd_score(args):
    ref = _load(args.ref, args.ref_fps, args)
    dist = _load(args.dist, args.dist_fps, args)
    n_bands = 2 ** args.levels - 1
    if not 1 <= args.subband <= n_bands:
        raise UsageError(f"--subband must be in 1..{n_bands}")
    config = GstiConfig(levels=args.levels, block=args.block, noise_var=args.noise_var,
                        downsample=args.downsample, workers=args.threads)
    report = score_pipeline(ref, dist, config)
    report.primary_subband = args.subband
    text = json.dumps(report.to_dict(verbose=args.verbose), indent=2) + "\n"
    _emit(text, args.out)
    if args.out != "-":
        print(f"{report.primary_score!r}")
    return 0


def cmd_psnr(args):
    ref = _load(args.ref, args.ref_fps, args)
    dist = _load(args.dist, args.dist_fps, args)
    print(f"{psnr_video(ref, dist):.6f}")
    return 0


def cmd_eval(args):
    try:
        records = read_records(args.csv)
    except (KeyError, ValueError) as exc:
        if "header" in str(exc):
            raise UsageError(str(exc))
        raise
    report = eval_report(records)
    print(format_report(report))
    if args.out:
        _emit(json.dumps(report, indent=2) + "\n", args.out)
    return 0


def cmd_hist(args):
    video = _load(args.video, args.video_fps, args)
    bank = build_haar_packet(args.levels)
    if not 1 <= args.subband <= len(bank):
        raise UsageError(f"--subband must be in 1..{len(bank)}")
    video = spatial_downsample(video, args.downsample)
    coeffs = temporal_filter_stack(video.frames, bank[args.subband])
    centers, freq = coefficient_histogram(coeffs, args.bins, args.range)
    lines = ["bin_center,frequency"]
    lines.extend(f"{c!r},{f!r}" for c, f in zip(centers.tolist(), freq.tolist()))
    _emit("\n".join(lines) + "\n", args.out)
    return 0


COMMANDS = {"score": cmd_score, "psnr": cmd_psnr, "eval": cmd_eval, "hist": cmd_hist}


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return exc.code
    try:
        return COMMANDS[args.command](args)
    except UsageError as exc:
        parser.print_usage(sys.stderr)
        print(f"gsti {args.command}: error: {exc}", file=sys.stderr)
        return 2
    except (VideoFormatError, ValueError, OSError) as exc:
        print(f"gsti {args.command}: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())

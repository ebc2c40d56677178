"""Command-line interface.

Commands wire the pipeline end to end:

  simulate     HR image -> degraded LR frames + manifest
  register     LR frames -> per-frame shift estimates (CSV)
  reconstruct  LR frames -> fused + deblurred HR image
  evaluate     reference vs test images -> PSNR/MSSIM CSV
  bench        per-stage wall times over repeated runs (CSV)

Exit codes: 0 success, 2 validation error, 3 I/O error, 4 numeric or
low-confidence error.
"""

from __future__ import annotations

import argparse
import statistics
import sys
import time
from pathlib import Path

from .degrade import LRFrame, simulate_sequence
from .errors import NumericError, ValidationError
from .fuse import build_grid, interpolate_hr
from .deblur import wiener_filter
from .manifest import (
    RunManifest,
    default_manifest,
    parse_shift_list,
    read_manifest,
    serialize_manifest,
    with_overrides,
)
from .metrics import QualityReport, evaluate_pair
from .pgm import read_pgm, write_pgm
from .register import RegistrationParams, register_sequence

EXIT_OK = 0
EXIT_VALIDATION = 2
EXIT_IO = 3
EXIT_NUMERIC = 4


def _add_manifest_options(p: argparse.ArgumentParser) -> None:
    p.add_argument("--manifest", type=Path, default=None,
                   help="manifest file (defaults to the built-in four-frame preset)")
    p.add_argument("--seed", type=int, default=None, help="override the manifest seed")
    p.add_argument("--mu", type=float, default=None, help="override the fusion mu")
    p.add_argument("--m", dest="m_exp", type=float, default=None,
                   help="override the fusion exponent m")
    p.add_argument("--nsr", type=float, default=None,
                   help="override the Wiener noise-to-signal ratio")


def _add_registration_options(p: argparse.ArgumentParser) -> None:
    p.add_argument("--mode", choices=("estimate", "oracle", "injected"), default=None,
                   help="override the manifest registration mode")
    p.add_argument("--shifts", type=str, default=None,
                   help="injected shift list 'dx,dy;dx,dy;...'")
    p.add_argument("--allow-low-confidence", action="store_true",
                   help="keep low-confidence shift estimates instead of failing")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="gradsr",
        description="Multi-frame super-resolution via gradient-adaptive interpolation",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("simulate", help="degrade an HR image into LR frames")
    p.add_argument("hr_image", type=Path, help="input HR image (PGM)")
    p.add_argument("--out", type=Path, default=Path("."), help="output directory")
    _add_manifest_options(p)
    p.set_defaults(func=cmd_simulate)

    p = sub.add_parser("register", help="estimate per-frame shifts")
    p.add_argument("frames", type=Path, nargs="+", help="LR frame files (reference first)")
    _add_manifest_options(p)
    _add_registration_options(p)
    p.set_defaults(func=cmd_register)

    p = sub.add_parser("reconstruct", help="fuse LR frames into an HR image")
    p.add_argument("frames", type=Path, nargs="+", help="LR frame files (reference first)")
    p.add_argument("--out", type=Path, default=Path("."), help="output directory")
    p.add_argument("--threads", type=int, default=1, help="fusion worker threads")
    _add_manifest_options(p)
    _add_registration_options(p)
    p.set_defaults(func=cmd_reconstruct)

    p = sub.add_parser("evaluate", help="PSNR/MSSIM of test images against a reference")
    p.add_argument("reference", type=Path)
    p.add_argument("tests", type=Path, nargs="+")
    p.add_argument("--border-exclude", type=int, default=0,
                   help="pixels trimmed from each side before PSNR")
    p.set_defaults(func=cmd_evaluate)

    p = sub.add_parser("bench", help="per-stage wall times")
    p.add_argument("hr_image", type=Path)
    p.add_argument("--repetitions", type=int, default=3)
    p.add_argument("--threads", type=int, default=1)
    _add_manifest_options(p)
    _add_registration_options(p)
    p.set_defaults(func=cmd_bench)

    return parser


def _resolve_manifest(args) -> RunManifest:
    m = read_manifest(args.manifest) if args.manifest else default_manifest()
    overrides = {
        "seed": getattr(args, "seed", None),
        "mu": getattr(args, "mu", None),
        "m": getattr(args, "m_exp", None),
        "nsr": getattr(args, "nsr", None),
        "registration_mode": getattr(args, "mode", None),
    }
    shifts = getattr(args, "shifts", None)
    if shifts is not None:
        overrides["injected_shifts"] = parse_shift_list(shifts)
    return with_overrides(m, **overrides)


def _resolve_shifts(m: RunManifest, frames: list[LRFrame], allow_low_confidence: bool):
    if m.registration_mode == "oracle":
        if len(m.frames) != len(frames):
            raise ValidationError(
                f"frames: manifest declares {len(m.frames)} frames but "
                f"{len(frames)} were given"
            )
        oracle = [
            LRFrame(f.image, spec.shift, spec.bsnr_db)
            for f, spec in zip(frames, m.frames)
        ]
        return register_sequence(oracle, mode="oracle")
    if m.registration_mode == "injected":
        return register_sequence(frames, mode="injected", injected=m.injected_shifts)
    return register_sequence(
        frames,
        mode="estimate",
        params=RegistrationParams(),
        allow_low_confidence=allow_low_confidence,
    )


def cmd_simulate(args) -> int:
    m = _resolve_manifest(args)
    hr = read_pgm(args.hr_image)
    frames = simulate_sequence(hr, m.degradation_config())
    out_dir = Path(args.out)
    out_dir.mkdir(parents=True, exist_ok=True)
    m = with_overrides(m, input_path=str(args.hr_image), output_dir=str(out_dir))
    for k, frame in enumerate(frames):
        path = out_dir / f"frame_{k:03d}.pgm"
        write_pgm(path, frame.image)
        print(f"wrote {path}")
    manifest_path = out_dir / "manifest.txt"
    manifest_path.write_text(serialize_manifest(m), encoding="ascii")
    print(f"wrote {manifest_path}")
    return EXIT_OK


def _load_frames(paths, m: RunManifest) -> list[LRFrame]:
    frames = []
    for k, path in enumerate(paths):
        bsnr = m.frames[k].bsnr_db if k < len(m.frames) else None
        frames.append(LRFrame(read_pgm(path), (0.0, 0.0), bsnr))
    return frames


def cmd_register(args) -> int:
    # unlike reconstruct, plain `register` is an estimation utility: the
    # manifest's mode only applies when requested explicitly
    m = _resolve_manifest(args)
    if args.mode is None:
        m = with_overrides(m, registration_mode="estimate")
    frames = _load_frames(args.frames, m)
    shifts = _resolve_shifts(m, frames, args.allow_low_confidence)
    print("frame,dx,dy")
    for k, s in enumerate(shifts):
        print(f"{k},{s.dx:.6f},{s.dy:.6f}")
    return EXIT_OK


def cmd_reconstruct(args) -> int:
    m = _resolve_manifest(args)
    frames = _load_frames(args.frames, m)

    t0 = time.perf_counter()
    shifts = _resolve_shifts(m, frames, args.allow_low_confidence)
    t1 = time.perf_counter()
    grid = build_grid([f.image for f in frames], shifts, m.ratio, m.gradient_mode)
    fused = interpolate_hr(grid, m.ratio, m.fusion_params(), threads=args.threads)
    t2 = time.perf_counter()
    restored = wiener_filter(fused, m.wiener_params())
    t3 = time.perf_counter()

    out_dir = Path(args.out)
    out_dir.mkdir(parents=True, exist_ok=True)
    out_path = out_dir / "sr.pgm"
    write_pgm(out_path, restored)
    print(f"register: {(t1 - t0) * 1e3:.3f} ms")
    print(f"fuse: {(t2 - t1) * 1e3:.3f} ms")
    print(f"deblur: {(t3 - t2) * 1e3:.3f} ms")
    print(f"wrote {out_path}")
    return EXIT_OK


def cmd_evaluate(args) -> int:
    reference = read_pgm(args.reference)
    rows = []
    for test_path in args.tests:
        try:
            test = read_pgm(test_path)
        except ValidationError as err:
            raise ValidationError(f"{test_path}: {err}") from err
        try:
            rows.append(
                evaluate_pair(reference, test, args.reference.stem, test_path.stem,
                              border_exclude=args.border_exclude)
            )
        except ValidationError as err:
            raise ValidationError(f"{test_path}: {err}") from err
    sys.stdout.write(QualityReport(tuple(rows)).to_csv())
    return EXIT_OK


def cmd_bench(args) -> int:
    if args.repetitions < 1:
        raise ValidationError(f"repetitions: must be >= 1, got {args.repetitions}")
    m = _resolve_manifest(args)
    hr = read_pgm(args.hr_image)
    stages = {"simulate": [], "register": [], "fuse": [], "deblur": []}
    for _ in range(args.repetitions):
        t0 = time.perf_counter()
        frames = simulate_sequence(hr, m.degradation_config())
        t1 = time.perf_counter()
        shifts = _resolve_shifts(m, frames, args.allow_low_confidence)
        t2 = time.perf_counter()
        grid = build_grid([f.image for f in frames], shifts, m.ratio, m.gradient_mode)
        fused = interpolate_hr(grid, m.ratio, m.fusion_params(), threads=args.threads)
        t3 = time.perf_counter()
        wiener_filter(fused, m.wiener_params())
        t4 = time.perf_counter()
        stages["simulate"].append((t1 - t0) * 1e3)
        stages["register"].append((t2 - t1) * 1e3)
        stages["fuse"].append((t3 - t2) * 1e3)
        stages["deblur"].append((t4 - t3) * 1e3)
    print("stage,min_ms,median_ms")
    for stage, times in stages.items():
        print(f"{stage},{min(times):.3f},{statistics.median(times):.3f}")
    return EXIT_OK


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except ValidationError as err:
        print(f"error: {err}", file=sys.stderr)
        return EXIT_VALIDATION
    except OSError as err:
        print(f"I/O error: {err}", file=sys.stderr)
        return EXIT_IO
    except NumericError as err:
        print(f"numeric error: {err}", file=sys.stderr)
        return EXIT_NUMERIC


if __name__ == "__main__":
    sys.exit(main())

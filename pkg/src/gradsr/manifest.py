"""Run manifest: a flat ``key = value`` text file pinning a whole run.

The manifest records everything needed to reproduce a simulation and
reconstruction: decimation ratio, blur kernel parameters, per-frame shifts
and noise levels, fusion and Wiener parameters, registration mode, seed,
and I/O paths. Frames use dotted keys (``frames.0.dx``); parsing is strict
about unknown keys so typos fail loudly.
"""

from __future__ import annotations

import math
import os
import re
from dataclasses import dataclass, replace

from .deblur import WienerParams, default_pipeline_nsr
from .degrade import DegradationConfig, FrameSpec, gaussian_psf
from .errors import ValidationError
from .fuse import FusionParams
from .register import REGISTRATION_MODES

_FRAME_KEY = re.compile(r"^frames\.(\d+)\.(dx|dy|bsnr_db)$")

DEFAULT_FRAMES = (
    FrameSpec((0.0, 0.0), 30.0),
    FrameSpec((0.0, -0.8), 25.0),
    FrameSpec((-0.8, -0.8), 35.0),
    FrameSpec((-0.8, 0.0), 30.0),
)


@dataclass(frozen=True)
class RunManifest:
    ratio: int = 2
    psf_size: int = 5
    psf_sigma: float = 1.0
    warp_method: str = "fourier"
    seed: int = 0
    frames: tuple[FrameSpec, ...] = DEFAULT_FRAMES
    mu: float = 0.9
    m: float = 2.0
    neighbor_window: int = 5
    k_neighbors: int = 3
    gradient_mode: str = "orientation"
    nsr: float | None = None
    registration_mode: str = "oracle"
    injected_shifts: tuple[tuple[float, float], ...] | None = None
    input_path: str | None = None
    output_dir: str | None = None

    def __post_init__(self):
        if self.registration_mode not in REGISTRATION_MODES:
            raise ValidationError(
                f"registration.mode: expected one of {REGISTRATION_MODES}, "
                f"got {self.registration_mode!r}"
            )
        if self.registration_mode == "injected" and self.injected_shifts is None:
            raise ValidationError(
                "registration.mode 'injected' requires registration.shifts"
            )

    def degradation_config(self) -> DegradationConfig:
        return DegradationConfig(
            ratio=self.ratio,
            psf=gaussian_psf(self.psf_size, self.psf_sigma),
            frames=self.frames,
            seed=self.seed,
            warp_method=self.warp_method,
        )

    def fusion_params(self) -> FusionParams:
        return FusionParams(
            mu=self.mu,
            m=self.m,
            neighbor_window=self.neighbor_window,
            k_neighbors=self.k_neighbors,
            gradient_mode=self.gradient_mode,
        )

    def wiener_params(self) -> WienerParams:
        """Wiener stage parameters; an unset nsr resolves to the default
        pipeline policy (sensor NSR from the mean BSNR plus the fusion
        error floor)."""
        nsr = self.nsr
        if nsr is None:
            nsr = default_pipeline_nsr(f.bsnr_db for f in self.frames)
        return WienerParams(gaussian_psf(self.psf_size, self.psf_sigma), nsr)


def default_manifest() -> RunManifest:
    return RunManifest()


def parse_shift_list(text: str) -> tuple[tuple[float, float], ...]:
    """Parse a "dx,dy;dx,dy;..." shift list."""
    shifts = []
    for part in text.strip().split(";"):
        part = part.strip()
        if not part:
            continue
        pieces = part.split(",")
        if len(pieces) != 2:
            raise ValidationError(f"shifts: expected 'dx,dy' pairs, got {part!r}")
        try:
            shifts.append((float(pieces[0]), float(pieces[1])))
        except ValueError:
            raise ValidationError(f"shifts: non-numeric component in {part!r}") from None
    if not shifts:
        raise ValidationError("shifts: empty list")
    return tuple(shifts)


def format_shift_list(shifts) -> str:
    return ";".join(f"{dx!r},{dy!r}" for dx, dy in shifts)


def serialize_manifest(m: RunManifest) -> str:
    lines = [
        f"ratio = {m.ratio}",
        f"seed = {m.seed}",
        f"warp_method = {m.warp_method}",
        f"psf.size = {m.psf_size}",
        f"psf.sigma = {m.psf_sigma!r}",
    ]
    for k, f in enumerate(m.frames):
        lines.append(f"frames.{k}.dx = {f.shift.dx!r}")
        lines.append(f"frames.{k}.dy = {f.shift.dy!r}")
        bsnr = "none" if f.bsnr_db is None else repr(f.bsnr_db)
        lines.append(f"frames.{k}.bsnr_db = {bsnr}")
    lines += [
        f"fusion.mu = {m.mu!r}",
        f"fusion.m = {m.m!r}",
        f"fusion.neighbor_window = {m.neighbor_window}",
        f"fusion.k_neighbors = {m.k_neighbors}",
        f"fusion.gradient_mode = {m.gradient_mode}",
    ]
    if m.nsr is not None:
        lines.append(f"wiener.nsr = {m.nsr!r}")
    lines.append(f"registration.mode = {m.registration_mode}")
    if m.injected_shifts is not None:
        lines.append(f"registration.shifts = {format_shift_list(m.injected_shifts)}")
    if m.input_path is not None:
        lines.append(f"io.input = {m.input_path}")
    if m.output_dir is not None:
        lines.append(f"io.output = {m.output_dir}")
    return "\n".join(lines) + "\n"


def _parse_int(value: str, key: str) -> int:
    try:
        return int(value)
    except ValueError:
        raise ValidationError(f"{key}: expected an integer, got {value!r}") from None


def _parse_float(value: str, key: str) -> float:
    try:
        out = float(value)
    except ValueError:
        raise ValidationError(f"{key}: expected a number, got {value!r}") from None
    if not math.isfinite(out):
        raise ValidationError(f"{key}: must be finite, got {value!r}")
    return out


def parse_manifest(text: str) -> RunManifest:
    """Parse manifest text back into a RunManifest (lossless round-trip)."""
    values: dict[str, str] = {}
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        if "=" not in line:
            raise ValidationError(f"manifest line {lineno}: expected 'key = value'")
        key, _, value = line.partition("=")
        key = key.strip()
        value = value.strip()
        if key in values:
            raise ValidationError(f"manifest line {lineno}: duplicate key {key!r}")
        values[key] = value

    frame_fields: dict[int, dict[str, str]] = {}
    kwargs = {}
    for key, value in values.items():
        fm = _FRAME_KEY.match(key)
        if fm:
            frame_fields.setdefault(int(fm.group(1)), {})[fm.group(2)] = value
        elif key == "ratio":
            kwargs["ratio"] = _parse_int(value, key)
        elif key == "seed":
            kwargs["seed"] = _parse_int(value, key)
        elif key == "warp_method":
            kwargs["warp_method"] = value
        elif key == "psf.size":
            kwargs["psf_size"] = _parse_int(value, key)
        elif key == "psf.sigma":
            kwargs["psf_sigma"] = _parse_float(value, key)
        elif key == "fusion.mu":
            kwargs["mu"] = _parse_float(value, key)
        elif key == "fusion.m":
            kwargs["m"] = _parse_float(value, key)
        elif key == "fusion.neighbor_window":
            kwargs["neighbor_window"] = _parse_int(value, key)
        elif key == "fusion.k_neighbors":
            kwargs["k_neighbors"] = _parse_int(value, key)
        elif key == "fusion.gradient_mode":
            kwargs["gradient_mode"] = value
        elif key == "wiener.nsr":
            kwargs["nsr"] = _parse_float(value, key)
        elif key == "registration.mode":
            kwargs["registration_mode"] = value
        elif key == "registration.shifts":
            kwargs["injected_shifts"] = parse_shift_list(value)
        elif key == "io.input":
            kwargs["input_path"] = value
        elif key == "io.output":
            kwargs["output_dir"] = value
        else:
            raise ValidationError(f"manifest: unknown key {key!r}")

    if frame_fields:
        indices = sorted(frame_fields)
        if indices != list(range(len(indices))):
            raise ValidationError(
                f"manifest: frame indices must be contiguous from 0, got {indices}"
            )
        frames = []
        for k in indices:
            fields_k = frame_fields[k]
            for needed in ("dx", "dy", "bsnr_db"):
                if needed not in fields_k:
                    raise ValidationError(f"manifest: frames.{k}.{needed} is missing")
            bsnr_raw = fields_k["bsnr_db"]
            bsnr = None if bsnr_raw == "none" else _parse_float(bsnr_raw, f"frames.{k}.bsnr_db")
            frames.append(
                FrameSpec(
                    (_parse_float(fields_k["dx"], f"frames.{k}.dx"),
                     _parse_float(fields_k["dy"], f"frames.{k}.dy")),
                    bsnr,
                )
            )
        kwargs["frames"] = tuple(frames)

    return RunManifest(**kwargs)


def read_manifest(path: str | os.PathLike) -> RunManifest:
    with open(path, "r", encoding="ascii") as f:
        return parse_manifest(f.read())


def write_manifest(path: str | os.PathLike, m: RunManifest) -> None:
    with open(path, "w", encoding="ascii") as f:
        f.write(serialize_manifest(m))


def with_overrides(manifest: RunManifest, /, **overrides) -> RunManifest:
    """Non-None overrides applied to a manifest (CLI flag plumbing)."""
    filtered = {k: v for k, v in overrides.items() if v is not None}
    return replace(manifest, **filtered) if filtered else manifest

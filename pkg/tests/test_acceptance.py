"""Acceptance suite: one test per release criterion.

Each test prints a single PASS line (run pytest with -s or check captured
output) and enforces its stated tolerance and runtime budget.
"""

import math
import time

import numpy as np
import pytest

from gradsr import (
    FusionParams,
    GRADIENT_MAX,
    GRADIENT_MIN,
    HRGrid,
    SamplePoint,
    WienerParams,
    bilinear_upscale,
    blur_circular,
    build_grid,
    convolve_psf,
    default_manifest,
    dft2,
    distance_weight,
    estimate_shift,
    gaussian_psf,
    gradient_weight,
    idft2,
    interpolate_hr,
    local_gradient,
    make_test_scene,
    mssim,
    psf_to_otf,
    psnr,
    register_sequence,
    simulate_sequence,
    warp_shift,
    wiener_filter,
    write_pgm,
)
from gradsr.cli import main as cli_main
from naive_fusion import naive_interpolate
from test_spectral import brute_force_dft2


def report(criterion, description, elapsed=None):
    suffix = f" [{elapsed:.2f}s]" if elapsed is not None else ""
    print(f"ACCEPTANCE criterion {criterion}: PASS - {description}{suffix}")


def test_criterion_1_formula_unit_suite():
    """Weight formulas behave exactly as specified; the local-gradient
    range invariant holds over 1e5 random derivative pairs; < 1 s."""
    t0 = time.perf_counter()

    params = FusionParams(mu=0.9, m=2.0)
    # distance weight S
    assert distance_weight(SamplePoint(4.0, 6.0, 0.0, 0.5, 0), 4, 6, 2) == 1.0
    assert distance_weight(SamplePoint(5.0, 7.0, 0.0, 0.5, 0), 4, 6, 2) == pytest.approx(0.25)
    assert distance_weight(SamplePoint(4.0, 9.0, 0.0, 0.5, 0), 4, 6, 2) == 0.0
    # gradient weight W
    assert gradient_weight(0.0, params) == 1.0
    assert gradient_weight(0.5, params) == pytest.approx(0.3025, abs=1e-12)
    assert gradient_weight(1.0, FusionParams(mu=0.99, m=5.0)) > 0.0
    # local gradient G
    g = local_gradient((np.array([[1.0, 1.0, 0.0]]), np.array([[0.0, 1.0, 0.0]])))
    assert g[0, 0] == pytest.approx(0.5, abs=1e-12)
    assert g[0, 1] == pytest.approx(math.sqrt(2.0) / 2.0, abs=1e-12)
    assert g[0, 2] == 0.5

    rng = np.random.default_rng(2026)
    fx = rng.standard_normal(100_000) * 10.0 ** rng.uniform(-8, 8, 100_000)
    fy = rng.standard_normal(100_000) * 10.0 ** rng.uniform(-8, 8, 100_000)
    grads = local_gradient((fx, fy))
    assert np.all(grads >= GRADIENT_MIN - 1e-12)
    assert np.all(grads <= GRADIENT_MAX + 1e-12)

    elapsed = time.perf_counter() - t0
    assert elapsed < 1.0
    report(1, "formula unit suite incl. gradient range over 1e5 pairs", elapsed)


def test_criterion_2_spectral_suite():
    """DFT round-trip <= 1e-10, Parseval <= 1e-9 relative, brute-force
    3x3 oracle match <= 1e-10; < 5 s."""
    t0 = time.perf_counter()
    rng = np.random.default_rng(7)

    for shape in ((3, 3), (8, 8), (17, 31), (128, 128), (256, 256)):
        img = rng.uniform(0, 255, shape)
        spec = dft2(img)
        assert np.abs(idft2(spec) - img).max() <= 1e-10
        energy = np.sum(img**2)
        assert abs(energy - np.sum(np.abs(spec) ** 2) / img.size) / energy <= 1e-9

    small = rng.uniform(0, 255, (3, 3))
    assert np.abs(dft2(small) - brute_force_dft2(small)).max() <= 1e-10

    elapsed = time.perf_counter() - t0
    assert elapsed < 5.0
    report(2, "round-trip, Parseval, and 3x3 brute-force oracle", elapsed)


def test_criterion_3_registration_accuracy():
    """50 random shifts in [-1, 1]^2 on blurred 128x128 content: max
    error <= 0.05 px noiseless, median <= 0.1 px at 30 dB BSNR; < 30 s."""
    t0 = time.perf_counter()
    base = convolve_psf(make_test_scene(128), gaussian_psf(5, 1.0))
    rng = np.random.default_rng(31)
    shifts = rng.uniform(-1.0, 1.0, size=(50, 2))

    noiseless_err = []
    noisy_err = []
    sigma = math.sqrt(base.var() / 1000.0)
    for dx, dy in shifts:
        moving = warp_shift(base, (dx, dy))
        mv = estimate_shift(base, moving)
        noiseless_err.append(max(abs(mv.dx - dx), abs(mv.dy - dy)))

        ref_n = base + rng.standard_normal(base.shape) * sigma
        mov_n = moving + rng.standard_normal(base.shape) * sigma
        mv_n = estimate_shift(ref_n, mov_n)
        noisy_err.append(max(abs(mv_n.dx - dx), abs(mv_n.dy - dy)))

    assert max(noiseless_err) <= 0.05
    assert float(np.median(noisy_err)) <= 0.1

    elapsed = time.perf_counter() - t0
    assert elapsed < 30.0
    report(
        3,
        f"max noiseless err {max(noiseless_err):.2e} px, "
        f"median 30 dB err {np.median(noisy_err):.2e} px over 50 trials",
        elapsed,
    )


def _reconstruct(frames, shifts, manifest):
    grid = build_grid([f.image for f in frames], shifts, manifest.ratio,
                      manifest.gradient_mode)
    fused = interpolate_hr(grid, manifest.ratio, manifest.fusion_params())
    return wiener_filter(fused, manifest.wiener_params())


def test_criterion_4_end_to_end_quality_gap():
    """Four-frame preset with oracle registration beats the bilinear
    baseline by >= 2 dB PSNR and >= 0.03 MSSIM (8 px border excluded);
    < 60 s."""
    t0 = time.perf_counter()
    hr = make_test_scene(256)
    manifest = default_manifest()
    frames = simulate_sequence(hr, manifest.degradation_config())
    shifts = register_sequence(frames, mode="oracle")
    restored = _reconstruct(frames, shifts, manifest)
    baseline = bilinear_upscale(frames[0].image, manifest.ratio)

    b = 8
    psnr_sr = psnr(hr, restored, border_exclude=b)
    psnr_bl = psnr(hr, baseline, border_exclude=b)
    mssim_sr = mssim(hr[b:-b, b:-b], restored[b:-b, b:-b])
    mssim_bl = mssim(hr[b:-b, b:-b], baseline[b:-b, b:-b])

    assert psnr_sr >= psnr_bl + 2.0
    assert mssim_sr >= mssim_bl + 0.03

    elapsed = time.perf_counter() - t0
    assert elapsed < 60.0
    report(
        4,
        f"reconstruction {psnr_sr:.2f} dB / {mssim_sr:.4f} vs bilinear "
        f"{psnr_bl:.2f} dB / {mssim_bl:.4f}",
        elapsed,
    )


def test_criterion_5_robustness_to_registration_error():
    """Reconstructing with badly injected shifts (true 0.4 px, injected
    0.1 px) costs at most 2 dB against the accurate-shift run; < 60 s."""
    t0 = time.perf_counter()
    hr = make_test_scene(256)
    manifest = default_manifest()
    case1 = ((0.0, 0.0), (0.0, -0.4), (-0.4, -0.4), (-0.4, 0.0))
    case3 = ((0.0, 0.0), (0.0, -0.1), (-0.1, -0.1), (-0.1, 0.0))
    config = manifest.degradation_config()
    from dataclasses import replace

    from gradsr import FrameSpec

    config = replace(
        config,
        frames=tuple(
            FrameSpec(shift, spec.bsnr_db)
            for shift, spec in zip(case1, config.frames)
        ),
    )
    frames = simulate_sequence(hr, config)

    accurate = _reconstruct(frames, register_sequence(frames, mode="oracle"), manifest)
    injected = _reconstruct(
        frames, register_sequence(frames, mode="injected", injected=case3), manifest
    )

    psnr_acc = psnr(hr, accurate, border_exclude=8)
    psnr_inj = psnr(hr, injected, border_exclude=8)
    drop = psnr_acc - psnr_inj
    assert drop <= 2.0

    elapsed = time.perf_counter() - t0
    assert elapsed < 60.0
    report(
        5,
        f"accurate {psnr_acc:.2f} dB vs injected {psnr_inj:.2f} dB "
        f"(drop {drop:.2f} dB)",
        elapsed,
    )


def test_criterion_6_fusion_oracle_equivalence():
    """Pipeline output matches the naive full-scan interpolation within
    1e-10 on 25 randomized grids."""
    rng = np.random.default_rng(66)
    for trial in range(25):
        size = int(rng.integers(8, 33))
        n = int(rng.integers(5, 201))
        samples = [
            SamplePoint(
                pos_i=float(rng.uniform(-2, size + 2)),
                pos_j=float(rng.uniform(-2, size + 2)),
                value=float(rng.uniform(0, 255)),
                grad=float(rng.uniform(0.5, math.sqrt(2) / 2)),
                frame_id=int(rng.integers(0, 5)),
            )
            for _ in range(n)
        ]
        grid = HRGrid.from_samples(size, size, samples)
        params = FusionParams(
            mu=float(rng.uniform(0.5, 0.99)),
            m=float(rng.uniform(0.5, 4.0)),
        )
        out = interpolate_hr(grid, 2, params)
        expected = np.array(naive_interpolate(samples, size, size, 2, params))
        assert np.abs(out - expected).max() <= 1e-10
    report(6, "25 randomized grids match the brute-force evaluation")


def test_criterion_7_thread_count_determinism(tmp_path):
    """cmd_reconstruct emits byte-identical PGMs for different --threads."""
    hr_path = tmp_path / "hr.pgm"
    write_pgm(hr_path, make_test_scene(128))
    sim_dir = tmp_path / "frames"
    assert cli_main(["simulate", str(hr_path), "--out", str(sim_dir)]) == 0
    frames = [str(sim_dir / f"frame_{k:03d}.pgm") for k in range(4)]
    manifest_path = sim_dir / "manifest.txt"

    outputs = []
    for threads in ("1", "4"):
        out_dir = tmp_path / f"rec_t{threads}"
        code = cli_main([
            "reconstruct", *frames,
            "--manifest", str(manifest_path),
            "--mode", "oracle",
            "--threads", threads,
            "--out", str(out_dir),
        ])
        assert code == 0
        outputs.append((out_dir / "sr.pgm").read_bytes())
    assert outputs[0] == outputs[1]
    report(7, "byte-identical reconstruction for --threads 1 vs 4")


def test_criterion_8_wiener_roundtrip():
    """Circular blur then Wiener with nsr = 0 recovers the input within
    1e-6 (all transfer magnitudes of the default PSF exceed 1e-8)."""
    img = make_test_scene(128)
    psf = gaussian_psf(5, 1.0)
    otf = psf_to_otf(psf, img.shape)
    assert np.abs(otf).min() > 1e-8
    restored = wiener_filter(blur_circular(img, psf), WienerParams(psf, 0.0))
    err = np.abs(restored - img).max()
    assert err <= 1e-6
    report(8, f"max round-trip error {err:.2e}")

"""Brute-force reference implementation of the fusion formula.

Independent of the package's spatial index and vectorized paths: a full
scan of all samples per pixel with the same windowing rule, an explicit
sort, and the weight formula evaluated term by term.
"""

import math


def naive_neighbors(samples, i, j, k_neighbors, neighbor_window):
    """k nearest samples to (i, j): full scan, expanding window."""
    lo_i = min(math.floor(s.pos_i) for s in samples)
    hi_i = max(math.floor(s.pos_i) for s in samples)
    lo_j = min(math.floor(s.pos_j) for s in samples)
    hi_j = max(math.floor(s.pos_j) for s in samples)
    kk = min(k_neighbors, len(samples))
    half = (neighbor_window - 1) // 2
    while True:
        cand = [
            s for s in samples
            if i - half <= math.floor(s.pos_i) <= i + half
            and j - half <= math.floor(s.pos_j) <= j + half
        ]
        covers = (i - half <= lo_i and i + half >= hi_i
                  and j - half <= lo_j and j + half >= hi_j)
        if len(cand) >= kk or covers:
            break
        half += 2
    ranked = sorted(
        cand,
        key=lambda s: ((s.pos_i - i) ** 2 + (s.pos_j - j) ** 2,
                       s.frame_id, s.pos_i, s.pos_j),
    )
    return ranked[:kk]


def naive_interpolate(samples, hr_height, hr_width, ratio, params):
    """Direct per-pixel evaluation of the weighted-neighbor formula."""
    out = [[0.0] * hr_width for _ in range(hr_height)]
    for i in range(hr_height):
        for j in range(hr_width):
            neighbors = naive_neighbors(
                samples, i, j, params.k_neighbors, params.neighbor_window
            )
            total = 0.0
            acc = 0.0
            for s in neighbors:
                di = min(abs(s.pos_i - i) / ratio, 1.0)
                dj = min(abs(s.pos_j - j) / ratio, 1.0)
                w = (1.0 - params.mu * s.grad) ** params.m * ((1.0 - di) * (1.0 - dj))
                total += w
                acc += w * s.value
            out[i][j] = neighbors[0].value if total < 1e-12 else acc / total
    return out

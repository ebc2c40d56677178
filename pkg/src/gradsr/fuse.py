"""Gradient-weighted adaptive fusion of registered LR frames.

Every LR pixel becomes a scattered sample on the HR lattice at position
ratio * (p + dx, q + dy), carrying its gray value and the local gradient of
its source frame. Each HR pixel is then interpolated from its k nearest
samples (searched in a window of HR cells) as a convex combination whose
weights multiply a distance term S = (1 - dx)(1 - dy) with a gradient term
W = (1 - mu * G)^m, so flat-region samples dominate edge samples at equal
distance.
"""

from __future__ import annotations

from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np

from .degrade import as_motion, frame_image
from .errors import ValidationError
from .gradients import local_gradient, sobel_derivatives
from .validation import check_positive_int

GRADIENT_MODES = ("orientation", "normalized_magnitude")

# Below this total weight every neighbor is at a clamped S of zero and the
# pixel falls back to its single nearest sample.
WEIGHT_EPSILON = 1e-12


@dataclass(frozen=True)
class SamplePoint:
    """One scattered sample: HR-lattice position, value, gradient, origin."""

    pos_i: float
    pos_j: float
    value: float
    grad: float
    frame_id: int


@dataclass(frozen=True)
class FusionParams:
    """Interpolation parameters.

    mu in (0, 1) and m > 0 shape the gradient weight (1 - mu*G)^m;
    neighbor_window is the odd side length, in HR cells, of the search
    window; k_neighbors is how many ranked samples contribute.
    """

    mu: float = 0.9
    m: float = 2.0
    neighbor_window: int = 5
    k_neighbors: int = 3
    gradient_mode: str = "orientation"

    def __post_init__(self):
        if not 0.0 < self.mu < 1.0:
            raise ValidationError(f"mu: must be in (0, 1), got {self.mu}")
        if self.m <= 0.0:
            raise ValidationError(f"m: must be > 0, got {self.m}")
        window = check_positive_int(self.neighbor_window, "neighbor_window", minimum=3)
        if window % 2 == 0:
            raise ValidationError(f"neighbor_window: must be odd, got {window}")
        check_positive_int(self.k_neighbors, "k_neighbors")
        if self.gradient_mode not in GRADIENT_MODES:
            raise ValidationError(
                f"gradient_mode: expected one of {GRADIENT_MODES}, got {self.gradient_mode!r}"
            )


class HRGrid:
    """Scattered samples bucketed by HR cell for windowed neighbor queries.

    Samples are stored sorted by (frame_id, pos_i, pos_j), so ascending
    storage index is exactly the deterministic tie-break order used when
    two candidates are equidistant. A sample belongs to the cell at the
    floor of its coordinates.
    """

    def __init__(self, hr_height: int, hr_width: int, pos_i, pos_j, value, grad, frame_id):
        self.hr_height = int(hr_height)
        self.hr_width = int(hr_width)
        if self.hr_height < 1 or self.hr_width < 1:
            raise ValidationError("HR dimensions must be positive")

        pos_i = np.asarray(pos_i, dtype=np.float64).ravel()
        pos_j = np.asarray(pos_j, dtype=np.float64).ravel()
        value = np.asarray(value, dtype=np.float64).ravel()
        grad = np.asarray(grad, dtype=np.float64).ravel()
        frame_id = np.asarray(frame_id, dtype=np.int64).ravel()
        n = pos_i.size
        if not (pos_j.size == value.size == grad.size == frame_id.size == n):
            raise ValidationError("sample arrays must have equal length")
        if n and not (np.isfinite(pos_i).all() and np.isfinite(pos_j).all()
                      and np.isfinite(value).all() and np.isfinite(grad).all()):
            raise ValidationError("sample fields must be finite")

        order = np.lexsort((pos_j, pos_i, frame_id))
        self.pos_i = pos_i[order]
        self.pos_j = pos_j[order]
        self.value = value[order]
        self.grad = grad[order]
        self.frame_id = frame_id[order]

        if n:
            cell_i = np.floor(self.pos_i).astype(np.int64)
            cell_j = np.floor(self.pos_j).astype(np.int64)
            self._lo_i = int(cell_i.min())
            self._lo_j = int(cell_j.min())
            self._rows = int(cell_i.max()) - self._lo_i + 1
            self._cols = int(cell_j.max()) - self._lo_j + 1
            cell_ids = (cell_i - self._lo_i) * self._cols + (cell_j - self._lo_j)
            by_cell = np.argsort(cell_ids, kind="stable")
            counts = np.bincount(cell_ids, minlength=self._rows * self._cols)
            self._starts = np.concatenate(([0], np.cumsum(counts)))
            self._csr = by_cell.astype(np.int64)
            self._counts2d = counts.reshape(self._rows, self._cols)
            cmax = int(counts.max())
            # padded cell table (+1 virtual empty cell) for vectorized gathers;
            # the sentinel index n sorts after every real sample index
            table = np.full((self._rows * self._cols + 1, max(cmax, 1)), n, dtype=np.int64)
            slot = np.arange(n) - self._starts[cell_ids[by_cell]]
            table[cell_ids[by_cell], slot] = by_cell
            self._cell_table = table
        else:
            self._lo_i = self._lo_j = 0
            self._rows = self._cols = 0
            self._starts = np.zeros(1, dtype=np.int64)
            self._csr = np.zeros(0, dtype=np.int64)
            self._counts2d = np.zeros((0, 0), dtype=np.int64)
            self._cell_table = np.zeros((1, 1), dtype=np.int64)

    @classmethod
    def from_samples(cls, hr_height: int, hr_width: int, samples) -> "HRGrid":
        """Build a grid from an iterable of SamplePoint (or 5-tuples)."""
        rows = [tuple(s) if not isinstance(s, SamplePoint)
                else (s.pos_i, s.pos_j, s.value, s.grad, s.frame_id)
                for s in samples]
        if rows:
            pi, pj, v, g, f = (np.array(col) for col in zip(*rows))
        else:
            pi = pj = v = g = f = np.zeros(0)
        return cls(hr_height, hr_width, pi, pj, v, g, f)

    @property
    def n_samples(self) -> int:
        return self.pos_i.size

    def sample(self, idx: int) -> SamplePoint:
        return SamplePoint(
            float(self.pos_i[idx]),
            float(self.pos_j[idx]),
            float(self.value[idx]),
            float(self.grad[idx]),
            int(self.frame_id[idx]),
        )

    def samples_in_cell(self, ci: int, cj: int) -> list[SamplePoint]:
        """All samples whose floor coordinates equal (ci, cj)."""
        idx = self._gather(ci, ci, cj, cj)
        return [self.sample(int(s)) for s in idx]

    def _covers_all(self, i0: int, i1: int, j0: int, j1: int) -> bool:
        return (i0 <= self._lo_i and i1 >= self._lo_i + self._rows - 1
                and j0 <= self._lo_j and j1 >= self._lo_j + self._cols - 1)

    def _gather(self, i0: int, i1: int, j0: int, j1: int) -> np.ndarray:
        """Indices of samples in cells [i0, i1] x [j0, j1] (absolute coords)."""
        a0 = max(i0 - self._lo_i, 0)
        a1 = min(i1 - self._lo_i, self._rows - 1)
        b0 = max(j0 - self._lo_j, 0)
        b1 = min(j1 - self._lo_j, self._cols - 1)
        if a0 > a1 or b0 > b1:
            return np.zeros(0, dtype=np.int64)
        chunks = []
        for a in range(a0, a1 + 1):
            base = a * self._cols
            chunks.append(self._csr[self._starts[base + b0]: self._starts[base + b1 + 1]])
        return np.concatenate(chunks) if chunks else np.zeros(0, dtype=np.int64)


def normalized_magnitude_gradient(image) -> np.ndarray:
    """Edge-strength alternative to the literal local gradient.

    G = (|fx| + |fy|) / (2 * max over the image of sqrt(fx^2 + fy^2)),
    clamped to [0, 1]. Unlike the literal measure this one is sensitive to
    gradient magnitude, not just orientation; it is opt-in via
    FusionParams(gradient_mode="normalized_magnitude").
    """
    fx, fy = sobel_derivatives(image)
    peak = float(np.hypot(fx, fy).max())
    if peak == 0.0:
        return np.zeros_like(fx)
    return np.minimum((np.abs(fx) + np.abs(fy)) / (2.0 * peak), 1.0)


def build_grid(frames, shifts, ratio: int, gradient_mode: str = "orientation") -> HRGrid:
    """Place every LR pixel of every frame onto the HR lattice.

    LR pixel (p, q) of frame k lands at HR position
    (ratio * (p + dx_k), ratio * (q + dy_k)); its gradient is computed in
    the LR frame it belongs to. Samples beyond the slack bound of one
    ratio outside the HR extent are dropped.
    """
    images = [frame_image(f) for f in frames]
    motions = [as_motion(s) for s in shifts]
    if len(images) != len(motions):
        raise ValidationError(
            f"got {len(images)} frames but {len(motions)} shifts"
        )
    if not images:
        raise ValidationError("frames: at least one frame is required")
    if not motions[0].is_zero():
        raise ValidationError(
            f"shifts: the reference frame must sit at (0, 0), got {tuple(motions[0])}"
        )
    ratio = check_positive_int(ratio, "ratio")
    if gradient_mode not in GRADIENT_MODES:
        raise ValidationError(
            f"gradient_mode: expected one of {GRADIENT_MODES}, got {gradient_mode!r}"
        )
    h, w = images[0].shape
    for k, img in enumerate(images):
        if img.shape != (h, w):
            raise ValidationError(
                f"frame {k}: dimensions {img.shape} differ from frame 0 {(h, w)}"
            )
    hr_h, hr_w = h * ratio, w * ratio

    pos_i, pos_j, values, grads, ids = [], [], [], [], []
    for k, (img, mv) in enumerate(zip(images, motions)):
        if gradient_mode == "orientation":
            g = local_gradient(sobel_derivatives(img))
        else:
            g = normalized_magnitude_gradient(img)
        pi = ratio * (np.arange(h, dtype=np.float64)[:, None] + mv.dx)
        pj = ratio * (np.arange(w, dtype=np.float64)[None, :] + mv.dy)
        pi, pj = np.broadcast_arrays(pi, pj)
        pos_i.append(pi.ravel())
        pos_j.append(pj.ravel())
        values.append(img.ravel())
        grads.append(g.ravel())
        ids.append(np.full(h * w, k, dtype=np.int64))

    pos_i = np.concatenate(pos_i)
    pos_j = np.concatenate(pos_j)
    values = np.concatenate(values)
    grads = np.concatenate(grads)
    ids = np.concatenate(ids)

    keep = ((pos_i >= -ratio) & (pos_i <= hr_h + ratio)
            & (pos_j >= -ratio) & (pos_j <= hr_w + ratio))
    return HRGrid(hr_h, hr_w, pos_i[keep], pos_j[keep], values[keep], grads[keep], ids[keep])


def distance_weight(sample: SamplePoint, i: int, j: int, ratio: int) -> float:
    """S = (1 - dx)(1 - dy) with offsets in LR pixel units, clamped to [0, 1]."""
    di = min(abs(sample.pos_i - i) / ratio, 1.0)
    dj = min(abs(sample.pos_j - j) / ratio, 1.0)
    return (1.0 - di) * (1.0 - dj)


def gradient_weight(grad: float, params: FusionParams) -> float:
    """W = (1 - mu * G)^m; strictly positive and decreasing in G."""
    if not 0.0 <= grad <= 1.0:
        raise ValidationError(f"grad: must be in [0, 1], got {grad}")
    return (1.0 - params.mu * grad) ** params.m


def nearest_neighbors(grid: HRGrid, i: int, j: int, params: FusionParams) -> list[SamplePoint]:
    """The k nearest samples to HR pixel (i, j) within the search window.

    Candidates come from the neighbor_window x neighbor_window cell window
    centered on (i, j); if it holds fewer than k samples the window grows
    by two cells per side until satisfied (or until it covers the whole
    grid, in which case fewer than k may be returned). Ranking is by
    Euclidean distance with ties broken by (frame_id, pos_i, pos_j).
    """
    idx = _ranked_neighbor_indices(grid, i, j, params)
    return [grid.sample(int(s)) for s in idx]


def _ranked_neighbor_indices(grid: HRGrid, i: int, j: int, params: FusionParams) -> list[int]:
    if grid.n_samples == 0:
        raise ValidationError("grid holds no samples")
    kk = min(params.k_neighbors, grid.n_samples)
    half = (params.neighbor_window - 1) // 2
    while True:
        idx = grid._gather(i - half, i + half, j - half, j + half)
        if idx.size >= kk or grid._covers_all(i - half, i + half, j - half, j + half):
            break
        half += 2
    di = grid.pos_i[idx] - i
    dj = grid.pos_j[idx] - j
    d2 = di * di + dj * dj
    # storage index order is (frame_id, pos_i, pos_j) order, so the index
    # itself is the tie-break key
    ranked = sorted(zip(d2.tolist(), idx.tolist()))
    return [s for _, s in ranked[:kk]]


def interpolate_hr(grid: HRGrid, ratio: int, params: FusionParams, threads: int = 1) -> np.ndarray:
    """Interpolate every HR pixel from its nearest samples.

    f(i, j) = sum(W_k * S_k * f_k) / sum(W_k * S_k) over the ranked
    neighbors; when the total weight underflows WEIGHT_EPSILON the pixel
    takes its single nearest sample's value. Pixels are independent, so
    evaluation may be split across threads without changing the result.
    """
    if grid.n_samples == 0:
        raise ValidationError("grid holds no samples")
    ratio = check_positive_int(ratio, "ratio")
    threads = check_positive_int(threads, "threads")
    out = np.empty((grid.hr_height, grid.hr_width))
    blocks = _row_blocks(grid.hr_height, threads)
    if len(blocks) == 1:
        _interpolate_rows(grid, ratio, params, blocks[0], out)
    else:
        with ThreadPoolExecutor(max_workers=len(blocks)) as pool:
            futures = [
                pool.submit(_interpolate_rows, grid, ratio, params, block, out)
                for block in blocks
            ]
            for f in futures:
                f.result()
    return out


def _row_blocks(height: int, threads: int) -> list[range]:
    threads = min(threads, height)
    bounds = np.linspace(0, height, threads + 1).astype(int)
    return [range(bounds[t], bounds[t + 1]) for t in range(threads) if bounds[t] < bounds[t + 1]]


def _interpolate_rows(grid: HRGrid, ratio: int, params: FusionParams,
                      rows: range, out: np.ndarray) -> None:
    width = grid.hr_width
    kk = min(params.k_neighbors, grid.n_samples)
    half = (params.neighbor_window - 1) // 2
    window = 2 * half + 1
    cmax = grid._cell_table.shape[1]
    # bound the transient candidate matrix to a few million entries
    chunk = max(1, int(4e6) // max(1, width * window * window * cmax))
    for r0 in range(rows.start, rows.stop, chunk):
        r1 = min(r0 + chunk, rows.stop)
        _interpolate_chunk(grid, ratio, params, r0, r1, kk, half, out)


def _interpolate_chunk(grid: HRGrid, ratio: int, params: FusionParams,
                       r0: int, r1: int, kk: int, half: int, out: np.ndarray) -> None:
    width = grid.hr_width
    n = grid.n_samples
    rows_c, cols_c = grid._rows, grid._cols
    ii = np.arange(r0, r1, dtype=np.int64)
    jj = np.arange(width, dtype=np.int64)

    # windowed sample counts via a summed-area table over cell counts
    sat = np.zeros((rows_c + 1, cols_c + 1), dtype=np.int64)
    np.cumsum(np.cumsum(grid._counts2d, axis=0), axis=1, out=sat[1:, 1:])
    a0 = np.clip(ii - half - grid._lo_i, 0, rows_c)[:, None]
    a1 = np.clip(ii + half - grid._lo_i + 1, 0, rows_c)[:, None]
    b0 = np.clip(jj - half - grid._lo_j, 0, cols_c)[None, :]
    b1 = np.clip(jj + half - grid._lo_j + 1, 0, cols_c)[None, :]
    counts = sat[a1, b1] - sat[a0, b1] - sat[a1, b0] + sat[a0, b0]

    main = counts >= kk
    mi, mj = np.nonzero(main)
    if mi.size:
        pix_i = ii[mi]
        pix_j = jj[mj]
        offsets = np.arange(-half, half + 1, dtype=np.int64)
        win_r = pix_i[:, None] + offsets[None, :] - grid._lo_i
        win_c = pix_j[:, None] + offsets[None, :] - grid._lo_j
        ok_r = (win_r >= 0) & (win_r < rows_c)
        ok_c = (win_c >= 0) & (win_c < cols_c)
        ids = np.where(
            ok_r[:, :, None] & ok_c[:, None, :],
            np.clip(win_r, 0, max(rows_c - 1, 0))[:, :, None] * cols_c
            + np.clip(win_c, 0, max(cols_c - 1, 0))[:, None, :],
            rows_c * cols_c,
        ).reshape(mi.size, -1)

        cand = grid._cell_table[ids].reshape(mi.size, -1)
        cand.sort(axis=1)
        pad = cand == n
        safe = np.minimum(cand, n - 1)
        di = grid.pos_i[safe] - pix_i[:, None]
        dj = grid.pos_j[safe] - pix_j[:, None]
        d2 = di * di + dj * dj
        d2[pad] = np.inf
        # stable sort on distance: ties fall back to ascending storage
        # index, i.e. (frame_id, pos_i, pos_j) order
        order = np.argsort(d2, axis=1, kind="stable")[:, :kk]
        nb = np.take_along_axis(cand, order, axis=1)

        s_i = np.minimum(np.abs(grid.pos_i[nb] - pix_i[:, None]) / ratio, 1.0)
        s_j = np.minimum(np.abs(grid.pos_j[nb] - pix_j[:, None]) / ratio, 1.0)
        s = (1.0 - s_i) * (1.0 - s_j)
        wgt = (1.0 - params.mu * grid.grad[nb]) ** params.m * s
        total = wgt.sum(axis=1)
        values = grid.value[nb]
        degenerate = total < WEIGHT_EPSILON
        total_safe = np.where(degenerate, 1.0, total)
        fused = np.where(
            degenerate, values[:, 0], (wgt * values).sum(axis=1) / total_safe
        )
        out[pix_i, pix_j] = fused

    # pixels whose base window is short of k samples take the expanding
    # scalar path
    for a, b in zip(*np.nonzero(~main)):
        i = int(ii[a])
        j = int(jj[b])
        idx = _ranked_neighbor_indices(grid, i, j, params)
        total = 0.0
        acc = 0.0
        for s in idx:
            sp = grid.sample(s)
            w = gradient_weight(sp.grad, params) * distance_weight(sp, i, j, ratio)
            total += w
            acc += w * sp.value
        if total < WEIGHT_EPSILON:
            out[i, j] = grid.value[idx[0]]
        else:
            out[i, j] = acc / total

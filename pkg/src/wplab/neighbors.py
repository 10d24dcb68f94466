"""Box-assisted neighbor search over embedded point sets.

Points are indexed on a 2-D grid spanned by two of their coordinates.
Queries scan expanding rings of boxes; since the projected distance on
the grid coordinates never exceeds the full Euclidean distance, a ring
whose boxes all lie farther than the best candidate bounds the search.
Results match a brute-force scan exactly (ties resolved toward the
smaller index).
"""

from __future__ import annotations

import math

import numpy as np


class BoxGrid:
    def __init__(self, points: np.ndarray, cells_per_axis: int | None = None):
        pts = np.ascontiguousarray(points, dtype=np.float64)
        if pts.ndim != 2 or pts.shape[0] == 0:
            raise ValueError("points must be a nonempty (n, dim) array")
        self.points = pts
        n, dim = pts.shape
        self._ax = 0
        self._ay = dim - 1
        if cells_per_axis is None:
            cells_per_axis = int(math.sqrt(n / 4.0)) + 1
        self._resolution = max(1, min(1024, cells_per_axis))

        x = pts[:, self._ax]
        y = pts[:, self._ay]
        self._nx, self._wx, self._x0, cx = self._axis_cells(x)
        self._ny, self._wy, self._y0, cy = self._axis_cells(y)
        cid = cx * self._ny + cy
        self._order = np.argsort(cid, kind="stable").astype(np.int64)
        counts = np.bincount(cid, minlength=self._nx * self._ny)
        self._starts = np.zeros(self._nx * self._ny + 1, dtype=np.int64)
        np.cumsum(counts, out=self._starts[1:])
        self._cx = cx
        self._cy = cy
        self._min_w = min(
            self._wx if self._nx > 1 else math.inf,
            self._wy if self._ny > 1 else math.inf,
        )

    def _axis_cells(self, coord: np.ndarray):
        lo = float(coord.min())
        hi = float(coord.max())
        if hi <= lo:
            return 1, math.inf, lo, np.zeros(coord.size, dtype=np.int64)
        ncells = self._resolution
        w = (hi - lo) / ncells
        idx = np.minimum((coord - lo) / w, ncells - 1).astype(np.int64)
        return ncells, w, lo, idx

    def _cell_indices(self, cx: int, cy: int) -> np.ndarray:
        c = cx * self._ny + cy
        return self._order[self._starts[c] : self._starts[c + 1]]

    def _ring_cells(self, px: int, py: int, r: int):
        if r == 0:
            yield px, py
            return
        for cx in range(max(0, px - r), min(self._nx - 1, px + r) + 1):
            on_edge_x = abs(cx - px) == r
            if on_edge_x:
                ys = range(max(0, py - r), min(self._ny - 1, py + r) + 1)
            else:
                ys = [v for v in (py - r, py + r) if 0 <= v < self._ny]
            for cy in ys:
                yield cx, cy

    def nearest(
        self,
        i: int,
        theiler: int = 0,
        limit: int | None = None,
        exclude_zero: bool = True,
    ) -> tuple[int, float]:
        """Index and distance of the closest point to point i.

        Candidates j must satisfy |i - j| > theiler and, when given,
        j <= limit.  Returns (-1, inf) if no candidate exists.
        """
        pts = self.points
        q = pts[i]
        px, py = int(self._cx[i]), int(self._cy[i])
        r_limit = max(px, self._nx - 1 - px) + max(py, self._ny - 1 - py)
        best_d = math.inf
        best_j = -1
        for r in range(r_limit + 1):
            if best_j >= 0 and best_d <= (r - 1) * self._min_w:
                break
            cand_parts = [self._cell_indices(cx, cy) for cx, cy in self._ring_cells(px, py, r)]
            cand = np.concatenate(cand_parts) if cand_parts else np.empty(0, np.int64)
            if cand.size == 0:
                continue
            mask = np.abs(cand - i) > theiler
            if limit is not None:
                mask &= cand <= limit
            cand = cand[mask]
            if cand.size == 0:
                continue
            diff = pts[cand] - q
            d = np.sqrt(np.einsum("ij,ij->i", diff, diff))
            if exclude_zero:
                pos = d > 0.0
                cand = cand[pos]
                d = d[pos]
                if cand.size == 0:
                    continue
            dmin = d.min()
            if dmin < best_d or (dmin == best_d and best_j >= 0):
                jmin = int(cand[d == dmin].min())
                if dmin < best_d or jmin < best_j:
                    best_d = float(dmin)
                    best_j = jmin
        return best_j, best_d

    def within(
        self,
        i: int,
        radius: float,
        theiler: int = 0,
        limit: int | None = None,
    ) -> np.ndarray:
        """Indices of all points within Euclidean radius of point i."""
        pts = self.points
        q = pts[i]
        if math.isfinite(self._wx):
            x0 = max(0, int((q[self._ax] - radius - self._x0) / self._wx))
            x1 = min(self._nx - 1, int((q[self._ax] + radius - self._x0) / self._wx))
        else:
            x0 = x1 = 0
        if math.isfinite(self._wy):
            y0 = max(0, int((q[self._ay] - radius - self._y0) / self._wy))
            y1 = min(self._ny - 1, int((q[self._ay] + radius - self._y0) / self._wy))
        else:
            y0 = y1 = 0
        parts = []
        for cx in range(x0, x1 + 1):
            lo = cx * self._ny + y0
            hi = cx * self._ny + y1
            parts.append(self._order[self._starts[lo] : self._starts[hi + 1]])
        cand = np.concatenate(parts) if parts else np.empty(0, np.int64)
        if cand.size == 0:
            return cand
        mask = np.abs(cand - i) > theiler
        if limit is not None:
            mask &= cand <= limit
        cand = cand[mask]
        if cand.size == 0:
            return cand
        diff = pts[cand] - q
        d2 = np.einsum("ij,ij->i", diff, diff)
        out = cand[d2 <= radius * radius]
        out.sort()
        return out


def brute_force_nearest(
    points: np.ndarray,
    i: int,
    theiler: int = 0,
    limit: int | None = None,
    exclude_zero: bool = True,
) -> tuple[int, float]:
    """Reference O(n) scan with the same tie-breaking as BoxGrid.nearest."""
    diff = points - points[i]
    d = np.sqrt(np.einsum("ij,ij->i", diff, diff))
    idx = np.arange(points.shape[0])
    mask = np.abs(idx - i) > theiler
    if limit is not None:
        mask &= idx <= limit
    if exclude_zero:
        mask &= d > 0.0
    if not mask.any():
        return -1, math.inf
    d = np.where(mask, d, math.inf)
    j = int(np.argmin(d))
    return j, float(d[j])

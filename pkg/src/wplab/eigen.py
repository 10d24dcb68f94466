"""Eigendecomposition of real symmetric tridiagonal matrices.

Implicit-shift QL iteration with Wilkinson shifts, accumulating the
rotations into the eigenvector matrix.  Restricted to tridiagonal input
on purpose: every conserved-number block of the two-mode model is
tridiagonal, and the restricted solver is small enough to test fully.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

_EPS = np.finfo(np.float64).eps
_MAX_SWEEPS = 50


class NoConvergenceError(RuntimeError):
    """An eigenvalue failed to converge within the sweep budget."""


@dataclass(frozen=True)
class SymTridiag:
    diag: np.ndarray
    offdiag: np.ndarray

    def __post_init__(self):
        d = np.ascontiguousarray(self.diag, dtype=np.float64)
        e = np.ascontiguousarray(self.offdiag, dtype=np.float64)
        if d.ndim != 1 or d.size < 1:
            raise ValueError("diag must be a nonempty 1-D sequence")
        if e.shape != (d.size - 1,):
            raise ValueError("offdiag must have length len(diag) - 1")
        if not (np.all(np.isfinite(d)) and np.all(np.isfinite(e))):
            raise ValueError("matrix entries must be finite")
        d.setflags(write=False)
        e.setflags(write=False)
        object.__setattr__(self, "diag", d)
        object.__setattr__(self, "offdiag", e)

    @property
    def dim(self) -> int:
        return self.diag.size

    def to_dense(self) -> np.ndarray:
        h = np.diag(self.diag)
        idx = np.arange(self.dim - 1)
        h[idx, idx + 1] = self.offdiag
        h[idx + 1, idx] = self.offdiag
        return h


@dataclass(frozen=True)
class EigenDecomposition:
    """Ascending eigenvalues; column s of eigenvectors belongs to eigenvalue s."""

    eigenvalues: np.ndarray
    eigenvectors: np.ndarray

    def __post_init__(self):
        w = np.ascontiguousarray(self.eigenvalues, dtype=np.float64)
        v = np.ascontiguousarray(self.eigenvectors, dtype=np.float64)
        w.setflags(write=False)
        v.setflags(write=False)
        object.__setattr__(self, "eigenvalues", w)
        object.__setattr__(self, "eigenvectors", v)

    @property
    def dim(self) -> int:
        return self.eigenvalues.size


def _fix_signs(v: np.ndarray) -> None:
    """Flip columns so the first significant component is positive."""
    scale = np.max(np.abs(v), axis=0)
    for s in range(v.shape[1]):
        col = v[:, s]
        nz = np.flatnonzero(np.abs(col) > 1e-12 * scale[s])
        if nz.size and col[nz[0]] < 0.0:
            col *= -1.0


def decompose(m: SymTridiag) -> EigenDecomposition:
    """Full eigendecomposition; deterministic for identical input."""
    n = m.dim
    d = m.diag.copy()
    e = np.zeros(n)
    e[: n - 1] = m.offdiag
    v = np.eye(n)

    for l in range(n):
        sweeps = 0
        while True:
            for mm in range(l, n - 1):
                dd = abs(d[mm]) + abs(d[mm + 1])
                if abs(e[mm]) <= _EPS * dd:
                    break
            else:
                mm = n - 1
            if mm == l:
                break
            sweeps += 1
            if sweeps > _MAX_SWEEPS:
                raise NoConvergenceError(
                    f"eigenvalue {l} did not converge in {_MAX_SWEEPS} sweeps"
                )
            # Wilkinson shift from the leading 2x2
            g = (d[l + 1] - d[l]) / (2.0 * e[l])
            r = math.hypot(g, 1.0)
            g = d[mm] - d[l] + e[l] / (g + math.copysign(r, g))
            s = c = 1.0
            p = 0.0
            for i in range(mm - 1, l - 1, -1):
                f = s * e[i]
                b = c * e[i]
                r = math.hypot(f, g)
                e[i + 1] = r
                if r == 0.0:
                    # recover from underflow: skip the trailing update
                    d[i + 1] -= p
                    e[mm] = 0.0
                    break
                s = f / r
                c = g / r
                g = d[i + 1] - p
                r = (d[i] - g) * s + 2.0 * c * b
                p = s * r
                d[i + 1] = g + p
                g = c * r - b
                col = v[:, i + 1].copy()
                v[:, i + 1] = s * v[:, i] + c * col
                v[:, i] = c * v[:, i] - s * col
            else:
                d[l] -= p
                e[l] = g
                e[mm] = 0.0

    order = np.argsort(d, kind="stable")
    d = d[order]
    v = v[:, order]
    _fix_signs(v)
    return EigenDecomposition(d, v)

"""Two coupled bosonic modes: linear field mode, anharmonic second mode.

The total excitation number is conserved, so the Hamiltonian splits into
symmetric tridiagonal blocks of dimension N+1 acting on the states
|N-n; n> (field count N-n, second-mode count n).  Each block is
diagonalized once and the time dependence is evaluated from exact
eigenvalue exponentials; there is no integration error.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .eigen import EigenDecomposition, SymTridiag, decompose
from .fock import FockState, mean_photon_number  # noqa: F401
from .series import TimeSeries

TWO_PI_LD = np.longdouble("6.2831853071795864769252867665590057684")

# sectors fed by less field-state probability than this are dropped
SECTOR_PRUNE_MASS = 1e-14


@dataclass(frozen=True)
class TwoModeParams:
    omega: float = 1.0
    omega0: float = 1.0
    gamma: float = 0.0
    g: float = 1.0

    def __post_init__(self):
        vals = (self.omega, self.omega0, self.gamma, self.g)
        if not all(math.isfinite(v) for v in vals):
            raise ValueError("parameters must be finite")
        if self.g < 0:
            raise ValueError("coupling g must be nonnegative")


@dataclass(frozen=True)
class SectorState:
    """One conserved-N block: spectrum plus the initial data feeding it."""

    N: int
    eig: EigenDecomposition
    initial_coeffs: np.ndarray  # eigenbasis expansion of the starting vector
    initial_amp: complex  # field amplitude c_N routed into this block

    def __post_init__(self):
        w = np.ascontiguousarray(self.initial_coeffs, dtype=np.complex128)
        w.setflags(write=False)
        object.__setattr__(self, "initial_coeffs", w)


def build_sector(N: int, p: TwoModeParams) -> SymTridiag:
    """Tridiagonal block of the Hamiltonian at total number N.

    Basis index n = 0..N counts the second mode: diagonal
    omega*(N-n) + omega0*n + gamma*n*(n-1), coupling g*sqrt(n*(N-n+1))
    between n-1 and n.
    """
    if N < 0:
        raise ValueError("N must be >= 0")
    n = np.arange(N + 1, dtype=np.float64)
    diag = p.omega * (N - n) + p.omega0 * n + p.gamma * n * (n - 1.0)
    ncpl = np.arange(1, N + 1, dtype=np.float64)
    offdiag = p.g * np.sqrt(ncpl * (N - ncpl + 1.0))
    return SymTridiag(diag, offdiag)


def decompose_initial(
    field: FockState, p: TwoModeParams, prune_mass: float = SECTOR_PRUNE_MASS
) -> list[SectorState]:
    """Sector data for the product state (field) x (second mode ground).

    With the second mode empty, sector N starts in basis vector n = 0 and
    receives the field amplitude c_N.  Sectors carrying squared amplitude
    below ``prune_mass`` are skipped.
    """
    sectors = []
    for N, amp in enumerate(field.amplitudes):
        if abs(amp) ** 2 < prune_mass:
            continue
        eig = decompose(build_sector(N, p))
        # expansion of e_0 over eigenvectors: row 0 of the eigenvector matrix
        coeffs = eig.eigenvectors[0, :].astype(np.complex128)
        sectors.append(SectorState(N, eig, coeffs, complex(amp)))
    return sectors


def _reduced_phases(lam: np.ndarray, t: float) -> np.ndarray:
    arg = lam.astype(np.longdouble) * np.longdouble(t)
    return np.mod(arg, TWO_PI_LD).astype(np.float64)


@dataclass(frozen=True)
class OccupancySeries:
    """Field and second-mode occupation numbers plus the state norm."""

    field: TimeSeries
    atom: TimeSeries
    norm: np.ndarray


def occupancy_series(
    sectors: list[SectorState],
    p: TwoModeParams,
    dt: float,
    steps: int,
) -> OccupancySeries:
    """<a+a>(t), <b+b>(t) and the total squared norm at t = k*dt."""
    if steps < 1:
        raise ValueError("steps must be >= 1")
    if not sectors:
        raise ValueError("no sectors to evolve")
    dmax = max(s.N + 1 for s in sectors)
    block = max(1, min(10_000, 2_000_000 // dmax))

    field_occ = np.zeros(steps)
    atom_occ = np.zeros(steps)
    norm = np.zeros(steps)

    # per-sector constants
    prepped = []
    for s in sectors:
        lam = s.eig.eigenvalues
        vt = np.ascontiguousarray(s.eig.eigenvectors.T).astype(np.complex128)
        step_rot = np.exp(-1j * _reduced_phases(lam, dt))
        n_vec = np.arange(s.N + 1, dtype=np.float64)
        weight = abs(s.initial_amp) ** 2
        prepped.append((s, lam, vt, step_rot, n_vec, weight))

    k0 = 0
    while k0 < steps:
        b = min(block, steps - k0)
        for s, lam, vt, step_rot, n_vec, weight in prepped:
            dim = s.N + 1
            z = np.empty((b, dim), dtype=np.complex128)
            z[0] = s.initial_coeffs * np.exp(-1j * _reduced_phases(lam, k0 * dt))
            if b > 1:
                z[1:] = step_rot
                np.cumprod(z, axis=0, out=z)
            u = z @ vt  # site-basis amplitudes u_n(t) per row
            prob = u.real**2 + u.imag**2
            occ = prob @ n_vec
            total = prob.sum(axis=1)
            field_occ[k0 : k0 + b] += weight * (s.N * total - occ)
            atom_occ[k0 : k0 + b] += weight * occ
            norm[k0 : k0 + b] += weight * total
        k0 += b

    meta = {
        "model": "bipartite",
        "omega": p.omega,
        "omega0": p.omega0,
        "gamma": p.gamma,
        "g": p.g,
        "sectors": len(sectors),
        "steps": steps,
    }
    return OccupancySeries(
        field=TimeSeries(dt, field_occ, observable="photon_number", meta=meta),
        atom=TimeSeries(dt, atom_occ, observable="atom_number", meta=dict(meta)),
        norm=norm,
    )


def photon_number_series(
    sectors: list[SectorState],
    p: TwoModeParams,
    dt: float,
    steps: int,
) -> TimeSeries:
    """Field observable <a+a>(t) sampled at t = k*dt."""
    return occupancy_series(sectors, p, dt, steps).field

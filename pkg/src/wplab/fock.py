"""Truncated Fock-space states of a single bosonic mode.

Coherent states and photon-added coherent states are built from
log-domain amplitude recursions, so photon numbers of a few hundred
never overflow, then renormalized on the truncated basis.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional

import numpy as np

DEFAULT_EPSILON_TRUNC = 1e-12


class TruncationInsufficientError(ValueError):
    """The truncated basis misses more probability mass than allowed."""


class CapExceededError(ValueError):
    """No truncation index within the hard cap meets the tolerance."""


@dataclass(frozen=True)
class Provenance:
    """Nominal (alpha, m) parameters a state was constructed from."""

    alpha: complex
    m: int


@dataclass(frozen=True)
class TruncationPolicy:
    epsilon_trunc: float = DEFAULT_EPSILON_TRUNC
    n_max_cap: int = 4096

    def __post_init__(self):
        if not 0 < self.epsilon_trunc < 1:
            raise ValueError("epsilon_trunc must be in (0, 1)")
        if self.n_max_cap < 1:
            raise ValueError("n_max_cap must be >= 1")


@dataclass(frozen=True)
class FockState:
    """Complex amplitudes c_0..c_{n_max} over photon numbers, unit norm."""

    amplitudes: np.ndarray
    provenance: Optional[Provenance] = None

    def __post_init__(self):
        c = np.ascontiguousarray(self.amplitudes, dtype=np.complex128)
        c.setflags(write=False)
        object.__setattr__(self, "amplitudes", c)

    @property
    def n_max(self) -> int:
        return self.amplitudes.shape[0] - 1

    def norm_squared(self) -> float:
        return float(np.sum(np.abs(self.amplitudes) ** 2))


def laguerre(m: int, x: float) -> float:
    """Laguerre polynomial L_m(x) by the three-term recurrence."""
    if m < 0:
        raise ValueError("order must be nonnegative")
    if m == 0:
        return 1.0
    prev, cur = 1.0, 1.0 - x
    for k in range(1, m):
        prev, cur = cur, ((2 * k + 1 - x) * cur - k * prev) / (k + 1)
    return cur


def _log_factorials(n: int) -> np.ndarray:
    """ln(k!) for k = 0..n, accumulated term by term."""
    out = np.zeros(n + 1)
    if n >= 1:
        out[1:] = np.cumsum(np.log(np.arange(1, n + 1, dtype=np.float64)))
    return out


def _pacs_raw_amplitudes(alpha: complex, m: int, n_max: int) -> np.ndarray:
    """Amplitudes of (a+)^m |alpha> / sqrt(m! L_m(-nu)) on the basis 0..n_max.

    c_k = e^{-nu/2} alpha^{k-m} sqrt(k!) / (k-m)! / sqrt(m! L_m(-nu)),
    zero for k < m; evaluated through logs of the magnitudes.
    """
    nu = abs(alpha) ** 2
    c = np.zeros(n_max + 1, dtype=np.complex128)
    lnfact = _log_factorials(n_max)
    log_norm = 0.5 * (lnfact[m] + math.log(laguerre(m, -nu)))
    if alpha == 0:
        # photon-added vacuum is the Fock state |m>
        c[m] = math.exp(0.5 * lnfact[m] - log_norm)
        return c
    ks = np.arange(m, n_max + 1)
    log_mag = (
        -0.5 * nu
        + (ks - m) * math.log(abs(alpha))
        + 0.5 * lnfact[m:]
        - lnfact[: n_max + 1 - m]
        - log_norm
    )
    phases = (ks - m) * np.angle(alpha)
    with np.errstate(under="ignore"):
        c[m:] = np.exp(log_mag) * np.exp(1j * phases)
    return c


def _finalize(
    raw: np.ndarray, provenance: Provenance, epsilon_trunc: float
) -> FockState:
    """Check captured mass, then renormalize on the truncated basis.

    The stricter bound on the mass sitting in the last two kept states is
    guaranteed by choosing n_max through ``choose_truncation``.
    """
    norm_sq = float(np.sum(np.abs(raw) ** 2))
    if norm_sq < 1.0 - epsilon_trunc:
        raise TruncationInsufficientError(
            f"truncated basis captures squared norm {norm_sq:.15g} "
            f"< 1 - {epsilon_trunc:g}; increase n_max"
        )
    return FockState(raw / math.sqrt(norm_sq), provenance)


def coherent_amplitudes(
    alpha: complex, n_max: int, epsilon_trunc: float = DEFAULT_EPSILON_TRUNC
) -> FockState:
    """Coherent state |alpha> truncated at n_max and renormalized."""
    if n_max < 1:
        raise ValueError("n_max must be >= 1")
    raw = _pacs_raw_amplitudes(alpha, 0, n_max)
    return _finalize(raw, Provenance(complex(alpha), 0), epsilon_trunc)


def pacs_amplitudes(
    alpha: complex, m: int, n_max: int, epsilon_trunc: float = DEFAULT_EPSILON_TRUNC
) -> FockState:
    """m-photon-added coherent state, truncated and renormalized.

    m = 0 reproduces ``coherent_amplitudes`` exactly (same code path).
    """
    if m < 0:
        raise ValueError("m must be >= 0")
    if n_max < m + 1:
        raise ValueError("n_max must be >= m + 1")
    raw = _pacs_raw_amplitudes(alpha, m, n_max)
    return _finalize(raw, Provenance(complex(alpha), m), epsilon_trunc)


def mean_photon_number(state: FockState) -> float:
    p = np.abs(state.amplitudes) ** 2
    return float(np.dot(np.arange(p.size), p))


def photon_number_variance(state: FockState) -> float:
    p = np.abs(state.amplitudes) ** 2
    ns = np.arange(p.size)
    mean = float(np.dot(ns, p))
    return float(np.dot(ns * ns, p)) - mean * mean


def quadrature_expectation(state: FockState) -> float:
    """<x> with x = (a + a+)/sqrt(2)."""
    c = state.amplitudes
    sqrt_n = np.sqrt(np.arange(1, c.size))
    return float(math.sqrt(2.0) * np.real(np.dot(np.conj(c[:-1]) * c[1:], sqrt_n)))


def overlap(s1: FockState, s2: FockState) -> complex:
    if s1.n_max != s2.n_max:
        raise ValueError(
            f"dimension mismatch: n_max {s1.n_max} vs {s2.n_max}"
        )
    return complex(np.vdot(s1.amplitudes, s2.amplitudes))


def choose_truncation(
    alpha: complex, m: int, policy: TruncationPolicy = TruncationPolicy()
) -> int:
    """Smallest n_max within the cap whose truncation loses < epsilon_trunc.

    Starts from a heuristic guess, then verifies by explicit summation of the
    analytically normalized amplitudes; both the out-of-basis mass and the
    mass in the last two kept states must be below the tolerance.
    """
    nu = abs(alpha) ** 2
    guess = int(math.ceil(nu + m + 8.0 * math.sqrt(nu + 1.0) + 20.0))
    cap = policy.n_max_cap
    probe = min(cap, max(guess, m + 2))
    eps = policy.epsilon_trunc

    def tail_ok(upto: int) -> np.ndarray:
        # boolean per candidate n: out-of-basis and last-two mass both < eps
        raw = _pacs_raw_amplitudes(alpha, m, upto)
        p = np.abs(raw) ** 2
        cum = np.cumsum(p)
        out_mass = 1.0 - cum
        last_two = p.copy()
        last_two[1:] += p[:-1]
        return (out_mass < eps) & (last_two < eps)

    lo = max(1, m + 1)
    while True:
        ok = tail_ok(probe)
        hits = np.flatnonzero(ok[lo:]) + lo
        if hits.size:
            return int(hits[0])
        if probe >= cap:
            raise CapExceededError(
                f"no n_max <= {cap} reaches tail mass < {eps:g} "
                f"for nu={nu:g}, m={m}"
            )
        probe = min(cap, probe * 2)

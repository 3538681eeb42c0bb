"""Singular-value spectra, power allocation, and capacity bounds.

SNR convention: unit noise variance per receive antenna and total transmit
power equal to ``snr_linear``, with unit-modulus channel entries.  Under
this normalization single-stream beamforming over an N_t x N_r channel
yields log2(1 + snr * N_t * N_r), and the reconfiguration crossovers of a
4x4 link land at -3.01 dB and +3.01 dB.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from ._search import golden_max
from .channel import ChannelMatrix
from .errors import InvalidArgumentError, NoSignalError

_LN2 = math.log(2.0)
_ZERO_GAIN_RTOL = 1e-12  # gains this far below the top one count as exact zeros


@dataclass(frozen=True, eq=False)
class GainSpectrum:
    """Squared singular values, sorted descending."""

    gains: np.ndarray = field(repr=False)
    n_t: int
    n_r: int

    def __post_init__(self):
        for n, name in ((self.n_t, "n_t"), (self.n_r, "n_r")):
            if not isinstance(n, (int, np.integer)) or n < 1:
                raise InvalidArgumentError(f"{name} must be a positive integer")
        g = np.asarray(self.gains, dtype=float)
        if g.ndim != 1 or not np.all(np.isfinite(g)):
            raise InvalidArgumentError("gains must be a finite 1-D array")
        if np.any(g < 0):
            raise InvalidArgumentError("gains must be non-negative")
        if g.size != min(self.n_t, self.n_r):
            raise InvalidArgumentError(
                f"expected min(n_t, n_r) = {min(self.n_t, self.n_r)} gains, got {g.size}"
            )
        top = g[0] if g.size else 0.0
        if np.any(np.diff(g) > 1e-12 * max(top, 1.0)):
            raise InvalidArgumentError("gains must be sorted descending")
        g = g.copy()
        g.setflags(write=False)
        object.__setattr__(self, "gains", g)

    @property
    def frobenius_total(self) -> float:
        return float(self.gains.sum())


@dataclass(frozen=True, eq=False)
class PowerAllocation:
    """Fractions of the total transmit power per spatial mode (sums to 1)."""

    fractions: np.ndarray = field(repr=False)

    def __post_init__(self):
        p = np.asarray(self.fractions, dtype=float)
        if p.ndim != 1 or not np.all(np.isfinite(p)):
            raise InvalidArgumentError("fractions must be a finite 1-D array")
        if np.any(p < 0) or np.any(p > 1):
            raise InvalidArgumentError("fractions must lie in [0, 1]")
        if abs(p.sum() - 1.0) > 1e-12:
            raise InvalidArgumentError("fractions must sum to 1 within 1e-12")
        p = p.copy()
        p.setflags(write=False)
        object.__setattr__(self, "fractions", p)


@dataclass(frozen=True, eq=False)
class RateReport:
    """Waterfilling spectral efficiency bundled with the matching upper bound."""

    snr_linear: float
    spectral_efficiency_bpshz: float
    allocation: PowerAllocation
    active_rank: int
    upper_bound_bpshz: float

    def __post_init__(self):
        if not (np.isfinite(self.snr_linear) and self.snr_linear > 0):
            raise InvalidArgumentError("snr_linear must be positive")
        if self.spectral_efficiency_bpshz > self.upper_bound_bpshz + 1e-9:
            raise InvalidArgumentError(
                "spectral efficiency exceeds the capacity upper bound"
            )
        active = int(np.count_nonzero(self.allocation.fractions > 0))
        if self.active_rank != active:
            raise InvalidArgumentError(
                f"active_rank {self.active_rank} != {active} positive fractions"
            )

    @property
    def snr_db(self) -> float:
        return 10.0 * math.log10(self.snr_linear)


def _check_snr(snr_linear: float):
    if not (np.isfinite(snr_linear) and snr_linear > 0):
        raise InvalidArgumentError(f"snr_linear must be positive, got {snr_linear!r}")


def gain_spectrum(h: ChannelMatrix) -> GainSpectrum:
    """Squared singular values of the channel, descending."""
    entries = h.entries
    if not np.all(np.isfinite(entries)):
        raise InvalidArgumentError("channel entries must be finite")
    s = np.linalg.svd(entries, compute_uv=False)
    return GainSpectrum(s * s, n_t=h.n_t, n_r=h.n_r)


def waterfilling(spectrum: GainSpectrum, snr_linear: float):
    """KKT-optimal power split over the gains at the given SNR.

    Returns (PowerAllocation, spectral_efficiency_bpshz).  Water level mu
    satisfies p_i = max(0, mu - 1/(snr*g_i)) with the fractions summing
    to one; gains more than twelve decades below the strongest count as
    zero so numerical noise never receives power.
    """
    _check_snr(snr_linear)
    g = spectrum.gains
    if g.size == 0 or g[0] <= 0:
        raise NoSignalError("all channel gains are zero")
    n_active = int(np.count_nonzero(g > _ZERO_GAIN_RTOL * g[0]))
    inv = 1.0 / (snr_linear * g[:n_active])
    fractions = np.zeros(g.size)
    for k in range(n_active, 0, -1):
        mu = (1.0 + inv[:k].sum()) / k
        if mu - inv[k - 1] > 0:
            fractions[:k] = mu - inv[:k]
            break
    fractions /= fractions.sum()
    se = float(np.log1p(snr_linear * fractions[:n_active] * g[:n_active]).sum() / _LN2)
    return PowerAllocation(fractions), se


def uniform_rate(spectrum: GainSpectrum, snr_linear: float, rank: int) -> float:
    """Spectral efficiency of an even power split over the top ``rank`` modes."""
    _check_snr(snr_linear)
    if not isinstance(rank, (int, np.integer)) or not 1 <= rank <= spectrum.gains.size:
        raise InvalidArgumentError(
            f"rank must be an integer in [1, {spectrum.gains.size}], got {rank!r}"
        )
    g = spectrum.gains[:rank]
    return float(np.log1p(snr_linear * g / rank).sum() / _LN2)


def _polarized_value(n_t, n_r, rank, snr_linear):
    # scalar or vectorized over rank
    return rank * np.log1p(snr_linear * n_t * n_r / (rank * rank)) / _LN2


def polarized_rate(n_t: int, n_r: int, rank, snr_linear: float) -> float:
    """Rate of an ideal rank-r spectrum: r equal gains of n_t*n_r/r each.

    Closed form r*log2(1 + snr*n_t*n_r/r**2); accepts real ranks in
    [1, min(n_t, n_r)] since the capacity bound maximizes over them.
    """
    for n, name in ((n_t, "n_t"), (n_r, "n_r")):
        if not isinstance(n, (int, np.integer)) or n < 1:
            raise InvalidArgumentError(f"{name} must be a positive integer")
    _check_snr(snr_linear)
    if not (np.isfinite(rank) and 1 <= rank <= min(n_t, n_r)):
        raise InvalidArgumentError(
            f"rank must lie in [1, {min(n_t, n_r)}], got {rank!r}"
        )
    return float(_polarized_value(n_t, n_r, rank, snr_linear))


def capacity_upper_bound(n_t: int, n_r: int, snr_linear: float) -> float:
    """Best polarized rate over real rank r in [1, min(n_t, n_r)].

    A 64-point grid brackets the maximum and golden-section search refines
    it; the result is clamped to be at least the best integer rank, so the
    continuous bound always dominates the achievable envelope.
    """
    _check_snr(snr_linear)
    n_min = min(n_t, n_r)
    if not isinstance(n_min, (int, np.integer)) or n_min < 1:
        raise InvalidArgumentError("antenna counts must be positive integers")
    best_int = max(
        float(_polarized_value(n_t, n_r, r, snr_linear)) for r in range(1, n_min + 1)
    )
    if n_min == 1:
        return best_int
    grid = np.linspace(1.0, float(n_min), 64)
    vals = _polarized_value(n_t, n_r, grid, snr_linear)
    i = int(np.argmax(vals))
    lo = grid[max(i - 1, 0)]
    hi = grid[min(i + 1, grid.size - 1)]
    _, refined = golden_max(
        lambda r: float(_polarized_value(n_t, n_r, r, snr_linear)), lo, hi, tol=1e-9
    )
    return max(best_int, float(vals[i]), float(refined))


def capacity_upper_bound_integer(n_t: int, n_r: int, snr_linear: float):
    """Best integer rank and its polarized rate (ties go to the smaller rank)."""
    _check_snr(snr_linear)
    n_min = min(n_t, n_r)
    best_r, best_v = 1, float(_polarized_value(n_t, n_r, 1, snr_linear))
    for r in range(2, n_min + 1):
        v = float(_polarized_value(n_t, n_r, r, snr_linear))
        if v > best_v:
            best_r, best_v = r, v
    return best_r, best_v


def rate_report(h: ChannelMatrix, snr_linear: float) -> RateReport:
    """Waterfilling result plus the matching upper bound for one channel/SNR."""
    spectrum = gain_spectrum(h)
    allocation, se = waterfilling(spectrum, snr_linear)
    return RateReport(
        snr_linear=float(snr_linear),
        spectral_efficiency_bpshz=se,
        allocation=allocation,
        active_rank=int(np.count_nonzero(allocation.fractions > 0)),
        upper_bound_bpshz=capacity_upper_bound(spectrum.n_t, spectrum.n_r, snr_linear),
    )

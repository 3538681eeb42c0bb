"""LOS channel matrices under spherical, Fresnel, and planar wavefront models.

All three models keep every entry at unit modulus: common path loss is
absorbed into the SNR definition, so geometry enters only through phase.
The spherical model uses the exact pairwise distances; the Fresnel model
expands them about the link-axis distance between the array centroids
(transverse offsets to second order, longitudinal to first); the planar
model keeps only the first-order term and is rank-1 by construction.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from enum import Enum

import numpy as np

from .errors import (
    DegenerateGeometryError,
    InvalidArgumentError,
    NyquistViolationError,
)
from .geometry import LinkScene, projected_aperture

SPEED_OF_LIGHT_M_S = 299792458.0

_MIN_PAIR_DISTANCE_M = 1e-9
_UNIT_MODULUS_ATOL = 1e-12


class WavefrontModel(Enum):
    SPHERICAL = "spherical"
    FRESNEL = "fresnel"
    PLANAR = "planar"


class Validity(Enum):
    PLANAR_OK = "planar"
    SPHERICAL_REQUIRED = "spherical"


@dataclass(frozen=True, eq=False)
class DistanceMatrix:
    """Pairwise distances D[n, m] from transmit antenna m to receive antenna n."""

    entries: np.ndarray = field(repr=False)

    def __post_init__(self):
        e = np.asarray(self.entries, dtype=float)
        if e.ndim != 2:
            raise InvalidArgumentError("distance matrix must be 2-D")
        if not np.all(np.isfinite(e)) or np.any(e <= 0):
            raise InvalidArgumentError("distances must be finite and positive")
        e = e.copy()
        e.setflags(write=False)
        object.__setattr__(self, "entries", e)


@dataclass(frozen=True, eq=False)
class ChannelMatrix:
    """Unit-modulus complex channel; entry (n, m) carries phase -2*pi*D[n,m]/lambda."""

    entries: np.ndarray = field(repr=False)
    wavelength_m: float
    model: WavefrontModel

    def __post_init__(self):
        e = np.asarray(self.entries, dtype=complex)
        if e.ndim != 2:
            raise InvalidArgumentError("channel matrix must be 2-D")
        if not np.all(np.isfinite(e)):
            raise InvalidArgumentError("channel entries must be finite")
        if np.abs(np.abs(e) - 1.0).max() > _UNIT_MODULUS_ATOL:
            raise InvalidArgumentError("channel entries must have unit modulus")
        e = e.copy()
        e.setflags(write=False)
        object.__setattr__(self, "entries", e)

    @property
    def n_r(self) -> int:
        return self.entries.shape[0]

    @property
    def n_t(self) -> int:
        return self.entries.shape[1]


@dataclass(frozen=True, eq=False)
class PhaseProfile:
    """Unwrapped phase along a synthetic scan line plus polynomial fits.

    ``quadratic_fit`` holds (c0, c1, c2) with the phase modeled as
    c0 + c1*x + c2*x**2 over displacement x; ``linear_fit`` holds (b0, b1).
    """

    displacements_m: np.ndarray = field(repr=False)
    phase_rad: np.ndarray = field(repr=False)
    quadratic_fit: tuple[float, float, float]
    linear_fit: tuple[float, float]
    r2_quadratic: float
    r2_linear: float

    def __post_init__(self):
        x = np.asarray(self.displacements_m, dtype=float)
        p = np.asarray(self.phase_rad, dtype=float)
        if x.shape != p.shape or x.ndim != 1 or x.size < 3:
            raise InvalidArgumentError("profile needs >= 3 matched samples")
        if not (0 <= self.r2_quadratic <= 1 and 0 <= self.r2_linear <= 1):
            raise InvalidArgumentError("r2 values must lie in [0, 1]")
        for arr, name in ((x, "displacements_m"), (p, "phase_rad")):
            arr = arr.copy()
            arr.setflags(write=False)
            object.__setattr__(self, name, arr)


def _pair_offsets(scene: LinkScene):
    tx = scene.tx_positions()
    rx = scene.rx_positions()
    delta = rx[:, None, :] - tx[None, :, :]
    return delta


def distance_matrix(scene: LinkScene) -> DistanceMatrix:
    """Exact Euclidean distances between every posed rx/tx antenna pair."""
    delta = _pair_offsets(scene)
    dist = np.sqrt((delta**2).sum(axis=-1))
    if dist.min() <= _MIN_PAIR_DISTANCE_M:
        raise DegenerateGeometryError(
            f"arrays intersect: minimum pair distance {dist.min():.3e} m"
        )
    return DistanceMatrix(dist)


def channel_matrix(scene: LinkScene, model: WavefrontModel) -> ChannelMatrix:
    """Unit-modulus channel for the scene under the requested wavefront model."""
    if not isinstance(model, WavefrontModel):
        raise InvalidArgumentError(f"unknown wavefront model {model!r}")
    lam = scene.wavelength_m
    k = 2 * np.pi / lam
    if model is WavefrontModel.SPHERICAL:
        dist = distance_matrix(scene).entries
        return ChannelMatrix(np.exp(-1j * k * dist), lam, model)

    delta = _pair_offsets(scene)
    eucl = np.sqrt((delta**2).sum(axis=-1))
    if eucl.min() <= _MIN_PAIR_DISTANCE_M:
        raise DegenerateGeometryError(
            f"arrays intersect: minimum pair distance {eucl.min():.3e} m"
        )

    if model is WavefrontModel.FRESNEL:
        sign = scene.link_sign
        zeta = delta[..., 2] * sign
        if zeta.min() <= 0:
            raise DegenerateGeometryError(
                "Fresnel expansion needs every pair separated along the link axis"
            )
        d_axial = (scene.rx_centroid()[2] - scene.tx_centroid()[2]) * sign
        transverse = delta[..., 0] ** 2 + delta[..., 1] ** 2
        dist = zeta + transverse / (2 * d_axial)
        return ChannelMatrix(np.exp(-1j * k * dist), lam, model)

    # PLANAR: first-order expansion about the centroid axis; the matrix is an
    # exact outer product, hence rank-1
    tx = scene.tx_positions()
    rx = scene.rx_positions()
    c_t = tx.mean(axis=0)
    c_r = rx.mean(axis=0)
    axis = c_r - c_t
    d_hat = float(np.sqrt((axis**2).sum()))
    if d_hat <= _MIN_PAIR_DISTANCE_M:
        raise DegenerateGeometryError("array centroids coincide")
    u = axis / d_hat
    proj_r = (rx - c_r) @ u
    proj_t = (tx - c_t) @ u
    if (d_hat + proj_r.min()) - proj_t.max() <= 0:
        raise DegenerateGeometryError(
            "planar expansion needs every pair separated along the link axis"
        )
    entries = np.exp(-1j * k * d_hat) * np.outer(
        np.exp(-1j * k * proj_r), np.exp(1j * k * proj_t)
    )
    return ChannelMatrix(entries, lam, model)


def validity_from_apertures(
    aperture_t_m: float, aperture_r_m: float, wavelength_m: float, distance_m: float
) -> Validity:
    """Planar model is adequate iff L_t * L_r < 4 * lambda * D."""
    if wavelength_m <= 0 or distance_m <= 0:
        raise InvalidArgumentError("wavelength and distance must be positive")
    if aperture_t_m < 0 or aperture_r_m < 0:
        raise InvalidArgumentError("apertures must be non-negative")
    if aperture_t_m * aperture_r_m < 4 * wavelength_m * distance_m:
        return Validity.PLANAR_OK
    return Validity.SPHERICAL_REQUIRED


def classify_validity(scene: LinkScene) -> Validity:
    """Classify whether the planar model suffices for this scene.

    Advisory only: any model may still be evaluated anywhere, which is what
    makes validity-region maps possible in the first place.
    """
    a_t = projected_aperture(scene.tx, scene.tx_pose.rotation)
    a_r = projected_aperture(scene.rx, scene.rx_pose.rotation)
    return validity_from_apertures(a_t, a_r, scene.wavelength_m, scene.separation_m)


def _r_squared(y: np.ndarray, fitted: np.ndarray) -> float:
    ss_tot = float(((y - y.mean()) ** 2).sum())
    if ss_tot == 0.0:
        return 1.0
    ss_res = float(((y - fitted) ** 2).sum())
    return float(min(1.0, max(0.0, 1.0 - ss_res / ss_tot)))


def phase_profile(
    tx_point,
    rx_start,
    step_m: float,
    n_steps: int,
    step_direction,
    wavelength_m: float,
) -> PhaseProfile:
    """Synthetic scan: move a receive point in uniform steps and fit its phase.

    The scan mimics measuring a wrapped phase at each position and then
    unwrapping it, so the path length may change by at most half a
    wavelength per step; a larger change aliases and raises
    :class:`NyquistViolationError` with the offending step index.
    """
    if not isinstance(n_steps, (int, np.integer)) or n_steps < 3:
        raise InvalidArgumentError("n_steps must be an integer >= 3")
    if not (np.isfinite(step_m) and step_m > 0):
        raise InvalidArgumentError("step_m must be positive")
    if not (np.isfinite(wavelength_m) and wavelength_m > 0):
        raise InvalidArgumentError("wavelength_m must be positive")
    tx = np.asarray(tx_point, dtype=float).reshape(3)
    start = np.asarray(rx_start, dtype=float).reshape(3)
    direction = np.asarray(step_direction, dtype=float).reshape(3)
    norm = np.linalg.norm(direction)
    if not np.isfinite(norm) or abs(norm - 1.0) > 1e-6:
        raise InvalidArgumentError("step_direction must be a unit vector")
    direction = direction / norm

    x = np.arange(n_steps) * step_m
    pts = start[None, :] + x[:, None] * direction[None, :]
    dist = np.linalg.norm(pts - tx[None, :], axis=1)
    if dist.min() <= 0:
        raise DegenerateGeometryError("scan passes through the transmit point")

    step_delta = np.abs(np.diff(dist))
    bad = step_delta >= wavelength_m / 2
    if bad.any():
        idx = int(np.argmax(bad))
        raise NyquistViolationError(idx, float(step_delta[idx]), wavelength_m)

    raw = -2 * np.pi * dist / wavelength_m
    phase = np.unwrap(np.angle(np.exp(1j * raw)))

    c2, c1, c0 = np.polyfit(x, phase, 2)
    b1, b0 = np.polyfit(x, phase, 1)
    quad = c0 + c1 * x + c2 * x**2
    lin = b0 + b1 * x
    return PhaseProfile(
        displacements_m=x,
        phase_rad=phase,
        quadratic_fit=(float(c0), float(c1), float(c2)),
        linear_fit=(float(b0), float(b1)),
        r2_quadratic=_r_squared(phase, quad),
        r2_linear=_r_squared(phase, lin),
    )

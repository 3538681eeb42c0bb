"""SNR-adaptive architecture selection and parameter sweeps.

Covers the rotating-ULA angle search, selection among a handful of fixed
array orientations, rank scheduling for arrays of subarrays, and generic
sweeps over SNR, channel parameter eta, carrier frequency, rotation, and
misalignment (tilt and transverse offset).
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from enum import Enum
from itertools import combinations

import numpy as np

from ._search import golden_max
from .capacity import (
    PowerAllocation,
    RateReport,
    capacity_upper_bound,
    gain_spectrum,
    rate_report,
    waterfilling,
)
from .channel import SPEED_OF_LIGHT_M_S, WavefrontModel, channel_matrix
from .errors import (
    IncompatibleModeError,
    InvalidArgumentError,
    LosMimoError,
    UnsupportedArchetypeError,
)
from .geometry import (
    Archetype,
    LinkScene,
    RigidPose,
    build_aosa,
    link_scene,
    rotate_in_link_plane,
    scale_layout,
)

_ROTATION_GRID_POINTS = 65
_ANGLE_CANDIDATES = 33
_ANGLE_TOL_RAD = 1e-4


class SweepVariable(Enum):
    SNR_DB = "snr"
    ETA = "eta"
    FREQUENCY_HZ = "freq"
    ROTATION_RAD = "rotation"
    TILT_RAD = "tilt"
    OFFSET_M = "offset"


@dataclass(frozen=True, eq=False)
class SweepSpec:
    """One swept variable over a grid, everything else held fixed."""

    variable: SweepVariable
    grid: np.ndarray = field(repr=False)
    base_scene: LinkScene
    model: WavefrontModel
    snr_db: float = 0.0

    def __post_init__(self):
        g = np.asarray(self.grid, dtype=float)
        if g.ndim != 1 or g.size == 0 or not np.all(np.isfinite(g)):
            raise InvalidArgumentError("sweep grid must be a non-empty finite 1-D array")
        if g.size > 1 and np.any(np.diff(g) <= 0):
            raise InvalidArgumentError("sweep grid must be strictly increasing")
        g = g.copy()
        g.setflags(write=False)
        object.__setattr__(self, "grid", g)


@dataclass(frozen=True)
class SweepPoint:
    """One evaluated grid point; ``error`` is set instead of ``report`` when
    the geometry at that point was unusable."""

    x_value: float
    snr_db: float
    report: RateReport | None
    config_descriptor: str
    error: str | None = None


@dataclass(frozen=True)
class PlanEntry:
    snr_db: float
    config_descriptor: str
    se_bpshz: float
    ub_bpshz: float
    active_rank: int


@dataclass(frozen=True, eq=False)
class ArchitecturePlan:
    """Best configuration per SNR, sorted by SNR."""

    entries: tuple[PlanEntry, ...]

    def __post_init__(self):
        object.__setattr__(self, "entries", tuple(self.entries))
        snrs = [e.snr_db for e in self.entries]
        if any(b <= a for a, b in zip(snrs, snrs[1:])):
            raise InvalidArgumentError("plan entries must be sorted by snr_db")
        for e in self.entries:
            if e.se_bpshz > e.ub_bpshz + 1e-9:
                raise InvalidArgumentError("plan entry exceeds the capacity bound")


def snr_db_to_linear(snr_db: float) -> float:
    return 10.0 ** (snr_db / 10.0)


def _require_ula_pair(scene: LinkScene, what: str):
    if scene.tx.archetype is not Archetype.ULA or scene.rx.archetype is not Archetype.ULA:
        raise UnsupportedArchetypeError(
            f"{what} requires ULA layouts at both ends, got "
            f"{scene.tx.archetype.value}/{scene.rx.archetype.value}"
        )


def _with_rotation(scene: LinkScene, angle_tx: float, angle_rx: float) -> LinkScene:
    """Re-pose both arrays from broadside by in-plane rotation angles."""
    return link_scene(
        scene.tx,
        scene.rx,
        scene.separation_m,
        scene.wavelength_m,
        tx_pose=rotate_in_link_plane(scene.tx, angle_tx),
        rx_pose=rotate_in_link_plane(scene.rx, angle_rx),
    )


def _with_eta(scene: LinkScene, eta: float) -> LinkScene:
    """Rescale both layouts so each broadside aperture hits sqrt(eta*lam*D*N)."""
    target = math.sqrt(eta * scene.wavelength_m * scene.separation_m * scene.n_min)
    scaled = []
    for layout in (scene.tx, scene.rx):
        if layout.aperture_m <= 0:
            raise IncompatibleModeError("eta sweep needs layouts with positive aperture")
        scaled.append(scale_layout(layout, target / layout.aperture_m))
    return link_scene(
        scaled[0],
        scaled[1],
        scene.separation_m,
        scene.wavelength_m,
        tx_pose=RigidPose(scene.tx_pose.rotation, np.zeros(3)),
        rx_pose=RigidPose(scene.rx_pose.rotation, np.zeros(3)),
    )


def _se_of_scene(scene: LinkScene, model: WavefrontModel, snr_linear: float) -> float:
    spectrum = gain_spectrum(channel_matrix(scene, model))
    _, se = waterfilling(spectrum, snr_linear)
    return se


def optimize_rotation(
    scene: LinkScene,
    snr_linear: float,
    model: WavefrontModel,
    independent: bool = False,
):
    """Best in-plane rotation of the arrays in [0, pi/2] at one SNR.

    By default both arrays turn by the same angle; with ``independent``
    each end gets its own angle and the result's first element is the
    (tx, rx) pair.  A 65-point grid scan brackets the optimum, golden
    section refines it to 1e-4 rad, and ties break toward the smaller
    angle (so a flat landscape reports broadside).
    """
    _require_ula_pair(scene, "optimize_rotation")
    grid = np.linspace(0.0, np.pi / 2, _ROTATION_GRID_POINTS)

    if not independent:
        ses = np.array([_se_of_scene(_with_rotation(scene, a, a), model, snr_linear) for a in grid])
        i = int(np.argmax(ses))  # first max: smallest angle wins ties
        best_angle, best_se = float(grid[i]), float(ses[i])
        lo, hi = grid[max(i - 1, 0)], grid[min(i + 1, grid.size - 1)]
        cand, cand_se = golden_max(
            lambda a: _se_of_scene(_with_rotation(scene, a, a), model, snr_linear),
            float(lo),
            float(hi),
            tol=_ANGLE_TOL_RAD,
        )
        if cand_se > best_se:
            best_angle, best_se = float(cand), float(cand_se)
        return best_angle, rate_report(
            channel_matrix(_with_rotation(scene, best_angle, best_angle), model),
            snr_linear,
        )

    coarse = np.linspace(0.0, np.pi / 2, _ANGLE_CANDIDATES)
    table = np.array(
        [
            [_se_of_scene(_with_rotation(scene, at, ar), model, snr_linear) for ar in coarse]
            for at in coarse
        ]
    )
    it, ir = np.unravel_index(int(np.argmax(table)), table.shape)
    angles = [float(coarse[it]), float(coarse[ir])]
    best_se = float(table[it, ir])
    for axis, idx in ((0, it), (1, ir)):
        lo = float(coarse[max(idx - 1, 0)])
        hi = float(coarse[min(idx + 1, coarse.size - 1)])

        def f(a, axis=axis):
            pair = list(angles)
            pair[axis] = a
            return _se_of_scene(_with_rotation(scene, pair[0], pair[1]), model, snr_linear)

        cand, cand_se = golden_max(f, lo, hi, tol=_ANGLE_TOL_RAD)
        if cand_se > best_se:
            angles[axis], best_se = float(cand), float(cand_se)
    report = rate_report(
        channel_matrix(_with_rotation(scene, angles[0], angles[1]), model), snr_linear
    )
    return (angles[0], angles[1]), report


def fixed_angle_plan(
    scene: LinkScene,
    angles,
    snr_grid_db,
    model: WavefrontModel,
) -> ArchitecturePlan:
    """Best of a fixed set of rotation angles at each SNR on the grid."""
    angles = [float(a) for a in angles]
    if not angles:
        raise InvalidArgumentError("at least one angle is required")
    snr_grid_db = [float(s) for s in snr_grid_db]
    if not snr_grid_db or any(b <= a for a, b in zip(snr_grid_db, snr_grid_db[1:])):
        raise InvalidArgumentError("snr_grid_db must be non-empty and increasing")
    order = sorted(range(len(angles)), key=lambda i: angles[i])
    spectra = {
        i: gain_spectrum(channel_matrix(_with_rotation(scene, angles[i], angles[i]), model))
        for i in order
    }
    n_t, n_r = scene.tx.element_count, scene.rx.element_count
    entries = []
    for snr_db in snr_grid_db:
        snr = snr_db_to_linear(snr_db)
        best_i, best_se, best_alloc = None, -np.inf, None
        for i in order:  # ascending angle, strict improvement: smaller angle wins ties
            alloc, se = waterfilling(spectra[i], snr)
            if se > best_se:
                best_i, best_se, best_alloc = i, se, alloc
        entries.append(
            PlanEntry(
                snr_db=snr_db,
                config_descriptor=f"rotation_rad={angles[best_i]:.12g}",
                se_bpshz=best_se,
                ub_bpshz=capacity_upper_bound(n_t, n_r, snr),
                active_rank=int(np.count_nonzero(best_alloc.fractions > 0)),
            )
        )
    return ArchitecturePlan(tuple(entries))


def select_fixed_angles(
    scene: LinkScene,
    k: int,
    snr_grid_db,
    model: WavefrontModel,
):
    """Pick k rotation angles minimizing the worst-case SE gap to the optimum.

    Candidates come from a 33-point grid on [0, pi/2]; the search is
    exhaustive for k <= 3 and augments the best triple greedily beyond
    that.  The gap at each SNR is measured against optimize_rotation.
    """
    if not isinstance(k, (int, np.integer)) or k < 1:
        raise InvalidArgumentError("k must be a positive integer")
    _require_ula_pair(scene, "select_fixed_angles")
    snr_grid_db = [float(s) for s in snr_grid_db]
    if not snr_grid_db:
        raise InvalidArgumentError("snr_grid_db must be non-empty")
    candidates = np.linspace(0.0, np.pi / 2, _ANGLE_CANDIDATES)
    spectra = [
        gain_spectrum(channel_matrix(_with_rotation(scene, a, a), model))
        for a in candidates
    ]
    snr_lin = [snr_db_to_linear(s) for s in snr_grid_db]
    table = np.array(
        [[waterfilling(sp, s)[1] for s in snr_lin] for sp in spectra]
    )  # candidate x snr
    ref = np.array(
        [optimize_rotation(scene, s, model)[1].spectral_efficiency_bpshz for s in snr_lin]
    )

    def worst_gap(idx_tuple):
        plan = table[list(idx_tuple)].max(axis=0)
        return float((1.0 - plan / ref).max())

    k_core = min(k, 3)
    best_combo, best_gap = None, np.inf
    for combo in combinations(range(candidates.size), k_core):
        gap = worst_gap(combo)
        if gap < best_gap:
            best_combo, best_gap = combo, gap
    chosen = list(best_combo)
    while len(chosen) < min(k, candidates.size):
        best_add, best_add_gap = None, np.inf
        for c in range(candidates.size):
            if c in chosen:
                continue
            gap = worst_gap(tuple(chosen) + (c,))
            if gap < best_add_gap:
                best_add, best_add_gap = c, gap
        chosen.append(best_add)
    return sorted(float(candidates[c]) for c in chosen[:k])


def _divisors(n: int):
    return [d for d in range(1, n + 1) if n % d == 0]


def aosa_schedule(
    n_total: int,
    scene_template: LinkScene,
    snr_grid_db,
    model: WavefrontModel,
    element_spacing_m: float | None = None,
) -> ArchitecturePlan:
    """Best subarray count per SNR for an n_total-antenna array of subarrays.

    For each divisor r of n_total the array splits into r clusters at the
    rank-r Rayleigh center spacing sqrt(lambda*D/r); elements within a
    cluster sit a quarter wavelength apart unless overridden.  Ties go to
    the smaller r (fewer, larger subarrays).
    """
    if not isinstance(n_total, (int, np.integer)) or n_total < 1:
        raise InvalidArgumentError("n_total must be a positive integer")
    snr_grid_db = [float(s) for s in snr_grid_db]
    if not snr_grid_db or any(b <= a for a, b in zip(snr_grid_db, snr_grid_db[1:])):
        raise InvalidArgumentError("snr_grid_db must be non-empty and increasing")
    lam = scene_template.wavelength_m
    dist = scene_template.separation_m
    elem = lam / 4 if element_spacing_m is None else float(element_spacing_m)
    spectra = {}
    for r in _divisors(int(n_total)):
        sub = math.sqrt(lam * dist / r)
        if n_total == 1:
            layout = build_aosa(1, 1, sub, min(elem, sub / 2))
        else:
            layout = build_aosa(int(n_total), r, sub, elem)
        scene_r = link_scene(layout, layout, dist, lam)
        spectra[r] = gain_spectrum(channel_matrix(scene_r, model))
    entries = []
    for snr_db in snr_grid_db:
        snr = snr_db_to_linear(snr_db)
        best_r, best_se, best_alloc = None, -np.inf, None
        for r in sorted(spectra):  # ascending r: smaller r wins ties
            alloc, se = waterfilling(spectra[r], snr)
            if se > best_se:
                best_r, best_se, best_alloc = r, se, alloc
        entries.append(
            PlanEntry(
                snr_db=snr_db,
                config_descriptor=f"aosa_r={best_r}",
                se_bpshz=best_se,
                ub_bpshz=capacity_upper_bound(int(n_total), int(n_total), snr),
                active_rank=int(np.count_nonzero(best_alloc.fractions > 0)),
            )
        )
    return ArchitecturePlan(tuple(entries))


def _beamforming_report(scene: LinkScene, snr_linear: float) -> RateReport:
    # aperture -> 0 limit: a single coherent beam with full array gain
    n_t, n_r = scene.tx.element_count, scene.rx.element_count
    fractions = np.zeros(min(n_t, n_r))
    fractions[0] = 1.0
    se = float(np.log1p(snr_linear * n_t * n_r) / math.log(2.0))
    return RateReport(
        snr_linear=snr_linear,
        spectral_efficiency_bpshz=se,
        allocation=PowerAllocation(fractions),
        active_rank=1,
        upper_bound_bpshz=capacity_upper_bound(n_t, n_r, snr_linear),
    )


def sweep(spec: SweepSpec, map_fn=map):
    """Evaluate a RateReport at every grid point, in grid order.

    ``map_fn`` may be any map-like callable (e.g. a process pool's map);
    point evaluation is pure.  Grid points whose geometry is degenerate
    come back as error entries rather than failing the whole sweep.
    """
    scene = spec.base_scene
    model = spec.model
    var = spec.variable
    if var is SweepVariable.ROTATION_RAD:
        _require_ula_pair(scene, "rotation sweep")

    if var is SweepVariable.SNR_DB:
        spectrum = gain_spectrum(channel_matrix(scene, model))

        def eval_point(x: float) -> SweepPoint:
            snr = snr_db_to_linear(x)
            alloc, se = waterfilling(spectrum, snr)
            report = RateReport(
                snr_linear=snr,
                spectral_efficiency_bpshz=se,
                allocation=alloc,
                active_rank=int(np.count_nonzero(alloc.fractions > 0)),
                upper_bound_bpshz=capacity_upper_bound(
                    spectrum.n_t, spectrum.n_r, snr
                ),
            )
            return SweepPoint(x, x, report, f"snr_db={x:.12g}")

        return list(map_fn(eval_point, spec.grid.tolist()))

    snr_fixed = snr_db_to_linear(spec.snr_db)
    rebuilders = {
        SweepVariable.ETA: ("eta", lambda x: _with_eta(scene, x)),
        SweepVariable.FREQUENCY_HZ: (
            "freq_hz",
            lambda x: LinkScene(
                scene.tx,
                scene.rx,
                scene.tx_pose,
                scene.rx_pose,
                scene.separation_m,
                SPEED_OF_LIGHT_M_S / x,
            ),
        ),
        SweepVariable.ROTATION_RAD: (
            "rotation_rad",
            lambda x: _with_rotation(scene, x, x),
        ),
        SweepVariable.TILT_RAD: (
            "tilt_rad",
            lambda x: link_scene(
                scene.tx,
                scene.rx,
                scene.separation_m,
                scene.wavelength_m,
                tx_pose=RigidPose(scene.tx_pose.rotation, np.zeros(3)),
                rx_pose=rotate_in_link_plane(scene.rx, x),
            ),
        ),
        SweepVariable.OFFSET_M: (
            "offset_m",
            lambda x: link_scene(
                scene.tx,
                scene.rx,
                scene.separation_m,
                scene.wavelength_m,
                tx_pose=RigidPose(scene.tx_pose.rotation, np.zeros(3)),
                rx_pose=RigidPose(scene.rx_pose.rotation, np.array([x, 0.0, 0.0])),
            ),
        ),
    }
    label, rebuild = rebuilders[var]

    def eval_point(x: float) -> SweepPoint:
        descriptor = f"{label}={x:.12g}"
        try:
            if var is SweepVariable.ETA and x == 0.0:
                # aperture -> 0 limit collapses to pure beamforming
                report = _beamforming_report(scene, snr_fixed)
            else:
                if var is SweepVariable.FREQUENCY_HZ and x <= 0:
                    raise InvalidArgumentError("frequency must be positive")
                if var is SweepVariable.ETA and x < 0:
                    raise InvalidArgumentError("eta must be non-negative")
                report = rate_report(channel_matrix(rebuild(x), model), snr_fixed)
            return SweepPoint(x, spec.snr_db, report, descriptor)
        except LosMimoError as exc:
            return SweepPoint(
                x, spec.snr_db, None, descriptor, error=f"{type(exc).__name__}: {exc}"
            )

    return list(map_fn(eval_point, spec.grid.tolist()))

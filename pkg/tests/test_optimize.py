import math

import numpy as np
import pytest

from losmimo import (
    IncompatibleModeError,
    InvalidArgumentError,
    SweepSpec,
    SweepVariable,
    WavefrontModel,
    aosa_schedule,
    build_aosa,
    build_uca,
    build_ula,
    capacity_upper_bound,
    channel_matrix,
    fixed_angle_plan,
    link_scene,
    optimize_rotation,
    rate_report,
    select_fixed_angles,
    snr_db_to_linear,
    sweep,
)

LAM = 1e-3
DIST = 10.0


def _ula_scene(eta=1.0, n=4, dist=DIST, lam=LAM):
    d = math.sqrt(eta * lam * dist / n)
    return link_scene(build_ula(n, d), build_ula(n, d), dist, lam)


def test_snr_db_to_linear():
    assert snr_db_to_linear(0.0) == 1.0
    assert snr_db_to_linear(10.0) == pytest.approx(10.0, rel=1e-15)
    assert snr_db_to_linear(-10.0) == pytest.approx(0.1, rel=1e-15)


def test_snr_sweep_matches_direct_reports():
    sc = _ula_scene()
    grid = np.array([-5.0, 0.0, 5.0])
    spec = SweepSpec(
        variable=SweepVariable.SNR_DB,
        grid=grid,
        base_scene=sc,
        model=WavefrontModel.FRESNEL,
        snr_db=0.0,
    )
    points = sweep(spec)
    h = channel_matrix(sc, WavefrontModel.FRESNEL)
    for point, snr_db in zip(points, grid):
        direct = rate_report(h, snr_db_to_linear(snr_db))
        assert point.x_value == snr_db
        assert point.snr_db == snr_db
        assert point.error is None
        assert point.report.spectral_efficiency_bpshz == pytest.approx(
            direct.spectral_efficiency_bpshz, rel=1e-12
        )
        assert point.config_descriptor == f"snr_db={snr_db:.12g}"


def test_eta_sweep_hits_beamforming_limit_at_zero():
    sc = _ula_scene()
    spec = SweepSpec(
        variable=SweepVariable.ETA,
        grid=np.array([0.0, 1.0]),
        base_scene=sc,
        model=WavefrontModel.FRESNEL,
        snr_db=10.0,
    )
    p0, p1 = sweep(spec)
    # eta -> 0: one coherent beam with the full N_t*N_r power gain
    assert p0.report.spectral_efficiency_bpshz == pytest.approx(
        math.log2(1 + 10.0 * 16), rel=1e-12
    )
    assert p0.report.active_rank == 1
    # eta = 1: Rayleigh spacing attains the bound at full rank
    assert p1.report.spectral_efficiency_bpshz == pytest.approx(
        4 * math.log2(11), rel=1e-9
    )


def test_sweep_records_errors_per_point_instead_of_raising():
    sc = _ula_scene()
    spec = SweepSpec(
        variable=SweepVariable.ETA,
        grid=np.array([-1.0, 1.0]),
        base_scene=sc,
        model=WavefrontModel.FRESNEL,
        snr_db=10.0,
    )
    bad, good = sweep(spec)
    assert bad.report is None
    assert bad.error is not None
    assert good.report is not None


def test_freq_sweep_rescales_wavelength():
    sc = _ula_scene()
    freq = 300e9
    spec = SweepSpec(
        variable=SweepVariable.FREQUENCY_HZ,
        grid=np.array([freq]),
        base_scene=sc,
        model=WavefrontModel.FRESNEL,
        snr_db=10.0,
    )
    (point,) = sweep(spec)
    lam = 299792458.0 / freq
    direct = link_scene(sc.tx, sc.rx, DIST, lam)
    expected = rate_report(
        channel_matrix(direct, WavefrontModel.FRESNEL), snr_db_to_linear(10.0)
    )
    assert point.report.spectral_efficiency_bpshz == pytest.approx(
        expected.spectral_efficiency_bpshz, rel=1e-12
    )


def test_rotation_sweep_needs_ulas():
    sc = link_scene(build_uca(4, 0.1), build_uca(4, 0.1), DIST, LAM)
    spec = SweepSpec(
        variable=SweepVariable.ROTATION_RAD,
        grid=np.array([0.0, 0.5]),
        base_scene=sc,
        model=WavefrontModel.FRESNEL,
        snr_db=10.0,
    )
    with pytest.raises(IncompatibleModeError):
        sweep(spec)


def test_offset_sweep_degrades_capacity_smoothly():
    sc = _ula_scene()
    spec = SweepSpec(
        variable=SweepVariable.OFFSET_M,
        grid=np.array([0.0, 0.5, 1.0]),
        base_scene=sc,
        model=WavefrontModel.SPHERICAL,
        snr_db=10.0,
    )
    points = sweep(spec)
    ses = [p.report.spectral_efficiency_bpshz for p in points]
    assert all(p.error is None for p in points)
    assert ses[0] > ses[-1]  # sliding off boresight costs capacity


def test_tilt_sweep_matches_manual_rotation():
    sc = _ula_scene()
    ang = 0.6
    spec = SweepSpec(
        variable=SweepVariable.TILT_RAD,
        grid=np.array([ang]),
        base_scene=sc,
        model=WavefrontModel.FRESNEL,
        snr_db=10.0,
    )
    (point,) = sweep(spec)
    from losmimo import rotate_in_link_plane

    manual = link_scene(
        sc.tx, sc.rx, DIST, LAM, rx_pose=rotate_in_link_plane(sc.rx, ang)
    )
    expected = rate_report(
        channel_matrix(manual, WavefrontModel.FRESNEL), snr_db_to_linear(10.0)
    )
    assert point.report.spectral_efficiency_bpshz == pytest.approx(
        expected.spectral_efficiency_bpshz, rel=1e-12
    )


def test_sweep_grid_must_increase():
    sc = _ula_scene()
    with pytest.raises(InvalidArgumentError):
        SweepSpec(
            variable=SweepVariable.SNR_DB,
            grid=np.array([1.0, 1.0]),
            base_scene=sc,
            model=WavefrontModel.FRESNEL,
            snr_db=0.0,
        )


def test_optimize_rotation_prefers_broadside_at_unit_eta_high_snr():
    sc = _ula_scene(eta=1.0)
    angle, report = optimize_rotation(sc, 10.0, WavefrontModel.FRESNEL)
    assert angle == pytest.approx(0.0, abs=1e-3)
    assert report.spectral_efficiency_bpshz == pytest.approx(
        4 * math.log2(11), rel=1e-6
    )


def test_optimize_rotation_dilutes_oversized_aperture():
    # eta = 2 broadside and both arrays turning together: the effective
    # eta shrinks by cos^2 per end, so cos^2(angle) = 1/2 restores eta = 1
    # and the bound is attained at full rank
    sc = _ula_scene(eta=2.0)
    snr = 10.0
    angle, report = optimize_rotation(sc, snr, WavefrontModel.FRESNEL)
    assert math.cos(angle) ** 2 == pytest.approx(0.5, abs=5e-3)
    assert report.spectral_efficiency_bpshz == pytest.approx(
        capacity_upper_bound(4, 4, snr), rel=1e-6
    )


def test_optimize_rotation_goes_endfire_at_low_snr():
    sc = _ula_scene(eta=1.0)
    angle, report = optimize_rotation(sc, 0.1, WavefrontModel.FRESNEL)
    assert angle == pytest.approx(math.pi / 2, abs=1e-3)
    assert report.active_rank == 1
    assert report.spectral_efficiency_bpshz == pytest.approx(
        math.log2(1 + 0.1 * 16), rel=1e-9
    )


def test_optimize_rotation_independent_matches_joint_for_symmetric_scene():
    sc = _ula_scene(eta=2.0)
    (at, ar), rep_pair = optimize_rotation(
        sc, 10.0, WavefrontModel.FRESNEL, independent=True
    )
    angle, rep_joint = optimize_rotation(sc, 10.0, WavefrontModel.FRESNEL)
    assert rep_pair.spectral_efficiency_bpshz >= rep_joint.spectral_efficiency_bpshz - 1e-6
    # cos(at)*cos(ar) controls the effective eta; the product matters
    assert math.cos(at) * math.cos(ar) == pytest.approx(
        math.cos(angle) ** 2, abs=2e-2
    )


def test_fixed_angle_plan_tracks_optimum_with_dense_angles():
    sc = _ula_scene(eta=1.0)
    angles = np.linspace(0.0, math.pi / 2, 65)
    grid = list(range(-10, 21))
    plan = fixed_angle_plan(sc, angles, grid, WavefrontModel.FRESNEL)
    assert len(plan.entries) == len(grid)
    for entry in plan.entries:
        _, ref = optimize_rotation(
            sc, snr_db_to_linear(entry.snr_db), WavefrontModel.FRESNEL
        )
        assert entry.se_bpshz >= ref.spectral_efficiency_bpshz - 1e-3
        assert entry.se_bpshz <= entry.ub_bpshz + 1e-9


def test_fixed_angle_plan_descriptor_names_the_winning_angle():
    sc = _ula_scene(eta=1.0)
    plan = fixed_angle_plan(sc, [0.0, math.pi / 2], [-10.0, 10.0], WavefrontModel.FRESNEL)
    assert plan.entries[0].config_descriptor == f"rotation_rad={math.pi / 2:.12g}"
    assert plan.entries[1].config_descriptor == "rotation_rad=0"


def test_select_fixed_angles_includes_extremes():
    sc = _ula_scene(eta=1.0)
    grid = list(range(-10, 21, 3))
    angles = select_fixed_angles(sc, 2, grid, WavefrontModel.FRESNEL)
    assert len(angles) == 2
    assert angles == sorted(angles)
    assert angles[0] == pytest.approx(0.0, abs=1e-9)
    assert angles[-1] == pytest.approx(math.pi / 2, abs=1e-9)


def test_aosa_schedule_rank_transitions():
    lam, dist = 1e-3, 10.0
    template = link_scene(
        build_aosa(4, 2, math.sqrt(lam * dist / 2), lam / 4),
        build_aosa(4, 2, math.sqrt(lam * dist / 2), lam / 4),
        dist,
        lam,
    )
    grid = [x * 0.5 for x in range(-16, 17)]
    plan = aosa_schedule(4, template, grid, WavefrontModel.FRESNEL)
    rs = [int(e.config_descriptor.split("=")[1]) for e in plan.entries]
    assert set(rs) <= {1, 2, 4}
    # the chosen subarray count only ever grows with snr
    assert all(b >= a for a, b in zip(rs, rs[1:]))
    assert rs[0] == 1 and rs[-1] == 4
    for entry in plan.entries:
        assert entry.se_bpshz <= entry.ub_bpshz + 1e-9


def test_aosa_schedule_rejects_non_increasing_grid():
    sc = _ula_scene()
    with pytest.raises(InvalidArgumentError):
        aosa_schedule(4, sc, [0.0, 0.0], WavefrontModel.FRESNEL)

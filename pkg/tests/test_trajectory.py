import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from spiralflow.errors import ConfigurationError, InputError
from spiralflow.trajectory import (
    GOLDEN_ANGLE_DEG,
    AcquisitionSchedule,
    DensityProfile,
    acceleration_factors,
    design_spiral_arm,
    local_pitch,
    read_trajectory,
    schedule_rotation,
    write_trajectory,
)


def test_arm_endpoints(default_arm):
    r = np.hypot(default_arm.samples[:, 0], default_arm.samples[:, 1])
    assert r[0] == 0.0
    assert 0.495 <= r[-1] <= 0.5
    default_arm.validate()


def test_radius_monotone_and_in_bounds(default_arm):
    r = np.hypot(default_arm.samples[:, 0], default_arm.samples[:, 1])
    assert np.all(np.diff(r) >= -1e-12)
    assert np.abs(default_arm.samples).max() <= 0.5 + 1e-12


def test_pitch_follows_density_profile(default_arm):
    # outer rim is 2.5x less densely sampled than the core
    ratio = local_pitch(default_arm, 0.5) / local_pitch(default_arm, 0.1)
    assert abs(ratio - 2.5) / 2.5 < 0.05


def test_uniform_profile_constant_pitch():
    arm = design_spiral_arm(192, DensityProfile(density_ratio=1.0), 1024)
    pitches = [local_pitch(arm, r) for r in np.linspace(0.1, 0.5, 9)]
    assert (max(pitches) - min(pitches)) / np.mean(pitches) < 0.02


def test_design_deterministic():
    a = design_spiral_arm(192, DensityProfile(), 1024)
    b = design_spiral_arm(192, DensityProfile(), 1024)
    assert np.array_equal(a.samples, b.samples)


def test_invalid_profile_rejected():
    with pytest.raises(ConfigurationError):
        DensityProfile(density_ratio=0.5)
    with pytest.raises(ConfigurationError):
        DensityProfile(inner_fraction=0.7, outer_fraction=0.5)
    with pytest.raises(ConfigurationError):
        design_spiral_arm(8, DensityProfile(), 1024)
    with pytest.raises(ConfigurationError):
        design_spiral_arm(192, DensityProfile(), 32)


def test_rotation_schedule_basics(default_schedule):
    g = default_schedule.base_angle_increment
    assert schedule_rotation(0, 0, default_schedule) == 0.0
    d = schedule_rotation(0, 1, default_schedule) - schedule_rotation(0, 0, default_schedule)
    assert abs(d - g) < 1e-12
    assert abs(schedule_rotation(1, 0, default_schedule) - (3 * g) % 360.0) < 1e-9


@given(frame=st.integers(0, 2000), arm=st.integers(0, 2))
@settings(max_examples=60, deadline=None)
def test_rotation_schedule_matches_loop_oracle(frame, arm):
    sched = AcquisitionSchedule()
    # independent oracle: accumulate the increment index by index
    angle = 0.0
    for _ in range(frame * sched.arms_per_frame + arm):
        angle = (angle + sched.base_angle_increment) % 360.0
    assert abs(schedule_rotation(frame, arm, sched) - angle) < 1e-6


def test_negative_indices_rejected(default_schedule):
    with pytest.raises(InputError):
        schedule_rotation(-1, 0, default_schedule)


def test_acceleration_default_design(default_arm, default_schedule):
    rep = acceleration_factors(default_arm, default_schedule, 192)
    assert abs(rep.inner_per_arm - 26.0) / 26.0 < 0.10
    assert abs(rep.outer_per_arm - 65.0) / 65.0 < 0.10
    assert abs(rep.inner_per_frame - 8.7) / 8.7 < 0.10
    assert abs(rep.outer_per_frame - 21.7) / 21.7 < 0.10


def test_per_frame_is_per_arm_over_arm_count(default_arm, default_schedule):
    rep = acceleration_factors(default_arm, default_schedule, 192)
    assert rep.inner_per_frame == rep.inner_per_arm / default_schedule.arms_per_frame
    assert rep.outer_per_frame == rep.outer_per_arm / default_schedule.arms_per_frame


def test_fully_sampled_design_reports_unity():
    sched = AcquisitionSchedule()
    arm = design_spiral_arm(128, DensityProfile(density_ratio=1.0), 4096,
                            core_undersampling=sched.arms_per_frame)
    rep = acceleration_factors(arm, sched, 128)
    assert abs(rep.inner_per_frame - 1.0) < 0.1
    assert abs(rep.outer_per_frame - 1.0) < 0.1


def test_acceleration_rotation_invariant(default_arm, default_schedule):
    rep0 = acceleration_factors(default_arm, default_schedule, 192)
    rep1 = acceleration_factors(default_arm.rotated(73.1), default_schedule, 192)
    assert np.isclose(rep0.inner_per_arm, rep1.inner_per_arm, rtol=1e-6)
    assert np.isclose(rep0.outer_per_arm, rep1.outer_per_arm, rtol=1e-6)


def max_circular_gap(angles_deg):
    a = np.sort(np.asarray(angles_deg) % 360.0)
    gaps = np.diff(np.concatenate([a, [a[0] + 360.0]]))
    return gaps.max()


def test_angular_coverage_improves_with_frames(default_schedule):
    gaps = []
    for n in range(1, 21):
        angles = [schedule_rotation(f, a, default_schedule)
                  for f in range(n) for a in range(3)]
        gaps.append(max_circular_gap(angles))
    assert all(b <= a + 1e-9 for a, b in zip(gaps, gaps[1:]))


def test_golden_angle_value():
    assert abs(GOLDEN_ANGLE_DEG - 137.5077640500378) < 1e-9


def test_frame_interval_and_count(default_schedule):
    assert default_schedule.frame_interval_ms == 35.0
    assert default_schedule.frame_count(180_000) == 5143


def test_inconsistent_frame_interval_rejected():
    with pytest.raises(ConfigurationError):
        AcquisitionSchedule(tr_ms=9.0)


def test_trajectory_export_round_trip(tmp_path, default_arm):
    path = tmp_path / "traj.bin"
    write_trajectory(default_arm, str(path), matrix_size=192, profile=DensityProfile())
    back = read_trajectory(str(path))
    assert np.allclose(back.samples, default_arm.samples, atol=1e-6)
    hdr = (tmp_path / "traj.bin.hdr").read_text()
    assert "samples_per_readout: 1024" in hdr
    assert "matrix_size: 192" in hdr

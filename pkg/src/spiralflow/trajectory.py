"""Variable-density golden-angle spiral design and interleave scheduling.

The arm is a constant-angular-velocity spiral whose local radial pitch
(radial advance per full turn) is inversely proportional to the sampling
density profile: a fully weighted core, a sparser rim, and a linear
transition in between.  Undersampling is quantified against the interleave
Nyquist criterion: a set of ``m`` rotated copies of the arm leaves radial
gaps of ``pitch(r)/m``, which must not exceed ``1/matrix_size``.
"""

from __future__ import annotations

import io
from dataclasses import dataclass

import numpy as np

from .errors import ConfigurationError, InputError

GOLDEN_ANGLE_DEG = 360.0 * (2.0 - (1.0 + np.sqrt(5.0)) / 2.0)  # ~137.5078

# interleaves needed for core Nyquist at the default matrix; together with the
# 2.5x density falloff this sets the per-arm undersampling of the design
DEFAULT_CORE_UNDERSAMPLING = 26.0


@dataclass(frozen=True)
class DensityProfile:
    """Radial sampling-density profile of the spiral."""

    inner_fraction: float = 0.2
    outer_fraction: float = 0.1
    density_ratio: float = 2.5

    def __post_init__(self):
        if self.density_ratio < 1.0:
            raise ConfigurationError("density_ratio must be >= 1")
        if not (0.0 < self.inner_fraction <= 1.0) or not (0.0 <= self.outer_fraction <= 1.0):
            raise ConfigurationError("profile fractions must lie in (0, 1]")
        if self.inner_fraction + self.outer_fraction > 1.0:
            raise ConfigurationError("inner_fraction + outer_fraction must be <= 1")

    def density(self, radius_fraction):
        """Relative sampling density at ``r/r_max`` (1 in the core)."""
        rf = np.asarray(radius_fraction, dtype=np.float64)
        lo = self.inner_fraction
        hi = 1.0 - self.outer_fraction
        rim = 1.0 / self.density_ratio
        if hi <= lo:
            return np.where(rf <= lo, 1.0, rim)
        t = np.clip((rf - lo) / (hi - lo), 0.0, 1.0)
        return 1.0 + t * (rim - 1.0)


@dataclass(frozen=True)
class SpiralArm:
    """One spiral readout: normalized k-space sample positions."""

    samples: np.ndarray  # (n, 2) float64, (kx, ky) in cycles/pixel
    dwell_ms: float = 0.0  # gradient-time spacing, informational

    @property
    def samples_per_readout(self) -> int:
        return self.samples.shape[0]

    def rotated(self, angle_deg: float) -> "SpiralArm":
        a = np.deg2rad(angle_deg)
        rot = np.array([[np.cos(a), -np.sin(a)], [np.sin(a), np.cos(a)]])
        return SpiralArm(self.samples @ rot.T, self.dwell_ms)

    def validate(self):
        r = np.hypot(self.samples[:, 0], self.samples[:, 1])
        if np.any(np.diff(r) < -1e-9):
            raise InputError("arm radius must be non-decreasing")
        if abs(r[0]) > 1e-9 or not (0.495 <= r[-1] <= 0.5 + 1e-9):
            raise InputError("arm must start at the origin and end at the Nyquist edge")
        if np.abs(self.samples).max() > 0.5 + 1e-9:
            raise InputError("samples must lie within [-0.5, 0.5]^2")


@dataclass(frozen=True)
class AcquisitionSchedule:
    """Interleave and velocity-encoding schedule.

    ``frame_interval_ms`` is the nominal temporal resolution used for
    timestamps and frame counting; at the defaults it is the stated 35.0 ms
    (the product 3 arms x 2 encodings x 5.8 ms rounds to it).
    """

    arms_per_frame: int = 3
    encodings_per_arm: int = 2
    base_angle_increment: float = GOLDEN_ANGLE_DEG
    tr_ms: float = 5.8
    venc_cm_s: float = 200.0
    frame_interval_ms: float = 35.0

    def __post_init__(self):
        if self.arms_per_frame < 1 or self.encodings_per_arm < 1:
            raise ConfigurationError("schedule counts must be positive")
        nominal = self.arms_per_frame * self.encodings_per_arm * self.tr_ms
        if abs(nominal - self.frame_interval_ms) > 0.05 * self.frame_interval_ms:
            raise ConfigurationError(
                f"frame interval {self.frame_interval_ms} ms inconsistent with "
                f"{self.arms_per_frame}x{self.encodings_per_arm}x{self.tr_ms} ms")

    def frame_count(self, duration_ms: float) -> int:
        """Frames whose acquisition starts before ``duration_ms``."""
        return int(np.ceil(duration_ms / self.frame_interval_ms))


def schedule_rotation(frame_idx: int, arm_idx: int, schedule: AcquisitionSchedule) -> float:
    """Rotation angle (degrees) of one arm; both encodings share it."""
    if frame_idx < 0 or arm_idx < 0:
        raise InputError("indices must be non-negative")
    k = frame_idx * schedule.arms_per_frame + arm_idx
    return (k * schedule.base_angle_increment) % 360.0


def design_spiral_arm(matrix_size: int, profile: DensityProfile,
                      readout_samples: int = 1024,
                      core_undersampling: float = DEFAULT_CORE_UNDERSAMPLING) -> SpiralArm:
    """Design the variable-density spiral arm.

    The core radial pitch is ``core_undersampling / matrix_size`` and widens
    by the inverse density profile toward the rim.  ``core_undersampling``
    is the number of interleaves that would be needed to sample the core
    fully; 1.0 gives a fully sampled single arm.
    """
    if matrix_size < 16:
        raise ConfigurationError("matrix_size must be >= 16")
    if readout_samples < 64:
        raise ConfigurationError("readout_samples must be >= 64")
    if core_undersampling <= 0:
        raise ConfigurationError("core_undersampling must be positive")

    kmax = 0.5
    pitch_core = core_undersampling / matrix_size
    # theta(r) = (2*pi/pitch_core) * integral_0^r density(s/kmax) ds, closed
    # form up to quadrature on a fine grid (density is piecewise linear)
    r_fine = np.linspace(0.0, kmax, 200_001)
    dens = profile.density(r_fine / kmax)
    theta_fine = np.concatenate(
        ([0.0], np.cumsum((dens[1:] + dens[:-1]) * 0.5 * np.diff(r_fine))))
    theta_fine *= 2.0 * np.pi / pitch_core
    theta = np.linspace(0.0, theta_fine[-1], readout_samples)
    r = np.interp(theta, theta_fine, r_fine)
    samples = np.column_stack((r * np.cos(theta), r * np.sin(theta)))
    return SpiralArm(samples)


def local_pitch(arm: SpiralArm, radius: float, half_band: float = 0.02) -> float:
    """Radial advance per turn at ``radius``, measured from the samples."""
    r = np.hypot(arm.samples[:, 0], arm.samples[:, 1])
    theta = np.unwrap(np.arctan2(arm.samples[:, 1], arm.samples[:, 0]))
    sel = (r >= radius - half_band) & (r <= radius + half_band)
    if sel.sum() < 2:
        # sparse sampling across the band: widen until two points are caught
        order = np.argsort(np.abs(r - radius))
        sel = np.zeros_like(sel)
        sel[order[:4]] = True
    slope = np.polyfit(r[sel], theta[sel], 1)[0]
    return 2.0 * np.pi / slope


@dataclass(frozen=True)
class AccelerationReport:
    inner_per_arm: float
    outer_per_arm: float
    inner_per_frame: float
    outer_per_frame: float

    @property
    def per_frame(self) -> tuple[float, float]:
        return (self.inner_per_frame, self.outer_per_frame)

    @property
    def per_arm(self) -> tuple[float, float]:
        return (self.inner_per_arm, self.outer_per_arm)


def acceleration_factors(arm: SpiralArm, schedule: AcquisitionSchedule,
                         matrix_size: int) -> AccelerationReport:
    """Undersampling of the inner-20% and outer-20% annuli.

    Per arm this is the ratio of interleaves needed for Nyquist (gap
    ``1/matrix_size``) to the single acquired arm, evaluated at the annulus
    midpoints; per frame it is divided by the arms acquired per frame.
    """
    kmax = 0.5
    inner = local_pitch(arm, 0.1 * kmax) * matrix_size
    outer = local_pitch(arm, 0.9 * kmax) * matrix_size
    m = schedule.arms_per_frame
    return AccelerationReport(inner, outer, inner / m, outer / m)


# --- binary export: little-endian f32 interleaved kx,ky + text sidecar ---

def write_trajectory(arm: SpiralArm, path: str, header_path: str | None = None,
                     matrix_size: int | None = None,
                     profile: DensityProfile | None = None) -> None:
    data = arm.samples.astype("<f4").reshape(-1)
    with open(path, "wb") as f:
        f.write(data.tobytes())
    lines = [f"samples_per_readout: {arm.samples_per_readout}",
             f"dwell_ms: {arm.dwell_ms}",
             "layout: interleaved kx,ky float32 little-endian"]
    if matrix_size is not None:
        lines.append(f"matrix_size: {matrix_size}")
    if profile is not None:
        lines.append(f"profile: inner={profile.inner_fraction} "
                     f"outer={profile.outer_fraction} ratio={profile.density_ratio}")
    with open(header_path or path + ".hdr", "w") as f:
        f.write("\n".join(lines) + "\n")


def read_trajectory(path: str) -> SpiralArm:
    with open(path, "rb") as f:
        raw = np.frombuffer(f.read(), dtype="<f4")
    if raw.size % 2:
        raise InputError("trajectory table has an odd float count")
    return SpiralArm(raw.astype(np.float64).reshape(-1, 2))


def arm_to_bytes(arm: SpiralArm) -> bytes:
    buf = io.BytesIO()
    buf.write(arm.samples.astype("<f4").tobytes())
    return buf.getvalue()


def arm_from_bytes(raw: bytes) -> SpiralArm:
    vals = np.frombuffer(raw, dtype="<f4")
    if vals.size % 2:
        raise InputError("trajectory table has an odd float count")
    return SpiralArm(vals.astype(np.float64).reshape(-1, 2))


def frame_coords(arm: SpiralArm, schedule: AcquisitionSchedule, frame_idx: int) -> np.ndarray:
    """Stacked (n_arms*n_samples, 2) coordinates of one frame's arms."""
    parts = [arm.rotated(schedule_rotation(frame_idx, a, schedule)).samples
             for a in range(schedule.arms_per_frame)]
    return np.vstack(parts)

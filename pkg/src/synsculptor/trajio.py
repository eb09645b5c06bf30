"""Trajectory ingest, validation, resampling, and differentiation.

On-disk format: a flat CSV with columns
    t, base_px, base_py, base_pz, base_qw, base_qx, base_qy, base_qz,
    joint_0 .. joint_{n-1}
plus optional velocity columns
    v_base_wx, v_base_wy, v_base_wz, v_base_px, v_base_py, v_base_pz,
    v_joint_0 .. v_joint_{n-1}
and a JSON sidecar {model, rate_hz, style, source} next to the CSV.
When velocity columns are absent they are derived by differentiate().

Timestamps must be uniform. Quaternions are renormalized when within
1e-3 of unit norm and rejected otherwise. NaNs are a hard error.
"""

from __future__ import annotations

import csv
import json
from dataclasses import dataclass, replace
from pathlib import Path
from typing import Optional

import numpy as np

from . import rotations as rot
from .kinmodel import KinematicModel

SOURCES = ("mocap", "synthesized", "external")
_FIXED_COLS = ("t", "base_px", "base_py", "base_pz", "base_qw", "base_qx", "base_qy", "base_qz")
_FIXED_VCOLS = ("v_base_wx", "v_base_wy", "v_base_wz", "v_base_px", "v_base_py", "v_base_pz")


class TrajectoryError(ValueError):
    """Trajectory file or data violates the format or an invariant."""


@dataclass
class JointTrajectory:
    """Uniformly sampled pose and velocity series for one model."""

    rate_hz: float
    times: np.ndarray
    positions: np.ndarray
    velocities: np.ndarray
    model: str
    style: Optional[str] = None
    source: Optional[str] = None

    @property
    def n_frames(self) -> int:
        return self.positions.shape[0]

    @property
    def duration_s(self) -> float:
        return float(self.times[-1] - self.times[0])

    def copy(self) -> "JointTrajectory":
        return replace(
            self,
            times=self.times.copy(),
            positions=self.positions.copy(),
            velocities=self.velocities.copy(),
        )


def _check_quaternions(positions: np.ndarray) -> np.ndarray:
    norms = np.linalg.norm(positions[:, 3:7], axis=1)
    dev = np.abs(norms - 1.0)
    if np.any(dev > 1e-3):
        k = int(np.argmax(dev))
        raise TrajectoryError(
            f"quaternion at frame {k} has norm {norms[k]:.6f}, beyond the 1e-3 repair limit"
        )
    positions = positions.copy()
    positions[:, 3:7] /= norms[:, None]
    return positions


def validate_trajectory(traj: JointTrajectory, model: Optional[KinematicModel] = None) -> None:
    """Check invariants; raises TrajectoryError with the first violation."""
    t, q, v = traj.times, traj.positions, traj.velocities
    if q.ndim != 2 or q.shape[0] < 2:
        raise TrajectoryError("trajectory must have at least 2 frames")
    if np.isnan(q).any() or np.isnan(v).any() or np.isnan(t).any():
        raise TrajectoryError("trajectory contains NaN values")
    dt = np.diff(t)
    if np.any(dt <= 0):
        raise TrajectoryError("timestamps must be strictly increasing")
    if np.max(np.abs(dt - 1.0 / traj.rate_hz)) > 1e-9:
        raise TrajectoryError("non-uniform sampling: timestamp jitter exceeds 1e-9 s")
    if v.shape != (q.shape[0], q.shape[1] - 1):
        raise TrajectoryError(
            f"velocity shape {v.shape} does not match positions {q.shape}"
        )
    norms = np.linalg.norm(q[:, 3:7], axis=1)
    if np.any(np.abs(norms - 1.0) > 1e-6):
        raise TrajectoryError("quaternion rows not unit within 1e-6")
    if traj.source is not None and traj.source not in SOURCES:
        raise TrajectoryError(f"source must be one of {SOURCES}, got {traj.source!r}")
    if model is not None:
        if q.shape[1] != model.n_q:
            raise TrajectoryError(
                f"dimension mismatch: {q.shape[1]} position columns, model "
                f"{model.name!r} expects {model.n_q}"
            )
        if traj.model != model.name:
            raise TrajectoryError(
                f"trajectory references model {traj.model!r}, got {model.name!r}"
            )


def make_trajectory(
    positions: np.ndarray,
    rate_hz: float,
    model: str,
    velocities: Optional[np.ndarray] = None,
    t0: float = 0.0,
    style: Optional[str] = None,
    source: Optional[str] = None,
    lowpass_hz: Optional[float] = None,
) -> JointTrajectory:
    """Build a validated trajectory; derives velocities when not given."""
    positions = _check_quaternions(np.asarray(positions, dtype=float))
    T = positions.shape[0]
    times = t0 + np.arange(T) / rate_hz
    if velocities is None:
        velocities = differentiate(positions, rate_hz, lowpass_hz=lowpass_hz)
    traj = JointTrajectory(
        rate_hz=float(rate_hz),
        times=times,
        positions=positions,
        velocities=np.asarray(velocities, dtype=float),
        model=model,
        style=style,
        source=source,
    )
    validate_trajectory(traj)
    return traj


def differentiate(
    positions: np.ndarray, rate_hz: float, lowpass_hz: Optional[float] = None
) -> np.ndarray:
    """Velocities from positions: central differences inside, second-order
    one-sided at the ends. The base-orientation rate is the world-frame
    quaternion-log rate of the relative rotation over each stencil.
    """
    q = np.asarray(positions, dtype=float)
    T = q.shape[0]
    if T < 3:
        raise TrajectoryError("differentiate needs at least 3 frames")
    h = 1.0 / rate_hz
    lin = np.concatenate([q[:, 0:3], q[:, 7:]], axis=1)
    dlin = np.empty_like(lin)
    dlin[1:-1] = (lin[2:] - lin[:-2]) / (2 * h)
    dlin[0] = (-3 * lin[0] + 4 * lin[1] - lin[2]) / (2 * h)
    dlin[-1] = (3 * lin[-1] - 4 * lin[-2] + lin[-3]) / (2 * h)

    quat = rot.quat_normalize(q[:, 3:7])
    omega = np.empty((T, 3))
    rel = rot.quat_multiply(quat[2:], rot.quat_conjugate(quat[:-2]))
    omega[1:-1] = rot.quat_to_rotvec(rel) / (2 * h)
    # ends: rotation vectors relative to the end frame, one-sided stencil
    r1 = rot.quat_to_rotvec(rot.quat_multiply(quat[1], rot.quat_conjugate(quat[0])))
    r2 = rot.quat_to_rotvec(rot.quat_multiply(quat[2], rot.quat_conjugate(quat[0])))
    omega[0] = (4 * r1 - r2) / (2 * h)
    r1 = rot.quat_to_rotvec(rot.quat_multiply(quat[-2], rot.quat_conjugate(quat[-1])))
    r2 = rot.quat_to_rotvec(rot.quat_multiply(quat[-3], rot.quat_conjugate(quat[-1])))
    omega[-1] = -(4 * r1 - r2) / (2 * h)

    v = np.concatenate([omega, dlin[:, 0:3], dlin[:, 3:]], axis=1)
    if lowpass_hz is not None:
        from scipy.signal import butter, filtfilt

        nyq = 0.5 * rate_hz
        if not 0.0 < lowpass_hz < nyq:
            raise TrajectoryError(f"lowpass cutoff must be in (0, {nyq}) Hz")
        b, a = butter(2, lowpass_hz / nyq)
        v = filtfilt(b, a, v, axis=0)
    return v


def resample(traj: JointTrajectory, new_rate_hz: float) -> JointTrajectory:
    """Resample to a new uniform rate over the same time span.

    Linear interpolation for base position and joints, spherical linear
    interpolation for the base quaternion; velocities are re-derived.
    Resampling to the same rate returns an identical copy.
    """
    if new_rate_hz <= 0:
        raise TrajectoryError("new rate must be positive")
    if abs(new_rate_hz - traj.rate_hz) < 1e-12:
        return traj.copy()
    t0 = traj.times[0]
    span = traj.times[-1] - t0
    n = int(np.floor(span * new_rate_hz + 1e-9)) + 1
    new_t = t0 + np.arange(n) / new_rate_hz
    # source index per output frame, independent of t0 so that shifting a
    # trajectory in time never changes the resampled values
    u = np.arange(n) * (traj.rate_hz / new_rate_hz)
    i0 = np.clip(np.floor(u).astype(int), 0, traj.n_frames - 2)
    frac = u - i0

    q = traj.positions
    lin0 = np.concatenate([q[:, 0:3], q[:, 7:]], axis=1)
    lin = lin0[i0] + frac[:, None] * (lin0[i0 + 1] - lin0[i0])
    quat = rot.quat_slerp(q[i0, 3:7], q[i0 + 1, 3:7], frac)
    positions = np.concatenate([lin[:, 0:3], quat, lin[:, 3:]], axis=1)
    return JointTrajectory(
        rate_hz=float(new_rate_hz),
        times=new_t,
        positions=positions,
        velocities=differentiate(positions, new_rate_hz),
        model=traj.model,
        style=traj.style,
        source=traj.source,
    )


def _columns(n_joints: int, with_velocities: bool):
    cols = list(_FIXED_COLS) + [f"joint_{i}" for i in range(n_joints)]
    if with_velocities:
        cols += list(_FIXED_VCOLS) + [f"v_joint_{i}" for i in range(n_joints)]
    return cols


def save_trajectory(traj: JointTrajectory, csv_path) -> Path:
    """Write the CSV and its JSON sidecar; returns the CSV path."""
    csv_path = Path(csv_path)
    n_joints = traj.positions.shape[1] - 7
    data = np.column_stack([traj.times, traj.positions, traj.velocities])
    with open(csv_path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(_columns(n_joints, with_velocities=True))
        for row in data:
            writer.writerow([repr(float(x)) for x in row])
    sidecar = {"model": traj.model, "rate_hz": traj.rate_hz}
    if traj.style is not None:
        sidecar["style"] = traj.style
    if traj.source is not None:
        sidecar["source"] = traj.source
    csv_path.with_suffix(".json").write_text(json.dumps(sidecar, indent=2) + "\n")
    return csv_path


def load_trajectory(csv_path, model: Optional[KinematicModel] = None) -> JointTrajectory:
    """Load a trajectory CSV and its sidecar; validates all invariants."""
    csv_path = Path(csv_path)
    sidecar_path = csv_path.with_suffix(".json")
    if not sidecar_path.exists():
        raise TrajectoryError(f"missing sidecar {sidecar_path.name}")
    sidecar = json.loads(sidecar_path.read_text())
    for key in ("model", "rate_hz"):
        if key not in sidecar:
            raise TrajectoryError(f"sidecar missing required field {key!r}")

    with open(csv_path) as fh:
        header = fh.readline().strip().split(",")
    if tuple(header[:8]) != _FIXED_COLS:
        raise TrajectoryError(
            f"unexpected leading columns {header[:8]}; expected {list(_FIXED_COLS)}"
        )
    v_start = next((k for k, name in enumerate(header) if name.startswith("v_")), len(header))
    n_q = v_start - 1
    data = np.loadtxt(csv_path, delimiter=",", skiprows=1, ndmin=2)
    if data.shape[1] != len(header):
        raise TrajectoryError("row width does not match header")
    if data.shape[0] < 2:
        raise TrajectoryError("trajectory must have at least 2 frames")
    if np.isnan(data).any():
        raise TrajectoryError("trajectory contains NaN values")

    times = data[:, 0]
    positions = data[:, 1 : 1 + n_q]
    rate = float(sidecar["rate_hz"])
    dt = np.diff(times)
    if np.any(dt <= 0):
        raise TrajectoryError("timestamps must be strictly increasing")
    if np.max(np.abs(dt - 1.0 / rate)) > 1e-9:
        raise TrajectoryError("non-uniform sampling: timestamp jitter exceeds 1e-9 s")
    positions = _check_quaternions(positions)

    if v_start < len(header):
        n_v = len(header) - v_start
        if n_v != n_q - 1:
            raise TrajectoryError(
                f"{n_v} velocity columns inconsistent with {n_q} position columns"
            )
        velocities = data[:, v_start:]
    else:
        velocities = differentiate(positions, rate)

    traj = JointTrajectory(
        rate_hz=rate,
        times=times,
        positions=positions,
        velocities=velocities,
        model=str(sidecar["model"]),
        style=sidecar.get("style"),
        source=sidecar.get("source"),
    )
    validate_trajectory(traj, model)
    return traj

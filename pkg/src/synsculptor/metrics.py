"""Energetic-fidelity and contact-realism metrics.

Three measurements compare original, reconstructed, and projected
trajectories:

  * mean per-step momentum change ||p(t_k) - p(t_{k-1})|| and kinetic
    energy change |KE(t_k) - KE(t_{k-1})|, evaluated at a fixed rate
    (default 1 kHz; the trajectory is resampled internally),
  * mean mechanical power sum_i |tau_i qdot_i| over the actuated joints,
    with torques from inverse dynamics and accelerations from finite
    differences of the velocity stream,
  * foot-sliding ratio: of the frames where a foot is within h_contact
    of the ground plane z = 0, the fraction whose horizontal foot speed
    exceeds v_slide, pooled over both feet. Speed uses central
    differences (one-sided at the ends), so steady translation counts
    every frame.
"""

from __future__ import annotations

import io
from dataclasses import dataclass
from typing import Optional, Sequence, Tuple

import numpy as np

from . import kinmodel as km
from .trajio import JointTrajectory, resample, validate_trajectory

EVAL_RATE_DEFAULT = 1000.0
H_CONTACT_DEFAULT = 0.02
V_SLIDE_DEFAULT = 0.05
FOOT_FRAMES_DEFAULT = ("left_foot", "right_foot")


@dataclass(frozen=True)
class MetricsReport:
    label: str
    mean_dp: float
    mean_dke_j: float
    mean_power_w: float
    power_w_per_kg: float
    foot_slide_ratio: float
    rate_hz: float

    def __post_init__(self):
        for field in ("mean_dp", "mean_dke_j", "mean_power_w", "power_w_per_kg", "rate_hz"):
            if getattr(self, field) < 0:
                raise ValueError(f"{field} must be non-negative")
        if not 0.0 <= self.foot_slide_ratio <= 1.0:
            raise ValueError("foot_slide_ratio must lie in [0, 1]")


def energetics(
    traj: JointTrajectory,
    model: km.KinematicModel,
    eval_rate_hz: float = EVAL_RATE_DEFAULT,
) -> Tuple[float, float]:
    """Mean per-step momentum and kinetic-energy change at eval_rate_hz."""
    validate_trajectory(traj, model)
    work = resample(traj, eval_rate_hz)
    A = km.mass_matrix(model, work.positions)
    p = np.einsum("tij,tj->ti", A, work.velocities)
    ke = 0.5 * np.einsum("ti,ti->t", work.velocities, p)
    mean_dp = float(np.mean(np.linalg.norm(np.diff(p, axis=0), axis=1)))
    mean_dke = float(np.mean(np.abs(np.diff(ke))))
    return mean_dp, mean_dke


def _diff_series(x: np.ndarray, rate_hz: float) -> np.ndarray:
    """Second-order finite differences along axis 0."""
    h = 1.0 / rate_hz
    d = np.empty_like(x)
    d[1:-1] = (x[2:] - x[:-2]) / (2 * h)
    d[0] = (-3 * x[0] + 4 * x[1] - x[2]) / (2 * h)
    d[-1] = (3 * x[-1] - 4 * x[-2] + x[-3]) / (2 * h)
    return d


def mechanical_power(traj: JointTrajectory, model: km.KinematicModel) -> float:
    """Mean of sum_i |tau_i qdot_i| over the actuated joints, in watts."""
    validate_trajectory(traj, model)
    if traj.n_frames < 3:
        raise ValueError("mechanical power needs at least 3 frames")
    a = _diff_series(traj.velocities, traj.rate_hz)
    tau = km.inverse_dynamics(model, traj.positions, traj.velocities, a)
    per_frame = np.sum(np.abs(tau[:, 6:] * traj.velocities[:, 6:]), axis=1)
    return float(np.mean(per_frame))


def foot_sliding_ratio(
    traj: JointTrajectory,
    model: km.KinematicModel,
    foot_frames: Sequence[str] = FOOT_FRAMES_DEFAULT,
    h_contact: float = H_CONTACT_DEFAULT,
    v_slide: float = V_SLIDE_DEFAULT,
) -> float:
    """Sliding contact frames / contact frames, pooled over the feet."""
    validate_trajectory(traj, model)
    poses = km.forward_kinematics(model, traj.positions)
    contact_count = 0
    sliding_count = 0
    for frame in foot_frames:
        pos = poses.position(frame)
        vel_xy = np.gradient(pos[:, 0:2], 1.0 / traj.rate_hz, axis=0)
        speed = np.linalg.norm(vel_xy, axis=1)
        contact = pos[:, 2] < h_contact
        contact_count += int(np.sum(contact))
        sliding_count += int(np.sum(contact & (speed > v_slide)))
    if contact_count == 0:
        return 0.0
    return sliding_count / contact_count


def evaluate(
    traj: JointTrajectory,
    model: km.KinematicModel,
    label: str,
    eval_rate_hz: float = EVAL_RATE_DEFAULT,
    foot_frames: Sequence[str] = FOOT_FRAMES_DEFAULT,
    h_contact: float = H_CONTACT_DEFAULT,
    v_slide: float = V_SLIDE_DEFAULT,
) -> MetricsReport:
    """Full report; energetics at eval_rate_hz, the rest at native rate."""
    mean_dp, mean_dke = energetics(traj, model, eval_rate_hz)
    power = mechanical_power(traj, model)
    slide = foot_sliding_ratio(traj, model, foot_frames, h_contact, v_slide)
    return MetricsReport(
        label=label,
        mean_dp=mean_dp,
        mean_dke_j=mean_dke,
        mean_power_w=power,
        power_w_per_kg=power / model.total_mass,
        foot_slide_ratio=slide,
        rate_hz=float(eval_rate_hz),
    )


CSV_HEADER = "label,mean_dP,mean_dKE_J,mean_power_W,power_W_per_kg,foot_slide_ratio,rate_hz"

_RATIO_FIELDS = ("mean_dp", "mean_dke_j", "mean_power_w", "foot_slide_ratio")
_RATIO_HEADER = "ratio_dP,ratio_dKE,ratio_power,ratio_foot_slide"


def report_to_row(report: MetricsReport) -> str:
    return ",".join(
        [
            report.label,
            repr(report.mean_dp),
            repr(report.mean_dke_j),
            repr(report.mean_power_w),
            repr(report.power_w_per_kg),
            repr(report.foot_slide_ratio),
            repr(report.rate_hz),
        ]
    )


def reports_to_csv(reports: Sequence[MetricsReport]) -> str:
    out = io.StringIO()
    out.write(CSV_HEADER + "\n")
    for r in reports:
        out.write(report_to_row(r) + "\n")
    return out.getvalue()


def compare(
    reports: Sequence[MetricsReport], baseline_label: Optional[str] = None
) -> str:
    """Side-by-side CSV with per-metric ratios against a baseline row.

    The baseline defaults to the first report. A zero baseline value
    yields an empty ratio cell rather than infinity.
    """
    if not reports:
        raise ValueError("compare needs at least one report")
    if baseline_label is None:
        base = reports[0]
    else:
        matches = [r for r in reports if r.label == baseline_label]
        if not matches:
            raise KeyError(f"no report labeled {baseline_label!r}")
        base = matches[0]
    out = io.StringIO()
    out.write(CSV_HEADER + "," + _RATIO_HEADER + "\n")
    for r in reports:
        cells = [report_to_row(r)]
        for field in _RATIO_FIELDS:
            denom = getattr(base, field)
            cells.append(repr(getattr(r, field) / denom) if denom != 0 else "")
        out.write(",".join(cells) + "\n")
    return out.getvalue()

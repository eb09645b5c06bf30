"""Momentum-discontinuity segmentation of joint trajectories.

A segment boundary opens at every frame whose momentum jump from the
previous frame exceeds the threshold, subject to a refractory window:
boundaries closer than min_duration to the previous one are suppressed.
The boundary frame belongs to the new segment.
"""

from __future__ import annotations

import io
from dataclasses import dataclass
from typing import List, Optional

import numpy as np

from .kinmodel import KinematicModel, mass_matrix
from .trajio import JointTrajectory, validate_trajectory

DP_THRESHOLD_DEFAULT = 0.75
MIN_DURATION_DEFAULT = 0.5


@dataclass(frozen=True)
class MotionSegment:
    start: int
    end: int
    start_time: float
    end_time: float
    peak_dp: float
    traj_ref: Optional[str] = None

    @property
    def n_frames(self) -> int:
        return self.end - self.start


def delta_p_series(traj: JointTrajectory, model: KinematicModel) -> np.ndarray:
    """Frame-to-frame momentum jump norms; length T-1.

    Entry k-1 is ||p(t_k) - p(t_{k-1})|| with p = A(q) v. The norm mixes
    kg*m/s and kg*m^2/s rows, matching the raw-threshold convention.
    """
    validate_trajectory(traj, model)
    A = mass_matrix(model, traj.positions)
    p = np.einsum("tij,tj->ti", A, traj.velocities)
    return np.linalg.norm(np.diff(p, axis=0), axis=1)


def segment(
    traj: JointTrajectory,
    model: KinematicModel,
    dp_threshold: float = DP_THRESHOLD_DEFAULT,
    min_duration_s: float = MIN_DURATION_DEFAULT,
    traj_ref: Optional[str] = None,
) -> List[MotionSegment]:
    """Split the trajectory at momentum discontinuities.

    Deterministic; a trajectory with no crossings yields one segment.
    Segments are disjoint, ordered, and cover [0, T).
    """
    if dp_threshold <= 0:
        raise ValueError("dp_threshold must be positive")
    if min_duration_s < 0:
        raise ValueError("min_duration_s must be non-negative")
    dp = delta_p_series(traj, model)
    t = traj.times
    boundaries = [0]
    for k in range(1, traj.n_frames):
        if dp[k - 1] > dp_threshold and t[k] - t[boundaries[-1]] >= min_duration_s:
            boundaries.append(k)
    boundaries.append(traj.n_frames)

    dt = 1.0 / traj.rate_hz
    segments = []
    for a, b in zip(boundaries[:-1], boundaries[1:]):
        segments.append(
            MotionSegment(
                start=a,
                end=b,
                start_time=float(t[a]),
                end_time=float(t[b - 1] + dt),
                peak_dp=float(dp[a - 1]) if a > 0 else 0.0,
                traj_ref=traj_ref,
            )
        )
    return segments


def segments_to_csv(segments: List[MotionSegment]) -> str:
    out = io.StringIO()
    out.write("start_s,end_s,peak_dP\n")
    for s in segments:
        out.write(f"{s.start_time!r},{s.end_time!r},{s.peak_dp!r}\n")
    return out.getvalue()

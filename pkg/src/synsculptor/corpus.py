"""Synthetic motion corpus for the sample humanoid.

Four parameterized generators (squat, step-in-place, jumping-jack,
walk-in-circle) built from sinusoid and gated-phase compositions. Each
motion's velocity field is a combination of a small number of scalar
time profiles, so a handful of principal components captures almost all
of its variance by construction.

The squat keeps both soles exactly pinned: with equal thigh and shank
lengths L, joint angles (hip, knee, ankle) = (-f, +2f, -f) plus base
height z = z_ankle + 2L cos(f) hold each foot frame fixed in the world.

A band-limited noise injector perturbs velocities row-proportionally and
re-integrates positions, for smoothing and projection experiments.
"""

from __future__ import annotations

from typing import Optional

import numpy as np

from .kinmodel import KinematicModel, integrate_path
from .trajio import JointTrajectory, make_trajectory

LEG_L = 0.40
ANKLE_Z = 0.06
STAND_Z = ANKLE_Z + 2 * LEG_L


def _joint_cols(model: KinematicModel, *names: str):
    idx = {name: i for i, name in enumerate(model.joint_names)}
    missing = [n for n in names if n not in idx]
    if missing:
        raise ValueError(f"model {model.name!r} lacks joints {missing}")
    return [7 + idx[n] for n in names]


def _base_positions(T: int, n_q: int) -> np.ndarray:
    q = np.zeros((T, n_q))
    q[:, 2] = STAND_Z
    q[:, 3] = 1.0
    return q


def _gate(u: np.ndarray) -> np.ndarray:
    """C1 half-cycle bump: sin^2(2 pi u) on u in [0, 0.5), zero after."""
    return np.where(u < 0.5, np.sin(2 * np.pi * u) ** 2, 0.0)


def _crouch(q, model, phi, sign_cols=None):
    """Apply the pinned-foot crouch pattern to both legs in place."""
    lh, ls, la, rh, rs, ra = _joint_cols(
        model, "l_hip", "l_shank", "l_ankle", "r_hip", "r_shank", "r_ankle"
    )
    for hip, shank, ankle in ((lh, ls, la), (rh, rs, ra)):
        q[:, hip] += -phi
        q[:, shank] += 2 * phi
        q[:, ankle] += -phi


def squat(
    model: KinematicModel,
    duration_s: float = 9.8,
    rate_hz: float = 100.0,
    freq_hz: float = 0.45,
    depth_rad: float = 0.85,
    arm_amp: float = 0.55,
    arm_phase: float = 0.9,
) -> JointTrajectory:
    """Cyclic squatting with arm counter-swing; feet exactly pinned."""
    T = int(round(duration_s * rate_hz)) + 1
    t = np.arange(T) / rate_hz
    q = _base_positions(T, model.n_q)
    phi = depth_rad * 0.5 * (1 - np.cos(2 * np.pi * freq_hz * t))
    _crouch(q, model, phi)
    q[:, 2] = ANKLE_Z + 2 * LEG_L * np.cos(phi)
    psi = arm_amp * np.sin(2 * np.pi * freq_hz * t + arm_phase)
    lsh, rsh, lel, rel, tl = _joint_cols(
        model, "l_shoulder", "r_shoulder", "l_forearm", "r_forearm", "torso_lower"
    )
    q[:, lsh] = psi
    q[:, rsh] = psi
    q[:, lel] = 0.5 * psi
    q[:, rel] = 0.5 * psi
    q[:, tl] = 0.30 * psi
    return make_trajectory(q, rate_hz, model.name, style="squat", source="mocap")


def step_in_place(
    model: KinematicModel,
    duration_s: float = 10.0,
    rate_hz: float = 100.0,
    freq_hz: float = 0.65,
    lift_rad: float = 0.65,
    arm_amp: float = 0.4,
) -> JointTrajectory:
    """Alternating vertical leg lifts with counter-swinging arms."""
    T = int(round(duration_s * rate_hz)) + 1
    t = np.arange(T) / rate_hz
    q = _base_positions(T, model.n_q)
    u = np.mod(freq_hz * t, 1.0)
    theta_l = lift_rad * _gate(u)
    theta_r = lift_rad * _gate(np.mod(u + 0.5, 1.0))
    lh, ls, la = _joint_cols(model, "l_hip", "l_shank", "l_ankle")
    rh, rs, ra = _joint_cols(model, "r_hip", "r_shank", "r_ankle")
    q[:, lh], q[:, ls], q[:, la] = -theta_l, 2 * theta_l, -theta_l
    q[:, rh], q[:, rs], q[:, ra] = -theta_r, 2 * theta_r, -theta_r
    swing = arm_amp * np.sin(2 * np.pi * freq_hz * t)
    lsh, rsh = _joint_cols(model, "l_shoulder", "r_shoulder")
    q[:, lsh] = swing
    q[:, rsh] = -swing
    return make_trajectory(q, rate_hz, model.name, style="step", source="mocap")


def jumping_jack(
    model: KinematicModel,
    duration_s: float = 10.0,
    rate_hz: float = 100.0,
    freq_hz: float = 0.5,
    arm_sweep_rad: float = 1.2,
    leg_sweep_rad: float = 0.28,
    crouch_rad: float = 0.3,
) -> JointTrajectory:
    """Lateral arm/leg sweeps with a double-frequency crouch bounce."""
    T = int(round(duration_s * rate_hz)) + 1
    t = np.arange(T) / rate_hz
    q = _base_positions(T, model.n_q)
    jack = 0.5 * (1 - np.cos(2 * np.pi * freq_hz * t))
    lua, rua, lth, rth = _joint_cols(model, "l_upper_arm", "r_upper_arm", "l_thigh", "r_thigh")
    q[:, lua] = arm_sweep_rad * jack
    q[:, rua] = -arm_sweep_rad * jack
    q[:, lth] = leg_sweep_rad * jack
    q[:, rth] = -leg_sweep_rad * jack
    chi = crouch_rad * 0.5 * (1 - np.cos(2 * np.pi * (2 * freq_hz) * t))
    _crouch(q, model, chi)
    q[:, 2] = ANKLE_Z + 2 * LEG_L * np.cos(chi)
    return make_trajectory(q, rate_hz, model.name, style="jack", source="mocap")


def walk_in_circle(
    model: KinematicModel,
    duration_s: float = 12.0,
    rate_hz: float = 100.0,
    freq_hz: float = 0.7,
    lift_rad: float = 0.5,
    swing_rad: float = 0.3,
    yaw_rate: float = 0.35,
    speed: float = 0.12,
) -> JointTrajectory:
    """Gait-like stepping while the base yaws and translates on a circle."""
    T = int(round(duration_s * rate_hz)) + 1
    t = np.arange(T) / rate_hz
    q = _base_positions(T, model.n_q)
    yaw = yaw_rate * t
    radius = speed / yaw_rate
    q[:, 0] = radius * np.sin(yaw)
    q[:, 1] = radius * (1 - np.cos(yaw))
    q[:, 3] = np.cos(0.5 * yaw)
    q[:, 6] = np.sin(0.5 * yaw)

    u = np.mod(freq_hz * t, 1.0)
    theta_l = lift_rad * _gate(u)
    theta_r = lift_rad * _gate(np.mod(u + 0.5, 1.0))
    lh, ls, la = _joint_cols(model, "l_hip", "l_shank", "l_ankle")
    rh, rs, ra = _joint_cols(model, "r_hip", "r_shank", "r_ankle")
    swing = swing_rad * np.sin(2 * np.pi * freq_hz * t)
    q[:, lh] = -theta_l + swing
    q[:, ls] = 2 * theta_l
    q[:, la] = -theta_l
    q[:, rh] = -theta_r - swing
    q[:, rs] = 2 * theta_r
    q[:, ra] = -theta_r
    lsh, rsh = _joint_cols(model, "l_shoulder", "r_shoulder")
    q[:, lsh] = -0.6 * swing
    q[:, rsh] = 0.6 * swing
    return make_trajectory(q, rate_hz, model.name, style="walk", source="mocap")


GENERATORS = {
    "squat": squat,
    "step": step_in_place,
    "jack": jumping_jack,
    "walk": walk_in_circle,
}


def build_corpus(model: KinematicModel, **overrides) -> dict:
    """All four corpus motions keyed by style name."""
    return {name: gen(model, **overrides.get(name, {})) for name, gen in GENERATORS.items()}


def with_band_limited_noise(
    traj: JointTrajectory,
    model: KinematicModel,
    rel_amplitude: float = 0.1,
    min_hz: float = 10.0,
    seed: int = 0,
    source: Optional[str] = None,
) -> JointTrajectory:
    """Add high-frequency noise to the velocity stream and re-integrate.

    Noise per velocity row: white noise band-limited to [min_hz, Nyquist],
    scaled to rel_amplitude times that row's RMS. Silent rows stay silent.
    Positions are re-integrated so (q, v) remain a consistent pair.
    """
    rng = np.random.default_rng(seed)
    v = traj.velocities
    T = v.shape[0]
    white = rng.standard_normal(v.shape)
    spec = np.fft.rfft(white, axis=0)
    freqs = np.fft.rfftfreq(T, d=1.0 / traj.rate_hz)
    spec[freqs < min_hz] = 0.0
    noise = np.fft.irfft(spec, n=T, axis=0)
    noise_rms = np.sqrt(np.mean(noise**2, axis=0))
    signal_rms = np.sqrt(np.mean(v**2, axis=0))
    scale = np.where(noise_rms > 0, rel_amplitude * signal_rms / np.where(noise_rms > 0, noise_rms, 1.0), 0.0)
    v_noisy = v + noise * scale
    positions = integrate_path(model, traj.positions[0], v_noisy, 1.0 / traj.rate_hz)
    return JointTrajectory(
        rate_hz=traj.rate_hz,
        times=traj.times.copy(),
        positions=positions,
        velocities=v_noisy,
        model=traj.model,
        style=traj.style,
        source=source if source is not None else traj.source,
    )

"""Motion synthesis from synergies.

Reconstruction drives the velocity q_dot(t) = S a(t) and integrates it
from q0 with explicit Euler at the output rate (base orientation handled
multiplicatively). Sequencing concatenates velocity streams, optionally
cross-fading across seams, and integrates once, so positions are
continuous at every seam by construction. Projection filters an external
velocity stream through S S^T N_t with the torso-task nullspace N_t
evaluated at the evolving integrated configuration.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import List, Optional, Sequence, Tuple

import numpy as np

from . import kinmodel as km
from .kinmodel import KinematicModel, TaskSpec
from .synergy import Synergy, SynergyLibrary
from .trajio import JointTrajectory, validate_trajectory

TORSO_TASK_DEFAULT = TaskSpec(frame="upper_torso", kind="orientation3")

_MODES = ("const", "stored", "curve")


class BlendWindowError(ValueError):
    """A transition window too wide for its adjacent step durations."""


@dataclass(frozen=True)
class CoefficientSchedule:
    """How each of the k coefficients evolves over the request duration.

    const:  values is a length-k vector, held constant.
    stored: the synergy's own coefficient series, time-scaled to the
            request duration and interpolated to the output rate.
    curve:  values is {"times": [m], "values": [m][k]}, piecewise linear.
    """

    mode: str
    values: Optional[object] = None

    def __post_init__(self):
        if self.mode not in _MODES:
            raise ValueError(f"schedule mode must be one of {_MODES}, got {self.mode!r}")


@dataclass(frozen=True)
class SynthesisRequest:
    synergy: Synergy
    schedule: CoefficientSchedule
    duration_s: Optional[float] = None
    rate_hz: float = 100.0
    q0: Optional[np.ndarray] = None

    def resolved_duration(self) -> float:
        d = self.duration_s if self.duration_s is not None else self.synergy.duration_s
        if d is None or d <= 0:
            raise ValueError("request duration must be positive")
        return float(d)


@dataclass(frozen=True)
class Transition:
    kind: str = "none"
    window_s: float = 0.0

    def __post_init__(self):
        if self.kind not in ("none", "linear-blend"):
            raise ValueError(f"transition kind must be 'none' or 'linear-blend', got {self.kind!r}")
        if self.kind == "linear-blend" and self.window_s <= 0:
            raise ValueError("linear-blend transition needs a positive window")


@dataclass(frozen=True)
class SequencePlan:
    steps: Tuple
    rate_hz: float = 100.0


def _coefficient_series(req: SynthesisRequest, times: np.ndarray) -> np.ndarray:
    """Coefficient value per output frame, (k, T)."""
    syn = req.synergy
    k = syn.k
    sched = req.schedule
    if sched.mode == "const":
        vals = np.asarray(sched.values, dtype=float)
        if vals.shape != (k,):
            raise ValueError(f"const schedule needs {k} values, got shape {vals.shape}")
        return np.repeat(vals[:, None], len(times), axis=1)
    if sched.mode == "stored":
        T0 = syn.coeff_series.shape[1]
        src_t = np.linspace(0.0, times[-1], T0) if T0 > 1 else np.array([0.0])
        return np.stack([np.interp(times, src_t, syn.coeff_series[i]) for i in range(k)])
    knots = sched.values
    kt = np.asarray(knots["times"], dtype=float)
    kv = np.asarray(knots["values"], dtype=float)
    if kv.shape != (len(kt), k):
        raise ValueError(f"curve values must be ({len(kt)}, {k}), got {kv.shape}")
    if np.any(np.diff(kt) <= 0):
        raise ValueError("curve times must be strictly increasing")
    return np.stack([np.interp(times, kt, kv[:, i]) for i in range(k)])


def _velocities_for(req: SynthesisRequest, rate_hz: float) -> np.ndarray:
    duration = req.resolved_duration()
    T = int(round(duration * rate_hz)) + 1
    times = np.arange(T) / rate_hz
    a = _coefficient_series(req, times)
    return (req.synergy.S @ a).T


def reconstruct(
    model: KinematicModel,
    request: SynthesisRequest,
    style: Optional[str] = None,
) -> JointTrajectory:
    """Integrate S a(t) from q0; output tagged source='synthesized'."""
    v = _velocities_for(request, request.rate_hz)
    q0 = request.q0 if request.q0 is not None else request.synergy.q0
    positions = km.integrate_path(model, q0, v, 1.0 / request.rate_hz)
    traj = JointTrajectory(
        rate_hz=float(request.rate_hz),
        times=np.arange(v.shape[0]) / request.rate_hz,
        positions=positions,
        velocities=v,
        model=model.name,
        style=style,
        source="synthesized",
    )
    validate_trajectory(traj, model)
    return traj


def sequence(model: KinematicModel, plan: SequencePlan, style: Optional[str] = None) -> JointTrajectory:
    """Chain synthesis steps into one trajectory.

    Steps share seam frames; each step starts where the previous ended.
    A linear-blend transition cross-fades the two velocity streams over
    a window centered on the seam, with edge values held.
    """
    if not plan.steps:
        raise ValueError("sequence plan has no steps")
    rate = plan.rate_hz
    parts = []
    for req, _ in plan.steps:
        parts.append(_velocities_for(req, rate))
    n_v = parts[0].shape[1]

    seams = [0]
    for part in parts:
        seams.append(seams[-1] + part.shape[0] - 1)
    total = seams[-1] + 1
    v = np.empty((total, n_v))
    for i, part in enumerate(parts):
        v[seams[i] : seams[i + 1]] = part[:-1]
    v[-1] = parts[-1][-1]

    for i in range(len(parts) - 1):
        trans = plan.steps[i][1]
        if trans.kind != "linear-blend":
            continue
        d_prev = plan.steps[i][0].resolved_duration()
        d_next = plan.steps[i + 1][0].resolved_duration()
        if trans.window_s >= min(d_prev, d_next):
            raise BlendWindowError(
                f"blend window {trans.window_s} s must be smaller than adjacent "
                f"durations ({d_prev} s, {d_next} s)"
            )
        half = int(round(0.5 * trans.window_s * rate))
        if half == 0:
            continue
        seam = seams[i + 1]
        frames = np.arange(seam - half, seam + half + 1)
        lam = (frames - frames[0]) / (frames[-1] - frames[0])
        prev_idx = np.clip(frames - seams[i], 0, parts[i].shape[0] - 1)
        next_idx = np.clip(frames - seam, 0, parts[i + 1].shape[0] - 1)
        v[frames] = (1 - lam)[:, None] * parts[i][prev_idx] + lam[:, None] * parts[i + 1][next_idx]

    q0 = plan.steps[0][0].q0
    if q0 is None:
        q0 = plan.steps[0][0].synergy.q0
    positions = km.integrate_path(model, q0, v, 1.0 / rate)
    traj = JointTrajectory(
        rate_hz=float(rate),
        times=np.arange(total) / rate,
        positions=positions,
        velocities=v,
        model=model.name,
        style=style,
        source="synthesized",
    )
    validate_trajectory(traj, model)
    return traj


def monte_carlo(
    model: KinematicModel,
    synergy: Synergy,
    alpha: Optional[float] = None,
    n: int = 100,
    duration_s: Optional[float] = None,
    rate_hz: float = 100.0,
    seed: int = 0,
) -> List[JointTrajectory]:
    """n reconstructions with constant coefficients drawn U(-alpha, alpha)^k.

    alpha defaults to the synergy's leading singular value. Deterministic
    for a fixed seed.
    """
    if n < 1:
        raise ValueError("n must be at least 1")
    if alpha is None:
        alpha = float(synergy.sigma[0])
    if alpha <= 0:
        raise ValueError("alpha must be positive")
    rng = np.random.default_rng(seed)
    coeffs = rng.uniform(-alpha, alpha, size=(n, synergy.k))
    out = []
    for i in range(n):
        req = SynthesisRequest(
            synergy=synergy,
            schedule=CoefficientSchedule(mode="const", values=coeffs[i]),
            duration_s=duration_s,
            rate_hz=rate_hz,
        )
        out.append(reconstruct(model, req))
    return out


def project_external(
    traj_ext: JointTrajectory,
    S: np.ndarray,
    model: KinematicModel,
    torso_task: Optional[TaskSpec] = TORSO_TASK_DEFAULT,
) -> JointTrajectory:
    """Filter an external velocity stream into the synergy span, torso-safe.

    Per frame: v_out = S S^T N_t v_ext, with the torso-task nullspace N_t
    evaluated at the configuration integrated so far (frame 0 starts at
    the external trajectory's first configuration).
    """
    validate_trajectory(traj_ext, model)
    S = np.asarray(S, dtype=float)
    if S.shape[0] != model.n_v:
        raise ValueError(f"basis must have {model.n_v} rows, got {S.shape[0]}")
    T = traj_ext.n_frames
    dt = 1.0 / traj_ext.rate_hz
    v_ext = traj_ext.velocities
    v_out = np.empty_like(v_ext)
    positions = np.empty_like(traj_ext.positions)
    q = traj_ext.positions[0].copy()
    for t in range(T):
        positions[t] = q
        if torso_task is None:
            v_n = v_ext[t]
        else:
            A = km.mass_matrix(model, q)
            J = km.task_jacobian(model, q, torso_task)
            try:
                _, jbar = km.dyn_consistent_inverse(A, J)
            except km.RankDeficiencyError as exc:
                raise km.RankDeficiencyError(f"frame {t}: {exc}") from exc
            v_n = km.nullspace(J, jbar) @ v_ext[t]
        v_out[t] = S @ (S.T @ v_n)
        if t + 1 < T:
            q = km.integrate_configuration(model, q, v_out[t], dt)
    traj = JointTrajectory(
        rate_hz=traj_ext.rate_hz,
        times=traj_ext.times.copy(),
        positions=positions,
        velocities=v_out,
        model=model.name,
        style=traj_ext.style,
        source="synthesized",
    )
    validate_trajectory(traj, model)
    return traj


def compose_whole_body(
    model: KinematicModel,
    projected: JointTrajectory,
    torso_traj: JointTrajectory,
) -> JointTrajectory:
    """Sum the projected and torso velocity streams; re-integrate."""
    if projected.model != torso_traj.model:
        raise ValueError("trajectories reference different models")
    if abs(projected.rate_hz - torso_traj.rate_hz) > 1e-12:
        raise ValueError("rate mismatch between projected and torso trajectories")
    if projected.n_frames != torso_traj.n_frames:
        raise ValueError("length mismatch between projected and torso trajectories")
    v = projected.velocities + torso_traj.velocities
    positions = km.integrate_path(model, projected.positions[0], v, 1.0 / projected.rate_hz)
    traj = JointTrajectory(
        rate_hz=projected.rate_hz,
        times=projected.times.copy(),
        positions=positions,
        velocities=v,
        model=model.name,
        style=projected.style,
        source="synthesized",
    )
    validate_trajectory(traj, model)
    return traj


def plan_from_dict(doc: dict, libraries: dict) -> SequencePlan:
    """Resolve a JSON sequence plan against loaded libraries.

    Format: {rate_hz, steps:[{library, label,
             coeffs:{mode:"const"|"stored"|"curve", values},
             duration_s, transition:{kind, window_s}}]}
    """
    rate = float(doc.get("rate_hz", 100.0))
    steps = []
    for i, sd in enumerate(doc.get("steps", ())):
        lib_name = sd.get("library")
        if lib_name not in libraries:
            raise KeyError(f"step {i}: unknown library {lib_name!r}")
        lib: SynergyLibrary = libraries[lib_name]
        entry = lib.find(sd["label"])
        coeffs = sd.get("coeffs", {"mode": "stored"})
        schedule = CoefficientSchedule(mode=coeffs["mode"], values=coeffs.get("values"))
        req = SynthesisRequest(
            synergy=entry.synergy,
            schedule=schedule,
            duration_s=sd.get("duration_s"),
            rate_hz=rate,
        )
        td = sd.get("transition", {"kind": "none"})
        trans = Transition(kind=td.get("kind", "none"), window_s=float(td.get("window_s", 0.0)))
        steps.append((req, trans))
    return SequencePlan(steps=tuple(steps), rate_hz=rate)

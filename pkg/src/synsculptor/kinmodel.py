"""Floating-base kinematic tree with inertial parameters.

Computes forward kinematics, task Jacobians, the joint-space mass matrix
(composite-rigid-body algorithm), bias and gravity generalized forces
(recursive Newton-Euler), momentum, kinetic energy, dynamically consistent
task inverses, and task nullspace projectors.

Conventions, fixed package-wide:
- generalized position q = [base position (3), base quaternion wxyz (4),
  joint values]; n_q = 7 + number of 1-DoF joints;
- generalized velocity v = [base angular velocity (3), base linear
  velocity (3), joint rates]; both base rates are world-frame; n_v = 6 +
  number of 1-DoF joints;
- twists and wrenches are ordered (angular, linear);
- spatial quantities are expressed at the world origin, so composite
  inertias and Jacobian columns add without frame transforms;
- base orientation integrates multiplicatively: q <- exp(dt*w) * q.

Operations accept a single configuration (1-D arrays) or a batch with a
leading time axis and are vectorized over that axis.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from pathlib import Path
from typing import Union

import numpy as np

from . import rotations as rot

GRAVITY_DEFAULT = (0.0, 0.0, -9.81)
Q_JOINTS = 7
V_JOINTS = 6

_JOINT_TYPES = ("free6", "revolute", "prismatic")
_TASK_KINDS = ("pose6", "orientation3", "position3")


class ModelError(ValueError):
    """Model document violates the schema or a structural invariant."""


class UnknownFrameError(KeyError):
    """A task or query names a frame the model does not define."""


class RankDeficiencyError(ValueError):
    """Task Jacobian lost row rank; refused rather than regularized."""


@dataclass(frozen=True)
class Body:
    name: str
    parent: int
    joint_type: str
    axis: np.ndarray
    rot_fixed: np.ndarray
    pos_fixed: np.ndarray
    mass: float
    com: np.ndarray
    inertia: np.ndarray
    dof: int


@dataclass(frozen=True)
class TaskSpec:
    """A point/orientation tracking target on a named frame."""

    frame: str
    kind: str = "pose6"
    point: tuple = (0.0, 0.0, 0.0)

    def __post_init__(self):
        if self.kind not in _TASK_KINDS:
            raise ValueError(f"unknown task kind {self.kind!r}; expected one of {_TASK_KINDS}")
        object.__setattr__(self, "point", tuple(float(c) for c in self.point))
        if len(self.point) != 3:
            raise ValueError("task point offset must have 3 components")


@dataclass(frozen=True)
class KinematicModel:
    """Validated rigid-body tree. Immutable after load; share freely."""

    name: str
    gravity: np.ndarray
    bodies: tuple
    frames: dict
    n_q: int
    n_v: int
    joint_names: tuple
    ancestor_dofs: np.ndarray
    total_mass: float
    document: dict = field(repr=False)

    @property
    def n_joints(self) -> int:
        return self.n_v - 6

    def frame_names(self):
        return tuple(self.frames.keys())


def _symmetric_from_upper(u, where: str) -> np.ndarray:
    u = [float(x) for x in u]
    if len(u) != 6:
        raise ModelError(f"inertia of {where} must have 6 upper-triangular entries")
    ixx, ixy, ixz, iyy, iyz, izz = u
    return np.array([[ixx, ixy, ixz], [ixy, iyy, iyz], [ixz, iyz, izz]])


def load_model(source: Union[str, Path, dict]) -> KinematicModel:
    """Load and validate a model document (dict, or path to a JSON file).

    Document schema:
        {name, gravity:[3],
         bodies:[{name, parent, joint:{type, axis}, transform:{xyz, rpy},
                  inertial:{mass, com:[3], inertia:[ixx,ixy,ixz,iyy,iyz,izz]}}],
         frames:[{name, body, offset:[3]}]}

    The first body is the floating base: parent null, joint type "free6",
    identity transform. Bodies must be listed parent-before-child. Every
    body name doubles as a frame with zero offset; explicit frame names
    must not collide with body names or each other.
    """
    if isinstance(source, (str, Path)):
        with open(source) as fh:
            doc = json.load(fh)
    else:
        doc = source
    if not isinstance(doc, dict) or "bodies" not in doc:
        raise ModelError("model document must be an object with a 'bodies' list")

    name = str(doc.get("name", "unnamed"))
    gravity = np.asarray(doc.get("gravity", GRAVITY_DEFAULT), dtype=float)
    if gravity.shape != (3,):
        raise ModelError("gravity must have 3 components")

    raw_bodies = doc["bodies"]
    if not raw_bodies:
        raise ModelError("model has no bodies")
    name_to_index = {}
    for i, rb in enumerate(raw_bodies):
        bname = rb.get("name")
        if not bname:
            raise ModelError(f"body {i} has no name")
        if bname in name_to_index:
            raise ModelError(f"duplicate body name {bname!r}")
        name_to_index[bname] = i

    bodies = []
    n_joint = 0
    joint_names = []
    for i, rb in enumerate(raw_bodies):
        bname = rb["name"]
        parent_ref = rb.get("parent")
        if parent_ref is None:
            parent = -1
        elif isinstance(parent_ref, int):
            parent = parent_ref
            if not -1 <= parent < len(raw_bodies):
                raise ModelError(f"unknown parent index {parent} for body {bname!r}")
        else:
            if parent_ref not in name_to_index:
                raise ModelError(f"unknown parent {parent_ref!r} for body {bname!r}")
            parent = name_to_index[parent_ref]
        if parent >= i:
            raise ModelError(
                f"cycle detected: body {bname!r} lists parent {raw_bodies[parent]['name']!r} "
                "at or after its own position; bodies must be parent-before-child"
            )
        if i == 0 and parent != -1:
            raise ModelError(f"first body {bname!r} must be the root (parent null)")
        if i > 0 and parent == -1:
            raise ModelError(f"body {bname!r}: only the first body may be the root")

        joint = rb.get("joint", {})
        jtype = joint.get("type")
        if jtype not in _JOINT_TYPES:
            raise ModelError(f"body {bname!r}: joint type must be one of {_JOINT_TYPES}")
        if i == 0 and jtype != "free6":
            raise ModelError(f"root body {bname!r} must use joint type 'free6'")
        if i > 0 and jtype == "free6":
            raise ModelError(f"body {bname!r}: 'free6' is reserved for the root")

        if jtype == "free6":
            axis = np.zeros(3)
        else:
            axis = np.asarray(joint.get("axis", ()), dtype=float)
            if axis.shape != (3,):
                raise ModelError(f"body {bname!r}: joint axis must have 3 components")
            norm = np.linalg.norm(axis)
            if abs(norm - 1.0) > 1e-3:
                raise ModelError(f"body {bname!r}: joint axis norm {norm:.6f} is not unit")
            axis = axis / norm

        tf = rb.get("transform", {})
        xyz = np.asarray(tf.get("xyz", (0.0, 0.0, 0.0)), dtype=float)
        rpy = np.asarray(tf.get("rpy", (0.0, 0.0, 0.0)), dtype=float)
        if xyz.shape != (3,) or rpy.shape != (3,):
            raise ModelError(f"body {bname!r}: transform xyz/rpy must have 3 components each")
        rot_fixed = rot.rpy_to_matrix(rpy)
        if i == 0 and (np.any(xyz != 0.0) or np.any(rpy != 0.0)):
            raise ModelError(
                f"root body {bname!r} must have an identity transform; "
                "its pose comes from the configuration"
            )

        inertial = rb.get("inertial")
        if inertial is None:
            raise ModelError(f"body {bname!r} has no inertial block")
        mass = float(inertial.get("mass", 0.0))
        if mass <= 0.0:
            raise ModelError(f"body {bname!r}: mass must be positive, got {mass}")
        com = np.asarray(inertial.get("com", (0.0, 0.0, 0.0)), dtype=float)
        if com.shape != (3,):
            raise ModelError(f"body {bname!r}: com must have 3 components")
        inertia = _symmetric_from_upper(inertial.get("inertia", ()), f"body {bname!r}")
        eigs = np.linalg.eigvalsh(inertia)
        if eigs[0] <= 0.0:
            raise ModelError(
                f"non-SPD inertia for body {bname!r}: min eigenvalue {eigs[0]:.3e}"
            )

        dof = 0 if i == 0 else 6 + n_joint
        if jtype != "free6":
            n_joint += 1
            joint_names.append(bname)
        bodies.append(
            Body(
                name=bname,
                parent=parent,
                joint_type=jtype,
                axis=axis,
                rot_fixed=rot_fixed,
                pos_fixed=xyz,
                mass=mass,
                com=com,
                inertia=inertia,
                dof=dof,
            )
        )

    n_v = 6 + n_joint
    n_q = 7 + n_joint

    frames = {b.name: (i, np.zeros(3)) for i, b in enumerate(bodies)}
    for rf in doc.get("frames", ()):
        fname = rf.get("name")
        if not fname:
            raise ModelError("frame without a name")
        if fname in frames:
            raise ModelError(f"duplicate frame name {fname!r}")
        fbody = rf.get("body")
        if fbody not in name_to_index:
            raise ModelError(f"frame {fname!r} attached to unknown body {fbody!r}")
        offset = np.asarray(rf.get("offset", (0.0, 0.0, 0.0)), dtype=float)
        if offset.shape != (3,):
            raise ModelError(f"frame {fname!r}: offset must have 3 components")
        frames[fname] = (name_to_index[fbody], offset)

    ancestor_dofs = np.zeros((len(bodies), n_v), dtype=bool)
    for i, b in enumerate(bodies):
        if b.parent >= 0:
            ancestor_dofs[i] = ancestor_dofs[b.parent]
            ancestor_dofs[i, b.dof] = True
        else:
            ancestor_dofs[i, 0:6] = True

    return KinematicModel(
        name=name,
        gravity=gravity,
        bodies=tuple(bodies),
        frames=frames,
        n_q=n_q,
        n_v=n_v,
        joint_names=tuple(joint_names),
        ancestor_dofs=ancestor_dofs,
        total_mass=float(sum(b.mass for b in bodies)),
        document=doc,
    )


def load_bundled_model(name: str) -> KinematicModel:
    """Load one of the models shipped with the package by name."""
    from importlib import resources

    res = resources.files("synsculptor") / "models" / f"{name}.json"
    if not res.is_file():
        available = sorted(
            p.name[:-5]
            for p in (resources.files("synsculptor") / "models").iterdir()
            if p.name.endswith(".json")
        )
        raise ModelError(f"no bundled model {name!r}; available: {available}")
    with resources.as_file(res) as path:
        return load_model(path)


def neutral_configuration(model: KinematicModel) -> np.ndarray:
    q = np.zeros(model.n_q)
    q[3] = 1.0
    return q


def _promote(model, q, v=None):
    q = np.asarray(q, dtype=float)
    single = q.ndim == 1
    if single:
        q = q[None, :]
    if q.ndim != 2 or q.shape[1] != model.n_q:
        raise ValueError(f"q must have {model.n_q} components, got shape {q.shape}")
    norms = np.linalg.norm(q[:, 3:7], axis=1)
    if np.any(np.abs(norms - 1.0) > 1e-9):
        worst = float(np.max(np.abs(norms - 1.0)))
        raise ValueError(f"base quaternion not unit (deviation {worst:.2e})")
    if v is None:
        return q, single
    v = np.asarray(v, dtype=float)
    if single:
        v = v[None, :] if v.ndim == 1 else v
    if v.shape != (q.shape[0], model.n_v):
        raise ValueError(f"v must have shape ({q.shape[0]}, {model.n_v}), got {v.shape}")
    return q, v, single


class _Kin:
    """Per-body world kinematics for a batch of configurations."""

    __slots__ = ("R", "o", "axw", "com", "Iw")

    def __init__(self, R, o, axw, com, Iw):
        self.R = R
        self.o = o
        self.axw = axw
        self.com = com
        self.Iw = Iw


def _kin(model: KinematicModel, q: np.ndarray) -> _Kin:
    T = q.shape[0]
    nb = len(model.bodies)
    R = np.empty((T, nb, 3, 3))
    o = np.empty((T, nb, 3))
    axw = np.zeros((T, nb, 3))
    jq = q[:, Q_JOINTS:]
    for i, b in enumerate(model.bodies):
        if b.parent < 0:
            R[:, 0] = rot.quat_to_matrix(q[:, 3:7])
            o[:, 0] = q[:, 0:3]
            continue
        Rp = R[:, b.parent]
        Rj = np.einsum("tab,bc->tac", Rp, b.rot_fixed)
        oj = o[:, b.parent] + np.einsum("tab,b->ta", Rp, b.pos_fixed)
        qj = jq[:, b.dof - 6]
        aw = Rj @ b.axis
        axw[:, i] = aw
        if b.joint_type == "revolute":
            R[:, i] = np.einsum("tab,tbc->tac", Rj, rot.axis_angle_matrix(b.axis, qj))
            o[:, i] = oj
        else:
            R[:, i] = Rj
            o[:, i] = oj + aw * qj[:, None]
    com = o + np.einsum("tnab,nb->tna", R, np.stack([b.com for b in model.bodies]))
    Iloc = np.stack([b.inertia for b in model.bodies])
    Iw = np.einsum("tnab,nbc,tndc->tnad", R, Iloc, R)
    return _Kin(R, o, axw, com, Iw)


def _screws(model: KinematicModel, kin: _Kin) -> np.ndarray:
    """Per-dof motion screws at the world origin, stacked (T, 6, n_v)."""
    T = kin.o.shape[0]
    S = np.zeros((T, 6, model.n_v))
    p = kin.o[:, 0]
    eye = np.eye(3)
    for k in range(3):
        S[:, 0:3, k] = eye[k]
        S[:, 3:6, k] = np.cross(p, eye[k])
        S[:, 3 + k, 3 + k] = 1.0
    for i, b in enumerate(model.bodies):
        if b.parent < 0:
            continue
        a = kin.axw[:, i]
        if b.joint_type == "revolute":
            S[:, 0:3, b.dof] = a
            S[:, 3:6, b.dof] = np.cross(kin.o[:, i], a)
        else:
            S[:, 3:6, b.dof] = a
    return S


class FramePoses:
    """World poses for each body, with named-frame lookups."""

    def __init__(self, model: KinematicModel, kin: _Kin, single: bool):
        self._model = model
        self._kin = kin
        self._single = single

    @property
    def body_positions(self) -> np.ndarray:
        o = self._kin.o
        return o[0] if self._single else o

    @property
    def body_rotations(self) -> np.ndarray:
        R = self._kin.R
        return R[0] if self._single else R

    def _frame(self, name):
        try:
            return self._model.frames[name]
        except KeyError:
            raise UnknownFrameError(f"unknown frame {name!r}") from None

    def position(self, name: str, point=(0.0, 0.0, 0.0)) -> np.ndarray:
        bidx, off = self._frame(name)
        off = off + np.asarray(point, dtype=float)
        p = self._kin.o[:, bidx] + np.einsum("tab,b->ta", self._kin.R[:, bidx], off)
        return p[0] if self._single else p

    def rotation(self, name: str) -> np.ndarray:
        bidx, _ = self._frame(name)
        R = self._kin.R[:, bidx]
        return R[0] if self._single else R


def forward_kinematics(model: KinematicModel, q) -> FramePoses:
    q2, single = _promote(model, q)
    return FramePoses(model, _kin(model, q2), single)


def _spatial_inertia(model: KinematicModel, kin: _Kin) -> np.ndarray:
    """Per-body 6x6 spatial inertia about the world origin, (T, nb, 6, 6)."""
    T, nb = kin.o.shape[0], len(model.bodies)
    m = np.array([b.mass for b in model.bodies])
    ch = rot.skew(kin.com)
    Isp = np.zeros((T, nb, 6, 6))
    Isp[:, :, 0:3, 0:3] = kin.Iw - m[:, None, None] * (ch @ ch)
    Isp[:, :, 0:3, 3:6] = m[:, None, None] * ch
    Isp[:, :, 3:6, 0:3] = -m[:, None, None] * ch
    Isp[:, :, 3:6, 3:6] = m[:, None, None] * np.eye(3)
    return Isp


def _body_dofs(model: KinematicModel, i: int) -> np.ndarray:
    b = model.bodies[i]
    return np.arange(6) if b.parent < 0 else np.array([b.dof])


def mass_matrix(model: KinematicModel, q) -> np.ndarray:
    """Joint-space mass matrix by the composite-rigid-body algorithm."""
    q2, single = _promote(model, q)
    kin = _kin(model, q2)
    S = _screws(model, kin)
    Ic = _spatial_inertia(model, kin)
    for i in range(len(model.bodies) - 1, 0, -1):
        Ic[:, model.bodies[i].parent] += Ic[:, i]
    T = q2.shape[0]
    A = np.zeros((T, model.n_v, model.n_v))
    for i in range(len(model.bodies)):
        dofs = _body_dofs(model, i)
        anc = np.flatnonzero(model.ancestor_dofs[i])
        F = np.einsum("tab,tbj->taj", Ic[:, i], S[:, :, dofs])
        blk = np.einsum("tai,taj->tij", S[:, :, anc], F)
        A[:, anc[:, None], dofs[None, :]] = blk
        A[:, dofs[:, None], anc[None, :]] = np.swapaxes(blk, 1, 2)
    return A[0] if single else A


def _rnea(model: KinematicModel, q2, v2, a2, with_gravity: bool) -> np.ndarray:
    """Generalized forces for motion (q, v, a), optionally under gravity."""
    kin = _kin(model, q2)
    T = q2.shape[0]
    nb = len(model.bodies)
    om = np.empty((T, nb, 3))
    al = np.empty((T, nb, 3))
    vo = np.empty((T, nb, 3))
    ao = np.empty((T, nb, 3))
    om[:, 0] = v2[:, 0:3]
    al[:, 0] = a2[:, 0:3]
    vo[:, 0] = v2[:, 3:6]
    ao[:, 0] = a2[:, 3:6]
    for i, b in enumerate(model.bodies):
        if b.parent < 0:
            continue
        lam = b.parent
        d = kin.o[:, i] - kin.o[:, lam]
        aw = kin.axw[:, i]
        qd = v2[:, b.dof, None]
        qdd = a2[:, b.dof, None]
        wxd = np.cross(om[:, lam], d)
        base_vo = vo[:, lam] + wxd
        base_ao = (
            ao[:, lam]
            + np.cross(al[:, lam], d)
            + np.cross(om[:, lam], wxd)
        )
        if b.joint_type == "revolute":
            om[:, i] = om[:, lam] + aw * qd
            al[:, i] = al[:, lam] + aw * qdd + np.cross(om[:, lam], aw) * qd
            vo[:, i] = base_vo
            ao[:, i] = base_ao
        else:
            om[:, i] = om[:, lam]
            al[:, i] = al[:, lam]
            vo[:, i] = base_vo + aw * qd
            ao[:, i] = base_ao + 2.0 * np.cross(om[:, lam], aw * qd) + aw * qdd

    rc = kin.com - kin.o
    acom = ao + np.cross(al, rc) + np.cross(om, np.cross(om, rc))
    m = np.array([b.mass for b in model.bodies])[:, None]
    if with_gravity:
        acom = acom - model.gravity
    f = m * acom
    n = np.einsum("tnab,tnb->tna", kin.Iw, al) + np.cross(
        om, np.einsum("tnab,tnb->tna", kin.Iw, om)
    )
    W = np.empty((T, nb, 6))
    W[:, :, 0:3] = n + np.cross(kin.com, f)
    W[:, :, 3:6] = f
    for i in range(nb - 1, 0, -1):
        W[:, model.bodies[i].parent] += W[:, i]

    S = _screws(model, kin)
    tau = np.empty((T, model.n_v))
    tau[:, 0:6] = np.einsum("tak,ta->tk", S[:, :, 0:6], W[:, 0])
    for i, b in enumerate(model.bodies):
        if b.parent >= 0:
            tau[:, b.dof] = np.einsum("ta,ta->t", S[:, :, b.dof], W[:, i])
    return tau


def bias_forces(model: KinematicModel, q, v) -> np.ndarray:
    """Coriolis and centrifugal generalized forces (zero acceleration, no gravity)."""
    q2, v2, single = _promote(model, q, v)
    tau = _rnea(model, q2, v2, np.zeros_like(v2), with_gravity=False)
    return tau[0] if single else tau


def gravity_vector(model: KinematicModel, q) -> np.ndarray:
    """Generalized gravity forces at rest."""
    q2, single = _promote(model, q)
    z = np.zeros((q2.shape[0], model.n_v))
    tau = _rnea(model, q2, z, z, with_gravity=True)
    return tau[0] if single else tau


def inverse_dynamics(model: KinematicModel, q, v, a) -> np.ndarray:
    """Generalized forces realizing acceleration a at state (q, v) under gravity."""
    q2, v2, single = _promote(model, q, v)
    a2 = np.asarray(a, dtype=float)
    if single and a2.ndim == 1:
        a2 = a2[None, :]
    if a2.shape != v2.shape:
        raise ValueError(f"a must have shape {v2.shape}, got {a2.shape}")
    tau = _rnea(model, q2, v2, a2, with_gravity=True)
    return tau[0] if single else tau


def task_jacobian(model: KinematicModel, q, task: TaskSpec) -> np.ndarray:
    """Jacobian mapping v to the task velocity; rows ordered (angular, linear)."""
    q2, single = _promote(model, q)
    try:
        bidx, off = model.frames[task.frame]
    except KeyError:
        raise UnknownFrameError(f"unknown frame {task.frame!r}") from None
    kin = _kin(model, q2)
    S = _screws(model, kin)
    Sm = S * model.ancestor_dofs[bidx]
    x = kin.o[:, bidx] + np.einsum("tab,b->ta", kin.R[:, bidx], off + np.asarray(task.point))
    Jang = Sm[:, 0:3, :]
    lever = np.cross(np.swapaxes(Jang, 1, 2), x[:, None, :])
    Jlin = Sm[:, 3:6, :] + np.swapaxes(lever, 1, 2)
    if task.kind == "orientation3":
        J = Jang
    elif task.kind == "position3":
        J = Jlin
    else:
        J = np.concatenate([Jang, Jlin], axis=1)
    return J[0] if single else J


def dyn_consistent_inverse(A, J):
    """Task-space inertia and dynamically consistent inverse of J.

    Returns (Lambda, Jbar) with Lambda = (J A^-1 J^T)^-1 and
    Jbar = A^-1 J^T Lambda, so J @ Jbar = I. Raises RankDeficiencyError
    when J has a singular value below 1e-8 times its largest; no damping
    is applied because downstream nullspace identities must hold exactly.
    """
    A = np.asarray(A, dtype=float)
    J = np.asarray(J, dtype=float)
    single = J.ndim == 2
    if single:
        J = J[None]
    if A.ndim == 2:
        A = np.broadcast_to(A, (J.shape[0],) + A.shape)
    m = J.shape[1]
    n = J.shape[2]
    if m == 0:
        lam = np.zeros((J.shape[0], 0, 0))
        jbar = np.zeros((J.shape[0], n, 0))
        return (lam[0], jbar[0]) if single else (lam, jbar)
    sv = np.linalg.svd(J, compute_uv=False)
    bad = sv[:, -1] < 1e-8 * sv[:, 0]
    if np.any(bad):
        k = int(np.flatnonzero(bad)[0])
        raise RankDeficiencyError(
            f"task Jacobian is rank deficient (frame {k}: singular values "
            f"{sv[k, 0]:.3e} .. {sv[k, -1]:.3e})"
        )
    X = np.linalg.solve(A, np.swapaxes(J, 1, 2))
    M = J @ X
    M = 0.5 * (M + np.swapaxes(M, 1, 2))
    lam = np.linalg.inv(M)
    lam = 0.5 * (lam + np.swapaxes(lam, 1, 2))
    jbar = X @ lam
    return (lam[0], jbar[0]) if single else (lam, jbar)


def nullspace(J, Jbar) -> np.ndarray:
    """Nullspace projector N = I - Jbar J; satisfies J N = 0 and N N = N."""
    J = np.asarray(J, dtype=float)
    Jbar = np.asarray(Jbar, dtype=float)
    n = Jbar.shape[-2]
    return np.eye(n) - Jbar @ J


def momentum(model: KinematicModel, q, v) -> np.ndarray:
    """Generalized momentum p = A v."""
    q2, v2, single = _promote(model, q, v)
    A = mass_matrix(model, q2)
    p = np.einsum("tij,tj->ti", A, v2)
    return p[0] if single else p


def kinetic_energy(model: KinematicModel, q, v) -> np.ndarray:
    """Kinetic energy 0.5 v^T A v in joules."""
    q2, v2, single = _promote(model, q, v)
    A = mass_matrix(model, q2)
    ke = 0.5 * np.einsum("ti,tij,tj->t", v2, A, v2)
    return float(ke[0]) if single else ke


def integrate_configuration(model: KinematicModel, q, v, dt: float) -> np.ndarray:
    """One explicit Euler step on the configuration manifold.

    Base position and joints advance additively; base orientation advances
    multiplicatively by the world-frame rotation exp(dt*w).
    """
    q2, v2, single = _promote(model, q, v)
    out = q2.copy()
    out[:, 0:3] += dt * v2[:, 3:6]
    out[:, 3:7] = rot.quat_multiply(rot.rotvec_to_quat(dt * v2[:, 0:3]), q2[:, 3:7])
    out[:, 3:7] = rot.quat_normalize(out[:, 3:7])
    out[:, Q_JOINTS:] += dt * v2[:, V_JOINTS:]
    return out[0] if single else out


def integrate_path(model: KinematicModel, q0, v_series, dt: float) -> np.ndarray:
    """Integrate a velocity series from q0; returns as many frames as given.

    Frame k accumulates steps dt * v[0..k-1]; the last velocity sample does
    not produce a new frame.
    """
    v_series = np.asarray(v_series, dtype=float)
    if v_series.ndim != 2 or v_series.shape[1] != model.n_v:
        raise ValueError(f"v_series must be (T, {model.n_v}), got {v_series.shape}")
    T = v_series.shape[0]
    q = np.empty((T, model.n_q))
    q[0] = np.asarray(q0, dtype=float)
    for k in range(T - 1):
        q[k + 1] = integrate_configuration(model, q[k], v_series[k], dt)
    return q

"""Quaternion and rotation-matrix helpers.

Quaternions are scalar-first (w, x, y, z) unit quaternions. Angular
velocities are world-frame rates: advancing an orientation by a rate w
over a step dt is the left multiplication exp(dt*w) * q.

All functions broadcast over leading axes unless noted otherwise.
"""

from __future__ import annotations

import numpy as np

_SMALL = 1e-8


def quat_normalize(q):
    q = np.asarray(q, dtype=float)
    return q / np.linalg.norm(q, axis=-1, keepdims=True)


def quat_multiply(a, b):
    a = np.asarray(a, dtype=float)
    b = np.asarray(b, dtype=float)
    aw, ax, ay, az = a[..., 0], a[..., 1], a[..., 2], a[..., 3]
    bw, bx, by, bz = b[..., 0], b[..., 1], b[..., 2], b[..., 3]
    return np.stack(
        [
            aw * bw - ax * bx - ay * by - az * bz,
            aw * bx + ax * bw + ay * bz - az * by,
            aw * by - ax * bz + ay * bw + az * bx,
            aw * bz + ax * by - ay * bx + az * bw,
        ],
        axis=-1,
    )


def quat_conjugate(q):
    q = np.asarray(q, dtype=float)
    out = q.copy()
    out[..., 1:] *= -1.0
    return out


def quat_to_matrix(q):
    q = np.asarray(q, dtype=float)
    w, x, y, z = q[..., 0], q[..., 1], q[..., 2], q[..., 3]
    xx, yy, zz = x * x, y * y, z * z
    wx, wy, wz = w * x, w * y, w * z
    xy, xz, yz = x * y, x * z, y * z
    R = np.empty(q.shape[:-1] + (3, 3), dtype=float)
    R[..., 0, 0] = 1.0 - 2.0 * (yy + zz)
    R[..., 0, 1] = 2.0 * (xy - wz)
    R[..., 0, 2] = 2.0 * (xz + wy)
    R[..., 1, 0] = 2.0 * (xy + wz)
    R[..., 1, 1] = 1.0 - 2.0 * (xx + zz)
    R[..., 1, 2] = 2.0 * (yz - wx)
    R[..., 2, 0] = 2.0 * (xz - wy)
    R[..., 2, 1] = 2.0 * (yz + wx)
    R[..., 2, 2] = 1.0 - 2.0 * (xx + yy)
    return R


def matrix_to_quat(R):
    """Single 3x3 rotation matrix to unit quaternion (Shepperd's method)."""
    R = np.asarray(R, dtype=float)
    tr = R[0, 0] + R[1, 1] + R[2, 2]
    if tr > 0.0:
        s = np.sqrt(tr + 1.0) * 2.0
        q = np.array(
            [0.25 * s, (R[2, 1] - R[1, 2]) / s, (R[0, 2] - R[2, 0]) / s, (R[1, 0] - R[0, 1]) / s]
        )
    elif R[0, 0] >= R[1, 1] and R[0, 0] >= R[2, 2]:
        s = np.sqrt(1.0 + R[0, 0] - R[1, 1] - R[2, 2]) * 2.0
        q = np.array(
            [(R[2, 1] - R[1, 2]) / s, 0.25 * s, (R[0, 1] + R[1, 0]) / s, (R[0, 2] + R[2, 0]) / s]
        )
    elif R[1, 1] >= R[2, 2]:
        s = np.sqrt(1.0 + R[1, 1] - R[0, 0] - R[2, 2]) * 2.0
        q = np.array(
            [(R[0, 2] - R[2, 0]) / s, (R[0, 1] + R[1, 0]) / s, 0.25 * s, (R[1, 2] + R[2, 1]) / s]
        )
    else:
        s = np.sqrt(1.0 + R[2, 2] - R[0, 0] - R[1, 1]) * 2.0
        q = np.array(
            [(R[1, 0] - R[0, 1]) / s, (R[0, 2] + R[2, 0]) / s, (R[1, 2] + R[2, 1]) / s, 0.25 * s]
        )
    if q[0] < 0.0:
        q = -q
    return q / np.linalg.norm(q)


def rotvec_to_quat(r):
    r = np.asarray(r, dtype=float)
    angle = np.linalg.norm(r, axis=-1)
    half = 0.5 * angle
    # sin(angle/2)/angle, with its series value at angle -> 0
    small = angle < _SMALL
    scale = np.where(small, 0.5 - angle * angle / 48.0, np.sin(half) / np.where(small, 1.0, angle))
    q = np.empty(r.shape[:-1] + (4,), dtype=float)
    q[..., 0] = np.cos(half)
    q[..., 1:] = r * scale[..., None]
    return q


def quat_to_rotvec(q):
    q = np.asarray(q, dtype=float)
    # take the short way round: force w >= 0
    q = np.where(q[..., 0:1] < 0.0, -q, q)
    w = q[..., 0]
    vec = q[..., 1:]
    s = np.linalg.norm(vec, axis=-1)
    small = s < _SMALL
    angle = 2.0 * np.arctan2(s, w)
    w_safe = np.where(w == 0.0, 1.0, w)
    scale = np.where(small, 2.0 / w_safe, angle / np.where(small, 1.0, s))
    return vec * scale[..., None]


def quat_slerp(qa, qb, u):
    """Spherical interpolation between paired quaternions.

    qa, qb: (..., 4); u: (...,) interpolation fractions in [0, 1].
    """
    qa = np.asarray(qa, dtype=float)
    qb = np.asarray(qb, dtype=float)
    u = np.asarray(u, dtype=float)
    dot = np.sum(qa * qb, axis=-1)
    qb = np.where(dot[..., None] < 0.0, -qb, qb)
    dot = np.abs(dot)
    dot = np.clip(dot, -1.0, 1.0)
    omega = np.arccos(dot)
    sin_omega = np.sin(omega)
    small = sin_omega < _SMALL
    sin_safe = np.where(small, 1.0, sin_omega)
    wa = np.where(small, 1.0 - u, np.sin((1.0 - u) * omega) / sin_safe)
    wb = np.where(small, u, np.sin(u * omega) / sin_safe)
    out = wa[..., None] * qa + wb[..., None] * qb
    return quat_normalize(out)


def axis_angle_matrix(axis, theta):
    """Rodrigues rotation about a fixed unit axis for a batch of angles.

    axis: (3,); theta: (...,) -> (..., 3, 3).
    """
    axis = np.asarray(axis, dtype=float)
    theta = np.asarray(theta, dtype=float)
    K = skew(axis)
    c = np.cos(theta)[..., None, None]
    s = np.sin(theta)[..., None, None]
    eye = np.eye(3)
    return eye * c + s * K + (1.0 - c) * np.multiply.outer(np.ones_like(theta), np.outer(axis, axis)).reshape(theta.shape + (3, 3))


def rpy_to_matrix(rpy):
    """Extrinsic x-y-z (roll, pitch, yaw) to rotation matrix: Rz @ Ry @ Rx."""
    r, p, y = float(rpy[0]), float(rpy[1]), float(rpy[2])
    cr, sr = np.cos(r), np.sin(r)
    cp, sp = np.cos(p), np.sin(p)
    cy, sy = np.cos(y), np.sin(y)
    Rx = np.array([[1, 0, 0], [0, cr, -sr], [0, sr, cr]])
    Ry = np.array([[cp, 0, sp], [0, 1, 0], [-sp, 0, cp]])
    Rz = np.array([[cy, -sy, 0], [sy, cy, 0], [0, 0, 1]])
    return Rz @ Ry @ Rx


def skew(v):
    v = np.asarray(v, dtype=float)
    out = np.zeros(v.shape[:-1] + (3, 3), dtype=float)
    out[..., 0, 1] = -v[..., 2]
    out[..., 0, 2] = v[..., 1]
    out[..., 1, 0] = v[..., 2]
    out[..., 1, 2] = -v[..., 0]
    out[..., 2, 0] = -v[..., 1]
    out[..., 2, 1] = v[..., 0]
    return out


def integrate_quat(q, omega, dt):
    """Advance orientation q by world-frame angular velocity omega over dt."""
    return quat_normalize(quat_multiply(rotvec_to_quat(np.asarray(omega, dtype=float) * dt), q))

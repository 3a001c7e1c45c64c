"""Small scalar-first quaternion helpers.

Quaternions are 4-tuples (w, x, y, z). Only the handful of operations the
metric and skeleton code need live here; this is not a general rotation
library.
"""

import math
from typing import Sequence

Quat = tuple[float, float, float, float]
Vec3 = tuple[float, float, float]


def norm(q: Sequence[float]) -> float:
    return math.sqrt(q[0] * q[0] + q[1] * q[1] + q[2] * q[2] + q[3] * q[3])


def normalized(q: Sequence[float]) -> Quat:
    n = norm(q)
    if n == 0.0:
        raise ValueError("cannot normalize zero quaternion")
    return (q[0] / n, q[1] / n, q[2] / n, q[3] / n)


def inner(q1: Sequence[float], q2: Sequence[float]) -> float:
    return q1[0] * q2[0] + q1[1] * q2[1] + q1[2] * q2[2] + q1[3] * q2[3]


def rotate(q: Sequence[float], v: Sequence[float]) -> Vec3:
    """Rotate vector v by unit quaternion q (scalar-first)."""
    w, x, y, z = q
    vx, vy, vz = v
    # t = 2 q_vec x v
    tx = 2.0 * (y * vz - z * vy)
    ty = 2.0 * (z * vx - x * vz)
    tz = 2.0 * (x * vy - y * vx)
    # v' = v + w t + q_vec x t
    return (
        vx + w * tx + (y * tz - z * ty),
        vy + w * ty + (z * tx - x * tz),
        vz + w * tz + (x * ty - y * tx),
    )


def from_axis_angle(axis: Sequence[float], angle_rad: float) -> Quat:
    ax, ay, az = axis
    n = math.sqrt(ax * ax + ay * ay + az * az)
    if n == 0.0:
        raise ValueError("axis must be non-zero")
    half = 0.5 * angle_rad
    s = math.sin(half) / n
    return (math.cos(half), ax * s, ay * s, az * s)


IDENTITY: Quat = (1.0, 0.0, 0.0, 0.0)

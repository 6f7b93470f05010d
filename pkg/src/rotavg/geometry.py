"""Quaternion/rotation primitives for averaging on the unit sphere S3.

Unit quaternions q = (q0, q1, q2, q3) (scalar first) double-cover SO(3):
q and -q map to the same rotation. Everything downstream — cost models,
control fields, the parametric sweep — is built on the handful of maps
in this module: the covering map and its differential, the inverse lift,
three distances, and the skew matrices that push tangent data down to
rotation space.

All functions take and return plain numpy arrays.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

__all__ = [
    "normalize",
    "canonicalize_sign",
    "covering_map",
    "quat_from_rotation",
    "rotation_angle",
    "dist_d1",
    "dist_d2",
    "dist_d3",
    "trace_identity_check",
    "delta_skew",
    "dp_apply",
    "SampleSet",
]


def normalize(q):
    """Return q / ||q||.

    Parameters
    ----------
    q : (4,) array_like
        Nonzero quaternion.

    Returns
    -------
    (4,) ndarray
        Unit quaternion.

    Raises
    ------
    ValueError
        If ``q`` is (numerically) zero.
    """
    q = np.asarray(q, dtype=float)
    n = np.linalg.norm(q)
    if n < 1e-300:
        raise ValueError("cannot normalize the zero quaternion")
    return q / n


def canonicalize_sign(q):
    """Flip the sign of q so its first nonzero component is positive.

    q and -q represent the same rotation; tests and reported results need a
    deterministic representative of each pair.
    """
    q = np.asarray(q, dtype=float)
    for c in q:
        if c != 0.0:
            return -q if c < 0.0 else q.copy()
    return q.copy()


def covering_map(q):
    """Rotation matrix of a unit quaternion (the 2-to-1 covering S3 -> SO(3)).

    Parameters
    ----------
    q : (4,) array_like
        Unit quaternion (q0, q1, q2, q3), scalar part first.

    Returns
    -------
    (3, 3) ndarray
        The rotation matrix; ``covering_map(q) == covering_map(-q)``.
    """
    q0, q1, q2, q3 = np.asarray(q, dtype=float)
    return np.array(
        [
            [
                q0 * q0 + q1 * q1 - q2 * q2 - q3 * q3,
                2.0 * (q1 * q2 - q0 * q3),
                2.0 * (q1 * q3 + q0 * q2),
            ],
            [
                2.0 * (q1 * q2 + q0 * q3),
                q0 * q0 - q1 * q1 + q2 * q2 - q3 * q3,
                2.0 * (q2 * q3 - q0 * q1),
            ],
            [
                2.0 * (q1 * q3 - q0 * q2),
                2.0 * (q2 * q3 + q0 * q1),
                q0 * q0 - q1 * q1 - q2 * q2 + q3 * q3,
            ],
        ]
    )


def quat_from_rotation(R):
    """Unit quaternion lift of a rotation matrix, sign-canonicalized.

    Uses the max-of-{trace, diagonal} branch so the division is always by a
    quantity bounded away from zero — the naive trace formula loses all
    precision near rotation angle pi.

    Parameters
    ----------
    R : (3, 3) array_like
        Rotation matrix.

    Returns
    -------
    (4,) ndarray
        Unit quaternion q with ``covering_map(q) == R`` and the first
        nonzero component positive.
    """
    R = np.asarray(R, dtype=float)
    t = np.trace(R)
    d = np.diagonal(R)
    if t >= d.max():
        s = 2.0 * np.sqrt(max(1.0 + t, 0.0))
        q = np.array(
            [
                0.25 * s,
                (R[2, 1] - R[1, 2]) / s,
                (R[0, 2] - R[2, 0]) / s,
                (R[1, 0] - R[0, 1]) / s,
            ]
        )
    else:
        i = int(np.argmax(d))
        if i == 0:
            s = 2.0 * np.sqrt(max(1.0 + R[0, 0] - R[1, 1] - R[2, 2], 0.0))
            q = np.array(
                [
                    (R[2, 1] - R[1, 2]) / s,
                    0.25 * s,
                    (R[0, 1] + R[1, 0]) / s,
                    (R[0, 2] + R[2, 0]) / s,
                ]
            )
        elif i == 1:
            s = 2.0 * np.sqrt(max(1.0 + R[1, 1] - R[0, 0] - R[2, 2], 0.0))
            q = np.array(
                [
                    (R[0, 2] - R[2, 0]) / s,
                    (R[0, 1] + R[1, 0]) / s,
                    0.25 * s,
                    (R[1, 2] + R[2, 1]) / s,
                ]
            )
        else:
            s = 2.0 * np.sqrt(max(1.0 + R[2, 2] - R[0, 0] - R[1, 1], 0.0))
            q = np.array(
                [
                    (R[1, 0] - R[0, 1]) / s,
                    (R[0, 2] + R[2, 0]) / s,
                    (R[1, 2] + R[2, 1]) / s,
                    0.25 * s,
                ]
            )
    return canonicalize_sign(normalize(q))


def rotation_angle(R1, R2):
    """Relative rotation angle |theta| = arccos((tr(R1^T R2) - 1)/2) in [0, pi].

    The trace argument is clamped to [-1, 1] before arccos; floating-point
    drift on traces of products routinely lands a hair outside.
    """
    t = np.trace(np.asarray(R1).T @ np.asarray(R2))
    return float(np.arccos(np.clip((t - 1.0) / 2.0, -1.0, 1.0)))


def dist_d1(R1, R2):
    """Chordal distance: Frobenius norm ||R1 - R2||_F."""
    return float(np.linalg.norm(np.asarray(R1, dtype=float) - np.asarray(R2, dtype=float)))


def dist_d2(R1, R2):
    """Geodesic distance sqrt(2) * |theta|.

    Raises
    ------
    ValueError
        If tr(R1^T R2) = -1 within 1e-12 (relative angle pi), where the
        matrix logarithm — hence the distance derivative — is undefined.
    """
    t = float(np.trace(np.asarray(R1).T @ np.asarray(R2)))
    if abs(t + 1.0) < 1e-12:
        raise ValueError("geodesic distance undefined at relative angle pi (trace = -1)")
    return float(np.sqrt(2.0) * rotation_angle(R1, R2))


def dist_d3(R1, R2):
    """1 - (1/2) sqrt(tr(R1^T R2) + 1); equals 1 - |<q1,q2>| on quaternion lifts."""
    t = float(np.trace(np.asarray(R1).T @ np.asarray(R2)))
    return float(1.0 - 0.5 * np.sqrt(max(t + 1.0, 0.0)))


def trace_identity_check(q, qi):
    """Residual of <q,qi>^2 = (tr((R^q)^T R^qi) + 1)/4 — should be ~0.

    Returns the signed difference; used as a self-test of the covering-map
    algebra, not in any production path.
    """
    q = np.asarray(q, dtype=float)
    qi = np.asarray(qi, dtype=float)
    lhs = float(np.dot(q, qi)) ** 2
    rhs = 0.25 * (np.trace(covering_map(q).T @ covering_map(qi)) + 1.0)
    return float(lhs - rhs)


def delta_skew(q, qi):
    """The skew matrix Delta_i(q) pairing a point q with a sample lift qi.

    Assembled from its three independent entries, so ``D + D.T`` is exactly
    zero. Satisfies ``delta_skew(-q, qi) == -delta_skew(q, qi)`` and
    ``<q,qi> * Delta_i(q) == ((R^q)^T R^qi - (R^qi)^T R^q) / 4``.
    """
    q0, q1, q2, q3 = np.asarray(q, dtype=float)
    p0, p1, p2, p3 = np.asarray(qi, dtype=float)
    a = -q0 * p3 + q1 * p2 - q2 * p1 + q3 * p0
    b = q0 * p2 + q1 * p3 - q2 * p0 - q3 * p1
    c = -q0 * p1 + q1 * p0 + q2 * p3 - q3 * p2
    return np.array([[0.0, a, b], [-a, 0.0, c], [-b, -c, 0.0]])


def _dp_jacobian(q):
    # 9x4 Jacobian of the coordinate extension of the covering map,
    # rows ordered row-major over the 3x3 image.
    q0, q1, q2, q3 = q
    return 2.0 * np.array(
        [
            [q0, q1, -q2, -q3],
            [-q3, q2, q1, -q0],
            [q2, q3, q0, q1],
            [q3, q2, q1, q0],
            [q0, -q1, q2, -q3],
            [-q1, -q0, q3, q2],
            [-q2, q3, -q0, q1],
            [q1, q0, q3, q2],
            [q0, -q1, -q2, q3],
        ]
    )


def dp_apply(q, v):
    """Differential of the covering map: directional derivative along v.

    Applies the 9x4 Jacobian of the ambient extension of the covering map at
    q to the 4-vector v and reshapes the result row-major into 3x3. For v
    tangent to the sphere at unit q, ``covering_map(q).T @ dp_apply(q, v)``
    is skew-symmetric (a tangent vector of SO(3) in body coordinates).
    """
    q = np.asarray(q, dtype=float)
    v = np.asarray(v, dtype=float)
    return (_dp_jacobian(q) @ v).reshape(3, 3)


@dataclass
class SampleSet:
    """The averaging input: r sample rotations with chosen quaternion lifts.

    Attributes
    ----------
    quaternions : (r, 4) ndarray
        Unit lifts q_i, one row per sample, kept exactly as supplied
        (results never depend on the lift signs, but the lifts themselves
        are the caller's choice).
    rotations : (r, 3, 3) ndarray
        The sample rotations R_i; ``covering_map(q_i) == R_i`` within 1e-10
        is enforced at construction.
    """

    quaternions: np.ndarray
    rotations: np.ndarray = field(default=None)  # type: ignore[assignment]

    def __post_init__(self):
        Q = np.atleast_2d(np.asarray(self.quaternions, dtype=float))
        if Q.ndim != 2 or Q.shape[1] != 4 or Q.shape[0] < 1:
            raise ValueError("quaternions must be an (r, 4) array with r >= 1")
        Q = np.array([normalize(row) for row in Q])
        if self.rotations is None:
            R = np.array([covering_map(row) for row in Q])
        else:
            R = np.asarray(self.rotations, dtype=float)
            if R.shape != (Q.shape[0], 3, 3):
                raise ValueError("rotations must be an (r, 3, 3) array matching quaternions")
            for row, M in zip(Q, R):
                if np.max(np.abs(covering_map(row) - M)) > 1e-10:
                    raise ValueError("quaternion lift does not reproduce its rotation")
        self.quaternions = Q
        self.rotations = R

    @classmethod
    def from_quaternions(cls, qs):
        return cls(np.asarray(qs, dtype=float))

    @classmethod
    def from_rotations(cls, Rs):
        Rs = np.asarray(Rs, dtype=float)
        if Rs.ndim == 2:
            Rs = Rs[None]
        qs = np.array([quat_from_rotation(R) for R in Rs])
        return cls(qs, Rs)

    @property
    def r(self):
        return self.quaternions.shape[0]

    def __len__(self):
        return self.r

"""The four averaging cost models on SO(3), lifted to the quaternion sphere.

Each model owns a sample set and exposes the lifted value, the analytic
gradient of its ambient prolongation, the sphere control field, and two
residual operators: the weighted-skew system on S3 pushed down through the
covering map, and the equivalent characterization directly in rotation
matrices. Writing x_i = <q, q_i>:

    l2 chordal      value 8 sum (1 - x_i^2)            weights x_i
    geodesic        value 2 sum arccos^2|x_i|          weights sgn(x_i) arccos|x_i| / sqrt(1-x_i^2)
    trace-sqrt      value sum (1 - |x_i|)^2            weights (1 - |x_i|) sgn(x_i)
    Lp chordal      value 8^(p/2) sum (1-x_i^2)^(p/2)  weights (1-x_i^2)^(p/2-1) x_i

The geodesic model lives on the sphere minus the hyperplanes Pi_i where
x_i = 0 (relative angle pi to a sample); trace-sqrt is non-differentiable
there; Lp with p < 2 additionally excludes the sample lines. Guards keep
a finite buffer eps_dom around each excluded set.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional

import numpy as np

from .control import ScalarField, apply_T_sphere
from .geometry import SampleSet

__all__ = [
    "DomainError",
    "NonDifferentiable",
    "DomainGuard",
    "CostModel",
    "so3_log",
    "EPS_DOM",
]

EPS_DOM = 1e-9  # guard buffer around the excluded sets


class DomainError(ValueError):
    """Point lies on (or within the guard buffer of) an excluded set."""


class NonDifferentiable(ValueError):
    """The model value exists here but its gradient does not (trace-sqrt on Pi_i)."""


@dataclass(frozen=True)
class DomainGuard:
    """Clearances from the excluded loci, both in [0, 1].

    min_abs_dot:   min_i |<q, q_i>| — distance to the nearest hyperplane Pi_i.
    min_line_dist: min_i sqrt(1 - <q, q_i>^2) — distance to the nearest sample line.
    """

    min_abs_dot: float
    min_line_dist: float


def _arc_over_sin(phi):
    """phi / sin(phi), elementwise, stable at phi -> 0 (Taylor below 1e-4)."""
    phi = np.asarray(phi, dtype=float)
    small = phi < 1e-4
    out = np.empty_like(phi)
    p2 = phi[small] ** 2
    out[small] = 1.0 + p2 / 6.0 + 7.0 * p2 * p2 / 360.0
    out[~small] = phi[~small] / np.sin(phi[~small])
    return out


def so3_log(Q):
    """Principal matrix logarithm of a rotation: (theta / 2 sin theta)(Q - Q^T).

    Raises DomainError at relative angle pi (trace = -1 within 1e-12), where
    the logarithm has no principal branch.
    """
    Q = np.asarray(Q, dtype=float)
    t = float(np.trace(Q))
    if abs(t + 1.0) < 1e-12:
        raise DomainError("matrix logarithm undefined at rotation angle pi")
    theta = float(np.arccos(np.clip((t - 1.0) / 2.0, -1.0, 1.0)))
    if theta < 1e-4:
        half = 0.5 * (1.0 + theta**2 / 6.0 + 7.0 * theta**4 / 360.0)
    else:
        half = 0.5 * theta / np.sin(theta)
    return half * (Q - Q.T)


@dataclass(frozen=True)
class CostModel:
    """One averaging cost over a fixed :class:`~rotavg.geometry.SampleSet`.

    ``kind`` is one of {"L2Chordal", "Geodesic", "TraceSqrt", "LpChordal"};
    ``p`` is set only for LpChordal (real, >= 1). Instances are immutable
    and every evaluator is a pure function.
    """

    kind: str
    samples: SampleSet
    p: Optional[float] = None

    def __post_init__(self):
        if self.kind not in ("L2Chordal", "Geodesic", "TraceSqrt", "LpChordal"):
            raise ValueError(f"unknown cost kind {self.kind!r}")
        if self.kind == "LpChordal":
            if self.p is None or self.p < 1.0:
                raise ValueError("LpChordal requires p >= 1")
        elif self.p is not None:
            raise ValueError("p is only meaningful for LpChordal")

    @classmethod
    def l2_chordal(cls, samples):
        return cls("L2Chordal", samples)

    @classmethod
    def geodesic(cls, samples):
        return cls("Geodesic", samples)

    @classmethod
    def trace_sqrt(cls, samples):
        return cls("TraceSqrt", samples)

    @classmethod
    def lp_chordal(cls, samples, p):
        return cls("LpChordal", samples, float(p))

    def scalar_field(self) -> ScalarField:
        """This cost as a plain (value, grad) pair for the ambient machinery."""
        return ScalarField(value=self.value, grad=self.gradient)

    # -- domain -----------------------------------------------------------

    def guard(self, q) -> DomainGuard:
        d = self.samples.quaternions @ np.asarray(q, dtype=float)
        return DomainGuard(
            min_abs_dot=float(np.min(np.abs(d))),
            min_line_dist=float(np.min(np.sqrt(np.maximum(1.0 - d * d, 0.0)))),
        )

    def admissible(self, q) -> bool:
        """True if q clears the guard buffer for this model's excluded sets."""
        g = self.guard(q)
        if self.kind in ("Geodesic", "TraceSqrt"):
            return g.min_abs_dot > EPS_DOM
        if self.kind == "LpChordal" and self.p < 2.0:
            return g.min_line_dist > EPS_DOM
        return True

    # -- evaluators -------------------------------------------------------

    def value(self, q) -> float:
        q = np.asarray(q, dtype=float)
        d = self.samples.quaternions @ q
        if self.kind == "L2Chordal":
            return float(8.0 * np.sum(1.0 - d * d))
        if self.kind == "Geodesic":
            if np.min(np.abs(d)) < 1e-12:
                raise DomainError("geodesic cost undefined on a hyperplane Pi_i")
            u = np.clip(np.abs(d) / np.linalg.norm(q), 0.0, 1.0)
            return float(2.0 * np.sum(np.arccos(u) ** 2))
        if self.kind == "TraceSqrt":
            return float(np.sum((1.0 - np.abs(d)) ** 2))
        base = np.maximum(1.0 - d * d, 0.0)
        return float(8.0 ** (self.p / 2.0) * np.sum(base ** (self.p / 2.0)))

    def gradient(self, q) -> np.ndarray:
        """Analytic gradient of the prolongation (agrees with central FD)."""
        q = np.asarray(q, dtype=float)
        Q = self.samples.quaternions
        d = Q @ q
        if self.kind == "L2Chordal":
            return -16.0 * (d @ Q)
        if self.kind == "Geodesic":
            if np.min(np.abs(d)) <= EPS_DOM:
                raise DomainError("geodesic gradient needs clearance from the hyperplanes Pi_i")
            nq = np.linalg.norm(q)
            phi = np.arccos(np.clip(np.abs(d) / nq, 0.0, 1.0))
            s = np.sign(d) * _arc_over_sin(phi)
            # -4 sum_i s_i (|q|^2 q_i - d_i q) / |q|^3
            return (-4.0 / nq**3) * (nq * nq * (s @ Q) - np.dot(s, d) * q)
        if self.kind == "TraceSqrt":
            if np.min(np.abs(d)) <= EPS_DOM:
                raise NonDifferentiable("trace-sqrt gradient undefined on a hyperplane Pi_i")
            return -2.0 * (((1.0 - np.abs(d)) * np.sign(d)) @ Q)
        base = np.maximum(1.0 - d * d, 0.0)
        if self.p < 2.0 and np.min(np.sqrt(base)) <= EPS_DOM:
            raise DomainError("Lp gradient (p < 2) needs clearance from the sample lines")
        w = base ** (self.p / 2.0 - 1.0) * d
        return -self.p * 8.0 ** (self.p / 2.0) * (w @ Q)

    def control_field(self, q) -> np.ndarray:
        """The sphere control field: T(q) applied to the prolongation gradient.

        Tangent to S3 at q, vanishes exactly at the constrained critical
        points, and points in the ascent direction (the flow follows its
        negative).
        """
        return apply_T_sphere(q, self.gradient(q))

    # -- residual systems --------------------------------------------------

    def _weights(self, d):
        if self.kind == "L2Chordal":
            return d
        if self.kind == "Geodesic":
            if np.min(np.abs(d)) <= EPS_DOM:
                raise DomainError("residual needs clearance from the hyperplanes Pi_i")
            phi = np.arccos(np.clip(np.abs(d), 0.0, 1.0))
            return np.sign(d) * _arc_over_sin(phi)
        if self.kind == "TraceSqrt":
            if np.min(np.abs(d)) <= EPS_DOM:
                raise NonDifferentiable("residual undefined on a hyperplane Pi_i")
            return (1.0 - np.abs(d)) * np.sign(d)
        base = np.maximum(1.0 - d * d, 0.0)
        if self.p < 2.0 and np.min(np.sqrt(base)) <= EPS_DOM:
            raise DomainError("residual (p < 2) needs clearance from the sample lines")
        return base ** (self.p / 2.0 - 1.0) * d

    def pushforward_residual(self, q) -> np.ndarray:
        """sum_i w_i(q) Delta_i(q): the critical-point system pushed to SO(3).

        Returns a skew 3x3 matrix, identical at q and -q, and zero exactly
        where the control field is zero.
        """
        q = np.asarray(q, dtype=float)
        Q = self.samples.quaternions
        w = self._weights(Q @ q)
        q0, q1, q2, q3 = q
        a = np.dot(w, -q0 * Q[:, 3] + q1 * Q[:, 2] - q2 * Q[:, 1] + q3 * Q[:, 0])
        b = np.dot(w, q0 * Q[:, 2] + q1 * Q[:, 3] - q2 * Q[:, 0] - q3 * Q[:, 1])
        c = np.dot(w, -q0 * Q[:, 1] + q1 * Q[:, 0] + q2 * Q[:, 3] - q3 * Q[:, 2])
        return np.array([[0.0, a, b], [-a, 0.0, c], [-b, -c, 0.0]])

    def rotation_residual(self, R) -> np.ndarray:
        """The characterization equation directly in rotation matrices.

        l2 chordal:  Rbar^T R - R^T Rbar with Rbar the arithmetic mean;
        geodesic:    sum Log(R_i^T R);
        trace-sqrt:  sum (2/sqrt(tr(R^T R_i)+1) - 1)(R_i^T R - R^T R_i);
        Lp chordal:  sum (3 - tr(R^T R_i))^(p/2-1) (R_i^T R - R^T R_i).
        """
        R = np.asarray(R, dtype=float)
        Rs = self.samples.rotations
        if self.kind == "L2Chordal":
            Rbar = Rs.mean(axis=0)
            return Rbar.T @ R - R.T @ Rbar
        if self.kind == "Geodesic":
            out = np.zeros((3, 3))
            for Ri in Rs:
                out += so3_log(Ri.T @ R)
            return out
        out = np.zeros((3, 3))
        for Ri in Rs:
            t = float(np.sum(R * Ri))  # tr(R^T R_i)
            if self.kind == "TraceSqrt":
                if t + 1.0 < 1e-12:
                    raise DomainError("trace-sqrt residual undefined at relative angle pi")
                w = 2.0 / np.sqrt(t + 1.0) - 1.0
            else:
                base = max(3.0 - t, 0.0)
                if self.p < 2.0 and base < 1e-12:
                    raise DomainError("Lp residual (p < 2) undefined at a sample rotation")
                w = base ** (self.p / 2.0 - 1.0)
            out += w * (Ri.T @ R - R.T @ Ri)
        return out

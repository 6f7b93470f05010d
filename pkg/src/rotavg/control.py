"""Gram-determinant control fields on Euclidean ambient space.

Generic engine: given k constraint fields F_1..F_k on R^m and an objective
G, the standard control vector field

    v0 = sum_i (-1)^(i+k+1) det S[(F1..Fk); (F1..^Fi..Fk, G)] grad F_i
         + det S[(F1..Fk); (F1..Fk)] grad G

is tangent to every level set of F and restricts to a gradient-like field
for G on each regular leaf; <grad G, v0> is itself a Gram determinant, so
it is nonnegative and vanishes exactly at the constrained critical points.

The unit sphere S3 in R^4 (k=1, F = ||q||^2) has a closed-form fast path:
the degenerate tensor T with i_w T(q) = 4(<q,q> w - <q,w> q).
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Sequence

import numpy as np

__all__ = [
    "ScalarField",
    "AmbientProblem",
    "gramian",
    "v0",
    "dissipation_rate",
    "apply_T_sphere",
    "T_matrix_sphere",
    "unit_sphere_problem",
    "fd_gradient",
]


@dataclass(frozen=True)
class ScalarField:
    """A scalar field with its analytic gradient."""

    value: Callable[[np.ndarray], float]
    grad: Callable[[np.ndarray], np.ndarray]


@dataclass(frozen=True)
class AmbientProblem:
    """Constraint fields F_1..F_k and objective G on R^m, k < m.

    ``level`` is the target value c0 of F; the leaf of interest is
    F^{-1}(c0). Regularity (independent constraint gradients) is a
    pointwise condition — check it where you evaluate, via
    :meth:`regularity`.
    """

    dimension: int
    constraints: tuple[ScalarField, ...]
    objective: ScalarField
    level: tuple[float, ...]

    def __post_init__(self):
        k = len(self.constraints)
        if not 1 <= k < self.dimension:
            raise ValueError("need 1 <= k < m constraint fields")
        if len(self.level) != k:
            raise ValueError("level must have one entry per constraint")

    def regularity(self, x):
        """det of the constraint Gramian at x; > 1e-12 means x is regular."""
        grads = [f.grad(x) for f in self.constraints]
        return _det(gramian(grads, grads))


def gramian(grads_rows, grads_cols):
    """Gram matrix with entry (a, b) = <grads_cols[b], grads_rows[a]>."""
    rows = np.atleast_2d(np.asarray(grads_rows, dtype=float))
    cols = np.atleast_2d(np.asarray(grads_cols, dtype=float))
    if rows.shape[1] != cols.shape[1]:
        raise ValueError("gradient dimension mismatch")
    return rows @ cols.T


def _det(M):
    # cofactor expansion up to 3x3, LU beyond
    n = M.shape[0]
    if n == 1:
        return float(M[0, 0])
    if n == 2:
        return float(M[0, 0] * M[1, 1] - M[0, 1] * M[1, 0])
    if n == 3:
        return float(
            M[0, 0] * (M[1, 1] * M[2, 2] - M[1, 2] * M[2, 1])
            - M[0, 1] * (M[1, 0] * M[2, 2] - M[1, 2] * M[2, 0])
            + M[0, 2] * (M[1, 0] * M[2, 1] - M[1, 1] * M[2, 0])
        )
    return float(np.linalg.det(M))


def v0(problem: AmbientProblem, x) -> np.ndarray:
    """The standard control vector field at x.

    Defined everywhere; vanishes wherever the constraint gradients become
    dependent. For k=1 reduces to ||grad F||^2 grad G - <grad F, grad G> grad F.
    """
    x = np.asarray(x, dtype=float)
    gF = [f.grad(x) for f in problem.constraints]
    gG = problem.objective.grad(x)
    k = len(gF)
    out = _det(gramian(gF, gF)) * gG
    for i in range(1, k + 1):
        cols = gF[: i - 1] + gF[i:] + [gG]
        out = out + ((-1.0) ** (i + k + 1)) * _det(gramian(gF, cols)) * gF[i - 1]
    return out


def dissipation_rate(problem: AmbientProblem, x) -> float:
    """det of the (k+1)x(k+1) Gramian of (grad F_1..grad F_k, grad G).

    Equals <grad G(x), v0(x)>; nonnegative by the Gram inequality, zero
    exactly at the constrained critical points.
    """
    x = np.asarray(x, dtype=float)
    g = [f.grad(x) for f in problem.constraints] + [problem.objective.grad(x)]
    return _det(gramian(g, g))


def apply_T_sphere(q, omega_bar):
    """Fast path for S3: i_w T(q) = 4(<q,q> w - <q,w> q)."""
    q = np.asarray(q, dtype=float)
    w = np.asarray(omega_bar, dtype=float)
    return 4.0 * (np.dot(q, q) * w - np.dot(q, w) * q)


def T_matrix_sphere(q):
    """The 4x4 matrix of the tensor T at q: 4(<q,q> I - q q^T).

    Symmetric, annihilates q (T(q) q = 0 for any q, unit or not), and has
    rank 3 everywhere away from the origin.
    """
    q = np.asarray(q, dtype=float)
    return 4.0 * (np.dot(q, q) * np.eye(4) - np.outer(q, q))


def unit_sphere_problem(objective: ScalarField, dim: int = 4) -> AmbientProblem:
    """AmbientProblem for the unit sphere F(q) = ||q||^2 = 1 in R^dim."""
    F = ScalarField(value=lambda x: float(np.dot(x, x)), grad=lambda x: 2.0 * np.asarray(x, dtype=float))
    return AmbientProblem(dimension=dim, constraints=(F,), objective=objective, level=(1.0,))


def fd_gradient(f: Callable[[np.ndarray], float], x, h: float = 1e-6) -> np.ndarray:
    """Central-difference gradient with relative step (testing helper only)."""
    x = np.asarray(x, dtype=float)
    g = np.empty_like(x)
    for i in range(x.size):
        step = h * max(1.0, abs(x[i]))
        xp = x.copy()
        xm = x.copy()
        xp[i] += step
        xm[i] -= step
        g[i] = (f(xp) - f(xm)) / (2.0 * step)
    return g

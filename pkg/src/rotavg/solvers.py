"""Critical-point finding: dissipative flow, multistart, classification."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional

import numpy as np

from .costs import CostModel, DomainError, NonDifferentiable
from .geometry import canonicalize_sign, covering_map, normalize

__all__ = [
    "FlowConfig",
    "CriticalPoint",
    "MaxIters",
    "DomainBreach",
    "AmbiguousMean",
    "flow_descend",
    "multistart",
    "classify",
    "eigen_oracle_l2",
    "random_unit_quaternion",
]


class MaxIters(RuntimeError):
    """Flow did not reach the gradient tolerance within the iteration budget."""


class DomainBreach(RuntimeError):
    """An accepted iterate entered a guard buffer of the model's excluded sets."""


class AmbiguousMean(RuntimeError):
    """Top two eigenvalues nearly tie: the chordal mean is not unique."""


@dataclass(frozen=True)
class FlowConfig:
    initial_step: float = 1e-2
    step_shrink: float = 0.5
    grad_tol: float = 1e-12  # on ||control_field||
    max_iters: int = 200000
    renormalize_every: int = 1

    def __post_init__(self):
        ok = (
            self.initial_step > 0
            and 0.0 < self.step_shrink < 1.0
            and self.grad_tol > 0
            and self.max_iters > 0
            and self.renormalize_every > 0
        )
        if not ok:
            raise ValueError("invalid flow configuration")


@dataclass
class CriticalPoint:
    q: np.ndarray
    R: np.ndarray
    cost: float
    control_norm: float
    rotation_residual_norm: float
    classification: Optional[str] = None
    degenerate: bool = False


def random_unit_quaternion(rng):
    """Uniform point on S3 (normalized 4-variate Gaussian)."""
    return normalize(rng.standard_normal(4))


def flow_descend(model: CostModel, q0, cfg: Optional[FlowConfig] = None) -> CriticalPoint:
    """Follow -control_field from q0 to a critical point of the lifted cost.

    Projected explicit Euler with a backtracking line search on the cost.
    Once the cost change falls below a few ulps (values can no longer
    certify descent) a step is accepted only if it strictly shrinks
    ||control_field||, which carries the iterate down to the gradient noise
    floor. Stops when ||control_field|| < cfg.grad_tol.

    Raises MaxIters if the budget runs out (or no acceptable step exists)
    and DomainBreach if an accepted iterate lands inside a guard buffer.
    """
    cfg = cfg or FlowConfig()
    q = normalize(np.asarray(q0, dtype=float))
    if not model.admissible(q):
        raise DomainBreach("start point violates the model's domain guard")
    cost = model.value(q)
    h = cfg.initial_step
    for it in range(cfg.max_iters):
        v = model.control_field(q)
        nv = float(np.linalg.norm(v))
        if nv < cfg.grad_tol:
            return _converged(model, q, cost, nv)
        h = min(2.0 * h, 1e6)  # retry a bit above the last accepted step
        # value evaluations carry cancellation noise well above one ulp, so
        # both branches must judge decreases against this larger scale
        noise = 1e-13 * (1.0 + abs(cost))
        accepted = False
        while h * nv > 1e-18:
            trial = q - h * v
            if (it + 1) % cfg.renormalize_every == 0:
                trial = normalize(trial)
            try:
                c_trial = model.value(trial)
            except (DomainError, NonDifferentiable):
                h *= cfg.step_shrink
                continue
            dc = c_trial - cost
            # sufficient decrease: <grad, v> = |v|^2 / 4 at unit q, so a
            # tenth of the first-order prediction must materialize — bare
            # descent would admit wildly overshooting steps near the floor
            if dc <= -max(0.025 * h * nv * nv, noise):
                accepted = True
                break
            if dc <= noise and float(np.linalg.norm(model.control_field(trial))) <= 0.999 * nv:
                accepted = True
                break
            h *= cfg.step_shrink
        if not accepted:
            raise MaxIters(f"line search stalled at iteration {it} (|v0| = {nv:.3e})")
        q, cost = trial, c_trial
        if not model.admissible(q):
            raise DomainBreach("iterate entered a guard buffer of an excluded set")
    raise MaxIters(f"no convergence in {cfg.max_iters} iterations")


def _converged(model, q, cost, nv):
    q = canonicalize_sign(normalize(q))
    R = covering_map(q)
    rr = float(np.linalg.norm(model.rotation_residual(R)))
    return CriticalPoint(q=q, R=R, cost=float(model.value(q)), control_norm=nv, rotation_residual_norm=rr)


def multistart(model: CostModel, n_starts: int, seed: int, cfg: Optional[FlowConfig] = None):
    """Run flow_descend from n uniform random starts; dedup and sort by cost.

    Starts violating the model's domain guard are resampled. Limits are
    identified under q ~ -q by comparing rotation matrices (Frobenius
    tolerance 1e-8); each class keeps its best-converged representative.
    Per-start failures (MaxIters, DomainBreach) are tolerated; the returned
    list holds the surviving classes, classified, sorted by cost.
    """
    if n_starts < 1:
        raise ValueError("n_starts must be >= 1")
    rng = np.random.default_rng(seed)
    limits = []
    for _ in range(n_starts):
        q0 = random_unit_quaternion(rng)
        for _ in range(1000):
            if model.admissible(q0):
                break
            q0 = random_unit_quaternion(rng)
        try:
            limits.append(flow_descend(model, q0, cfg))
        except (MaxIters, DomainBreach):
            continue
    classes: list[CriticalPoint] = []
    for pt in limits:
        for i, kept in enumerate(classes):
            if np.linalg.norm(pt.R - kept.R) < 1e-8:
                if pt.control_norm < kept.control_norm:
                    classes[i] = pt
                break
        else:
            classes.append(pt)
    classes.sort(key=lambda p: p.cost)
    for pt in classes:
        pt.classification, pt.degenerate = classify(model, pt)
    return classes


def classify(model: CostModel, point: CriticalPoint, h: float = 1e-5):
    """Label a converged point Min/Max/Saddle/Degenerate/Boundary.

    Central-difference 3x3 Hessian of the lifted cost in an orthonormal
    tangent basis at q. Eigenvalues below 1e-6 of the dominant one are
    treated as zero (critical circles make one soft direction routine);
    the second return value flags that degeneracy. Points too close to an
    excluded set for the stencil are labeled Boundary.
    """
    q = np.asarray(point.q, dtype=float)
    g = model.guard(q)
    if model.kind in ("Geodesic", "TraceSqrt") and g.min_abs_dot < 2.0 * h:
        return "Boundary", False
    if model.kind == "LpChordal" and model.p < 2.0 and g.min_line_dist < 2.0 * h:
        return "Boundary", False
    _, _, Vt = np.linalg.svd(q[None, :])
    B = Vt[1:]  # rows: orthonormal basis of the tangent space at q

    def f(t):
        return model.value(normalize(q + t @ B))

    H = np.empty((3, 3))
    f0 = f(np.zeros(3))
    for i in range(3):
        ei = np.zeros(3)
        ei[i] = h
        H[i, i] = (f(ei) - 2.0 * f0 + f(-ei)) / h**2
    for i in range(3):
        for j in range(i + 1, 3):
            ei = np.zeros(3)
            ej = np.zeros(3)
            ei[i] = h
            ej[j] = h
            H[i, j] = H[j, i] = (f(ei + ej) - f(ei - ej) - f(-ei + ej) + f(-ei - ej)) / (4.0 * h**2)
    lam = np.linalg.eigvalsh(H)
    scale = float(np.max(np.abs(lam)))
    if scale == 0.0:
        return "Degenerate", True
    signif = lam[np.abs(lam) >= 1e-6 * scale]
    degenerate = signif.size < 3
    if signif.size == 0:
        return "Degenerate", True
    if np.all(signif > 0):
        return "Min", degenerate
    if np.all(signif < 0):
        return "Max", degenerate
    return "Saddle", degenerate


def eigen_oracle_l2(samples):
    """Independent minimizer of the chordal cost: dominant eigenvector of
    M = sum_i q_i q_i^T.

    Maximizes sum <q,q_i>^2 over S3. The eigenvector is found by power
    iteration on the repeatedly squared, rescaled M (gap-independent),
    polished by plain power steps to a Rayleigh residual <= 1e-14 * lam1.
    Raises AmbiguousMean when the top two eigenvalues are closer than 1e-10.
    """
    Q = samples.quaternions
    M = Q.T @ Q
    lam = np.linalg.eigvalsh(M)
    if lam[-1] - lam[-2] < 1e-10:
        raise AmbiguousMean("top two eigenvalues within 1e-10: mean not unique")
    B = M / lam[-1]
    for _ in range(60):
        B = B @ B
        B = B / np.max(np.abs(B))
    v = normalize(B[:, int(np.argmax(np.linalg.norm(B, axis=0)))])
    for _ in range(200):
        w = normalize(M @ v)
        if np.dot(w, v) < 0:
            w = -w
        done = np.linalg.norm(w - v) < 1e-15
        v = w
        if done:
            break
    ray = float(v @ M @ v)
    if np.linalg.norm(M @ v - ray * v) > 1e-14 * max(ray, 1.0):
        raise AmbiguousMean("power iteration failed to separate the top eigenspace")
    return canonicalize_sign(v)

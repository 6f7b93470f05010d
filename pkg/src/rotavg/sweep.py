"""Parametric study of three x-axis sample rotations.

The samples are rotations by pi, pi/2 and alpha about the x-axis. On the
axis the critical-point system collapses to a polynomial in the second
quaternion component; this module builds those polynomials, isolates their
positive roots, labels the resulting critical families, traces the
minimizer angle over an alpha grid, and round-trips everything through CSV.
"""

from __future__ import annotations

import csv
import math
from dataclasses import dataclass, field
from typing import Optional

import numpy as np
import numpy.polynomial.polynomial as npoly

from .costs import CostModel
from .geometry import SampleSet, canonicalize_sign, covering_map, normalize

__all__ = [
    "EvenPolynomial",
    "CriticalRep",
    "SweepRecord",
    "build_samples",
    "q2_coeffs",
    "q4_coeffs",
    "positive_roots",
    "critical_sets",
    "theta_min_curve",
    "root_count_transitions",
    "tie_locations",
    "polynomial_discrepancies",
    "emit_csv",
    "parse_csv",
    "CSV_HEADER",
]

RESIDUAL_TOL = 1e-8  # a candidate is critical when its pushforward residual beats this
TIE_TOL = 1e-10  # costs closer than this count as one minimum

CSV_HEADER = ("alpha", "p", "set_label", "x_root", "q0", "q1", "cost", "theta", "is_min")

# label pairs (plus-branch, minus-branch) by root rank among n ascending roots
_PAIR_NAMES = {
    1: (("red", "blue"),),
    2: (("green", "pink"), ("red", "blue")),
    3: (("green", "pink"), ("yellow", "violet"), ("red", "blue")),
    4: (("green", "pink"), ("yellow", "violet"), ("maroon", "gold"), ("red", "blue")),
}

_BLACK_Q = (0.0, 0.0, 1.0, 0.0)


def build_samples(alpha: float) -> SampleSet:
    """The three sample rotations: angles pi, pi/2 and alpha about the x-axis."""
    if not -math.pi <= alpha <= math.pi:
        raise ValueError("alpha must lie in [-pi, pi]")
    h = 0.5 * alpha
    s2 = math.sqrt(2.0) / 2.0
    quats = np.array(
        [
            [0.0, 1.0, 0.0, 0.0],
            [s2, s2, 0.0, 0.0],
            [math.cos(h), math.sin(h), 0.0, 0.0],
        ]
    )
    return SampleSet.from_quaternions(quats)


@dataclass(frozen=True)
class EvenPolynomial:
    """Real polynomial with vanishing odd coefficients, ascending order."""

    coeffs: tuple

    def __post_init__(self):
        c = tuple(float(x) for x in self.coeffs)
        object.__setattr__(self, "coeffs", c)
        if any(x != 0.0 for x in c[1::2]):
            raise ValueError("odd-degree coefficients must vanish")

    def evaluate(self, z):
        return npoly.polyval(z, np.asarray(self.coeffs))

    def in_w(self):
        """Ascending coefficients of the same polynomial in W = Z^2."""
        return np.asarray(self.coeffs)[0::2].copy()


def q2_coeffs(alpha: float) -> EvenPolynomial:
    """Quartic whose positive roots are the x-axis critical coordinates, p = 2."""
    s = math.sin(0.5 * alpha)
    c = math.cos(0.5 * alpha)
    big_a = 128.0 * s**4 - 32.0 * s**2 + 4.0
    a0 = -16.0 * s**6 + 16.0 * s**5 * c + 28.0 * s**4 - 8.0 * s**2 + 1.0
    return EvenPolynomial((a0, 0.0, -big_a, 0.0, big_a))


def q4_coeffs(alpha: float) -> EvenPolynomial:
    """Degree-8 analogue of q2_coeffs for the quartic-chordal cost, p = 4."""
    s = math.sin(0.5 * alpha)
    c = math.cos(0.5 * alpha)
    a6 = -128.0 * s**4 + 96.0 * s**2 - 128.0 * s**3 * c + 64.0 * s * c - 32.0
    a4 = 192.0 * s**4 - 128.0 * s**2 + 192.0 * s**3 * c - 80.0 * s * c + 24.0
    a2 = 32.0 * s**6 - 112.0 * s**4 + 48.0 * s**2 - 80.0 * s**3 * c + 24.0 * s * c - 8.0
    a0 = -16.0 * s**8 + 16.0 * s**6 + 8.0 * s**3 * c + 1.0
    return EvenPolynomial((a0, 0.0, a2, 0.0, a4, 0.0, a6, 0.0, 16.0))


def _bisect_root(c, lo, hi, flo):
    for _ in range(200):
        mid = 0.5 * (lo + hi)
        if hi - lo < 1e-13:
            break
        fm = float(npoly.polyval(mid, c))
        if fm == 0.0:
            break
        if (fm < 0.0) == (flo < 0.0):
            lo, flo = mid, fm
        else:
            hi = mid
    # Newton polish: simple roots sharpen to full precision, which matters
    # for roots many orders smaller than the bisection width floor
    x = 0.5 * (lo + hi)
    dc = npoly.polyder(c)
    for _ in range(3):
        d = float(npoly.polyval(x, dc))
        if d == 0.0:
            break
        x2 = x - float(npoly.polyval(x, c)) / d
        if not (lo - 1e-9 <= x2 <= hi + 1e-9):
            break
        x = x2
    return x


def _real_roots_on(c, lo, hi, ztol):
    # roots of P' partition [lo, hi] into monotone pieces; recurse on the
    # derivative, then bisect every sign change and keep near-zero nodes
    # (this catches multiple roots that plain companion-matrix solves smear)
    c = np.trim_zeros(np.asarray(c, dtype=float), "b")
    if c.size <= 1:
        return []
    if c.size == 2:
        r = -c[0] / c[1]
        return [r] if lo - 1e-12 <= r <= hi + 1e-12 else []
    nodes = [lo] + sorted(_real_roots_on(npoly.polyder(c), lo, hi, ztol)) + [hi]
    vals = [float(npoly.polyval(t, c)) for t in nodes]
    n = len(nodes)
    cross = [vals[i] * vals[i + 1] < 0.0 for i in range(n - 1)]
    roots = []
    for i in range(n):
        # a near-zero node is a (multiple) root only when no strict sign
        # change flanks it; otherwise the bisected crossings already cover it
        flanked = (i > 0 and cross[i - 1]) or (i < n - 1 and cross[i])
        if abs(vals[i]) <= ztol and not flanked:
            roots.append(nodes[i])
    for i in range(n - 1):
        if cross[i]:
            roots.append(_bisect_root(c, nodes[i], nodes[i + 1], vals[i]))
    out = []
    for r in sorted(roots):
        if not out or r - out[-1] > 1e-10:
            out.append(r)
    return out


def positive_roots(poly: EvenPolynomial):
    """All roots of an even polynomial in (0, 1], ascending, multiplicity-free.

    Works in W = Z^2 (halving the degree), isolates by a derivative chain
    and refines by bisection; every returned root r satisfies
    |poly(r)| <~ 1e-9 * max|coeff|.
    """
    w = poly.in_w()
    if not np.any(w != 0.0):
        raise ValueError("polynomial is identically zero")
    ztol = 1e-9 * max(1.0, float(np.max(np.abs(w))))
    return [float(math.sqrt(r)) for r in _real_roots_on(w, 0.0, 1.0, ztol) if r > 0.0]


@dataclass(frozen=True)
class CriticalRep:
    """One labeled critical family, pinned by its representative quaternion."""

    label: str
    x_root: Optional[float]  # None for the off-axis (black) set
    q: tuple  # 4 floats
    cost: float
    residual_norm: float = field(compare=False)  # not serialized; recomputable


def _poly_for(p):
    if int(round(p)) == 2:
        return q2_coeffs
    if int(round(p)) == 4:
        return q4_coeffs
    raise ValueError("closed-form polynomials exist only for p in {2, 4}")


def _model_for(samples, p):
    return CostModel.lp_chordal(samples, float(p))


def critical_sets(alpha: float, p: float):
    """Labeled critical representatives at one alpha.

    Always emits the out-of-pencil representative (0,0,1,0) ("black"), then,
    for each positive root x of the matching polynomial, the branches
    (+-sqrt(1-x^2), x, 0, 0) that actually satisfy the critical-point
    system (pushforward residual below 1e-8). Plus-branch labels:
    green/yellow/maroon/red by ascending root; minus-branch partners:
    pink/violet/gold/blue.
    """
    samples = build_samples(alpha)
    model = _model_for(samples, p)
    roots = positive_roots(_poly_for(p)(alpha))
    out = []
    qb = np.asarray(_BLACK_Q)
    out.append(
        CriticalRep(
            label="black",
            x_root=None,
            q=_BLACK_Q,
            cost=float(model.value(qb)),
            residual_norm=float(np.linalg.norm(model.pushforward_residual(qb))),
        )
    )
    names = _PAIR_NAMES.get(len(roots))
    for i, x in enumerate(roots):
        pair = names[i] if names else (f"x{i}+", f"x{i}-")
        y = math.sqrt(max(1.0 - x * x, 0.0))
        signs = (1.0,) if y < 1e-12 else (1.0, -1.0)
        for sgn, label in zip(signs, pair):
            q = np.array([sgn * y, x, 0.0, 0.0])
            res = float(np.linalg.norm(model.pushforward_residual(q)))
            if res < RESIDUAL_TOL:
                out.append(
                    CriticalRep(
                        label=label,
                        x_root=float(x),
                        q=tuple(float(v) for v in q),
                        cost=float(model.value(q)),
                        residual_norm=res,
                    )
                )
    return out


def _theta_of(q4):
    q = canonicalize_sign(normalize(np.asarray(q4, dtype=float)))
    return 2.0 * math.atan2(q[1], q[0])


def _winners(sets, tol=TIE_TOL):
    """Deduplicate reps by rotation, then collect every cost-minimal class."""
    classes = []
    for rep in sets:
        R = covering_map(normalize(np.asarray(rep.q)))
        for _, Rk in classes:
            if np.linalg.norm(R - Rk) < 1e-8:
                break
        else:
            classes.append((rep, R))
    best = min(rep.cost for rep, _ in classes)
    return [rep for rep, _ in classes if rep.cost <= best + tol]


@dataclass(frozen=True)
class SweepRecord:
    alpha: float
    p: float
    roots: tuple  # ascending positive roots
    sets: tuple  # CriticalRep, emission order
    theta_min: tuple  # one angle per tied minimizer class
    min_set_label: tuple  # matching labels


def _record_at(alpha, p):
    sets = critical_sets(alpha, p)
    win = _winners(sets)
    return SweepRecord(
        alpha=float(alpha),
        p=float(p),
        roots=tuple(sorted({r.x_root for r in sets if r.x_root is not None})),
        sets=tuple(sets),
        theta_min=tuple(_theta_of(rep.q) for rep in win),
        min_set_label=tuple(rep.label for rep in win),
    )


def theta_min_curve(p: float, alpha_grid):
    """One SweepRecord per grid point; ties within 1e-10 are multi-valued."""
    return [_record_at(a, p) for a in np.asarray(alpha_grid, dtype=float)]


def _root_count(p, alpha):
    return len(positive_roots(_poly_for(p)(alpha)))


def root_count_transitions(p: float, alpha_lo=-math.pi, alpha_hi=math.pi, step=0.01):
    """Alphas where the positive-root count changes, bisected to ~1e-10.

    Returns (alpha, count_before, count_after) triples in ascending order.
    """
    grid = np.arange(alpha_lo, alpha_hi + 0.5 * step, step)
    out = []
    prev = _root_count(p, grid[0])
    for a0, a1 in zip(grid[:-1], grid[1:]):
        cur = _root_count(p, a1)
        if cur != prev:
            lo, hi = float(a0), float(a1)
            while hi - lo > 1e-10:
                mid = 0.5 * (lo + hi)
                if _root_count(p, mid) == prev:
                    lo = mid
                else:
                    hi = mid
            out.append((0.5 * (lo + hi), prev, cur))
        prev = cur
    return out


def tie_locations(p: float, alpha_lo=-math.pi, alpha_hi=math.pi, step=0.01):
    """Alphas where distinct minimizer classes exactly exchange the lead.

    Scans the grid for changes of the leading label, bisects each change,
    then keeps only genuine ties: two winner classes whose rotations differ
    by more than 1e-6 (a mere relabeling of one continuing rotation, as when
    the x_max branch crosses x = 1, is discarded).
    """
    grid = np.arange(alpha_lo, alpha_hi + 0.5 * step, step)

    def lead(a):
        return _record_at(a, p).min_set_label[0]

    out = []
    prev = lead(grid[0])
    for a0, a1 in zip(grid[:-1], grid[1:]):
        cur = lead(a1)
        if cur != prev:
            # crossing costs move ~1e2 per unit alpha, so the bracket must be
            # far narrower than TIE_TOL before both classes can tie
            lo, hi = float(a0), float(a1)
            while hi - lo > 1e-13:
                mid = 0.5 * (lo + hi)
                if lead(mid) == prev:
                    lo = mid
                else:
                    hi = mid
            a_star = 0.5 * (lo + hi)
            win = _winners(critical_sets(a_star, p), tol=1e-9)
            rots = [covering_map(normalize(np.asarray(r.q))) for r in win]
            labels = {r.label for r in win}
            # the tie must be between the classes that swapped the lead;
            # anything else is root-finder noise at a degenerate pinch
            genuine = (
                len(win) >= 2
                and {prev, cur} <= labels
                and any(
                    np.linalg.norm(rots[i] - rots[j]) > 1e-6
                    for i in range(len(win))
                    for j in range(i + 1, len(win))
                )
            )
            if genuine:
                out.append((a_star, tuple(sorted(labels))))
        prev = cur
    return out


def polynomial_discrepancies(p: float, alpha_grid):
    """Roots whose quaternion candidates fail the critical-point system.

    For each positive root x at each alpha, checks both branches
    (+-sqrt(1-x^2), x, 0, 0); if neither drives the pushforward residual
    below 1e-8 the triple (alpha, x, best residual) is reported. An empty
    list certifies polynomial/system consistency over the grid.
    """
    bad = []
    for a in np.asarray(alpha_grid, dtype=float):
        samples = build_samples(a)
        model = _model_for(samples, p)
        for x in positive_roots(_poly_for(p)(a)):
            y = math.sqrt(max(1.0 - x * x, 0.0))
            best = min(
                float(np.linalg.norm(model.pushforward_residual(np.array([s * y, x, 0.0, 0.0]))))
                for s in (1.0, -1.0)
            )
            if best >= RESIDUAL_TOL:
                bad.append((float(a), float(x), best))
    return bad


def _fmt(x):
    return "%.17g" % float(x)


def emit_csv(records, path):
    """Write records as CSV: one row per emitted set, then one row per tied
    minimizer (set_label "min:<label>"). Floats carry 17 significant digits,
    enough for an exact round trip; inapplicable cells hold nan.
    """
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(CSV_HEADER)
        for rec in records:
            winners = set(rec.min_set_label)
            for rep in rec.sets:
                theta = math.nan if rep.label == "black" else _theta_of(rep.q)
                w.writerow(
                    [
                        _fmt(rec.alpha),
                        _fmt(rec.p),
                        rep.label,
                        _fmt(math.nan if rep.x_root is None else rep.x_root),
                        _fmt(rep.q[0]),
                        _fmt(rep.q[1]),
                        _fmt(rep.cost),
                        _fmt(theta),
                        "1" if rep.label in winners else "0",
                    ]
                )
            for label, theta in zip(rec.min_set_label, rec.theta_min):
                rep = next(r for r in rec.sets if r.label == label)
                w.writerow(
                    [
                        _fmt(rec.alpha),
                        _fmt(rec.p),
                        "min:" + label,
                        _fmt(math.nan if rep.x_root is None else rep.x_root),
                        _fmt(rep.q[0]),
                        _fmt(rep.q[1]),
                        _fmt(rep.cost),
                        _fmt(theta),
                        "1",
                    ]
                )


def parse_csv(path):
    """Rebuild SweepRecords from emit_csv output (exact floats)."""
    groups: dict = {}
    order = []
    with open(path, newline="") as fh:
        rd = csv.reader(fh)
        header = next(rd, None)
        if header is None or tuple(header) != CSV_HEADER:
            raise ValueError("unrecognized CSV header")
        for row in rd:
            alpha, p = float(row[0]), float(row[1])
            key = (row[0], row[1])
            if key not in groups:
                groups[key] = {"alpha": alpha, "p": p, "sets": [], "mins": []}
                order.append(key)
            g = groups[key]
            label = row[2]
            x_root = float(row[3])
            q0, q1 = float(row[4]), float(row[5])
            cost = float(row[6])
            theta = float(row[7])
            if label.startswith("min:"):
                g["mins"].append((label[4:], theta))
            elif label == "black":
                g["sets"].append(CriticalRep("black", None, _BLACK_Q, cost, 0.0))
            else:
                g["sets"].append(CriticalRep(label, x_root, (q0, q1, 0.0, 0.0), cost, 0.0))
    records = []
    for key in order:
        g = groups[key]
        records.append(
            SweepRecord(
                alpha=g["alpha"],
                p=g["p"],
                roots=tuple(sorted({r.x_root for r in g["sets"] if r.x_root is not None})),
                sets=tuple(g["sets"]),
                theta_min=tuple(t for _, t in g["mins"]),
                min_set_label=tuple(l for l, _ in g["mins"]),
            )
        )
    return records

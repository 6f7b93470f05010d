import math

import numpy as np
import pytest

from rotavg.geometry import canonicalize_sign, covering_map
from rotavg.sweep import (
    CSV_HEADER,
    EvenPolynomial,
    build_samples,
    critical_sets,
    emit_csv,
    parse_csv,
    polynomial_discrepancies,
    positive_roots,
    q2_coeffs,
    q4_coeffs,
    root_count_transitions,
    theta_min_curve,
    tie_locations,
)


def test_build_samples():
    s = build_samples(0.5)
    assert len(s) == 3
    assert np.allclose(s.quaternions[0], [0, 1, 0, 0])
    r2 = math.sqrt(2.0) / 2.0
    assert np.allclose(s.quaternions[1], [r2, r2, 0, 0])
    assert np.allclose(s.quaternions[2], [math.cos(0.25), math.sin(0.25), 0, 0])
    with pytest.raises(ValueError):
        build_samples(3.2)


def test_even_polynomial():
    p = EvenPolynomial((1.0, 0.0, -2.0, 0.0, 1.0))  # (Z^2 - 1)^2
    assert p.evaluate(0.0) == 1.0
    assert p.evaluate(1.0) == 0.0
    assert abs(p.evaluate(0.5) - 0.5625) < 1e-15
    with pytest.raises(ValueError):
        EvenPolynomial((0.0, 1.0, 0.0))  # odd coefficient


def test_positive_roots_factored():
    # Z^4 - 0.58 Z^2 + 0.0441 = (Z^2 - 0.09)(Z^2 - 0.49)
    roots = positive_roots(EvenPolynomial((0.0441, 0.0, -0.58, 0.0, 1.0)))
    assert np.allclose(roots, [0.3, 0.7], atol=1e-12)


def test_positive_roots_quadruple():
    # at alpha = 0 the quartic degenerates to (2W - 1)^4: one positive root
    p = q4_coeffs(0.0)
    assert p.coeffs == (1.0, 0.0, -8.0, 0.0, 24.0, 0.0, -32.0, 0.0, 16.0)
    roots = positive_roots(p)
    assert len(roots) == 1
    assert abs(roots[0] - math.sqrt(0.5)) < 1e-12


def test_positive_roots_tiny():
    # just past alpha = -pi/2 one root sits at ~1.6e-7; it must not be lost
    roots = positive_roots(q2_coeffs(-1.571593))
    assert len(roots) == 2
    assert roots[0] < 1e-5
    p = q2_coeffs(-1.571593)
    for r in roots:
        assert abs(p.evaluate(r)) < 1e-10


def test_q2_coeffs_quarter():
    # at alpha = -pi/2: A = 20, constant term 0
    c = q2_coeffs(-math.pi / 2).coeffs
    assert len(c) == 5
    assert abs(c[0]) < 1e-13 and c[1] == 0.0 and c[3] == 0.0
    assert abs(c[2] + 20.0) < 1e-12 and abs(c[4] - 20.0) < 1e-12


def test_roots_satisfy_polynomials():
    rng = np.random.default_rng(30)
    for _ in range(25):
        a = float(rng.uniform(-math.pi, math.pi))
        for poly in (q2_coeffs(a), q4_coeffs(a)):
            for r in positive_roots(poly):
                assert abs(poly.evaluate(r)) < 1e-9


def test_critical_sets_black():
    for a in (-math.pi, -1.2, 0.0, 0.7, math.pi):
        for p in (2.0, 4.0):
            sets = critical_sets(a, p)
            black = next(r for r in sets if r.label == "black")
            assert black.x_root is None
            assert black.q == (0.0, 0.0, 1.0, 0.0)
            assert black.residual_norm < 1e-12
            if p == 2.0:
                assert black.cost == 24.0


def test_critical_sets_at_minus_pi():
    sets = {r.label: r for r in critical_sets(-math.pi, 2.0)}
    assert set(sets) == {"black", "pink", "red"}
    assert abs(sets["pink"].cost - 20.94427190999916) < 1e-12
    assert abs(sets["red"].cost - 3.0557280900008417) < 1e-12
    assert abs(sets["red"].x_root - 0.9732489894677302) < 1e-12
    for rep in sets.values():
        assert rep.residual_norm < 1e-8


def test_theta_min_curve_records():
    grid = [-3.0, -1.0, 0.5]
    recs = theta_min_curve(2.0, grid)
    assert [r.alpha for r in recs] == grid
    for r in recs:
        assert r.p == 2.0
        assert len(r.theta_min) == 1  # the quadratic cost never ties
        assert len(r.roots) == 2
        labels = {s.label for s in r.sets}
        assert "black" in labels and r.min_set_label[0] in labels


def test_root_count_transitions():
    assert root_count_transitions(2.0) == []
    trans = root_count_transitions(4.0)
    assert len(trans) == 2
    (a1, b1, c1), (a2, b2, c2) = trans
    assert (b1, c1) == (2, 4) and (b2, c2) == (4, 2)
    assert abs(a1 - (-1.0231549443402819)) < 1e-8
    assert abs(a2 - (-0.5476414366164841)) < 1e-8


def test_tie_locations():
    assert tie_locations(2.0) == []
    ties = tie_locations(4.0)
    assert len(ties) == 1
    a, labels = ties[0]
    assert labels == ("blue", "yellow")
    assert abs(a + math.pi / 4) < 1e-9


def test_quartic_tie_at_quarter():
    # the two tied global minimizers at alpha = -pi/4 and their exact costs
    sets = critical_sets(-math.pi / 4, 4.0)
    by_label = {r.label: r for r in sets}
    y, b = by_label["yellow"], by_label["blue"]
    assert y.cost == b.cost  # the tie is exact in floating point
    qy = canonicalize_sign(np.asarray(y.q))
    qb = canonicalize_sign(np.asarray(b.q))
    assert np.abs(qy - [0.82179713, 0.56978021, 0.0, 0.0]).max() < 1e-8
    assert np.abs(qb - [0.17820287, -0.98399377, 0.0, 0.0]).max() < 1e-8
    # distinct rotations, not a relabeling
    assert np.abs(covering_map(qy) - covering_map(qb)).max() > 0.1


def test_polynomial_discrepancies_empty():
    grid = np.linspace(-math.pi, math.pi, 25)
    assert polynomial_discrepancies(2.0, grid) == []
    assert polynomial_discrepancies(4.0, grid) == []


def test_csv_round_trip(tmp_path):
    grid = [-3.0, -0.78, 1.4]
    for p in (2.0, 4.0):
        recs = theta_min_curve(p, grid)
        path = tmp_path / f"sweep{int(p)}.csv"
        emit_csv(recs, path)
        with open(path) as fh:
            assert fh.readline().strip() == ",".join(CSV_HEADER)
        back = parse_csv(path)
        assert back == recs


def test_csv_min_rows(tmp_path):
    recs = theta_min_curve(4.0, [-0.78])
    path = tmp_path / "one.csv"
    emit_csv(recs, path)
    rows = [line.split(",") for line in open(path).read().splitlines()[1:]]
    min_rows = [r for r in rows if r[2].startswith("min:")]
    assert [r[2][4:] for r in min_rows] == list(recs[0].min_set_label)
    flagged = {r[2] for r in rows if r[8] == "1" and not r[2].startswith("min:")}
    assert flagged == set(recs[0].min_set_label)

"""
Rotations, unit quaternions, and three distances
================================================

Every rotation has exactly two unit-quaternion lifts, q and -q.  This
tour converts back and forth, shows that the sign never matters, and
compares the three distances the library exposes.
"""

import numpy as np

from rotavg.geometry import (
    covering_map,
    dist_d1,
    dist_d2,
    dist_d3,
    quat_from_rotation,
    rotation_angle,
)

# a quarter turn about z, written as a quaternion (scalar first)
t = np.pi / 2
q = np.array([np.cos(t / 2), 0.0, 0.0, np.sin(t / 2)])
R = covering_map(q)
print("quarter turn about z:")
print(np.round(R, 12))

# the two lifts of R are q and -q; the covering map cannot tell them apart
print("covering_map(q) == covering_map(-q):", np.array_equal(R, covering_map(-q)))

# lifting back lands on one of the two (sign-canonical) preimages
q_back = quat_from_rotation(R)
print("recovered lift:", np.round(q_back, 12))
print("angle from identity:", rotation_angle(np.eye(3), R), "rad")

# three ways to measure how far apart two rotations are:
#   d1  chordal: Frobenius norm of R1 - R2
#   d2  geodesic: sqrt(2) times the relative rotation angle
#   d3  1 - cos(half the relative angle)
print()
print("angle      d1          d2          d3")
for angle in (0.1, 0.5, 1.0, 2.0, np.pi - 1e-3):
    c, s = np.cos(angle / 2), np.sin(angle / 2)
    S = covering_map(np.array([c, s, 0.0, 0.0]))
    I = np.eye(3)
    print(f"{angle:5.3f}  {dist_d1(I, S):10.6f}  {dist_d2(I, S):10.6f}  {dist_d3(I, S):10.6f}")

# d2 is built from the relative angle, which is multivalued at a half
# turn -- the library refuses to guess there
half_turn = covering_map(np.array([0.0, 0.0, 0.0, 1.0]))
try:
    dist_d2(np.eye(3), half_turn)
except ValueError as e:
    print("\nd2 at a half turn:", e)

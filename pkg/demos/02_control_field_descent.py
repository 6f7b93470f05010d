"""
The control vector field and dissipative descent
================================================

The averaging costs live on the unit sphere in R^4.  Instead of
projecting gradients by hand, the library builds a control field from
Gram determinants: it is automatically tangent to the sphere, and the
cost dissipates along it at a provably nonnegative rate.  Following the
field downhill therefore walks straight into a critical point.
"""

import numpy as np

from rotavg.control import dissipation_rate, fd_gradient, unit_sphere_problem, v0
from rotavg.costs import CostModel
from rotavg.geometry import SampleSet
from rotavg.solvers import flow_descend, random_unit_quaternion

rng = np.random.default_rng(42)

# three noisy copies of one rotation
base = rng.normal(size=4)
base /= np.linalg.norm(base)
samples = SampleSet(base[None] + 0.2 * rng.normal(size=(3, 4)))
model = CostModel.l2_chordal(samples)

# the generic construction: sphere constraint + the cost as objective
problem = unit_sphere_problem(model.scalar_field())

q = random_unit_quaternion(rng)
v = v0(problem, q)
print("at a random unit q:")
print("  <v0, q>              =", float(np.dot(v, q)), " (tangent to the sphere)")
print("  dissipation rate     =", dissipation_rate(problem, q), " (>= 0)")
print("  v0 vs 4*proj(grad)   =",
      float(np.linalg.norm(v - model.control_field(q))), " (same field)")

# gradients match central differences, so the field is what it claims
g = model.gradient(q)
g_fd = fd_gradient(model.value, q)
print("  gradient vs FD       =", float(np.abs(g - g_fd).max()))

# descend: the cost falls monotonically until the field vanishes
print("\ndescent from a fresh random start:")
point = flow_descend(model, random_unit_quaternion(rng))
print("  final cost           =", point.cost)
print("  |v0| at the end      =", point.control_norm)
print("  rotation residual    =", point.rotation_residual_norm)
print("  quaternion           =", np.round(point.q, 9))

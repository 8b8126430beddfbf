# Which first integrals are connection energies?
#
# Given a candidate first integral f(t, q, v), look for gamma(q, t) with
# dL/dv . gamma = E_L - f.  Sampling velocities at a fixed base point turns
# this into a small least-squares problem.  A zero residual means some
# connection realizes f; a clearly nonzero one means none does.

from jetmech import BasePoint, LagrangianModel, parse
from jetmech.exprparse import chart_variables
from jetmech.verify import fit_connection_to_first_integral

free = LagrangianModel.from_string("0.5*v0^2", 1)
names = chart_variables(1)
points = [BasePoint([0.0], 0.0), BasePoint([1.0], 0.5), BasePoint([-3.0], 2.0)]

# 1/2 v^2 - v is the energy of gamma = 1.

for r in fit_connection_to_first_integral(free, parse("0.5*v0^2 - v0", names), points):
    print(f"q={r.point.q[0]:+.1f} t={r.point.t:.1f}  gamma={r.gamma[0]:.15f}  residual={r.residual:.1e}")

# Momentum is conserved too, but it would need gamma = v/2 - 1, which depends
# on the velocity.  The residual says so.

for r in fit_connection_to_first_integral(free, parse("v0", names), points, k=5):
    print(f"q={r.point.q[0]:+.1f} t={r.point.t:.1f}  gamma={r.gamma[0]:+.4f}  residual={r.residual:.3f}")

# From velocities to momenta
#
# The Hamiltonian is never typed in.  It comes from inverting p = dL/dv by
# Newton's method and evaluating p.v - L there.  Subtracting gamma . p gives
# the Hamiltonian of a connection, and the Hamilton-Cartan form built from it
# does not depend on which connection was used.

import numpy as np

from jetmech import (
    ConnectionModel,
    LagrangianModel,
    MomentumState,
    VelocityState,
    hamilton_cartan_1form,
    integrate_hamilton,
    integrate_lagrangian,
    legendre,
    legendre_inverse,
)
from jetmech.hamiltonian import hamiltonian_conn, hamiltonian_std

# A position-dependent mass makes the Legendre map nonlinear in q.

L = LagrangianModel.from_string("0.5*(1 + 0.5*q0^2)*v0^2 - 0.5*q0^2", 1)
s = VelocityState([0.8], [-1.2], 0.0)
m = legendre(L, s)
print("p =", m.p, " back to v =", legendre_inverse(L, m).v)

m = MomentumState([0.3], [1.1], 0.5)
for src in ("0", "5", "sin(t)*q0", "q0^3 - 2*t"):
    c = ConnectionModel.from_strings([src])
    form = hamilton_cartan_1form(L, c, m)
    print(f"gamma = {src:11s} h_conn = {hamiltonian_conn(L, c, m):+.6f}  Theta = {form.as_array()}")
print("h_std =", hamiltonian_std(L, m))

# Lagrangian and Hamiltonian integrations agree once mapped by the Legendre map.

s0 = VelocityState([0.5], [-0.3], 0.0)
lag = integrate_lagrangian(L, s0, 5.0, 1e-3)
ham = integrate_hamilton(L, legendre(L, s0), 5.0, 1e-3)
p_lag = np.array([legendre(L, st).p for st in lag.states()])
print("max |q_L - q_H| =", np.abs(lag.q - ham.q).max())
print("max |p_L - p_H| =", np.abs(p_lag - ham.p).max())

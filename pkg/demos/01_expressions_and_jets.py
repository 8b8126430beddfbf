# Expressions and second-order jets
#
# Lagrangians and connection coefficients are written as plain text over the
# chart variables t, q0.., v0..  Parsing gives a tree; evaluating the tree on
# Jet2 numbers gives the value, gradient and Hessian in a single pass.

import numpy as np

from jetmech import eval_jet2, parse
from jetmech.exprparse import chart_variables, to_source

names = chart_variables(1)
print(names)

# Precedence: ^ binds tightest and is right-associative, unary minus comes
# next, so -v0^2 is -(v0^2).

e = parse("-v0^2^0.5 + q0*sin(t)", names)
print(to_source(e))

# Derivatives with respect to any ordered subset of the variables.

j = eval_jet2(e, {"t": 0.3, "q0": 2.0, "v0": 1.5}, ["q0", "v0"])
print("value   ", j.value)
print("gradient", j.grad)
print("hessian\n", j.hess)

# Compare against a central difference of the gradient.

def grad_at(q, v):
    return eval_jet2(e, {"t": 0.3, "q0": q, "v0": v}, ["q0", "v0"]).grad

h = 1e-6
fd = np.column_stack([(grad_at(2 + h, 1.5) - grad_at(2 - h, 1.5)) / (2 * h),
                      (grad_at(2, 1.5 + h) - grad_at(2, 1.5 - h)) / (2 * h)])
print("max |H - FD(grad)| =", np.abs(j.hess - fd).max())

# Domain problems are reported at evaluation time, naming the offending node.

from jetmech import DomainError

try:
    eval_jet2(parse("log(q0 - 3)", names), {"q0": 1.0}, ["q0"])
except DomainError as exc:
    print("DomainError:", exc)

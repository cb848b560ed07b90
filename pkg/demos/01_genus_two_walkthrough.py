"""Genus two from start to finish.

Build tau_2, turn it into the solution family (u, v, w), check that the
family sits on the curve y^2 = x^5, and evaluate it at a point.
"""

from mumford_kdv import (abel_jacobi, eval_at, inverse_phi, momentum, rho,
                         solution_via_rho, tau)
from mumford_kdv.jacobian import AVector

g = 2
print("tau_2      =", tau(g))
print("rho_2      =", rho(g).value)

family = inverse_phi(g)
print("\nThe solution family, coefficients listed lowest degree first:")
print(" u =", [str(c) for c in family.u])
print(" v =", [str(c) for c in family.v])
print(" w =", [str(c) for c in family.w])

print("\nu w + v^2 is x^5 identically:", momentum(family).is_zero_fiber())
print("the rho route gives the same family:", solution_via_rho(g).u == family.u)

# a point off the theta divisor, and the same point reached from two roots
a = AVector(g, (1, 0))
pt = eval_at(family, a)
print("\nat a = (1, 0):  u =", [str(c) for c in pt.u])

alphas = (2, 3)
b = abel_jacobi(g, alphas)
print("\nthe divisor with roots alpha^2 = 4, 9 has coordinates", [str(c) for c in b.coords])
print("and the solution there has u =", [str(c) for c in eval_at(family, b).u])
print("which is (x - 4)(x - 9) written lowest degree first.")

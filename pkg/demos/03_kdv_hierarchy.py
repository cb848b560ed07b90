"""f = 2 rho_g is a rational KdV solution.

The Lax flows are computed once as differential polynomials in a formal
field f0, f1, ... and then specialised to f = 2 rho_g.  Flow g+1 is the
first one that leaves f fixed.
"""

from mumford_kdv import genus_profile, kdv_check, wronskian_tau, tau
from mumford_kdv.kdv import lax_jet, wronskian_sign

for i in (1, 2, 3):
    print(f"flow {i}: df/da{i} =", lax_jet(i))

print()
for g in (1, 2, 3):
    results = {i: kdv_check(g, i) for i in range(1, g + 2)}
    print(f"g = {g}: flows satisfied {results}  (flow {g + 1} is stationary)")

print("\nRestricting to a2 = ... = ag = 0 gives the familiar profile:")
for g in (1, 2, 3, 4):
    print(f" g = {g}:  2 rho = {genus_profile(g)}")

print("\nThe Wronskian of chi_(2g-1), chi_(2g-3), ... is tau_g up to sign:")
for g in (1, 2, 3, 4):
    same = wronskian_tau(g) == tau(g) * wronskian_sign(g)
    print(f" g = {g}: sign {wronskian_sign(g):+d}, matches {same}")

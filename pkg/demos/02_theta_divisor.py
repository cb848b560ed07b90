"""Where the construction breaks down.

The denominators of the solution are powers of tau_g, so the family has
poles along the theta divisor tau_g = 0.  The rank criteria tell the same
story in terms of kernels of the X matrices.
"""

from mumford_kdv import PoleError, eval_at, h0_nonzero, in_aj_image, inverse_phi, tau, theta_contains
from mumford_kdv.jacobian import AVector

g = 2
origin = AVector(g, (0, 0))
print("tau_2 at the origin:", tau(g).evaluate(origin.as_point()))
print("origin on theta:", theta_contains(origin))

try:
    eval_at(inverse_phi(g), origin)
except PoleError as exc:
    print("evaluating the family there fails; vanishing denominator:", exc.denominator)

print("\nThe point a = (0, -1) is the standard counterexample in genus 2:")
w = (0, -1)
print(" off theta:", not theta_contains(AVector(g, w)))
print(" h0(L(2)) nonzero:", h0_nonzero(2, w))
print(" but in the image of aj at k = 2:", in_aj_image(2, w))
print(" in the image at k = 3:", in_aj_image(3, w))

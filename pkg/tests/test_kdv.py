from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from mumford_kdv.exact import MPoly, RatFun, parse_poly
from mumford_kdv.jacobian import tau
from mumford_kdv.kdv import (InsufficientDepthError, KdvField, PsiDO, bridge_field,
                             genus_profile, half_power_plus, jet_derive, kdv_check,
                             lax_jet, lax_operator, lax_rhs, log_second_derivative,
                             psido_mul, psido_sqrt, wronskian_sign, wronskian_tau)
from mumford_kdv.solver import rho
from strategies import nonzero_rats

P = parse_poly
F = Fraction
JET = KdvField.symbolic()
c = MPoly.var("f0")
a1 = MPoly.var("a1")


def op(coeffs, depth=6):
    return PsiDO(coeffs, depth, jet_derive)


def d(n):
    return MPoly.var(f"f{n}")


# --- composition ------------------------------------------------------------------

def test_d_times_function():
    assert psido_mul(op({1: 1}), op({0: c})) == op({1: c, 0: d(1)})


def test_inverse_d_times_function():
    M = 6
    R = psido_mul(op({-1: 1}, M), op({0: c}, M))
    expected = {-1 - i: (-1) ** i * d(i) for i in range(M)}
    assert R == op(expected, M)
    # multiplying back by d recovers c through the exact orders
    back = psido_mul(op({1: 1}, M), R)
    assert back[0] == c
    for k in range(-1, back.exact_above or -M, -1):
        assert back[k] == 0


def test_identity_multiplication():
    L = lax_operator(JET, 4)
    assert psido_mul(L, op({0: 1}, 4)) == L


def test_depth_mismatch():
    with pytest.raises(ValueError):
        psido_mul(op({1: 1}, 3), op({1: 1}, 4))


@st.composite
def psidos(draw, depth=5):
    coeffs = {}
    for k in draw(st.sets(st.integers(-2, 2), min_size=1, max_size=3)):
        coeff = MPoly.const(draw(nonzero_rats))
        if draw(st.booleans()):
            coeff = coeff * d(draw(st.integers(0, 1)))
        coeffs[k] = coeff
    return op(coeffs, depth)


def _agree_above(A, B, bound):
    lo = bound if bound is not None else -A.depth
    return all(A[k] == B[k] for k in range(lo, 6))


@given(psidos(), psidos(), psidos())
def test_associativity_on_exact_orders(A, B, C):
    left = psido_mul(psido_mul(A, B), C)
    right = psido_mul(A, psido_mul(B, C))
    bound = max(x for x in (left.exact_above, right.exact_above, -A.depth) if x is not None)
    assert _agree_above(left, right, bound)


@given(psidos(depth=4), psidos(depth=4))
def test_exactness_bound_is_honest(A, B):
    # recompute with more room and compare everything claimed exact
    deep = 10
    A2, B2 = op(A.coeffs, deep), op(B.coeffs, deep)
    small, big = psido_mul(A, B), psido_mul(A2, B2)
    assert _agree_above(small, big, small.exact_above)


# --- square root -----------------------------------------------------------------------

def test_sqrt_leading_terms():
    S = psido_sqrt(JET, 6)
    assert S[1] == 1
    assert S[0] == 0
    assert S[-1] == c * F(1, 2)
    assert S[-2] == d(1) * F(-1, 4)
    assert all(k <= 1 for k in S.coeffs)


def test_sqrt_of_free_operator():
    zero = KdvField(1, RatFun(0))
    assert psido_sqrt(zero, 5) == PsiDO({1: 1}, 5, zero.derive)


@pytest.mark.parametrize("M", [3, 6, 9])
def test_sqrt_squares_back(M):
    S = psido_sqrt(JET, M)
    R = psido_mul(S, S) - lax_operator(JET, M)
    assert R.exact_above is not None
    for k in range(R.exact_above, 3):
        assert R[k] == 0
    assert R.exact_above <= 1 - M


def test_sqrt_needs_positive_depth():
    with pytest.raises(ValueError):
        psido_sqrt(JET, 0)


def test_three_halves_power():
    B = half_power_plus(JET, 2, 7)
    assert B == op({3: 1, 1: c * F(3, 2), 0: d(1) * F(3, 4)}, 7)


def test_insufficient_depth_is_detected():
    with pytest.raises(InsufficientDepthError):
        half_power_plus(JET, 4, 3)


# --- Lax right-hand sides ---------------------------------------------------------------

@pytest.mark.parametrize("i,text", [
    (1, "f1"),
    (2, "1/4*f3 + 3/2*f0*f1"),
    (3, "1/16*f5 + 5/8*f0*f3 + 5/4*f1*f2 + 15/8*f0^2*f1"),
])
def test_displayed_flows(i, text):
    assert lax_jet(i) == P(text)


@pytest.mark.parametrize("i", [1, 2, 3, 4])
def test_lax_rhs_independent_of_extra_depth(i):
    assert lax_jet(i) == lax_jet(i, 2 * i + 7)
    assert lax_jet(i) == lax_jet(i, max(1, 2 * i - 2))


@pytest.mark.parametrize("i", [1, 2, 3, 4])
def test_flow_weight(i):
    weights = {f"f{k}": k + 2 for k in range(2 * i + 2)}
    assert lax_jet(i).is_homogeneous(2 * i + 1, weights=weights)


def test_generic_and_tower_substitution_agree():
    for g in (1, 2, 3):
        generic = KdvField.of(g, rho(g).value * 2)
        for i in (1, 2, 3):
            assert lax_rhs(generic, i) == lax_rhs(bridge_field(g), i)


def test_genus_one_is_stationary_for_the_second_flow():
    f = KdvField.of(1, RatFun(-2, a1 ** 2))
    assert lax_rhs(f, 2) == 0


@pytest.mark.parametrize("g", [1, 2, 3])
def test_kdv_hierarchy(g):
    for i in range(1, g + 2):
        assert kdv_check(g, i)


def test_flow_index_must_be_positive():
    with pytest.raises(ValueError):
        kdv_check(2, 0)


# --- Wronskian and profile ----------------------------------------------------------------

def test_wronskian_small_cases():
    assert wronskian_tau(1) == a1
    assert wronskian_tau(2) == P("a2 - a1^3/3")
    assert wronskian_tau(2) == -tau(2)


@pytest.mark.parametrize("g", range(1, 5))
def test_wronskian_sign_and_log_derivative(g):
    W = wronskian_tau(g)
    assert W == tau(g) * wronskian_sign(g)
    assert log_second_derivative(W) == log_second_derivative(tau(g))
    assert log_second_derivative(tau(g)) == rho(g).value


@pytest.mark.parametrize("g", range(1, 5))
def test_genus_profile(g):
    assert genus_profile(g) == RatFun(-g * (g + 1), a1 ** 2)


def test_tau4_restricted_to_a1():
    assert tau(4).subs({"a2": 0, "a3": 0, "a4": 0}) == a1 ** 10 * F(1, 4725)

import random
from fractions import Fraction

import pytest

from mumford_kdv.exact import MPoly, PoleError, RatFun, det, parse_poly
from mumford_kdv.jacobian import abel_jacobi, build_X, tau, theta_contains
from mumford_kdv.phase import MumfordTriple, momentum
from mumford_kdv.solver import (ThetaDivisorError, eval_at, inverse_phi, p_poly, rho,
                                solution, solution_via_rho, uvw_scheme)
from mumford_kdv.verify import (_product_of_linear, denominator_violations,
                                q_determinants, random_alphas)

P = parse_poly
F = Fraction
a1 = MPoly.var("a1")

CLOSED_RHO = {
    2: ("-3*a1*(a1^3 + 6*a2)", "(a1^3 - 3*a2)^2"),
    3: ("-3*(2*a1^10 + 675*a1^4*a2^2 - 1350*a1*a2^3 - 270*a1^5*a3 + 675*a3^2)",
        "(a1^6 - 15*a1^3*a2 - 45*a2^2 + 45*a1*a3)^2"),
}


# --- p(t) ------------------------------------------------------------------------

def test_p_poly_genus_one():
    assert p_poly(1).coeffs == (1, RatFun(a1))


def test_p_poly_genus_two_at_a_point():
    p = [c.evaluate({"a1": 1, "a2": 0}) for c in p_poly(2).coeffs]
    assert p == [1, 1, F(1, 3)]


@pytest.mark.parametrize("g", range(1, 5))
def test_p_poly_tau_identities(g):
    p = p_poly(g).coeffs
    dB = det(build_X(g).B) if g > 1 else MPoly.const(1)
    T = tau(g)
    assert p[0] == 1
    assert p[g] * dB == T
    assert p[g - 1] * dB == T.diff("a1")
    expected = p[g - 2] * dB * 2 if g >= 2 else 0
    assert T.diff("a1").diff("a1") == expected


@pytest.mark.parametrize("g", range(1, 5))
def test_congruence_witness(g):
    pp = p_poly(g)
    assert not any(pp.congruence_residue())
    assert pp.witness[0] == 1


@pytest.mark.parametrize("g", range(2, 5))
def test_q1_equals_q2(g):
    q1, q2 = q_determinants(g)
    assert q1 == q2


def test_q_determinants_genus_two_by_hand():
    q1, q2 = q_determinants(2)
    assert q1 == MPoly.var("X0") * MPoly.var("X1")


# --- the inverse map ----------------------------------------------------------------

def test_inverse_phi_genus_one_closed_form():
    fam = inverse_phi(1)
    assert fam.u == (RatFun(-1, a1 ** 2), 1)
    assert fam.v == (RatFun(1, a1 ** 3),)
    assert fam.w == (RatFun(1, a1 ** 4), RatFun(1, a1 ** 2), 1)


def test_eval_examples():
    pt = eval_at(inverse_phi(1), (F(1, 2),))
    assert pt == MumfordTriple.from_point(1, [-4, 1], [8], [16, 4, 1])
    assert momentum(pt).is_zero_fiber()
    u = eval_at(inverse_phi(2), (1, 0)).u
    assert u == (9, -3, 1)


def test_eval_on_theta_names_tau():
    with pytest.raises(ThetaDivisorError) as info:
        eval_at(inverse_phi(2), (0, 0))
    assert isinstance(info.value, PoleError)
    assert info.value.denominator == tau(2)


@pytest.mark.parametrize("g", range(1, 5))
def test_spectral_identity_p_route(g):
    assert momentum(inverse_phi(g)).is_zero_fiber()


@pytest.mark.parametrize("g", range(1, 4))
def test_spectral_identity_rho_route(g):
    assert momentum(solution_via_rho(g)).is_zero_fiber()


@pytest.mark.parametrize("g", range(1, 4))
def test_routes_agree(g):
    assert inverse_phi(g) == solution_via_rho(g)
    assert solution(g, "rho") == solution(g, "p")


def test_unknown_route():
    with pytest.raises(ValueError):
        solution(2, "q")


@pytest.mark.parametrize("g", range(1, 5))
def test_u_top_is_rho(g):
    assert inverse_phi(g).u[g - 1] == rho(g).value


@pytest.mark.parametrize("g", range(1, 5))
def test_denominators_divide_powers_of_tau(g):
    assert denominator_violations(inverse_phi(g)) == {}


def test_v_and_w_need_more_than_tau_squared():
    fam = inverse_phi(1)
    assert fam.v[0].den == a1 ** 3
    assert fam.w[0].den == a1 ** 4


# --- rho -----------------------------------------------------------------------------

@pytest.mark.parametrize("g", [2, 3])
def test_rho_closed_forms(g):
    num, den = CLOSED_RHO[g]
    r = rho(g).value
    n, d = P(num), P(den)
    assert r.num * d == n * r.den
    assert r == RatFun(n, d)


def test_rho_values():
    assert rho(2).value.evaluate({"a1": 1, "a2": 0}) == -3
    assert rho(1).value == RatFun(-1, a1 ** 2)


# --- U / V / W --------------------------------------------------------------------------

def test_uvw_leading_terms():
    for g in (2, 3, 4):
        S = uvw_scheme(g)
        assert S.U[g - 1] == P("T0")
        assert S.V[g - 1] == P("T1/2")
        assert S.W[g] == P("-T0")
        assert S.U[g - 2] == P("T2/4 + 3*T0^2/2")


def test_uvw_third_term_is_the_recursion_output():
    U = uvw_scheme(3).U[0]
    assert U == P("T4/16 + 5*T1^2/8 + 5*T0*T2/4 + 5*T0^3/2")
    # a printed variant ending in 5/2 T3 has the wrong weight
    variant = P("T4/16 + 5*T1^2/8 + 5*T0*T2/4 + 5*T3/2")
    assert U != variant
    assert not variant.is_homogeneous(6, weights=_T_WEIGHTS)


_T_WEIGHTS = {f"T{i}": i + 2 for i in range(12)}


@pytest.mark.parametrize("g", range(1, 5))
def test_uvw_weights_and_v_relation(g):
    from mumford_kdv.solver import _dot

    S = uvw_scheme(g)
    for k in range(g):
        U = S.U[g - 1 - k]
        assert U.is_homogeneous(2 * k + 2, weights=_T_WEIGHTS)
        assert S.V[g - 1 - k] == _dot(U, 2 * g).scale(F(1, 2))


# --- Abel-Jacobi round trip ---------------------------------------------------------

@pytest.mark.parametrize("g", [1, 2, 3])
def test_abel_jacobi_round_trip(g):
    rng = random.Random(100 + g)
    fam = inverse_phi(g)
    done = 0
    while done < 15:
        al = random_alphas(g, rng)
        a = abel_jacobi(g, al)
        if theta_contains(a):
            continue
        done += 1
        assert list(eval_at(fam, a).u) == _product_of_linear(x * x for x in al)


def test_product_of_linear():
    assert _product_of_linear([2, 3]) == [6, -5, 1]

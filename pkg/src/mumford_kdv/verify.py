"""Named invariant checks, grouped by topic.

Every check returns :class:`Check` records; a failing record carries the
exact residue that was expected to vanish.  Randomised checks draw from a
``random.Random(seed)`` so that reruns are reproducible.
"""

from __future__ import annotations

import itertools
import random
from dataclasses import dataclass
from fractions import Fraction
from typing import Any, Callable

from .chi import chi_table
from .exact import MPoly, NotDivisibleError, PolyMat, RatFun, det, to_json, to_ratfun
from .jacobian import (INFINITY, AVector, DivisorPoints, abel_jacobi, build_X,
                       h0_nonzero, in_aj_image, tau, theta_contains, x_kernel)
from .kdv import (genus_profile, kdv_residue, lax_jet, log_second_derivative,
                  wronskian_sign, wronskian_tau)
from .phase import (MumfordTriple, PhaseFunction, coordinate_names, dz_identity_check,
                    embed, hamiltonians, momentum, on_zero_fiber, poisson_bracket,
                    stratum, time_evolution_mismatches, vector_field_at)
from .solver import eval_at, inverse_phi, p_poly, rho, solution_via_rho

DEFAULT_SEED = 1729


@dataclass
class Check:
    name: str
    passed: bool
    residue: Any = None

    @property
    def status(self) -> str:
        return "pass" if self.passed else "fail"

    def to_json(self) -> dict:
        out = {"name": self.name, "status": self.status}
        if not self.passed and self.residue is not None:
            out["residue"] = _jsonable(self.residue)
        return out


def _jsonable(x):
    if isinstance(x, dict):
        return [[_jsonable(k), _jsonable(v)] for k, v in x.items()]
    if isinstance(x, (list, tuple)):
        return [_jsonable(v) for v in x]
    return to_json(x)


def _check(name: str, residue) -> Check:
    """Pass iff ``residue`` is zero / empty."""
    return Check(name, not residue, residue or None)


def _check_eq(name: str, got, expected) -> Check:
    if got == expected:
        return Check(name, True)
    try:
        return Check(name, False, got - expected)
    except TypeError:
        return Check(name, False, {"got": got, "expected": expected})


# ---------------------------------------------------------------------------
# samplers


def random_rat(rng: random.Random, span: int = 6, den: int = 5) -> Fraction:
    return Fraction(rng.randint(-span, span), rng.randint(1, den))


def random_point_off_theta(g: int, rng: random.Random) -> AVector:
    while True:
        a = AVector(g, tuple(random_rat(rng) for _ in range(g)))
        if not theta_contains(a):
            return a


def random_alphas(g: int, rng: random.Random) -> tuple:
    """Nonzero rationals with distinct squares."""
    while True:
        al = tuple(random_rat(rng) for _ in range(g))
        sq = [a * a for a in al]
        if all(al) and len(set(sq)) == g:
            return al


def random_triple(g: int, rng: random.Random) -> MumfordTriple:
    return MumfordTriple(g, tuple(random_rat(rng) for _ in range(g)) + (1,),
                         tuple(random_rat(rng) for _ in range(g)),
                         tuple(random_rat(rng) for _ in range(g + 1)) + (1,))


def random_regular_point(g: int, rng: random.Random) -> MumfordTriple:
    """A point of M_g(0) with l(0) != 0, from the solution family."""
    if g == 0:
        return MumfordTriple(0, (1,), (), (0, 1))
    return eval_at(inverse_phi(g), random_point_off_theta(g, rng))


# ---------------------------------------------------------------------------
# chi


def check_chi(g: int, **_) -> list:
    N = 2 * g + 2
    table = chi_table(N, g)
    shift, iterated, weights = {}, {}, {}
    for j in range(N + 1):
        for k in range(1, g + 1):
            d = table[j].diff(f"a{k}")
            if d != table[j - 2 * k + 1]:
                shift[(j, k)] = d - table[j - 2 * k + 1]
            it = table[j]
            for _ in range(2 * k - 1):
                it = it.diff("a1")
            if it != d:
                iterated[(j, k)] = it - d
        if table[j] and not table[j].is_homogeneous(j):
            weights[j] = table[j]
    return [_check(f"chi.derivative-shift[g={g}]", shift),
            _check(f"chi.iterated-derivative[g={g}]", iterated),
            _check(f"chi.weight-homogeneous[g={g}]", weights)]


# ---------------------------------------------------------------------------
# jacobian


def _kernel_b0_b1(g: int, a) -> dict:
    bad = {}
    for k in range(1, 2 * g):
        for b in x_kernel(k, a):
            if b[0] == 0 and b[1] != 0:
                bad[k] = b
    return bad


def check_jacobian(g: int, seed: int = DEFAULT_SEED, samples: int = 100, **_) -> list:
    rng = random.Random(seed)
    X = build_X(g)
    out = [_check_eq(f"jacobian.det-Xbar-equals-det-X[g={g}]", det(X.Xbar_g), det(X.X(g))),
           Check(f"jacobian.tau-weight[g={g}]", tau(g).is_homogeneous(g * (g + 1) // 2))]
    if g == 2:
        a = (0, -1)
        out.append(Check("jacobian.counterexample-h0[g=2,a=(0,-1)]", h0_nonzero(2, a)))
        out.append(Check("jacobian.counterexample-not-in-image[g=2,a=(0,-1)]", not in_aj_image(2, a)))
    theta_bad, image_bad, high_bad, b0_bad, on_theta_bad = {}, {}, {}, {}, {}
    for n in range(samples):
        a = random_point_off_theta(g, rng)
        if h0_nonzero(g - 1, a):
            theta_bad[n] = a.coords
        if g >= 2 and not in_aj_image(g + 1, a):
            image_bad[n] = a.coords
        for k in range(g, 2 * g):
            if not h0_nonzero(k, a):
                high_bad[(n, k)] = a.coords
        bad = _kernel_b0_b1(g, a)
        if bad:
            b0_bad[n] = bad
        # g-1 finite points plus one at infinity land on the theta divisor
        pts = tuple(random_alphas(g - 1, rng)) + (INFINITY,) if g > 1 else (INFINITY,)
        t = abel_jacobi(g, DivisorPoints(pts))
        if not theta_contains(t) or not h0_nonzero(g - 1, t):
            on_theta_bad[n] = t.coords
    out += [_check(f"jacobian.h0(g-1)-iff-theta[g={g}]", theta_bad),
            _check(f"jacobian.h0-nonzero-for-k>=g[g={g}]", high_bad),
            _check(f"jacobian.kernel-b0-zero-forces-b1-zero[g={g}]", b0_bad),
            _check(f"jacobian.aj(g-1)-image-in-theta[g={g}]", on_theta_bad)]
    if g >= 2:
        out.append(_check(f"jacobian.aj(g+1)-covers-complement-of-theta[g={g}]", image_bad))
    sym_bad = {}
    for n in range(min(samples, 20)):
        al = list(random_alphas(g, rng))
        perm = al[:]
        rng.shuffle(perm)
        if abel_jacobi(g, al) != abel_jacobi(g, perm):
            sym_bad[n] = al
    out.append(_check(f"jacobian.abel-jacobi-symmetric[g={g}]", sym_bad))
    return out


# ---------------------------------------------------------------------------
# poisson


def _coords(g: int) -> list:
    return [PhaseFunction.coordinate(g, c) for c in coordinate_names(g)]


def jacobiator(F: PhaseFunction, G: PhaseFunction, H: PhaseFunction) -> PhaseFunction:
    pb = poisson_bracket
    return pb(F, pb(G, H)) + pb(G, pb(H, F)) + pb(H, pb(F, G))


def check_poisson(g: int, seed: int = DEFAULT_SEED, samples: int = 100,
                  full: bool | None = None, **_) -> list:
    """Symbolic checks for g <= 2 (or ``full``); for larger g the Jacobi
    identity on generator triples is evaluated at ``samples`` random points."""
    full = g <= 2 if full is None else full
    C = _coords(g)
    H = hamiltonians(g)
    anti = {}
    for F, G in itertools.combinations_with_replacement(C, 2):
        r = poisson_bracket(F, G) + poisson_bracket(G, F)
        if r:
            anti[(str(F), str(G))] = r.expr
    triples = list(itertools.combinations(C, 3))
    jac = {}
    if full:
        for F, G, K in triples:
            r = jacobiator(F, G, K)
            if r:
                jac[(str(F), str(G), str(K))] = r.expr
        jac_name = f"poisson.jacobi[g={g}]"
    else:
        rng = random.Random(seed)
        exprs = [(t, jacobiator(*t)) for t in triples]
        for n in range(samples):
            l = random_triple(g, rng)
            for t, r in exprs:
                val = r.evaluate(l)
                if val:
                    jac[(n, tuple(str(x) for x in t))] = val
        jac_name = f"poisson.jacobi[g={g},points={samples},seed={seed}]"
    inv = {}
    for i, j in itertools.combinations(range(2 * g + 1), 2):
        r = poisson_bracket(H[i], H[j])
        if r:
            inv[(i, j)] = r.expr
    cas = {}
    for F in C:
        for j in range(g, 2 * g + 1):
            r = poisson_bracket(F, H[j])
            if r:
                cas[(str(F), j)] = r.expr
    return [_check(f"poisson.antisymmetry[g={g}]", anti),
            _check(jac_name, jac),
            _check(f"poisson.involution[g={g}]", inv),
            _check(f"poisson.casimirs[g={g}]", cas)]


# ---------------------------------------------------------------------------
# flows


def check_flows(g: int, **_) -> list:
    mism = {(m[0], str(m[1])): m[3] - m[2] for m in time_evolution_mismatches(g)}
    dz = dz_identity_check(g, inverse_phi(g))
    return [_check(f"flows.vector-fields-match-generating-identities[g={g}]", mism),
            Check(f"flows.dz-identities-on-solution[g={g}]", dz.ok, dz.residues or None)]


# ---------------------------------------------------------------------------
# strata


def check_strata(g: int, seed: int = DEFAULT_SEED, samples: int = 50, **_) -> list:
    """Embedded points of lower genus: stratum is preserved, the zero fiber
    is preserved, and X_g vanishes there."""
    rng = random.Random(seed)
    strat, fiber, vf = {}, {}, {}
    for n in range(samples):
        m = n % g  # source genus 0..g-1
        l = random_regular_point(m, rng)
        k = stratum(l) if m else 0
        e = l
        while e.genus < g:
            e = embed(e)
        if stratum(e) != k:
            strat[n] = (m, k, stratum(e))
        if not on_zero_fiber(e):
            fiber[n] = momentum(e).coeffs
        comps = {c: v for c, v in vector_field_at(g, e).items() if v}
        if comps:
            vf[n] = comps
    regular = random_regular_point(g, rng)
    return [_check(f"strata.embed-preserves-stratum[g={g}]", strat),
            _check(f"strata.embed-preserves-zero-fiber[g={g}]", fiber),
            _check(f"strata.top-vector-field-vanishes-on-embedded[g={g}]", vf),
            Check(f"strata.solution-points-are-regular[g={g}]", stratum(regular) == g)]


# ---------------------------------------------------------------------------
# solver


def divides(d: MPoly, p: MPoly) -> bool:
    try:
        p.exact_div(d)
    except NotDivisibleError:
        return False
    return True


DENOMINATOR_POWERS = {"u": 2, "v": 3, "w": 4}


def denominator_violations(family: MumfordTriple) -> dict:
    """Coefficients whose reduced denominator does not divide tau^k, with
    k = 2, 3, 4 for u, v, w."""
    T = tau(family.genus)
    bad = {}
    for letter, k in DENOMINATOR_POWERS.items():
        Tk = T ** k
        for i, c in enumerate(getattr(family, letter)):
            c = to_ratfun(c)
            if not divides(c.den, Tk):
                bad[f"{letter}{i}"] = c.den
    return bad


def q_determinants(g: int) -> tuple:
    """(Q1, Q2) in free variables X0..X_{2g-1}."""
    def X(m):
        return MPoly.var(f"X{m}") if m >= 0 else MPoly.const(0)

    rows1 = [[X(g - 2 - 2 * j) for j in range(g)]]
    rows1 += [[X(r - 2 * j) for j in range(g)] for r in range(g + 1, 2 * g)]
    rows2 = [[X(g - 1 - 2 * j) for j in range(g)], [X(g - 2 * j) for j in range(g)]]
    rows2 += [[X(r - 2 * j) for j in range(g)] for r in range(g + 2, 2 * g)]
    return det(PolyMat.from_rows(rows1)), det(PolyMat.from_rows(rows2))


def check_solver(g: int, seed: int = DEFAULT_SEED, samples: int = 50,
                 routes: bool = True, **_) -> list:
    rng = random.Random(seed)
    T = tau(g)
    T1 = T.diff("a1")
    T2 = T1.diff("a1")
    P = p_poly(g)
    X = build_X(g)
    dB = det(X.B) if g > 1 else MPoly.const(1)
    p = P.coeffs
    identities = [
        _check_eq(f"solver.tau-equals-pg-detB[g={g}]", to_ratfun(T), p[g] * dB),
        _check_eq(f"solver.tau1-equals-pg-1-detB[g={g}]", to_ratfun(T1), p[g - 1] * dB),
        _check_eq(f"solver.tau2-equals-2pg-2-detB[g={g}]", to_ratfun(T2),
                  (p[g - 2] * dB * 2) if g >= 2 else RatFun(0)),
        Check(f"solver.p0-is-one[g={g}]", p[0] == 1),
        _check(f"solver.congruence-witness[g={g}]",
               {n: r for n, r in enumerate(P.congruence_residue()) if r}),
    ]
    if g >= 2:
        q1, q2 = q_determinants(g)
        identities.append(_check_eq(f"solver.Q1-equals-Q2[g={g}]", q1, q2))
    F = inverse_phi(g)
    out = identities + [
        _check(f"solver.spectral-identity[g={g},route=p]",
               {i: c for i, c in enumerate(momentum(F).coeffs) if c}),
        _check(f"solver.denominator-bounds[g={g}]", denominator_violations(F)),
        _check_eq(f"solver.u(g-1)-equals-rho[g={g}]", F.u[g - 1], rho(g).value),
    ]
    if routes:
        R = solution_via_rho(g)
        out.append(_check(f"solver.spectral-identity[g={g},route=rho]",
                          {i: c for i, c in enumerate(momentum(R).coeffs) if c}))
        diff = {}
        for letter in "uvw":
            for i, (x, y) in enumerate(zip(getattr(F, letter), getattr(R, letter))):
                if x != y:
                    diff[f"{letter}{i}"] = to_ratfun(x) - to_ratfun(y)
        out.append(_check(f"solver.route-equivalence[g={g}]", diff))
    out.append(check_aj_round_trip(g, rng, samples))
    return out


def _product_of_linear(roots) -> list:
    """Coefficients, lowest first, of prod (x - r)."""
    poly = [Fraction(1)]
    for r in roots:
        nxt = [Fraction(0)] * (len(poly) + 1)
        for i, c in enumerate(poly):
            nxt[i + 1] += c
            nxt[i] -= r * c
        poly = nxt
    return poly


def check_aj_round_trip(g: int, rng: random.Random, samples: int = 50) -> Check:
    F = inverse_phi(g)
    bad = {}
    drawn = 0
    while drawn < samples:
        al = random_alphas(g, rng)
        a = abel_jacobi(g, al)
        if theta_contains(a):
            continue
        drawn += 1
        u = list(eval_at(F, a).u)
        expected = _product_of_linear(a_ * a_ for a_ in al)
        if u != expected:
            bad[al] = (u, expected)
    return _check(f"solver.abel-jacobi-round-trip[g={g},samples={samples}]", bad)


# ---------------------------------------------------------------------------
# kdv

DISPLAYED_FLOWS = {
    1: "f1",
    2: "1/4*f3 + 3/2*f0*f1",
    3: "1/16*f5 + 5/8*f0*f3 + 5/4*f1*f2 + 15/8*f0^2*f1",
}


def check_kdv(g: int, **_) -> list:
    from .exact import parse_poly

    out = []
    for i, text in DISPLAYED_FLOWS.items():
        out.append(_check_eq(f"kdv.flow-rhs[i={i}]", lax_jet(i), parse_poly(text)))
    for i in range(1, g + 2):
        r = kdv_residue(g, i)
        out.append(Check(f"kdv.flow[g={g},i={i}]", r.is_zero(), None if r.is_zero() else r))
    W = wronskian_tau(g)
    out.append(_check_eq(f"kdv.wronskian-signed-tau[g={g}]", W, tau(g) * wronskian_sign(g)))
    out.append(_check_eq(f"kdv.wronskian-log-derivative[g={g}]",
                         log_second_derivative(W), log_second_derivative(tau(g))))
    expected = RatFun(MPoly.const(-g * (g + 1)), MPoly.var("a1") ** 2)
    out.append(_check_eq(f"kdv.genus-profile[g={g}]", genus_profile(g), expected))
    return out


TOPICS: dict[str, Callable] = {
    "chi": check_chi,
    "jacobian": check_jacobian,
    "poisson": check_poisson,
    "flows": check_flows,
    "strata": check_strata,
    "solver": check_solver,
    "kdv": check_kdv,
}

"""Rational solutions of the genus g Mumford system on the zero fiber.

Two independent constructions are provided:

* :func:`inverse_phi` builds the point of M_g(0) attached to a generic
  ``a`` from the polynomial p(t; a) (``p_poly``), then recovers v and w by
  differentiating in ``a1``;
* :func:`solution_via_rho` runs the U/V/W recursion on the derivatives of
  rho_g = d^2/da1^2 log tau_g.

Both are computed symbolically once per genus and evaluated pointwise with
:func:`eval_at`.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache

from .chi import truncated_exponential
from .exact import (MPoly, PoleError, RatFun, a_vars, reduce_over_base,
                    solve_linear, substitute_over_base, to_ratfun)
from .jacobian import as_avector, build_X, tau
from .phase import MumfordTriple


@dataclass(frozen=True)
class PPoly:
    """p(t) = sum p_k t^k with p_0 = 1, and the witness b(t) = sum b_j t^(2j)."""

    genus: int
    coeffs: tuple
    witness: tuple

    def __getitem__(self, k):
        return self.coeffs[k]

    def congruence_residue(self) -> list:
        """Coefficients of p(t) - f_g(t) b(t) below t^(2g); all zero."""
        g = self.genus
        f = truncated_exponential(g)
        b = [0] * (2 * g)
        for j, bj in enumerate(self.witness):
            if 2 * j < 2 * g:
                b[2 * j] = bj
        out = []
        for n in range(2 * g):
            acc = to_ratfun(self.coeffs[n]) if n <= g else RatFun(0)
            for k in range(n + 1):
                if b[n - k]:
                    acc = acc - to_ratfun(f[k]) * b[n - k]
            out.append(acc)
        return out


@lru_cache(maxsize=None)
def p_poly(g: int) -> PPoly:
    X = build_X(g)
    if g == 1:
        b = [RatFun(1)]
    else:
        sol = solve_linear(X.B, list(X.phi))
        b = [RatFun(1)] + [-s for s in sol]
    p = X.A.apply(b)
    p = tuple(to_ratfun(c) for c in p)
    pp = PPoly(g, p, tuple(b))
    if p[0] != 1:
        raise AssertionError("p_0 != 1")
    if any(pp.congruence_residue()):
        raise AssertionError("p(t) fails the congruence with f_g(t) b(t)")
    return pp


@lru_cache(maxsize=None)
def inverse_phi(g: int) -> MumfordTriple:
    """The family a -> (u, v, w) with
    u(t^2) = (-1)^g p(t) p(-t) / p_g^2, v = u'/2, w = (x - 2u_{g-1}) u - u''/2,
    where ' is d/da1."""
    p = p_poly(g).coeffs
    # p(t) p(-t) = sum_k t^(2k) sum_{i+j=2k} (-1)^j p_i p_j
    scale = RatFun(MPoly.const((-1) ** g)) / (p[g] * p[g])
    u = []
    for k in range(g + 1):
        acc = RatFun(0)
        for i in range(0, 2 * k + 1):
            j = 2 * k - i
            if i <= g and j <= g:
                term = p[i] * p[j]
                acc = acc - term if j % 2 else acc + term
        u.append(acc * scale)
    if u[g] != 1:
        raise AssertionError("u is not monic")
    du = [c.diff("a1") for c in u]
    ddu = [c.diff("a1") for c in du]
    v = [c / 2 for c in du[:g]]
    # w = (x - 2 u_{g-1}) u - u''/2
    w = [RatFun(0)] * (g + 2)
    for k, c in enumerate(u):
        w[k + 1] = w[k + 1] + c
        w[k] = w[k] - u[g - 1] * c * 2 - ddu[k] / 2
    return MumfordTriple(g, tuple(u), tuple(v), tuple(w))


@dataclass(frozen=True)
class RhoFunction:
    genus: int
    value: RatFun


class _Tower:
    """Derivatives rho^(k) = N_k / tau^(k+2) in d/da1, kept unreduced."""

    def __init__(self, g: int):
        self.tau = tau(g)
        t1 = self.tau.diff("a1")
        t2 = t1.diff("a1")
        self.nums = [t2 * self.tau - t1 * t1]
        self._t1 = t1

    def num(self, k: int) -> MPoly:
        while len(self.nums) <= k:
            j = len(self.nums) - 1
            n = self.nums[j]
            self.nums.append(n.diff("a1") * self.tau - (n * self._t1).scale(j + 2))
        return self.nums[k]

    def exponent(self, k: int) -> int:
        return k + 2

    def value(self, k: int) -> RatFun:
        return reduce_over_base(self.num(k), self.tau, k + 2)


@lru_cache(maxsize=None)
def rho_tower(g: int) -> _Tower:
    return _Tower(g)


@lru_cache(maxsize=None)
def rho(g: int) -> RhoFunction:
    """rho_g = (tau'' tau - tau'^2) / tau^2, reduced."""
    return RhoFunction(g, rho_tower(g).value(0))


@dataclass(frozen=True)
class UVWScheme:
    genus: int
    U: tuple
    V: tuple
    W: tuple

    def T_vars(self) -> tuple:
        return tuple(f"T{i}" for i in range(2 * self.genus + 1))


def _dot(F: MPoly, top: int) -> MPoly:
    """Derivation T_i -> T_{i+1}, T_top -> 0."""
    out = MPoly.const(0)
    for v in F.used_vars():
        i = int(v[1:])
        if i < top:
            out = out + F.diff(v) * MPoly.var(f"T{i + 1}")
    return out


@lru_cache(maxsize=None)
def uvw_scheme(g: int) -> UVWScheme:
    """The polynomials U_k, V_k, W_k in T_0..T_2g (index k is the power
    of x they multiply)."""
    top = 2 * g
    T0 = MPoly.var("T0")
    U = {g - 1: T0}
    V = {g - 1: MPoly.var("T1").scale(Fraction(1, 2))}
    W = {g: -T0}
    for k in range(1, g + 1):
        s = MPoly.const(0)
        for j in range(g - k, g):
            s = s + U[j] * W[2 * g - j - k]
        for j in range(g + 1 - k, g):
            s = s + V[j] * V[2 * g - j - k]
        ddU = _dot(_dot(U[g - k], top), top)
        common = ddU.scale(Fraction(1, 4)) + U[g - 1] * U[g - k]
        if g - k - 1 >= 0:
            U[g - k - 1] = common - s.scale(Fraction(1, 2))
            V[g - k - 1] = _dot(U[g - k - 1], top).scale(Fraction(1, 2))
        W[g - k] = -common - s.scale(Fraction(1, 2))
    return UVWScheme(g, tuple(U[k] for k in range(g)), tuple(V[k] for k in range(g)),
                     tuple(W[k] for k in range(g + 1)))


def substitute_rho(F: MPoly, g: int) -> RatFun:
    """F(rho, rho', rho'', ...) with T_i -> rho_g^(i)."""
    tower = rho_tower(g)
    nums, exps = {}, {}
    for v in F.used_vars():
        i = int(v[1:])
        nums[v] = tower.num(i)
        exps[v] = tower.exponent(i)
    return substitute_over_base(F, nums, exps, tower.tau)


@lru_cache(maxsize=None)
def solution_via_rho(g: int) -> MumfordTriple:
    S = uvw_scheme(g)
    u = tuple(substitute_rho(F, g) for F in S.U) + (RatFun(1),)
    v = tuple(substitute_rho(F, g) for F in S.V)
    w = tuple(substitute_rho(F, g) for F in S.W) + (RatFun(1),)
    return MumfordTriple(g, u, v, w)


def solution(g: int, route: str = "p") -> MumfordTriple:
    if route == "p":
        return inverse_phi(g)
    if route == "rho":
        return solution_via_rho(g)
    raise ValueError(f"unknown route {route!r}")


class ThetaDivisorError(PoleError):
    """Evaluation at a point where tau_g vanishes."""


def eval_at(family: MumfordTriple, a) -> MumfordTriple:
    """Evaluate a symbolic family at a rational point.

    Raises ThetaDivisorError (a PoleError) when a denominator vanishes there
    and that denominator is a power of tau_g; PoleError otherwise.
    """
    g = family.genus
    pt = as_avector(a, g).as_point()
    T = tau(g)

    def ev(c):
        if isinstance(c, (RatFun, MPoly)):
            try:
                return c.evaluate(pt)
            except PoleError as exc:
                if T.evaluate(pt) == 0:
                    raise ThetaDivisorError(T, pt) from exc
                raise
        return Fraction(c)

    return family.map(ev)


def denominator_exponent(c: RatFun, base: MPoly) -> int | None:
    """The k with den(c) equal to base^k up to a constant, else None."""
    d = c.den
    k = 0
    while not d.is_constant():
        try:
            d = d.exact_div(base)
        except ArithmeticError:
            return None
        k += 1
    return k


def a_point(g: int, coords) -> dict:
    return dict(zip(a_vars(g), coords))

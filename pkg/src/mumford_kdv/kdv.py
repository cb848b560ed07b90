"""KdV side of the construction: f = 2 rho_g and the Lax hierarchy.

Pseudo-differential operators are finite dictionaries ``order -> coefficient``
truncated below ``-depth``.  Each operator records ``exact_above``: every
coefficient at an order >= that bound is exact, and anything lost to
truncation sits strictly below it (``None`` means nothing was lost).

The Lax right-hand sides are differential polynomials in f, so they are
computed once on formal jet variables ``f0, f1, ...`` (with the derivation
``f_k -> f_{k+1}``) and then specialised to a concrete field by substituting
its a1-derivatives.
"""

from __future__ import annotations

from fractions import Fraction
from functools import lru_cache

from .chi import chi
from .exact import (MPoly, PolyMat, RatFun, a_vars, binomial, det, substitute,
                    substitute_over_base, to_ratfun)
from .solver import rho, rho_tower


class InsufficientDepthError(ArithmeticError):
    """A truncated term could reach the order that is being read off."""


class LaxResidueError(ArithmeticError):
    """The Lax commutator has a nonzero coefficient at positive order."""

    def __init__(self, residue: dict):
        super().__init__(f"positive-order residue at orders {sorted(residue)}")
        self.residue = residue


def _zero(c) -> bool:
    return c == 0


class PsiDO:
    """sum_k c_k d^k with -depth <= k <= top_order."""

    __slots__ = ("coeffs", "depth", "derive", "exact_above")

    def __init__(self, coeffs: dict, depth: int, derive, exact_above: int | None = None):
        self.coeffs = {k: c for k, c in coeffs.items() if k >= -depth and not _zero(c)}
        self.depth = depth
        self.derive = derive
        self.exact_above = exact_above

    @property
    def top_order(self) -> int | None:
        return max(self.coeffs) if self.coeffs else None

    def __getitem__(self, k: int):
        if k < -self.depth:
            raise IndexError(f"order {k} is below the tracked depth {-self.depth}")
        return self.coeffs.get(k, 0)

    def is_differential(self) -> bool:
        return all(k >= 0 for k in self.coeffs)

    def plus_part(self) -> "PsiDO":
        """Orders >= 0.  Requires those orders to be exact."""
        if self.exact_above is not None and self.exact_above > 0:
            raise InsufficientDepthError(
                f"differential part needs orders >= 0 exact, only orders >= {self.exact_above} are")
        return PsiDO({k: c for k, c in self.coeffs.items() if k >= 0}, self.depth, self.derive)

    def _like(self, coeffs, exact_above):
        return PsiDO(coeffs, self.depth, self.derive, exact_above)

    def __add__(self, other: "PsiDO") -> "PsiDO":
        out = dict(self.coeffs)
        for k, c in other.coeffs.items():
            out[k] = out[k] + c if k in out else c
        return self._like(out, _max_bound(self.exact_above, other.exact_above))

    def __neg__(self):
        return self._like({k: -c for k, c in self.coeffs.items()}, self.exact_above)

    def __sub__(self, other: "PsiDO") -> "PsiDO":
        return self + (-other)

    def __mul__(self, other: "PsiDO") -> "PsiDO":
        return psido_mul(self, other)

    def __eq__(self, other):
        if not isinstance(other, PsiDO):
            return NotImplemented
        return (self - other).coeffs == {}

    def __repr__(self):
        parts = [f"({c})*d^{k}" for k, c in sorted(self.coeffs.items(), reverse=True)]
        return "PsiDO(" + (" + ".join(parts) or "0") + ")"


def _max_bound(*bounds):
    vals = [b for b in bounds if b is not None]
    return max(vals) if vals else None


def psido_mul(P: PsiDO, Q: PsiDO) -> PsiDO:
    """Composition via d^k c = sum_i C(k, i) c^(i) d^(k-i), truncated to depth."""
    if P.depth != Q.depth:
        raise ValueError(f"depth mismatch: {P.depth} vs {Q.depth}")
    M = P.depth
    derive = P.derive
    out: dict = {}
    dropped = False
    derivs: dict = {}

    def nth(l, d, i):
        seq = derivs.setdefault(l, [d])
        while len(seq) <= i:
            seq.append(derive(seq[-1]))
        return seq[i]

    for k, c in P.coeffs.items():
        for l, d in Q.coeffs.items():
            i = 0
            while True:
                order = k + l - i
                if order < -M:
                    dropped = True
                    break
                if k >= 0 and i > k:
                    break
                di = nth(l, d, i)
                if not _zero(di):
                    term = c * di
                    b = binomial(k, i)
                    if b != 1:
                        term = term * b
                    out[order] = out[order] + term if order in out else term
                i += 1
    bounds = []
    if P.exact_above is not None and Q.top_order is not None:
        bounds.append(P.exact_above + Q.top_order)
    if Q.exact_above is not None and P.top_order is not None:
        bounds.append(Q.exact_above + P.top_order)
    if dropped:
        bounds.append(-M)
    return PsiDO(out, M, derive, _max_bound(*bounds))


# ---------------------------------------------------------------------------
# fields

def _jet_name(k: int) -> str:
    return f"f{k}"


def jet_derive(p: MPoly) -> MPoly:
    """Total derivative on jet variables: f_k -> f_{k+1}."""
    if not isinstance(p, MPoly):
        return MPoly.const(0)
    out = MPoly.const(0)
    for v in p.used_vars():
        out = out + p.diff(v) * MPoly.var(_jet_name(int(v[1:]) + 1))
    return out


def _a1_derive(c):
    if isinstance(c, (RatFun, MPoly)):
        return c.diff("a1")
    return Fraction(0)


class KdvField:
    """A potential f for L = d^2 + f, d = d/da1.

    ``genus`` is None for the formal jet field (f = f0)."""

    def __init__(self, genus: int | None, f, tower=None):
        self.genus = genus
        self.f = f
        self._tower = tower
        self._jets = [f]

    @classmethod
    def symbolic(cls) -> "KdvField":
        return cls(None, MPoly.var("f0"))

    @classmethod
    def of(cls, g: int, f) -> "KdvField":
        return cls(g, to_ratfun(f))

    @property
    def is_symbolic(self) -> bool:
        return self.genus is None

    def derive(self, c):
        return jet_derive(c) if self.is_symbolic else _a1_derive(c)

    def jet(self, k: int):
        """f^(k) as an element of the coefficient ring."""
        while len(self._jets) <= k:
            self._jets.append(self.derive(self._jets[-1]))
        return self._jets[k]

    def specialize(self, P: MPoly):
        """Evaluate a differential polynomial in f0, f1, ... at this field."""
        if self.is_symbolic:
            return P
        ks = [int(v[1:]) for v in P.used_vars()]
        if self._tower is not None:
            nums = {_jet_name(k): self._tower.num(k).scale(2) for k in ks}
            exps = {_jet_name(k): self._tower.exponent(k) for k in ks}
            return substitute_over_base(P, nums, exps, self._tower.tau)
        return to_ratfun(substitute(P, {_jet_name(k): self.jet(k) for k in ks}))

    def __repr__(self):
        return "KdvField(symbolic)" if self.is_symbolic else f"KdvField(g={self.genus}, f={self.f})"


@lru_cache(maxsize=None)
def bridge_field(g: int) -> KdvField:
    """f = 2 rho_g, with jets taken from the rho derivative tower."""
    return KdvField(g, rho(g).value * 2, rho_tower(g))


def lax_operator(field: KdvField, depth: int) -> PsiDO:
    return PsiDO({2: 1, 0: field.f}, depth, field.derive)


def psido_sqrt(field: KdvField, depth: int) -> PsiDO:
    """S = d + sum_{k>=0} e_k d^-k with S o S = d^2 + f through order 1 - depth."""
    if depth < 1:
        raise ValueError("depth must be at least 1")
    L = lax_operator(field, depth)
    coeffs = {1: 1}
    for n in range(depth + 1):
        S = PsiDO(coeffs, depth, field.derive)
        r = (psido_mul(S, S) - L)[1 - n]
        if not _zero(r):
            # e_n enters the order 1-n coefficient of S^2 as 2 e_n
            coeffs[-n] = -r * Fraction(1, 2)
    return PsiDO(coeffs, depth, field.derive, -depth)


def _power(L: PsiDO, n: int) -> PsiDO:
    out = PsiDO({0: 1}, L.depth, L.derive)
    for _ in range(n):
        out = psido_mul(out, L)
    return out


def half_power_plus(field: KdvField, i: int, depth: int) -> PsiDO:
    """[L^(i - 1/2)]_+ computed as the differential part of L^(i-1) o S."""
    S = psido_sqrt(field, depth)
    L = lax_operator(field, depth)
    return psido_mul(_power(L, i - 1), S).plus_part()


def _lax_commutator(field: KdvField, i: int, depth: int):
    B = half_power_plus(field, i, depth)
    L = lax_operator(field, depth)
    C = psido_mul(B, L) - psido_mul(L, B)
    residue = {k: c for k, c in C.coeffs.items() if k != 0}
    if residue:
        raise LaxResidueError(residue)
    return C[0]


@lru_cache(maxsize=None)
def lax_jet(i: int, depth: int | None = None) -> MPoly:
    """[L^(i-1/2)_+, L] as a differential polynomial in f0, f1, ..."""
    if i < 1:
        raise ValueError("flow index must be positive")
    return _lax_commutator(KdvField.symbolic(), i, 2 * i + 3 if depth is None else depth)


def lax_rhs(field: KdvField, i: int, depth: int | None = None):
    """Order-zero coefficient of [L^(i-1/2)_+, L] for the given field."""
    return field.specialize(lax_jet(i, depth))


def kdv_residue(g: int, i: int, depth: int | None = None) -> RatFun:
    """df/da_i - lax_rhs(f, i) for f = 2 rho_g, with df/da_i = 0 when i > g."""
    if i < 1:
        raise ValueError("flow index must be positive")
    field = bridge_field(g)
    rhs = to_ratfun(lax_rhs(field, i, depth))
    lhs = field.f.diff(f"a{i}") if i <= g else RatFun(0)
    return lhs - rhs


def kdv_check(g: int, i: int, depth: int | None = None) -> bool:
    return kdv_residue(g, i, depth).is_zero()


@lru_cache(maxsize=None)
def wronskian_tau(g: int) -> MPoly:
    """det of d^(j-1)/da1^(j-1) chi_{2g-2i+1}, i, j = 1..g."""
    if g < 1:
        raise ValueError("genus must be positive")
    rows = []
    for i in range(1, g + 1):
        row = [chi(2 * g - 2 * i + 1, g)]
        for _ in range(1, g):
            row.append(row[-1].diff("a1"))
        rows.append(row)
    return det(PolyMat.from_rows(rows)).with_vars(a_vars(g))


def wronskian_sign(g: int) -> int:
    return -1 if (g // 2) % 2 else 1


def log_second_derivative(p: MPoly) -> RatFun:
    """d^2/da1^2 log p."""
    p1 = p.diff("a1")
    return RatFun(p.diff("a1").diff("a1") * p - p1 * p1, p * p)


def genus_profile(g: int) -> RatFun:
    """2 rho_g at a2 = ... = ag = 0."""
    zeros = {v: 0 for v in a_vars(g)[1:]}
    return to_ratfun((rho(g).value * 2).subs(zeros))

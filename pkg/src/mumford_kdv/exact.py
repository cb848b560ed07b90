"""Exact arithmetic over Q: multivariate polynomials, rational functions and
small polynomial matrices.

Scalars are :class:`fractions.Fraction`.  Polynomials carry named variables;
binary operations unify variable sets by name, so polynomials in ``a1..ag``
mix freely with polynomials in ``x``, ``z`` or ``T0..Tn``.

The canonical monomial order is a weighted graded lexicographic order in
which ``a_i`` has weight ``2i-1`` (every other variable has weight 1); ties
are broken by plain lex on the exponent vector.  This is the grading under
which the tau functions are homogeneous, and it fixes the term order used by
the JSON encoding.
"""

from __future__ import annotations

import json
import re
from fractions import Fraction
from functools import lru_cache
from math import comb, gcd, lcm
from typing import Any, Iterable, Mapping, Sequence

Rat = Fraction

_NAME_RE = re.compile(r"^([A-Za-z_]+)(\d*)$")


class SingularMatrixError(ValueError):
    """Raised when a linear system has a vanishing determinant."""

    def __init__(self, determinant, message: str = "singular matrix"):
        super().__init__(f"{message}: determinant = {determinant}")
        self.determinant = determinant


class PoleError(ZeroDivisionError):
    """Raised when a rational function is evaluated on its polar locus."""

    def __init__(self, denominator, point):
        super().__init__(f"denominator {denominator} vanishes at {point}")
        self.denominator = denominator
        self.point = point


class NotDivisibleError(ArithmeticError):
    pass


# ---------------------------------------------------------------------------
# scalars

def as_rat(value) -> Fraction:
    """Coerce ints, Fractions and ``"p/q"`` strings to a Fraction."""
    if isinstance(value, Fraction):
        return value
    if isinstance(value, int):
        return Fraction(value)
    if isinstance(value, str):
        return Fraction(value.strip())
    if hasattr(value, "numerator") and hasattr(value, "denominator"):
        return Fraction(int(value.numerator), int(value.denominator))
    raise TypeError(f"cannot interpret {value!r} as an exact rational")


def rat_str(q: Fraction) -> str:
    return f"{q.numerator}/{q.denominator}"


# ---------------------------------------------------------------------------
# variable bookkeeping

@lru_cache(maxsize=None)
def _var_key(name: str):
    m = _NAME_RE.match(name)
    if not m:
        return (name, -1)
    prefix, idx = m.groups()
    return (prefix, int(idx) if idx else -1)


@lru_cache(maxsize=None)
def var_weight(name: str) -> int:
    prefix, idx = _var_key(name)
    if prefix == "a" and idx >= 1:
        return 2 * idx - 1
    return 1


def sort_vars(names: Iterable[str]) -> tuple:
    return tuple(sorted(set(names), key=_var_key))


@lru_cache(maxsize=4096)
def _union(v1: tuple, v2: tuple) -> tuple:
    return sort_vars(v1 + v2)


@lru_cache(maxsize=4096)
def _embedding(src: tuple, dst: tuple) -> tuple:
    return tuple(dst.index(v) for v in src)


def _remap(terms: dict, src: tuple, dst: tuple) -> dict:
    if src == dst:
        return terms
    pos = _embedding(src, dst)
    n = len(dst)
    out = {}
    for e, c in terms.items():
        new = [0] * n
        for i, k in zip(pos, e):
            new[i] = k
        out[tuple(new)] = c
    return out


@lru_cache(maxsize=4096)
def _weights(vars: tuple) -> tuple:
    return tuple(var_weight(v) for v in vars)


def _order_key(weights: tuple):
    def key(e):
        return (sum(w * k for w, k in zip(weights, e)), e)
    return key


# ---------------------------------------------------------------------------
# polynomials

class MPoly:
    """Sparse multivariate polynomial with Fraction coefficients.

    ``terms`` maps exponent tuples (aligned with ``vars``) to nonzero
    coefficients.  Instances are immutable by convention.
    """

    __slots__ = ("vars", "terms", "_hash")

    def __init__(self, vars: Sequence[str] = (), terms: Mapping | None = None):
        vars = tuple(vars)
        svars = sort_vars(vars)
        if len(svars) != len(vars):
            raise ValueError(f"duplicate variable names in {vars}")
        clean = {}
        for e, c in (terms or {}).items():
            e = tuple(e)
            if len(e) != len(vars):
                raise ValueError(f"exponent {e} does not match variables {vars}")
            if any(k < 0 for k in e):
                raise ValueError(f"negative exponent {e}")
            c = as_rat(c)
            if c:
                clean[e] = clean.get(e, Fraction(0)) + c
        clean = {e: c for e, c in clean.items() if c}
        self.vars = svars
        self.terms = _remap(clean, vars, svars)
        self._hash = None

    @classmethod
    def _raw(cls, vars: tuple, terms: dict) -> "MPoly":
        obj = object.__new__(cls)
        obj.vars = vars
        obj.terms = terms
        obj._hash = None
        return obj

    # -- constructors -----------------------------------------------------
    @classmethod
    def const(cls, c, vars: Sequence[str] = ()) -> "MPoly":
        vars = sort_vars(vars)
        c = as_rat(c)
        return cls._raw(vars, {(0,) * len(vars): c} if c else {})

    @classmethod
    def var(cls, name: str, vars: Sequence[str] = ()) -> "MPoly":
        vars = sort_vars(tuple(vars) + (name,))
        e = tuple(1 if v == name else 0 for v in vars)
        return cls._raw(vars, {e: Fraction(1)})

    @classmethod
    def monomial(cls, exps: Mapping[str, int], coeff=1) -> "MPoly":
        vars = sort_vars(exps)
        c = as_rat(coeff)
        return cls._raw(vars, {tuple(exps[v] for v in vars): c} if c else {})

    # -- basic queries ----------------------------------------------------
    def is_zero(self) -> bool:
        return not self.terms

    def is_constant(self) -> bool:
        return all(not any(e) for e in self.terms)

    def constant_value(self) -> Fraction:
        if not self.is_constant():
            raise ValueError("polynomial is not constant")
        for c in self.terms.values():
            return c
        return Fraction(0)

    def used_vars(self) -> tuple:
        used = [False] * len(self.vars)
        for e in self.terms:
            for i, k in enumerate(e):
                if k:
                    used[i] = True
        return tuple(v for v, u in zip(self.vars, used) if u)

    def trimmed(self) -> "MPoly":
        used = self.used_vars()
        if used == self.vars:
            return self
        keep = [self.vars.index(v) for v in used]
        return MPoly._raw(used, {tuple(e[i] for i in keep): c for e, c in self.terms.items()})

    def with_vars(self, vars: Sequence[str]) -> "MPoly":
        """Re-express over a superset of the current variables."""
        dst = sort_vars(tuple(vars) + self.vars)
        return MPoly._raw(dst, _remap(self.terms, self.vars, dst))

    def sorted_terms(self) -> list:
        """Terms in canonical order, leading term first."""
        key = _order_key(_weights(self.vars))
        return sorted(self.terms.items(), key=lambda t: key(t[0]), reverse=True)

    def leading_term(self):
        if not self.terms:
            raise ValueError("zero polynomial has no leading term")
        key = _order_key(_weights(self.vars))
        e = max(self.terms, key=key)
        return e, self.terms[e]

    def degree(self, var: str) -> int:
        if var not in self.vars:
            return 0 if self.terms else -1
        i = self.vars.index(var)
        return max((e[i] for e in self.terms), default=-1)

    def weighted_degrees(self, weights: Mapping[str, int] | None = None) -> set:
        w = [weights.get(v, 0) if weights is not None else var_weight(v) for v in self.vars]
        return {sum(a * k for a, k in zip(w, e)) for e in self.terms}

    def is_homogeneous(self, weight: int | None = None, weights: Mapping[str, int] | None = None) -> bool:
        degs = self.weighted_degrees(weights)
        if not degs:
            return True
        return len(degs) == 1 and (weight is None or degs == {weight})

    def coefficient(self, exps: Mapping[str, int]) -> "MPoly":
        """Coefficient of the monomial ``exps`` viewed as a polynomial in the
        remaining variables."""
        fixed = [i for i, v in enumerate(self.vars) if v in exps]
        want = {i: exps[self.vars[i]] for i in fixed}
        rest = tuple(v for v in self.vars if v not in exps)
        keep = [i for i, v in enumerate(self.vars) if v not in exps]
        out = {}
        for e, c in self.terms.items():
            if all(e[i] == k for i, k in want.items()):
                out[tuple(e[i] for i in keep)] = c
        return MPoly._raw(rest, out)

    def coefficients_in(self, var: str) -> dict:
        """Split into ``{power: coefficient MPoly}`` with respect to ``var``."""
        if var not in self.vars:
            return {0: self} if self.terms else {}
        i = self.vars.index(var)
        rest = self.vars[:i] + self.vars[i + 1:]
        out: dict = {}
        for e, c in self.terms.items():
            out.setdefault(e[i], {})[e[:i] + e[i + 1:]] = c
        return {k: MPoly._raw(rest, t) for k, t in out.items()}

    # -- coercion ---------------------------------------------------------
    @staticmethod
    def _coerce(other) -> "MPoly | None":
        if isinstance(other, MPoly):
            return other
        if isinstance(other, (int, Fraction)):
            return MPoly.const(other)
        return None

    def _aligned(self, other: "MPoly"):
        if self.vars == other.vars:
            return self.vars, self.terms, other.terms
        vars = _union(self.vars, other.vars)
        return vars, _remap(self.terms, self.vars, vars), _remap(other.terms, other.vars, vars)

    # -- ring operations --------------------------------------------------
    def __add__(self, other):
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        if not other.terms and set(other.vars) <= set(self.vars):
            return self
        vars, a, b = self._aligned(other)
        out = dict(a)
        for e, c in b.items():
            s = out.get(e)
            if s is None:
                out[e] = c
            else:
                s += c
                if s:
                    out[e] = s
                else:
                    del out[e]
        return MPoly._raw(vars, out)

    __radd__ = __add__

    def __neg__(self):
        return MPoly._raw(self.vars, {e: -c for e, c in self.terms.items()})

    def __pos__(self):
        return self

    def __sub__(self, other):
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other):
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        return other + (-self)

    def scale(self, c) -> "MPoly":
        c = as_rat(c)
        if not c:
            return MPoly._raw(self.vars, {})
        if c == 1:
            return self
        return MPoly._raw(self.vars, {e: v * c for e, v in self.terms.items()})

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            return self.scale(other)
        if not isinstance(other, MPoly):
            return NotImplemented
        vars, a, b = self._aligned(other)
        if len(a) > len(b):
            a, b = b, a
        out: dict = {}
        get = out.get
        for e1, c1 in a.items():
            for e2, c2 in b.items():
                e = tuple([x + y for x, y in zip(e1, e2)])
                s = get(e)
                out[e] = c1 * c2 if s is None else s + c1 * c2
        return MPoly._raw(vars, {e: c for e, c in out.items() if c})

    def __rmul__(self, other):
        if isinstance(other, (int, Fraction)):
            return self.scale(other)
        return NotImplemented

    def __pow__(self, n: int):
        if not isinstance(n, int) or n < 0:
            raise ValueError("polynomial powers must be non-negative integers")
        result = MPoly.const(1, self.vars)
        base = self
        while n:
            if n & 1:
                result = result * base
            n >>= 1
            if n:
                base = base * base
        return result

    def __truediv__(self, other):
        if isinstance(other, (int, Fraction)):
            return self.scale(Fraction(1) / as_rat(other))
        if isinstance(other, MPoly):
            return RatFun(self, other)
        return NotImplemented

    def __rtruediv__(self, other):
        if isinstance(other, (int, Fraction)):
            return RatFun(MPoly.const(other), self)
        return NotImplemented

    # -- equality ---------------------------------------------------------
    def __eq__(self, other):
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        if self.vars == other.vars:
            return self.terms == other.terms
        a, b = self.trimmed(), other.trimmed()
        return a.vars == b.vars and a.terms == b.terms

    def __hash__(self):
        if self._hash is None:
            t = self.trimmed()
            self._hash = hash((t.vars, frozenset(t.terms.items())))
        return self._hash

    def __bool__(self):
        return bool(self.terms)

    # -- calculus and evaluation ------------------------------------------
    def diff(self, var) -> "MPoly":
        """Formal partial derivative; an integer ``k`` stands for ``a{k}``."""
        if isinstance(var, int):
            var = f"a{var}"
        if var not in self.vars:
            return MPoly._raw(self.vars, {})
        i = self.vars.index(var)
        out = {}
        for e, c in self.terms.items():
            k = e[i]
            if k:
                out[e[:i] + (k - 1,) + e[i + 1:]] = c * k
        return MPoly._raw(self.vars, out)

    def evaluate(self, point: Mapping[str, Any]) -> Fraction:
        """Value at a point assigning a rational to every variable."""
        missing = [v for v in self.used_vars() if v not in point]
        if missing:
            raise ValueError(f"no value given for {missing}")
        vals = [as_rat(point[v]) if v in point else Fraction(0) for v in self.vars]
        total = Fraction(0)
        for e, c in self.terms.items():
            t = c
            for x, k in zip(vals, e):
                if k:
                    t *= x ** k
            total += t
        return total

    def subs(self, values: Mapping[str, Any]):
        """Substitute rationals, polynomials or rational functions for some
        variables.  Returns an MPoly unless a RatFun value is involved."""
        return substitute(self, values)

    # -- division ---------------------------------------------------------
    def exact_div(self, other: "MPoly") -> "MPoly":
        """Quotient of an exact division; raises NotDivisibleError otherwise."""
        other = self._coerce(other)
        if not other.terms:
            raise ZeroDivisionError("division by the zero polynomial")
        if other.is_constant():
            return self.scale(Fraction(1) / other.constant_value())
        vars, r, d = self._aligned(other)
        key = _order_key(_weights(vars))
        de = max(d, key=key)
        dc = d[de]
        rest = [(e, c) for e, c in d.items() if e != de]
        r = dict(r)
        q = {}
        while r:
            e = max(r, key=key)
            c = r.pop(e)
            shift = tuple(x - y for x, y in zip(e, de))
            if any(s < 0 for s in shift):
                raise NotDivisibleError(f"{self} is not divisible by {other}")
            m = c / dc
            q[shift] = m
            for f, fc in rest:
                t = tuple(x + y for x, y in zip(f, shift))
                s = r.get(t, 0) - m * fc
                if s:
                    r[t] = s
                else:
                    r.pop(t, None)
        return MPoly._raw(vars, q)

    def content(self) -> Fraction:
        """Positive rational content: self / content has coprime integer
        coefficients."""
        if not self.terms:
            return Fraction(0)
        num = 0
        den = 1
        for c in self.terms.values():
            num = gcd(num, c.numerator)
            den = lcm(den, c.denominator)
        return Fraction(num, den)

    def primitive(self) -> "MPoly":
        """Integer-coefficient primitive part with positive leading coefficient."""
        if not self.terms:
            return self
        c = self.content()
        if self.leading_term()[1] < 0:
            c = -c
        return self.scale(1 / c)

    # -- display ----------------------------------------------------------
    def __repr__(self):
        return f"MPoly({self})"

    def __str__(self):
        if not self.terms:
            return "0"
        parts = []
        for e, c in self.sorted_terms():
            mono = "*".join(v if k == 1 else f"{v}^{k}" for v, k in zip(self.vars, e) if k)
            sign = "-" if c < 0 else "+"
            a = abs(c)
            if mono:
                body = mono if a == 1 else f"{a}*{mono}"
            else:
                body = str(a)
            parts.append((sign, body))
        first_sign, first = parts[0]
        s = ("-" if first_sign == "-" else "") + first
        for sign, body in parts[1:]:
            s += f" {sign} {body}"
        return s


def poly_var(name: str) -> MPoly:
    return MPoly.var(name)


def a_vars(g: int) -> tuple:
    return tuple(f"a{i}" for i in range(1, g + 1))


def parse_poly(text: str, vars: Sequence[str] | None = None) -> MPoly:
    """Parse a polynomial written in ordinary notation (``a1^3/3 - a2``)."""
    import sympy

    expr = sympy.sympify(text.replace("^", "**"), rational=True)
    names = sorted({str(s) for s in expr.free_symbols} | set(vars or ()), key=_var_key)
    if not names:
        return MPoly.const(Fraction(str(expr)))
    syms = sympy.symbols(names)
    poly = sympy.Poly(expr, *syms, domain="QQ")
    return MPoly(names, {e: Fraction(int(c.p), int(c.q)) for e, c in poly.terms()})


# ---------------------------------------------------------------------------
# gcd: FLINT when available, sympy's sparse rings otherwise

try:
    import flint as _flint
except ImportError:  # pragma: no cover - exercised only without python-flint
    _flint = None


@lru_cache(maxsize=256)
def _flint_ctx(vars: tuple):
    return _flint.fmpq_mpoly_ctx.get(vars, "lex")


def _to_flint(p: MPoly, vars: tuple):
    terms = _remap(p.terms, p.vars, vars)
    return _flint_ctx(vars).from_dict(
        {e: _flint.fmpq(c.numerator, c.denominator) for e, c in terms.items()})


def _from_flint(elem, vars: tuple) -> MPoly:
    return MPoly._raw(vars, {tuple(int(k) for k in e): Fraction(int(c.p), int(c.q))
                             for e, c in elem.to_dict().items()})


@lru_cache(maxsize=256)
def _sympy_ring(vars: tuple):
    from sympy.polys.domains import QQ
    from sympy.polys.rings import ring

    return ring(list(vars), QQ)[0]


def _to_sympy(p: MPoly, vars: tuple):
    R = _sympy_ring(vars)
    dom = R.domain
    terms = _remap(p.terms, p.vars, vars)
    return R.from_dict({e: dom(c.numerator, c.denominator) for e, c in terms.items()})


def _from_sympy(elem, vars: tuple) -> MPoly:
    return MPoly._raw(vars, {e: Fraction(int(c.numerator), int(c.denominator))
                             for e, c in elem.items()})


def poly_cofactors(p: MPoly, q: MPoly):
    """Return ``(h, p/h, q/h)`` with ``h = gcd(p, q)``."""
    vars = _union(p.vars, q.vars)
    if not vars:
        return MPoly.const(1), p, q
    if _flint is not None:
        fp, fq = _to_flint(p, vars), _to_flint(q, vars)
        h = fp.gcd(fq)
        if h.is_zero():
            return _from_flint(h, vars), p, q
        return _from_flint(h, vars), _from_flint(fp / h, vars), _from_flint(fq / h, vars)
    h, cp, cq = _to_sympy(p, vars).cofactors(_to_sympy(q, vars))
    return _from_sympy(h, vars), _from_sympy(cp, vars), _from_sympy(cq, vars)


def poly_gcd(p: MPoly, q: MPoly) -> MPoly:
    return poly_cofactors(p, q)[0].primitive()


# ---------------------------------------------------------------------------
# rational functions

class RatFun:
    """Reduced quotient ``num/den`` of polynomials.

    Normal form: ``gcd(num, den) = 1`` and ``den`` has coprime integer
    coefficients with a positive leading coefficient.
    """

    __slots__ = ("num", "den")

    def __init__(self, num, den=1):
        num = _as_poly(num)
        den = _as_poly(den)
        if not den.terms:
            raise ZeroDivisionError("rational function with zero denominator")
        self.num, self.den = _reduce(num, den)

    @classmethod
    def _raw(cls, num: MPoly, den: MPoly) -> "RatFun":
        obj = object.__new__(cls)
        obj.num = num
        obj.den = den
        return obj

    @property
    def vars(self) -> tuple:
        return _union(self.num.vars, self.den.vars)

    def is_polynomial(self) -> bool:
        return self.den.is_constant()

    def as_poly(self) -> MPoly:
        if not self.is_polynomial():
            raise ValueError(f"{self} is not a polynomial")
        return self.num.scale(1 / self.den.constant_value())

    def is_zero(self) -> bool:
        return not self.num.terms

    @staticmethod
    def _coerce(other):
        if isinstance(other, RatFun):
            return other
        if isinstance(other, MPoly):
            return RatFun._raw(other, MPoly.const(1))
        if isinstance(other, (int, Fraction)):
            return RatFun._raw(MPoly.const(other), MPoly.const(1))
        return None

    def __add__(self, other):
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        if not other.num.terms:
            return self
        if not self.num.terms:
            return other
        if self.den == other.den:
            return RatFun(self.num + other.num, self.den)
        if self.den.is_constant() and other.den.is_constant():
            return RatFun(self.num * other.den + other.num * self.den, self.den * other.den)
        h, d1, d2 = poly_cofactors(self.den, other.den)
        return RatFun(self.num * d2 + other.num * d1, self.den * d2)

    __radd__ = __add__

    def __neg__(self):
        return RatFun._raw(-self.num, self.den)

    def __sub__(self, other):
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other):
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        return other + (-self)

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            if not other:
                return RatFun._raw(MPoly.const(0), MPoly.const(1))
            return RatFun._raw(self.num.scale(other), self.den)
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        if not self.num.terms or not other.num.terms:
            return RatFun._raw(MPoly.const(0), MPoly.const(1))
        # cross-cancel before multiplying to keep sizes down
        n1, d2 = self.num, other.den
        n2, d1 = other.num, self.den
        if not d2.is_constant() and not n1.is_constant():
            _, n1, d2 = poly_cofactors(n1, d2)
        if not d1.is_constant() and not n2.is_constant():
            _, n2, d1 = poly_cofactors(n2, d1)
        return RatFun._normalized(n1 * n2, d1 * d2)

    __rmul__ = __mul__

    def __truediv__(self, other):
        if isinstance(other, (int, Fraction)):
            return RatFun._raw(self.num.scale(1 / as_rat(other)), self.den)
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        if not other.num.terms:
            raise ZeroDivisionError("division by zero rational function")
        return self * RatFun._normalized(other.den, other.num)

    def __rtruediv__(self, other):
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        return other / self

    def __pow__(self, n: int):
        if n < 0:
            return RatFun._normalized(self.den ** (-n), self.num ** (-n))
        return RatFun._raw(self.num ** n, self.den ** n)

    @classmethod
    def _normalized(cls, num: MPoly, den: MPoly) -> "RatFun":
        """Sign/content normalization for an already coprime pair."""
        if not den.terms:
            raise ZeroDivisionError("zero denominator")
        if not num.terms:
            return cls._raw(MPoly.const(0), MPoly.const(1))
        c = den.content()
        if den.leading_term()[1] < 0:
            c = -c
        return cls._raw(num.scale(1 / c), den.scale(1 / c))

    def __eq__(self, other):
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        return self.num == other.num and self.den == other.den

    def __hash__(self):
        return hash((self.num, self.den))

    def __bool__(self):
        return bool(self.num.terms)

    def diff(self, var) -> "RatFun":
        """Partial derivative by the quotient rule, reduced."""
        dn = self.num.diff(var)
        dd = self.den.diff(var)
        if not dd.terms:
            return RatFun(dn, self.den)
        # d(n/d) = (n' d - n d') / d^2; divide through by gcd(d, d')
        h, d_red, dd_red = poly_cofactors(self.den, dd)
        return RatFun(dn * d_red - self.num * dd_red, self.den * d_red)

    def evaluate(self, point: Mapping[str, Any]) -> Fraction:
        d = self.den.evaluate(point)
        if not d:
            raise PoleError(self.den, dict(point))
        return self.num.evaluate(point) / d

    def subs(self, values: Mapping[str, Any]):
        n = substitute(self.num, values)
        d = substitute(self.den, values)
        if isinstance(d, (int, Fraction)) and not d:
            raise PoleError(self.den, dict(values))
        if isinstance(d, (MPoly, RatFun)) and not d:
            raise PoleError(self.den, dict(values))
        return _as_ratfun(n) / _as_ratfun(d)

    def __repr__(self):
        return f"RatFun({self})"

    def __str__(self):
        if self.den == 1:
            return str(self.num)
        return f"({self.num})/({self.den})"


def _as_poly(x) -> MPoly:
    if isinstance(x, MPoly):
        return x
    if isinstance(x, (int, Fraction, str)):
        return MPoly.const(as_rat(x))
    raise TypeError(f"cannot use {x!r} as a polynomial")


def _as_ratfun(x) -> RatFun:
    r = RatFun._coerce(x)
    if r is None:
        raise TypeError(f"cannot use {x!r} as a rational function")
    return r


def _reduce(num: MPoly, den: MPoly):
    if not num.terms:
        return MPoly.const(0), MPoly.const(1)
    if den.is_constant():
        c = den.constant_value()
        return num.scale(1 / c), MPoly.const(1)
    if not num.is_constant():
        _, num, den = poly_cofactors(num, den)
    c = den.content()
    if den.leading_term()[1] < 0:
        c = -c
    return num.scale(1 / c), den.scale(1 / c)


def to_ratfun(x) -> RatFun:
    return _as_ratfun(x)


def simplify(x):
    """Return an MPoly if the value is polynomial, else the RatFun."""
    if isinstance(x, RatFun) and x.is_polynomial():
        return x.as_poly()
    return x


# ---------------------------------------------------------------------------
# substitution

def diff(p, var):
    """d/d(var) of an MPoly or RatFun; ``var`` is a name or the index k of a_k."""
    return p.diff(var)


def substitute(p: MPoly, values: Mapping[str, Any]):
    """Substitute values (Fractions, MPoly, RatFun) for variables of ``p``.

    Terms that involve rational-function values are collected over a common
    denominator built from the distinct value denominators, so the result is
    reduced only once.
    """
    idx = [(i, v) for i, v in enumerate(p.vars) if v in values]
    if not idx:
        return p
    keep = [i for i, v in enumerate(p.vars) if v not in values]
    rest = tuple(p.vars[i] for i in keep)
    vals = {}
    has_ratfun = False
    for i, v in idx:
        x = values[v]
        if isinstance(x, (int, str)):
            x = as_rat(x)
        if isinstance(x, RatFun):
            if x.is_polynomial():
                x = x.as_poly()
            else:
                has_ratfun = True
        vals[i] = x
    if not has_ratfun:
        total = MPoly.const(0, rest)
        powers: dict = {}
        for e, c in p.terms.items():
            t = MPoly._raw(rest, {tuple(e[i] for i in keep): c})
            for i, _ in idx:
                k = e[i]
                if k:
                    key = (i, k)
                    if key not in powers:
                        powers[key] = vals[i] ** k
                    t = t * powers[key]
            total = total + t
        return total
    nums = {i: (x.num if isinstance(x, RatFun) else _as_poly(x)) for i, x in vals.items()}
    dens = {i: (x.den if isinstance(x, RatFun) else None) for i, x in vals.items()}
    maxexp = {i: max(e[i] for e in p.terms) for i in vals if dens[i] is not None}
    common = MPoly.const(1)
    for i, k in maxexp.items():
        common = common * dens[i] ** k
    total = MPoly.const(0, rest)
    powers = {}

    def power(base, i, k, tag):
        key = (tag, i, k)
        if key not in powers:
            powers[key] = base ** k
        return powers[key]

    for e, c in p.terms.items():
        t = MPoly._raw(rest, {tuple(e[i] for i in keep): c})
        for i in vals:
            k = e[i]
            if k:
                t = t * power(nums[i], i, k, "n")
            if dens[i] is not None and maxexp[i] - k:
                t = t * power(dens[i], i, maxexp[i] - k, "d")
        total = total + t
    return RatFun(total, common)


def substitute_over_base(p: MPoly, numerators: Mapping[str, MPoly],
                         exponents: Mapping[str, int], base: MPoly) -> RatFun:
    """Substitute ``var -> numerators[var] / base**exponents[var]``.

    All values share the denominator ``base``, so each term has denominator
    ``base**w`` for an integer ``w``; the sum is formed over the largest such
    power and reduced once.
    """
    idx = [i for i, v in enumerate(p.vars) if v in numerators]
    keep = [i for i, v in enumerate(p.vars) if v not in numerators]
    rest = tuple(p.vars[i] for i in keep)
    groups: dict = {}
    powers: dict = {}
    for e, c in p.terms.items():
        t = MPoly._raw(rest, {tuple(e[i] for i in keep): c})
        w = 0
        for i in idx:
            k = e[i]
            if k:
                v = p.vars[i]
                if (v, k) not in powers:
                    powers[(v, k)] = numerators[v] ** k
                t = t * powers[(v, k)]
                w += k * exponents[v]
        groups[w] = groups[w] + t if w in groups else t
    if not groups:
        return RatFun(MPoly.const(0))
    top = max(groups)
    total = MPoly.const(0)
    for w, t in groups.items():
        total = total + (t * base ** (top - w) if top - w else t)
    return reduce_over_base(total, base, top)


def reduce_over_base(num: MPoly, base: MPoly, power: int) -> RatFun:
    """Reduced form of ``num / base**power``: strip exact factors of ``base``
    first, then remove any remaining common factor by a gcd."""
    if not num.terms:
        return RatFun(MPoly.const(0))
    while power and not base.is_constant():
        try:
            num = num.exact_div(base)
        except NotDivisibleError:
            break
        power -= 1
    return RatFun(num, base ** power)


# ---------------------------------------------------------------------------
# JSON encoding

def poly_to_json(p: MPoly) -> dict:
    t = p.trimmed()
    return {"vars": list(t.vars),
            "terms": [[list(e), rat_str(c)] for e, c in t.sorted_terms()]}


def poly_from_json(obj: Mapping) -> MPoly:
    return MPoly(obj["vars"], {tuple(e): as_rat(c) for e, c in obj["terms"]})


def to_json(x) -> Any:
    """Canonical JSON-ready encoding of exact values."""
    if isinstance(x, MPoly):
        return poly_to_json(x)
    if isinstance(x, RatFun):
        return {"num": poly_to_json(x.num), "den": poly_to_json(x.den)}
    if isinstance(x, Fraction):
        return rat_str(x)
    if isinstance(x, bool) or x is None or isinstance(x, str):
        return x
    if isinstance(x, int):
        return x
    if isinstance(x, Mapping):
        return {str(k): to_json(v) for k, v in x.items()}
    if isinstance(x, (list, tuple)):
        return [to_json(v) for v in x]
    if hasattr(x, "to_json"):
        return x.to_json()
    raise TypeError(f"no canonical encoding for {type(x).__name__}")


def from_json(obj) -> Any:
    if isinstance(obj, Mapping):
        if set(obj) == {"vars", "terms"}:
            return poly_from_json(obj)
        if set(obj) == {"num", "den"}:
            return RatFun(poly_from_json(obj["num"]), poly_from_json(obj["den"]))
    raise ValueError("not an encoded polynomial or rational function")


def dumps(x) -> str:
    """Canonical JSON text; byte-stable for equal values."""
    return json.dumps(to_json(x), separators=(",", ":"), ensure_ascii=True)


# ---------------------------------------------------------------------------
# matrices

class PolyMat:
    """Dense row-major matrix whose entries are MPoly, RatFun or Fraction."""

    __slots__ = ("rows", "cols", "entries")

    def __init__(self, rows: int, cols: int, entries: Sequence):
        entries = tuple(entries)
        if len(entries) != rows * cols:
            raise ValueError(f"{rows}x{cols} matrix needs {rows * cols} entries, got {len(entries)}")
        self.rows = rows
        self.cols = cols
        self.entries = entries

    @classmethod
    def from_rows(cls, rows: Sequence[Sequence]) -> "PolyMat":
        rows = [list(r) for r in rows]
        ncols = len(rows[0]) if rows else 0
        if any(len(r) != ncols for r in rows):
            raise ValueError("ragged rows")
        return cls(len(rows), ncols, [x for r in rows for x in r])

    @classmethod
    def identity(cls, n: int) -> "PolyMat":
        return cls(n, n, [MPoly.const(1 if i == j else 0) for i in range(n) for j in range(n)])

    def __getitem__(self, ij):
        i, j = ij
        return self.entries[i * self.cols + j]

    def row(self, i: int) -> list:
        return list(self.entries[i * self.cols:(i + 1) * self.cols])

    def to_rows(self) -> list:
        return [self.row(i) for i in range(self.rows)]

    def submatrix(self, rows: Iterable[int], cols: Iterable[int]) -> "PolyMat":
        rows, cols = list(rows), list(cols)
        return PolyMat(len(rows), len(cols), [self[i, j] for i in rows for j in cols])

    def left_columns(self, k: int) -> "PolyMat":
        return self.submatrix(range(self.rows), range(k))

    def transpose(self) -> "PolyMat":
        return PolyMat(self.cols, self.rows, [self[i, j] for j in range(self.cols) for i in range(self.rows)])

    def map(self, fn) -> "PolyMat":
        return PolyMat(self.rows, self.cols, [fn(x) for x in self.entries])

    def evaluate(self, point: Mapping[str, Any]) -> "PolyMat":
        return self.map(lambda x: _eval_scalar(x, point))

    def __matmul__(self, other: "PolyMat") -> "PolyMat":
        if self.cols != other.rows:
            raise ValueError("dimension mismatch")
        out = []
        for i in range(self.rows):
            for j in range(other.cols):
                acc = 0
                for k in range(self.cols):
                    acc = acc + self[i, k] * other[k, j]
                out.append(acc)
        return PolyMat(self.rows, other.cols, out)

    def apply(self, vec: Sequence) -> list:
        if len(vec) != self.cols:
            raise ValueError("dimension mismatch")
        out = []
        for i in range(self.rows):
            acc = 0
            for j in range(self.cols):
                acc = acc + self[i, j] * vec[j]
            out.append(acc)
        return out

    def __eq__(self, other):
        if not isinstance(other, PolyMat):
            return NotImplemented
        return (self.rows, self.cols) == (other.rows, other.cols) and all(
            a == b for a, b in zip(self.entries, other.entries))

    def __repr__(self):
        return f"PolyMat({self.rows}x{self.cols}, {[str(x) for x in self.entries]})"


def _eval_scalar(x, point):
    if isinstance(x, (MPoly, RatFun)):
        return x.evaluate(point)
    return as_rat(x)


def _is_zero(x) -> bool:
    return not x


def _exquo(a, b):
    if isinstance(a, MPoly) and isinstance(b, MPoly):
        return a.exact_div(b)
    if isinstance(a, MPoly) and isinstance(b, (int, Fraction)):
        return a.scale(1 / as_rat(b))
    return a / b


def _cofactor_det(rows: list):
    n = len(rows)
    if n == 0:
        return MPoly.const(1)
    if n == 1:
        return rows[0][0]
    if n == 2:
        return rows[0][0] * rows[1][1] - rows[0][1] * rows[1][0]
    total = 0
    for j in range(n):
        a = rows[0][j]
        if _is_zero(a):
            continue
        minor = [r[:j] + r[j + 1:] for r in rows[1:]]
        term = a * _cofactor_det(minor)
        total = total + term if j % 2 == 0 else total - term
    return total


def _bareiss_det(rows: list):
    m = [list(r) for r in rows]
    n = len(m)
    sign = 1
    prev = MPoly.const(1)
    for k in range(n - 1):
        if _is_zero(m[k][k]):
            for r in range(k + 1, n):
                if not _is_zero(m[r][k]):
                    m[k], m[r] = m[r], m[k]
                    sign = -sign
                    break
            else:
                return MPoly.const(0)
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                m[i][j] = _exquo(m[i][j] * m[k][k] - m[i][k] * m[k][j], prev)
        prev = m[k][k]
    d = m[n - 1][n - 1]
    return d if sign > 0 else -d


CofactorLimit = 4


def det(M: PolyMat):
    """Exact determinant: cofactor expansion up to 4x4, fraction-free
    Bareiss elimination above."""
    if M.rows != M.cols:
        raise ValueError(f"determinant of a non-square {M.rows}x{M.cols} matrix")
    rows = M.to_rows()
    if M.rows <= CofactorLimit:
        d = _cofactor_det(rows)
    else:
        d = _bareiss_det(rows)
    if isinstance(d, int):
        d = MPoly.const(d)
    return d


def _rref(rows: list):
    """Reduced row echelon form over Q; returns (matrix, pivot columns)."""
    m = [[as_rat(x) for x in r] for r in rows]
    nrows = len(m)
    ncols = len(m[0]) if m else 0
    pivots = []
    r = 0
    for c in range(ncols):
        p = next((i for i in range(r, nrows) if m[i][c]), None)
        if p is None:
            continue
        m[r], m[p] = m[p], m[r]
        inv = 1 / m[r][c]
        m[r] = [x * inv for x in m[r]]
        for i in range(nrows):
            if i != r and m[i][c]:
                f = m[i][c]
                m[i] = [x - f * y for x, y in zip(m[i], m[r])]
        pivots.append(c)
        r += 1
        if r == nrows:
            break
    return m, pivots


def rank(M: PolyMat, point: Mapping[str, Any] | Sequence | None = None) -> int:
    """Rank over Q of ``M`` evaluated at ``point``."""
    N = M.evaluate(_point_mapping(point, M))
    return len(_rref(N.to_rows())[1])


def kernel_basis(M: PolyMat, point: Mapping[str, Any] | Sequence | None = None) -> list:
    """Basis of the right kernel of ``M`` evaluated at ``point``.

    ``point`` is a mapping from variable names to rationals, or a sequence
    read as ``(a1, a2, ...)``.
    """
    point = _point_mapping(point, M)
    N = M.evaluate(point)
    m, pivots = _rref(N.to_rows())
    free = [c for c in range(M.cols) if c not in pivots]
    basis = []
    for f in free:
        v = [Fraction(0)] * M.cols
        v[f] = Fraction(1)
        for r, pc in enumerate(pivots):
            v[pc] = -m[r][f]
        basis.append(tuple(v))
    return basis


def _point_mapping(point, M: PolyMat | None = None) -> dict:
    if point is None:
        return {}
    if isinstance(point, Mapping):
        return {k: as_rat(v) for k, v in point.items()}
    coords = [as_rat(x) for x in point]
    if M is not None:
        used = set()
        for x in M.entries:
            if isinstance(x, (MPoly, RatFun)):
                used.update(v for v in x.vars if _var_key(v)[0] == "a")
        if used and max(_var_key(v)[1] for v in used) > len(coords):
            raise ValueError(f"point has {len(coords)} coordinates, matrix uses {sort_vars(used)}")
    return {f"a{i}": c for i, c in enumerate(coords, 1)}


def solve_linear(M: PolyMat, b: Sequence, point: Mapping[str, Any] | Sequence | None = None) -> list:
    """Solve ``M x = b`` exactly.

    Symbolic mode (no ``point``) uses Cramer's rule with polynomial
    determinants and returns RatFun entries.  Numeric mode evaluates at
    ``point`` and returns Fractions.
    """
    if M.rows != M.cols:
        raise ValueError("solve_linear needs a square matrix")
    if len(b) != M.rows:
        raise ValueError("right-hand side has the wrong length")
    n = M.rows
    if point is not None:
        pt = _point_mapping(point, M)
        A = M.evaluate(pt).to_rows()
        rhs = [_eval_scalar(x, pt) for x in b]
        aug = [r + [y] for r, y in zip(A, rhs)]
        m, pivots = _rref(aug)
        if pivots[:n] != list(range(n)) or (pivots and pivots[-1] == n):
            raise SingularMatrixError(Fraction(0))
        return [m[i][n] for i in range(n)]
    d = det(M)
    if _is_zero(d):
        raise SingularMatrixError(d)
    rows = M.to_rows()
    sol = []
    for i in range(n):
        Mi = [r[:i] + [b[k]] + r[i + 1:] for k, r in enumerate(rows)]
        di = det(PolyMat.from_rows(Mi))
        sol.append(_as_ratfun(di) / _as_ratfun(d))
    return sol


def binomial(k: int, i: int) -> Fraction:
    """Generalized binomial coefficient C(k, i) for integer k and i >= 0."""
    if i < 0:
        return Fraction(0)
    if k >= 0:
        return Fraction(comb(k, i)) if i <= k else Fraction(0)
    num = 1
    for j in range(i):
        num *= k - j
    den = 1
    for j in range(2, i + 1):
        den *= j
    return Fraction(num, den)

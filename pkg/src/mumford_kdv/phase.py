"""The Mumford phase space M_g, its Poisson structure and the zero fiber.

A point of M_g is a triple of polynomials in ``x``

    u = x^g + u_{g-1} x^{g-1} + ... + u_0
    v = v_{g-1} x^{g-1} + ... + v_0
    w = x^{g+1} + w_g x^g + ... + w_0

stored as coefficient tuples, lowest degree first.  Coefficients may be
Fractions (a point) or RatFun values in ``a1..ag`` (a family of points).
Functions on M_g are polynomials in the 3g+1 coordinates ``u0.. v0.. w0..``.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from typing import Callable, Sequence

from .exact import MPoly, RatFun, as_rat

# ---------------------------------------------------------------------------
# univariate helpers, generic in the coefficient ring


def padd(p: Sequence, q: Sequence) -> list:
    n = max(len(p), len(q))
    return [(p[i] if i < len(p) else 0) + (q[i] if i < len(q) else 0) for i in range(n)]


def pscale(p: Sequence, c) -> list:
    return [c * x for x in p]


def pmul(p: Sequence, q: Sequence) -> list:
    if not p or not q:
        return []
    out = [0] * (len(p) + len(q) - 1)
    for i, a in enumerate(p):
        if not a:
            continue
        for j, b in enumerate(q):
            if b:
                out[i + j] = out[i + j] + a * b
    return out


def x_valuation(p: Sequence) -> float:
    """Largest m with x^m dividing p (infinite for the zero polynomial)."""
    for i, c in enumerate(p):
        if c:
            return i
    return float("inf")


# ---------------------------------------------------------------------------
# points


@dataclass(frozen=True)
class MumfordTriple:
    genus: int
    u: tuple
    v: tuple
    w: tuple

    def __post_init__(self):
        g = self.genus
        if g < 0:
            raise ValueError("genus must be non-negative")
        u, v, w = list(self.u), list(self.v), list(self.w)
        v = v + [0] * (g - len(v))
        if len(u) != g + 1 or u[g] != 1:
            raise ValueError(f"u must be monic of degree {g}")
        if len(v) != g:
            raise ValueError(f"v must have degree at most {g - 1}")
        if len(w) != g + 2 or w[g + 1] != 1:
            raise ValueError(f"w must be monic of degree {g + 1}")
        object.__setattr__(self, "u", tuple(u))
        object.__setattr__(self, "v", tuple(v))
        object.__setattr__(self, "w", tuple(w))

    @classmethod
    def from_point(cls, g: int, u, v, w) -> "MumfordTriple":
        """Build from rational coefficient lists (strings, ints or Fractions)."""
        return cls(g, tuple(as_rat(c) for c in u), tuple(as_rat(c) for c in v),
                   tuple(as_rat(c) for c in w))

    @classmethod
    def origin(cls, g: int) -> "MumfordTriple":
        return cls(g, (0,) * g + (1,), (0,) * g, (0,) * (g + 1) + (1,))

    def coordinates(self) -> dict:
        g = self.genus
        out = {f"u{i}": self.u[i] for i in range(g)}
        out.update({f"v{i}": self.v[i] for i in range(g)})
        out.update({f"w{i}": self.w[i] for i in range(g + 1)})
        return out

    def map(self, fn: Callable) -> "MumfordTriple":
        """Apply ``fn`` to every non-leading coefficient."""
        g = self.genus
        return MumfordTriple(g, tuple(fn(c) for c in self.u[:g]) + (1,),
                             tuple(fn(c) for c in self.v),
                             tuple(fn(c) for c in self.w[:g + 1]) + (1,))

    def matrix(self):
        """l(x) = [[v, w], [u, -v]] as coefficient lists."""
        return [[list(self.v), list(self.w)], [list(self.u), pscale(self.v, -1)]]

    def to_json(self):
        from .exact import to_json
        return {"genus": self.genus, "u": to_json(list(self.u)),
                "v": to_json(list(self.v)), "w": to_json(list(self.w))}

    def __str__(self):
        def show(p):
            terms = []
            for i in reversed(range(len(p))):
                c = p[i]
                if not c:
                    continue
                mono = "" if i == 0 else ("x" if i == 1 else f"x^{i}")
                cs = str(c)
                if mono and c == 1:
                    terms.append(mono)
                elif mono:
                    terms.append(f"({cs})*{mono}")
                else:
                    terms.append(f"({cs})")
            return " + ".join(terms) or "0"
        return f"u = {show(self.u)}\nv = {show(self.v)}\nw = {show(self.w)}"


@dataclass(frozen=True)
class SpectralPoly:
    """h(x) = x^(2g+1) + h_2g x^2g + ... + h_0; ``coeffs`` is (h_0..h_2g)."""

    genus: int
    coeffs: tuple

    @property
    def poly(self) -> list:
        return list(self.coeffs) + [1]

    def is_zero_fiber(self) -> bool:
        return all(not c for c in self.coeffs)

    def to_json(self):
        from .exact import to_json
        return {"genus": self.genus, "h": to_json(list(self.coeffs))}


def momentum(l: MumfordTriple) -> SpectralPoly:
    """-det l(x) = u w + v^2."""
    g = l.genus
    h = padd(pmul(l.u, l.w), pmul(l.v, l.v))
    h = h + [0] * (2 * g + 2 - len(h))
    if h[2 * g + 1] != 1 or any(h[2 * g + 2:]):
        raise AssertionError("momentum is not monic of degree 2g+1")
    return SpectralPoly(g, tuple(h[:2 * g + 1]))


def on_zero_fiber(l: MumfordTriple) -> bool:
    return momentum(l).is_zero_fiber()


def embed(l: MumfordTriple) -> MumfordTriple:
    """Multiply every entry by x: M_{g-1}(0) -> M_g(0)."""
    return MumfordTriple(l.genus + 1, (0,) + tuple(l.u), (0,) + tuple(l.v), (0,) + tuple(l.w))


def stratum(l: MumfordTriple) -> int:
    """Dimension k of the stratum containing ``l``: k = g - m where x^m is
    the largest power of x dividing u, v and w.  k = g means l(0) != 0."""
    if not on_zero_fiber(l):
        raise ValueError("point is not on the zero fiber u w + v^2 = x^(2g+1)")
    m = min(x_valuation(l.u), x_valuation(l.v), x_valuation(l.w))
    return l.genus - int(m)


def is_regular(l: MumfordTriple) -> bool:
    return stratum(l) == l.genus


# ---------------------------------------------------------------------------
# functions on phase space


def coordinate_names(g: int) -> tuple:
    return (tuple(f"u{i}" for i in range(g)) + tuple(f"v{i}" for i in range(g))
            + tuple(f"w{i}" for i in range(g + 1)))


@dataclass(frozen=True)
class PhaseFunction:
    genus: int
    expr: MPoly = field(compare=True)

    def __post_init__(self):
        expr = self.expr
        if not isinstance(expr, MPoly):
            expr = MPoly.const(as_rat(expr))
        allowed = set(coordinate_names(self.genus))
        extra = set(expr.used_vars()) - allowed
        if extra:
            raise ValueError(f"{sorted(extra)} are not genus-{self.genus} coordinates")
        object.__setattr__(self, "expr", expr)

    @classmethod
    def coordinate(cls, g: int, name: str) -> "PhaseFunction":
        return cls(g, MPoly.var(name))

    def _other(self, other):
        if isinstance(other, PhaseFunction):
            if other.genus != self.genus:
                raise ValueError("genus mismatch")
            return other.expr
        if isinstance(other, (int, Fraction, MPoly)):
            return other
        return None

    def __add__(self, other):
        o = self._other(other)
        return NotImplemented if o is None else PhaseFunction(self.genus, self.expr + o)

    __radd__ = __add__

    def __sub__(self, other):
        o = self._other(other)
        return NotImplemented if o is None else PhaseFunction(self.genus, self.expr - o)

    def __neg__(self):
        return PhaseFunction(self.genus, -self.expr)

    def __mul__(self, other):
        o = self._other(other)
        return NotImplemented if o is None else PhaseFunction(self.genus, self.expr * o)

    __rmul__ = __mul__

    def __eq__(self, other):
        if isinstance(other, PhaseFunction):
            return self.genus == other.genus and self.expr == other.expr
        o = self._other(other)
        return NotImplemented if o is None else self.expr == o

    def __hash__(self):
        return hash((self.genus, self.expr))

    def __bool__(self):
        return bool(self.expr)

    def evaluate(self, l: MumfordTriple):
        if l.genus != self.genus:
            raise ValueError("genus mismatch")
        return self.expr.evaluate(l.coordinates())

    def __str__(self):
        return str(self.expr)


def _gen_poly(g: int, letter: str, degree: int, monic: bool) -> MPoly:
    """letter(x) as a polynomial in x and the coordinates."""
    x = MPoly.var("x")
    p = x ** degree if monic else MPoly.const(0)
    for i in range(degree if monic else g):
        p = p + MPoly.var(f"{letter}{i}") * x ** i
    return p


@lru_cache(maxsize=None)
def generating_polys(g: int) -> tuple:
    return _gen_poly(g, "u", g, True), _gen_poly(g, "v", g, False), _gen_poly(g, "w", g + 1, True)


def _at_z(p: MPoly) -> MPoly:
    return p.subs({"x": MPoly.var("z")}) if "x" in p.vars else p


def _div_x_minus_z(p: MPoly) -> MPoly:
    return p.exact_div(MPoly.var("x") - MPoly.var("z"))


@lru_cache(maxsize=None)
def bracket_table(g: int) -> dict:
    """Brackets {p, q} of coordinate generators, read off from the
    generating identities for {u(x), v(z)}, {u(x), w(z)}, {v(x), w(z)} and
    {w(x), w(z)}.  Missing pairs bracket to zero."""
    U, V, W = generating_polys(g)
    Uz, Vz, Wz = _at_z(U), _at_z(V), _at_z(W)
    identities = {
        ("u", "v"): _div_x_minus_z(U - Uz),
        ("u", "w"): _div_x_minus_z(V - Vz).scale(-2),
        ("v", "w"): _div_x_minus_z(W - Wz) - U,
        ("w", "w"): (V - Vz).scale(2),
    }
    n = {"u": g, "v": g, "w": g + 1}
    table: dict = {}
    for (p, q), gen in identities.items():
        by_x = gen.coefficients_in("x")
        for i, cx in by_x.items():
            for j, c in cx.coefficients_in("z").items():
                if not c:
                    continue
                if i >= n[p] or j >= n[q]:
                    # brackets with the constant leading coefficients vanish
                    raise AssertionError(f"nonzero bracket with a leading coefficient: {p}{i}, {q}{j}")
                key = (f"{p}{i}", f"{q}{j}")
                if key in table and table[key] != c:
                    raise AssertionError(f"inconsistent bracket {key}")
                table[key] = c
                rkey = (key[1], key[0])
                if rkey in table and table[rkey] != -c:
                    raise AssertionError(f"bracket table is not antisymmetric at {key}")
                table[rkey] = -c
    return table


def poisson_bracket(F: PhaseFunction, G: PhaseFunction) -> PhaseFunction:
    """{F, G} = sum over coordinates p, q of dF/dp dG/dq {p, q}."""
    if F.genus != G.genus:
        raise ValueError(f"genus mismatch: {F.genus} vs {G.genus}")
    g = F.genus
    table = bracket_table(g)
    dF = {p: F.expr.diff(p) for p in F.expr.used_vars()}
    dG = {q: G.expr.diff(q) for q in G.expr.used_vars()}
    total = MPoly.const(0)
    for p, fp in dF.items():
        for q, gq in dG.items():
            c = table.get((p, q))
            if c is not None:
                total = total + fp * gq * c
    return PhaseFunction(g, total)


@lru_cache(maxsize=None)
def hamiltonians(g: int) -> tuple:
    """(h_0, ..., h_2g) as phase functions: coefficients of u w + v^2."""
    U, V, W = generating_polys(g)
    H = (U * W + V * V).coefficients_in("x")
    return tuple(PhaseFunction(g, H.get(i, MPoly.const(0))) for i in range(2 * g + 1))


def hamiltonian_vf(i: int, F: PhaseFunction) -> PhaseFunction:
    """X_i F = {F, h_{g-i}} for 1 <= i <= g."""
    g = F.genus
    if not 1 <= i <= g:
        raise ValueError(f"vector field index {i} outside 1..{g}")
    return poisson_bracket(F, hamiltonians(g)[g - i])


@lru_cache(maxsize=None)
def vector_field(g: int, i: int) -> dict:
    """Components X_i(c) for every coordinate c."""
    return {c: hamiltonian_vf(i, PhaseFunction.coordinate(g, c)) for c in coordinate_names(g)}


def vector_field_at(i: int, l: MumfordTriple) -> dict:
    """Components of X_i at the point ``l``, keyed by coordinate name."""
    return {c: F.evaluate(l) for c, F in vector_field(l.genus, i).items()}


@lru_cache(maxsize=None)
def time_evolution(g: int) -> tuple:
    """Right-hand sides of D(z)u(x), D(z)v(x), D(z)w(x) as polynomials in
    x, z and the coordinates."""
    U, V, W = generating_polys(g)
    Uz, Vz, Wz = _at_z(U), _at_z(V), _at_z(W)
    du = _div_x_minus_z(U * Vz - V * Uz).scale(2)
    dv = _div_x_minus_z(W * Uz - U * Wz) - U * Uz
    dw = (_div_x_minus_z(V * Wz - W * Vz) + V * Uz).scale(2)
    return du, dv, dw


def time_evolution_mismatches(g: int) -> list:
    """Compare X_{g-i} applied to each coordinate with the coefficient of
    z^i in the corresponding D(z) identity; returns the mismatching cases."""
    bad = []
    for letter, rhs, count in zip("uvw", time_evolution(g), (g, g, g + 1)):
        by_x = rhs.coefficients_in("x")
        for a in range(count):
            cz = by_x.get(a, MPoly.const(0)).coefficients_in("z")
            for i in range(g):
                expected = cz.get(i, MPoly.const(0))
                got = hamiltonian_vf(g - i, PhaseFunction.coordinate(g, f"{letter}{a}")).expr
                if got != expected:
                    bad.append((f"{letter}{a}", g - i, got, expected))
        # no z-power beyond g-1 and no x-power beyond the coordinate range
        for a, cx in by_x.items():
            if a >= count and cx:
                bad.append((f"{letter}{a}", None, MPoly.const(0), cx))
            for i, c in cx.coefficients_in("z").items():
                if i >= g and c:
                    bad.append((f"{letter}{a}", f"z^{i}", MPoly.const(0), c))
    return bad


# ---------------------------------------------------------------------------
# D(z) identities on a family of points


def _bi_outer(p: Sequence, q: Sequence) -> dict:
    """p(x) q(z) as {(i, j): coeff}."""
    out = {}
    for i, a in enumerate(p):
        if not a:
            continue
        for j, b in enumerate(q):
            if b:
                out[(i, j)] = a * b
    return out


def _bi_add(p: dict, q: dict, sign: int = 1) -> dict:
    out = dict(p)
    for k, c in q.items():
        out[k] = out[k] + c * sign if k in out else c * sign
    return {k: c for k, c in out.items() if c}


def _bi_scale(p: dict, c) -> dict:
    return {k: v * c for k, v in p.items() if v}


def divide_by_x_minus_z(p: dict):
    """Divide a polynomial in x, z by (x - z); returns (quotient, remainder)
    with the remainder as a polynomial {j: coeff} in z alone."""
    if not p:
        return {}, {}
    rows: dict = {}
    for (i, j), c in p.items():
        rows.setdefault(i, {})[j] = c
    n = max(rows)
    quotient: dict = {}
    carry: dict = {}  # Q_k as {j: coeff}
    for k in range(n, 0, -1):
        # Q_{k-1} = C_k + z * Q_k
        row = dict(rows.get(k, {}))
        for j, c in carry.items():
            row[j + 1] = row[j + 1] + c if j + 1 in row else c
        row = {j: c for j, c in row.items() if c}
        for j, c in row.items():
            quotient[(k - 1, j)] = c
        carry = row
    rem = dict(rows.get(0, {}))
    for j, c in carry.items():
        rem[j + 1] = rem[j + 1] + c if j + 1 in rem else c
    rem = {j: c for j, c in rem.items() if c}
    return quotient, rem


class DivisibilityError(ArithmeticError):
    def __init__(self, name, remainder):
        super().__init__(f"numerator of {name} is not divisible by (x - z); remainder {remainder}")
        self.remainder = remainder


@dataclass
class DzCheck:
    ok: bool
    residues: dict

    def __bool__(self):
        return self.ok


def _partial(i: int):
    def d(c):
        if isinstance(c, (MPoly, RatFun)):
            return c.diff(f"a{i}")
        return 0
    return d


def dz_identity_check(g: int, family: MumfordTriple, flow_map: Callable | None = None) -> DzCheck:
    """Check the three D(z) identities on a family of points, with
    D(z) = sum_{i=0}^{g-1} z^i flow_map(g - i).

    ``flow_map(k)`` returns a derivation acting on coefficients; by default
    the partial derivative in ``a_k``.  The residues LHS - RHS are returned
    per identity; all must vanish.
    """
    if family.genus != g:
        raise ValueError("genus mismatch")
    flow_map = flow_map or _partial
    u, v, w = list(family.u), list(family.v), list(family.w)

    def quotient(name, num):
        q, r = divide_by_x_minus_z(num)
        if r:
            raise DivisibilityError(name, r)
        return q

    rhs_u = _bi_scale(quotient("D(z)u", _bi_add(_bi_outer(u, v), _bi_outer(v, u), -1)), 2)
    rhs_v = _bi_add(quotient("D(z)v", _bi_add(_bi_outer(w, u), _bi_outer(u, w), -1)), _bi_outer(u, u), -1)
    rhs_w = _bi_scale(_bi_add(quotient("D(z)w", _bi_add(_bi_outer(v, w), _bi_outer(w, v), -1)),
                              _bi_outer(v, u)), 2)

    def lhs(p):
        out = {}
        for i in range(g):
            d = flow_map(g - i)
            for k, c in enumerate(p):
                dc = d(c)
                if dc:
                    out[(k, i)] = dc
        return out

    residues = {}
    for name, p, rhs in (("u", u, rhs_u), ("v", v, rhs_v), ("w", w, rhs_w)):
        res = _bi_add(lhs(p), rhs, -1)
        if res:
            residues[name] = res
    return DzCheck(not residues, residues)

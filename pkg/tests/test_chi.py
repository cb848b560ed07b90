import threading
from fractions import Fraction

import pytest
import sympy
from hypothesis import given, strategies as st

from mumford_kdv.chi import chi, chi_table, truncated_exponential
from mumford_kdv.exact import MPoly, a_vars, parse_poly
from strategies import rats

P = parse_poly


def series_oracle(N, g):
    """Coefficients of exp(sum a_i t^(2i-1)) by multiplying truncated
    exponential series with sympy, independent of the recurrence."""
    t = sympy.Symbol("t")
    syms = sympy.symbols(a_vars(g))
    prod = sympy.Integer(1)
    for i, a in enumerate(syms, 1):
        e = sum((a * t ** (2 * i - 1)) ** k / sympy.factorial(k) for k in range(N + 1))
        prod = sympy.expand(prod * e)
    poly = sympy.Poly(prod, t)
    return [sympy.expand(poly.coeff_monomial(t ** n)) for n in range(N + 1)]


def as_sympy(p: MPoly):
    expr = sympy.Integer(0)
    for e, c in p.terms.items():
        term = sympy.Rational(c.numerator, c.denominator)
        for v, k in zip(p.vars, e):
            term *= sympy.Symbol(v) ** k
        expr += term
    return sympy.expand(expr)


def test_chi3_and_negative_indices():
    assert chi(3, 2) == P("a1^3/6 + a2")
    assert chi(-1, 3) == 0
    assert chi(0, 1) == 1


def test_chi4_matches_series_product():
    assert chi(4, 2) == P("a1^4/24 + a1*a2")
    assert as_sympy(chi(4, 2)) == series_oracle(4, 2)[4]


def test_table_examples():
    assert chi_table(0, 3).series(1) == [MPoly.const(1)]
    assert chi_table(2, 1).series(3) == [1, P("a1"), P("a1^2/2")]
    assert chi_table(5, 2)[5] == P("a1^5/120 + a1^2*a2/2")


@pytest.mark.parametrize("g", [1, 2, 3])
def test_recurrence_against_series_oracle(g):
    N = 2 * g + 3
    oracle = series_oracle(N, g)
    table = chi_table(N, g)
    for n in range(N + 1):
        assert as_sympy(table[n]) == oracle[n]


@pytest.mark.parametrize("g", range(1, 6))
def test_derivative_shift(g):
    N = 2 * g + 2
    table = chi_table(N, g)
    for j in range(N + 1):
        for k in range(1, g + 1):
            assert table[j].diff(f"a{k}") == table[j - 2 * k + 1]


@pytest.mark.parametrize("g", range(1, 5))
def test_iterated_a1_derivative(g):
    table = chi_table(2 * g + 2, g)
    for j in range(2 * g + 3):
        for k in range(1, g + 1):
            d = table[j]
            for _ in range(2 * k - 1):
                d = d.diff("a1")
            assert d == table[j].diff(f"a{k}")


@pytest.mark.parametrize("g", range(1, 5))
def test_weight_homogeneity_and_support(g):
    for n in range(1, 2 * g + 3):
        c = chi(n, g)
        assert c.is_homogeneous(n)
        allowed = {f"a{i}" for i in range(1, min(g, (n + 1) // 2) + 1)}
        assert set(c.used_vars()) <= allowed


@given(st.integers(1, 3), st.lists(rats, min_size=6, max_size=6))
def test_cauchy_product(g, vals):
    a = {f"a{i}": vals[i - 1] for i in range(1, g + 1)}
    b = {f"a{i}": vals[i + 2] for i in range(1, g + 1)}
    s = {k: a[k] + b[k] for k in a}
    N = 2 * g + 1
    table = chi_table(N, g)
    for n in range(N + 1):
        lhs = sum((table[i].evaluate(a) * table[n - i].evaluate(b) for i in range(n + 1)), Fraction(0))
        assert lhs == table[n].evaluate(s)


def test_truncated_exponential_length():
    assert len(truncated_exponential(3)) == 6


def test_concurrent_growth_is_consistent():
    results = []

    def work():
        results.append(tuple(chi_table(14, 4).entries))

    threads = [threading.Thread(target=work) for _ in range(8)]
    for t in threads:
        t.start()
    for t in threads:
        t.join()
    assert len(set(results)) == 1


def test_invalid_genus():
    with pytest.raises(ValueError):
        chi(2, 0)
    with pytest.raises(ValueError):
        chi_table(-1, 2)

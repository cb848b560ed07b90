from fractions import Fraction

from hypothesis import strategies as st

from mumford_kdv.exact import MPoly, PolyMat, RatFun

VARS = ("a1", "a2", "a3")

rats = st.builds(Fraction, st.integers(-9, 9), st.integers(1, 6))
nonzero_rats = rats.filter(bool)


@st.composite
def polys(draw, vars=VARS, max_terms=4, max_deg=3):
    n = draw(st.integers(0, max_terms))
    terms = {}
    for _ in range(n):
        e = tuple(draw(st.integers(0, max_deg)) for _ in vars)
        terms[e] = draw(nonzero_rats)
    return MPoly(vars, terms)


nonzero_polys = polys().filter(lambda p: not p.is_zero())


@st.composite
def ratfuns(draw):
    return RatFun(draw(polys()), draw(nonzero_polys))


@st.composite
def polymats(draw, n, vars=("a1", "a2"), max_terms=2, max_deg=2):
    return PolyMat(n, n, [draw(polys(vars, max_terms, max_deg)) for _ in range(n * n)])


def points(vars=VARS):
    return st.fixed_dictionaries({v: rats for v in vars})

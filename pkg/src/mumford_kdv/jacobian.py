"""Coordinates on the generalized Jacobian of y^2 = x^(2g+1).

A point of the Jacobian is an :class:`AVector` ``(a1, ..., ag)``.  The
matrices built from the chi table answer the questions asked of such a
point: whether it lies on the theta divisor (``tau_g = 0``), whether the
twisted sheaf has sections, and whether it is hit by an Abel-Jacobi map.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Iterable, Sequence

from .chi import chi_table
from .exact import MPoly, PolyMat, a_vars, as_rat, det, kernel_basis


class _Infinity:
    _instance = None

    def __new__(cls):
        if cls._instance is None:
            cls._instance = super().__new__(cls)
        return cls._instance

    def __repr__(self):
        return "INFINITY"


INFINITY = _Infinity()


@dataclass(frozen=True)
class AVector:
    genus: int
    coords: tuple

    def __post_init__(self):
        coords = tuple(as_rat(c) for c in self.coords)
        if len(coords) != self.genus:
            raise ValueError(f"genus {self.genus} point needs {self.genus} coordinates, got {len(coords)}")
        object.__setattr__(self, "coords", coords)

    @classmethod
    def of(cls, coords: Iterable) -> "AVector":
        coords = tuple(coords)
        return cls(len(coords), coords)

    def as_point(self) -> dict:
        return {f"a{i}": c for i, c in enumerate(self.coords, 1)}

    def __iter__(self):
        return iter(self.coords)

    def __getitem__(self, i):
        return self.coords[i]

    def __len__(self):
        return self.genus


def as_avector(a, g: int | None = None) -> AVector:
    if isinstance(a, AVector):
        v = a
    elif isinstance(a, dict):
        n = g if g is not None else len(a)
        v = AVector(n, tuple(a.get(f"a{i}", 0) for i in range(1, n + 1)))
    else:
        v = AVector.of(a)
    if g is not None and v.genus != g:
        raise ValueError(f"expected a genus {g} point, got {v.genus} coordinates")
    return v


@dataclass(frozen=True)
class DivisorPoints:
    """Multiset of points alpha_k on P^1 minus the origin; ``INFINITY``
    marks the point at infinity."""

    alphas: tuple

    def __post_init__(self):
        alphas = tuple(a if a is INFINITY else as_rat(a) for a in self.alphas)
        if any(a is not INFINITY and a == 0 for a in alphas):
            raise ValueError("divisor points must avoid the singular point (alpha = 0)")
        object.__setattr__(self, "alphas", alphas)

    def __len__(self):
        return len(self.alphas)

    def finite(self) -> list:
        return [a for a in self.alphas if a is not INFINITY]


@dataclass(frozen=True)
class XMatrices:
    genus: int
    X2g: PolyMat
    Xbar: PolyMat
    A: PolyMat
    B: PolyMat
    phi: tuple

    def X(self, k: int) -> PolyMat:
        """The g x k matrix of the first ``k`` columns of X_{2g}."""
        if not 0 <= k <= 2 * self.genus:
            raise ValueError(f"k must lie in 0..{2 * self.genus}")
        return self.X2g.left_columns(k)

    @property
    def Xbar_g(self) -> PolyMat:
        g = self.genus
        return self.Xbar.submatrix(range(g, 2 * g), range(g))


@lru_cache(maxsize=None)
def build_X(g: int) -> XMatrices:
    if g < 1:
        raise ValueError("genus must be positive")
    chis = chi_table(2 * g, g)
    # 1-based index formulas, shifted to 0-based storage
    X2g = PolyMat(g, 2 * g, [chis[2 * i - j] for i in range(1, g + 1) for j in range(1, 2 * g + 1)])
    Xbar = PolyMat(2 * g, g, [chis[i - 2 * j + 1] for i in range(1, 2 * g + 1) for j in range(1, g + 1)])
    A = PolyMat(g + 1, g, [chis[i - 2 * j + 1] for i in range(1, g + 2) for j in range(1, g + 1)])
    B = PolyMat(g - 1, g - 1, [chis[i - 2 * j + g] for i in range(1, g) for j in range(1, g)])
    phi = tuple(chis[i + g] for i in range(1, g))
    return XMatrices(g, X2g, Xbar, A, B, phi)


@lru_cache(maxsize=None)
def tau(g: int) -> MPoly:
    """tau_g = det of the last g rows of X-bar."""
    return det(build_X(g).Xbar_g).with_vars(a_vars(g))


def theta_contains(a, g: int | None = None) -> bool:
    a = as_avector(a, g)
    return tau(a.genus).evaluate(a.as_point()) == 0


def _check_k(k: int, g: int):
    if not 0 <= k <= 2 * g - 1:
        raise ValueError(f"k = {k} outside 0..{2 * g - 1}")


def x_kernel(k: int, a, g: int | None = None) -> list:
    """Kernel of X_{k+1} at ``a``; vectors are (b_0, ..., b_k)."""
    a = as_avector(a, g)
    _check_k(k, a.genus)
    return kernel_basis(build_X(a.genus).X(k + 1), a.as_point())


def h0_nonzero(k: int, a, g: int | None = None) -> bool:
    """Whether L(k) has a nonzero section, i.e. X_{k+1} b = 0 for some b != 0."""
    return bool(x_kernel(k, a, g))


def in_aj_image(k: int, a, g: int | None = None) -> bool:
    """Whether the point lies in the image of the degree-k Abel-Jacobi map,
    i.e. some kernel vector of X_{k+1} has b_0 != 0."""
    return any(b[0] != 0 for b in x_kernel(k, a, g))


def abel_jacobi(g: int, D: DivisorPoints | Sequence) -> AVector:
    """a_i = (1/(2i-1)) sum_k alpha_k^-(2i-1); points at infinity add nothing."""
    if not isinstance(D, DivisorPoints):
        D = DivisorPoints(tuple(D))
    if len(D) > g:
        raise ValueError(f"at most {g} points for genus {g}, got {len(D)}")
    pts = D.finite()
    coords = []
    for i in range(1, g + 1):
        s = sum((Fraction(1) / al ** (2 * i - 1) for al in pts), Fraction(0))
        coords.append(s / (2 * i - 1))
    return AVector(g, tuple(coords))


def project(a, k: int) -> AVector:
    """Truncate a genus-g point to its first k coordinates."""
    a = as_avector(a)
    if not 1 <= k <= a.genus:
        raise ValueError(f"k must lie in 1..{a.genus}")
    return AVector(k, a.coords[:k])

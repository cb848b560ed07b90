"""Exact construction of the rational solutions of the genus-g Mumford
system on the fiber y^2 = x^(2g+1), and their checks against the Poisson
structure and the KdV hierarchy."""

from .chi import ChiTable, chi, chi_table, truncated_exponential
from .exact import (MPoly, NotDivisibleError, PoleError, PolyMat, RatFun,
                    SingularMatrixError, det, diff, dumps, kernel_basis,
                    parse_poly, solve_linear, to_json)
from .jacobian import (INFINITY, AVector, DivisorPoints, XMatrices, abel_jacobi,
                       build_X, h0_nonzero, in_aj_image, project, tau,
                       theta_contains)
from .kdv import (KdvField, PsiDO, bridge_field, genus_profile, kdv_check,
                  lax_rhs, psido_mul, psido_sqrt, wronskian_tau)
from .phase import (MumfordTriple, PhaseFunction, SpectralPoly, dz_identity_check,
                    embed, hamiltonian_vf, hamiltonians, momentum, poisson_bracket,
                    stratum)
from .solver import (PPoly, RhoFunction, ThetaDivisorError, UVWScheme, eval_at,
                     inverse_phi, p_poly, rho, solution_via_rho, uvw_scheme)

__all__ = [
    "abel_jacobi",
    "AVector",
    "bridge_field",
    "build_X",
    "chi",
    "chi_table",
    "ChiTable",
    "det",
    "diff",
    "DivisorPoints",
    "dumps",
    "dz_identity_check",
    "embed",
    "eval_at",
    "genus_profile",
    "h0_nonzero",
    "hamiltonian_vf",
    "hamiltonians",
    "in_aj_image",
    "INFINITY",
    "inverse_phi",
    "kdv_check",
    "KdvField",
    "kernel_basis",
    "lax_rhs",
    "momentum",
    "MPoly",
    "MumfordTriple",
    "NotDivisibleError",
    "p_poly",
    "parse_poly",
    "PhaseFunction",
    "poisson_bracket",
    "PoleError",
    "PolyMat",
    "PPoly",
    "project",
    "PsiDO",
    "psido_mul",
    "psido_sqrt",
    "RatFun",
    "rho",
    "RhoFunction",
    "SingularMatrixError",
    "solution_via_rho",
    "solve_linear",
    "SpectralPoly",
    "stratum",
    "tau",
    "theta_contains",
    "ThetaDivisorError",
    "to_json",
    "truncated_exponential",
    "uvw_scheme",
    "UVWScheme",
    "wronskian_tau",
    "XMatrices",
]

__version__ = "0.1.0"

"""Reset every per-genus memo table (used to time computations from cold)."""

import sys

from . import exact, jacobian, kdv, phase, solver

# the package namespace re-exports the function ``chi``; fetch the module itself
_chi_module = sys.modules[__package__ + ".chi"]


def clear_caches() -> None:
    with _chi_module._lock:
        _chi_module._tables.clear()
    for fn in (exact._flint_ctx, exact._sympy_ring,
               jacobian.build_X, jacobian.tau,
               phase.generating_polys, phase.bracket_table, phase.hamiltonians,
               phase.time_evolution, phase.vector_field,
               solver.p_poly, solver.inverse_phi, solver.rho_tower, solver.rho,
               solver.uvw_scheme, solver.solution_via_rho,
               kdv.bridge_field, kdv.lax_jet, kdv.wronskian_tau):
        fn.cache_clear()

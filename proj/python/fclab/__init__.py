"""Spectral lab for mass-constrained doubly nonlocal ground states.

Thin numpy-facing wrapper over the C++ core.  Fields are 1-D float64 arrays
sampled at cell centers x_j = (j - M/2 + 0.5) L/M of a periodic box of length
L; integrals carry the h = L/M cell weight.
"""

from fclab._core import (
    Params,
    __version__,
    derived_exponents,
    energy_terms,
    fiber,
    fiber_argmax,
    fit_powerlaw,
    frac_laplacian,
    gradient,
    hartree,
    load_field,
    norms,
    optimizer_field,
    project_pohozaev,
    riesz_convolve,
    s_mu_estimate,
    save_field,
    scale,
    solve_ground_state,
)

__all__ = [
    "Params",
    "__version__",
    "derived_exponents",
    "energy_terms",
    "fiber",
    "fiber_argmax",
    "fit_powerlaw",
    "frac_laplacian",
    "gradient",
    "hartree",
    "load_field",
    "norms",
    "optimizer_field",
    "project_pohozaev",
    "riesz_convolve",
    "s_mu_estimate",
    "save_field",
    "scale",
    "solve_ground_state",
]

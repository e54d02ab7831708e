#pragma once
#include "fclab/grid.hpp"

namespace fclab {

// (-Delta)^s via the Fourier multiplier |xi|^{2s}; the zero mode maps to 0.
Field frac_laplacian(const Field& u, double s);

// Free-space convolution with the Riesz kernel |x|^{-mu}: zero-pad to a 2M
// box, multiply by the transform of the cell-averaged kernel, crop back.
// Cell averages (exact integrals of |x|^{-mu} over each cell, closed form in
// 1-D) keep the quadrature second order through the singular cell.
// Sets truncation_warning on the output when the input is suspect.
Field riesz_convolve(const Field& f, double mu);

struct Norms {
    double mass = 0;    // h^N sum u^2
    double kinetic = 0; // sum over the frequency lattice of |xi|^{2s} |u_hat|^2, Parseval-normalized
};
Norms norms(const Field& u, double s);

double mass(const Field& u);

// Hartree potential I_mu * |u|^r sampled on the grid.
Field hartree_potential(const Field& u, double r, double mu);

// Hartree integral D_r(u) = h^N sum (I_mu * |u|^r) |u|^r  (one convolution).
double hartree(const Field& u, double r, double mu);

} // namespace fclab

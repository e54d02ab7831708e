#pragma once
#include <cstdint>
#include <utility>
#include <vector>

#include "fclab/grid.hpp"
#include "fclab/params.hpp"

namespace fclab {

struct OptimizerField {
    Field field;
    double renorm_factor = 1.0; // grid-mass correction on top of K = c/sqrt(pi)
    bool resolution_warning = false;
};

// The lower-critical optimizer profile V_{eps,z}(x) = K (eps/(eps^2 + |x-z|^2))^{N/2}
// with K = c/sqrt(pi) in 1-D (continuum mass c^2), then renormalized so the
// grid mass equals c^2 exactly; the factor absorbs the algebraic tail outside
// the box and is reported.  eps outside [4h, L/8] sets resolution_warning.
OptimizerField optimizer_field(const Grid& g, double eps, double z, double c);

struct SmuEstimate {
    double value = 0;   // min over the probe set of mass / d_star^{N/(2N-mu)}
    double spread = 0;  // (max - min)/min across the eps band
    std::vector<std::pair<double, double>> probes; // (eps, ratio)
};

// Rayleigh estimate of the sharp lower-critical constant over the optimizer
// family; throws estimation_unstable when the band spread exceeds 5%.
SmuEstimate s_mu_estimate(const Grid& g, double mu);

// Certified lower bound of the interpolation constant: max of
//   R(u) = d_p(u) / (kinetic^{p gamma} mass^{p(1-gamma)})
// over Gaussians, optimizer fields, seeded random smooth fields and any
// supplied extra fields (e.g. converged states).
double c_p_lower_bound(const Grid& g, const ProblemParams& pp, int trials,
                       std::uint64_t seed,
                       const std::vector<Field>* extra = nullptr,
                       Field* argmax_out = nullptr);

struct CriticalMassCheck {
    double threshold = 0; // 1 - N c_p c^{2((2s-mu)/N+1)} / (2N+2s-mu)
    bool satisfied = false;
};

// Mass-critical smallness condition evaluated with an estimated constant.
// With a lower bound of the sharp constant this is necessary, not sufficient;
// the certifying computation is the fiber monotonicity scan.
CriticalMassCheck critical_mass_check(const ProblemParams& pp, double c_p_est);

} // namespace fclab

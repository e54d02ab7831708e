#pragma once
#include <cmath>
#include <limits>
#include <optional>

#include "fclab/errors.hpp"

namespace fclab {

// Problem data for the mass-constrained equation
//   (-Delta)^s u = lambda u + alpha (I_mu * |u|^q) |u|^{q-2} u + (I_mu * |u|^p) |u|^{p-2} u
// with q = (2N - mu)/N the lower-critical Hartree exponent and prescribed
// mass  int u^2 = c^2.
struct ProblemParams {
    int dim = 1;
    double s = 0.4;
    double mu = 0.5;
    double alpha = 1.0;
    double p = 3.0;
    double c = 1.0;

    // lower-critical Hartree exponent (2N - mu)/N
    double q() const { return (2.0 * dim - mu) / dim; }
    // upper admissible exponent (2N - mu)/(N - 2s), +inf when N <= 2s
    double p_upper() const {
        double d = dim - 2.0 * s;
        return d > 0 ? (2.0 * dim - mu) / d : std::numeric_limits<double>::infinity();
    }
    // mass-critical exponent 2 + (2s - mu)/N
    double p_critical() const { return 2.0 + (2.0 * s - mu) / dim; }
    // scaling weight gamma_{p,s} = (N(p-2) + mu)/(2sp)
    double gamma_ps() const { return (dim * (p - 2.0) + mu) / (2.0 * s * p); }
    double p_gamma() const { return p * gamma_ps(); }
};

// Throws config_error when the parameter tuple is outside the admissible set.
// The exponent window includes the mass-critical endpoint (p_gamma == 1).
inline void validate(const ProblemParams& pp) {
    if (pp.dim < 1 || pp.dim > 3)
        throw unsupported_dimension("dim must be 1, 2 or 3");
    if (!(pp.s > 0.0 && pp.s < 1.0))
        throw config_error("s must lie in (0,1)");
    if (!(pp.dim > 2.0 * pp.s))
        throw config_error("need N > 2s");
    if (!(pp.mu > 0.0 && pp.mu < pp.dim))
        throw config_error("mu must lie in (0,N)");
    if (pp.alpha < 0.0)
        throw config_error("alpha must be nonnegative");
    if (!(pp.c > 0.0))
        throw config_error("c must be positive");
    if (pp.p < pp.p_critical() - 1e-12)
        throw config_error("p below the mass-critical exponent 2 + (2s-mu)/N");
    if (!(pp.p < pp.p_upper()))
        throw config_error("p must be below (2N-mu)/(N-2s)");
}

enum class Regime { subcritical, critical, supercritical };

inline const char* regime_name(Regime r) {
    switch (r) {
        case Regime::subcritical: return "subcritical";
        case Regime::critical: return "critical";
        default: return "supercritical";
    }
}

// Exponent algebra derived from (N, s, mu, p).  a and b are the small- and
// large-mass scaling exponents; m1_of_c is the dimensionless mass scale
// c^{2p(1-gamma)/(p gamma - 1)} = c^{-a} separating the two regimes.
struct DerivedExponents {
    double gamma_ps = 0;
    double p_gamma = 0;
    double two_mu_star = 0;     // (2N - mu)/N
    double two_mu_s_star = 0;   // (2N - mu)/(N - 2s)
    double a = 0;               // 2(p gamma - p)/(p gamma - 1)
    double b = 0;               // 2(2N - mu)/N
    double m1_exponent = 0;     // 2p(1 - gamma)/(p gamma - 1); equals -a identically
    std::optional<double> a_mu; // alpha N/(2(2N-mu)) * S_mu^{-(2N-mu)/N}
    Regime regime = Regime::supercritical;

    double m1_of_c(double c) const { return std::pow(c, m1_exponent); }
};

// s_mu, when supplied, populates the a_mu coefficient of the energy law.
// Regime classification is exact to 1e-14 in p*gamma - 1.  Unlike validate(),
// this accepts any p in (2, p_upper) so the regime trichotomy can be swept.
DerivedExponents derived_exponents(const ProblemParams& pp,
                                   std::optional<double> s_mu = std::nullopt);

} // namespace fclab

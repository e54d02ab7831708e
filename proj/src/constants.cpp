#include "fclab/constants.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "fclab/corpus.hpp"
#include "fclab/functionals.hpp"
#include "fclab/spectral.hpp"

namespace fclab {

DerivedExponents derived_exponents(const ProblemParams& pp,
                                   std::optional<double> s_mu) {
    if (pp.dim < 1 || pp.dim > 3)
        throw unsupported_dimension("dim must be 1, 2 or 3");
    if (!(pp.s > 0.0 && pp.s < 1.0)) throw config_error("s must lie in (0,1)");
    if (!(pp.dim > 2.0 * pp.s)) throw config_error("need N > 2s");
    if (!(pp.mu > 0.0 && pp.mu < pp.dim)) throw config_error("mu must lie in (0,N)");

    const double N = pp.dim;
    DerivedExponents d;
    d.gamma_ps = pp.gamma_ps();
    d.p_gamma = pp.p_gamma();
    d.two_mu_star = (2.0 * N - pp.mu) / N;
    d.two_mu_s_star = pp.p_upper();
    d.b = 2.0 * (2.0 * N - pp.mu) / N;

    const double pg1 = d.p_gamma - 1.0;
    if (std::abs(pg1) <= 1e-14) {
        d.regime = Regime::critical;
        d.a = std::numeric_limits<double>::quiet_NaN();
        d.m1_exponent = std::numeric_limits<double>::quiet_NaN();
    } else {
        d.regime = pg1 > 0 ? Regime::supercritical : Regime::subcritical;
        d.a = 2.0 * (d.p_gamma - pp.p) / pg1;
        d.m1_exponent = 2.0 * pp.p * (1.0 - d.gamma_ps) / pg1;
    }
    if (s_mu) {
        double expo = (2.0 * N - pp.mu) / N;
        d.a_mu = pp.alpha * N / (2.0 * (2.0 * N - pp.mu)) * std::pow(*s_mu, -expo);
    }
    return d;
}

OptimizerField optimizer_field(const Grid& g, double eps, double z, double c) {
    if (g.dim != 1)
        throw unsupported_dimension("optimizer_field is implemented for dim = 1 only");
    if (!(eps > 0.0)) throw config_error("eps must be positive");
    if (!(c > 0.0)) throw config_error("c must be positive");
    if (std::abs(z) >= 0.5 * g.box_length)
        throw config_error("center z must lie inside the box");

    OptimizerField out;
    const double h = g.spacing();
    out.resolution_warning = eps < 4.0 * h || eps > g.box_length / 8.0;

    const double K = c / std::sqrt(3.14159265358979323846);
    Field u(g);
    for (int j = 0; j < g.points_per_dim; ++j) {
        double dx = g.x(j) - z;
        u.values[j] = K * std::sqrt(eps / (eps * eps + dx * dx));
    }
    // restore the continuum normalization on the grid: the box clips the
    // algebraic tail, so the sampled mass is short by ~4 eps/(pi L)
    double m = mass(u);
    out.renorm_factor = c / std::sqrt(m);
    for (double& v : u.values) v *= out.renorm_factor;
    u.cached_mass = c * c;
    out.field = std::move(u);
    return out;
}

SmuEstimate s_mu_estimate(const Grid& g, double mu) {
    if (g.dim != 1)
        throw unsupported_dimension("s_mu_estimate is implemented for dim = 1 only");
    // Probe band: below 4h the singular cell dominates, above L/64 the
    // algebraic tail lost to the box inflates the ratio past the percent level.
    const double h = g.spacing();
    const double lo = 4.0 * h, hi = g.box_length / 64.0;
    if (!(hi > lo))
        throw estimation_unstable("no resolvable eps band on this grid");

    const double q = (2.0 * g.dim - mu) / g.dim;
    const double expo = g.dim / (2.0 * g.dim - mu); // N/(2N - mu)
    const int n_probe = 9;
    SmuEstimate est;
    est.value = std::numeric_limits<double>::infinity();
    double worst = 0.0;
    for (int i = 0; i < n_probe; ++i) {
        double eps = lo * std::pow(hi / lo, i / static_cast<double>(n_probe - 1));
        Field v = optimizer_field(g, eps, 0.0, 1.0).field;
        double d = hartree(v, q, mu);
        double ratio = 1.0 / std::pow(d, expo); // mass is exactly 1
        est.probes.emplace_back(eps, ratio);
        est.value = std::min(est.value, ratio);
        worst = std::max(worst, ratio);
    }
    est.spread = (worst - est.value) / est.value;
    if (est.spread > 0.05)
        throw estimation_unstable("optimizer-probe ratios vary by " +
                                  std::to_string(est.spread * 100.0) + "% across the eps band");
    return est;
}

double c_p_lower_bound(const Grid& g, const ProblemParams& pp, int trials,
                       std::uint64_t seed, const std::vector<Field>* extra,
                       Field* argmax_out) {
    if (trials < 1) throw config_error("trials must be >= 1");
    const double gamma = pp.gamma_ps();
    const double pg = pp.p_gamma();

    auto ratio_of = [&](const Field& u) {
        double kin = norms(u, pp.s).kinetic;
        double m = mass(u);
        double dp = hartree(u, pp.p, pp.mu);
        return dp / (std::pow(kin, pg) * std::pow(m, pp.p * (1.0 - gamma)));
    };

    std::vector<Field> corpus = make_corpus(g, trials, pp.c, seed);
    if (extra)
        for (const Field& u : *extra) corpus.push_back(u);
    if (corpus.empty()) throw config_error("empty trial corpus");

    double best = 0.0;
    const Field* best_field = nullptr;
    for (const Field& u : corpus) {
        double r = ratio_of(u);
        if (r > best) {
            best = r;
            best_field = &u;
        }
    }
    if (argmax_out && best_field) *argmax_out = *best_field;
    return best;
}

CriticalMassCheck critical_mass_check(const ProblemParams& pp, double c_p_est) {
    DerivedExponents d = derived_exponents(pp);
    if (d.regime != Regime::critical)
        throw regime_error("mass smallness check applies at the critical exponent only");
    const double N = pp.dim;
    double cpow = std::pow(pp.c, 2.0 * ((2.0 * pp.s - pp.mu) / N + 1.0));
    CriticalMassCheck out;
    out.threshold = 1.0 - N * c_p_est * cpow / (2.0 * N + 2.0 * pp.s - pp.mu);
    out.satisfied = out.threshold > 0.0;
    return out;
}

} // namespace fclab

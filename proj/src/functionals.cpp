#include "fclab/functionals.hpp"

#include <algorithm>
#include <cmath>
#include <complex>

#include "fclab/fft.hpp"

namespace fclab {

namespace {
constexpr double pi = 3.14159265358979323846;

inline double signed_power(double v, double e) {
    // |v|^e sign(v); continuous through 0 for e > 0, which holds for all
    // exponents used here (q - 1 and p - 1 both exceed 0)
    return v >= 0 ? std::pow(v, e) : -std::pow(-v, e);
}
} // namespace

EnergyBreakdown energy(const Field& u, const ProblemParams& pp,
                       std::optional<double> lambda) {
    EnergyBreakdown e;
    e.kinetic = norms(u, pp.s).kinetic;
    e.d_star = hartree(u, pp.q(), pp.mu);
    e.d_p = hartree(u, pp.p, pp.mu);
    const double lc = pp.dim / (2.0 * (2.0 * pp.dim - pp.mu)); // N/(2(2N-mu))
    e.j_alpha = 0.5 * e.kinetic - pp.alpha * lc * e.d_star - e.d_p / (2.0 * pp.p);
    e.p_alpha = pp.s * e.kinetic - pp.s * pp.gamma_ps() * e.d_p;
    if (lambda) {
        double m = mass(u);
        e.n_c = e.kinetic - *lambda * m - pp.alpha * e.d_star - e.d_p;
        e.i_alpha = e.j_alpha - 0.5 * *lambda * m;
    }
    return e;
}

Field gradient(const Field& u, const ProblemParams& pp) {
    Field g = frac_laplacian(u, pp.s);
    const double q = pp.q();
    Field iq = hartree_potential(u, q, pp.mu);
    Field ip = hartree_potential(u, pp.p, pp.mu);
    for (std::size_t i = 0; i < g.values.size(); ++i) {
        double v = u.values[i];
        g.values[i] -= pp.alpha * iq.values[i] * signed_power(v, q - 1.0) +
                       ip.values[i] * signed_power(v, pp.p - 1.0);
    }
    g.truncation_warning = iq.truncation_warning || ip.truncation_warning;
    return g;
}

double lagrange_multiplier(const Field& u, const ProblemParams& pp) {
    double m = mass(u);
    if (!(m > 0.0)) throw config_error("multiplier undefined for zero-mass field");
    EnergyBreakdown e = energy(u, pp);
    return (e.kinetic - pp.alpha * e.d_star - e.d_p) / m;
}

double residual_norm(const Field& u, double lambda, const ProblemParams& pp) {
    Field g = gradient(u, pp);
    double num = 0.0, den = 0.0;
    for (std::size_t i = 0; i < u.values.size(); ++i) {
        double r = g.values[i] - lambda * u.values[i];
        num += r * r;
        den += u.values[i] * u.values[i];
    }
    if (!(den > 0.0)) throw config_error("residual undefined for zero-mass field");
    return std::sqrt(num / den);
}

namespace {

// Single resampling pass; callers go through scale(), which slices t.
ScaleResult scale_step(const Field& u, double t);

} // namespace

ScaleResult scale(const Field& u, double t, double t_max) {
    if (std::abs(t) > t_max)
        throw config_error("dilation parameter exceeds t_max");
    // A single resampling pass evaluates the periodic interpolant at e^t x.
    // Once e^t reaches 2 the evaluation points alias full periodic images of
    // the profile into the box, so larger dilations are composed from passes
    // with |step| <= 0.45 (images stay outside the box; only tail-level
    // contamination remains for localized fields).
    const int n = std::max(1, static_cast<int>(std::ceil(std::abs(t) / 0.45)));
    const double step = t / n;
    ScaleResult r = scale_step(u, step);
    for (int k = 1; k < n; ++k) {
        ScaleResult next = scale_step(r.field, step);
        next.renorm_factor *= r.renorm_factor;
        r = std::move(next);
    }
    return r;
}

namespace {

ScaleResult scale_step(const Field& u, double t) {
    const Grid& g = u.grid;
    if (g.dim != 1)
        throw unsupported_dimension("scale is implemented for dim = 1 only");

    const int M = g.points_per_dim;
    const int P = 2 * M;
    const double beta = std::exp(t);
    // sample offset of x_0 in units of h; the resample evaluates the
    // interpolant at beta*x_j, i.e. at fractional index beta*j + delta
    const double off = 0.5 - M / 2.0;
    const double delta = (beta - 1.0) * off;

    std::vector<std::complex<double>> uhat(M);
    for (int j = 0; j < M; ++j) uhat[j] = u.values[j];
    fft_inplace(uhat, false);

    // Bluestein evaluation of A_j = sum_m a_m z^{jm}, z = e^{2 pi i beta/M},
    // over the signed modes m in (-M/2, M/2); the unpaired mode M/2 is added
    // afterwards as a cosine so the interpolant stays real.
    auto zpow = [&](double expnt) { // z^{expnt} with z = e^{2 pi i beta / M}
        double ang = 2.0 * pi * beta * expnt / M;
        return std::complex<double>(std::cos(ang), std::sin(ang));
    };
    std::vector<std::complex<double>> b(P, 0.0), c(P, 0.0);
    for (int m = -M / 2 + 1; m <= M / 2 - 1; ++m) {
        int k = m >= 0 ? m : m + M;
        double ang = 2.0 * pi * m * delta / M;
        std::complex<double> a = uhat[k] * std::complex<double>(std::cos(ang), std::sin(ang));
        b[(m + P) % P] = a * zpow(0.5 * static_cast<double>(m) * m);
    }
    for (int d = -M / 2 + 1; d <= 3 * M / 2 - 2; ++d)
        c[(d + P) % P] = zpow(-0.5 * static_cast<double>(d) * d);
    fft_inplace(b, false);
    fft_inplace(c, false);
    for (int j = 0; j < P; ++j) b[j] *= c[j];
    fft_inplace(b, true);

    const double amp = std::exp(0.5 * g.dim * t);
    const double nyq = uhat[M / 2].real();
    Field v(g);
    for (int j = 0; j < M; ++j) {
        std::complex<double> A = b[j] * zpow(0.5 * static_cast<double>(j) * j);
        double interp = A.real() + nyq * std::cos(pi * (beta * j + delta));
        v.values[j] = amp * interp / M;
    }

    double m_in = mass(u), m_out = mass(v);
    if (!(m_out > 0.0)) throw scaling_degraded(0.0);
    double factor = std::sqrt(m_in / m_out);
    for (double& w : v.values) w *= factor;
    if (!truncation_suspect(u) && std::abs(factor - 1.0) > 1e-4)
        throw scaling_degraded(factor);
    v.cached_mass = m_in;
    return {std::move(v), factor};
}

} // namespace

FiberSample fiber_from_terms(double kinetic, double d_star, double d_p,
                             const ProblemParams& pp, double t) {
    const double s = pp.s;
    const double gamma = pp.gamma_ps();
    const double pg = pp.p_gamma();
    const double lc = pp.dim / (2.0 * (2.0 * pp.dim - pp.mu));
    const double e2st = std::exp(2.0 * s * t);
    const double e2pg = std::exp(2.0 * pg * s * t);
    FiberSample f;
    f.t = t;
    f.e = 0.5 * e2st * kinetic - pp.alpha * lc * d_star - e2pg * d_p / (2.0 * pp.p);
    f.de = s * e2st * kinetic - s * gamma * e2pg * d_p;
    f.dde = 2.0 * s * s * e2st * kinetic - 2.0 * pp.p * gamma * gamma * s * s * e2pg * d_p;
    return f;
}

FiberSample fiber(const Field& u, const ProblemParams& pp, double t) {
    EnergyBreakdown e = energy(u, pp);
    return fiber_from_terms(e.kinetic, e.d_star, e.d_p, pp, t);
}

double fiber_argmax_from_terms(double kinetic, double d_p, const ProblemParams& pp) {
    const double pg = pp.p_gamma();
    if (std::abs(pg - 1.0) <= 1e-14)
        throw regime_error("fiber has no maximizer at the mass-critical exponent");
    if (pg < 1.0)
        throw regime_error("fiber maximizer requires the supercritical regime");
    if (!(d_p > 0.0))
        throw undefined_fiber("fiber maximizer undefined: d_p must be positive");
    if (!(kinetic > 0.0))
        throw undefined_fiber("fiber maximizer undefined: kinetic must be positive");
    return std::log(kinetic / (pp.gamma_ps() * d_p)) / (2.0 * pp.s * (pg - 1.0));
}

double fiber_argmax(const Field& u, const ProblemParams& pp) {
    EnergyBreakdown e = energy(u, pp);
    return fiber_argmax_from_terms(e.kinetic, e.d_p, pp);
}

Field project_pohozaev(const Field& u, const ProblemParams& pp) {
    // The per-pass dilation is clamped to |t| <= 0.5: single-step compressions
    // beyond e^t = 2 fold periodic images into the box.  A silent unconverged
    // return here would hand the caller an off-manifold point, so failure to
    // converge within the pass budget is an error the caller must handle.
    Field v = u;
    for (int pass = 0; pass < 80; ++pass) {
        EnergyBreakdown e = energy(v, pp);
        double t = fiber_argmax_from_terms(e.kinetic, e.d_p, pp);
        if (std::abs(e.p_alpha) <= 1e-12 * e.kinetic) return v;
        double tc = std::clamp(t, -0.5, 0.5);
        v = scale(v, tc).field;
    }
    throw projection_error("dilation onto the Pohozaev zero set did not converge");
}

} // namespace fclab

#include "fclab/corpus.hpp"

#include <cmath>

#include "fclab/constants.hpp"
#include "fclab/spectral.hpp"

namespace fclab {

namespace {
void renorm_to(Field& u, double c) {
    double m = mass(u);
    double f = c / std::sqrt(m);
    for (double& v : u.values) v *= f;
}
} // namespace

Field make_gaussian(const Grid& g, double width, double c, double center) {
    Field u(g);
    for (int j = 0; j < g.points_per_dim; ++j) {
        double x = g.x(j) - center;
        u.values[j] = std::exp(-x * x / (2.0 * width * width));
    }
    renorm_to(u, c);
    return u;
}

Field make_random_smooth(const Grid& g, std::mt19937_64& rng, double c) {
    std::uniform_real_distribution<double> unif(-1.0, 1.0);
    const double L = g.box_length;
    // envelope width drawn from a decade below the box scale
    double w = L / 16.0 * std::pow(2.0, unif(rng));
    Field u(g);
    double a1 = unif(rng), a2 = unif(rng), a3 = unif(rng), ph = unif(rng);
    for (int j = 0; j < g.points_per_dim; ++j) {
        double x = g.x(j);
        double env = std::exp(-x * x / (2.0 * w * w));
        double osc = 1.0 + 0.5 * a1 * std::cos(2.0 * 3.14159265358979323846 * (x / L + ph)) +
                     0.3 * a2 * std::cos(4.0 * 3.14159265358979323846 * x / L) +
                     0.2 * a3 * std::sin(2.0 * 3.14159265358979323846 * x / L);
        u.values[j] = env * osc;
    }
    renorm_to(u, c);
    return u;
}

std::vector<Field> make_corpus(const Grid& g, int count, double c, std::uint64_t seed) {
    std::vector<Field> fields;
    fields.reserve(count);
    std::mt19937_64 rng(seed);
    const double h = g.spacing();
    const double L = g.box_length;
    int n_gauss = count / 3;
    int n_opt = count / 3;
    for (int i = 0; i < n_gauss; ++i) {
        double w = (L / 64.0) * std::pow(16.0, i / std::max(1.0, n_gauss - 1.0));
        fields.push_back(make_gaussian(g, w, c));
    }
    for (int i = 0; i < n_opt; ++i) {
        double lo = 4.0 * h, hi = L / 8.0;
        double eps = lo * std::pow(hi / lo, i / std::max(1.0, n_opt - 1.0));
        fields.push_back(optimizer_field(g, eps, 0.0, c).field);
    }
    while (static_cast<int>(fields.size()) < count)
        fields.push_back(make_random_smooth(g, rng, c));
    return fields;
}

} // namespace fclab

#include "fclab/grid.hpp"

#include <cmath>

namespace fclab {

static bool is_power_of_two(int n) { return n > 0 && (n & (n - 1)) == 0; }

Grid build_grid(int dim, double box_length, int points_per_dim) {
    if (dim < 1 || dim > 3)
        throw unsupported_dimension("dim must be 1, 2 or 3, got " + std::to_string(dim));
    if (!(box_length > 0.0))
        throw config_error("box_length must be positive");
    if (points_per_dim < 16 || !is_power_of_two(points_per_dim))
        throw config_error("points_per_dim must be a power of two >= 16, got " +
                           std::to_string(points_per_dim));
    return Grid{dim, box_length, points_per_dim};
}

double outer_shell_mass_fraction(const Field& u) {
    const Grid& g = u.grid;
    const double edge = 0.9 * (g.box_length / 2.0);
    double total = 0.0, shell = 0.0;
    if (g.dim == 1) {
        for (int j = 0; j < g.points_per_dim; ++j) {
            double v2 = u.values[j] * u.values[j];
            total += v2;
            if (std::abs(g.x(j)) > edge) shell += v2;
        }
    } else {
        const int M = g.points_per_dim;
        for (std::size_t idx = 0; idx < u.values.size(); ++idx) {
            double v2 = u.values[idx] * u.values[idx];
            total += v2;
            std::size_t rem = idx;
            bool outer = false;
            for (int d = 0; d < g.dim; ++d) {
                int j = static_cast<int>(rem % M);
                rem /= M;
                if (std::abs(g.x(j)) > edge) { outer = true; break; }
            }
            if (outer) shell += v2;
        }
    }
    return total > 0.0 ? shell / total : 0.0;
}

bool truncation_suspect(const Field& u, double threshold) {
    return outer_shell_mass_fraction(u) > threshold;
}

} // namespace fclab

#pragma once
#include <cstddef>
#include <optional>
#include <vector>

#include "fclab/errors.hpp"

namespace fclab {

// Uniform periodic box [-L/2, L/2)^dim with M cells per dimension and the
// symmetric frequency lattice xi_k = 2 pi k / L, k in {-M/2, ..., M/2 - 1}.
// Samples live at cell centers x_j = (j - M/2 + 1/2) h so every quadrature
// cell is whole and the box is symmetric about the origin.
struct Grid {
    int dim = 1;
    double box_length = 0.0;
    int points_per_dim = 0;

    double spacing() const { return box_length / points_per_dim; }
    std::size_t size() const {
        std::size_t n = 1;
        for (int d = 0; d < dim; ++d) n *= static_cast<std::size_t>(points_per_dim);
        return n;
    }
    double x(int j) const { return (j - points_per_dim / 2 + 0.5) * spacing(); }
    // signed frequency index for FFT bin k
    int freq_index(int k) const { return k < points_per_dim / 2 ? k : k - points_per_dim; }
    double freq(int k) const {
        return 2.0 * 3.14159265358979323846 * freq_index(k) / box_length;
    }
    // cell volume h^dim used by all physical-space integrals
    double cell_volume() const {
        double v = 1.0;
        for (int d = 0; d < dim; ++d) v *= spacing();
        return v;
    }

    bool operator==(const Grid&) const = default;
};

Grid build_grid(int dim, double box_length, int points_per_dim);

// Real sampled function on a Grid.  Caches, when set, must match a fresh
// recomputation; transforming operations drop them.
struct Field {
    Grid grid;
    std::vector<double> values;
    std::optional<double> cached_mass;
    std::optional<double> cached_kinetic;
    // set when a convolution consumed a truncation-suspect input
    bool truncation_warning = false;

    Field() = default;
    explicit Field(const Grid& g) : grid(g), values(g.size(), 0.0) {}
    Field(const Grid& g, std::vector<double> v) : grid(g), values(std::move(v)) {}
};

// Fraction of the total mass carried by samples in the outer 10% shell of the
// box (|x| > 0.9 L/2 in max norm).  Returns 0 for the zero field.
double outer_shell_mass_fraction(const Field& u);

inline constexpr double default_truncation_threshold = 1e-10;

// A field is truncation-suspect when its boundary shell carries more than the
// threshold fraction of the total mass; box-truncation artifacts then pollute
// convolutions and dilations.
bool truncation_suspect(const Field& u, double threshold = default_truncation_threshold);

} // namespace fclab

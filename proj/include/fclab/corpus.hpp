#pragma once
#include <cstdint>
#include <random>
#include <vector>

#include "fclab/grid.hpp"

namespace fclab {

// Deterministic trial fields used by estimators, campaigns and tests.

// exp(-x^2/(2 w^2)) scaled to mass c^2
Field make_gaussian(const Grid& g, double width, double c, double center = 0.0);

// Gaussian envelope times a low-order random cosine polynomial, positive
// amplitude envelope, scaled to mass c^2.  Smooth, decays at the boundary.
Field make_random_smooth(const Grid& g, std::mt19937_64& rng, double c);

// Mixed corpus: Gaussian width ladder, optimizer-profile eps ladder, and
// seeded random smooth fields, all at mass c.
std::vector<Field> make_corpus(const Grid& g, int count, double c, std::uint64_t seed);

} // namespace fclab

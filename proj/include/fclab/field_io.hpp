#pragma once
#include <string>
#include <utility>

#include "fclab/grid.hpp"
#include "fclab/params.hpp"

namespace fclab {

// On-disk field format: one JSON text header {dim, L, M, s, mu, alpha, p, c,
// schema_version}, a newline, the 8-byte magic "FCLFLD01", then M^dim
// little-endian float64 samples in row-major order.
inline constexpr int checkpoint_schema_version = 1;
inline constexpr const char checkpoint_magic[9] = "FCLFLD01";

struct CheckpointHeader {
    int dim = 1;
    double L = 0;
    int M = 0;
    double s = 0, mu = 0, alpha = 0, p = 0, c = 0;
    int schema_version = checkpoint_schema_version;
};

void save_field(const std::string& path, const Field& u, const ProblemParams& pp);

std::pair<Field, CheckpointHeader> load_field(const std::string& path);

} // namespace fclab

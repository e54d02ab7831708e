#include "fclab/field_io.hpp"

#include <cmath>
#include <cstring>
#include <fstream>

#include <json.hpp>

namespace fclab {

using ordered_json = nlohmann::ordered_json;

void save_field(const std::string& path, const Field& u, const ProblemParams& pp) {
    const Grid& g = u.grid;
    ordered_json header;
    header["dim"] = g.dim;
    header["L"] = g.box_length;
    header["M"] = g.points_per_dim;
    header["s"] = pp.s;
    header["mu"] = pp.mu;
    header["alpha"] = pp.alpha;
    header["p"] = pp.p;
    header["c"] = pp.c;
    header["schema_version"] = checkpoint_schema_version;

    std::ofstream out(path, std::ios::binary);
    if (!out) throw io_error("cannot open for writing: " + path);
    out << header.dump() << '\n';
    out.write(checkpoint_magic, 8);
    static_assert(sizeof(double) == 8);
    out.write(reinterpret_cast<const char*>(u.values.data()),
              static_cast<std::streamsize>(u.values.size() * sizeof(double)));
    if (!out) throw io_error("write failed: " + path);
}

std::pair<Field, CheckpointHeader> load_field(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw io_error("cannot open: " + path);

    std::string header_line;
    if (!std::getline(in, header_line))
        throw io_error("missing header line: " + path);
    ordered_json header;
    try {
        header = ordered_json::parse(header_line);
    } catch (const std::exception& e) {
        throw io_error("malformed header in " + path + ": " + e.what());
    }

    char magic[8];
    in.read(magic, 8);
    if (!in || std::memcmp(magic, checkpoint_magic, 8) != 0)
        throw io_error("bad magic in " + path);

    CheckpointHeader h;
    try {
        h.dim = header.at("dim").get<int>();
        h.L = header.at("L").get<double>();
        h.M = header.at("M").get<int>();
        h.s = header.at("s").get<double>();
        h.mu = header.at("mu").get<double>();
        h.alpha = header.at("alpha").get<double>();
        h.p = header.at("p").get<double>();
        h.c = header.at("c").get<double>();
        h.schema_version = header.at("schema_version").get<int>();
    } catch (const std::exception& e) {
        throw io_error("incomplete header in " + path + ": " + e.what());
    }
    if (h.schema_version != checkpoint_schema_version)
        throw io_error("unsupported schema_version " + std::to_string(h.schema_version));

    Grid g = build_grid(h.dim, h.L, h.M);
    Field u(g);
    in.read(reinterpret_cast<char*>(u.values.data()),
            static_cast<std::streamsize>(u.values.size() * sizeof(double)));
    if (static_cast<std::size_t>(in.gcount()) != u.values.size() * sizeof(double))
        throw io_error("payload truncated in " + path);
    for (double v : u.values)
        if (!std::isfinite(v)) throw io_error("non-finite sample in " + path);
    return {std::move(u), h};
}

} // namespace fclab

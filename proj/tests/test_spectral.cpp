#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <cstdio>
#include <cstring>
#include <random>

#include "fclab/field_io.hpp"
#include "fclab/spectral.hpp"

using namespace fclab;

namespace {

const double PI = 3.14159265358979323846;

Field gaussian(const Grid& g, double w, double amp = 1.0, double center = 0.0) {
    Field u(g);
    for (int j = 0; j < g.points_per_dim; ++j) {
        double x = g.x(j) - center;
        u.values[j] = amp * std::exp(-x * x / (2.0 * w * w));
    }
    return u;
}

} // namespace

TEST_CASE("grid construction and validation") {
    Grid g = build_grid(1, 32.0, 256);
    CHECK(g.spacing() == doctest::Approx(0.125));
    CHECK(g.size() == 256);
    CHECK(g.cell_volume() == doctest::Approx(0.125));

    // cell-centered: x(j) = -x(M-1-j), no sample at the origin
    for (int j = 0; j < 256; ++j)
        CHECK(g.x(j) == doctest::Approx(-g.x(255 - j)).epsilon(1e-15));
    CHECK(g.freq_index(0) == 0);
    CHECK(g.freq_index(1) == 1);
    CHECK(g.freq_index(255) == -1);
    CHECK(g.freq(1) == doctest::Approx(2.0 * PI / 32.0));

    CHECK_THROWS_AS(build_grid(0, 32.0, 256), unsupported_dimension);
    CHECK_THROWS_AS(build_grid(4, 32.0, 256), unsupported_dimension);
    CHECK_THROWS_AS(build_grid(1, 0.0, 256), config_error);
    CHECK_THROWS_AS(build_grid(1, -3.0, 256), config_error);
    CHECK_THROWS_AS(build_grid(1, 32.0, 100), config_error);
    CHECK_THROWS_AS(build_grid(1, 32.0, 8), config_error);
}

TEST_CASE("fractional laplacian is the |xi|^{2s} multiplier on plane waves") {
    Grid g = build_grid(1, 32.0, 256);
    for (double s : {0.25, 0.4, 0.9}) {
        for (int k : {1, 3, 17}) {
            double xi = 2.0 * PI * k / g.box_length;
            Field u(g);
            for (int j = 0; j < 256; ++j) u.values[j] = std::cos(xi * g.x(j));
            Field lu = frac_laplacian(u, s);
            double fac = std::pow(xi * xi, s);
            for (int j = 0; j < 256; ++j)
                CHECK(lu.values[j] == doctest::Approx(fac * u.values[j]).epsilon(1e-12));
        }
    }
}

TEST_CASE("fractional laplacian annihilates constants") {
    Grid g = build_grid(1, 10.0, 64);
    Field u(g);
    for (double& v : u.values) v = 2.5;
    Field lu = frac_laplacian(u, 0.4);
    for (double v : lu.values) CHECK(std::abs(v) < 1e-13);
}

TEST_CASE("fractional laplacian on a 2-d plane wave") {
    Grid g = build_grid(2, 16.0, 32);
    double xi1 = 2.0 * PI * 2 / 16.0, xi2 = 2.0 * PI * 5 / 16.0;
    Field u(g);
    for (int j2 = 0; j2 < 32; ++j2)
        for (int j1 = 0; j1 < 32; ++j1)
            u.values[j2 * 32 + j1] = std::cos(xi1 * g.x(j1)) * std::cos(xi2 * g.x(j2));
    // product of cosines is a 4-wave combination with common |xi|^2
    Field lu = frac_laplacian(u, 0.4);
    double fac = std::pow(xi1 * xi1 + xi2 * xi2, 0.4);
    for (std::size_t i = 0; i < u.values.size(); ++i)
        CHECK(lu.values[i] == doctest::Approx(fac * u.values[i]).epsilon(1e-12));
}

TEST_CASE("riesz kernel: single-cell source reproduces the cell-averaged kernel") {
    Grid g = build_grid(1, 16.0, 64);
    double h = g.spacing();
    double mu = 0.5;
    Field f(g);
    int j0 = 20;
    f.values[j0] = 1.0;
    Field conv = riesz_convolve(f, mu);

    // on-cell value: cell average of |y|^{-mu}; off-cell: midpoint kernel
    double k0 = 2.0 * std::pow(h / 2.0, 1.0 - mu) / ((1.0 - mu) * h);
    CHECK(conv.values[j0] == doctest::Approx(h * k0).epsilon(1e-12));
    for (int d : {1, 2, 7, 30}) {
        double expected = h * std::pow(d * h, -mu);
        CHECK(conv.values[j0 + d] == doctest::Approx(expected).epsilon(1e-12));
        CHECK(conv.values[j0 - d] == doctest::Approx(expected).epsilon(1e-12));
    }
}

TEST_CASE("riesz convolution agrees with the direct free-space sum") {
    Grid g = build_grid(1, 12.0, 64);
    double h = g.spacing();
    double mu = 0.7;
    std::mt19937_64 rng(5);
    std::normal_distribution<double> nd;
    Field f(g);
    // band-limited random field
    for (int m = 1; m <= 5; ++m) {
        double a = nd(rng), b = nd(rng);
        for (int j = 0; j < 64; ++j)
            f.values[j] += a * std::cos(2.0 * PI * m * g.x(j) / 12.0) +
                           b * std::sin(2.0 * PI * m * g.x(j) / 12.0);
    }
    Field conv = riesz_convolve(f, mu);
    double k0 = 2.0 * std::pow(h / 2.0, 1.0 - mu) / ((1.0 - mu) * h);
    for (int i = 0; i < 64; ++i) {
        double direct = 0.0;
        for (int j = 0; j < 64; ++j) {
            double kij = (i == j) ? k0 : std::pow(std::abs(g.x(i) - g.x(j)), -mu);
            direct += h * kij * f.values[j];
        }
        CHECK(conv.values[i] == doctest::Approx(direct).epsilon(1e-11));
    }
}

TEST_CASE("riesz convolution of an even field is even") {
    Grid g = build_grid(1, 20.0, 128);
    Field u = gaussian(g, 1.3);
    Field conv = riesz_convolve(u, 0.5);
    for (int j = 0; j < 64; ++j)
        CHECK(conv.values[j] == doctest::Approx(conv.values[127 - j]).epsilon(1e-13));
}

TEST_CASE("riesz convolution rejects dim > 1") {
    Grid g = build_grid(2, 8.0, 32);
    Field u(g);
    u.values[0] = 1.0;
    CHECK_THROWS_AS(riesz_convolve(u, 0.5), unsupported_dimension);
}

TEST_CASE("gaussian convolved with |x|^{-1/2} at the origin") {
    // int exp(-y^2) |y|^{-1/2} dy = Gamma(1/4) = 3.6256099082219083
    Grid g = build_grid(1, 64.0, 8192);
    Field u(g);
    for (int j = 0; j < 8192; ++j) u.values[j] = std::exp(-g.x(j) * g.x(j));
    Field conv = riesz_convolve(u, 0.5);
    // no cell sits at x = 0; average the two neighbors of the origin
    double at0 = 0.5 * (conv.values[4095] + conv.values[4096]);
    CHECK(at0 == doctest::Approx(3.6256099082219083).epsilon(1e-4));
}

TEST_CASE("gaussian double integral matches its closed form") {
    // int int exp(-x^2/2) |x-y|^{-1/2} exp(-y^2/2) = 2^{-3/4} Gamma(1/4) sqrt(2 pi)
    Grid g = build_grid(1, 64.0, 4096);
    Field u = gaussian(g, 1.0);
    double d2 = hartree(u, 1.0, 0.5);
    CHECK(d2 == doctest::Approx(5.4037906119443389).epsilon(1e-4));
}

TEST_CASE("hartree values are insensitive to box doubling") {
    double mu = 0.5;
    Grid g1 = build_grid(1, 32.0, 512);
    Grid g2 = build_grid(1, 64.0, 1024); // same spacing, twice the box
    Field u1 = gaussian(g1, 1.0);
    Field u2 = gaussian(g2, 1.0);
    double a = hartree(u1, 1.5, mu), b = hartree(u2, 1.5, mu);
    CHECK(a == doctest::Approx(b).epsilon(1e-6));
    Norms n1 = norms(u1, 0.4), n2 = norms(u2, 0.4);
    CHECK(n1.mass == doctest::Approx(n2.mass).epsilon(1e-12));
    CHECK(n1.kinetic == doctest::Approx(n2.kinetic).epsilon(1e-6));
}

TEST_CASE("mass and kinetic norm of the standard gaussian") {
    // for u = exp(-x^2/2): mass = sqrt(pi), kinetic at s = 0.4 is
    // int |xi|^{0.8} exp(-xi^2) dxi = Gamma(0.9)
    Grid g = build_grid(1, 512.0, 2048);
    Field u = gaussian(g, 1.0);
    Norms n = norms(u, 0.4);
    CHECK(n.mass == doctest::Approx(std::sqrt(PI)).epsilon(1e-12));
    CHECK(n.kinetic == doctest::Approx(1.0686287021193194).epsilon(1e-3));
    CHECK(mass(u) == doctest::Approx(n.mass).epsilon(1e-14));
}

TEST_CASE("hartree potential pairs with the quadratic form") {
    Grid g = build_grid(1, 24.0, 256);
    Field u = gaussian(g, 1.2, 0.8);
    double r = 1.5, mu = 0.5, h = g.spacing();
    Field pot = hartree_potential(u, r, mu);
    double paired = 0.0;
    for (int j = 0; j < 256; ++j)
        paired += h * pot.values[j] * std::pow(std::abs(u.values[j]), r);
    CHECK(paired == doctest::Approx(hartree(u, r, mu)).epsilon(1e-12));
}

TEST_CASE("truncation diagnostics") {
    Grid g = build_grid(1, 32.0, 256);
    Field narrow = gaussian(g, 1.0);
    CHECK_FALSE(truncation_suspect(narrow));
    CHECK(outer_shell_mass_fraction(narrow) < 1e-15);

    Field wide = gaussian(g, 8.0);
    CHECK(truncation_suspect(wide));
    CHECK(outer_shell_mass_fraction(wide) > 1e-4);
}

TEST_CASE("checkpoint round-trip is bit-exact") {
    Grid g = build_grid(1, 48.0, 512);
    Field u = gaussian(g, 2.0, 1.7, 3.5);
    ProblemParams pp;
    pp.c = 1.3;
    std::string path = "roundtrip_test.fld";
    save_field(path, u, pp);
    auto [v, hdr] = load_field(path);
    std::remove(path.c_str());

    REQUIRE(v.values.size() == u.values.size());
    CHECK(std::memcmp(v.values.data(), u.values.data(),
                      u.values.size() * sizeof(double)) == 0);
    CHECK(v.grid == g);
    CHECK(hdr.dim == 1);
    CHECK(hdr.L == 48.0);
    CHECK(hdr.M == 512);
    CHECK(hdr.s == pp.s);
    CHECK(hdr.mu == pp.mu);
    CHECK(hdr.alpha == pp.alpha);
    CHECK(hdr.p == pp.p);
    CHECK(hdr.c == 1.3);
    CHECK(hdr.schema_version == checkpoint_schema_version);
}

TEST_CASE("checkpoint loader rejects missing and corrupt files") {
    CHECK_THROWS_AS(load_field("no_such_file.fld"), io_error);

    Grid g = build_grid(1, 8.0, 64);
    Field u = gaussian(g, 1.0);
    ProblemParams pp;
    std::string path = "corrupt_test.fld";
    save_field(path, u, pp);
    {
        FILE* f = std::fopen(path.c_str(), "r+b");
        REQUIRE(f != nullptr);
        std::fputs("XX", f);
        std::fclose(f);
    }
    CHECK_THROWS_AS(load_field(path), io_error);
    std::remove(path.c_str());
}

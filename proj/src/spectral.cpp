#include "fclab/spectral.hpp"

#include <cmath>
#include <complex>
#include <map>
#include <mutex>
#include <tuple>

#include "fclab/fft.hpp"

namespace fclab {

namespace {

using cvec = std::vector<std::complex<double>>;

// In-place FFT along every axis of a dim-dimensional M^dim array (row-major,
// last index fastest).  Axis transforms are gathered into contiguous scratch
// lines so the 1-D engine applies unchanged.
void fftn_inplace(cvec& buf, int dim, int M, bool inverse) {
    if (dim == 1) {
        fft_inplace(buf, inverse);
        return;
    }
    const std::size_t n = buf.size();
    cvec line(M);
    // stride of the transformed axis; lines enumerated over the other axes
    std::size_t stride = 1;
    for (int axis = dim - 1; axis >= 0; --axis) {
        const std::size_t nlines = n / M;
        for (std::size_t l = 0; l < nlines; ++l) {
            // decompose l into (outer, inner) around the axis
            std::size_t inner = l % stride;
            std::size_t outer = l / stride;
            std::size_t base = outer * stride * M + inner;
            for (int j = 0; j < M; ++j) line[j] = buf[base + j * stride];
            fft_inplace(line, inverse);
            for (int j = 0; j < M; ++j) buf[base + j * stride] = line[j];
        }
        stride *= M;
    }
}

double freq_sq(const Grid& g, std::size_t idx) {
    double f2 = 0.0;
    std::size_t rem = idx;
    for (int d = 0; d < g.dim; ++d) {
        int k = static_cast<int>(rem % g.points_per_dim);
        rem /= g.points_per_dim;
        double xi = g.freq(k);
        f2 += xi * xi;
    }
    return f2;
}

// Transform of the zero-padded cell-averaged Riesz kernel, cached per grid.
std::mutex kernel_mutex;
std::map<std::tuple<int, double, double>, cvec> kernel_cache;

// Average of |y|^{-mu} over the width-h cell centered at d*h, via the
// primitive sign(y)|y|^{1-mu}/(1-mu).  Exact through the singular cell.
double kernel_cell_average_1d(double d, double h, double mu) {
    auto F = [&](double y) {
        return (y >= 0 ? 1.0 : -1.0) * std::pow(std::abs(y), 1.0 - mu) / (1.0 - mu);
    };
    return (F(d * h + 0.5 * h) - F(d * h - 0.5 * h)) / h;
}

const cvec& riesz_kernel_spectrum(const Grid& g, double mu) {
    std::lock_guard<std::mutex> lock(kernel_mutex);
    auto key = std::make_tuple(g.points_per_dim, g.box_length, mu);
    auto it = kernel_cache.find(key);
    if (it != kernel_cache.end()) return it->second;

    const int M = g.points_per_dim;
    const int P = 2 * M;
    const double h = g.spacing();
    cvec kpad(P, 0.0);
    // displacement d in cells, stored circularly on the length-2M ring; the
    // h factor is the quadrature weight of the convolution sum
    for (int d = -M; d < M; ++d) {
        int slot = (d + P) % P;
        kpad[slot] = h * kernel_cell_average_1d(static_cast<double>(d), h, mu);
    }
    fft_inplace(kpad, false);
    auto [pos, ok] = kernel_cache.emplace(key, std::move(kpad));
    return pos->second;
}

} // namespace

Field frac_laplacian(const Field& u, double s) {
    if (!(s > 0.0 && s <= 1.0))
        throw invalid_exponent("fractional order s must lie in (0,1]");
    const Grid& g = u.grid;
    cvec buf(u.values.size());
    for (std::size_t i = 0; i < buf.size(); ++i) buf[i] = u.values[i];
    fftn_inplace(buf, g.dim, g.points_per_dim, false);
    for (std::size_t i = 0; i < buf.size(); ++i) {
        double f2 = freq_sq(g, i);
        buf[i] *= f2 > 0.0 ? std::pow(f2, s) : 0.0;
    }
    fftn_inplace(buf, g.dim, g.points_per_dim, true);
    Field out(g);
    for (std::size_t i = 0; i < buf.size(); ++i) out.values[i] = buf[i].real();
    out.truncation_warning = u.truncation_warning;
    return out;
}

Field riesz_convolve(const Field& f, double mu) {
    const Grid& g = f.grid;
    if (g.dim != 1)
        throw unsupported_dimension(
            "Riesz convolution is implemented for dim = 1 only");
    if (!(mu > 0.0 && mu < g.dim))
        throw invalid_exponent("Riesz exponent mu must lie in (0, N)");

    const int M = g.points_per_dim;
    const int P = 2 * M;
    const cvec& khat = riesz_kernel_spectrum(g, mu);

    cvec buf(P, 0.0);
    for (int j = 0; j < M; ++j) buf[j] = f.values[j];
    fft_inplace(buf, false);
    for (int j = 0; j < P; ++j) buf[j] *= khat[j];
    fft_inplace(buf, true);

    Field out(g);
    for (int j = 0; j < M; ++j) out.values[j] = buf[j].real();
    out.truncation_warning = f.truncation_warning || truncation_suspect(f);
    return out;
}

Norms norms(const Field& u, double s) {
    const Grid& g = u.grid;
    Norms n;
    for (double v : u.values) n.mass += v * v;
    n.mass *= g.cell_volume();

    cvec buf(u.values.size());
    for (std::size_t i = 0; i < buf.size(); ++i) buf[i] = u.values[i];
    fftn_inplace(buf, g.dim, g.points_per_dim, false);
    const double w = g.cell_volume() / static_cast<double>(u.values.size());
    for (std::size_t i = 0; i < buf.size(); ++i) {
        double f2 = freq_sq(g, i);
        if (f2 > 0.0) n.kinetic += std::pow(f2, s) * std::norm(buf[i]);
    }
    n.kinetic *= w;
    return n;
}

double mass(const Field& u) {
    double m = 0.0;
    for (double v : u.values) m += v * v;
    return m * u.grid.cell_volume();
}

Field hartree_potential(const Field& u, double r, double mu) {
    Field w(u.grid);
    for (std::size_t i = 0; i < u.values.size(); ++i)
        w.values[i] = std::pow(std::abs(u.values[i]), r);
    w.truncation_warning = u.truncation_warning;
    return riesz_convolve(w, mu);
}

double hartree(const Field& u, double r, double mu) {
    const Grid& g = u.grid;
    std::vector<double> w(u.values.size());
    for (std::size_t i = 0; i < u.values.size(); ++i)
        w[i] = std::pow(std::abs(u.values[i]), r);
    Field pot = riesz_convolve(Field(g, w), mu);
    double d = 0.0;
    for (std::size_t i = 0; i < w.size(); ++i) d += pot.values[i] * w[i];
    return d * g.cell_volume();
}

} // namespace fclab

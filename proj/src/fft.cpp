#include "fclab/fft.hpp"

#include <fftw3.h>

#include <map>
#include <mutex>
#include <stdexcept>

namespace fclab {

namespace {

// FFTW plan creation is not thread safe; execution on distinct buffers is.
// Plans are made with FFTW_UNALIGNED so fftw_execute_dft may run on any
// caller buffer.
std::mutex plan_mutex;
std::map<std::pair<int, int>, fftw_plan> plan_cache;

fftw_plan get_plan(int n, int sign) {
    std::lock_guard<std::mutex> lock(plan_mutex);
    auto key = std::make_pair(n, sign);
    auto it = plan_cache.find(key);
    if (it != plan_cache.end()) return it->second;
    fftw_complex* scratch = fftw_alloc_complex(n);
    fftw_plan plan = fftw_plan_dft_1d(n, scratch, scratch, sign,
                                      FFTW_ESTIMATE | FFTW_UNALIGNED);
    fftw_free(scratch);
    if (!plan) throw std::runtime_error("fftw plan creation failed");
    plan_cache.emplace(key, plan);
    return plan;
}

} // namespace

void fft_inplace(std::vector<std::complex<double>>& buf, bool inverse) {
    const int n = static_cast<int>(buf.size());
    if (n == 0) return;
    fftw_plan plan = get_plan(n, inverse ? FFTW_BACKWARD : FFTW_FORWARD);
    auto* ptr = reinterpret_cast<fftw_complex*>(buf.data());
    fftw_execute_dft(plan, ptr, ptr);
    if (inverse) {
        const double scale = 1.0 / n;
        for (auto& z : buf) z *= scale;
    }
}

std::vector<std::complex<double>> fft_of_real(const std::vector<double>& in) {
    std::vector<std::complex<double>> buf(in.size());
    for (std::size_t i = 0; i < in.size(); ++i) buf[i] = in[i];
    fft_inplace(buf, false);
    return buf;
}

} // namespace fclab

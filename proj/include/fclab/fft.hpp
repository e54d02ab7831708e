#pragma once
#include <complex>
#include <vector>

namespace fclab {

// In-place complex FFT of length n (any n FFTW accepts; we only use powers of
// two).  Forward carries no prefactor; inverse divides by n.  Plans are cached
// per (n, direction) behind a mutex and executed on caller buffers, so calls
// are safe from concurrent threads.
void fft_inplace(std::vector<std::complex<double>>& buf, bool inverse);

std::vector<std::complex<double>> fft_of_real(const std::vector<double>& in);

} // namespace fclab

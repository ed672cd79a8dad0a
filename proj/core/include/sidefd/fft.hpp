#pragma once

#include <complex>
#include <vector>

namespace sidefd {

/// In-place radix-2 complex FFT. Size must be a power of two.
void fft_forward(std::vector<std::complex<double>>& a);
void fft_inverse(std::vector<std::complex<double>>& a);

/// Smallest power of two >= n.
std::size_t fft_size_for(std::size_t n);

/// Linear convolution of two real sequences via zero-padded FFT.
std::vector<double> fft_convolve(const std::vector<double>& a, const std::vector<double>& b);

} // namespace sidefd

#include "sidefd/fft.hpp"

#include "sidefd/errors.hpp"

#include <cmath>
#include <numbers>

namespace sidefd {

namespace {

// Twiddle tables are cached per size; FFT sizes in one run are few.
const std::vector<std::complex<double>>& twiddles(std::size_t n) {
    thread_local std::vector<std::pair<std::size_t, std::vector<std::complex<double>>>> cache;
    for (std::size_t i = 0; i < cache.size(); ++i) {
        if (cache[i].first == n) return cache[i].second;
    }
    std::vector<std::complex<double>> table(n / 2);
    for (std::size_t i = 0; i < n / 2; ++i) {
        const double angle = -2.0 * std::numbers::pi * static_cast<double>(i) / static_cast<double>(n);
        table[i] = {std::cos(angle), std::sin(angle)};
    }
    cache.emplace_back(n, std::move(table));
    return cache.back().second;
}

void fft_core(std::vector<std::complex<double>>& a, bool inverse) {
    const std::size_t n = a.size();
    if (n == 0) return;
    if ((n & (n - 1)) != 0) {
        throw InvalidParamsError("fft: size must be a power of two");
    }
    // Bit-reversal permutation.
    for (std::size_t i = 1, j = 0; i < n; ++i) {
        std::size_t bit = n >> 1;
        for (; j & bit; bit >>= 1) j ^= bit;
        j ^= bit;
        if (i < j) std::swap(a[i], a[j]);
    }
    const auto& tw = twiddles(n);
    for (std::size_t len = 2; len <= n; len <<= 1) {
        const std::size_t stride = n / len;
        for (std::size_t i = 0; i < n; i += len) {
            for (std::size_t k = 0; k < len / 2; ++k) {
                std::complex<double> w = tw[k * stride];
                if (inverse) w = std::conj(w);
                const std::complex<double> u = a[i + k];
                const std::complex<double> v = a[i + k + len / 2] * w;
                a[i + k] = u + v;
                a[i + k + len / 2] = u - v;
            }
        }
    }
    if (inverse) {
        const double scale = 1.0 / static_cast<double>(n);
        for (auto& x : a) x *= scale;
    }
}

} // namespace

void fft_forward(std::vector<std::complex<double>>& a) { fft_core(a, false); }
void fft_inverse(std::vector<std::complex<double>>& a) { fft_core(a, true); }

std::size_t fft_size_for(std::size_t n) {
    std::size_t s = 1;
    while (s < n) s <<= 1;
    return s;
}

std::vector<double> fft_convolve(const std::vector<double>& a, const std::vector<double>& b) {
    if (a.empty() || b.empty()) return {};
    const std::size_t out_len = a.size() + b.size() - 1;
    const std::size_t n = fft_size_for(out_len);
    std::vector<std::complex<double>> fa(n), fb(n);
    for (std::size_t i = 0; i < a.size(); ++i) fa[i] = a[i];
    for (std::size_t i = 0; i < b.size(); ++i) fb[i] = b[i];
    fft_forward(fa);
    fft_forward(fb);
    for (std::size_t i = 0; i < n; ++i) fa[i] *= fb[i];
    fft_inverse(fa);
    std::vector<double> out(out_len);
    for (std::size_t i = 0; i < out_len; ++i) out[i] = fa[i].real();
    return out;
}

} // namespace sidefd

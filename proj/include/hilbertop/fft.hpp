#pragma once

#include <cmath>
#include <complex>
#include <cstddef>
#include <numbers>
#include <stdexcept>
#include <vector>

namespace hilbertop::detail {

inline std::size_t next_pow2(std::size_t n) {
    std::size_t k = 1;
    while (k < n) k <<= 1;
    return k;
}

// Iterative radix-2 transform, in place.  sign = -1 for the forward transform,
// +1 for the inverse; the caller divides by the length after inverting.
// Twiddles come from std::polar at every butterfly instead of the running
// product, trading a few trig calls for ~1e-14 relative accuracy at 2^20.
inline void fft_radix2(std::vector<std::complex<double>>& x, int sign) {
    const std::size_t n = x.size();
    if (n == 0 || (n & (n - 1)) != 0)
        throw std::invalid_argument("fft_radix2: size must be a power of two");

    for (std::size_t i = 1, j = 0; i < n; ++i) {
        std::size_t bit = n >> 1;
        for (; j & bit; bit >>= 1) j ^= bit;
        j ^= bit;
        if (i < j) std::swap(x[i], x[j]);
    }

    for (std::size_t len = 2; len <= n; len <<= 1) {
        const double ang = sign * 2.0 * std::numbers::pi / static_cast<double>(len);
        for (std::size_t i = 0; i < n; i += len) {
            for (std::size_t k = 0; k < len / 2; ++k) {
                const std::complex<double> w = std::polar(1.0, ang * static_cast<double>(k));
                const std::complex<double> u = x[i + k];
                const std::complex<double> v = x[i + k + len / 2] * w;
                x[i + k] = u + v;
                x[i + k + len / 2] = u - v;
            }
        }
    }
}

// Linear convolution of two real sequences.  Result length is
// u.size() + v.size() - 1.
inline std::vector<double> convolve(const std::vector<double>& u,
                                    const std::vector<double>& v) {
    if (u.empty() || v.empty()) throw std::invalid_argument("convolve: empty input");
    const std::size_t out_len = u.size() + v.size() - 1;
    const std::size_t L = next_pow2(out_len);

    std::vector<std::complex<double>> a(L), b(L);
    for (std::size_t i = 0; i < u.size(); ++i) a[i] = u[i];
    for (std::size_t i = 0; i < v.size(); ++i) b[i] = v[i];
    fft_radix2(a, -1);
    fft_radix2(b, -1);
    for (std::size_t i = 0; i < L; ++i) a[i] *= b[i];
    fft_radix2(a, +1);

    std::vector<double> out(out_len);
    for (std::size_t i = 0; i < out_len; ++i) out[i] = a[i].real() / static_cast<double>(L);
    return out;
}

}  // namespace hilbertop::detail

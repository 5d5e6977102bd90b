#pragma once

#include <cmath>
#include <complex>
#include <stdexcept>
#include <vector>

namespace aniso {

using cplx = std::complex<double>;

inline bool is_pow2(std::size_t n) { return n >= 1 && (n & (n - 1)) == 0; }

// In-place iterative radix-2 FFT, unnormalized.
// sign = -1: forward sum_m f[m] e^{-2 pi i m k / n};  sign = +1: inverse kernel.
inline void fft_pow2(std::vector<cplx>& a, int sign) {
    const std::size_t n = a.size();
    if (!is_pow2(n)) throw std::invalid_argument("fft_pow2: length must be a power of two");
    // bit reversal
    for (std::size_t i = 1, j = 0; i < n; ++i) {
        std::size_t bit = n >> 1;
        for (; j & bit; bit >>= 1) j ^= bit;
        j ^= bit;
        if (i < j) std::swap(a[i], a[j]);
    }
    for (std::size_t len = 2; len <= n; len <<= 1) {
        const double ang = sign * 2.0 * M_PI / static_cast<double>(len);
        const cplx wl(std::cos(ang), std::sin(ang));
        for (std::size_t i = 0; i < n; i += len) {
            cplx w(1.0, 0.0);
            for (std::size_t k = 0; k < len / 2; ++k) {
                cplx u = a[i + k];
                cplx v = a[i + k + len / 2] * w;
                a[i + k] = u + v;
                a[i + k + len / 2] = u - v;
                w *= wl;
            }
        }
    }
}

// Unitary DFT (1/sqrt(n) both directions).
inline std::vector<cplx> dft_unitary(std::vector<cplx> a, bool inverse = false) {
    const double s = 1.0 / std::sqrt(static_cast<double>(a.size()));
    fft_pow2(a, inverse ? +1 : -1);
    for (auto& v : a) v *= s;
    return a;
}

}  // namespace aniso

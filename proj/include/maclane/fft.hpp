#pragma once

// In-place radix-2 FFT on power-of-two sizes. sign = +1 evaluates
// sum a_j e^{+i j theta_k}, sign = -1 the conjugate transform.

#include <complex>
#include <cstddef>
#include <stdexcept>
#include <vector>

namespace maclane {

inline std::size_t next_pow2(std::size_t n) {
  std::size_t p = 1;
  while (p < n) p <<= 1;
  return p;
}

inline bool is_pow2(std::size_t n) { return n != 0 && (n & (n - 1)) == 0; }

inline void fft_pow2(std::vector<std::complex<double>>& a, int sign) {
  const std::size_t n = a.size();
  if (!is_pow2(n)) throw std::invalid_argument("fft_pow2: size not a power of two");
  for (std::size_t i = 1, j = 0; i < n; ++i) {
    std::size_t bit = n >> 1;
    for (; j & bit; bit >>= 1) j ^= bit;
    j ^= bit;
    if (i < j) std::swap(a[i], a[j]);
  }
  const long double pi = 3.14159265358979323846264338327950288L;
  for (std::size_t len = 2; len <= n; len <<= 1) {
    const long double ang = sign * 2.0L * pi / (long double)len;
    const std::complex<double> wl((double)cosl(ang), (double)sinl(ang));
    for (std::size_t i = 0; i < n; i += len) {
      std::complex<double> w(1.0, 0.0);
      for (std::size_t j = 0; j < len / 2; ++j) {
        // Resync the twiddle periodically so rounding does not accumulate.
        if ((j & 63u) == 0 && j != 0) {
          const long double aj = ang * (long double)j;
          w = {(double)cosl(aj), (double)sinl(aj)};
        }
        std::complex<double> u = a[i + j];
        std::complex<double> v = a[i + j + len / 2] * w;
        a[i + j] = u + v;
        a[i + j + len / 2] = u - v;
        w *= wl;
      }
    }
  }
}

}  // namespace maclane

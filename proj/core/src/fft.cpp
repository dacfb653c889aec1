#include "fft.hpp"

#include <bit>
#include <cmath>
#include <cstddef>
#include <numbers>

namespace volterra::detail {
namespace {

// exp(sign * 2 pi i m / n) for m in [0, n).
ComplexVector twiddles(std::size_t n, double sign) {
  ComplexVector w(n);
  for (std::size_t m = 0; m < n; ++m) {
    const double angle =
        sign * 2.0 * std::numbers::pi * static_cast<double>(m) / static_cast<double>(n);
    w[m] = {std::cos(angle), std::sin(angle)};
  }
  return w;
}

void radix2_inplace(ComplexVector& a, bool inverse) {
  const std::size_t n = a.size();
  for (std::size_t i = 1, j = 0; i < n; ++i) {
    std::size_t bit = n >> 1;
    for (; j & bit; bit >>= 1) j ^= bit;
    j ^= bit;
    if (i < j) std::swap(a[i], a[j]);
  }
  const ComplexVector w = twiddles(n, inverse ? 1.0 : -1.0);
  for (std::size_t len = 2; len <= n; len <<= 1) {
    const std::size_t stride = n / len;
    const std::size_t half = len / 2;
    for (std::size_t start = 0; start < n; start += len) {
      for (std::size_t k = 0; k < half; ++k) {
        const std::complex<double> u = a[start + k];
        const std::complex<double> v = a[start + k + half] * w[k * stride];
        a[start + k] = u + v;
        a[start + k + half] = u - v;
      }
    }
  }
}

// Chirp-z (Bluestein) evaluation for lengths that are not powers of two.
ComplexVector bluestein(const ComplexVector& input, bool inverse) {
  const std::size_t n = input.size();
  const double sign = inverse ? 1.0 : -1.0;
  // chirp[k] = exp(sign * i pi k^2 / n); k^2 is reduced mod 2n to keep the
  // argument small and the phase exact.
  ComplexVector chirp(n);
  for (std::size_t k = 0; k < n; ++k) {
    const std::size_t k2 = (k * k) % (2 * n);
    const double angle =
        sign * std::numbers::pi * static_cast<double>(k2) / static_cast<double>(n);
    chirp[k] = {std::cos(angle), std::sin(angle)};
  }
  const std::size_t m = std::bit_ceil(2 * n - 1);
  ComplexVector a(m), b(m);
  for (std::size_t k = 0; k < n; ++k) a[k] = input[k] * chirp[k];
  b[0] = std::conj(chirp[0]);
  for (std::size_t k = 1; k < n; ++k) {
    b[k] = std::conj(chirp[k]);
    b[m - k] = std::conj(chirp[k]);
  }
  radix2_inplace(a, false);
  radix2_inplace(b, false);
  for (std::size_t i = 0; i < m; ++i) a[i] *= b[i];
  radix2_inplace(a, true);
  const double scale = 1.0 / static_cast<double>(m);
  ComplexVector out(n);
  for (std::size_t k = 0; k < n; ++k) out[k] = a[k] * scale * chirp[k];
  return out;
}

}  // namespace

ComplexVector direct_transform(const ComplexVector& input, bool inverse) {
  const std::size_t n = input.size();
  const ComplexVector w = twiddles(n, inverse ? 1.0 : -1.0);
  ComplexVector out(n);
  for (std::size_t bin = 0; bin < n; ++bin) {
    std::complex<double> acc = 0.0;
    std::size_t m = 0;  // (bin * k) mod n, advanced incrementally
    for (std::size_t k = 0; k < n; ++k) {
      acc += input[k] * w[m];
      m += bin;
      if (m >= n) m -= n;
    }
    out[bin] = acc;
  }
  return out;
}

ComplexVector fast_transform(const ComplexVector& input, bool inverse) {
  if (input.size() <= 1) return input;
  if (std::has_single_bit(input.size())) {
    ComplexVector a = input;
    radix2_inplace(a, inverse);
    return a;
  }
  return bluestein(input, inverse);
}

}  // namespace volterra::detail

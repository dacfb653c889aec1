#pragma once

#include <complex>
#include <vector>

namespace volterra::detail {

using ComplexVector = std::vector<std::complex<double>>;

// Unnormalized transforms: forward uses exp(-2 pi i nk/N), inverse uses
// exp(+2 pi i nk/N). Neither applies the 1/N factor.
ComplexVector direct_transform(const ComplexVector& input, bool inverse);
ComplexVector fast_transform(const ComplexVector& input, bool inverse);

}  // namespace volterra::detail

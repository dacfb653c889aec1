#pragma once

#include <cstddef>
#include <span>
#include <utility>
#include <vector>

#include "volterra/signal.hpp"

namespace volterra {

// Number of packed coefficients of order 2 and 3 for memory M.
constexpr std::size_t order2_size(std::size_t m) { return m * (m + 1) / 2; }
constexpr std::size_t order3_size(std::size_t m) { return m * (m + 1) * (m + 2) / 6; }

// Flat position of the pair (i, j), i <= j < M, in row-major order over
// ordered pairs. Throws kInvalidIndex otherwise.
std::size_t pack_index2(std::size_t i, std::size_t j, std::size_t m);
std::pair<std::size_t, std::size_t> unpack_index2(std::size_t flat, std::size_t m);

// Same for triples i <= j <= l < M. The enumeration coincides with the order
// in which build_expansion fills x3.
std::size_t pack_index3(std::size_t i, std::size_t j, std::size_t l, std::size_t m);
struct Triple {
  std::size_t i, j, l;
  friend bool operator==(const Triple&, const Triple&) = default;
};
Triple unpack_index3(std::size_t flat, std::size_t m);

// Truncated third-order Volterra kernel with packed symmetric blocks. An
// off-diagonal packed coefficient holds the sum of all symmetric entries that
// share its index multiset, so filtering is a plain dot product.
class VolterraKernel {
 public:
  // Zero kernel. Throws kInvalidInput for memory < 1.
  explicit VolterraKernel(std::size_t memory);
  // Throws kInvalidInput on block-size mismatch or non-finite coefficients.
  VolterraKernel(std::size_t memory, double h0, std::vector<double> h1,
                 std::vector<double> h2, std::vector<double> h3);

  // h1 = [1, 0, ..., 0], everything else zero.
  static VolterraKernel identity(std::size_t memory);

  std::size_t memory() const { return memory_; }
  double h0() const { return h0_; }
  const std::vector<double>& h1() const { return h1_; }
  const std::vector<double>& h2() const { return h2_; }
  const std::vector<double>& h3() const { return h3_; }

  void set_h0(double v) { h0_ = v; }
  std::span<double> h1() { return h1_; }
  std::span<double> h2() { return h2_; }
  std::span<double> h3() { return h3_; }

  bool is_finite() const;

  friend bool operator==(const VolterraKernel&, const VolterraKernel&) = default;

 private:
  std::size_t memory_;
  double h0_ = 0.0;
  std::vector<double> h1_, h2_, h3_;
};

struct ExpansionVectors {
  std::vector<double> x1;  // [x(k), x(k-1), ..., x(k-M+1)]
  std::vector<double> x2;
  std::vector<double> x3;
  std::size_t k = 0;
};

// Builds x1/x2/x3 from a window ordered most recent first (window[0] = x(k)).
// Throws kInvalidInput if window is empty.
ExpansionVectors build_expansion(std::span<const double> window);

// Fills `out` (already sized for memory m) for sample k of x, with zeros for
// samples before the start.
void build_expansion_at(std::span<const double> x, std::size_t k, std::size_t m,
                        ExpansionVectors& out);

// y(n) = h0 + h1.x1(n) + h2.x2(n) + h3.x3(n) with zero pre-history. Throws
// kNumericOverflow naming the first sample whose output is not finite.
Signal apply_kernel(const VolterraKernel& kernel, const Signal& signal);

// Output for one expansion, without h0.
double kernel_dot(const VolterraKernel& kernel, const ExpansionVectors& v);

// Symmetric part of a dense kernel, packed with multiplicities absorbed.
// Throws kInvalidInput unless the input is square / cubic.
using DenseMatrix = std::vector<std::vector<double>>;
using DenseCube = std::vector<std::vector<std::vector<double>>>;
std::vector<double> symmetrize_dense(const DenseMatrix& h2);
std::vector<double> symmetrize_dense(const DenseCube& h3);

}  // namespace volterra

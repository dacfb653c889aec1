#include "volterra/kernel.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <string>

#include "volterra/error.hpp"

namespace volterra {
namespace {

void check_block(const std::vector<double>& block, std::size_t expected, const char* name) {
  if (block.size() != expected) {
    throw Error(ErrorCode::kInvalidInput, std::string(name) + " has " +
                                              std::to_string(block.size()) + " coefficients, expected " +
                                              std::to_string(expected));
  }
}

bool all_finite(const std::vector<double>& v) {
  return std::all_of(v.begin(), v.end(), [](double x) { return std::isfinite(x); });
}

}  // namespace

std::size_t pack_index2(std::size_t i, std::size_t j, std::size_t m) {
  if (!(i <= j && j < m)) {
    throw Error(ErrorCode::kInvalidIndex, "pair (" + std::to_string(i) + ", " + std::to_string(j) +
                                              ") invalid for memory " + std::to_string(m));
  }
  return i * m - i * (i + 1) / 2 + j;
}

std::pair<std::size_t, std::size_t> unpack_index2(std::size_t flat, std::size_t m) {
  if (flat >= order2_size(m)) {
    throw Error(ErrorCode::kInvalidIndex, "flat index " + std::to_string(flat) + " out of range");
  }
  std::size_t i = 0;
  while (flat >= m - i) {
    flat -= m - i;
    ++i;
  }
  return {i, i + flat};
}

std::size_t pack_index3(std::size_t i, std::size_t j, std::size_t l, std::size_t m) {
  if (!(i <= j && j <= l && l < m)) {
    throw Error(ErrorCode::kInvalidIndex, "triple (" + std::to_string(i) + ", " + std::to_string(j) +
                                              ", " + std::to_string(l) + ") invalid for memory " +
                                              std::to_string(m));
  }
  // Rows before i contribute order2_size(m - i') entries each.
  return order3_size(m) - order3_size(m - i) + pack_index2(j, l, m) - pack_index2(i, i, m);
}

Triple unpack_index3(std::size_t flat, std::size_t m) {
  if (flat >= order3_size(m)) {
    throw Error(ErrorCode::kInvalidIndex, "flat index " + std::to_string(flat) + " out of range");
  }
  std::size_t i = 0;
  while (flat >= order2_size(m - i)) {
    flat -= order2_size(m - i);
    ++i;
  }
  const auto [j, l] = unpack_index2(pack_index2(i, i, m) + flat, m);
  return {i, j, l};
}

VolterraKernel::VolterraKernel(std::size_t memory) : memory_(memory) {
  if (memory < 1) throw Error(ErrorCode::kInvalidInput, "kernel memory must be >= 1");
  h1_.assign(memory, 0.0);
  h2_.assign(order2_size(memory), 0.0);
  h3_.assign(order3_size(memory), 0.0);
}

VolterraKernel::VolterraKernel(std::size_t memory, double h0, std::vector<double> h1,
                               std::vector<double> h2, std::vector<double> h3)
    : memory_(memory), h0_(h0), h1_(std::move(h1)), h2_(std::move(h2)), h3_(std::move(h3)) {
  if (memory < 1) throw Error(ErrorCode::kInvalidInput, "kernel memory must be >= 1");
  check_block(h1_, memory, "h1");
  check_block(h2_, order2_size(memory), "h2");
  check_block(h3_, order3_size(memory), "h3");
  if (!is_finite()) throw Error(ErrorCode::kInvalidInput, "kernel has non-finite coefficients");
}

VolterraKernel VolterraKernel::identity(std::size_t memory) {
  VolterraKernel k(memory);
  k.h1_[0] = 1.0;
  return k;
}

bool VolterraKernel::is_finite() const {
  return std::isfinite(h0_) && all_finite(h1_) && all_finite(h2_) && all_finite(h3_);
}

namespace {

void fill_products(std::size_t m, ExpansionVectors& v) {
  std::size_t idx = 0;
  for (std::size_t i = 0; i < m; ++i) {
    for (std::size_t j = i; j < m; ++j) v.x2[idx++] = v.x1[i] * v.x1[j];
  }
  // x3 = x1^T * x2 restricted to non-redundant products: for row i, take the
  // tail of x2 whose first factor index is >= i.
  idx = 0;
  std::size_t x2_start = 0;
  const std::size_t n2 = v.x2.size();
  for (std::size_t i = 0; i < m; ++i) {
    for (std::size_t j = x2_start; j < n2; ++j) v.x3[idx++] = v.x1[i] * v.x2[j];
    x2_start += m - i;
  }
}

}  // namespace

ExpansionVectors build_expansion(std::span<const double> window) {
  if (window.empty()) throw Error(ErrorCode::kInvalidInput, "expansion window is empty");
  const std::size_t m = window.size();
  ExpansionVectors v;
  v.x1.assign(window.begin(), window.end());
  v.x2.resize(order2_size(m));
  v.x3.resize(order3_size(m));
  fill_products(m, v);
  return v;
}

void build_expansion_at(std::span<const double> x, std::size_t k, std::size_t m,
                        ExpansionVectors& out) {
  out.x1.resize(m);
  out.x2.resize(order2_size(m));
  out.x3.resize(order3_size(m));
  for (std::size_t i = 0; i < m; ++i) out.x1[i] = i <= k ? x[k - i] : 0.0;
  out.k = k;
  fill_products(m, out);
}

double kernel_dot(const VolterraKernel& kernel, const ExpansionVectors& v) {
  double y1 = 0.0, y2 = 0.0, y3 = 0.0;
  const auto& h1 = kernel.h1();
  const auto& h2 = kernel.h2();
  const auto& h3 = kernel.h3();
  for (std::size_t i = 0; i < h1.size(); ++i) y1 += h1[i] * v.x1[i];
  for (std::size_t i = 0; i < h2.size(); ++i) y2 += h2[i] * v.x2[i];
  for (std::size_t i = 0; i < h3.size(); ++i) y3 += h3[i] * v.x3[i];
  return y1 + y2 + y3;
}

Signal apply_kernel(const VolterraKernel& kernel, const Signal& signal) {
  const std::size_t m = kernel.memory();
  const auto x = signal.samples();
  std::vector<double> y(x.size());
  ExpansionVectors v;
  for (std::size_t k = 0; k < x.size(); ++k) {
    build_expansion_at(x, k, m, v);
    y[k] = kernel.h0() + kernel_dot(kernel, v);
    if (!std::isfinite(y[k])) {
      throw Error(ErrorCode::kNumericOverflow,
                  "kernel output is not finite at sample " + std::to_string(k));
    }
  }
  return Signal(std::move(y), signal.sample_rate());
}

std::vector<double> symmetrize_dense(const DenseMatrix& h) {
  const std::size_t m = h.size();
  if (m == 0) throw Error(ErrorCode::kInvalidInput, "dense kernel is empty");
  for (const auto& row : h) {
    if (row.size() != m) throw Error(ErrorCode::kInvalidInput, "dense order-2 kernel is not square");
  }
  std::vector<double> packed(order2_size(m));
  for (std::size_t i = 0; i < m; ++i) {
    for (std::size_t j = i; j < m; ++j) {
      const double sym = 0.5 * (h[i][j] + h[j][i]);
      packed[pack_index2(i, j, m)] = (i == j ? 1.0 : 2.0) * sym;
    }
  }
  return packed;
}

std::vector<double> symmetrize_dense(const DenseCube& h) {
  const std::size_t m = h.size();
  if (m == 0) throw Error(ErrorCode::kInvalidInput, "dense kernel is empty");
  for (const auto& plane : h) {
    if (plane.size() != m) throw Error(ErrorCode::kInvalidInput, "dense order-3 kernel is not cubic");
    for (const auto& row : plane) {
      if (row.size() != m) throw Error(ErrorCode::kInvalidInput, "dense order-3 kernel is not cubic");
    }
  }
  std::vector<double> packed(order3_size(m));
  for (std::size_t i = 0; i < m; ++i) {
    for (std::size_t j = i; j < m; ++j) {
      for (std::size_t l = j; l < m; ++l) {
        std::array<std::size_t, 3> p{i, j, l};
        double sum = 0.0;
        do {
          sum += h[p[0]][p[1]][p[2]];
        } while (std::next_permutation(p.begin(), p.end()));
        // next_permutation visits each distinct ordering once, which is the
        // multiplicity times the symmetric average.
        packed[pack_index3(i, j, l, m)] = sum;
      }
    }
  }
  return packed;
}

}  // namespace volterra

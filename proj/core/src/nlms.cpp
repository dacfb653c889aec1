#include "volterra/nlms.hpp"

#include <chrono>
#include <cmath>
#include <string>

#include "volterra/error.hpp"

namespace volterra {
namespace {

constexpr std::size_t kPrecomputeBudgetBytes = std::size_t{1} << 30;

double squared_norm(std::span<const double> x) {
  double s = 0.0;
  for (double v : x) s += v * v;
  return s;
}

void update(std::span<double> h, std::span<const double> x, double scale) {
  for (std::size_t i = 0; i < h.size(); ++i) h[i] += scale * x[i];
}

double dot(std::span<const double> h, std::span<const double> x) {
  double s = 0.0;
  for (std::size_t i = 0; i < h.size(); ++i) s += h[i] * x[i];
  return s;
}

// One NLMS step on the given expansion blocks; returns e(k).
double nlms_step(const EstimationConfig& c, VolterraKernel& kernel, double desired,
                 std::span<const double> x1, std::span<const double> x2,
                 std::span<const double> x3) {
  const double y = dot(kernel.h1(), x1) + dot(kernel.h2(), x2) + dot(kernel.h3(), x3);
  const double e = desired - y;
  if (e != 0.0) {
    update(kernel.h1(), x1, step_size(c.alpha1, x1, c.phi) * e);
    update(kernel.h2(), x2, step_size(c.alpha2, x2, c.phi) * e);
    update(kernel.h3(), x3, step_size(c.alpha3, x3, c.phi) * e);
  }
  return e;
}

void check_sweep(double mean_error, int sweep) {
  if (!std::isfinite(mean_error) || mean_error > kDivergenceLimit) {
    throw Error(ErrorCode::kDivergence,
                "estimation diverged at iteration " + std::to_string(sweep) +
                    " (mean error " + std::to_string(mean_error) + ")");
  }
}

}  // namespace

void EstimationConfig::validate() const {
  auto in_open = [](double v, double lo, double hi) { return v > lo && v < hi; };
  if (memory < 1) throw Error(ErrorCode::kConfig, "memory must be >= 1");
  if (!in_open(alpha1, 0.0, 2.0) || !in_open(alpha2, 0.0, 2.0) || !in_open(alpha3, 0.0, 2.0)) {
    throw Error(ErrorCode::kConfig, "step sizes alpha1..alpha3 must lie in (0, 2)");
  }
  if (!in_open(phi, 0.0, 1.0)) throw Error(ErrorCode::kConfig, "phi must lie in (0, 1)");
  if (max_iterations < 1) throw Error(ErrorCode::kConfig, "iterations must be >= 1");
  if (!(error_threshold >= 0.0)) throw Error(ErrorCode::kConfig, "errorMax must be >= 0");
}

double step_size(double alpha, std::span<const double> x, double phi) {
  return alpha / (squared_norm(x) + phi);
}

VolterraKernel init_kernel(std::size_t memory) { return VolterraKernel::identity(memory); }

EstimationReport estimate(const EstimationConfig& config, const Signal& input,
                          const Signal& desired) {
  config.validate();
  if (input.size() != desired.size()) {
    throw Error(ErrorCode::kInvalidInput, "input has " + std::to_string(input.size()) +
                                              " samples but desired has " +
                                              std::to_string(desired.size()));
  }
  if (input.empty()) throw Error(ErrorCode::kInvalidInput, "cannot estimate from empty signals");
  if (input.sample_rate() != desired.sample_rate()) {
    throw Error(ErrorCode::kInvalidInput, "input and desired sample rates differ");
  }

  const std::size_t m = config.memory;
  const std::size_t n = input.size();
  const std::size_t n1 = m, n2 = order2_size(m), n3 = order3_size(m);
  const auto x = input.samples();
  const auto d = desired.samples();

  EstimationReport report;
  report.kernel = init_kernel(m);
  VolterraKernel& h = report.kernel;

  std::vector<double> table;
  ExpansionVectors v;
  const std::size_t stride = n1 + n2 + n3;
  if (config.precompute) {
    if (stride * n > kPrecomputeBudgetBytes / sizeof(double)) {
      throw Error(ErrorCode::kConfig, "precomputed expansion for memory " + std::to_string(m) +
                                          " and " + std::to_string(n) +
                                          " samples exceeds the 1 GiB budget");
    }
    table.resize(stride * n);
    for (std::size_t k = 0; k < n; ++k) {
      build_expansion_at(x, k, m, v);
      double* row = table.data() + k * stride;
      std::copy(v.x1.begin(), v.x1.end(), row);
      std::copy(v.x2.begin(), v.x2.end(), row + n1);
      std::copy(v.x3.begin(), v.x3.end(), row + n1 + n2);
    }
  }

  for (int sweep = 1; sweep <= config.max_iterations; ++sweep) {
    double abs_sum = 0.0;
    for (std::size_t k = 0; k < n; ++k) {
      double e;
      if (config.precompute) {
        const double* row = table.data() + k * stride;
        e = nlms_step(config, h, d[k], {row, n1}, {row + n1, n2}, {row + n1 + n2, n3});
      } else {
        build_expansion_at(x, k, m, v);
        e = nlms_step(config, h, d[k], v.x1, v.x2, v.x3);
      }
      if (!std::isfinite(e)) check_sweep(e, sweep);
      abs_sum += std::abs(e);
    }
    const double mean_error = abs_sum / static_cast<double>(n);
    check_sweep(mean_error, sweep);
    report.error_trace.push_back(mean_error);
    report.iterations_run = sweep;
    if (mean_error < config.error_threshold) {
      report.stopped_early = true;
      break;
    }
  }
  if (!h.is_finite()) {
    throw Error(ErrorCode::kDivergence, "estimation produced non-finite coefficients");
  }
  report.training_residual_mse = mse(apply_kernel(h, input), desired);
  return report;
}

SpeedupProbe estimate_precomputed_speedup_probe(EstimationConfig config, const Signal& input,
                                                const Signal& desired) {
  using Clock = std::chrono::steady_clock;
  SpeedupProbe probe;

  config.precompute = false;
  auto t0 = Clock::now();
  EstimationReport plain = estimate(config, input, desired);
  auto t1 = Clock::now();
  config.precompute = true;
  EstimationReport fast = estimate(config, input, desired);
  auto t2 = Clock::now();

  if (!(plain.kernel == fast.kernel) || plain.error_trace != fast.error_trace) {
    throw Error(ErrorCode::kImplementationBug,
                "precomputed and on-the-fly estimation produced different kernels");
  }
  probe.on_the_fly_seconds = std::chrono::duration<double>(t1 - t0).count();
  probe.precomputed_seconds = std::chrono::duration<double>(t2 - t1).count();
  probe.report = std::move(fast);
  return probe;
}

}  // namespace volterra

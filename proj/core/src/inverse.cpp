#include "volterra/inverse.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "volterra/error.hpp"

namespace volterra {
namespace {

double max_abs(const std::vector<double>& v) {
  double m = 0.0;
  for (double x : v) m = std::max(m, std::abs(x));
  return m;
}

double ratio(double num, double den) {
  if (den > 0.0) return num / den;
  return num > 0.0 ? HUGE_VAL : 1.0;
}

}  // namespace

void SyntheticPlant::validate() const {
  if (!(noise_level >= 0.0)) throw Error(ErrorCode::kInvalidInput, "noise level must be >= 0");
  const double g1 = max_abs(kernel.h1());
  if (!(max_abs(kernel.h2()) < 0.5 * g1) || !(max_abs(kernel.h3()) < 0.5 * g1)) {
    throw Error(ErrorCode::kInvalidInput,
                "plant is not weakly nonlinear: higher-order kernels must stay below half of max|h1|");
  }
}

SyntheticPlant random_plant(std::size_t memory, std::uint64_t seed, double noise_level) {
  if (memory < 1) throw Error(ErrorCode::kInvalidInput, "plant memory must be >= 1");
  std::vector<double> h1(memory, 1.0);
  const std::vector<double> tail = uniform_noise(memory - 1, 0.5, seed);
  std::copy(tail.begin(), tail.end(), h1.begin() + 1);
  SyntheticPlant plant;
  plant.kernel = VolterraKernel(memory, 0.0, std::move(h1),
                                uniform_noise(order2_size(memory), 0.1, seed + 1),
                                uniform_noise(order3_size(memory), 0.01, seed + 2));
  plant.noise_level = noise_level;
  plant.seed = seed + 3;
  plant.validate();
  return plant;
}

Signal simulate_plant(const SyntheticPlant& plant, const Signal& input) {
  plant.validate();
  Signal clean = apply_kernel(plant.kernel, input);
  if (plant.noise_level == 0.0) return clean;
  std::vector<double> y = clean.values();
  const std::vector<double> noise = uniform_noise(y.size(), plant.noise_level, plant.seed);
  for (std::size_t k = 0; k < y.size(); ++k) y[k] += noise[k];
  return Signal(std::move(y), input.sample_rate());
}

VolterraKernel estimate_inverse(const EstimationConfig& config, const Signal& plant_input,
                                const Signal& plant_output) {
  return estimate(config, plant_output, plant_input).kernel;
}

CascadeReport evaluate_cascade(const SyntheticPlant& plant, const VolterraKernel& inverse,
                               const Signal& probe, const CascadeOptions& options) {
  CascadeReport report;
  const Signal corrected = simulate_plant(plant, apply_kernel(inverse, probe));
  report.residual_mse = mse(corrected, probe);

  if (options.fundamental > 0.0) {
    const Signal uncorrected = simulate_plant(plant, probe);
    report.uncorrected_db = harmonic_levels(uncorrected, options.fundamental, options.harmonics).levels_db;
    report.corrected_db = harmonic_levels(corrected, options.fundamental, options.harmonics).levels_db;
    const std::size_t n = std::min(report.uncorrected_db.size(), report.corrected_db.size());
    for (std::size_t k = 0; k < n; ++k) {
      report.suppression_db.push_back(report.uncorrected_db[k] - report.corrected_db[k]);
    }
  }

  const auto& a = plant.kernel.h1();
  const auto& b = inverse.h1();
  std::vector<double> conv(a.size() + b.size() - 1, 0.0);
  for (std::size_t i = 0; i < a.size(); ++i) {
    for (std::size_t j = 0; j < b.size(); ++j) conv[i + j] += a[i] * b[j];
  }
  conv[0] -= 1.0;
  double s = 0.0;
  for (double v : conv) s += v * v;
  report.first_order_gain_error = std::sqrt(s);

  report.extrapolated = options.training_peak > 0.0 && probe.peak() > options.training_peak;
  return report;
}

double ProbeResidual::agreement() const {
  const double hi = std::max(pre, post);
  const double lo = std::min(pre, post);
  return ratio(hi, lo);
}

EquivalenceReport verify_pre_post_equivalence(const SyntheticPlant& plant,
                                              const VolterraKernel& inverse,
                                              const std::vector<Signal>& probes, int order) {
  if (probes.size() < 3) {
    throw Error(ErrorCode::kInvalidInput, "equivalence check needs probes at three or more amplitudes");
  }
  EquivalenceReport report;
  for (const Signal& x : probes) {
    ProbeResidual r;
    r.amplitude = x.peak();
    r.pre = mse(apply_kernel(plant.kernel, apply_kernel(inverse, x)), x);
    r.post = mse(apply_kernel(inverse, apply_kernel(plant.kernel, x)), x);
    report.worst_agreement = std::max(report.worst_agreement, r.agreement());
    report.probes.push_back(r);
  }
  std::sort(report.probes.begin(), report.probes.end(),
            [](const ProbeResidual& a, const ProbeResidual& b) { return a.amplitude < b.amplitude; });

  report.required_halving_ratio = std::exp2(2.0 * (order + 1) - 2.0) / 3.0;
  report.order_consistent = true;
  for (std::size_t i = 0; i < report.probes.size(); ++i) {
    for (std::size_t j = i + 1; j < report.probes.size(); ++j) {
      const ProbeResidual& small = report.probes[i];
      const ProbeResidual& large = report.probes[j];
      if (small.amplitude <= 0.0 || std::abs(large.amplitude / small.amplitude - 2.0) > 1e-6) continue;
      const double rp = ratio(large.pre, small.pre);
      const double rq = ratio(large.post, small.post);
      report.pre_halving_ratios.push_back(rp);
      report.post_halving_ratios.push_back(rq);
      if (rp < report.required_halving_ratio || rq < report.required_halving_ratio) {
        report.order_consistent = false;
      }
    }
  }
  if (report.pre_halving_ratios.empty()) report.order_consistent = false;
  return report;
}

}  // namespace volterra

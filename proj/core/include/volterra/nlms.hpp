#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "volterra/kernel.hpp"
#include "volterra/signal.hpp"

namespace volterra {

struct EstimationConfig {
  std::size_t memory = 1;
  double alpha1 = 1.0;
  double alpha2 = 0.4;
  double alpha3 = 0.3;
  double phi = 0.5;
  int max_iterations = 100;
  // Estimation stops after the first sweep whose mean |e| falls below this.
  double error_threshold = 0.0;
  // Build every expansion vector once up front instead of per sweep.
  bool precompute = false;

  // Throws kConfig unless 0 < alpha_i < 2, 0 < phi < 1, memory >= 1,
  // max_iterations >= 1 and error_threshold >= 0.
  void validate() const;
};

struct EstimationReport {
  int iterations_run = 0;
  // Mean |e(k)| over each sweep, one entry per sweep.
  std::vector<double> error_trace;
  bool stopped_early = false;
  VolterraKernel kernel{1};
  // mse(apply_kernel(kernel, input), desired) for the returned kernel.
  double training_residual_mse = 0.0;
};

// Mean error above which a run is declared divergent.
inline constexpr double kDivergenceLimit = 1e6;

// Normalized step alpha / (|x|^2 + phi).
double step_size(double alpha, std::span<const double> x, double phi);

// Identity kernel of the given memory; throws kInvalidInput for memory < 1.
VolterraKernel init_kernel(std::size_t memory);

// NLMS identification of a kernel mapping input to desired. Every sweep
// visits the samples in order and updates all three blocks after each one;
// h0 is never updated. Throws kConfig for an invalid config, kInvalidInput on
// length or rate mismatch and kDivergence (naming the sweep) when the mean
// error exceeds kDivergenceLimit or stops being finite. With precompute set,
// the expansion matrix must fit in about 1 GiB, otherwise kConfig.
EstimationReport estimate(const EstimationConfig& config, const Signal& input,
                          const Signal& desired);

struct SpeedupProbe {
  double on_the_fly_seconds = 0.0;
  double precomputed_seconds = 0.0;
  EstimationReport report;

  // Relative time saved by precomputing, 1 - precomputed / on_the_fly.
  double reduction() const {
    return on_the_fly_seconds > 0.0 ? 1.0 - precomputed_seconds / on_the_fly_seconds : 0.0;
  }
};

// Average reduction reported for the precomputed path in the reference work.
inline constexpr double kReferenceReduction = 0.13;

// Times both paths on the same data. Throws kImplementationBug if their
// kernels or traces differ in any bit.
SpeedupProbe estimate_precomputed_speedup_probe(EstimationConfig config, const Signal& input,
                                                const Signal& desired);

}  // namespace volterra

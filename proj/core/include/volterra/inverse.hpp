#pragma once

#include <cstdint>
#include <vector>

#include "volterra/kernel.hpp"
#include "volterra/nlms.hpp"
#include "volterra/signal.hpp"

namespace volterra {

// Ground-truth weakly nonlinear system used in place of measured data.
struct SyntheticPlant {
  VolterraKernel kernel{1};
  double noise_level = 0.0;  // additive uniform noise in [-noise_level, noise_level]
  std::uint64_t seed = 0;

  // Throws kInvalidInput unless noise_level >= 0 and the first order
  // dominates: max|h2| and max|h3| both below 0.5 max|h1|.
  void validate() const;
};

// h1 = [1, u...] with u uniform in [-0.5, 0.5]; h2 uniform in [-0.1, 0.1];
// h3 uniform in [-0.01, 0.01]. Deterministic in seed.
SyntheticPlant random_plant(std::size_t memory, std::uint64_t seed, double noise_level = 0.0);

// apply_kernel(plant.kernel, input) plus the plant's seeded noise.
Signal simulate_plant(const SyntheticPlant& plant, const Signal& input);

// Post-inverse identified by swapping the signals: the plant output is the
// estimator input and the plant input is the desired signal.
VolterraKernel estimate_inverse(const EstimationConfig& config, const Signal& plant_input,
                                const Signal& plant_output);

struct CascadeOptions {
  // Fundamental of a sine probe in Hz; 0 skips the harmonic comparison.
  double fundamental = 0.0;
  int harmonics = 3;
  // Peak amplitude seen in training; probes above it are flagged. 0 = unknown.
  double training_peak = 0.0;
};

struct CascadeReport {
  // mse(plant(inverse(probe)), probe).
  double residual_mse = 0.0;
  // Harmonic levels in dB re the fundamental, k = 1..harmonics, for the plant
  // alone and for the pre-distorted cascade.
  std::vector<double> uncorrected_db;
  std::vector<double> corrected_db;
  // uncorrected_db - corrected_db, positive when the inverse helps.
  std::vector<double> suppression_db;
  // || h1_plant * h1_inverse - delta ||_2, the distance of the first-order
  // cascade from unity.
  double first_order_gain_error = 0.0;
  // Probe peak exceeded the training amplitude.
  bool extrapolated = false;
};

CascadeReport evaluate_cascade(const SyntheticPlant& plant, const VolterraKernel& inverse,
                               const Signal& probe, const CascadeOptions& options = {});

struct ProbeResidual {
  double amplitude = 0.0;  // probe peak
  double pre = 0.0;        // mse(H(G(x)), x)
  double post = 0.0;       // mse(G(H(x)), x)
  // max(pre, post) / min(pre, post); 1 when both vanish.
  double agreement() const;
};

struct EquivalenceReport {
  std::vector<ProbeResidual> probes;  // sorted by amplitude
  // Residual ratios between successive probes whose amplitudes differ by 2x,
  // for the pre and post cascades.
  std::vector<double> pre_halving_ratios;
  std::vector<double> post_halving_ratios;
  // Ratio required of an order-(p+1) remainder: 2^(2(p+1)-2) / 3.
  double required_halving_ratio = 0.0;
  bool order_consistent = false;
  // Largest pre/post disagreement over all probes.
  double worst_agreement = 1.0;
};

// Runs both cascades noise-free on every probe. `order` is the truncation
// order p of the inverse. Throws kInvalidInput with fewer than three probes.
EquivalenceReport verify_pre_post_equivalence(const SyntheticPlant& plant,
                                              const VolterraKernel& inverse,
                                              const std::vector<Signal>& probes, int order = 3);

}  // namespace volterra

#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "volterra/inverse.hpp"
#include "volterra/nlms.hpp"
#include "volterra/note_bank.hpp"
#include "volterra/signal.hpp"

namespace volterra {

struct CatalogEntry {
  std::string name;
  SignalSpec spec;
};

// The measurement test set: chirp 20-150 Hz, sines at 20, 50 and 70 Hz, and
// multisines {20, 26, 32} Hz ("multisine6") and {20, 23, 26} Hz
// ("multisine3").
std::vector<CatalogEntry> test_catalog(double duration_s, double amplitude);

struct ProtocolConfig {
  EstimationConfig estimation{.memory = 3, .max_iterations = 20};
  std::size_t plant_memory = 3;
  std::uint64_t seed = 7;
  double noise_level = 1e-3;
  double measurement_rate = 2560.0;
  int decimation = 5;
  double train_fraction = 0.7;
  double duration_s = 4.0;
  double amplitude = 0.8;
};

struct ProtocolRow {
  std::string name;
  std::size_t train_samples = 0;
  std::size_t test_samples = 0;
  int forward_iterations = 0;
  int inverse_iterations = 0;
  // Held-out mse of the forward model against the plant output.
  double forward_test_mse = 0.0;
  // Held-out mse of the inverse model against the plant input.
  double inverse_test_mse = 0.0;
  // Held-out mse between plant output and input, i.e. doing nothing.
  double baseline_test_mse = 0.0;
  // A diverged fit reports 0 iterations and a NaN test mse; the remaining
  // rows still run.
  bool forward_diverged = false;
  bool inverse_diverged = false;
};

// For each catalog signal: render at the measurement rate, pass it through a
// random plant, decimate input and output, split train/test, estimate the
// forward and inverse kernels on the training part and score both on the
// test part. Narrowband signals can drive the inverse fit unstable; that is
// recorded in the row instead of aborting the run.
std::vector<ProtocolRow> run_protocol(const ProtocolConfig& config);

struct BankDemoReport {
  // Stopband peak (dB) of the [22.19, 24.04] Hz bandpass at each setting.
  double narrow_full_rate_db = 0.0;   // 44100 Hz, order 100
  double narrow_band_rate_db = 0.0;   // 300 Hz, order 50
  std::size_t bank_entries = 0;
  std::size_t bank_infeasible = 0;
  RecombineReport recombine;
};

// Narrow-filter comparison plus a full split/recombine of a sub-200 Hz
// multisine at 44100 Hz with unit gains.
BankDemoReport run_bank_demo(double duration_s = 2.0);

}  // namespace volterra

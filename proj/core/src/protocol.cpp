#include "volterra/protocol.hpp"

#include <limits>

#include "volterra/error.hpp"
#include "volterra/fir.hpp"
#include "volterra/kernel.hpp"

namespace volterra {

std::vector<CatalogEntry> test_catalog(double duration_s, double amplitude) {
  auto spec = [&](SignalKind kind, std::vector<double> freqs) {
    SignalSpec s;
    s.kind = kind;
    s.frequencies = std::move(freqs);
    s.duration = duration_s;
    s.amplitudes = {amplitude};
    return s;
  };
  return {
      {"chirp", spec(SignalKind::kChirp, {20.0, 150.0})},
      {"20Hz", spec(SignalKind::kSine, {20.0})},
      {"50Hz", spec(SignalKind::kSine, {50.0})},
      {"70Hz", spec(SignalKind::kSine, {70.0})},
      {"multisine6", spec(SignalKind::kMultisine, {20.0, 26.0, 32.0})},
      {"multisine3", spec(SignalKind::kMultisine, {20.0, 23.0, 26.0})},
  };
}

std::vector<ProtocolRow> run_protocol(const ProtocolConfig& config) {
  config.estimation.validate();
  if (config.decimation < 1) throw Error(ErrorCode::kConfig, "decimation factor must be >= 1");
  const SyntheticPlant plant = random_plant(config.plant_memory, config.seed, config.noise_level);

  std::vector<ProtocolRow> rows;
  for (const CatalogEntry& entry : test_catalog(config.duration_s, config.amplitude)) {
    const Signal x_full = generate(entry.spec, config.measurement_rate);
    const Signal y_full = simulate_plant(plant, x_full);
    const Signal x = decimate(x_full, config.decimation, /*guard=*/true);
    const Signal y = decimate(y_full, config.decimation, /*guard=*/true);
    const auto [x_train, x_test] = split_train_test(x, config.train_fraction);
    const auto [y_train, y_test] = split_train_test(y, config.train_fraction);

    ProtocolRow row;
    row.name = entry.name;
    row.train_samples = x_train.size();
    row.test_samples = x_test.size();
    row.baseline_test_mse = mse(y_test, x_test);
    const auto fit = [&](const Signal& in, const Signal& out, const Signal& in_test, const Signal& out_test,
                         int& iterations, double& test_mse, bool& diverged) {
      try {
        const EstimationReport r = estimate(config.estimation, in, out);
        iterations = r.iterations_run;
        test_mse = mse(apply_kernel(r.kernel, in_test), out_test);
      } catch (const Error& e) {
        if (e.code() != ErrorCode::kDivergence && e.code() != ErrorCode::kNumericOverflow) throw;
        diverged = true;
        iterations = 0;
        test_mse = std::numeric_limits<double>::quiet_NaN();
      }
    };
    fit(x_train, y_train, x_test, y_test, row.forward_iterations, row.forward_test_mse, row.forward_diverged);
    fit(y_train, x_train, y_test, x_test, row.inverse_iterations, row.inverse_test_mse, row.inverse_diverged);
    rows.push_back(row);
  }
  return rows;
}

BankDemoReport run_bank_demo(double duration_s) {
  BankDemoReport report;
  constexpr double kLo = 22.19, kHi = 24.04;
  report.narrow_full_rate_db = design_bandpass(100, kLo, kHi, 44100.0, 3.0).design().stopband_peak_db;
  report.narrow_band_rate_db = design_bandpass(50, kLo, kHi, 300.0, 3.0).design().stopband_peak_db;

  const NoteBank bank = build_note_bank(BandPlan::default_plan());
  report.bank_entries = bank.entries.size();
  report.bank_infeasible = bank.infeasible_count();

  SignalSpec spec;
  spec.kind = SignalKind::kMultisine;
  spec.frequencies = {30.0, 50.0, 70.0, 110.0, 150.0, 190.0};
  spec.duration = duration_s;
  spec.amplitudes = {0.5};
  const Signal x = generate(spec, 44100.0);
  report.recombine = bank_split_recombine(bank, x).second;
  return report;
}

}  // namespace volterra

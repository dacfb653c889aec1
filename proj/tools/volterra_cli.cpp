// volterra: command-line front end for signal generation, resampling, kernel
// estimation, inversion and the reproduction runs.

#include <CLI11.hpp>

#include <cstdio>
#include <filesystem>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "volterra/error.hpp"
#include "volterra/fir.hpp"
#include "volterra/inverse.hpp"
#include "volterra/io.hpp"
#include "volterra/kernel.hpp"
#include "volterra/nlms.hpp"
#include "volterra/protocol.hpp"
#include "volterra/signal.hpp"

namespace fs = std::filesystem;
using namespace volterra;

namespace {

using Report = std::vector<std::pair<std::string, std::string>>;

std::string num(double v) { return format_double(v); }
std::string num(std::size_t v) { return std::to_string(v); }
std::string num(int v) { return std::to_string(v); }
std::string flag(bool v) { return v ? "true" : "false"; }
std::string status(bool diverged) { return diverged ? "diverged" : "ok"; }

// Writes text to path, or to stdout when the path is empty or "-".
void emit(const std::string& path, const std::string& text) {
  if (path.empty() || path == "-") {
    std::cout << text;
  } else {
    write_text_file(path, text);
  }
}

void emit_signal(const std::string& path, const Signal& s) {
  if (path.empty() || path == "-") {
    write_csv_signal(std::cout, s);
  } else {
    write_csv_signal(fs::path(path), s);
  }
}

void emit_report(const std::string& path, const Report& r) {
  if (!path.empty()) write_text_file(path, format_report(r, utc_timestamp()));
}

std::string join(const std::vector<double>& v) {
  std::string out;
  for (std::size_t i = 0; i < v.size(); ++i) out += (i ? " " : "") + num(v[i]);
  return out;
}

struct EstimationFlags {
  EstimationConfig config;
  double train_fraction = 0.7;

  void attach(CLI::App* app) {
    app->add_option("--memory", config.memory, "Kernel memory M")->check(CLI::PositiveNumber);
    app->add_option("--alpha1", config.alpha1, "First-order step size, in (0, 2)");
    app->add_option("--alpha2", config.alpha2, "Second-order step size, in (0, 2)");
    app->add_option("--alpha3", config.alpha3, "Third-order step size, in (0, 2)");
    app->add_option("--phi", config.phi, "Step normalization offset, in (0, 1)");
    app->add_option("--iterations", config.max_iterations, "Maximum sweeps over the training signal");
    app->add_option("--error-max", config.error_threshold, "Stop once the mean |e| of a sweep falls below this");
    app->add_flag("--precompute", config.precompute, "Build all expansion vectors before iterating");
    app->add_option("--train-fraction", train_fraction, "Leading fraction used for training")
        ->check(CLI::Range(0.0, 1.0));
  }
};

// ---- gen -------------------------------------------------------------------

struct GenArgs {
  std::string kind = "sine";
  std::vector<double> freq;
  std::vector<double> amp{1.0};
  double sample_rate = 512.0;
  double duration = 1.0;
  std::uint64_t seed = 0;
  std::string out;
};

void run_gen(const GenArgs& a) {
  SignalSpec spec;
  if (a.kind == "sine") {
    spec.kind = SignalKind::kSine;
  } else if (a.kind == "multisine") {
    spec.kind = SignalKind::kMultisine;
  } else if (a.kind == "noise") {
    spec.kind = SignalKind::kWhiteNoise;
  } else if (a.kind == "chirp") {
    spec.kind = SignalKind::kChirp;
  } else {
    throw Error(ErrorCode::kInvalidInput, "unknown signal kind '" + a.kind + "'");
  }
  spec.frequencies = a.freq;
  spec.amplitudes = a.amp;
  spec.duration = a.duration;
  spec.seed = a.seed;
  emit_signal(a.out, generate(spec, a.sample_rate));
}

// ---- resample --------------------------------------------------------------

struct ResampleArgs {
  std::string in, out;
  int down = 0, up = 0;
  bool no_guard = false;
};

void run_resample(const ResampleArgs& a) {
  if ((a.down > 0) == (a.up > 0)) throw Error(ErrorCode::kInvalidInput, "give exactly one of --down or --up");
  const Signal x = read_csv_signal(fs::path(a.in));
  emit_signal(a.out, a.down > 0 ? decimate(x, a.down, !a.no_guard) : upsample(x, a.up, !a.no_guard));
}

// ---- estimate / invert -----------------------------------------------------

struct EstimateArgs {
  EstimationFlags est;
  std::string object;
  std::string input, desired;
  double sample_rate = 0.0;
  std::string archive, report;
};

struct TrainingData {
  EstimationConfig config;
  Signal input{{}, 1.0};
  Signal desired{{}, 1.0};
  std::vector<std::string> warnings;
};

TrainingData load_training(const EstimateArgs& a, const CLI::App& app) {
  TrainingData t;
  if (!a.object.empty()) {
    if (a.sample_rate <= 0.0) throw Error(ErrorCode::kInvalidInput, "--fs is required with --object");
    // The object carries every field except phi and precompute.
    EstimationObject o = read_estimation_object(read_text_file(a.object), a.est.config);
    t.config = o.config;
    t.input = o.input_signal(a.sample_rate);
    t.desired = o.desired_signal(a.sample_rate);
    t.warnings = std::move(o.warnings);
    return t;
  }
  if (a.input.empty() || a.desired.empty()) {
    throw Error(ErrorCode::kInvalidInput, "give --object or both --input and --desired");
  }
  t.config = a.est.config;
  t.input = read_csv_signal(fs::path(a.input));
  t.desired = read_csv_signal(fs::path(a.desired));
  if (app.count("--fs") && a.sample_rate != t.input.sample_rate()) {
    throw Error(ErrorCode::kInvalidInput, "--fs disagrees with the CSV header");
  }
  return t;
}

// Trains on the leading part and scores the rest. `swap` identifies the
// post-inverse: the desired file becomes the estimator input.
void run_estimate(const EstimateArgs& a, const CLI::App& app, bool swap) {
  TrainingData t = load_training(a, app);
  for (const std::string& w : t.warnings) std::cerr << "volterra: warning: " << w << "\n";
  if (swap) std::swap(t.input, t.desired);
  t.config.validate();

  // A fraction of 1 trains on everything and leaves nothing to score.
  auto split = [&](const Signal& s) {
    return a.est.train_fraction >= 1.0 ? std::pair{s, s.slice(s.size(), 0)} : split_train_test(s, a.est.train_fraction);
  };
  const auto [xtr, xte] = split(t.input);
  const auto [dtr, dte] = split(t.desired);
  const EstimationReport r = estimate(t.config, xtr, dtr);

  Report rep{{"mode", swap ? "inverse" : "forward"},
             {"memory", num(t.config.memory)},
             {"sample_rate", num(xtr.sample_rate())},
             {"train_samples", num(xtr.size())},
             {"test_samples", num(xte.size())},
             {"iterations_run", num(r.iterations_run)},
             {"stopped_early", flag(r.stopped_early)},
             {"final_mean_error", num(r.error_trace.empty() ? 0.0 : r.error_trace.back())},
             {"training_residual_mse", num(r.training_residual_mse)}};
  if (!xte.empty()) rep.emplace_back("test_mse", num(mse(apply_kernel(r.kernel, xte), dte)));
  rep.emplace_back("training_digest", signal_digest(xtr));

  KernelArchive archive{r.kernel, t.config, xtr.sample_rate(), signal_digest(xtr), utc_timestamp()};
  if (!a.archive.empty()) write_text_file(a.archive, write_kernel_archive(archive));
  if (a.report.empty()) {
    for (const auto& [k, v] : rep) std::cout << k << " = " << v << "\n";
  } else {
    emit_report(a.report, rep);
  }
}

// ---- apply -----------------------------------------------------------------

struct ApplyArgs {
  std::string kernel, in, out;
};

void run_apply(const ApplyArgs& a) {
  const KernelArchive k = read_kernel_archive(read_text_file(a.kernel));
  const Signal x = read_csv_signal(fs::path(a.in));
  if (k.sample_rate > 0.0 && x.sample_rate() != k.sample_rate) {
    throw Error(ErrorCode::kInvalidInput, "kernel was trained at " + num(k.sample_rate) + " Hz but the input is at " +
                                              num(x.sample_rate()) + " Hz");
  }
  emit_signal(a.out, apply_kernel(k.kernel, x));
}

// ---- evaluate --------------------------------------------------------------

struct EvaluateArgs {
  std::string plant = "synthetic";
  std::uint64_t seed = 7;
  std::size_t plant_memory = 3;
  double noise = 0.0;
  std::string inverse;
  std::string probe;
  double fundamental = 0.0;
  int harmonics = 3;
  double training_peak = 0.0;
  std::string report;
};

SyntheticPlant load_plant(const std::string& plant, std::uint64_t seed, std::size_t memory, double noise) {
  if (plant == "synthetic") return random_plant(memory, seed, noise);
  SyntheticPlant p;
  p.kernel = read_kernel_archive(read_text_file(plant)).kernel;
  p.noise_level = noise;
  p.seed = seed;
  p.validate();
  return p;
}

void run_evaluate(const EvaluateArgs& a) {
  const SyntheticPlant plant = load_plant(a.plant, a.seed, a.plant_memory, a.noise);
  const VolterraKernel inverse = a.inverse.empty() ? VolterraKernel::identity(plant.kernel.memory())
                                                   : read_kernel_archive(read_text_file(a.inverse)).kernel;
  const Signal probe = read_csv_signal(fs::path(a.probe));
  const CascadeReport c = evaluate_cascade(plant, inverse, probe,
                                           {.fundamental = a.fundamental, .harmonics = a.harmonics,
                                            .training_peak = a.training_peak});
  Report rep{{"probe_samples", num(probe.size())},
             {"probe_peak", num(probe.peak())},
             {"residual_mse", num(c.residual_mse)},
             {"first_order_gain_error", num(c.first_order_gain_error)},
             {"extrapolated", flag(c.extrapolated)}};
  for (std::size_t k = 0; k < c.suppression_db.size(); ++k) {
    const std::string h = "harmonic" + std::to_string(k + 1);
    rep.emplace_back(h + "_uncorrected_db", num(c.uncorrected_db[k]));
    rep.emplace_back(h + "_corrected_db", num(c.corrected_db[k]));
    rep.emplace_back(h + "_suppression_db", num(c.suppression_db[k]));
  }
  if (c.extrapolated) std::cerr << "volterra: warning: probe exceeds the training amplitude\n";
  if (a.report.empty()) {
    for (const auto& [k, v] : rep) std::cout << k << " = " << v << "\n";
  } else {
    emit_report(a.report, rep);
  }
}

// ---- spectrum --------------------------------------------------------------

struct SpectrumArgs {
  std::string in, out;
  std::string method = "auto";
};

void run_spectrum(const SpectrumArgs& a) {
  DftMethod m = DftMethod::kAuto;
  if (a.method == "direct") {
    m = DftMethod::kDirect;
  } else if (a.method == "fast") {
    m = DftMethod::kFast;
  } else if (a.method != "auto") {
    throw Error(ErrorCode::kInvalidInput, "unknown method '" + a.method + "'");
  }
  const Spectrum s = dft(read_csv_signal(fs::path(a.in)), m);
  const auto mag = s.magnitudes();
  std::ostringstream out;
  out << "bin,frequency_hz,magnitude\n";
  for (std::size_t k = 0; k <= s.size() / 2; ++k) {
    out << k << "," << num(s.frequency(k)) << "," << num(mag[k]) << "\n";
  }
  emit(a.out, out.str());
}

// ---- bankdemo --------------------------------------------------------------

struct BankArgs {
  double duration = 2.0;
  std::string report;
};

void run_bankdemo(const BankArgs& a) {
  const BankDemoReport b = run_bank_demo(a.duration);
  Report rep{{"narrow_full_rate_stopband_db", num(b.narrow_full_rate_db)},
             {"narrow_band_rate_stopband_db", num(b.narrow_band_rate_db)},
             {"bank_entries", num(b.bank_entries)},
             {"bank_entries_missing_stopband", num(b.bank_infeasible)},
             {"recombine_scale", num(b.recombine.best_fit_scale)},
             {"recombine_residual_fraction", num(b.recombine.residual_fraction)},
             {"recombine_mse", num(b.recombine.reconstruction_mse)},
             {"recombine_trimmed", num(b.recombine.trimmed)}};
  if (a.report.empty()) {
    for (const auto& [k, v] : rep) std::cout << k << " = " << v << "\n";
  } else {
    emit_report(a.report, rep);
  }
}

// ---- protocol --------------------------------------------------------------

struct ProtocolArgs {
  EstimationFlags est;
  std::string plant = "synthetic";
  ProtocolConfig config;
  std::string table;
  std::string report;
};

void run_protocol_cmd(const ProtocolArgs& a) {
  if (a.plant != "synthetic") throw Error(ErrorCode::kInvalidInput, "only --plant synthetic is available");
  ProtocolConfig c = a.config;
  c.estimation = a.est.config;
  c.train_fraction = a.est.train_fraction;
  const std::vector<ProtocolRow> rows = run_protocol(c);

  std::ostringstream t;
  t << "signal,train_samples,test_samples,forward_iterations,inverse_iterations,"
       "forward_test_mse,inverse_test_mse,baseline_test_mse,forward_status,inverse_status\n";
  for (const ProtocolRow& r : rows) {
    t << r.name << "," << r.train_samples << "," << r.test_samples << "," << r.forward_iterations << ","
      << r.inverse_iterations << "," << num(r.forward_test_mse) << "," << num(r.inverse_test_mse) << ","
      << num(r.baseline_test_mse) << "," << status(r.forward_diverged) << "," << status(r.inverse_diverged) << "\n";
  }
  emit(a.table, t.str());

  Report rep{{"plant", a.plant},
             {"seed", std::to_string(c.seed)},
             {"plant_memory", num(c.plant_memory)},
             {"noise_level", num(c.noise_level)},
             {"measurement_rate", num(c.measurement_rate)},
             {"decimation", num(c.decimation)},
             {"train_fraction", num(c.train_fraction)},
             {"memory", num(c.estimation.memory)},
             {"alpha", join({c.estimation.alpha1, c.estimation.alpha2, c.estimation.alpha3})},
             {"phi", num(c.estimation.phi)},
             {"iterations", num(c.estimation.max_iterations)},
             {"signals", num(rows.size())}};
  for (const ProtocolRow& r : rows) {
    rep.emplace_back(r.name + ".forward_test_mse", num(r.forward_test_mse));
    rep.emplace_back(r.name + ".inverse_test_mse", num(r.inverse_test_mse));
    if (r.forward_diverged || r.inverse_diverged) {
      std::cerr << "volterra: warning: " << r.name << ": " << (r.forward_diverged ? "forward" : "inverse")
                << (r.forward_diverged && r.inverse_diverged ? " and inverse" : "") << " fit diverged\n";
    }
  }
  emit_report(a.report, rep);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Volterra-series identification and linearization tools"};
  app.require_subcommand(1);
  app.set_version_flag("--version", "volterra 0.1.0");

  GenArgs gen;
  auto* g = app.add_subcommand("gen", "Render a test signal to CSV");
  g->add_option("--kind", gen.kind, "sine | multisine | noise | chirp")->capture_default_str();
  g->add_option("--freq", gen.freq, "Frequencies in Hz (chirp: start end)");
  g->add_option("--amp", gen.amp, "Amplitudes, one or one per component");
  g->add_option("--fs", gen.sample_rate, "Sample rate in Hz")->capture_default_str();
  g->add_option("--dur", gen.duration, "Duration in seconds")->capture_default_str();
  g->add_option("--seed", gen.seed, "Noise seed");
  g->add_option("-o,--out", gen.out, "Output CSV (default stdout)");

  ResampleArgs rs;
  auto* r = app.add_subcommand("resample", "Decimate or interpolate a CSV signal");
  r->add_option("-i,--in", rs.in, "Input CSV")->required();
  r->add_option("-o,--out", rs.out, "Output CSV (default stdout)");
  r->add_option("--down", rs.down, "Decimation factor")->check(CLI::PositiveNumber);
  r->add_option("--up", rs.up, "Interpolation factor")->check(CLI::PositiveNumber);
  r->add_flag("--no-guard", rs.no_guard, "Skip the anti-alias / anti-image filter");

  EstimateArgs est;
  auto* e = app.add_subcommand("estimate", "Identify a forward kernel");
  EstimateArgs inv;
  auto* iv = app.add_subcommand("invert", "Identify a post-inverse by swapping input and output");
  for (auto [cmd, args] : {std::pair{e, &est}, std::pair{iv, &inv}}) {
    args->est.attach(cmd);
    cmd->add_option("--object", args->object, "Estimation object (JSON)");
    cmd->add_option("--input", args->input, "Plant input CSV");
    cmd->add_option(cmd == e ? "--desired" : "--output", args->desired, "Plant output CSV");
    cmd->add_option("--fs", args->sample_rate, "Sample rate for --object input");
    cmd->add_option("--archive", args->archive, "Kernel archive to write");
    cmd->add_option("--report", args->report, "Report file (default stdout, without timestamp)");
  }

  ApplyArgs ap;
  auto* a = app.add_subcommand("apply", "Run a kernel archive over a CSV signal");
  a->add_option("--kernel", ap.kernel, "Kernel archive")->required();
  a->add_option("-i,--in", ap.in, "Input CSV")->required();
  a->add_option("-o,--out", ap.out, "Output CSV (default stdout)");

  EvaluateArgs ev;
  auto* v = app.add_subcommand("evaluate", "Cascade an inverse with a plant on a probe");
  v->add_option("--plant", ev.plant, "'synthetic' or a kernel archive")->capture_default_str();
  v->add_option("--seed", ev.seed, "Synthetic plant seed")->capture_default_str();
  v->add_option("--plant-memory", ev.plant_memory, "Synthetic plant memory")->capture_default_str();
  v->add_option("--noise", ev.noise, "Plant measurement noise level");
  v->add_option("--inverse", ev.inverse, "Inverse kernel archive (default identity)");
  v->add_option("--probe", ev.probe, "Probe CSV")->required();
  v->add_option("--fundamental", ev.fundamental, "Probe fundamental in Hz for the harmonic table");
  v->add_option("--harmonics", ev.harmonics, "Harmonics to report")->capture_default_str();
  v->add_option("--training-peak", ev.training_peak, "Training amplitude, to flag extrapolation");
  v->add_option("--report", ev.report, "Report file (default stdout, without timestamp)");

  SpectrumArgs sp;
  auto* s = app.add_subcommand("spectrum", "Magnitude spectrum of a CSV signal");
  s->add_option("-i,--in", sp.in, "Input CSV")->required();
  s->add_option("-o,--out", sp.out, "Output CSV (default stdout)");
  s->add_option("--method", sp.method, "direct | fast | auto")->capture_default_str();

  BankArgs bk;
  auto* b = app.add_subcommand("bankdemo", "Narrow bandpass and note-bank recombination demo");
  b->add_option("--dur", bk.duration, "Multisine duration in seconds")->capture_default_str();
  b->add_option("--report", bk.report, "Report file (default stdout, without timestamp)");

  ProtocolArgs pr;
  pr.est.config = pr.config.estimation;
  pr.est.train_fraction = pr.config.train_fraction;
  auto* p = app.add_subcommand("protocol", "Run the measurement protocol on a synthetic plant");
  pr.est.attach(p);
  p->add_option("--plant", pr.plant, "Plant source (synthetic)")->capture_default_str();
  p->add_option("--seed", pr.config.seed, "Plant seed")->capture_default_str();
  p->add_option("--plant-memory", pr.config.plant_memory, "Plant memory")->capture_default_str();
  p->add_option("--noise", pr.config.noise_level, "Measurement noise level")->capture_default_str();
  p->add_option("--dur", pr.config.duration_s, "Signal duration in seconds")->capture_default_str();
  p->add_option("--amplitude", pr.config.amplitude, "Signal peak amplitude")->capture_default_str();
  p->add_option("--table", pr.table, "Metric table CSV (default stdout)");
  p->add_option("--report", pr.report, "Report file");

  try {
    app.parse(argc, argv);
    if (g->parsed()) run_gen(gen);
    if (r->parsed()) run_resample(rs);
    if (e->parsed()) run_estimate(est, *e, false);
    if (iv->parsed()) run_estimate(inv, *iv, true);
    if (a->parsed()) run_apply(ap);
    if (v->parsed()) run_evaluate(ev);
    if (s->parsed()) run_spectrum(sp);
    if (b->parsed()) run_bankdemo(bk);
    if (p->parsed()) run_protocol_cmd(pr);
  } catch (const CLI::ParseError& err) {
    return app.exit(err);
  } catch (const Error& err) {
    std::cerr << "volterra: error: " << err.what() << "\n";
    return 1;
  } catch (const std::exception& err) {
    std::cerr << "volterra: " << err.what() << "\n";
    return 1;
  }
  return 0;
}

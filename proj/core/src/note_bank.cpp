#include "volterra/note_bank.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <string>

#include "volterra/error.hpp"

namespace volterra {
namespace {

constexpr std::array<std::string_view, kNotesPerOctave> kNoteNames = {
    "Do", "Do#", "Re", "Re#", "Mi", "Fa", "Fa#", "Sol", "Sol#", "La", "La#", "Si"};

// Decimation and interpolation filters are designed with
// default_multirate_order(factor) = 32 * factor taps, so each one delays by
// 16 * factor input samples, i.e. exactly 16 band-rate samples.
constexpr std::size_t kMultirateDelayBandSamples = 16;

// Drops the first `count` samples and appends as many zeros.
std::vector<double> advance(const std::vector<double>& x, std::size_t count) {
  std::vector<double> out(x.size(), 0.0);
  if (count < x.size()) {
    std::copy(x.begin() + static_cast<std::ptrdiff_t>(count), x.end(), out.begin());
  }
  return out;
}

int integer_ratio(double num, double den) {
  const double r = num / den;
  const double rounded = std::round(r);
  if (rounded < 1.0 || std::abs(r - rounded) > 1e-9 * r) return 0;
  return static_cast<int>(rounded);
}

}  // namespace

double note_frequency(int note_index, int octave) {
  if (note_index < 0 || note_index >= kNotesPerOctave || octave < 0 || octave >= kOctaves) {
    throw Error(ErrorCode::kInvalidInput,
                "note (" + std::to_string(note_index) + ", octave " + std::to_string(octave) +
                    ") out of range");
  }
  return 16.35 * std::exp2(octave + note_index / 12.0);
}

std::string_view note_name(int note_index) {
  if (note_index < 0 || note_index >= kNotesPerOctave) {
    throw Error(ErrorCode::kInvalidInput, "note index out of range");
  }
  return kNoteNames[static_cast<std::size_t>(note_index)];
}

BandPlan::BandPlan(std::vector<Band> bands) : bands_(std::move(bands)) {
  if (bands_.empty()) throw Error(ErrorCode::kInvalidInput, "band plan is empty");
  for (std::size_t i = 0; i < bands_.size(); ++i) {
    const Band& b = bands_[i];
    if (!(b.f_min >= 0.0 && b.f_min < b.f_max)) {
      throw Error(ErrorCode::kInvalidInput, "band " + std::to_string(i) + " has invalid edges");
    }
    if (!(b.sample_rate > 2.0 * b.f_max)) {
      throw Error(ErrorCode::kInvalidInput,
                  "band " + std::to_string(i) + " sample rate violates the Nyquist condition");
    }
    if (i > 0 && !(bands_[i - 1].f_max < b.f_min)) {
      throw Error(ErrorCode::kInvalidInput,
                  "bands " + std::to_string(i - 1) + " and " + std::to_string(i) +
                      " overlap or are out of order");
    }
  }
}

BandPlan BandPlan::default_plan() {
  return BandPlan({
      {0.0, 61.64, "1-2", 300.0},
      {65.41, 249.9, "3-4", 700.0},
      {261.6, 987.8, "5-6", 2940.0},
      {1047.0, 3951.0, "7-8", 11025.0},
      {4186.0, 15804.0, "9-10", 44100.0},
  });
}

int BandPlan::band_for(double frequency) const {
  if (frequency < bands_.front().f_min) {
    throw Error(ErrorCode::kInvalidInput, "frequency below the band plan");
  }
  for (std::size_t i = bands_.size(); i-- > 0;) {
    if (frequency >= bands_[i].f_min) {
      if (frequency > bands_[i].f_max && i + 1 == bands_.size()) {
        throw Error(ErrorCode::kInvalidInput,
                    std::to_string(frequency) + " Hz is above the band plan");
      }
      return static_cast<int>(i);
    }
  }
  return 0;
}

OrderPolicy OrderPolicy::default_policy() {
  return OrderPolicy{{
      {500.0, 50, 3.0},
      {2000.0, 30, 5.0},
      {std::numeric_limits<double>::infinity(), 20, 10.0},
  }};
}

const OrderRule& OrderPolicy::rule_for(double frequency) const {
  for (const OrderRule& r : rules) {
    if (frequency <= r.f_upper) return r;
  }
  throw Error(ErrorCode::kInvalidInput, "no order rule covers " + std::to_string(frequency) + " Hz");
}

std::size_t NoteBank::infeasible_count() const {
  return static_cast<std::size_t>(
      std::count_if(entries.begin(), entries.end(), [](const NoteEntry& e) { return !e.meets_spec; }));
}

NoteBank build_note_bank(const BandPlan& plan, const OrderPolicy& policy) {
  NoteBank bank{plan, {}};
  bank.entries.reserve(kNoteCount);
  for (int octave = 0; octave < kOctaves; ++octave) {
    for (int note = 0; note < kNotesPerOctave; ++note) {
      const double f = note_frequency(note, octave);
      const int band = plan.band_for(f);
      const OrderRule& rule = policy.rule_for(f);
      FirFilter filter = design_bandpass(rule.order, f * (1.0 - kNoteRelativeHalfWidth),
                                         f * (1.0 + kNoteRelativeHalfWidth),
                                         plan.bands()[static_cast<std::size_t>(band)].sample_rate,
                                         rule.transition_hz);
      const bool ok = filter.meets_stopband(kBankStopbandDb);
      bank.entries.push_back(NoteEntry{std::string(note_name(note)), note, octave, f, band,
                                       std::move(filter), ok});
    }
  }
  return bank;
}

std::pair<Signal, RecombineReport> bank_split_recombine(const NoteBank& bank,
                                                        const Signal& signal,
                                                        std::span<const double> gains,
                                                        bool align_delays) {
  if (!gains.empty() && gains.size() != bank.entries.size()) {
    throw Error(ErrorCode::kInvalidInput, "gain vector must have one entry per note");
  }
  const double fs = signal.sample_rate();
  const auto& bands = bank.plan.bands();
  RecombineReport report;

  // Total alignment delay per band, in input-rate samples.
  std::vector<int> factors(bands.size(), 0);
  std::size_t max_delay = 0;
  for (std::size_t b = 0; b < bands.size(); ++b) {
    if (bands[b].sample_rate > fs) {
      report.skipped_bands.push_back(static_cast<int>(b));
      continue;
    }
    const int factor = integer_ratio(fs, bands[b].sample_rate);
    if (factor == 0) {
      throw Error(ErrorCode::kInvalidInput,
                  "input rate " + std::to_string(fs) + " Hz is not a multiple of band rate " +
                      std::to_string(bands[b].sample_rate) + " Hz");
    }
    factors[b] = factor;
    int max_order = 0;
    for (const NoteEntry& e : bank.entries) {
      if (e.band == static_cast<int>(b)) max_order = std::max(max_order, e.filter.order());
    }
    const std::size_t delay =
        static_cast<std::size_t>(factor) *
        (2 * kMultirateDelayBandSamples + static_cast<std::size_t>(max_order / 2));
    max_delay = std::max(max_delay, delay);
  }

  // Zero tail so advancing each branch does not lose the end of the input.
  std::vector<double> padded(signal.values());
  padded.resize(signal.size() + max_delay, 0.0);
  const Signal input(std::move(padded), fs);
  std::vector<double> output(input.size(), 0.0);

  for (std::size_t b = 0; b < bands.size(); ++b) {
    const int factor = factors[b];
    if (factor == 0) continue;
    const Signal band_input = decimate(input, factor, /*guard=*/true);
    std::vector<double> band_sum(band_input.size(), 0.0);
    bool any = false;
    for (std::size_t n = 0; n < bank.entries.size(); ++n) {
      const NoteEntry& e = bank.entries[n];
      if (e.band != static_cast<int>(b)) continue;
      const double g = gains.empty() ? 1.0 : gains[n];
      if (g == 0.0) continue;
      any = true;
      const Signal filtered = apply_fir(e.filter, band_input);
      const std::vector<double> aligned = advance(
          filtered.values(), align_delays ? kMultirateDelayBandSamples +
                                                static_cast<std::size_t>(e.filter.order() / 2)
                                          : 0);
      for (std::size_t k = 0; k < band_sum.size(); ++k) band_sum[k] += g * aligned[k];
    }
    if (!any) continue;
    const Signal restored =
        upsample(Signal(std::move(band_sum), band_input.sample_rate()), factor, /*interpolate=*/true);
    const std::vector<double> aligned =
        advance(restored.values(),
                align_delays ? kMultirateDelayBandSamples * static_cast<std::size_t>(factor) : 0);
    const std::size_t n = std::min(output.size(), aligned.size());
    for (std::size_t k = 0; k < n; ++k) output[k] += aligned[k];
  }
  output.resize(signal.size());

  // Best scalar fit over the interior, away from start-up and tail transients.
  const std::size_t trim = std::min(max_delay, signal.size() / 4);
  const std::size_t lo = trim;
  const std::size_t hi = signal.size() - trim;
  double xy = 0.0, xx = 0.0, yy = 0.0;
  for (std::size_t k = lo; k < hi; ++k) {
    xy += signal[k] * output[k];
    xx += signal[k] * signal[k];
    yy += output[k] * output[k];
  }
  report.trimmed = trim;
  report.best_fit_scale = xx > 0.0 ? xy / xx : 0.0;
  double rr = 0.0;
  for (std::size_t k = lo; k < hi; ++k) {
    const double r = output[k] - report.best_fit_scale * signal[k];
    rr += r * r;
  }
  report.residual_fraction = yy > 0.0 ? rr / yy : 0.0;
  report.reconstruction_mse = hi > lo ? rr / static_cast<double>(hi - lo) : 0.0;
  return {Signal(std::move(output), fs), report};
}

}  // namespace volterra

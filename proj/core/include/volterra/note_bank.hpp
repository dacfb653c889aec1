#pragma once

#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "volterra/fir.hpp"
#include "volterra/signal.hpp"

namespace volterra {

inline constexpr int kNotesPerOctave = 12;
inline constexpr int kOctaves = 10;
inline constexpr int kNoteCount = kNotesPerOctave * kOctaves;

// Stopband attenuation every bank filter is specified to reach.
inline constexpr double kBankStopbandDb = 40.0;
// Each note filter passes [(1 - w) f, (1 + w) f] around its centre f.
inline constexpr double kNoteRelativeHalfWidth = 0.04;

// Equal-tempered frequency 16.35 * 2^(octave + note_index / 12). Note
// indices follow the solfege order Do, Do#, Re, ..., Si. Throws
// kInvalidInput outside 0..11 / 0..9.
double note_frequency(int note_index, int octave);
std::string_view note_name(int note_index);

struct Band {
  double f_min = 0.0;
  double f_max = 0.0;
  std::string octaves;  // table label, e.g. "1-2"
  double sample_rate = 0.0;
};

class BandPlan {
 public:
  // Throws kInvalidInput unless bands are ordered and non-overlapping and
  // each sample rate exceeds twice the band's f_max.
  explicit BandPlan(std::vector<Band> bands);

  // Five bands from 0 Hz to 15804 Hz at 300, 700, 2940, 11025, 44100 Hz.
  static BandPlan default_plan();

  const std::vector<Band>& bands() const { return bands_; }

  // Band containing `frequency`; a frequency that falls in the gap between
  // two bands belongs to the lower one. Throws kInvalidInput above the plan.
  int band_for(double frequency) const;

 private:
  std::vector<Band> bands_;
};

struct OrderRule {
  double f_upper = 0.0;  // rule applies to centre frequencies <= f_upper
  int order = 0;
  double transition_hz = 0.0;
};

struct OrderPolicy {
  std::vector<OrderRule> rules;  // ascending f_upper

  // <= 500 Hz: order 50 / +-3 Hz; <= 2 kHz: order 30 / +-5 Hz; above: order
  // 20 / +-10 Hz.
  static OrderPolicy default_policy();
  const OrderRule& rule_for(double frequency) const;
};

struct NoteEntry {
  std::string name;
  int note_index = 0;
  int octave = 0;
  double centre_hz = 0.0;
  int band = 0;
  FirFilter filter;
  // Stopband peak reached -40 dB at the mandated order.
  bool meets_spec = false;
};

struct NoteBank {
  BandPlan plan;
  std::vector<NoteEntry> entries;  // octave-major: index = octave * 12 + note

  std::size_t infeasible_count() const;
};

// Designs all 120 note bandpass filters, each at the sample rate of its band.
// Designs that miss the stopband spec are flagged, not rejected.
NoteBank build_note_bank(const BandPlan& plan,
                         const OrderPolicy& policy = OrderPolicy::default_policy());

struct RecombineReport {
  // Optimal least-squares scale c for output ~= c * input.
  double best_fit_scale = 0.0;
  // ||output - c input||^2 / ||output||^2 over the trimmed interior.
  double residual_fraction = 0.0;
  // Mean squared difference between output and c * input over the interior.
  double reconstruction_mse = 0.0;
  // Samples excluded at each end because of filter start-up transients.
  std::size_t trimmed = 0;
  // Bands skipped because their rate exceeds the input rate.
  std::vector<int> skipped_bands;
};

// Multirate split / recombine: for every band, decimate the input to the
// band rate, run each note filter, apply its gain, interpolate back to the
// input rate and sum everything. With align_delays, each branch is advanced
// by its known linear-phase delay so all branches line up with the input;
// without it the raw branch outputs are summed. `gains` is indexed like
// NoteBank::entries; empty means unit gains. The input rate must be an
// integer multiple of every band rate it covers.
std::pair<Signal, RecombineReport> bank_split_recombine(
    const NoteBank& bank, const Signal& signal,
    std::span<const double> gains = {}, bool align_delays = true);

}  // namespace volterra

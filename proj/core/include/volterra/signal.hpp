#pragma once

#include <complex>
#include <cstddef>
#include <cstdint>
#include <span>
#include <utility>
#include <vector>

namespace volterra {

// Uniformly sampled, real-valued sequence. Amplitudes are dimensionless and
// nominally in [-1, 1]. Immutable once constructed.
class Signal {
 public:
  // Throws kInvalidInput if sample_rate is not a positive finite number or any
  // sample is NaN/Inf.
  Signal(std::vector<double> samples, double sample_rate);

  static Signal zeros(std::size_t length, double sample_rate);

  std::span<const double> samples() const { return samples_; }
  const std::vector<double>& values() const { return samples_; }
  double sample_rate() const { return sample_rate_; }
  std::size_t size() const { return samples_.size(); }
  bool empty() const { return samples_.empty(); }
  double operator[](std::size_t i) const { return samples_[i]; }
  double duration() const { return static_cast<double>(size()) / sample_rate_; }

  // Peak absolute amplitude; 0 for an empty signal.
  double peak() const;
  // Mean of squared samples; 0 for an empty signal.
  double power() const;

  // Returns a copy with every sample multiplied by gain.
  Signal scaled(double gain) const;
  // Samples [first, first + count), clamped to the signal length.
  Signal slice(std::size_t first, std::size_t count) const;

  friend bool operator==(const Signal&, const Signal&) = default;

 private:
  std::vector<double> samples_;
  double sample_rate_;
};

// Throws kInvalidInput if the sample rates differ.
Signal concatenate(const Signal& a, const Signal& b);

struct Spectrum {
  std::vector<std::complex<double>> bins;
  double sample_rate = 1.0;

  std::size_t size() const { return bins.size(); }
  double bin_resolution() const {
    return sample_rate / static_cast<double>(bins.size());
  }
  double frequency(std::size_t bin) const {
    return static_cast<double>(bin) * bin_resolution();
  }
  std::vector<double> magnitudes() const;
  // Bin in [1, N/2] with the largest magnitude (DC excluded); 0 if N < 2.
  std::size_t peak_bin() const;
};

enum class DftMethod {
  kDirect,  // O(N^2) evaluation of the defining sum
  kFast,    // radix-2 FFT, Bluestein for other lengths
  kAuto,    // direct for short blocks, fast otherwise
};

// F_n = sum_k x_k exp(-2 pi i n k / N). Throws kInvalidInput on empty input.
Spectrum dft(const Signal& signal, DftMethod method = DftMethod::kAuto);

// x_k = (1/N) sum_n F_n exp(2 pi i n k / N). The imaginary residue must stay
// below 1e-6 * max|F_n|, otherwise kInconsistentSpectrum is thrown.
Signal idft(const Spectrum& spectrum, DftMethod method = DftMethod::kAuto);

enum class SignalKind { kSine, kMultisine, kWhiteNoise, kChirp };

struct SignalSpec {
  SignalKind kind = SignalKind::kSine;
  // sine: one entry; multisine: one per component; chirp: start and end.
  std::vector<double> frequencies;
  double duration = 1.0;  // seconds
  // One entry per component, or a single entry applied to all of them.
  std::vector<double> amplitudes{1.0};
  std::uint64_t seed = 0;
};

// Renders a test signal of round(duration * sample_rate) samples.
//  - sine:        a sin(2 pi f t)
//  - multisine:   sum_i a_i sin(2 pi f_i t), rescaled so the peak equals max_i a_i
//  - white_noise: seeded uniform noise in [-a, a]
//  - chirp:       linear sweep from f0 to f1 over the duration, amplitude a
// Throws kNyquistViolation for any frequency >= sample_rate / 2 and
// kInvalidInput for malformed specs.
Signal generate(const SignalSpec& spec, double sample_rate);

// Deterministic uniform noise in [-amplitude, amplitude]. Uses a 64-bit
// Mersenne Twister and explicit bit conversion so sequences are identical
// across standard library implementations.
std::vector<double> uniform_noise(std::size_t length, double amplitude,
                                  std::uint64_t seed);

// (1/N) sum (a_k - b_k)^2. Throws kInvalidInput on length or rate mismatch.
double mse(const Signal& a, const Signal& b);

// Leading floor(fraction * N) samples and the remainder.
std::pair<Signal, Signal> split_train_test(const Signal& signal,
                                           double fraction);

struct HarmonicLevels {
  // levels_db[k-1] is the level of harmonic k relative to the fundamental.
  std::vector<double> levels_db;
  // True when some requested harmonics were at or above Nyquist and dropped.
  bool truncated = false;
};

// Levels of harmonics 1..count relative to the fundamental, measured as the
// peak Hann-windowed DFT magnitude in a small neighbourhood of each multiple.
HarmonicLevels harmonic_levels(const Signal& signal, double fundamental,
                               int count);

}  // namespace volterra

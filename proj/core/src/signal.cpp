#include "volterra/signal.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>
#include <string>

#include "fft.hpp"
#include "volterra/error.hpp"

namespace volterra {
namespace {

// Blocks up to this length use the direct sum under DftMethod::kAuto.
constexpr std::size_t kDirectDftLimit = 64;

bool use_direct(DftMethod method, std::size_t n) {
  if (method == DftMethod::kDirect) return true;
  if (method == DftMethod::kFast) return false;
  return n <= kDirectDftLimit;
}

void require_same_shape(const Signal& a, const Signal& b, const char* what) {
  if (a.size() != b.size()) {
    throw Error(ErrorCode::kInvalidInput,
                std::string(what) + ": length mismatch (" +
                    std::to_string(a.size()) + " vs " +
                    std::to_string(b.size()) + ")");
  }
  if (a.sample_rate() != b.sample_rate()) {
    throw Error(ErrorCode::kInvalidInput,
                std::string(what) + ": sample rate mismatch");
  }
}

double peak_near(const std::vector<double>& magnitude, double bin,
                 std::size_t half_width) {
  const auto centre = static_cast<std::ptrdiff_t>(std::lround(bin));
  const auto last = static_cast<std::ptrdiff_t>(magnitude.size()) - 1;
  const auto lo = std::max<std::ptrdiff_t>(0, centre - static_cast<std::ptrdiff_t>(half_width));
  const auto hi = std::min<std::ptrdiff_t>(last, centre + static_cast<std::ptrdiff_t>(half_width));
  double best = 0.0;
  for (auto i = lo; i <= hi; ++i) best = std::max(best, magnitude[static_cast<std::size_t>(i)]);
  return best;
}

}  // namespace

Signal::Signal(std::vector<double> samples, double sample_rate)
    : samples_(std::move(samples)), sample_rate_(sample_rate) {
  if (!(sample_rate_ > 0.0) || !std::isfinite(sample_rate_)) {
    throw Error(ErrorCode::kInvalidInput, "sample rate must be positive");
  }
  for (std::size_t i = 0; i < samples_.size(); ++i) {
    if (!std::isfinite(samples_[i])) {
      throw Error(ErrorCode::kInvalidInput,
                  "non-finite sample at index " + std::to_string(i));
    }
  }
}

Signal Signal::zeros(std::size_t length, double sample_rate) {
  return Signal(std::vector<double>(length, 0.0), sample_rate);
}

double Signal::peak() const {
  double p = 0.0;
  for (double v : samples_) p = std::max(p, std::abs(v));
  return p;
}

double Signal::power() const {
  if (samples_.empty()) return 0.0;
  double acc = 0.0;
  for (double v : samples_) acc += v * v;
  return acc / static_cast<double>(samples_.size());
}

Signal Signal::scaled(double gain) const {
  std::vector<double> out(samples_);
  for (double& v : out) v *= gain;
  return Signal(std::move(out), sample_rate_);
}

Signal Signal::slice(std::size_t first, std::size_t count) const {
  first = std::min(first, samples_.size());
  count = std::min(count, samples_.size() - first);
  const auto begin = samples_.begin() + static_cast<std::ptrdiff_t>(first);
  return Signal(std::vector<double>(begin, begin + static_cast<std::ptrdiff_t>(count)),
                sample_rate_);
}

Signal concatenate(const Signal& a, const Signal& b) {
  if (a.sample_rate() != b.sample_rate()) {
    throw Error(ErrorCode::kInvalidInput, "concatenate: sample rate mismatch");
  }
  std::vector<double> out(a.values());
  out.insert(out.end(), b.values().begin(), b.values().end());
  return Signal(std::move(out), a.sample_rate());
}

std::vector<double> Spectrum::magnitudes() const {
  std::vector<double> m(bins.size());
  for (std::size_t i = 0; i < bins.size(); ++i) m[i] = std::abs(bins[i]);
  return m;
}

std::size_t Spectrum::peak_bin() const {
  std::size_t best = 0;
  double best_mag = -1.0;
  for (std::size_t i = 1; i <= bins.size() / 2; ++i) {
    const double m = std::abs(bins[i]);
    if (m > best_mag) {
      best_mag = m;
      best = i;
    }
  }
  return best;
}

Spectrum dft(const Signal& signal, DftMethod method) {
  if (signal.empty()) {
    throw Error(ErrorCode::kInvalidInput, "dft of an empty signal");
  }
  detail::ComplexVector in(signal.values().begin(), signal.values().end());
  Spectrum s;
  s.sample_rate = signal.sample_rate();
  s.bins = use_direct(method, in.size()) ? detail::direct_transform(in, false)
                                         : detail::fast_transform(in, false);
  return s;
}

Signal idft(const Spectrum& spectrum, DftMethod method) {
  if (spectrum.bins.empty()) {
    throw Error(ErrorCode::kInvalidInput, "idft of an empty spectrum");
  }
  const std::size_t n = spectrum.size();
  const detail::ComplexVector out =
      use_direct(method, n) ? detail::direct_transform(spectrum.bins, true)
                            : detail::fast_transform(spectrum.bins, true);
  double max_bin = 0.0;
  for (const auto& b : spectrum.bins) max_bin = std::max(max_bin, std::abs(b));
  const double scale = 1.0 / static_cast<double>(n);
  const double limit = 1e-6 * max_bin * scale;
  std::vector<double> samples(n);
  for (std::size_t k = 0; k < n; ++k) {
    const double im = out[k].imag() * scale;
    if (std::abs(im) > limit) {
      throw Error(ErrorCode::kInconsistentSpectrum,
                  "imaginary residue " + std::to_string(im) + " at sample " +
                      std::to_string(k));
    }
    samples[k] = out[k].real() * scale;
  }
  return Signal(std::move(samples), spectrum.sample_rate);
}

std::vector<double> uniform_noise(std::size_t length, double amplitude,
                                  std::uint64_t seed) {
  std::mt19937_64 engine(seed);
  std::vector<double> out(length);
  for (double& v : out) {
    // 53 random bits mapped onto [0, 1), then onto [-1, 1).
    const double unit = static_cast<double>(engine() >> 11) * 0x1.0p-53;
    v = amplitude * (2.0 * unit - 1.0);
  }
  return out;
}

Signal generate(const SignalSpec& spec, double sample_rate) {
  if (!(sample_rate > 0.0)) {
    throw Error(ErrorCode::kInvalidInput, "sample rate must be positive");
  }
  if (!(spec.duration > 0.0)) {
    throw Error(ErrorCode::kInvalidInput, "duration must be positive");
  }
  const double nyquist = sample_rate / 2.0;
  for (double f : spec.frequencies) {
    if (!(f >= 0.0)) {
      throw Error(ErrorCode::kInvalidInput, "frequencies must be non-negative");
    }
    if (f >= nyquist) {
      throw Error(ErrorCode::kNyquistViolation,
                  std::to_string(f) + " Hz is not below Nyquist (" +
                      std::to_string(nyquist) + " Hz)");
    }
  }
  if (spec.amplitudes.empty()) {
    throw Error(ErrorCode::kInvalidInput, "at least one amplitude is required");
  }
  const auto amplitude_of = [&](std::size_t i) {
    return spec.amplitudes.size() == 1 ? spec.amplitudes[0] : spec.amplitudes.at(i);
  };
  const auto n = static_cast<std::size_t>(std::llround(spec.duration * sample_rate));
  const double two_pi = 2.0 * std::numbers::pi;
  std::vector<double> x(n, 0.0);

  switch (spec.kind) {
    case SignalKind::kSine: {
      if (spec.frequencies.size() != 1) {
        throw Error(ErrorCode::kInvalidInput, "sine needs exactly one frequency");
      }
      const double a = amplitude_of(0);
      for (std::size_t k = 0; k < n; ++k) {
        x[k] = a * std::sin(two_pi * spec.frequencies[0] * static_cast<double>(k) / sample_rate);
      }
      break;
    }
    case SignalKind::kMultisine: {
      if (spec.frequencies.empty()) {
        throw Error(ErrorCode::kInvalidInput, "multisine needs frequencies");
      }
      if (spec.amplitudes.size() != 1 && spec.amplitudes.size() != spec.frequencies.size()) {
        throw Error(ErrorCode::kInvalidInput,
                    "multisine needs one amplitude or one per frequency");
      }
      double target_peak = 0.0;
      for (std::size_t i = 0; i < spec.frequencies.size(); ++i) {
        const double a = amplitude_of(i);
        target_peak = std::max(target_peak, std::abs(a));
        for (std::size_t k = 0; k < n; ++k) {
          x[k] += a * std::sin(two_pi * spec.frequencies[i] * static_cast<double>(k) / sample_rate);
        }
      }
      double peak = 0.0;
      for (double v : x) peak = std::max(peak, std::abs(v));
      if (peak > 0.0) {
        const double gain = target_peak / peak;
        for (double& v : x) v *= gain;
      }
      break;
    }
    case SignalKind::kWhiteNoise:
      x = uniform_noise(n, amplitude_of(0), spec.seed);
      break;
    case SignalKind::kChirp: {
      if (spec.frequencies.size() != 2) {
        throw Error(ErrorCode::kInvalidInput, "chirp needs start and end frequencies");
      }
      const double f0 = spec.frequencies[0];
      const double f1 = spec.frequencies[1];
      const double a = amplitude_of(0);
      for (std::size_t k = 0; k < n; ++k) {
        const double t = static_cast<double>(k) / sample_rate;
        const double phase = two_pi * (f0 * t + 0.5 * (f1 - f0) * t * t / spec.duration);
        x[k] = a * std::sin(phase);
      }
      break;
    }
  }
  return Signal(std::move(x), sample_rate);
}

double mse(const Signal& a, const Signal& b) {
  require_same_shape(a, b, "mse");
  if (a.empty()) return 0.0;
  double acc = 0.0;
  for (std::size_t k = 0; k < a.size(); ++k) {
    const double d = a[k] - b[k];
    acc += d * d;
  }
  return acc / static_cast<double>(a.size());
}

std::pair<Signal, Signal> split_train_test(const Signal& signal, double fraction) {
  if (!(fraction > 0.0 && fraction < 1.0)) {
    throw Error(ErrorCode::kInvalidInput, "train fraction must lie in (0, 1)");
  }
  const auto cut = static_cast<std::size_t>(
      std::floor(fraction * static_cast<double>(signal.size())));
  return {signal.slice(0, cut), signal.slice(cut, signal.size() - cut)};
}

HarmonicLevels harmonic_levels(const Signal& signal, double fundamental, int count) {
  const double nyquist = signal.sample_rate() / 2.0;
  if (!(fundamental > 0.0) || fundamental >= nyquist) {
    throw Error(ErrorCode::kNyquistViolation,
                "fundamental must lie in (0, Nyquist)");
  }
  if (count < 1) {
    throw Error(ErrorCode::kInvalidInput, "harmonic count must be >= 1");
  }
  if (signal.size() < 2) {
    throw Error(ErrorCode::kInvalidInput, "signal too short for harmonic analysis");
  }
  const std::size_t n = signal.size();
  std::vector<double> windowed(signal.values());
  for (std::size_t k = 0; k < n; ++k) {
    // Periodic Hann window.
    const double w = 0.5 - 0.5 * std::cos(2.0 * std::numbers::pi * static_cast<double>(k) /
                                          static_cast<double>(n));
    windowed[k] *= w;
  }
  const Spectrum s = dft(Signal(std::move(windowed), signal.sample_rate()), DftMethod::kFast);
  const std::vector<double> mag = s.magnitudes();
  const double bins_per_hz = 1.0 / s.bin_resolution();
  const auto half_width = std::max<std::size_t>(
      1, static_cast<std::size_t>(std::floor(0.25 * fundamental * bins_per_hz)));

  HarmonicLevels out;
  const double reference = peak_near(mag, fundamental * bins_per_hz, half_width);
  if (!(reference > 0.0)) {
    throw Error(ErrorCode::kInvalidInput, "no energy at the fundamental");
  }
  for (int k = 1; k <= count; ++k) {
    const double f = fundamental * k;
    if (f >= nyquist) {
      out.truncated = true;
      break;
    }
    // Floor at -400 dB so an exactly clean harmonic stays finite.
    const double level = std::max(peak_near(mag, f * bins_per_hz, half_width), reference * 1e-20);
    out.levels_db.push_back(k == 1 ? 0.0 : 20.0 * std::log10(level / reference));
  }
  return out;
}

}  // namespace volterra

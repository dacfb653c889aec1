#include "volterra/fir.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "volterra/error.hpp"

namespace volterra {
namespace {

constexpr double kPi = std::numbers::pi;

double window_value(const Window& window, int i, int order) {
  if (order == 0) return 1.0;
  const double n = static_cast<double>(order);
  switch (window.kind) {
    case WindowKind::kHamming:
      return 0.54 - 0.46 * std::cos(2.0 * kPi * i / n);
    case WindowKind::kKaiser: {
      const double r = 2.0 * i / n - 1.0;
      return std::cyl_bessel_i(0.0, window.kaiser_beta * std::sqrt(std::max(0.0, 1.0 - r * r))) /
             std::cyl_bessel_i(0.0, window.kaiser_beta);
    }
  }
  return 1.0;
}

// Ideal lowpass impulse response with cutoff fc (cycles/sample), centred on
// order/2, evaluated at tap i.
double ideal_lowpass(double fc, int i, int order) {
  const double m = i - 0.5 * order;
  if (m == 0.0) return 2.0 * fc;
  return std::sin(2.0 * kPi * fc * m) / (kPi * m);
}

// Builds taps for i <= order/2 and mirrors them so that b_i == b_{N-i}
// holds exactly.
template <typename Tap>
std::vector<double> symmetric_taps(int order, Tap tap) {
  std::vector<double> b(static_cast<std::size_t>(order) + 1);
  for (int i = 0; i <= order / 2; ++i) {
    const double v = tap(i);
    b[static_cast<std::size_t>(i)] = v;
    b[static_cast<std::size_t>(order - i)] = v;
  }
  return b;
}

void check_coefficients(const std::vector<double>& b, double sample_rate) {
  if (b.empty()) throw Error(ErrorCode::kInvalidInput, "filter has no coefficients");
  for (double v : b) {
    if (!std::isfinite(v)) throw Error(ErrorCode::kInvalidInput, "non-finite filter coefficient");
  }
  if (!(sample_rate > 0.0)) throw Error(ErrorCode::kInvalidInput, "sample rate must be positive");
}

void check_factor(int factor) {
  if (factor <= 0) {
    throw Error(ErrorCode::kInvalidInput,
                "rate change factor must be >= 1, got " + std::to_string(factor));
  }
}

}  // namespace

FirFilter::FirFilter(std::vector<double> coefficients, double sample_rate)
    : coefficients_(std::move(coefficients)) {
  check_coefficients(coefficients_, sample_rate);
  design_.sample_rate = sample_rate;
  design_.order = order();
}

FirFilter::FirFilter(std::vector<double> coefficients, FirDesign design)
    : coefficients_(std::move(coefficients)), design_(design) {
  check_coefficients(coefficients_, design_.sample_rate);
  design_.order = order();
}

bool FirFilter::is_symmetric(double tolerance) const {
  const std::size_t n = coefficients_.size();
  for (std::size_t i = 0; i < n / 2; ++i) {
    if (std::abs(coefficients_[i] - coefficients_[n - 1 - i]) > tolerance) return false;
  }
  return true;
}

std::complex<double> FirFilter::response(double frequency_hz) const {
  const double w = 2.0 * kPi * frequency_hz / design_.sample_rate;
  std::complex<double> acc = 0.0;
  for (std::size_t i = 0; i < coefficients_.size(); ++i) {
    const double a = w * static_cast<double>(i);
    acc += coefficients_[i] * std::complex<double>(std::cos(a), -std::sin(a));
  }
  return acc;
}

double FirFilter::gain_db(double frequency_hz) const {
  return 20.0 * std::log10(std::max(std::abs(response(frequency_hz)), 1e-300));
}

FirFilter design_lowpass(int order, double cutoff, double sample_rate, Window window) {
  if (order < 4) {
    throw Error(ErrorCode::kInvalidDesign, "lowpass order must be >= 4");
  }
  if (!(cutoff > 0.0) || !(cutoff < sample_rate / 2.0)) {
    throw Error(ErrorCode::kInvalidDesign,
                "lowpass cutoff " + std::to_string(cutoff) + " Hz outside (0, Nyquist)");
  }
  const double fc = cutoff / sample_rate;
  std::vector<double> b = symmetric_taps(
      order, [&](int i) { return ideal_lowpass(fc, i, order) * window_value(window, i, order); });
  double sum = 0.0;
  for (double v : b) sum += v;
  for (double& v : b) v /= sum;

  FirDesign d;
  d.kind = FilterKind::kLowpass;
  d.f_lo = 0.0;
  d.f_hi = cutoff;
  d.sample_rate = sample_rate;
  d.window = window;
  return FirFilter(std::move(b), d);
}

FirFilter design_bandpass(int order, double f_lo, double f_hi, double sample_rate,
                          double transition_hz, Window window) {
  if (order < 4) {
    throw Error(ErrorCode::kInvalidDesign, "bandpass order must be >= 4");
  }
  if (!(f_lo > 0.0 && f_lo < f_hi && f_hi < sample_rate / 2.0)) {
    throw Error(ErrorCode::kInvalidDesign,
                "band edges [" + std::to_string(f_lo) + ", " + std::to_string(f_hi) +
                    "] Hz must satisfy 0 < f_lo < f_hi < Nyquist");
  }
  if (!(transition_hz >= 0.0)) {
    throw Error(ErrorCode::kInvalidDesign, "transition width must be non-negative");
  }
  const double lo = f_lo / sample_rate;
  const double hi = f_hi / sample_rate;
  std::vector<double> b = symmetric_taps(order, [&](int i) {
    return (ideal_lowpass(hi, i, order) - ideal_lowpass(lo, i, order)) *
           window_value(window, i, order);
  });

  FirDesign d;
  d.kind = FilterKind::kBandpass;
  d.f_lo = f_lo;
  d.f_hi = f_hi;
  d.sample_rate = sample_rate;
  d.window = window;
  d.transition_hz = transition_hz;

  const double centre = 0.5 * (f_lo + f_hi);
  {
    const double g = std::abs(FirFilter(b, sample_rate).response(centre));
    if (!(g > 0.0)) {
      throw Error(ErrorCode::kInvalidDesign, "bandpass has zero gain at its centre");
    }
    for (double& v : b) v /= g;
  }
  FirFilter unit(b, sample_rate);

  // Passband: dense sampling of [f_lo, f_hi].
  constexpr int kPassbandPoints = 64;
  double pmin = 1e300, pmax = -1e300;
  for (int k = 0; k <= kPassbandPoints; ++k) {
    const double g = unit.gain_db(f_lo + (f_hi - f_lo) * k / kPassbandPoints);
    pmin = std::min(pmin, g);
    pmax = std::max(pmax, g);
  }
  d.passband_min_db = pmin;
  d.passband_max_db = pmax;

  // Stopband: everything outside [stop_lo, stop_hi]. The response is a
  // trigonometric polynomial of degree `order`, so a grid with 32 points per
  // 1/(order+1) of the sample rate resolves every lobe; the stopband edges
  // are evaluated exactly.
  const double stop_lo = std::min(f_lo, centre - transition_hz);
  const double stop_hi = std::max(f_hi, centre + transition_hz);
  const double nyquist = sample_rate / 2.0;
  const double step = sample_rate / (32.0 * (order + 1));
  double speak = -1e300;
  auto probe = [&](double f) { speak = std::max(speak, unit.gain_db(f)); };
  if (stop_lo > 0.0) {
    for (double f = 0.0; f < stop_lo; f += step) probe(f);
    probe(stop_lo);
  }
  if (stop_hi < nyquist) {
    probe(stop_hi);
    for (double f = stop_hi + step; f < nyquist; f += step) probe(f);
    probe(nyquist);
  }
  d.stopband_peak_db = speak;
  return FirFilter(std::move(b), d);
}

Signal apply_fir(const FirFilter& filter, const Signal& signal) {
  if (filter.sample_rate() != signal.sample_rate()) {
    throw Error(ErrorCode::kInvalidInput, "apply_fir: filter and signal sample rates differ");
  }
  const auto& b = filter.coefficients();
  const auto& x = signal.values();
  std::vector<double> y(x.size(), 0.0);
  for (std::size_t n = 0; n < x.size(); ++n) {
    const std::size_t taps = std::min(b.size(), n + 1);
    double acc = 0.0;
    for (std::size_t i = 0; i < taps; ++i) acc += b[i] * x[n - i];
    y[n] = acc;
  }
  return Signal(std::move(y), signal.sample_rate());
}

int default_multirate_order(int factor) { return 32 * std::max(factor, 1); }

Signal decimate(const Signal& signal, int factor, bool guard, int filter_order) {
  check_factor(factor);
  if (factor == 1) return signal;
  const auto d = static_cast<std::size_t>(factor);
  const auto& x = signal.values();
  const std::size_t out_len = (x.size() + d - 1) / d;
  std::vector<double> y(out_len);
  if (!guard) {
    for (std::size_t k = 0; k < out_len; ++k) y[k] = x[k * d];
  } else {
    const int order = filter_order > 0 ? filter_order : default_multirate_order(factor);
    const FirFilter lp =
        design_lowpass(order, signal.sample_rate() / (2.0 * factor), signal.sample_rate());
    const auto& b = lp.coefficients();
    // Only the retained outputs of the anti-aliasing filter are computed.
    for (std::size_t k = 0; k < out_len; ++k) {
      const std::size_t n = k * d;
      const std::size_t taps = std::min(b.size(), n + 1);
      double acc = 0.0;
      for (std::size_t i = 0; i < taps; ++i) acc += b[i] * x[n - i];
      y[k] = acc;
    }
  }
  return Signal(std::move(y), signal.sample_rate() / factor);
}

Signal upsample(const Signal& signal, int factor, bool interpolate, int filter_order) {
  check_factor(factor);
  if (factor == 1) return signal;
  const auto u = static_cast<std::size_t>(factor);
  const auto& x = signal.values();
  const double out_rate = signal.sample_rate() * factor;
  std::vector<double> y(x.size() * u, 0.0);
  if (!interpolate) {
    for (std::size_t k = 0; k < x.size(); ++k) y[k * u] = x[k];
    return Signal(std::move(y), out_rate);
  }
  const int order = filter_order > 0 ? filter_order : default_multirate_order(factor);
  const FirFilter lp = design_lowpass(order, out_rate / (2.0 * factor), out_rate);
  const auto& b = lp.coefficients();
  const double gain = static_cast<double>(factor);
  // Convolution with the zero-stuffed sequence: only taps that land on an
  // original sample contribute.
  for (std::size_t m = 0; m < y.size(); ++m) {
    double acc = 0.0;
    for (std::size_t i = m % u; i < b.size() && i <= m; i += u) acc += b[i] * x[(m - i) / u];
    y[m] = gain * acc;
  }
  return Signal(std::move(y), out_rate);
}

}  // namespace volterra

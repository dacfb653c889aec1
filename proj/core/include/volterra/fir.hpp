#pragma once

#include <complex>
#include <vector>

#include "volterra/signal.hpp"

namespace volterra {

enum class FilterKind { kLowpass, kBandpass, kCustom };
enum class WindowKind { kHamming, kKaiser };

struct Window {
  WindowKind kind = WindowKind::kHamming;
  double kaiser_beta = 5.0;  // only used by kKaiser
};

// Design parameters plus the response actually achieved by the coefficients.
// Gains are in dB relative to the nominal passband gain.
struct FirDesign {
  FilterKind kind = FilterKind::kCustom;
  double f_lo = 0.0;  // lowpass: 0
  double f_hi = 0.0;  // lowpass: cutoff
  int order = 0;
  double sample_rate = 1.0;
  Window window;

  // Bandpass only: half-width of the interval around the band centre outside
  // of which the stopband is measured.
  double transition_hz = 0.0;
  double passband_min_db = 0.0;
  double passband_max_db = 0.0;
  // Largest gain anywhere in the stopband (negative means attenuation).
  double stopband_peak_db = 0.0;
};

class FirFilter {
 public:
  // Arbitrary coefficients b_0..b_N. Throws kInvalidInput if empty, non-finite
  // or if sample_rate is not positive.
  FirFilter(std::vector<double> coefficients, double sample_rate);
  FirFilter(std::vector<double> coefficients, FirDesign design);

  const std::vector<double>& coefficients() const { return coefficients_; }
  int order() const { return static_cast<int>(coefficients_.size()) - 1; }
  double sample_rate() const { return design_.sample_rate; }
  const FirDesign& design() const { return design_; }

  // Samples of delay introduced by a linear-phase filter (order / 2).
  double group_delay() const { return 0.5 * order(); }
  bool is_symmetric(double tolerance = 1e-12) const;

  std::complex<double> response(double frequency_hz) const;
  double gain_db(double frequency_hz) const;

  // True when the stopband peak is at or below -attenuation_db.
  bool meets_stopband(double attenuation_db) const {
    return design_.stopband_peak_db <= -attenuation_db;
  }

 private:
  std::vector<double> coefficients_;
  FirDesign design_;
};

// Windowed-sinc lowpass with unit DC gain and symmetric coefficients.
// Throws kInvalidDesign unless 0 < cutoff < sample_rate/2 and order >= 4.
FirFilter design_lowpass(int order, double cutoff, double sample_rate,
                         Window window = {});

// Windowed-sinc bandpass normalized to unit gain at the band centre. The
// achieved passband deviation over [f_lo, f_hi] and the stopband peak outside
// [centre - transition_hz, centre + transition_hz] are recorded in design();
// no attenuation is guaranteed. Throws kInvalidDesign unless
// 0 < f_lo < f_hi < sample_rate/2.
FirFilter design_bandpass(int order, double f_lo, double f_hi,
                          double sample_rate, double transition_hz = 3.0,
                          Window window = {});

// Causal convolution y(n) = sum_i b_i x(n - i) with zero history; the output
// has the input's length. Throws kInvalidInput on sample-rate mismatch.
Signal apply_fir(const FirFilter& filter, const Signal& signal);

// Anti-aliasing / interpolation filter order used when none is given.
int default_multirate_order(int factor);

// Keeps every factor-th sample, output[k] = filtered[k * factor]. With guard
// on, `filtered` is the input passed through a lowpass at pi/factor;
// otherwise it is the raw input. filter_order <= 0 selects the default.
// Throws kInvalidInput for factor <= 0.
Signal decimate(const Signal& signal, int factor, bool guard,
                int filter_order = 0);

// Inserts factor - 1 zeros between samples. With interpolate on, the result
// is passed through a lowpass at pi/factor with passband gain `factor`.
// Throws kInvalidInput for factor <= 0.
Signal upsample(const Signal& signal, int factor, bool interpolate,
                int filter_order = 0);

}  // namespace volterra

#include <gtest/gtest.h>

#include <cmath>

#include "oracles.hpp"
#include "volterra/error.hpp"
#include "volterra/inverse.hpp"

using namespace volterra;

namespace {

SyntheticPlant quadratic_plant() {
  SyntheticPlant p;
  p.kernel = VolterraKernel(1, 0.0, {1.0}, {0.1}, {0.0});
  return p;
}

SyntheticPlant identity_plant(std::size_t m) {
  SyntheticPlant p;
  p.kernel = VolterraKernel::identity(m);
  return p;
}

Signal sine(double amplitude, double f = 20.0, double fs = 512.0, double dur = 2.0) {
  return generate({.kind = SignalKind::kSine, .frequencies = {f}, .duration = dur, .amplitudes = {amplitude}}, fs);
}

}  // namespace

TEST(PlantTest, RejectsStrongNonlinearity) {
  SyntheticPlant p;
  p.kernel = VolterraKernel(1, 0.0, {1.0}, {0.6}, {0.0});
  EXPECT_THROW(p.validate(), Error);
  p.kernel = VolterraKernel(1, 0.0, {1.0}, {0.0}, {0.0});
  p.noise_level = -1.0;
  EXPECT_THROW(p.validate(), Error);
}

TEST(PlantTest, RandomPlantIsDeterministicAndWeak) {
  const SyntheticPlant a = random_plant(4, 11), b = random_plant(4, 11);
  EXPECT_EQ(a.kernel, b.kernel);
  EXPECT_EQ(a.kernel.h1()[0], 1.0);
  for (double v : a.kernel.h2()) EXPECT_LE(std::abs(v), 0.1);
  for (double v : a.kernel.h3()) EXPECT_LE(std::abs(v), 0.01);
  EXPECT_NE(a.kernel, random_plant(4, 12).kernel);
}

TEST(SimulatePlantTest, IdentityNoiseFree) {
  const Signal x(uniform_noise(300, 1.0, 2), 512.0);
  EXPECT_EQ(simulate_plant(identity_plant(3), x), x);
}

TEST(SimulatePlantTest, SeededNoise) {
  SyntheticPlant p = identity_plant(2);
  p.noise_level = 0.01;
  p.seed = 5;
  const Signal x(uniform_noise(300, 1.0, 2), 512.0);
  const Signal y = simulate_plant(p, x);
  EXPECT_EQ(y, simulate_plant(p, x));
  double worst = 0.0;
  for (std::size_t k = 0; k < x.size(); ++k) worst = std::max(worst, std::abs(y[k] - x[k]));
  EXPECT_GT(worst, 0.0);
  EXPECT_LE(worst, 0.01);
}

TEST(SimulatePlantTest, SecondHarmonicLevel) {
  // 0.1 sin^2 = 0.05 - 0.05 cos 2wt: the second harmonic sits at 20 log10(0.05) = -26.02 dB.
  const Signal y = simulate_plant(quadratic_plant(), sine(1.0));
  const HarmonicLevels h = harmonic_levels(y, 20.0, 3);
  EXPECT_NEAR(h.levels_db[1], 20.0 * std::log10(0.05), 0.1);
}

TEST(EstimateInverseTest, IdentityPlant) {
  const Signal x(uniform_noise(2000, 1.0, 8), 512.0);
  const VolterraKernel g = estimate_inverse({.memory = 3, .max_iterations = 5}, x, simulate_plant(identity_plant(3), x));
  const VolterraKernel id = VolterraKernel::identity(3);
  for (std::size_t i = 0; i < 3; ++i) EXPECT_NEAR(g.h1()[i], id.h1()[i], 1e-6);
  for (double v : g.h2()) EXPECT_NEAR(v, 0.0, 1e-6);
  for (double v : g.h3()) EXPECT_NEAR(v, 0.0, 1e-6);
}

TEST(EstimateInverseTest, MemorylessMatchesSeriesReversion) {
  const Signal x(uniform_noise(4000, 1.0, 21), 512.0);
  const auto [train, test] = split_train_test(x, 0.7);
  const VolterraKernel g = estimate_inverse({.memory = 1}, train, simulate_plant(quadratic_plant(), train));
  const VolterraKernel ref = oracle::series_reversion(1.0, 0.1, 0.0);
  EXPECT_NEAR(g.h1()[0], ref.h1()[0], 0.02);
  EXPECT_NEAR(g.h2()[0], ref.h2()[0], 0.02);
  EXPECT_NEAR(g.h3()[0], ref.h3()[0], 0.02);
  // Held-out part: the cascade is much closer to unity than the plant alone.
  const double corrected = evaluate_cascade(quadratic_plant(), g, test).residual_mse;
  const double raw = mse(simulate_plant(quadratic_plant(), test), test);
  EXPECT_LT(corrected, 0.1 * raw);
}

TEST(CascadeTest, IdentityInverseReproducesThePlant) {
  const SyntheticPlant p = random_plant(3, 4);
  const Signal x = sine(0.5);
  const CascadeReport r = evaluate_cascade(p, VolterraKernel::identity(3), x, {.fundamental = 20.0});
  EXPECT_EQ(r.residual_mse, mse(simulate_plant(p, x), x));
  for (double s : r.suppression_db) EXPECT_EQ(s, 0.0);
  EXPECT_EQ(evaluate_cascade(identity_plant(2), VolterraKernel::identity(2), x).residual_mse, 0.0);
}

TEST(CascadeTest, SeriesReversionSuppressesSecondHarmonic) {
  const CascadeReport r = evaluate_cascade(quadratic_plant(), oracle::series_reversion(1.0, 0.1, 0.0), sine(0.5),
                                           {.fundamental = 20.0, .harmonics = 3, .training_peak = 1.0});
  ASSERT_EQ(r.suppression_db.size(), 3u);
  EXPECT_GE(r.suppression_db[1], 20.0);
  EXPECT_EQ(r.first_order_gain_error, 0.0);
  EXPECT_FALSE(r.extrapolated);
  EXPECT_TRUE(evaluate_cascade(quadratic_plant(), VolterraKernel::identity(1), sine(1.5), {.training_peak = 1.0})
                  .extrapolated);
}

TEST(CascadeProperty, SmallProbeFirstOrderIsUnity) {
  const Signal x = sine(1e-3);
  const CascadeReport r = evaluate_cascade(quadratic_plant(), oracle::series_reversion(1.0, 0.1, 0.0), x);
  EXPECT_LE(r.residual_mse, 1e-10 * x.power());
}

TEST(EquivalenceTest, NeedsThreeProbes) {
  EXPECT_THROW(verify_pre_post_equivalence(quadratic_plant(), VolterraKernel::identity(1), {sine(1.0), sine(0.5)}),
               Error);
}

TEST(EquivalenceTest, IdentityHasNoResidual) {
  const EquivalenceReport r =
      verify_pre_post_equivalence(identity_plant(2), VolterraKernel::identity(2), {sine(0.25), sine(0.5), sine(1.0)});
  for (const ProbeResidual& p : r.probes) {
    EXPECT_EQ(p.pre, 0.0);
    EXPECT_EQ(p.post, 0.0);
  }
}

TEST(EquivalenceTest, SeriesReversionHasFourthOrderRemainder) {
  const EquivalenceReport r = verify_pre_post_equivalence(
      quadratic_plant(), oracle::series_reversion(1.0, 0.1, 0.0), {sine(1.0), sine(0.25), sine(0.5)});
  ASSERT_EQ(r.probes.size(), 3u);
  EXPECT_EQ(r.probes.front().amplitude, 0.25);
  ASSERT_EQ(r.pre_halving_ratios.size(), 2u);
  EXPECT_NEAR(r.required_halving_ratio, 64.0 / 3.0, 1e-12);
  for (double q : r.pre_halving_ratios) EXPECT_GE(q, 16.0);
  for (double q : r.post_halving_ratios) EXPECT_GE(q, 16.0);
  EXPECT_TRUE(r.order_consistent);
  EXPECT_LE(r.worst_agreement, 2.0);
}

TEST(InverseProperty, InverseOfInverseMatchesThePlant) {
  // Measurement noise sets the forward fit error the comparison is scaled by.
  const SyntheticPlant plant = random_plant(2, 31, 0.01);
  const Signal x(uniform_noise(6000, 1.0, 32), 512.0);
  const auto [xtr, xte] = split_train_test(x, 0.7);
  const Signal ytr = simulate_plant(plant, xtr), yte = simulate_plant(plant, xte);
  const EstimationConfig c{.memory = 2};
  const VolterraKernel forward = estimate(c, xtr, ytr).kernel;
  const VolterraKernel g = estimate_inverse(c, xtr, ytr);
  // Identify the inverse of g from its own input/output pair.
  const VolterraKernel gg = estimate_inverse(c, ytr, apply_kernel(g, ytr));
  const double forward_err = mse(apply_kernel(forward, xte), yte);
  const double twice_err = mse(apply_kernel(gg, xte), yte);
  EXPECT_LE(twice_err, 2.0 * forward_err + 1e-12) << "forward " << forward_err << " twice " << twice_err;
}

#include <gtest/gtest.h>

#include <cmath>

#include "volterra/error.hpp"
#include "volterra/note_bank.hpp"

using namespace volterra;

TEST(NoteFrequencyTest, ReferencePoints) {
  EXPECT_NEAR(note_frequency(9, 4), 440.0, 0.05);
  EXPECT_DOUBLE_EQ(note_frequency(0, 0), 16.35);
  EXPECT_NEAR(note_frequency(11, 9), 15804.0, 5.0);
  EXPECT_EQ(note_name(6), "Fa#");
}

TEST(NoteFrequencyTest, OctaveDoubles) {
  for (int n = 0; n < 12; ++n)
    for (int o = 0; o < 9; ++o) EXPECT_NEAR(note_frequency(n, o + 1) / note_frequency(n, o), 2.0, 1e-12);
}

TEST(NoteFrequencyTest, OutOfRange) {
  EXPECT_THROW(note_frequency(12, 0), Error);
  EXPECT_THROW(note_frequency(0, 10), Error);
  EXPECT_THROW(note_frequency(-1, 3), Error);
}

TEST(BandPlanTest, DefaultTable) {
  const BandPlan p = BandPlan::default_plan();
  ASSERT_EQ(p.bands().size(), 5u);
  const double rates[] = {300.0, 700.0, 2940.0, 11025.0, 44100.0};
  for (std::size_t i = 0; i < 5; ++i) {
    EXPECT_EQ(p.bands()[i].sample_rate, rates[i]);
    EXPECT_GT(p.bands()[i].sample_rate, 2.0 * p.bands()[i].f_max);
  }
  EXPECT_EQ(p.bands()[0].f_max, 61.64);
  EXPECT_EQ(p.bands()[4].f_max, 15804.0);
}

TEST(BandPlanTest, Lookup) {
  const BandPlan p = BandPlan::default_plan();
  EXPECT_EQ(p.band_for(23.12), 0);
  EXPECT_EQ(p.band_for(440.0), 2);
  // Si1 sits in the gap above band 0 and is assigned to it.
  EXPECT_EQ(p.band_for(61.74), 0);
  EXPECT_EQ(p.band_for(15804.0), 4);
  EXPECT_THROW(p.band_for(16000.0), Error);
}

TEST(BandPlanTest, Validation) {
  EXPECT_THROW(BandPlan({{0.0, 200.0, "x", 300.0}}), Error);  // Nyquist
  EXPECT_THROW(BandPlan({{0.0, 50.0, "a", 300.0}, {40.0, 100.0, "b", 300.0}}), Error);  // overlap
  EXPECT_THROW(BandPlan({}), Error);
}

TEST(OrderPolicyTest, DefaultRanges) {
  const OrderPolicy p = OrderPolicy::default_policy();
  EXPECT_EQ(p.rule_for(23.0).order, 50);
  EXPECT_EQ(p.rule_for(500.0).order, 50);
  EXPECT_EQ(p.rule_for(880.0).order, 30);
  EXPECT_EQ(p.rule_for(880.0).transition_hz, 5.0);
  EXPECT_EQ(p.rule_for(15000.0).order, 20);
  EXPECT_EQ(p.rule_for(15000.0).transition_hz, 10.0);
}

class NoteBankTest : public ::testing::Test {
 protected:
  static void SetUpTestSuite() { bank_ = new NoteBank(build_note_bank(BandPlan::default_plan())); }
  static void TearDownTestSuite() { delete bank_; }
  static NoteBank* bank_;
};
NoteBank* NoteBankTest::bank_ = nullptr;

TEST_F(NoteBankTest, HasOneHundredTwentyEntries) {
  EXPECT_EQ(bank_->entries.size(), 120u);
  EXPECT_LE(bank_->infeasible_count(), 120u);
}

TEST_F(NoteBankTest, EntriesUseTheirBandRate) {
  for (const NoteEntry& e : bank_->entries) {
    EXPECT_EQ(e.filter.sample_rate(), bank_->plan.bands()[e.band].sample_rate);
    EXPECT_EQ(e.meets_spec, e.filter.meets_stopband(kBankStopbandDb));
    EXPECT_TRUE(e.filter.is_symmetric(1e-12));
  }
}

TEST_F(NoteBankTest, KnownPlacements) {
  const NoteEntry& fa_sharp0 = bank_->entries[0 * 12 + 6];
  EXPECT_NEAR(fa_sharp0.centre_hz, 23.12, 0.005);
  EXPECT_EQ(fa_sharp0.band, 0);
  EXPECT_EQ(fa_sharp0.filter.sample_rate(), 300.0);
  EXPECT_NEAR(fa_sharp0.filter.design().f_lo, 22.19, 0.01);
  EXPECT_NEAR(fa_sharp0.filter.design().f_hi, 24.04, 0.01);
  const NoteEntry& la4 = bank_->entries[4 * 12 + 9];
  EXPECT_EQ(la4.band, 2);
  EXPECT_EQ(la4.filter.sample_rate(), 2940.0);
}

TEST_F(NoteBankTest, ZeroGainsGiveSilence) {
  const Signal x = generate({.kind = SignalKind::kMultisine, .frequencies = {40.0, 90.0}, .duration = 0.5}, 44100.0);
  const std::vector<double> gains(120, 0.0);
  const auto [y, report] = bank_split_recombine(*bank_, x, gains);
  EXPECT_EQ(y.size(), x.size());
  EXPECT_EQ(y.peak(), 0.0);
  EXPECT_EQ(report.best_fit_scale, 0.0);
}

TEST_F(NoteBankTest, RejectsIncompatibleRates) {
  const Signal x = Signal::zeros(1000, 1000.0);
  EXPECT_THROW(bank_split_recombine(*bank_, x), Error);
  EXPECT_THROW(bank_split_recombine(*bank_, Signal::zeros(100, 44100.0), std::vector<double>(3, 1.0)), Error);
}

TEST_F(NoteBankTest, LowerRateInputSkipsFasterBands) {
  const Signal x = generate({.kind = SignalKind::kSine, .frequencies = {23.12}, .duration = 4.0}, 2100.0);
  const auto [y, report] = bank_split_recombine(*bank_, x);
  EXPECT_EQ(report.skipped_bands, (std::vector<int>{2, 3, 4}));
  EXPECT_GT(y.power(), 0.0);
}

TEST_F(NoteBankTest, AlignedSingleToneIsAScaledCopy) {
  // A single tone leaves only a gain and no phase error once the branch
  // delays are compensated.
  const Signal x = generate({.kind = SignalKind::kSine, .frequencies = {110.0}, .duration = 2.0}, 44100.0);
  const auto [y, report] = bank_split_recombine(*bank_, x);
  EXPECT_LT(report.residual_fraction, 1e-3);
  const auto unaligned = bank_split_recombine(*bank_, x, {}, false).second;
  EXPECT_GT(unaligned.residual_fraction, report.residual_fraction);
}

#include <gtest/gtest.h>

#include <filesystem>
#include <random>
#include <sstream>

#include "oracles.hpp"
#include "volterra/error.hpp"
#include "volterra/io.hpp"

using namespace volterra;

namespace {

template <typename F>
ErrorCode code_of(F&& f, std::string* message = nullptr) {
  try {
    f();
  } catch (const Error& e) {
    if (message) *message = e.what();
    return e.code();
  }
  ADD_FAILURE() << "no volterra::Error thrown";
  return ErrorCode::kImplementationBug;
}

// The published estimation object, with its two visible samples per array
// and the separator after errorMax restored.
constexpr const char* kListing = R"({"alpha1": 1.0,
"alpha2": 0.4,
"alpha3": 0.3,
"iterations": 3000,
"memory": 60,
"errorMax": 5.5e-05,
"input": [
    1.3197036988503929e-07,
    0.00054189307967447112],
"desired": [
    -5.828741642956409e-09,
    -3.6815580229155927e-05]
})";

}  // namespace

TEST(EstimationObjectTest, ParsesTheListing) {
  const EstimationObject o = read_estimation_object(kListing);
  EXPECT_EQ(o.config.alpha1, 1.0);
  EXPECT_EQ(o.config.alpha2, 0.4);
  EXPECT_EQ(o.config.alpha3, 0.3);
  EXPECT_EQ(o.config.max_iterations, 3000);
  EXPECT_EQ(o.config.memory, 60u);
  EXPECT_EQ(o.config.error_threshold, 5.5e-05);
  EXPECT_EQ(o.input, (std::vector<double>{1.3197036988503929e-07, 0.00054189307967447112}));
  EXPECT_EQ(o.desired, (std::vector<double>{-5.828741642956409e-09, -3.6815580229155927e-05}));
  EXPECT_TRUE(o.warnings.empty());
  EXPECT_EQ(o.input_signal(512.0).sample_rate(), 512.0);
}

TEST(EstimationObjectTest, DefaultsFillPhiAndPrecompute) {
  const EstimationObject o = read_estimation_object(kListing, {.phi = 0.25, .precompute = true});
  EXPECT_EQ(o.config.phi, 0.25);
  EXPECT_TRUE(o.config.precompute);
}

TEST(EstimationObjectTest, Errors) {
  std::string msg;
  const std::string mismatch =
      R"({"alpha1":1,"alpha2":0.4,"alpha3":0.3,"iterations":3,"memory":2,"errorMax":0,"input":[1,2],"desired":[1]})";
  EXPECT_EQ(code_of([&] { read_estimation_object(mismatch); }, &msg), ErrorCode::kParse);
  EXPECT_NE(msg.find("desired"), std::string::npos);

  const std::string missing = R"({"alpha1":1,"alpha2":0.4,"alpha3":0.3,"iterations":3,"errorMax":0,"input":[],"desired":[]})";
  EXPECT_EQ(code_of([&] { read_estimation_object(missing); }, &msg), ErrorCode::kParse);
  EXPECT_NE(msg.find("memory"), std::string::npos);

  const std::string wrong_type =
      R"({"alpha1":"1","alpha2":0.4,"alpha3":0.3,"iterations":3,"memory":2,"errorMax":0,"input":[],"desired":[]})";
  EXPECT_EQ(code_of([&] { read_estimation_object(wrong_type); }, &msg), ErrorCode::kParse);
  EXPECT_NE(msg.find("alpha1"), std::string::npos);

  // The listing exactly as printed lacks a comma after errorMax.
  EXPECT_EQ(code_of([] { read_estimation_object(R"({"errorMax": 5.5e-05
"input": []})"); }),
            ErrorCode::kParse);

  const std::string bad_alpha =
      R"({"alpha1":2.5,"alpha2":0.4,"alpha3":0.3,"iterations":3,"memory":2,"errorMax":0,"input":[],"desired":[]})";
  EXPECT_EQ(code_of([&] { read_estimation_object(bad_alpha); }), ErrorCode::kConfig);
}

TEST(EstimationObjectTest, UnknownKeysWarn) {
  const std::string extra =
      R"({"alpha1":1,"alpha2":0.4,"alpha3":0.3,"iterations":3,"memory":2,"errorMax":0,"input":[],"desired":[],"fs":512})";
  const EstimationObject o = read_estimation_object(extra);
  ASSERT_EQ(o.warnings.size(), 1u);
  EXPECT_NE(o.warnings[0].find("fs"), std::string::npos);
}

TEST(EstimationObjectTest, WritesExactlyTheEightKeys) {
  const std::vector<double> x(8, 0.5);
  const std::string doc = write_estimation_object({}, x, x);
  for (const char* key : {"alpha1", "alpha2", "alpha3", "iterations", "memory", "errorMax", "input", "desired"})
    EXPECT_NE(doc.find(std::string("\"") + key + "\""), std::string::npos) << key;
  EXPECT_EQ(doc.find("phi"), std::string::npos);
  EXPECT_EQ(read_estimation_object(doc).input.size(), 8u);
}

TEST(EstimationObjectTest, RandomRoundTrip) {
  std::mt19937_64 rng(71);
  for (int t = 0; t < 20; ++t) {
    const auto x = oracle::random_vector(1 + t * 3, 1.0, rng);
    const auto d = oracle::random_vector(x.size(), 1e-3, rng);
    const EstimationConfig c{.memory = static_cast<std::size_t>(1 + t % 5),
                             .alpha1 = std::uniform_real_distribution<double>(0.01, 1.99)(rng),
                             .alpha2 = 0.4,
                             .alpha3 = 0.1 + 1e-17 * t,
                             .max_iterations = 1 + t,
                             .error_threshold = std::ldexp(1.0, -t)};
    const EstimationObject o = read_estimation_object(write_estimation_object(c, x, d));
    EXPECT_EQ(o.config.alpha1, c.alpha1);
    EXPECT_EQ(o.config.alpha3, c.alpha3);
    EXPECT_EQ(o.config.memory, c.memory);
    EXPECT_EQ(o.config.max_iterations, c.max_iterations);
    EXPECT_EQ(o.config.error_threshold, c.error_threshold);
    EXPECT_EQ(o.input, x);
    EXPECT_EQ(o.desired, d);
  }
}

TEST(CsvTest, ThreeSampleRoundTrip) {
  const Signal s({0.1, -1.0 / 3.0, 2.5e-300}, 2560.0);
  std::stringstream buf;
  write_csv_signal(buf, s);
  EXPECT_EQ(buf.str().rfind("sample_rate,2560\n", 0), 0u);
  EXPECT_EQ(read_csv_signal(buf), s);
}

TEST(CsvTest, FileRoundTrip) {
  const auto path = std::filesystem::temp_directory_path() / "volterra_csv_roundtrip.csv";
  const Signal s(uniform_noise(100, 1.0, 3), 512.0);
  write_csv_signal(path, s);
  EXPECT_EQ(read_csv_signal(path), s);
  std::filesystem::remove(path);
}

TEST(CsvTest, ErrorsCarryLineNumbers) {
  std::string msg;
  std::istringstream no_header("0.5\n0.25\n");
  EXPECT_EQ(code_of([&] { read_csv_signal(no_header); }, &msg), ErrorCode::kParse);
  EXPECT_NE(msg.find("line 1"), std::string::npos) << msg;

  std::istringstream bad_row("sample_rate,100\n0.5\n\nabc\n");
  EXPECT_EQ(code_of([&] { read_csv_signal(bad_row); }, &msg), ErrorCode::kParse);
  EXPECT_NE(msg.find("line 4"), std::string::npos) << msg;

  std::istringstream blanks("sample_rate,100\n\n0.5\n\n");
  EXPECT_EQ(read_csv_signal(blanks).size(), 1u);

  EXPECT_THROW(read_csv_signal(std::filesystem::path("/nonexistent/x.csv")), Error);
}

TEST(KernelArchiveTest, RoundTrip) {
  std::mt19937_64 rng(2);
  KernelArchive a;
  a.kernel = oracle::random_kernel(4, rng, 0.125);
  a.config = {.memory = 4, .alpha1 = 0.9, .phi = 0.3, .max_iterations = 12, .error_threshold = 1e-5, .precompute = true};
  a.sample_rate = 512.0;
  a.training_digest = signal_digest(Signal({1.0, 2.0}, 512.0));
  a.created = "2024-01-01T00:00:00Z";
  const KernelArchive b = read_kernel_archive(write_kernel_archive(a));
  EXPECT_EQ(b.kernel, a.kernel);
  EXPECT_EQ(b.config.alpha1, a.config.alpha1);
  EXPECT_EQ(b.config.phi, a.config.phi);
  EXPECT_EQ(b.config.max_iterations, a.config.max_iterations);
  EXPECT_EQ(b.config.error_threshold, a.config.error_threshold);
  EXPECT_TRUE(b.config.precompute);
  EXPECT_EQ(b.sample_rate, a.sample_rate);
  EXPECT_EQ(b.training_digest, a.training_digest);
  EXPECT_EQ(b.created, a.created);
}

TEST(KernelArchiveTest, SizeMismatch) {
  const std::string doc = R"({"memory":2,"h0":0,"h1":[1,0],"h2":[0,0],"h3":[0,0,0,0],"metadata":{}})";
  EXPECT_EQ(code_of([&] { read_kernel_archive(doc); }), ErrorCode::kInvalidInput);
  EXPECT_EQ(code_of([] { read_kernel_archive("{"); }), ErrorCode::kParse);
}

TEST(DigestTest, DeterministicAndSensitive) {
  const Signal a({1.0, 2.0, 3.0}, 100.0);
  EXPECT_EQ(signal_digest(a), signal_digest(Signal({1.0, 2.0, 3.0}, 100.0)));
  EXPECT_EQ(signal_digest(a).size(), 16u);
  EXPECT_NE(signal_digest(a), signal_digest(Signal({1.0, 2.0, 3.0}, 200.0)));
  EXPECT_NE(signal_digest(a), signal_digest(Signal({1.0, 2.0, 3.0000000000000004}, 100.0)));
}

TEST(FormatTest, ShortestRoundTrip) {
  EXPECT_EQ(format_double(0.1), "0.1");
  EXPECT_EQ(format_double(5.5e-05), "5.5e-05");
  const double v = 1.0 / 3.0;
  EXPECT_EQ(std::stod(format_double(v)), v);
}

TEST(FormatTest, ReportHasSegregatedTimestamp) {
  const std::string r = format_report({{"mse", "0.5"}, {"rows", "6"}}, "2024-01-01T00:00:00Z");
  EXPECT_EQ(r, "# created 2024-01-01T00:00:00Z\nmse = 0.5\nrows = 6\n");
}

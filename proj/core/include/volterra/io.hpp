#pragma once

#include <filesystem>
#include <iosfwd>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "volterra/kernel.hpp"
#include "volterra/nlms.hpp"
#include "volterra/signal.hpp"

namespace volterra {

// The estimation exchange object: alpha1, alpha2, alpha3, iterations, memory,
// errorMax, input, desired. It carries no sample rate and no phi; those come
// from the caller.
struct EstimationObject {
  EstimationConfig config;
  std::vector<double> input;
  std::vector<double> desired;
  // One entry per unrecognised key; such keys are otherwise ignored.
  std::vector<std::string> warnings;

  Signal input_signal(double sample_rate) const { return Signal(input, sample_rate); }
  Signal desired_signal(double sample_rate) const { return Signal(desired, sample_rate); }
};

// Throws kParse naming the offending key for malformed JSON, a missing key,
// a type mismatch or arrays of different length, and kConfig if the scalar
// fields violate EstimationConfig's bounds. `defaults` supplies the fields the
// object does not carry.
EstimationObject read_estimation_object(std::string_view json_text,
                                        const EstimationConfig& defaults = {});

// Emits exactly the eight keys above, numbers in round-trip precision.
std::string write_estimation_object(const EstimationConfig& config,
                                    std::span<const double> input,
                                    std::span<const double> desired);

// CSV signal: a `sample_rate,<Hz>` header line, then one sample per line.
// Blank lines are skipped. Errors are kParse with a 1-based line number.
Signal read_csv_signal(std::istream& in);
Signal read_csv_signal(const std::filesystem::path& path);
void write_csv_signal(std::ostream& out, const Signal& signal);
void write_csv_signal(const std::filesystem::path& path, const Signal& signal);

struct KernelArchive {
  VolterraKernel kernel{1};
  EstimationConfig config;
  double sample_rate = 0.0;
  std::string training_digest;
  std::string created;  // UTC ISO-8601
};

std::string write_kernel_archive(const KernelArchive& archive);
// Throws kParse for malformed documents and kInvalidInput when the block
// sizes do not match the stated memory.
KernelArchive read_kernel_archive(std::string_view json_text);

// FNV-1a 64 over the sample rate and the raw sample bytes, as 16 hex digits.
std::string signal_digest(const Signal& signal);

// Shortest text that reads back as the same double.
std::string format_double(double v);

std::string utc_timestamp();

// Flat "key = value" report. The first line is "# created <timestamp>" so that
// runs can be compared byte for byte after dropping lines starting with '#'.
std::string format_report(const std::vector<std::pair<std::string, std::string>>& entries,
                          std::string_view timestamp);

std::string read_text_file(const std::filesystem::path& path);
void write_text_file(const std::filesystem::path& path, std::string_view text);

}  // namespace volterra

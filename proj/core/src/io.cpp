#include "volterra/io.hpp"

#include <algorithm>
#include <charconv>
#include <chrono>
#include <cinttypes>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <ctime>
#include <fstream>
#include <limits>
#include <sstream>

#include "json.hpp"
#include "volterra/error.hpp"

namespace volterra {
namespace {

using Json = nlohmann::ordered_json;

const Json& require(const Json& doc, const char* key) {
  auto it = doc.find(key);
  if (it == doc.end()) throw Error(ErrorCode::kParse, std::string("missing key \"") + key + "\"");
  return *it;
}

double number_field(const Json& doc, const char* key) {
  const Json& v = require(doc, key);
  if (!v.is_number()) throw Error(ErrorCode::kParse, std::string("key \"") + key + "\" must be a number");
  return v.get<double>();
}

std::int64_t integer_field(const Json& doc, const char* key) {
  const Json& v = require(doc, key);
  if (!v.is_number_integer()) {
    throw Error(ErrorCode::kParse, std::string("key \"") + key + "\" must be an integer");
  }
  return v.get<std::int64_t>();
}

std::vector<double> array_field(const Json& doc, const char* key) {
  const Json& v = require(doc, key);
  if (!v.is_array()) throw Error(ErrorCode::kParse, std::string("key \"") + key + "\" must be an array");
  std::vector<double> out;
  out.reserve(v.size());
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (!v[i].is_number()) {
      throw Error(ErrorCode::kParse, std::string("key \"") + key + "\" element " + std::to_string(i) +
                                         " is not a number");
    }
    out.push_back(v[i].get<double>());
  }
  return out;
}

Json parse(std::string_view text) {
  try {
    return Json::parse(text.begin(), text.end());
  } catch (const Json::parse_error& e) {
    throw Error(ErrorCode::kParse, e.what());
  }
}

std::size_t positive_size(std::int64_t v, const char* key) {
  if (v < 1) throw Error(ErrorCode::kConfig, std::string("\"") + key + "\" must be >= 1");
  return static_cast<std::size_t>(v);
}

}  // namespace

EstimationObject read_estimation_object(std::string_view json_text, const EstimationConfig& defaults) {
  const Json doc = parse(json_text);
  if (!doc.is_object()) throw Error(ErrorCode::kParse, "estimation object must be a JSON object");

  static constexpr const char* kKeys[] = {"alpha1", "alpha2",   "alpha3", "iterations",
                                          "memory", "errorMax", "input",  "desired"};
  EstimationObject obj;
  for (const auto& [key, value] : doc.items()) {
    if (std::find_if(std::begin(kKeys), std::end(kKeys), [&](const char* k) { return key == k; }) ==
        std::end(kKeys)) {
      obj.warnings.push_back("unknown key \"" + key + "\" ignored");
    }
  }

  obj.config = defaults;
  obj.config.alpha1 = number_field(doc, "alpha1");
  obj.config.alpha2 = number_field(doc, "alpha2");
  obj.config.alpha3 = number_field(doc, "alpha3");
  const std::int64_t iterations = integer_field(doc, "iterations");
  obj.config.memory = positive_size(integer_field(doc, "memory"), "memory");
  obj.config.error_threshold = number_field(doc, "errorMax");
  obj.input = array_field(doc, "input");
  obj.desired = array_field(doc, "desired");
  if (obj.input.size() != obj.desired.size()) {
    throw Error(ErrorCode::kParse, "key \"desired\" has " + std::to_string(obj.desired.size()) +
                                       " samples but \"input\" has " + std::to_string(obj.input.size()));
  }
  if (iterations < 1 || iterations > std::numeric_limits<int>::max()) {
    throw Error(ErrorCode::kConfig, "\"iterations\" must be a positive int");
  }
  obj.config.max_iterations = static_cast<int>(iterations);
  obj.config.validate();
  return obj;
}

std::string write_estimation_object(const EstimationConfig& config, std::span<const double> input,
                                    std::span<const double> desired) {
  if (input.size() != desired.size()) {
    throw Error(ErrorCode::kInvalidInput, "input and desired must have the same length");
  }
  Json doc;
  doc["alpha1"] = config.alpha1;
  doc["alpha2"] = config.alpha2;
  doc["alpha3"] = config.alpha3;
  doc["iterations"] = config.max_iterations;
  doc["memory"] = config.memory;
  doc["errorMax"] = config.error_threshold;
  doc["input"] = std::vector<double>(input.begin(), input.end());
  doc["desired"] = std::vector<double>(desired.begin(), desired.end());
  return doc.dump(1) + "\n";
}

Signal read_csv_signal(std::istream& in) {
  std::string line;
  std::size_t line_no = 0;
  auto fail = [&](const std::string& what) -> Error {
    return Error(ErrorCode::kParse, "line " + std::to_string(line_no) + ": " + what);
  };
  auto trim = [](std::string& s) {
    const auto b = s.find_first_not_of(" \t\r");
    const auto e = s.find_last_not_of(" \t\r");
    s = b == std::string::npos ? std::string() : s.substr(b, e - b + 1);
  };
  auto to_double = [&](std::string_view text, double& out) {
    const char* first = text.data();
    const char* last = text.data() + text.size();
    if (!text.empty() && *first == '+') ++first;
    auto [ptr, ec] = std::from_chars(first, last, out);
    return ec == std::errc() && ptr == last;
  };

  ++line_no;
  if (!std::getline(in, line)) throw fail("missing `sample_rate,<Hz>` header");
  trim(line);
  constexpr std::string_view kHeader = "sample_rate,";
  double rate = 0.0;
  if (line.rfind(kHeader, 0) != 0 || !to_double(std::string_view(line).substr(kHeader.size()), rate)) {
    throw fail("expected `sample_rate,<Hz>` header");
  }
  if (!(rate > 0.0) || !std::isfinite(rate)) throw fail("sample rate must be positive");

  std::vector<double> samples;
  while (std::getline(in, line)) {
    ++line_no;
    trim(line);
    if (line.empty()) continue;
    double v = 0.0;
    if (!to_double(line, v)) throw fail("not a number: \"" + line + "\"");
    if (!std::isfinite(v)) throw fail("sample is not finite");
    samples.push_back(v);
  }
  return Signal(std::move(samples), rate);
}

Signal read_csv_signal(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::kParse, "cannot open " + path.string());
  return read_csv_signal(in);
}

void write_csv_signal(std::ostream& out, const Signal& signal) {
  char buf[64];
  out << "sample_rate," << format_double(signal.sample_rate()) << '\n';
  for (double v : signal.samples()) {
    std::snprintf(buf, sizeof buf, "%.17g\n", v);
    out << buf;
  }
}

void write_csv_signal(const std::filesystem::path& path, const Signal& signal) {
  std::ofstream out(path);
  if (!out) throw Error(ErrorCode::kInvalidInput, "cannot write " + path.string());
  write_csv_signal(out, signal);
  if (!out) throw Error(ErrorCode::kInvalidInput, "error writing " + path.string());
}

std::string write_kernel_archive(const KernelArchive& a) {
  Json cfg;
  cfg["alpha1"] = a.config.alpha1;
  cfg["alpha2"] = a.config.alpha2;
  cfg["alpha3"] = a.config.alpha3;
  cfg["phi"] = a.config.phi;
  cfg["iterations"] = a.config.max_iterations;
  cfg["memory"] = a.config.memory;
  cfg["errorMax"] = a.config.error_threshold;
  cfg["precompute"] = a.config.precompute;

  Json doc;
  doc["memory"] = a.kernel.memory();
  doc["h0"] = a.kernel.h0();
  doc["h1"] = a.kernel.h1();
  doc["h2"] = a.kernel.h2();
  doc["h3"] = a.kernel.h3();
  doc["metadata"] = Json{{"config", cfg},
                         {"sample_rate", a.sample_rate},
                         {"training_digest", a.training_digest},
                         {"created", a.created}};
  return doc.dump(1) + "\n";
}

KernelArchive read_kernel_archive(std::string_view json_text) {
  const Json doc = parse(json_text);
  if (!doc.is_object()) throw Error(ErrorCode::kParse, "kernel archive must be a JSON object");
  KernelArchive a;
  const std::size_t memory = positive_size(integer_field(doc, "memory"), "memory");
  a.kernel = VolterraKernel(memory, number_field(doc, "h0"), array_field(doc, "h1"),
                            array_field(doc, "h2"), array_field(doc, "h3"));
  if (auto it = doc.find("metadata"); it != doc.end() && it->is_object()) {
    const Json& meta = *it;
    if (auto c = meta.find("config"); c != meta.end() && c->is_object()) {
      a.config.alpha1 = number_field(*c, "alpha1");
      a.config.alpha2 = number_field(*c, "alpha2");
      a.config.alpha3 = number_field(*c, "alpha3");
      a.config.phi = number_field(*c, "phi");
      a.config.max_iterations = static_cast<int>(integer_field(*c, "iterations"));
      a.config.memory = positive_size(integer_field(*c, "memory"), "memory");
      a.config.error_threshold = number_field(*c, "errorMax");
      a.config.precompute = c->value("precompute", false);
    }
    if (auto r = meta.find("sample_rate"); r != meta.end() && r->is_number()) a.sample_rate = r->get<double>();
    a.training_digest = meta.value("training_digest", "");
    a.created = meta.value("created", "");
  }
  return a;
}

std::string signal_digest(const Signal& signal) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  auto mix = [&h](double v) {
    unsigned char bytes[sizeof(double)];
    std::memcpy(bytes, &v, sizeof v);
    for (unsigned char b : bytes) {
      h ^= b;
      h *= 0x100000001b3ULL;
    }
  };
  mix(signal.sample_rate());
  for (double v : signal.samples()) mix(v);
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016" PRIx64, h);
  return buf;
}

std::string format_double(double v) {
  char buf[64];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, ptr);
}

std::string utc_timestamp() {
  const std::time_t now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&now, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

std::string format_report(const std::vector<std::pair<std::string, std::string>>& entries,
                          std::string_view timestamp) {
  std::ostringstream out;
  out << "# created " << timestamp << '\n';
  for (const auto& [k, v] : entries) out << k << " = " << v << '\n';
  return out.str();
}

std::string read_text_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::kParse, "cannot open " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_text_file(const std::filesystem::path& path, std::string_view text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorCode::kInvalidInput, "cannot write " + path.string());
  out << text;
  if (!out) throw Error(ErrorCode::kInvalidInput, "error writing " + path.string());
}

}  // namespace volterra

#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "qdiv/io.hpp"

namespace qdiv {

struct SuiteConfig {
  std::uint64_t seed = 20240611;
  int trials = 10;
  std::vector<int> dims{2, 3};
  std::map<std::string, double> tolerances;  // overrides of the default table
  int n_min = 2;
  int n_max = 8;
  std::vector<std::string> suites;  // empty runs every suite
  // Run each selected suite once with exactly this trial seed.
  std::optional<std::uint64_t> replay_seed;
};

const std::vector<std::string>& suite_names();

// Every tolerance and numeric knob a suite reads, with its default.
const std::map<std::string, double>& default_tolerances();
double tolerance(const SuiteConfig& config, const std::string& key);

void validate(const SuiteConfig& config);
SuiteConfig config_from_json(const io::json& j);
io::json to_json(const SuiteConfig& config);

struct CheckRecord {
  std::string check;
  int trial;
  std::uint64_t seed;
  std::string digest;  // FNV-1a over the input matrices
  double measured;
  double bound;
  double margin;  // >= 0 iff the check passes
  bool pass;
  std::string note;
};

struct SuiteReport {
  std::string suite;
  std::vector<CheckRecord> records;
  int passed = 0;
  int failed = 0;
  double wall_seconds = 0;
};

struct RunReport {
  SuiteConfig config;
  std::vector<SuiteReport> suites;

  int passed() const;
  int failed() const;
  bool all_passed() const { return failed() == 0; }
};

RunReport run_suite(const SuiteConfig& config);

io::json to_json(const CheckRecord& r);
CheckRecord record_from_json(const io::json& j);
io::json to_json(const SuiteReport& r, bool with_time = true);
SuiteReport suite_report_from_json(const io::json& j);
io::json to_json(const RunReport& r, bool with_time = true);

// 16 hex digits of FNV-1a over the raw entries of the given matrices.
std::string inputs_digest(const std::vector<const ComplexMatrix*>& inputs);

}  // namespace qdiv

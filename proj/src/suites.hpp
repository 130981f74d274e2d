#pragma once

#include <string>
#include <vector>

#include "qdiv/harness.hpp"

namespace qdiv::detail {

class TrialContext {
 public:
  TrialContext(const SuiteConfig& config, int trial, std::uint64_t seed)
      : config_(config), trial_(trial), seed_(seed) {}

  std::uint64_t seed() const { return seed_; }
  const SuiteConfig& config() const { return config_; }
  double tol(const std::string& key) const { return tolerance(config_, key); }

  // pass iff measured <= bound
  void le(const std::string& check, double measured, double bound, const std::string& digest,
          const std::string& note = {});
  // pass iff measured < bound
  void lt(const std::string& check, double measured, double bound, const std::string& digest,
          const std::string& note = {});
  // pass iff measured >= bound
  void ge(const std::string& check, double measured, double bound, const std::string& digest,
          const std::string& note = {});
  void expect(const std::string& check, bool ok, const std::string& digest, const std::string& note = {});

  std::vector<CheckRecord>& records() { return records_; }

 private:
  void push(const std::string& check, double measured, double bound, double margin, bool pass,
            const std::string& digest, const std::string& note);

  const SuiteConfig& config_;
  int trial_;
  std::uint64_t seed_;
  std::vector<CheckRecord> records_;
};

struct SuiteEntry {
  std::string name;
  void (*body)(TrialContext&);
  bool fixture_based;  // deterministic fixtures: one trial regardless of config.trials
};

const std::vector<SuiteEntry>& suite_table();

}  // namespace qdiv::detail

#include "qdiv/harness.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cstdio>
#include <cstring>
#include <thread>

#include "suites.hpp"

namespace qdiv {

using io::json;

const std::vector<std::string>& suite_names() {
  static const std::vector<std::string> names = [] {
    std::vector<std::string> v;
    for (const auto& e : detail::suite_table()) v.push_back(e.name);
    return v;
  }();
  return names;
}

const std::map<std::string, double>& default_tolerances() {
  static const std::map<std::string, double> table{
      {"data_processing", 1e-8},
      {"sandwich", 1e-8},
      {"additivity", 1e-9},
      {"normalization", 1e-10},
      {"joint_convexity", 1e-8},
      {"reverse_test_kl", 1e-8},
      {"reconstruction", tol::reconstruction},
      {"reverse_estimation", 1e-8},
      {"sld_achievability", 1e-8},
      {"parallel_fisher", 1e-8},
      {"integral_identity", 1e-6},
      {"metric_order", 1e-10},
      {"metric_monotone", 1e-8},
      {"alpha_coincidence", 1e-10},
      {"measured_budget", 500},
      {"stein_eps", 0.5},
      {"stein_abs", 0.1},
      {"stein_control", 1e-9},
      {"stein_control_n_max", 10},
      {"stein_converse_slack", 0.05},
      {"stein_converse_power", 0.1},
      {"np_type2_relative", 1e-9},
      {"conversion_sigma", 1e-9},
      {"conversion_c_fraction", 0.25},
      {"fidelity_additivity", 1e-9},
      {"fidelity_monotone", 1e-8},
      {"fidelity_fit_samples", 8},
      {"fidelity_fit_residual", 0.05},
  };
  return table;
}

double tolerance(const SuiteConfig& config, const std::string& key) {
  if (auto it = config.tolerances.find(key); it != config.tolerances.end()) return it->second;
  const auto& d = default_tolerances();
  if (auto it = d.find(key); it != d.end()) return it->second;
  raise<InvalidArgument>("unknown tolerance key '", key, "'");
}

void validate(const SuiteConfig& config) {
  if (config.trials < 1) raise<InvalidArgument>("config: trials must be >= 1, got ", config.trials);
  if (config.dims.empty()) raise<InvalidArgument>("config: dims must be nonempty");
  for (int d : config.dims)
    if (d < 2 || d > 6) raise<InvalidArgument>("config: dimension ", d, " outside 2..6");
  if (config.n_min < 1 || config.n_max < config.n_min)
    raise<InvalidArgument>("config: bad n_range [", config.n_min, ", ", config.n_max, "]");
  require_dimension(std::pow(2.0L, config.n_max), "config n_range");
  for (const auto& [k, v] : config.tolerances) {
    if (!default_tolerances().count(k)) raise<InvalidArgument>("config: unknown tolerance key '", k, "'");
    if (!std::isfinite(v)) raise<InvalidArgument>("config: tolerance '", k, "' is not finite");
  }
  for (const auto& s : config.suites)
    if (std::find(suite_names().begin(), suite_names().end(), s) == suite_names().end())
      raise<InvalidArgument>("config: unknown suite '", s, "'");
}

SuiteConfig config_from_json(const json& j) {
  if (!j.is_object()) raise<InvalidArgument>("config: expected a JSON object");
  static const std::vector<std::string> known{"seed", "trials", "dims", "tolerances", "n_range", "suites"};
  for (const auto& [k, v] : j.items())
    if (std::find(known.begin(), known.end(), k) == known.end())
      raise<InvalidArgument>("config: unknown field '", k, "'");
  SuiteConfig c;
  try {
    if (j.contains("seed")) c.seed = j.at("seed").get<std::uint64_t>();
    if (j.contains("trials")) c.trials = j.at("trials").get<int>();
    if (j.contains("dims")) c.dims = j.at("dims").get<std::vector<int>>();
    if (j.contains("tolerances")) c.tolerances = j.at("tolerances").get<std::map<std::string, double>>();
    if (j.contains("n_range")) {
      const auto r = j.at("n_range").get<std::vector<int>>();
      if (r.size() != 2) raise<InvalidArgument>("config: n_range must be [n_min, n_max]");
      c.n_min = r[0];
      c.n_max = r[1];
    }
    if (j.contains("suites")) c.suites = j.at("suites").get<std::vector<std::string>>();
  } catch (const json::exception& e) {
    raise<InvalidArgument>("config: ", e.what());
  }
  validate(c);
  return c;
}

json to_json(const SuiteConfig& c) {
  json j{{"seed", c.seed},     {"trials", c.trials},
         {"dims", c.dims},     {"tolerances", c.tolerances},
         {"n_range", {c.n_min, c.n_max}}, {"suites", c.suites}};
  if (c.replay_seed) j["replay_seed"] = *c.replay_seed;
  return j;
}

int RunReport::passed() const {
  int n = 0;
  for (const auto& s : suites) n += s.passed;
  return n;
}

int RunReport::failed() const {
  int n = 0;
  for (const auto& s : suites) n += s.failed;
  return n;
}

std::string inputs_digest(const std::vector<const ComplexMatrix*>& inputs) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  auto feed = [&](const void* p, size_t n) {
    const auto* b = static_cast<const unsigned char*>(p);
    for (size_t i = 0; i < n; ++i) {
      h ^= b[i];
      h *= 0x100000001b3ULL;
    }
  };
  for (const ComplexMatrix* m : inputs) {
    const std::int64_t shape[2] = {m->rows(), m->cols()};
    feed(shape, sizeof shape);
    for (Index j = 0; j < m->cols(); ++j)
      for (Index i = 0; i < m->rows(); ++i) {
        const double v[2] = {(*m)(i, j).real(), (*m)(i, j).imag()};
        feed(v, sizeof v);
      }
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

json to_json(const CheckRecord& r) {
  return {{"check", r.check},   {"trial", r.trial},     {"seed", r.seed},   {"digest", r.digest},
          {"measured", r.measured}, {"bound", r.bound}, {"margin", r.margin}, {"pass", r.pass},
          {"note", r.note}};
}

CheckRecord record_from_json(const json& j) {
  try {
    return {j.at("check").get<std::string>(), j.at("trial").get<int>(),
            j.at("seed").get<std::uint64_t>(), j.at("digest").get<std::string>(),
            j.at("measured").get<double>(),   j.at("bound").get<double>(),
            j.at("margin").get<double>(),     j.at("pass").get<bool>(),
            j.at("note").get<std::string>()};
  } catch (const json::exception& e) {
    raise<InvalidArgument>("check record: ", e.what());
  }
}

json to_json(const SuiteReport& r, bool with_time) {
  json recs = json::array();
  for (const auto& c : r.records) recs.push_back(to_json(c));
  json j{{"suite", r.suite}, {"passed", r.passed}, {"failed", r.failed}, {"records", std::move(recs)}};
  if (with_time) j["wall_seconds"] = r.wall_seconds;
  return j;
}

SuiteReport suite_report_from_json(const json& j) {
  SuiteReport r;
  try {
    r.suite = j.at("suite").get<std::string>();
    r.passed = j.at("passed").get<int>();
    r.failed = j.at("failed").get<int>();
    r.wall_seconds = j.value("wall_seconds", 0.0);
    for (const auto& c : j.at("records")) r.records.push_back(record_from_json(c));
  } catch (const json::exception& e) {
    raise<InvalidArgument>("suite report: ", e.what());
  }
  return r;
}

json to_json(const RunReport& r, bool with_time) {
  json suites = json::array();
  for (const auto& s : r.suites) suites.push_back(to_json(s, with_time));
  return {{"config", to_json(r.config)},
          {"passed", r.passed()},
          {"failed", r.failed()},
          {"suites", std::move(suites)}};
}

namespace detail {

void TrialContext::push(const std::string& check, double measured, double bound, double margin, bool pass,
                        const std::string& digest, const std::string& note) {
  records_.push_back({check, trial_, seed_, digest, measured, bound, margin, pass, note});
}

void TrialContext::le(const std::string& check, double measured, double bound, const std::string& digest,
                      const std::string& note) {
  const double m = bound - measured;
  push(check, measured, bound, m, m >= 0, digest, note);
}

void TrialContext::lt(const std::string& check, double measured, double bound, const std::string& digest,
                      const std::string& note) {
  const double m = bound - measured;
  push(check, measured, bound, m, m > 0, digest, note);
}

void TrialContext::ge(const std::string& check, double measured, double bound, const std::string& digest,
                      const std::string& note) {
  const double m = measured - bound;
  push(check, measured, bound, m, m >= 0, digest, note);
}

void TrialContext::expect(const std::string& check, bool ok, const std::string& digest, const std::string& note) {
  push(check, ok ? 1.0 : 0.0, 1.0, ok ? 0.0 : -1.0, ok, digest, note);
}

}  // namespace detail

namespace {

std::vector<CheckRecord> run_trial(const detail::SuiteEntry& entry, const SuiteConfig& config, int trial,
                                   std::uint64_t seed) {
  detail::TrialContext ctx(config, trial, seed);
  try {
    entry.body(ctx);
  } catch (const std::exception& e) {
    ctx.expect(entry.name + ".exception", false, "", e.what());
  }
  return std::move(ctx.records());
}

// Trials run on a small thread pool; results land in per-trial slots and are
// concatenated in trial order, so the report does not depend on scheduling.
std::vector<std::vector<CheckRecord>> run_trials(const detail::SuiteEntry& entry, const SuiteConfig& config,
                                                 const std::vector<std::uint64_t>& seeds) {
  std::vector<std::vector<CheckRecord>> slots(seeds.size());
  std::atomic<size_t> next{0};
  auto worker = [&] {
    for (size_t i = next++; i < seeds.size(); i = next++)
      slots[i] = run_trial(entry, config, static_cast<int>(i), seeds[i]);
  };
  const size_t workers =
      std::min<size_t>(seeds.size(), std::max(1u, std::thread::hardware_concurrency()));
  if (workers <= 1) {
    worker();
    return slots;
  }
  std::vector<std::thread> pool;
  for (size_t w = 0; w < workers; ++w) pool.emplace_back(worker);
  for (auto& t : pool) t.join();
  return slots;
}

}  // namespace

RunReport run_suite(const SuiteConfig& config) {
  validate(config);
  RunReport report{config, {}};
  const auto& table = detail::suite_table();
  for (size_t si = 0; si < table.size(); ++si) {
    const auto& entry = table[si];
    if (!config.suites.empty() &&
        std::find(config.suites.begin(), config.suites.end(), entry.name) == config.suites.end())
      continue;
    std::vector<std::uint64_t> seeds;
    if (config.replay_seed) {
      seeds.push_back(*config.replay_seed);
    } else {
      const std::uint64_t suite_seed = derive_seed(config.seed, si + 1);
      const int trials = entry.fixture_based ? 1 : config.trials;
      for (int t = 0; t < trials; ++t) seeds.push_back(derive_seed(suite_seed, static_cast<std::uint64_t>(t)));
    }
    const auto start = std::chrono::steady_clock::now();
    SuiteReport sr;
    sr.suite = entry.name;
    for (auto& slot : run_trials(entry, config, seeds))
      for (auto& r : slot) {
        (r.pass ? sr.passed : sr.failed) += 1;
        sr.records.push_back(std::move(r));
      }
    sr.wall_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    report.suites.push_back(std::move(sr));
  }
  return report;
}

}  // namespace qdiv

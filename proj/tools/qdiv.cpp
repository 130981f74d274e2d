#include <cstdio>
#include <iomanip>
#include <iostream>

#include <CLI11.hpp>

#include "qdiv/harness.hpp"
#include "qdiv/io.hpp"
#include "qdiv/reverse_test.hpp"

using namespace qdiv;
using io::json;

namespace {

DensityMatrix load_state(const std::string& path) { return io::density_from_json(io::load_file(path)); }

void emit(const json& j, const std::string& out) {
  if (out.empty() || out == "-")
    std::cout << j.dump(2) << '\n';
  else
    io::save_file(out, j);
}

json divergence_json(const DivergenceReport& r) {
  json notes = r.notes;
  return {{"value", io::to_json(r.value)}, {"support", to_string(r.support)}, {"notes", notes}};
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"quantum relative entropies, monotone metrics and reverse tests"};
  app.require_subcommand(1);

  std::string kind, rho_path, sigma_path, out;
  int budget = 500;
  std::uint64_t seed = 1;
  auto* div = app.add_subcommand("divergence", "evaluate a divergence between two states");
  div->add_option("--kind", kind)->required()->check(CLI::IsMember({"umegaki", "rld", "dmax", "fidelity", "measured"}));
  div->add_option("--rho", rho_path)->required();
  div->add_option("--sigma", sigma_path)->required();
  div->add_option("--budget", budget, "objective evaluations for --kind measured");
  div->add_option("--seed", seed);

  std::string spec_text, tangent_path;
  auto* met = app.add_subcommand("metric", "monotone metric g_rho(X, X)");
  met->add_option("--spec", spec_text)->required();
  met->add_option("--rho", rho_path)->required();
  met->add_option("--tangent", tangent_path)->required();

  auto* rt = app.add_subcommand("reverse-test", "optimal reverse test of a pair");
  rt->add_option("--rho", rho_path)->required();
  rt->add_option("--sigma", sigma_path)->required();
  rt->add_option("--json", out, "write the test here instead of stdout");

  int n = 0;
  double eps = 0.5, rate = 0, c = 0;
  std::string rho0_path, sigma0_path;
  bool csv = false;
  auto* asym = app.add_subcommand("asym", "finite-n hypothesis testing and conversion");
  asym->require_subcommand(1);
  auto* thr = asym->add_subcommand("threshold", "smallest rate with type I acceptance >= 1 - eps");
  thr->add_option("--n", n)->required()->check(CLI::PositiveNumber);
  thr->add_option("--rho", rho_path)->required();
  thr->add_option("--sigma", sigma_path)->required();
  thr->add_option("--eps", eps);
  thr->add_flag("--csv", csv, "print the scanned test curve as CSV");
  auto* art = asym->add_subcommand("reverse-test", "asymptotic reverse test at a rate");
  art->add_option("--n", n)->required()->check(CLI::PositiveNumber);
  art->add_option("--rho", rho_path)->required();
  art->add_option("--sigma", sigma_path)->required();
  art->add_option("--rate", rate)->required();
  auto* conv = asym->add_subcommand("convert", "(rho0, sigma0)^n -> (rho, sigma)^n conversion");
  conv->add_option("--n", n)->required()->check(CLI::PositiveNumber);
  conv->add_option("--rho0", rho0_path)->required();
  conv->add_option("--sigma0", sigma0_path)->required();
  conv->add_option("--rho", rho_path)->required();
  conv->add_option("--sigma", sigma_path)->required();
  conv->add_option("--c", c)->required();
  for (auto* sc : {thr, art, conv}) sc->add_option("--json", out);

  std::string config_path, report_path;
  std::vector<std::string> suites;
  std::optional<std::uint64_t> verify_seed, replay;
  auto* ver = app.add_subcommand("verify", "run the randomized verification suites");
  ver->add_option("--config", config_path)->required();
  ver->add_option("--suite", suites);
  ver->add_option("--seed", verify_seed);
  ver->add_option("--replay", replay, "rerun with one trial seed taken from a failed record");
  ver->add_option("--report", report_path);

  CLI11_PARSE(app, argc, argv);

  try {
    if (*div) {
      const DensityMatrix rho = load_state(rho_path);
      const DensityMatrix sigma = load_state(sigma_path);
      json j;
      if (kind == "umegaki")
        j = divergence_json(umegaki(rho, sigma));
      else if (kind == "rld")
        j = divergence_json(rld_entropy(rho, sigma));
      else if (kind == "dmax")
        j = {{"value", io::to_json(dmax(rho, sigma))}};
      else if (kind == "fidelity")
        j = {{"value", io::to_json(fidelity_logdiv(rho, sigma))}};
      else {
        const MeasuredDivergence m = measured_div_lower(rho, sigma, budget, seed);
        json effects = json::array();
        for (const auto& e : m.measurement.effects()) effects.push_back(io::matrix_to_json(e.matrix()));
        j = {{"value", io::to_json(m.value)}, {"evaluations", m.evaluations}, {"effects", effects}};
      }
      j["kind"] = kind;
      emit(j, "");
    } else if (*met) {
      const MonotoneMetricSpec spec = MonotoneMetricSpec::parse(spec_text);
      const DensityMatrix rho = load_state(rho_path);
      const TangentDirection x = io::tangent_from_json(io::load_file(tangent_path));
      emit({{"spec", spec.name()}, {"value", petz_metric(spec, rho, x)}}, "");
    } else if (*rt) {
      emit(io::to_json(optimal_reverse_test(load_state(rho_path), load_state(sigma_path))), out);
    } else if (*thr) {
      const SteinThreshold st = stein_threshold(load_state(rho_path), load_state(sigma_path), n, eps);
      if (csv) {
        std::cout << "n,a,type1_accept,type2,threshold\n" << std::setprecision(17);
        for (const auto& p : st.scanned)
          std::cout << n << ',' << p.a << ',' << p.type1_accept << ',' << p.type2 << ',' << st.threshold << '\n';
      } else {
        emit({{"n", n}, {"eps", eps}, {"threshold", st.threshold}, {"scan", {st.scan_lo, st.scan_hi}}}, out);
      }
    } else if (*art) {
      const AsymptoticReverseTest t = asymptotic_reverse_test(load_state(rho_path), load_state(sigma_path), n, rate);
      emit(io::to_json(t.report), out);
    } else if (*conv) {
      const StateConversion s = state_conversion(load_state(rho0_path), load_state(sigma0_path),
                                                 load_state(rho_path), load_state(sigma_path), n, c);
      emit(io::to_json(s.report), out);
    } else if (*ver) {
      SuiteConfig config = config_from_json(io::load_file(config_path));
      if (!suites.empty()) config.suites = suites;
      if (verify_seed) config.seed = *verify_seed;
      config.replay_seed = replay;
      validate(config);
      const RunReport report = run_suite(config);
      for (const auto& s : report.suites) {
        std::cerr << s.suite << ": " << s.passed << " passed, " << s.failed << " failed\n";
        for (const auto& r : s.records)
          if (!r.pass)
            std::cerr << "  FAIL " << r.check << " trial=" << r.trial << " seed=" << r.seed
                      << " digest=" << r.digest << " measured=" << r.measured << " bound=" << r.bound
                      << (r.note.empty() ? "" : " (" + r.note + ")") << '\n';
      }
      if (!report_path.empty()) io::save_file(report_path, to_json(report));
      return report.all_passed() ? 0 : 1;
    }
  } catch (const Error& e) {
    std::cerr << "qdiv: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "qdiv: " << e.what() << '\n';
    return 2;
  }
  return 0;
}

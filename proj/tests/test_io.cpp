#include <doctest.h>

#include <cstdio>

#include "qdiv/fixtures.hpp"
#include "qdiv/io.hpp"

using namespace qdiv;

namespace {

std::string fixture_path(const std::string& file) { return std::string(QDIV_FIXTURE_DIR) + "/" + file; }

template <class F>
std::string error_of(F&& f) {
  try {
    f();
  } catch (const std::exception& e) {
    return e.what();
  }
  return "";
}

}  // namespace

TEST_CASE("fixture files match the built-in fixtures") {
  for (const auto& name : fixture_names()) {
    const FixturePair fx = fixture_pair(name);
    const DensityMatrix r = io::density_from_json(io::load_file(fixture_path(name + "_rho.json")));
    const DensityMatrix s = io::density_from_json(io::load_file(fixture_path(name + "_sigma.json")));
    CHECK((r.matrix() - fx.rho.matrix()).norm() < 1e-15);
    CHECK((s.matrix() - fx.sigma.matrix()).norm() < 1e-15);
    const TangentDirection x = io::tangent_from_json(io::load_file(fixture_path(name + "_tangent.json")));
    CHECK((x.matrix() - (fx.rho.matrix() - fx.sigma.matrix())).norm() < 1e-15);
  }
  for (const auto& name : conversion_fixture_names()) {
    const FixtureQuadruple fx = conversion_fixture(name);
    const DensityMatrix r0 = io::density_from_json(io::load_file(fixture_path(name + "_rho0.json")));
    const DensityMatrix s0 = io::density_from_json(io::load_file(fixture_path(name + "_sigma0.json")));
    CHECK((r0.matrix() - fx.rho0.matrix()).norm() < 1e-15);
    CHECK((s0.matrix() - fx.sigma0.matrix()).norm() < 1e-15);
  }
  CHECK_THROWS_AS(fixture_pair("nope"), InvalidArgument);
}

TEST_CASE("round trips") {
  const DensityMatrix r = random_density(3, 2, 11);
  CHECK((io::density_from_json(io::to_json(r)).matrix() - r.matrix()).norm() < 1e-15);
  const TangentDirection x = random_tangent(3, 12);
  CHECK(io::tangent_from_json(io::to_json(x)).matrix() == x.matrix());
  const QuantumChannel ch = random_cptp(3, 2, 2, 13);
  const QuantumChannel back = io::channel_from_json(io::to_json(ch));
  REQUIRE(back.kraus().size() == 2);
  CHECK(back.kraus()[1] == ch.kraus()[1]);
  const ClassicalDistribution p({0.25, 0.75});
  CHECK(io::distribution_from_json(io::to_json(p)).probs() == p.probs());
  for (const ExtendedReal& v : {ExtendedReal::finite(0.1), ExtendedReal::plus_infinity(), ExtendedReal::minus_infinity()})
    CHECK(io::extended_from_json(io::to_json(v)) == v);

  const std::string tmp = "qdiv_io_roundtrip.json";
  io::save_file(tmp, io::to_json(r));
  CHECK((io::density_from_json(io::load_file(tmp)).matrix() - r.matrix()).norm() < 1e-15);
  std::remove(tmp.c_str());

  // real entries are accepted as a shorthand
  const io::json plain = {{"dim", 2}, {"matrix", {{0.5, 0.0}, {0.0, 0.5}}}};
  CHECK(io::density_from_json(plain).matrix() == DensityMatrix::maximally_mixed(2).matrix());
}

TEST_CASE("malformed input is rejected with a message") {
  CHECK(error_of([] { io::load_file("/nonexistent/x.json"); }).find("cannot open") != std::string::npos);
  CHECK(error_of([] { io::density_from_json(io::json{{"matrix", {{1}}}}); }).find("'dim'") != std::string::npos);
  CHECK(error_of([] { io::density_from_json(io::json{{"dim", 3}, {"matrix", {{1, 0}, {0, 0}}}}); }).find("but dim is 3") !=
        std::string::npos);
  CHECK(error_of([] { io::matrix_from_json(io::json{{1, 0}, {0}}); }).find("row 1") != std::string::npos);
  CHECK_THROWS_AS(io::density_from_json(io::json{{"dim", 2}, {"matrix", {{0.9, 0}, {0, 0.9}}}}), InvalidArgument);
  CHECK_THROWS_AS(io::tangent_from_json(io::json{{"dim", 2}, {"matrix", {{1, 0}, {0, 0}}}}), InvalidArgument);
  CHECK_THROWS_AS(io::extended_from_json(io::json("inf")), InvalidArgument);
  CHECK(error_of([] { io::distribution_from_json(io::json{{"probs", {0.5, "x"}}}); }).find("entry 1") !=
        std::string::npos);
}

TEST_CASE("report serialization") {
  const FixturePair fx = fixture_pair("qubit_b");
  const io::json rt = io::to_json(optimal_reverse_test(fx.rho, fx.sigma));
  CHECK(rt.contains("frame"));
  CHECK(rt["p"].size() == 2);
  CHECK(rt["input_kl"].get<double>() == doctest::Approx(rld_entropy(fx.rho, fx.sigma).value.value()));
  const io::json cr = io::to_json(ConversionReport{2, 0.1, 0.7, 0.5, 0.2, ExtendedReal::plus_infinity(), 0, 0.3});
  CHECK(cr["reverse_rate"] == "+inf");
  CHECK(cr["n"] == 2);
}

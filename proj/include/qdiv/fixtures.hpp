#pragma once

#include <string>
#include <vector>

#include "qdiv/quantum.hpp"

namespace qdiv {

// Named full-rank, non-commuting pairs: "qubit_a", "qubit_b", "qutrit".
struct FixturePair {
  std::string name;
  DensityMatrix rho;
  DensityMatrix sigma;
};

// (rho0, sigma0) -> (rho, sigma) conversion instances with
// D(rho0||sigma0) about twice D(rho||sigma): "qubit_a", "qubit_b".
struct FixtureQuadruple {
  std::string name;
  DensityMatrix rho0;
  DensityMatrix sigma0;
  DensityMatrix rho;
  DensityMatrix sigma;
};

const std::vector<std::string>& fixture_names();
const std::vector<std::string>& conversion_fixture_names();
FixturePair fixture_pair(const std::string& name);
FixtureQuadruple conversion_fixture(const std::string& name);

}  // namespace qdiv

#include "qdiv/fixtures.hpp"

namespace qdiv {

namespace {

using C = cplx;

DensityMatrix qubit(double a, C b) {
  ComplexMatrix m(2, 2);
  m << a, b, std::conj(b), 1.0 - a;
  return DensityMatrix(m);
}

DensityMatrix qutrit(double a, double b, C x, C y, C z) {
  ComplexMatrix m(3, 3);
  m << a, x, y, std::conj(x), b, z, std::conj(y), std::conj(z), 1.0 - a - b;
  return DensityMatrix(m);
}

}  // namespace

const std::vector<std::string>& fixture_names() {
  static const std::vector<std::string> names{"qubit_a", "qubit_b", "qutrit"};
  return names;
}

const std::vector<std::string>& conversion_fixture_names() {
  static const std::vector<std::string> names{"qubit_a", "qubit_b"};
  return names;
}

FixturePair fixture_pair(const std::string& name) {
  if (name == "qubit_a")
    return {name, qubit(0.77, C(0.08, -0.28)), qubit(0.72, C(0.06, 0.24))};
  if (name == "qubit_b")
    return {name, qubit(0.6, C(-0.43, 0.01)), qubit(0.23, C(-0.02, 0.11))};
  if (name == "qutrit")
    return {name, qutrit(0.23, 0.25, C(0.04, -0.09), C(0.18, -0.17), C(0.16, -0.06)),
            qutrit(0.37, 0.37, C(0.17, -0.07), C(-0.02, 0.08), C(-0.03, 0.2))};
  raise<InvalidArgument>("unknown fixture '", name, "'");
}

FixtureQuadruple conversion_fixture(const std::string& name) {
  FixturePair target = fixture_pair(name);
  if (name == "qubit_a")
    return {name, qubit(0.43, C(-0.34, -0.05)), qubit(0.6, C(0.35, 0.12)), target.rho, target.sigma};
  if (name == "qubit_b")
    return {name, qubit(0.81, C(0.2, -0.2)), qubit(0.16, C(-0.15, -0.16)), target.rho, target.sigma};
  raise<InvalidArgument>("unknown conversion fixture '", name, "'");
}

}  // namespace qdiv

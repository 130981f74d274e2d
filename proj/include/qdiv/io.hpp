#pragma once

#include <string>

#include <json.hpp>

#include "qdiv/asymptotics.hpp"

namespace qdiv::io {

using json = nlohmann::json;

json load_file(const std::string& path);
void save_file(const std::string& path, const json& j);

// [[ [re, im], ... ], ...] row-major
json matrix_to_json(const ComplexMatrix& m);
ComplexMatrix matrix_from_json(const json& j);
json vector_to_json(const ComplexVector& v);

// {"dim": d, "matrix": ...}
json to_json(const DensityMatrix& rho);
DensityMatrix density_from_json(const json& j);
// Same layout as a state, traceless.
json to_json(const TangentDirection& x);
TangentDirection tangent_from_json(const json& j);
// {"dim_in", "dim_out", "kraus": [matrix, ...]}
json to_json(const QuantumChannel& ch);
QuantumChannel channel_from_json(const json& j);
// {"probs": [...]}
json to_json(const ClassicalDistribution& p);
ClassicalDistribution distribution_from_json(const json& j);

json to_json(const ExtendedReal& x);
ExtendedReal extended_from_json(const json& j);

// {"frame": [statevector, ...], "p", "q", "input_kl"}; "states" replaces
// "frame" when the prepared states are mixed.
json to_json(const ReverseTest& t);
json to_json(const FidelityReport& r);
json to_json(const ConversionReport& r);

}  // namespace qdiv::io

#include "qdiv/io.hpp"

#include <fstream>

namespace qdiv::io {

json load_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) raise<InvalidArgument>("cannot open ", path);
  try {
    return json::parse(in);
  } catch (const json::exception& e) {
    raise<InvalidArgument>(path, ": ", e.what());
  }
}

void save_file(const std::string& path, const json& j) {
  std::ofstream out(path);
  if (!out) raise<InvalidArgument>("cannot write ", path);
  out << j.dump(2) << '\n';
}

json matrix_to_json(const ComplexMatrix& m) {
  json rows = json::array();
  for (Index i = 0; i < m.rows(); ++i) {
    json row = json::array();
    for (Index j = 0; j < m.cols(); ++j) row.push_back({m(i, j).real(), m(i, j).imag()});
    rows.push_back(std::move(row));
  }
  return rows;
}

namespace {

cplx entry_from_json(const json& e) {
  if (e.is_number()) return {e.get<double>(), 0.0};
  if (e.is_array() && e.size() == 2 && e[0].is_number() && e[1].is_number())
    return {e[0].get<double>(), e[1].get<double>()};
  raise<InvalidArgument>("matrix entry must be a number or [re, im], got ", e.dump());
}

const json& field(const json& j, const char* key, const char* what) {
  if (!j.is_object() || !j.contains(key)) raise<InvalidArgument>(what, " JSON: missing field '", key, "'");
  return j.at(key);
}

Index positive_index(const json& j, const char* key, const char* what) {
  const json& v = field(j, key, what);
  if (!v.is_number_integer() || v.get<long long>() < 1)
    raise<InvalidArgument>(what, " JSON: '", key, "' must be a positive integer");
  return static_cast<Index>(v.get<long long>());
}

template <typename F>
auto with_context(const char* what, F&& f) -> decltype(f()) {
  try {
    return f();
  } catch (const Error& e) {
    raise<InvalidArgument>(what, " JSON rejected: ", e.what());
  }
}

}  // namespace

ComplexMatrix matrix_from_json(const json& j) {
  if (!j.is_array() || j.empty()) raise<InvalidArgument>("matrix JSON: expected a nonempty array of rows");
  const size_t rows = j.size();
  const size_t cols = j[0].is_array() ? j[0].size() : 0;
  if (cols == 0) raise<InvalidArgument>("matrix JSON: rows must be nonempty arrays");
  ComplexMatrix m(static_cast<Index>(rows), static_cast<Index>(cols));
  for (size_t r = 0; r < rows; ++r) {
    if (!j[r].is_array() || j[r].size() != cols) raise<InvalidArgument>("matrix JSON: row ", r, " has the wrong length");
    for (size_t c = 0; c < cols; ++c) m(static_cast<Index>(r), static_cast<Index>(c)) = entry_from_json(j[r][c]);
  }
  if (!m.allFinite()) raise<InvalidArgument>("matrix JSON: non-finite entry");
  return m;
}

json vector_to_json(const ComplexVector& v) {
  json out = json::array();
  for (Index i = 0; i < v.size(); ++i) out.push_back({v(i).real(), v(i).imag()});
  return out;
}

json to_json(const DensityMatrix& rho) { return {{"dim", rho.dim()}, {"matrix", matrix_to_json(rho.matrix())}}; }

DensityMatrix density_from_json(const json& j) {
  return with_context("state", [&] {
    const Index d = positive_index(j, "dim", "state");
    ComplexMatrix m = matrix_from_json(field(j, "matrix", "state"));
    if (m.rows() != d || m.cols() != d)
      raise<DimensionMismatch>("matrix is ", m.rows(), "x", m.cols(), " but dim is ", d);
    return DensityMatrix(m);
  });
}

json to_json(const TangentDirection& x) { return {{"dim", x.dim()}, {"matrix", matrix_to_json(x.matrix())}}; }

TangentDirection tangent_from_json(const json& j) {
  return with_context("tangent", [&] {
    const Index d = positive_index(j, "dim", "tangent");
    ComplexMatrix m = matrix_from_json(field(j, "matrix", "tangent"));
    if (m.rows() != d || m.cols() != d)
      raise<DimensionMismatch>("matrix is ", m.rows(), "x", m.cols(), " but dim is ", d);
    return TangentDirection(m);
  });
}

json to_json(const QuantumChannel& ch) {
  json k = json::array();
  for (const auto& m : ch.kraus()) k.push_back(matrix_to_json(m));
  return {{"dim_in", ch.dim_in()}, {"dim_out", ch.dim_out()}, {"kraus", std::move(k)}};
}

QuantumChannel channel_from_json(const json& j) {
  return with_context("channel", [&] {
    const Index din = positive_index(j, "dim_in", "channel");
    const Index dout = positive_index(j, "dim_out", "channel");
    const json& k = field(j, "kraus", "channel");
    if (!k.is_array()) raise<InvalidArgument>("'kraus' must be an array");
    std::vector<ComplexMatrix> ops;
    for (const auto& m : k) ops.push_back(matrix_from_json(m));
    return QuantumChannel(din, dout, std::move(ops));
  });
}

json to_json(const ClassicalDistribution& p) {
  return {{"probs", std::vector<double>(p.probs().data(), p.probs().data() + p.size())}};
}

ClassicalDistribution distribution_from_json(const json& j) {
  return with_context("distribution", [&] {
    const json& v = field(j, "probs", "distribution");
    if (!v.is_array()) raise<InvalidArgument>("'probs' must be an array");
    RealVector p(static_cast<Index>(v.size()));
    for (size_t i = 0; i < v.size(); ++i) {
      if (!v[i].is_number()) raise<InvalidArgument>("'probs' entry ", i, " is not a number");
      p(static_cast<Index>(i)) = v[i].get<double>();
    }
    return ClassicalDistribution(std::move(p));
  });
}

json to_json(const ExtendedReal& x) {
  if (x.is_finite()) return x.value();
  return x.to_string();
}

ExtendedReal extended_from_json(const json& j) {
  if (j.is_number()) return ExtendedReal::finite(j.get<double>());
  if (j == "+inf") return ExtendedReal::plus_infinity();
  if (j == "-inf") return ExtendedReal::minus_infinity();
  raise<InvalidArgument>("expected a number, \"+inf\" or \"-inf\", got ", j.dump());
}

json to_json(const ReverseTest& t) {
  json out = {{"p", to_json(t.p)["probs"]}, {"q", to_json(t.q)["probs"]}, {"input_kl", t.input_kl}};
  if (!t.frame.empty()) {
    json frame = json::array();
    for (const auto& v : t.frame) frame.push_back(vector_to_json(v));
    out["frame"] = std::move(frame);
  } else {
    json states = json::array();
    for (const auto& s : t.preparation.states()) states.push_back(to_json(s));
    out["states"] = std::move(states);
  }
  return out;
}

json to_json(const FidelityReport& r) {
  return {{"n", r.n},
          {"rate", r.rate},
          {"trace_distance", r.trace_distance},
          {"sigma_residual", r.sigma_residual},
          {"rate_certificate", r.rate_certificate},
          {"scale", r.scale}};
}

json to_json(const ConversionReport& r) {
  return {{"n", r.n},
          {"c", r.c},
          {"test_rate", r.test_rate},
          {"p0", r.p0},
          {"q0", r.q0},
          {"reverse_rate", to_json(r.reverse_rate)},
          {"sigma_residual", r.sigma_residual},
          {"rho_distance", r.rho_distance}};
}

}  // namespace qdiv::io

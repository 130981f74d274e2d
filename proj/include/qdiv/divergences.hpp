#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "qdiv/quantum.hpp"

namespace qdiv {

// A real number or a flagged infinity. Infinite values never enter arithmetic:
// value() throws on them.
class ExtendedReal {
 public:
  enum class Kind { finite, plus_infinity, minus_infinity };

  static ExtendedReal finite(double v);
  static ExtendedReal plus_infinity() { return ExtendedReal(Kind::plus_infinity, 0.0); }
  static ExtendedReal minus_infinity() { return ExtendedReal(Kind::minus_infinity, 0.0); }

  Kind kind() const noexcept { return kind_; }
  bool is_finite() const noexcept { return kind_ == Kind::finite; }
  double value() const;
  std::string to_string() const;

  friend bool operator==(const ExtendedReal& a, const ExtendedReal& b) {
    return a.kind_ == b.kind_ && a.v_ == b.v_;
  }

 private:
  ExtendedReal(Kind k, double v) : kind_(k), v_(v) {}
  Kind kind_;
  double v_;
};

std::ostream& operator<<(std::ostream& os, const ExtendedReal& x);

enum class SupportCondition { contained, equal, violated };

const char* to_string(SupportCondition s);

struct DivergenceReport {
  ExtendedReal value;
  SupportCondition support;
  std::vector<std::string> notes;
};

// ||(1 - P_sigma) rho (1 - P_sigma)||_F
double support_residual(const DensityMatrix& rho, const DensityMatrix& sigma);
SupportCondition support_condition(const DensityMatrix& rho, const DensityMatrix& sigma);

ExtendedReal kl(const ClassicalDistribution& p, const ClassicalDistribution& q);

DivergenceReport umegaki(const DensityMatrix& rho, const DensityMatrix& sigma);
DivergenceReport rld_entropy(const DensityMatrix& rho, const DensityMatrix& sigma);
ExtendedReal fidelity_logdiv(const DensityMatrix& rho, const DensityMatrix& sigma);
ExtendedReal dmax(const DensityMatrix& rho, const DensityMatrix& sigma);

struct MeasuredDivergence {
  ExtendedReal value;
  Measurement measurement;
  int evaluations;
};

// Heuristic lower bound on the measured relative entropy over rank-1
// projective measurements: structured starting bases, Haar restarts and
// local unitary perturbations, within `budget` objective evaluations.
MeasuredDivergence measured_div_lower(const DensityMatrix& rho, const DensityMatrix& sigma,
                                      int budget, std::uint64_t seed);

}  // namespace qdiv

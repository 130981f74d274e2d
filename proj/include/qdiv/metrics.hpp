#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "qdiv/divergences.hpp"

namespace qdiv {

enum class AlphaNormalization { unit, printed };

// f_alpha(x) = (x-1)^2 / ((x^b1 - 1)(x^b2 - 1)) * b1 b2, b1,2 = (1 -+ alpha)/2,
// so that f(1) = 1. The printed form drops the b1 b2 rescaling in favour of
// the (1 - alpha^2/4) prefactor; it is singular at |alpha| = 1.
double f_alpha(double x, double alpha, AlphaNormalization norm = AlphaNormalization::unit);

class MonotoneMetricSpec {
 public:
  enum class Kind { sld, rld, bkm, wy, alpha, custom };

  static MonotoneMetricSpec sld();
  static MonotoneMetricSpec rld();
  static MonotoneMetricSpec bkm();
  static MonotoneMetricSpec wigner_yanase();
  static MonotoneMetricSpec alpha(double a);
  // f must satisfy f(1) = 1 and f(x) = x f(1/x); both are checked on a grid.
  static MonotoneMetricSpec custom(std::string name, std::function<double(double)> f);
  // "sld", "rld", "bkm", "wy" or "alpha=A"
  static MonotoneMetricSpec parse(const std::string& text);

  Kind kind() const noexcept { return kind_; }
  double alpha_value() const noexcept { return alpha_; }
  const std::string& name() const noexcept { return name_; }

  double f(double x) const;
  // 1 / (lk f(lj/lk)), symmetric in its arguments.
  double kernel(double lj, double lk) const;

 private:
  MonotoneMetricSpec(Kind k, double a, std::string name, std::function<double(double)> f = {})
      : kind_(k), alpha_(a), name_(std::move(name)), custom_(std::move(f)) {}
  Kind kind_;
  double alpha_;
  std::string name_;
  std::function<double(double)> custom_;
};

// Smallest eigenvalue of f(B) - f(A) over `trials` random pairs A <= B of
// full-rank PSD matrices with dim <= 4. Nonnegative up to roundoff when f is
// operator monotone.
double operator_monotone_spot_check(const MonotoneMetricSpec& spec, int trials, std::uint64_t seed);

// Complex m x m matrix, Hermitian, with positive semidefinite real part.
class FisherMatrix {
 public:
  explicit FisherMatrix(ComplexMatrix j);

  const ComplexMatrix& matrix() const noexcept { return j_; }
  Index size() const noexcept { return j_.rows(); }
  RealMatrix real_part() const { return j_.real(); }
  RealMatrix imag_part() const { return j_.imag(); }

 private:
  ComplexMatrix j_;
};

// sum dp^2/p; +inf when dp has weight where p vanishes.
ExtendedReal classical_fisher(const ClassicalDistribution& p, const RealVector& dp);
// J_ij = sum dp_i dp_j / p. Throws SupportError where the scalar form is +inf.
FisherMatrix classical_fisher(const ClassicalDistribution& p, const std::vector<RealVector>& dps);

struct SldOperator {
  HermitianMatrix l;
  double residual;  // ||(L rho + rho L)/2 - X||_F
};

SldOperator sld_operator(const DensityMatrix& rho, const TangentDirection& x);
// L = X rho^+, requires supp X within supp rho.
ComplexMatrix rld_operator(const DensityMatrix& rho, const TangentDirection& x);

cplx petz_metric(const MonotoneMetricSpec& spec, const DensityMatrix& rho, const TangentDirection& x,
                 const TangentDirection& y);
double petz_metric(const MonotoneMetricSpec& spec, const DensityMatrix& rho, const TangentDirection& x);

struct SldMeasurement {
  Measurement measurement;
  double achieved;   // classical Fisher information of the outcome family
  double sld_value;  // J^S(X, X)
};

SldMeasurement sld_optimal_measurement(const DensityMatrix& rho, const TangentDirection& x);

FisherMatrix rld_matrix(const DensityMatrix& rho, const std::vector<TangentDirection>& tangents);
// Tr(G Re J) + ||sqrt(G) Im J sqrt(G)||_1
double holevo_rld_bound(const RealMatrix& g, const FisherMatrix& j);
// Re J + G^{-1/2} |sqrt(G) Im J sqrt(G)| G^{-1/2}; requires G positive definite.
RealMatrix holevo_rld_minimizer(const RealMatrix& g, const FisherMatrix& j);

struct QuadratureResult {
  double value;
  int nodes;       // nodes of the returned estimate
  double change;   // |difference| to the previous estimate
  bool converged;  // change below the 1e-8 target before the node cap
};

// int_0^1 (1 - s) g_{s rho + (1-s) sigma}(rho - sigma, rho - sigma) ds by
// Gauss-Legendre, doubling the node count from `nodes` up to 1024.
QuadratureResult integral_divergence(const MonotoneMetricSpec& spec, const DensityMatrix& rho,
                                     const DensityMatrix& sigma, int nodes = tol::quadrature_nodes);

}  // namespace qdiv

#pragma once

#include <cstdint>
#include <initializer_list>
#include <memory>
#include <random>
#include <vector>

#include "qdiv/linalg.hpp"

namespace qdiv {

using EigenSystemD = EigenSystem<double>;

// Largest matrix dimension any operation may materialize. Default 4096,
// overridden by the QDIV_DIM_CAP environment variable.
Index dimension_cap();
void require_dimension(long double required, const char* what);

class DensityMatrix {
 public:
  explicit DensityMatrix(const HermitianMatrix& m);
  explicit DensityMatrix(const ComplexMatrix& m) : DensityMatrix(HermitianMatrix(m)) {}

  static DensityMatrix maximally_mixed(Index d);
  static DensityMatrix pure(const ComplexVector& psi);
  static DensityMatrix diagonal(const RealVector& probs);

  const HermitianMatrix& hermitian() const noexcept { return m_; }
  const ComplexMatrix& matrix() const noexcept { return m_.matrix(); }
  Index dim() const noexcept { return m_.dim(); }
  const EigenSystemD& eigensystem() const noexcept { return *es_; }
  Index rank() const { return es_->rank(); }
  bool full_rank() const { return rank() == dim(); }

 private:
  DensityMatrix(HermitianMatrix m, std::shared_ptr<const EigenSystemD> es)
      : m_(std::move(m)), es_(std::move(es)) {}
  friend DensityMatrix tensor_product(const DensityMatrix& a, const DensityMatrix& b);

  HermitianMatrix m_;
  std::shared_ptr<const EigenSystemD> es_;
};

// Traceless Hermitian matrix.
class TangentDirection {
 public:
  explicit TangentDirection(const HermitianMatrix& m);
  explicit TangentDirection(const ComplexMatrix& m) : TangentDirection(HermitianMatrix(m)) {}

  static TangentDirection zero(Index d);
  static TangentDirection difference(const DensityMatrix& a, const DensityMatrix& b);

  const HermitianMatrix& hermitian() const noexcept { return m_; }
  const ComplexMatrix& matrix() const noexcept { return m_.matrix(); }
  Index dim() const noexcept { return m_.dim(); }

 private:
  struct Trusted {};
  TangentDirection(HermitianMatrix m, Trusted) : m_(std::move(m)) {}
  HermitianMatrix m_;
};

class ClassicalDistribution {
 public:
  explicit ClassicalDistribution(RealVector probs);
  ClassicalDistribution(std::initializer_list<double> probs);

  static ClassicalDistribution point_mass(Index size, Index at);

  const RealVector& probs() const noexcept { return p_; }
  Index size() const noexcept { return p_.size(); }
  double operator[](Index i) const { return p_(i); }

 private:
  RealVector p_;
};

class QuantumChannel {
 public:
  QuantumChannel(Index dim_in, Index dim_out, std::vector<ComplexMatrix> kraus);

  static QuantumChannel identity(Index d);
  static QuantumChannel unitary(const ComplexMatrix& u);
  static QuantumChannel completely_depolarizing(Index d);

  Index dim_in() const noexcept { return din_; }
  Index dim_out() const noexcept { return dout_; }
  const std::vector<ComplexMatrix>& kraus() const noexcept { return k_; }

 private:
  Index din_;
  Index dout_;
  std::vector<ComplexMatrix> k_;
};

class Measurement {
 public:
  explicit Measurement(std::vector<HermitianMatrix> effects);

  // Rank-1 effects |b_k><b_k| from the orthonormal columns of basis.
  static Measurement projective(const ComplexMatrix& basis);
  static Measurement two_outcome(const HermitianMatrix& projector);

  const std::vector<HermitianMatrix>& effects() const noexcept { return e_; }
  Index size() const noexcept { return static_cast<Index>(e_.size()); }
  Index dim() const { return e_.front().dim(); }

 private:
  std::vector<HermitianMatrix> e_;
};

class Preparation {
 public:
  explicit Preparation(std::vector<DensityMatrix> states);

  const std::vector<DensityMatrix>& states() const noexcept { return s_; }
  Index size() const noexcept { return static_cast<Index>(s_.size()); }
  Index dim() const { return s_.front().dim(); }

 private:
  std::vector<DensityMatrix> s_;
};

// Sum K M K^dag over the Kraus family, no state validation.
HermitianMatrix apply_kraus(const QuantumChannel& ch, const HermitianMatrix& m);

DensityMatrix apply_channel(const QuantumChannel& ch, const DensityMatrix& rho);
TangentDirection apply_channel_tangent(const QuantumChannel& ch, const TangentDirection& x);
DensityMatrix cq_apply(const Preparation& prep, const ClassicalDistribution& p);
ClassicalDistribution measure(const Measurement& m, const DensityMatrix& rho);
RealVector measure_tangent(const Measurement& m, const TangentDirection& x);

DensityMatrix tensor_product(const DensityMatrix& a, const DensityMatrix& b);
DensityMatrix tensor_power(const DensityMatrix& rho, int n);
DensityMatrix mix(double lambda, const DensityMatrix& a, const DensityMatrix& b);

std::uint64_t splitmix64(std::uint64_t x);
std::uint64_t derive_seed(std::uint64_t master, std::uint64_t index);

ComplexMatrix ginibre(Index rows, Index cols, std::mt19937_64& rng);
ComplexMatrix random_unitary(Index dim, std::uint64_t seed);
DensityMatrix random_density(Index dim, Index rank, std::uint64_t seed);
QuantumChannel random_cptp(Index dim_in, Index dim_out, Index kraus_count, std::uint64_t seed);
TangentDirection random_tangent(Index dim, std::uint64_t seed);

}  // namespace qdiv

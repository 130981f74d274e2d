#include "qdiv/quantum.hpp"

#include <cstdlib>
#include <string>

namespace qdiv {

Index dimension_cap() {
  if (const char* env = std::getenv("QDIV_DIM_CAP")) {
    char* end = nullptr;
    const long long v = std::strtoll(env, &end, 10);
    if (end != env && *end == '\0' && v > 0) return static_cast<Index>(v);
  }
  return 4096;
}

void require_dimension(long double required, const char* what) {
  const Index cap = dimension_cap();
  if (required > static_cast<long double>(cap))
    raise<ResourceError>(what, ": dimension ", static_cast<double>(required),
                         " exceeds the cap ", cap, " (set QDIV_DIM_CAP to raise it)");
}

namespace {

std::shared_ptr<const EigenSystemD> validated_spectrum(HermitianMatrix& m) {
  auto es = std::make_shared<EigenSystemD>(eigh(m));
  const double top = es->values.maxCoeff();
  if (!(top > 0)) raise<InvalidArgument>("DensityMatrix: no positive eigenvalue (max ", top, ")");
  const double low = es->values.minCoeff();
  if (low < -tol::psd_clip_relative * top)
    raise<InvalidArgument>("DensityMatrix: eigenvalue ", low, " below the PSD tolerance ",
                           -tol::psd_clip_relative * top);
  const double tr = m.trace();
  if (std::abs(tr - 1.0) > tol::unit_trace)
    raise<InvalidArgument>("DensityMatrix: trace ", tr, " differs from 1 by ", std::abs(tr - 1.0));
  if (low < 0) {
    es->values = es->values.cwiseMax(0.0);
    m = es->reconstruct();
  }
  return es;
}

}  // namespace

DensityMatrix::DensityMatrix(const HermitianMatrix& m) : m_(m) { es_ = validated_spectrum(m_); }

DensityMatrix DensityMatrix::maximally_mixed(Index d) {
  return DensityMatrix(HermitianMatrix::identity(d) / static_cast<double>(d));
}

DensityMatrix DensityMatrix::pure(const ComplexVector& psi) {
  const double n = psi.norm();
  if (!(n > 0)) raise<InvalidArgument>("DensityMatrix::pure: zero vector");
  const ComplexVector u = psi / n;
  return DensityMatrix(HermitianMatrix::hermitian_part(u * u.adjoint()));
}

DensityMatrix DensityMatrix::diagonal(const RealVector& probs) {
  return DensityMatrix(HermitianMatrix::diagonal(probs));
}

TangentDirection::TangentDirection(const HermitianMatrix& m) : m_(m) {
  const double tr = m_.trace();
  const double scale = std::max(1.0, m_.matrix().cwiseAbs().maxCoeff());
  if (std::abs(tr) > tol::traceless * scale)
    raise<InvalidArgument>("TangentDirection: trace ", tr, " is not zero");
}

TangentDirection TangentDirection::zero(Index d) {
  return TangentDirection(HermitianMatrix::zero(d), Trusted{});
}

TangentDirection TangentDirection::difference(const DensityMatrix& a, const DensityMatrix& b) {
  if (a.dim() != b.dim())
    raise<DimensionMismatch>("TangentDirection::difference: dimension ", a.dim(), " vs ", b.dim());
  return TangentDirection(a.hermitian() - b.hermitian(), Trusted{});
}

ClassicalDistribution::ClassicalDistribution(RealVector probs) : p_(std::move(probs)) {
  if (p_.size() < 1) raise<InvalidArgument>("ClassicalDistribution: empty");
  if (!p_.allFinite()) raise<InvalidArgument>("ClassicalDistribution: non-finite entry");
  for (Index i = 0; i < p_.size(); ++i) {
    if (p_(i) < -tol::probability_clip)
      raise<InvalidArgument>("ClassicalDistribution: entry ", i, " is negative (", p_(i), ")");
    if (p_(i) < 0) p_(i) = 0;
  }
  const double s = p_.sum();
  if (std::abs(s - 1.0) > tol::unit_trace)
    raise<InvalidArgument>("ClassicalDistribution: sum ", s, " differs from 1 by ", std::abs(s - 1.0));
}

ClassicalDistribution::ClassicalDistribution(std::initializer_list<double> probs)
    : ClassicalDistribution(RealVector(Eigen::Map<const RealVector>(
          probs.begin(), static_cast<Index>(probs.size())))) {}

ClassicalDistribution ClassicalDistribution::point_mass(Index size, Index at) {
  RealVector p = RealVector::Zero(size);
  p(at) = 1.0;
  return ClassicalDistribution(std::move(p));
}

QuantumChannel::QuantumChannel(Index dim_in, Index dim_out, std::vector<ComplexMatrix> kraus)
    : din_(dim_in), dout_(dim_out), k_(std::move(kraus)) {
  if (din_ < 1 || dout_ < 1) raise<InvalidArgument>("QuantumChannel: dimensions must be positive");
  if (k_.empty()) raise<InvalidArgument>("QuantumChannel: empty Kraus family");
  ComplexMatrix sum = ComplexMatrix::Zero(din_, din_);
  for (size_t i = 0; i < k_.size(); ++i) {
    if (k_[i].rows() != dout_ || k_[i].cols() != din_)
      raise<DimensionMismatch>("QuantumChannel: Kraus operator ", i, " is ", k_[i].rows(), "x",
                               k_[i].cols(), ", expected ", dout_, "x", din_);
    if (!k_[i].allFinite()) raise<InvalidArgument>("QuantumChannel: non-finite Kraus entry");
    sum.noalias() += k_[i].adjoint() * k_[i];
  }
  const double residual = (sum - ComplexMatrix::Identity(din_, din_)).cwiseAbs().maxCoeff();
  if (residual > tol::completeness)
    raise<InvalidArgument>("QuantumChannel: trace preservation residual ", residual);
}

QuantumChannel QuantumChannel::identity(Index d) {
  return QuantumChannel(d, d, {ComplexMatrix::Identity(d, d)});
}

QuantumChannel QuantumChannel::unitary(const ComplexMatrix& u) {
  return QuantumChannel(u.cols(), u.rows(), {u});
}

QuantumChannel QuantumChannel::completely_depolarizing(Index d) {
  std::vector<ComplexMatrix> k;
  const double w = 1.0 / std::sqrt(static_cast<double>(d));
  for (Index i = 0; i < d; ++i)
    for (Index j = 0; j < d; ++j) {
      ComplexMatrix m = ComplexMatrix::Zero(d, d);
      m(i, j) = w;
      k.push_back(std::move(m));
    }
  return QuantumChannel(d, d, std::move(k));
}

Measurement::Measurement(std::vector<HermitianMatrix> effects) : e_(std::move(effects)) {
  if (e_.empty()) raise<InvalidArgument>("Measurement: no effects");
  const Index d = e_.front().dim();
  ComplexMatrix sum = ComplexMatrix::Zero(d, d);
  for (size_t i = 0; i < e_.size(); ++i) {
    if (e_[i].dim() != d)
      raise<DimensionMismatch>("Measurement: effect ", i, " has dimension ", e_[i].dim(), ", expected ", d);
    const double low = eigh(e_[i]).values.minCoeff();
    if (low < -tol::psd_clip_relative)
      raise<InvalidArgument>("Measurement: effect ", i, " has eigenvalue ", low);
    sum += e_[i].matrix();
  }
  const double residual = (sum - ComplexMatrix::Identity(d, d)).cwiseAbs().maxCoeff();
  if (residual > tol::completeness)
    raise<InvalidArgument>("Measurement: completeness residual ", residual);
}

Measurement Measurement::projective(const ComplexMatrix& basis) {
  std::vector<HermitianMatrix> e;
  e.reserve(static_cast<size_t>(basis.cols()));
  for (Index k = 0; k < basis.cols(); ++k)
    e.push_back(HermitianMatrix::hermitian_part(basis.col(k) * basis.col(k).adjoint()));
  return Measurement(std::move(e));
}

Measurement Measurement::two_outcome(const HermitianMatrix& projector) {
  return Measurement({projector, HermitianMatrix::identity(projector.dim()) - projector});
}

Preparation::Preparation(std::vector<DensityMatrix> states) : s_(std::move(states)) {
  if (s_.empty()) raise<InvalidArgument>("Preparation: no states");
  for (size_t i = 1; i < s_.size(); ++i)
    if (s_[i].dim() != s_.front().dim())
      raise<DimensionMismatch>("Preparation: state ", i, " has dimension ", s_[i].dim(),
                               ", expected ", s_.front().dim());
}

HermitianMatrix apply_kraus(const QuantumChannel& ch, const HermitianMatrix& m) {
  if (m.dim() != ch.dim_in())
    raise<DimensionMismatch>("apply_channel: input dimension ", m.dim(), ", channel expects ",
                             ch.dim_in());
  ComplexMatrix out = ComplexMatrix::Zero(ch.dim_out(), ch.dim_out());
  for (const auto& k : ch.kraus()) out.noalias() += k * m.matrix() * k.adjoint();
  return HermitianMatrix::hermitian_part(std::move(out));
}

DensityMatrix apply_channel(const QuantumChannel& ch, const DensityMatrix& rho) {
  return DensityMatrix(apply_kraus(ch, rho.hermitian()));
}

TangentDirection apply_channel_tangent(const QuantumChannel& ch, const TangentDirection& x) {
  return TangentDirection(apply_kraus(ch, x.hermitian()));
}

DensityMatrix cq_apply(const Preparation& prep, const ClassicalDistribution& p) {
  if (p.size() != prep.size())
    raise<DimensionMismatch>("cq_apply: ", p.size(), " probabilities for ", prep.size(), " states");
  ComplexMatrix out = ComplexMatrix::Zero(prep.dim(), prep.dim());
  for (Index x = 0; x < p.size(); ++x)
    if (p[x] != 0) out += p[x] * prep.states()[static_cast<size_t>(x)].matrix();
  return DensityMatrix(HermitianMatrix::hermitian_part(std::move(out)));
}

ClassicalDistribution measure(const Measurement& m, const DensityMatrix& rho) {
  if (m.dim() != rho.dim())
    raise<DimensionMismatch>("measure: measurement dimension ", m.dim(), ", state dimension ", rho.dim());
  RealVector p(m.size());
  for (Index k = 0; k < m.size(); ++k)
    p(k) = (m.effects()[static_cast<size_t>(k)].matrix().cwiseProduct(rho.matrix().transpose()))
               .sum()
               .real();
  // Completeness is only enforced to 1e-9, tighter than the distribution check.
  p = p.cwiseMax(0.0);
  return ClassicalDistribution(RealVector(p / p.sum()));
}

RealVector measure_tangent(const Measurement& m, const TangentDirection& x) {
  if (m.dim() != x.dim())
    raise<DimensionMismatch>("measure_tangent: measurement dimension ", m.dim(), ", tangent dimension ",
                             x.dim());
  RealVector dp(m.size());
  for (Index k = 0; k < m.size(); ++k)
    dp(k) = (m.effects()[static_cast<size_t>(k)].matrix().cwiseProduct(x.matrix().transpose()))
                .sum()
                .real();
  return dp;
}

DensityMatrix tensor_product(const DensityMatrix& a, const DensityMatrix& b) {
  require_dimension(static_cast<long double>(a.dim()) * b.dim(), "tensor_product");
  HermitianMatrix m = HermitianMatrix::hermitian_part(kron(a.matrix(), b.matrix()));
  // The spectrum of a Kronecker product is the product of spectra; reuse it.
  const EigenSystemD& ea = a.eigensystem();
  const EigenSystemD& eb = b.eigensystem();
  const Index d = a.dim() * b.dim();
  RealVector vals(d);
  for (Index i = 0; i < a.dim(); ++i)
    for (Index j = 0; j < b.dim(); ++j) vals(i * b.dim() + j) = ea.values(i) * eb.values(j);
  const ComplexMatrix vecs = kron(ea.vectors, eb.vectors);
  std::vector<Index> order(static_cast<size_t>(d));
  std::iota(order.begin(), order.end(), Index(0));
  std::stable_sort(order.begin(), order.end(), [&](Index x, Index y) { return vals(x) < vals(y); });
  auto es = std::make_shared<EigenSystemD>();
  es->values.resize(d);
  es->vectors.resize(d, d);
  for (Index k = 0; k < d; ++k) {
    es->values(k) = vals(order[static_cast<size_t>(k)]);
    es->vectors.col(k) = vecs.col(order[static_cast<size_t>(k)]);
  }
  return DensityMatrix(std::move(m), std::move(es));
}

DensityMatrix tensor_power(const DensityMatrix& rho, int n) {
  if (n < 1) raise<InvalidArgument>("tensor_power: n must be positive, got ", n);
  require_dimension(std::pow(static_cast<long double>(rho.dim()), n), "tensor_power");
  DensityMatrix out = rho;
  for (int i = 1; i < n; ++i) out = tensor_product(out, rho);
  return out;
}

DensityMatrix mix(double lambda, const DensityMatrix& a, const DensityMatrix& b) {
  if (a.dim() != b.dim()) raise<DimensionMismatch>("mix: dimension ", a.dim(), " vs ", b.dim());
  if (!(lambda >= 0 && lambda <= 1)) raise<InvalidArgument>("mix: weight ", lambda, " outside [0,1]");
  return DensityMatrix(lambda * a.hermitian() + (1 - lambda) * b.hermitian());
}

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ULL;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
  return x ^ (x >> 31);
}

std::uint64_t derive_seed(std::uint64_t master, std::uint64_t index) {
  return splitmix64(master ^ splitmix64(index));
}

ComplexMatrix ginibre(Index rows, Index cols, std::mt19937_64& rng) {
  std::normal_distribution<double> normal(0.0, 1.0);
  ComplexMatrix g(rows, cols);
  const double s = std::sqrt(0.5);
  // Column-major fill, real part drawn before imaginary part.
  for (Index j = 0; j < cols; ++j)
    for (Index i = 0; i < rows; ++i) {
      const double re = normal(rng);
      const double im = normal(rng);
      g(i, j) = cplx(s * re, s * im);
    }
  return g;
}

namespace {

// Thin Q of a Householder QR with the diagonal of R made positive.
ComplexMatrix orthonormal_columns(const ComplexMatrix& g) {
  Eigen::HouseholderQR<ComplexMatrix> qr(g);
  ComplexMatrix q = qr.householderQ() * ComplexMatrix::Identity(g.rows(), g.cols());
  const ComplexMatrix r = qr.matrixQR();
  for (Index j = 0; j < g.cols(); ++j) {
    const double a = std::abs(r(j, j));
    if (a > 0) q.col(j) *= r(j, j) / a;
  }
  return q;
}

}  // namespace

ComplexMatrix random_unitary(Index dim, std::uint64_t seed) {
  if (dim < 1) raise<InvalidArgument>("random_unitary: dim must be positive");
  std::mt19937_64 rng(seed);
  return orthonormal_columns(ginibre(dim, dim, rng));
}

DensityMatrix random_density(Index dim, Index rank, std::uint64_t seed) {
  if (dim < 1 || rank < 1 || rank > dim)
    raise<InvalidArgument>("random_density: need 1 <= rank <= dim, got rank ", rank, ", dim ", dim);
  require_dimension(static_cast<long double>(dim), "random_density");
  std::mt19937_64 rng(seed);
  const ComplexMatrix g = ginibre(dim, rank, rng);
  ComplexMatrix m = g * g.adjoint();
  m /= m.trace().real();
  return DensityMatrix(HermitianMatrix::hermitian_part(std::move(m)));
}

QuantumChannel random_cptp(Index dim_in, Index dim_out, Index kraus_count, std::uint64_t seed) {
  if (dim_in < 1 || dim_out < 1 || kraus_count < 1)
    raise<InvalidArgument>("random_cptp: dimensions and kraus_count must be positive");
  if (dim_out * kraus_count < dim_in)
    raise<InvalidArgument>("random_cptp: dim_out * kraus_count = ", dim_out * kraus_count,
                           " is smaller than dim_in = ", dim_in);
  std::mt19937_64 rng(seed);
  const ComplexMatrix v = orthonormal_columns(ginibre(dim_out * kraus_count, dim_in, rng));
  std::vector<ComplexMatrix> k;
  k.reserve(static_cast<size_t>(kraus_count));
  for (Index i = 0; i < kraus_count; ++i) k.push_back(v.middleRows(i * dim_out, dim_out));
  return QuantumChannel(dim_in, dim_out, std::move(k));
}

TangentDirection random_tangent(Index dim, std::uint64_t seed) {
  if (dim < 1) raise<InvalidArgument>("random_tangent: dim must be positive");
  std::mt19937_64 rng(seed);
  const ComplexMatrix g = ginibre(dim, dim, rng);
  ComplexMatrix h = (g + g.adjoint()) / 2.0;
  h -= (h.trace().real() / static_cast<double>(dim)) * ComplexMatrix::Identity(dim, dim);
  return TangentDirection(HermitianMatrix::hermitian_part(std::move(h)));
}

}  // namespace qdiv

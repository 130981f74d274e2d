#include "qdiv/reverse_test.hpp"

namespace qdiv {

namespace {

Preparation pure_preparation(const std::vector<ComplexVector>& frame) {
  std::vector<DensityMatrix> states;
  states.reserve(frame.size());
  for (const auto& v : frame) states.push_back(DensityMatrix::pure(v));
  return Preparation(std::move(states));
}

// Split the columns of W into unit vectors and squared norms.
void split_columns(const ComplexMatrix& w, std::vector<ComplexVector>& frame, RealVector& weight) {
  frame.clear();
  weight.resize(w.cols());
  for (Index x = 0; x < w.cols(); ++x) {
    const double n = w.col(x).norm();
    weight(x) = n * n;
    frame.push_back(n > 0 ? ComplexVector(w.col(x) / n) : ComplexVector(w.col(x)));
  }
}

HermitianMatrix frame_sum(const std::vector<ComplexVector>& frame, const RealVector& w) {
  const Index d = frame.front().size();
  ComplexMatrix m = ComplexMatrix::Zero(d, d);
  for (size_t x = 0; x < frame.size(); ++x) m += w(static_cast<Index>(x)) * frame[x] * frame[x].adjoint();
  return HermitianMatrix::hermitian_part(std::move(m));
}

void require_tangent_support(const DensityMatrix& rho, const TangentDirection& x, const char* what) {
  if (rho.dim() != x.dim())
    raise<DimensionMismatch>(what, ": state dimension ", rho.dim(), ", tangent dimension ", x.dim());
  const ComplexMatrix proj = rho.eigensystem().support_projector();
  const double residual = (x.matrix() - x.matrix() * proj).norm();
  if (residual > tol::support_containment * std::max(1.0, x.hermitian().frobenius()))
    raise<SupportError>(what, ": tangent has weight ", residual, " outside the support of rho");
}

}  // namespace

HermitianMatrix ParallelDecomposition::combine(const RealVector& w) const {
  if (w.size() != static_cast<Index>(frame.size()))
    raise<DimensionMismatch>("ParallelDecomposition::combine: ", w.size(), " weights for ", frame.size(), " vectors");
  return frame_sum(frame, w);
}

ParallelDecomposition parallel_decomposition(const DensityMatrix& rho, const DensityMatrix& sigma) {
  if (rho.dim() != sigma.dim())
    raise<DimensionMismatch>("parallel_decomposition: dimension ", rho.dim(), " vs ", sigma.dim());
  if (support_condition(rho, sigma) != SupportCondition::equal)
    raise<SupportError>("parallel_decomposition: supports differ (rank rho ", rho.rank(), ", rank sigma ",
                        sigma.rank(), ")");

  // Everything below lives on the common support, in sigma's eigenframe.
  const EigenSystemD& es = sigma.eigensystem();
  const ComplexMatrix e = es.support_basis();
  const RealVector mu = es.values.tail(e.cols());
  const HermitianMatrix rho_r = HermitianMatrix::hermitian_part(e.adjoint() * rho.matrix() * e);
  const ComplexMatrix sqrt_rho = sqrt_psd(eigh(rho_r)).matrix();
  const ComplexMatrix sqrt_sigma = mu.cwiseSqrt().cast<cplx>().asDiagonal();
  const ComplexMatrix t = mu.cwiseSqrt().cwiseInverse().cast<cplx>().asDiagonal() * sqrt_rho;
  const ComplexMatrix u = polar_unitary(t);
  // sqrt(rho) U = sqrt(sigma) X with X Hermitian PSD
  const HermitianMatrix x = hermitian_factor_solve<double>(sqrt_rho * u, sqrt_sigma);
  const EigenSystemD ex = eigh(x);

  ParallelDecomposition out{{}, ClassicalDistribution{1.0}, ClassicalDistribution{1.0}};
  RealVector q;
  split_columns(e * (sqrt_sigma * ex.vectors), out.frame, q);
  const RealVector p = q.cwiseProduct(ex.values.cwiseAbs2());
  out.p = ClassicalDistribution(p);
  out.q = ClassicalDistribution(q);

  const double rr = (out.combine(out.p.probs()).matrix() - rho.matrix()).norm();
  const double rs = (out.combine(out.q.probs()).matrix() - sigma.matrix()).norm();
  if (rr > tol::reconstruction || rs > tol::reconstruction)
    raise<ConvergenceError>("parallel_decomposition: reconstruction residuals ", rr, ", ", rs);
  ComplexMatrix f(rho.dim(), static_cast<Index>(out.frame.size()));
  for (size_t k = 0; k < out.frame.size(); ++k) f.col(static_cast<Index>(k)) = out.frame[k];
  const double gram = eigh(HermitianMatrix::hermitian_part(f.adjoint() * f)).values.minCoeff();
  if (gram <= tol::frame_gram)
    raise<ConvergenceError>("parallel_decomposition: frame Gram eigenvalue ", gram);
  return out;
}

ReverseTest optimal_reverse_test(const DensityMatrix& rho, const DensityMatrix& sigma) {
  ParallelDecomposition pd = parallel_decomposition(rho, sigma);
  const double v = kl(pd.p, pd.q).value();
  return {pure_preparation(pd.frame), std::move(pd.p), std::move(pd.q), v, std::move(pd.frame)};
}

ReverseTest post_compose(const QuantumChannel& ch, const ReverseTest& test) {
  std::vector<DensityMatrix> states;
  for (const auto& s : test.preparation.states()) states.push_back(apply_channel(ch, s));
  return {Preparation(std::move(states)), test.p, test.q, test.input_kl, {}};
}

double reverse_test_residual(const ReverseTest& test, const DensityMatrix& rho, const DensityMatrix& sigma) {
  const double a = (cq_apply(test.preparation, test.p).matrix() - rho.matrix()).norm();
  const double b = (cq_apply(test.preparation, test.q).matrix() - sigma.matrix()).norm();
  return std::max(a, b);
}

namespace {

// W with W W^dag = rho (support eigenframe, W = E L^{1/2}) and the reverse
// SLD A = L^{-1/2} E^dag X E L^{-1/2}, so that W A W^dag = X.
std::pair<ComplexMatrix, HermitianMatrix> reverse_sld(const DensityMatrix& rho, const TangentDirection& x) {
  const EigenSystemD& es = rho.eigensystem();
  const ComplexMatrix e = es.support_basis();
  const RealVector lam = es.values.tail(e.cols());
  const ComplexVector h = lam.cwiseSqrt().cast<cplx>();
  const ComplexVector hi = lam.cwiseSqrt().cwiseInverse().cast<cplx>();
  ComplexMatrix w = e * h.asDiagonal();
  HermitianMatrix a =
      HermitianMatrix::hermitian_part(hi.asDiagonal() * (e.adjoint() * x.matrix() * e) * hi.asDiagonal());
  return {std::move(w), std::move(a)};
}

ReverseEstimation from_frame(const ComplexMatrix& w, const RealVector& a) {
  std::vector<ComplexVector> frame;
  RealVector weight;
  split_columns(w, frame, weight);
  ClassicalDistribution p(weight);
  const RealVector dp = p.probs().cwiseProduct(a);
  const double fisher = p.probs().dot(a.cwiseAbs2());
  Preparation prep = pure_preparation(frame);
  return {std::move(prep), std::move(frame), std::move(p), dp, fisher};
}

}  // namespace

ReverseEstimation reverse_estimation_1param(const DensityMatrix& rho, const TangentDirection& x) {
  require_tangent_support(rho, x, "reverse_estimation_1param");
  const auto [w, a] = reverse_sld(rho, x);
  const EigenSystemD ea = eigh(a);
  ReverseEstimation out = from_frame(w * ea.vectors, ea.values);
  const double residual = reverse_estimation_residual(out, rho, x);
  if (residual > tol::reconstruction)
    raise<ConvergenceError>("reverse_estimation_1param: reconstruction residual ", residual);
  return out;
}

ReverseEstimation dilated_reverse_estimation(const DensityMatrix& rho, const TangentDirection& x,
                                             Index extra, std::uint64_t seed) {
  require_tangent_support(rho, x, "dilated_reverse_estimation");
  if (extra < 0) raise<InvalidArgument>("dilated_reverse_estimation: negative dilation");
  const auto [w, a] = reverse_sld(rho, x);
  const Index r = a.dim();
  const Index k = r + extra;
  std::mt19937_64 rng(seed);
  ComplexMatrix big = ComplexMatrix::Zero(k, k);
  big.topLeftCorner(r, r) = a.matrix();
  if (extra > 0) {
    const double scale = std::max(1.0, a.matrix().cwiseAbs().maxCoeff());
    const ComplexMatrix b = scale * ginibre(r, extra, rng);
    const ComplexMatrix g = scale * ginibre(extra, extra, rng);
    big.topRightCorner(r, extra) = b;
    big.bottomLeftCorner(extra, r) = b.adjoint();
    big.bottomRightCorner(extra, extra) = (g + g.adjoint()) / 2.0;
  }
  // Mix the kernel-free part with a random unitary so the dilation is not
  // block diagonal even when extra = 0.
  const ComplexMatrix z = random_unitary(k, rng());
  const EigenSystemD ek = eigh(HermitianMatrix::hermitian_part(z.adjoint() * big * z));
  // [I_r 0] Z V is a co-isometry; its rows give the dilated frame.
  const ComplexMatrix coiso = (z * ek.vectors).topRows(r);
  ReverseEstimation out = from_frame(w * coiso, ek.values);
  const double residual = reverse_estimation_residual(out, rho, x);
  if (residual > tol::reconstruction)
    raise<ConvergenceError>("dilated_reverse_estimation: reconstruction residual ", residual);
  return out;
}

double reverse_estimation_residual(const ReverseEstimation& est, const DensityMatrix& rho,
                                   const TangentDirection& x) {
  const double a = (cq_apply(est.preparation, est.p).matrix() - rho.matrix()).norm();
  const double b = (frame_sum(est.frame, est.dp).matrix() - x.matrix()).norm();
  return std::max(a, b);
}

}  // namespace qdiv

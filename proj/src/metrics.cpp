#include "qdiv/metrics.hpp"

#include "qdiv/quadrature.hpp"

namespace qdiv {

namespace {

// expm1(y)/y with the second-order series near zero
double expm1_ratio(double y) {
  if (std::abs(y) < tol::series_switch) return 1.0 + y / 2.0 + y * y / 6.0;
  return std::expm1(y) / y;
}

// f_alpha at x = e^t, written as ratios that stay finite at t = 0 and b = 0.
double f_alpha_log(double t, double alpha) {
  const double b1 = (1.0 - alpha) / 2.0;
  const double b2 = (1.0 + alpha) / 2.0;
  const double num = expm1_ratio(t);
  return num * num / (expm1_ratio(b1 * t) * expm1_ratio(b2 * t));
}

// (ln x - ln y)/(x - y)
double log_mean_inverse(double lj, double lk) {
  const double t = std::log(lj) - std::log(lk);
  return 1.0 / (lk * expm1_ratio(t));
}

void check_alpha(double alpha) {
  if (!(std::abs(alpha) <= 3.0)) raise<InvalidArgument>("alpha ", alpha, " outside [-3, 3]");
}

}  // namespace

double f_alpha(double x, double alpha, AlphaNormalization norm) {
  check_alpha(alpha);
  if (!(x > 0)) raise<DomainError>("f_alpha: x = ", x, " is not positive");
  const double v = f_alpha_log(std::log(x), alpha);
  if (norm == AlphaNormalization::unit) return v;
  const double denom = 1.0 - alpha * alpha;
  if (std::abs(denom) < 1e-12)
    raise<DomainError>("f_alpha: the printed form is singular at alpha = ", alpha);
  return v * (4.0 - alpha * alpha) / denom;
}

MonotoneMetricSpec MonotoneMetricSpec::sld() { return {Kind::sld, 0, "sld"}; }
MonotoneMetricSpec MonotoneMetricSpec::rld() { return {Kind::rld, 0, "rld"}; }
MonotoneMetricSpec MonotoneMetricSpec::bkm() { return {Kind::bkm, 0, "bkm"}; }
MonotoneMetricSpec MonotoneMetricSpec::wigner_yanase() { return {Kind::wy, 0, "wy"}; }

MonotoneMetricSpec MonotoneMetricSpec::alpha(double a) {
  check_alpha(a);
  return {Kind::alpha, a, detail::concat("alpha=", a)};
}

MonotoneMetricSpec MonotoneMetricSpec::custom(std::string name, std::function<double(double)> f) {
  if (!f) raise<InvalidArgument>("MonotoneMetricSpec::custom: empty function");
  const double one = f(1.0);
  if (!(std::abs(one - 1.0) <= 1e-10))
    raise<InvalidArgument>("MonotoneMetricSpec::custom: f(1) = ", one, ", expected 1");
  for (double x = 0.05; x < 20.0; x *= 1.37) {
    const double a = f(x);
    const double b = x * f(1.0 / x);
    if (!(a > 0) || !(std::abs(a - b) <= 1e-10 * std::max(1.0, std::abs(a))))
      raise<InvalidArgument>("MonotoneMetricSpec::custom: f(x) = x f(1/x) fails at x = ", x, " (",
                             a, " vs ", b, ")");
  }
  return {Kind::custom, 0, std::move(name), std::move(f)};
}

MonotoneMetricSpec MonotoneMetricSpec::parse(const std::string& text) {
  if (text == "sld") return sld();
  if (text == "rld") return rld();
  if (text == "bkm") return bkm();
  if (text == "wy") return wigner_yanase();
  if (text.rfind("alpha=", 0) == 0) {
    size_t used = 0;
    const std::string arg = text.substr(6);
    double a = 0;
    try {
      a = std::stod(arg, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (used == 0 || used != arg.size()) raise<InvalidArgument>("metric spec: bad alpha in '", text, "'");
    return alpha(a);
  }
  raise<InvalidArgument>("metric spec: unknown '", text, "' (expected sld, rld, bkm, wy or alpha=A)");
}

double MonotoneMetricSpec::f(double x) const {
  if (!(x > 0)) raise<DomainError>("metric f: x = ", x, " is not positive");
  switch (kind_) {
    case Kind::sld:
      return (1.0 + x) / 2.0;
    case Kind::rld:
      return 2.0 * x / (1.0 + x);
    case Kind::bkm:
      return expm1_ratio(std::log(x));
    case Kind::wy: {
      const double r = (std::sqrt(x) + 1.0) / 2.0;
      return r * r;
    }
    case Kind::alpha:
      return f_alpha(x, alpha_);
    default:
      return custom_(x);
  }
}

double MonotoneMetricSpec::kernel(double lj, double lk) const {
  switch (kind_) {
    case Kind::sld:
      return 2.0 / (lj + lk);
    case Kind::rld:
      return 0.5 * (1.0 / lj + 1.0 / lk);
    case Kind::bkm:
      return log_mean_inverse(lj, lk);
    case Kind::wy: {
      const double s = std::sqrt(lj) + std::sqrt(lk);
      return 4.0 / (s * s);
    }
    case Kind::alpha:
      return 1.0 / (lk * f_alpha_log(std::log(lj) - std::log(lk), alpha_));
    default:
      return 1.0 / (lk * custom_(lj / lk));
  }
}

double operator_monotone_spot_check(const MonotoneMetricSpec& spec, int trials, std::uint64_t seed) {
  double worst = std::numeric_limits<double>::infinity();
  for (int t = 0; t < trials; ++t) {
    std::mt19937_64 rng(derive_seed(seed, static_cast<std::uint64_t>(t)));
    const Index d = 1 + static_cast<Index>(rng() % 4);
    const ComplexMatrix ga = ginibre(d, d, rng);
    const ComplexMatrix gb = ginibre(d, d, rng);
    const HermitianMatrix a = HermitianMatrix::hermitian_part(ga * ga.adjoint() + 0.05 * ComplexMatrix::Identity(d, d));
    const HermitianMatrix b = a + HermitianMatrix::hermitian_part(gb * gb.adjoint());
    auto fn = [&](double x) { return spec.f(x); };
    const HermitianMatrix diff = matrix_function(b, fn) - matrix_function(a, fn);
    worst = std::min(worst, eigh(diff).values.minCoeff());
  }
  return worst;
}

FisherMatrix::FisherMatrix(ComplexMatrix j) : j_(std::move(j)) {
  if (j_.rows() < 1 || j_.rows() != j_.cols())
    raise<DimensionMismatch>("FisherMatrix: expected a nonempty square matrix");
  if (!j_.allFinite()) raise<InvalidArgument>("FisherMatrix: non-finite entry");
  const double scale = std::max(1.0, j_.cwiseAbs().maxCoeff());
  const double defect = (j_ - j_.adjoint()).cwiseAbs().maxCoeff();
  if (defect > 1e-9 * scale) raise<InvalidArgument>("FisherMatrix: Hermiticity defect ", defect);
  j_ = ((j_ + j_.adjoint()) / 2.0).eval();
  Eigen::SelfAdjointEigenSolver<RealMatrix> re(j_.real());
  if (re.eigenvalues().minCoeff() < -1e-9 * scale)
    raise<InvalidArgument>("FisherMatrix: real part has eigenvalue ", re.eigenvalues().minCoeff());
}

namespace {

void check_tangent(const ClassicalDistribution& p, const RealVector& dp) {
  if (dp.size() != p.size())
    raise<DimensionMismatch>("classical_fisher: tangent length ", dp.size(), ", distribution length ", p.size());
  const double s = dp.sum();
  if (std::abs(s) > tol::traceless * std::max(1.0, dp.cwiseAbs().maxCoeff()))
    raise<InvalidArgument>("classical_fisher: tangent sums to ", s);
}

constexpr double kTangentFloor = 1e-12;

}  // namespace

ExtendedReal classical_fisher(const ClassicalDistribution& p, const RealVector& dp) {
  check_tangent(p, dp);
  double s = 0;
  for (Index x = 0; x < p.size(); ++x) {
    if (p[x] > 0) {
      s += dp(x) * dp(x) / p[x];
    } else if (std::abs(dp(x)) > kTangentFloor) {
      return ExtendedReal::plus_infinity();
    }
  }
  return ExtendedReal::finite(s);
}

FisherMatrix classical_fisher(const ClassicalDistribution& p, const std::vector<RealVector>& dps) {
  const Index m = static_cast<Index>(dps.size());
  if (m < 1) raise<InvalidArgument>("classical_fisher: no tangents");
  for (Index i = 0; i < m; ++i) {
    if (!classical_fisher(p, dps[static_cast<size_t>(i)]).is_finite())
      raise<SupportError>("classical_fisher: tangent ", i, " has weight outside the support of p");
  }
  RealMatrix j = RealMatrix::Zero(m, m);
  for (Index x = 0; x < p.size(); ++x) {
    if (!(p[x] > 0)) continue;
    for (Index a = 0; a < m; ++a)
      for (Index b = 0; b < m; ++b)
        j(a, b) += dps[static_cast<size_t>(a)](x) * dps[static_cast<size_t>(b)](x) / p[x];
  }
  return FisherMatrix(j.cast<cplx>());
}

namespace {

void same_dim(const DensityMatrix& rho, const TangentDirection& x, const char* what) {
  if (rho.dim() != x.dim())
    raise<DimensionMismatch>(what, ": state dimension ", rho.dim(), ", tangent dimension ", x.dim());
}

void require_full_rank(const DensityMatrix& rho, const char* what) {
  if (!rho.full_rank())
    raise<RankError>(what, ": state has rank ", rho.rank(), " < ", rho.dim(),
                     "; restrict to the support first");
}

// sum conj(X_jk) Y_jk c(l_j, l_k) in the eigenframe
cplx petz_form(const MonotoneMetricSpec& spec, const EigenSystemD& es, const ComplexMatrix& x,
               const ComplexMatrix& y) {
  const ComplexMatrix xt = es.vectors.adjoint() * x * es.vectors;
  const ComplexMatrix yt = es.vectors.adjoint() * y * es.vectors;
  cplx s = 0;
  for (Index k = 0; k < es.dim(); ++k)
    for (Index j = 0; j < es.dim(); ++j)
      s += std::conj(xt(j, k)) * yt(j, k) * spec.kernel(es.values(j), es.values(k));
  return s;
}

}  // namespace

SldOperator sld_operator(const DensityMatrix& rho, const TangentDirection& x) {
  same_dim(rho, x, "sld_operator");
  const EigenSystemD& es = rho.eigensystem();
  const double cut = es.cutoff();
  ComplexMatrix l = es.vectors.adjoint() * x.matrix() * es.vectors;
  for (Index k = 0; k < es.dim(); ++k)
    for (Index j = 0; j < es.dim(); ++j) {
      const double s = es.values(j) + es.values(k);
      l(j, k) = s > cut ? 2.0 * l(j, k) / s : cplx(0);
    }
  HermitianMatrix lh = HermitianMatrix::hermitian_part(es.vectors * l * es.vectors.adjoint());
  const double residual =
      ((lh.matrix() * rho.matrix() + rho.matrix() * lh.matrix()) / 2.0 - x.matrix()).norm();
  return {std::move(lh), residual};
}

ComplexMatrix rld_operator(const DensityMatrix& rho, const TangentDirection& x) {
  same_dim(rho, x, "rld_operator");
  const EigenSystemD& es = rho.eigensystem();
  const ComplexMatrix proj = es.support_projector();
  const double residual = (x.matrix() - x.matrix() * proj).norm();
  if (residual > tol::support_containment * std::max(1.0, x.hermitian().frobenius()))
    raise<SupportError>("rld_operator: RLD does not exist, tangent has weight ", residual,
                        " outside the support of rho");
  return x.matrix() * pseudo_inverse(es).matrix();
}

cplx petz_metric(const MonotoneMetricSpec& spec, const DensityMatrix& rho, const TangentDirection& x,
                 const TangentDirection& y) {
  same_dim(rho, x, "petz_metric");
  same_dim(rho, y, "petz_metric");
  require_full_rank(rho, "petz_metric");
  return petz_form(spec, rho.eigensystem(), x.matrix(), y.matrix());
}

double petz_metric(const MonotoneMetricSpec& spec, const DensityMatrix& rho, const TangentDirection& x) {
  return petz_metric(spec, rho, x, x).real();
}

SldMeasurement sld_optimal_measurement(const DensityMatrix& rho, const TangentDirection& x) {
  same_dim(rho, x, "sld_optimal_measurement");
  require_full_rank(rho, "sld_optimal_measurement");
  const SldOperator sld = sld_operator(rho, x);
  Measurement m = Measurement::projective(eigh(sld.l).vectors);
  const ClassicalDistribution p = measure(m, rho);
  RealVector dp = measure_tangent(m, x);
  dp.array() -= dp.mean();  // remove roundoff drift of the pushforward trace
  const double achieved = classical_fisher(p, dp).value();
  const double target = petz_metric(MonotoneMetricSpec::sld(), rho, x);
  return {std::move(m), achieved, target};
}

FisherMatrix rld_matrix(const DensityMatrix& rho, const std::vector<TangentDirection>& tangents) {
  if (tangents.empty()) raise<InvalidArgument>("rld_matrix: no tangents");
  std::vector<ComplexMatrix> l;
  for (const auto& t : tangents) l.push_back(rld_operator(rho, t));
  const Index m = static_cast<Index>(l.size());
  ComplexMatrix j(m, m);
  for (Index a = 0; a < m; ++a)
    for (Index b = 0; b < m; ++b)
      j(a, b) = (rho.matrix() * l[static_cast<size_t>(b)].adjoint() * l[static_cast<size_t>(a)]).trace();
  return FisherMatrix(std::move(j));
}

namespace {

RealMatrix symmetric_sqrt(const RealMatrix& g, bool inverse) {
  if (g.rows() < 1 || g.rows() != g.cols()) raise<DimensionMismatch>("weight matrix G must be square");
  if (!g.allFinite()) raise<InvalidArgument>("weight matrix G has a non-finite entry");
  const double scale = std::max(1.0, g.cwiseAbs().maxCoeff());
  if ((g - g.transpose()).cwiseAbs().maxCoeff() > 1e-12 * scale)
    raise<InvalidArgument>("weight matrix G is not symmetric");
  Eigen::SelfAdjointEigenSolver<RealMatrix> es(g);
  RealVector v = es.eigenvalues();
  if (v.minCoeff() < -1e-12 * scale) raise<InvalidArgument>("weight matrix G is not PSD (eigenvalue ", v.minCoeff(), ")");
  if (inverse) {
    if (v.minCoeff() <= tol::support_relative * v.maxCoeff())
      raise<RankError>("weight matrix G is singular");
    v = v.cwiseSqrt().cwiseInverse();
  } else {
    v = v.cwiseMax(0.0).cwiseSqrt();
  }
  return es.eigenvectors() * v.asDiagonal() * es.eigenvectors().transpose();
}

}  // namespace

double holevo_rld_bound(const RealMatrix& g, const FisherMatrix& j) {
  if (g.rows() != j.size()) raise<DimensionMismatch>("holevo_rld_bound: G is ", g.rows(), "x", g.cols(), ", J is ", j.size());
  const RealMatrix sg = symmetric_sqrt(g, false);
  const RealMatrix k = sg * j.imag_part() * sg;
  return (g * j.real_part()).trace() + trace_norm(k);
}

RealMatrix holevo_rld_minimizer(const RealMatrix& g, const FisherMatrix& j) {
  if (g.rows() != j.size()) raise<DimensionMismatch>("holevo_rld_minimizer: G is ", g.rows(), "x", g.cols(), ", J is ", j.size());
  const RealMatrix sg = symmetric_sqrt(g, false);
  const RealMatrix sgi = symmetric_sqrt(g, true);
  const RealMatrix k = sg * j.imag_part() * sg;
  Eigen::SelfAdjointEigenSolver<RealMatrix> es(k.transpose() * k);
  const RealMatrix abs_k =
      es.eigenvectors() * es.eigenvalues().cwiseMax(0.0).cwiseSqrt().asDiagonal() * es.eigenvectors().transpose();
  RealMatrix out = j.real_part() + sgi * abs_k * sgi;
  return (out + out.transpose()) / 2.0;
}

QuadratureResult integral_divergence(const MonotoneMetricSpec& spec, const DensityMatrix& rho,
                                     const DensityMatrix& sigma, int nodes) {
  if (rho.dim() != sigma.dim())
    raise<DimensionMismatch>("integral_divergence: dimension ", rho.dim(), " vs ", sigma.dim());
  if (nodes < 2) raise<InvalidArgument>("integral_divergence: need at least 2 nodes, got ", nodes);
  require_full_rank(rho, "integral_divergence");
  require_full_rank(sigma, "integral_divergence");
  const ComplexMatrix delta = rho.matrix() - sigma.matrix();

  auto estimate = [&](int n) {
    const GaussLegendre<double> rule = gauss_legendre<double>(n);
    std::vector<double> terms(static_cast<size_t>(n));
    for (size_t i = 0; i < terms.size(); ++i) {
      const double s = rule.nodes[i];
      const EigenSystemD es = eigh(s * rho.hermitian() + (1.0 - s) * sigma.hermitian());
      terms[i] = rule.weights[i] * (1.0 - s) * petz_form(spec, es, delta, delta).real();
    }
    return pairwise_sum(terms);
  };

  int n = nodes;
  double value = estimate(n);
  double change = std::numeric_limits<double>::infinity();
  while (2 * n <= tol::quadrature_node_cap) {
    const double next = estimate(2 * n);
    change = std::abs(next - value);
    value = next;
    n *= 2;
    if (change < tol::quadrature_converged) return {value, n, change, true};
  }
  return {value, n, change, false};
}

}  // namespace qdiv

#include "qdiv/asymptotics.hpp"

namespace qdiv {

namespace {

void same_dim(const DensityMatrix& a, const DensityMatrix& b, const char* what) {
  if (a.dim() != b.dim()) raise<DimensionMismatch>(what, ": dimension ", a.dim(), " vs ", b.dim());
}

struct Split {
  EigenSystemD es;
  double zero;  // eigenvalues <= zero count as non-positive
};

// Spectrum of rho^n - e^{na} sigma^n with the scale-aware zero level.
Split difference_spectrum(const DensityMatrix& rho_n, const DensityMatrix& sigma_n, double e) {
  const double scale = rho_n.eigensystem().values.maxCoeff() + e * sigma_n.eigensystem().values.maxCoeff();
  return {eigh(rho_n.hermitian() - e * sigma_n.hermitian()), tol::np_zero_relative * scale};
}

ComplexMatrix columns_where(const EigenSystemD& es, bool positive, double zero) {
  std::vector<Index> keep;
  for (Index i = 0; i < es.dim(); ++i)
    if ((es.values(i) > zero) == positive) keep.push_back(i);
  ComplexMatrix v(es.dim(), static_cast<Index>(keep.size()));
  for (size_t k = 0; k < keep.size(); ++k) v.col(static_cast<Index>(k)) = es.vectors.col(keep[k]);
  return v;
}

// tr V^dag s V
double weight_on(const ComplexMatrix& v, const DensityMatrix& s) {
  if (v.cols() == 0) return 0.0;
  if (s.hermitian().is_diagonal()) return s.matrix().diagonal().real().dot(v.cwiseAbs2().rowwise().sum());
  return (v.conjugate().cwiseProduct(s.matrix() * v)).sum().real();
}

double exp_rate(double a, int n) {
  const double e = std::exp(static_cast<double>(n) * a);
  if (!std::isfinite(e)) raise<DomainError>("e^{n a} overflows for n = ", n, ", a = ", a);
  return e;
}

// lambda_max(sigma^{-1/2} m sigma^{-1/2}) on sigma's support
double max_ratio(const HermitianMatrix& m, const DensityMatrix& sigma) {
  const EigenSystemD& es = sigma.eigensystem();
  const ComplexMatrix b = es.support_basis();
  const ComplexVector s = es.values.tail(b.cols()).cwiseSqrt().cwiseInverse().cast<cplx>();
  return eigh(HermitianMatrix::hermitian_part(s.asDiagonal() * (b.adjoint() * m.matrix() * b) * s.asDiagonal()))
      .values.maxCoeff();
}

}  // namespace

NeymanPearson np_projector(const DensityMatrix& rho_n, const DensityMatrix& sigma_n, double a, int n) {
  same_dim(rho_n, sigma_n, "np_projector");
  require_dimension(static_cast<long double>(rho_n.dim()), "np_projector");
  if (n < 1) raise<InvalidArgument>("np_projector: n must be positive");
  const Split sp = difference_spectrum(rho_n, sigma_n, exp_rate(a, n));
  const ComplexMatrix v = columns_where(sp.es, false, sp.zero);
  const double accept = weight_on(v, rho_n);
  const double type2 = 1.0 - weight_on(v, sigma_n);
  return {HermitianMatrix::hermitian_part(v * v.adjoint()), {a, accept, type2}};
}

SteinThreshold stein_threshold(const DensityMatrix& rho, const DensityMatrix& sigma, int n, double eps) {
  same_dim(rho, sigma, "stein_threshold");
  if (!(eps > 0 && eps < 1)) raise<InvalidArgument>("stein_threshold: eps = ", eps, " is not in (0, 1)");
  if (support_residual(rho, sigma) > tol::support_containment)
    raise<SupportError>("stein_threshold: supp rho is not contained in supp sigma");
  const DensityMatrix rho_n = tensor_power(rho, n);
  const DensityMatrix sigma_n = tensor_power(sigma, n);

  const double h = tol::grid_step;
  const long long stride = tol::grid_stride;
  const double top = dmax(rho, sigma).value();
  const ExtendedReal bottom = dmax(sigma, rho);
  const double lo = bottom.is_finite() ? -bottom.value() - tol::grid_margin : -std::abs(top) - 5.0;
  const long long lo_idx = static_cast<long long>(std::floor(lo / h));
  const long long hi_idx = static_cast<long long>(std::ceil((top + tol::grid_margin) / h)) + stride;

  SteinThreshold out{0, static_cast<double>(lo_idx) * h, static_cast<double>(hi_idx) * h, {}};
  auto passes = [&](long long k) {
    const double a = static_cast<double>(k) * h;
    const Split sp = difference_spectrum(rho_n, sigma_n, exp_rate(a, n));
    const ComplexMatrix v = columns_where(sp.es, false, sp.zero);
    const TestCurvePoint pt{a, weight_on(v, rho_n), 1.0 - weight_on(v, sigma_n)};
    out.scanned.push_back(pt);
    return pt.type1_accept >= 1.0 - eps;
  };

  long long k = lo_idx;
  while (k <= hi_idx && !passes(k)) k += stride;
  if (k > hi_idx)
    raise<ConvergenceError>("stein_threshold: no rate with type1_accept >= ", 1.0 - eps, " in [",
                            out.scan_lo, ", ", out.scan_hi, "]");
  for (long long j = std::max(lo_idx, k - stride + 1); j < k; ++j) {
    if (passes(j)) {
      out.threshold = static_cast<double>(j) * h;
      return out;
    }
  }
  out.threshold = static_cast<double>(k) * h;
  return out;
}

SmoothedState smooth_state(const DensityMatrix& rho_n, const DensityMatrix& sigma_n, double a, int n) {
  same_dim(rho_n, sigma_n, "smooth_state");
  if (n < 1) raise<InvalidArgument>("smooth_state: n must be positive");
  if (support_residual(rho_n, sigma_n) > tol::support_containment)
    raise<SupportError>("smooth_state: supp rho^n is not contained in supp sigma^n");
  const double e = exp_rate(a, n);
  const Split sp = difference_spectrum(rho_n, sigma_n, e);
  const ComplexMatrix neg = columns_where(sp.es, false, sp.zero);
  const ComplexMatrix pos = columns_where(sp.es, true, sp.zero);
  const RealVector pos_vals = sp.es.values.tail(pos.cols());
  const double epsilon = std::max(0.0, 1.0 - weight_on(neg, rho_n));

  const ComplexMatrix cut_part = pos * pos_vals.cast<cplx>().asDiagonal() * pos.adjoint();
  const HermitianMatrix cand = HermitianMatrix::hermitian_part(rho_n.matrix() - cut_part);
  HermitianMatrix cut = positive_part(eigh(cand));
  const double tr = cut.trace();
  if (tr < 1e-12) raise<DomainError>("smooth_state: degenerate smoothing, tr A_+ = ", tr);
  DensityMatrix state(cut / tr);

  const double dist = trace_norm(state.hermitian() - rho_n.hermitian());
  const double cert_total = std::log(max_ratio(state.hermitian(), sigma_n));
  const double cert = cert_total / n;
  const double margin = eigh(std::exp(cert_total) * sigma_n.hermitian() - state.hermitian()).values.minCoeff();
  if (margin < -tol::smoothing_psd * std::exp(cert_total))
    raise<ConvergenceError>("smooth_state: certificate check failed, margin ", margin);

  const bool trace_ok = dist <= 4.0 * std::sqrt(2.0 * epsilon) + tol::smoothing_bound_slack;
  const double s8 = std::sqrt(8.0 * epsilon);
  const bool rate_ok = s8 >= 1.0 || cert <= a + std::log(1.0 / (1.0 - s8)) / n + tol::smoothing_bound_slack;
  return {std::move(state), std::move(cut), a, epsilon, dist, cert, margin, trace_ok, rate_ok};
}

AsymptoticReverseTest asymptotic_reverse_test(const DensityMatrix& rho, const DensityMatrix& sigma, int n,
                                              double rate) {
  same_dim(rho, sigma, "asymptotic_reverse_test");
  if (!(rate >= 0))
    raise<PreconditionError>("asymptotic_reverse_test: rate ", rate,
                             " is infeasible; the minimal feasible rate is 0 (q(0) = e^{-n rate} <= 1)");
  const DensityMatrix rho_n = tensor_power(rho, n);
  const DensityMatrix sigma_n = tensor_power(sigma, n);
  const double e = exp_rate(rate, n);

  const SmoothedState sm = smooth_state(rho_n, sigma_n, rate, n);
  const HermitianMatrix& b = sm.cut;
  const double trb = b.trace();
  const double mu = std::min(1.0, e / max_ratio(b, sigma_n));
  const HermitianMatrix room = e * sigma_n.hermitian() - mu * b;
  const double tr_room = room.trace();
  HermitianMatrix phi0_m = mu * b;
  if (tr_room > 0 && 1.0 - mu * trb > 0) phi0_m = phi0_m + ((1.0 - mu * trb) / tr_room) * room;
  DensityMatrix phi0(phi0_m);

  const double q0 = 1.0 / e;
  const double q1 = 1.0 - q0;
  DensityMatrix phi1 = sigma_n;
  if (q1 > 1e-15) phi1 = DensityMatrix((sigma_n.hermitian() - q0 * phi0.hermitian()) / q1);

  Preparation prep({phi0, phi1});
  ClassicalDistribution p{1.0, 0.0};
  ClassicalDistribution q{q0, q1};
  FidelityReport rep{n, rate, 0, 0, 0, mu};
  rep.trace_distance = trace_norm(phi0.hermitian() - rho_n.hermitian());
  rep.sigma_residual = (q0 * phi0.matrix() + q1 * phi1.matrix() - sigma_n.matrix()).norm();
  rep.rate_certificate = std::log(max_ratio(phi0.hermitian(), sigma_n)) / n;
  return {std::move(prep), std::move(p), std::move(q), rep};
}

DensityMatrix ConversionChannel::apply(const DensityMatrix& input) const {
  return cq_apply(preparation, measure(test, input));
}

StateConversion state_conversion(const DensityMatrix& rho0, const DensityMatrix& sigma0, const DensityMatrix& rho,
                                 const DensityMatrix& sigma, int n, double c) {
  same_dim(rho0, sigma0, "state_conversion");
  same_dim(rho, sigma, "state_conversion");
  if (!(c > 0)) raise<PreconditionError>("state_conversion: c = ", c, " must be positive");
  const ExtendedReal d0 = umegaki(rho0, sigma0).value;
  const ExtendedReal d = umegaki(rho, sigma).value;
  if (!d.is_finite()) raise<PreconditionError>("state_conversion: D(rho||sigma) is infinite");
  if (d0.is_finite() && !(d0.value() > d.value() + 2 * c))
    raise<PreconditionError>("state_conversion: gap hypothesis D(rho0||sigma0) = ", d0.value(),
                             " > D(rho||sigma) + 2c = ", d.value() + 2 * c, " violated");

  const DensityMatrix rho0_n = tensor_power(rho0, n);
  const DensityMatrix sigma0_n = tensor_power(sigma0, n);
  const DensityMatrix rho_n = tensor_power(rho, n);
  const DensityMatrix sigma_n = tensor_power(sigma, n);
  const double a = d.value() + c;
  const NeymanPearson np = np_projector(rho0_n, sigma0_n, a, n);
  const HermitianMatrix accept = HermitianMatrix::identity(np.projector.dim()) - np.projector;
  Measurement test = Measurement::two_outcome(accept);
  const double p0 = 1.0 - np.point.type1_accept;
  const double q0 = np.point.type2;

  ConversionReport rep{n, c, a, p0, q0, ExtendedReal::plus_infinity(), 0, 0};
  std::vector<DensityMatrix> states;
  if (q0 > 0) {
    const double r = std::max(0.0, -std::log(q0) / n);
    rep.reverse_rate = ExtendedReal::finite(r);
    AsymptoticReverseTest art = asymptotic_reverse_test(rho, sigma, n, r);
    states = art.preparation.states();
  } else {
    states = {rho_n, sigma_n};
  }
  ConversionChannel ch{std::move(test), Preparation(std::move(states))};
  rep.sigma_residual = (ch.apply(sigma0_n).matrix() - sigma_n.matrix()).norm();
  rep.rho_distance = trace_norm(ch.apply(rho0_n).hermitian() - rho_n.hermitian());
  return {std::move(ch), rep};
}

}  // namespace qdiv

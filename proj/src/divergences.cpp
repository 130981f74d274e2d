#include "qdiv/divergences.hpp"

#include <limits>
#include <ostream>

namespace qdiv {

ExtendedReal ExtendedReal::finite(double v) {
  if (!std::isfinite(v)) raise<DomainError>("ExtendedReal::finite: non-finite value");
  return ExtendedReal(Kind::finite, v);
}

double ExtendedReal::value() const {
  if (kind_ != Kind::finite) raise<DomainError>("ExtendedReal: value is ", to_string());
  return v_;
}

std::string ExtendedReal::to_string() const {
  switch (kind_) {
    case Kind::plus_infinity:
      return "+inf";
    case Kind::minus_infinity:
      return "-inf";
    default:
      return detail::concat(v_);
  }
}

std::ostream& operator<<(std::ostream& os, const ExtendedReal& x) {
  if (x.is_finite()) return os << x.value();
  return os << x.to_string();
}

const char* to_string(SupportCondition s) {
  switch (s) {
    case SupportCondition::contained:
      return "contained";
    case SupportCondition::equal:
      return "equal";
    default:
      return "violated";
  }
}

namespace {

void same_dim(const DensityMatrix& a, const DensityMatrix& b, const char* what) {
  if (a.dim() != b.dim()) raise<DimensionMismatch>(what, ": dimension ", a.dim(), " vs ", b.dim());
}

double residual_outside(const ComplexMatrix& m, const ComplexMatrix& projector) {
  const ComplexMatrix c = ComplexMatrix::Identity(m.rows(), m.cols()) - projector;
  return (c * m * c).norm();
}

// sum over the support of lambda ln lambda
double entropy_term(const EigenSystemD& es) {
  const double cut = es.cutoff();
  double s = 0;
  for (Index i = 0; i < es.dim(); ++i)
    if (es.values(i) > cut) s += es.values(i) * std::log(es.values(i));
  return s;
}

}  // namespace

double support_residual(const DensityMatrix& rho, const DensityMatrix& sigma) {
  same_dim(rho, sigma, "support_residual");
  return residual_outside(rho.matrix(), sigma.eigensystem().support_projector());
}

SupportCondition support_condition(const DensityMatrix& rho, const DensityMatrix& sigma) {
  if (support_residual(rho, sigma) > tol::support_containment) return SupportCondition::violated;
  if (rho.rank() == sigma.rank() && support_residual(sigma, rho) <= tol::support_containment)
    return SupportCondition::equal;
  return SupportCondition::contained;
}

ExtendedReal kl(const ClassicalDistribution& p, const ClassicalDistribution& q) {
  if (p.size() != q.size()) raise<DimensionMismatch>("kl: lengths ", p.size(), " and ", q.size());
  double s = 0;
  for (Index x = 0; x < p.size(); ++x) {
    if (p[x] <= 0) continue;
    if (q[x] <= 0) return ExtendedReal::plus_infinity();
    s += p[x] * (std::log(p[x]) - std::log(q[x]));
  }
  return ExtendedReal::finite(s);
}

DivergenceReport umegaki(const DensityMatrix& rho, const DensityMatrix& sigma) {
  same_dim(rho, sigma, "umegaki");
  const SupportCondition cond = support_condition(rho, sigma);
  if (cond == SupportCondition::violated)
    return {ExtendedReal::plus_infinity(), cond,
            {detail::concat("support residual ", support_residual(rho, sigma))}};
  const EigenSystemD& es = sigma.eigensystem();
  const ComplexMatrix b = es.support_basis();
  const RealVector mu = es.values.tail(b.cols());
  const RealVector weights = (b.adjoint() * rho.matrix() * b).diagonal().real();
  double cross = 0;
  for (Index k = 0; k < b.cols(); ++k) cross += weights(k) * std::log(mu(k));
  return {ExtendedReal::finite(entropy_term(rho.eigensystem()) - cross), cond, {}};
}

DivergenceReport rld_entropy(const DensityMatrix& rho, const DensityMatrix& sigma) {
  same_dim(rho, sigma, "rld_entropy");
  const SupportCondition cond = support_condition(rho, sigma);
  if (cond == SupportCondition::violated)
    return {ExtendedReal::plus_infinity(), cond,
            {detail::concat("support residual ", support_residual(rho, sigma))}};
  // Work in rho's support eigenframe: sqrt(rho) sigma^+ sqrt(rho) restricted
  // there is L^{1/2} E^dag sigma^+ E L^{1/2}.
  const EigenSystemD& er = rho.eigensystem();
  const ComplexMatrix e = er.support_basis();
  const RealVector lam = er.values.tail(e.cols());
  const ComplexMatrix sinv = pseudo_inverse(sigma.eigensystem()).matrix();
  const ComplexVector half = lam.cwiseSqrt().cast<cplx>();
  const ComplexMatrix m = half.asDiagonal() * (e.adjoint() * sinv * e) * half.asDiagonal();
  const HermitianMatrix lnm = log_matrix(eigh(HermitianMatrix::hermitian_part(m)));
  const double v = lam.dot(lnm.matrix().diagonal().real());
  return {ExtendedReal::finite(v), cond, {}};
}

ExtendedReal fidelity_logdiv(const DensityMatrix& rho, const DensityMatrix& sigma) {
  same_dim(rho, sigma, "fidelity_logdiv");
  const ComplexMatrix prod =
      sqrt_psd(rho.eigensystem()).matrix() * sqrt_psd(sigma.eigensystem()).matrix();
  const double f = trace_norm(prod);
  if (f <= tol::fidelity_zero) return ExtendedReal::minus_infinity();
  return ExtendedReal::finite(std::log(f));
}

ExtendedReal dmax(const DensityMatrix& rho, const DensityMatrix& sigma) {
  same_dim(rho, sigma, "dmax");
  if (support_residual(rho, sigma) > tol::support_containment) return ExtendedReal::plus_infinity();
  const EigenSystemD& es = sigma.eigensystem();
  const ComplexMatrix b = es.support_basis();
  const ComplexVector s = es.values.tail(b.cols()).cwiseSqrt().cwiseInverse().cast<cplx>();
  const ComplexMatrix m = s.asDiagonal() * (b.adjoint() * rho.matrix() * b) * s.asDiagonal();
  const double top = eigh(HermitianMatrix::hermitian_part(m)).values.maxCoeff();
  return ExtendedReal::finite(std::log(top));
}

namespace {

constexpr double kProbabilityFloor = 1e-14;

// KL of the outcome statistics of the basis U; +inf encoded for ranking only.
double basis_score(const ComplexMatrix& u, const ComplexMatrix& rho, const ComplexMatrix& sigma) {
  const RealVector p = (u.adjoint() * rho * u).diagonal().real();
  const RealVector q = (u.adjoint() * sigma * u).diagonal().real();
  double s = 0;
  for (Index k = 0; k < p.size(); ++k) {
    if (p(k) <= kProbabilityFloor) continue;
    if (q(k) <= kProbabilityFloor) return std::numeric_limits<double>::infinity();
    s += p(k) * (std::log(p(k)) - std::log(q(k)));
  }
  return s;
}

ComplexMatrix random_direction(Index d, std::mt19937_64& rng) {
  const ComplexMatrix g = ginibre(d, d, rng);
  ComplexMatrix h = (g + g.adjoint()) / 2.0;
  return h / h.norm();
}

ComplexMatrix unitary_step(const ComplexMatrix& h, double step) {
  const EigenSystemD es = eigh(HermitianMatrix::hermitian_part(h));
  ComplexVector ph(es.dim());
  for (Index i = 0; i < es.dim(); ++i) ph(i) = std::polar(1.0, step * es.values(i));
  return es.vectors * ph.asDiagonal() * es.vectors.adjoint();
}

}  // namespace

MeasuredDivergence measured_div_lower(const DensityMatrix& rho, const DensityMatrix& sigma,
                                      int budget, std::uint64_t seed) {
  same_dim(rho, sigma, "measured_div_lower");
  if (budget < 1) raise<InvalidArgument>("measured_div_lower: budget must be positive");
  const Index d = rho.dim();
  const ComplexMatrix& r = rho.matrix();
  const ComplexMatrix& s = sigma.matrix();
  std::mt19937_64 rng(seed);

  int used = 0;
  ComplexMatrix best_u = rho.eigensystem().vectors;
  double best = -std::numeric_limits<double>::infinity();
  auto consider = [&](const ComplexMatrix& u) {
    ++used;
    const double v = basis_score(u, r, s);
    if (v > best) {
      best = v;
      best_u = u;
    }
    return v;
  };

  std::vector<ComplexMatrix> starts{rho.eigensystem().vectors, sigma.eigensystem().vectors};
  if (rho.full_rank() && sigma.full_rank()) {
    const HermitianMatrix g = log_matrix(rho.eigensystem()) - log_matrix(sigma.eigensystem());
    starts.push_back(eigh(g).vectors);
  } else {
    starts.push_back(eigh(rho.hermitian() - sigma.hermitian()).vectors);
  }
  for (const auto& u : starts) {
    if (used >= budget) break;
    consider(u);
  }

  // Local search from the best structured start, then from Haar restarts.
  auto local_search = [&](ComplexMatrix u, double value, int allowance) {
    double step = 0.3;
    for (int i = 0; i < allowance && used < budget && step > 1e-7; ++i) {
      const ComplexMatrix cand = u * unitary_step(random_direction(d, rng), step);
      const double v = consider(cand);
      if (v > value) {
        u = cand;
        value = v;
        step *= 1.5;
      } else {
        step *= 0.8;
      }
    }
  };
  if (d > 1 && std::isfinite(best)) {
    local_search(best_u, best, (budget - used) / 2);
    while (used < budget) {
      const ComplexMatrix u = random_unitary(d, rng());
      const double v = consider(u);
      local_search(u, v, 60);
    }
  }

  ExtendedReal value = std::isfinite(best) ? ExtendedReal::finite(best) : ExtendedReal::plus_infinity();
  return {value, Measurement::projective(best_u), used};
}

}  // namespace qdiv

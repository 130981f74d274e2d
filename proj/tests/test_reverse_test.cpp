#include <doctest.h>

#include "qdiv/fixtures.hpp"
#include "qdiv/reverse_test.hpp"

using namespace qdiv;

namespace {

RealVector rv(std::initializer_list<double> v) {
  RealVector out(static_cast<Index>(v.size()));
  Index i = 0;
  for (double x : v) out(i++) = x;
  return out;
}

double rld(const DensityMatrix& a, const DensityMatrix& b) { return rld_entropy(a, b).value.value(); }

}  // namespace

TEST_CASE("parallel decomposition of a commuting pair is the standard frame") {
  const DensityMatrix r = DensityMatrix::diagonal(rv({0.6, 0.4}));
  const DensityMatrix s = DensityMatrix::diagonal(rv({0.3, 0.7}));
  const ParallelDecomposition pd = parallel_decomposition(r, s);
  REQUIRE(pd.frame.size() == 2);
  for (size_t x = 0; x < 2; ++x) {
    Index k;
    pd.frame[x].cwiseAbs().maxCoeff(&k);
    CHECK(std::abs(pd.frame[x](k)) == doctest::Approx(1.0));
    CHECK(pd.p[static_cast<Index>(x)] == doctest::Approx(r.matrix()(k, k).real()));
    CHECK(pd.q[static_cast<Index>(x)] == doctest::Approx(s.matrix()(k, k).real()));
  }
}

TEST_CASE("parallel decomposition with rho = sigma") {
  const DensityMatrix r = random_density(3, 3, 1);
  const ParallelDecomposition pd = parallel_decomposition(r, r);
  CHECK((pd.p.probs() - pd.q.probs()).norm() < 1e-10);
  CHECK(optimal_reverse_test(r, r).input_kl == doctest::Approx(0.0));
}

TEST_CASE("fixture pairs: reconstruction and kl = rld entropy") {
  for (const auto& name : fixture_names()) {
    const FixturePair fx = fixture_pair(name);
    const ParallelDecomposition pd = parallel_decomposition(fx.rho, fx.sigma);
    CHECK((pd.combine(pd.p.probs()).matrix() - fx.rho.matrix()).norm() <= 1e-10);
    CHECK((pd.combine(pd.q.probs()).matrix() - fx.sigma.matrix()).norm() <= 1e-10);
    for (double t : {0.2, 0.5, 0.9})
      CHECK((pd.combine(t * pd.p.probs() + (1 - t) * pd.q.probs()).matrix() - mix(t, fx.rho, fx.sigma).matrix())
                .norm() <= 1e-10);
    const ReverseTest rt = optimal_reverse_test(fx.rho, fx.sigma);
    CHECK(std::abs(rt.input_kl - rld(fx.rho, fx.sigma)) <= 1e-8);
    CHECK(reverse_test_residual(rt, fx.rho, fx.sigma) <= 1e-9);
    CHECK(rt.frame.size() == static_cast<size_t>(fx.rho.dim()));
  }
}

TEST_CASE("unequal supports are rejected") {
  const DensityMatrix r = DensityMatrix::diagonal(rv({1, 0}));
  const DensityMatrix s = DensityMatrix::diagonal(rv({0.5, 0.5}));
  try {
    optimal_reverse_test(r, s);
    FAIL("expected a support error");
  } catch (const SupportError& e) {
    CHECK(std::string(e.what()).find("rank") != std::string::npos);
  }
  // equal but deficient supports are fine: restrict to the common support
  ComplexMatrix v = ComplexMatrix::Zero(3, 2);
  v(0, 0) = 1;
  v(1, 1) = 1;
  const DensityMatrix a(HermitianMatrix::hermitian_part(v * random_density(2, 2, 3).matrix() * v.adjoint()));
  const DensityMatrix b(HermitianMatrix::hermitian_part(v * random_density(2, 2, 4).matrix() * v.adjoint()));
  const ReverseTest rt = optimal_reverse_test(a, b);
  CHECK(rt.frame.size() == 2);
  CHECK(std::abs(rt.input_kl - rld(a, b)) <= 1e-8);
  CHECK(reverse_test_residual(rt, a, b) <= 1e-9);
}

TEST_CASE("random pairs and channel-composed competitors") {
  for (std::uint64_t s = 0; s < 100; ++s) {
    const Index d = 2 + static_cast<Index>(s % 2);
    const DensityMatrix r = random_density(d, d, derive_seed(s, 1));
    const DensityMatrix t = random_density(d, d, derive_seed(s, 2));
    const ReverseTest rt = optimal_reverse_test(r, t);
    CHECK(std::abs(rt.input_kl - rld(r, t)) <= 1e-8);
    CHECK(reverse_test_residual(rt, r, t) <= 1e-9);
    if (s < 50) {
      const DensityMatrix br = random_density(d + 1, d + 1, derive_seed(s, 3));
      const DensityMatrix bt = random_density(d + 1, d + 1, derive_seed(s, 4));
      const QuantumChannel ch = random_cptp(d + 1, d, 2, derive_seed(s, 5));
      const ReverseTest comp = post_compose(ch, optimal_reverse_test(br, bt));
      const DensityMatrix cr = apply_channel(ch, br), ct = apply_channel(ch, bt);
      CHECK(reverse_test_residual(comp, cr, ct) <= 1e-9);
      CHECK(comp.input_kl >= optimal_reverse_test(cr, ct).input_kl - 1e-8);
    }
  }
}

TEST_CASE("reverse estimation") {
  const DensityMatrix half = DensityMatrix::maximally_mixed(2);
  const TangentDirection x(HermitianMatrix::diagonal(rv({0.1, -0.1})));
  CHECK(reverse_estimation_1param(half, x).input_fisher == doctest::Approx(0.04));
  const ReverseEstimation z = reverse_estimation_1param(half, TangentDirection::zero(2));
  CHECK(z.input_fisher == 0.0);
  CHECK(z.dp.norm() == 0.0);

  for (std::uint64_t s = 0; s < 30; ++s) {
    const DensityMatrix r = random_density(3, 3, derive_seed(s, 1));
    const TangentDirection t = random_tangent(3, derive_seed(s, 2));
    const double jr = petz_metric(MonotoneMetricSpec::rld(), r, t);
    const ReverseEstimation est = reverse_estimation_1param(r, t);
    CHECK(std::abs(est.input_fisher - jr) <= 1e-8 * std::max(1.0, jr));
    CHECK(reverse_estimation_residual(est, r, t) <= 1e-10);
    for (Index extra : {1, 3}) {
      const ReverseEstimation dil = dilated_reverse_estimation(r, t, extra, derive_seed(s, 3 + extra));
      CHECK(reverse_estimation_residual(dil, r, t) <= 1e-9);
      CHECK(dil.input_fisher >= jr - 1e-8 * std::max(1.0, jr));
    }
  }

  // RLD nonexistence on a singular state with an off-support tangent
  ComplexMatrix m = ComplexMatrix::Zero(2, 2);
  m(0, 1) = m(1, 0) = 0.1;
  CHECK_THROWS_AS(reverse_estimation_1param(DensityMatrix::diagonal(rv({1, 0})), TangentDirection(HermitianMatrix(m))),
                  SupportError);
}

TEST_CASE("parallel family fisher identity") {
  for (std::uint64_t s = 0; s < 20; ++s) {
    const DensityMatrix r = random_density(3, 3, derive_seed(s, 7));
    const DensityMatrix t = random_density(3, 3, derive_seed(s, 8));
    const ParallelDecomposition pd = parallel_decomposition(r, t);
    const TangentDirection delta = TangentDirection::difference(r, t);
    for (double w : {0.1, 0.5, 0.8}) {
      const double cf = classical_fisher(ClassicalDistribution(w * pd.p.probs() + (1 - w) * pd.q.probs()),
                                         RealVector(pd.p.probs() - pd.q.probs()))
                            .value();
      const double jr = petz_metric(MonotoneMetricSpec::rld(), mix(w, r, t), delta);
      CHECK(std::abs(cf - jr) <= 1e-8 * std::max(1.0, jr));
    }
  }
}

#include <doctest.h>

#include <algorithm>
#include <cstdlib>

#include "qdiv/quantum.hpp"

using namespace qdiv;

namespace {

RealVector rv(std::initializer_list<double> v) {
  RealVector out(static_cast<Index>(v.size()));
  Index i = 0;
  for (double x : v) out(i++) = x;
  return out;
}

double dist(const ComplexMatrix& a, const ComplexMatrix& b) { return (a - b).norm(); }

}  // namespace

TEST_CASE("density matrix validation") {
  CHECK_NOTHROW(DensityMatrix::diagonal(rv({0.25, 0.75})));
  CHECK_THROWS_AS(DensityMatrix::diagonal(rv({0.5, 0.6})), InvalidArgument);
  CHECK_THROWS_AS(DensityMatrix::diagonal(rv({1.1, -0.1})), InvalidArgument);
  // roundoff-sized negative eigenvalues are clipped
  const DensityMatrix r = DensityMatrix::diagonal(rv({1.0 + 1e-13, -1e-13}));
  CHECK(r.eigensystem().values.minCoeff() >= 0);
  CHECK(r.rank() == 1);
  CHECK(DensityMatrix::maximally_mixed(3).full_rank());
}

TEST_CASE("tangent, distribution and channel validation") {
  CHECK_THROWS_AS(TangentDirection(HermitianMatrix::identity(2)), InvalidArgument);
  CHECK_NOTHROW(TangentDirection(HermitianMatrix::diagonal(rv({0.1, -0.1}))));
  CHECK_THROWS_AS(ClassicalDistribution({0.5, 0.6}), InvalidArgument);
  CHECK_THROWS_AS(ClassicalDistribution({1.5, -0.5}), InvalidArgument);
  CHECK_NOTHROW(ClassicalDistribution({1.0, 0.0}));
  std::vector<ComplexMatrix> bad{ComplexMatrix::Identity(2, 2) * 0.9};
  CHECK_THROWS_AS(QuantumChannel(2, 2, bad), InvalidArgument);
}

TEST_CASE("apply_channel examples") {
  const DensityMatrix rho = random_density(3, 3, 42);
  CHECK(dist(apply_channel(QuantumChannel::identity(3), rho).matrix(), rho.matrix()) < 1e-14);
  CHECK(dist(apply_channel(QuantumChannel::completely_depolarizing(3), rho).matrix(),
             DensityMatrix::maximally_mixed(3).matrix()) < 1e-12);
  for (std::uint64_t s = 0; s < 500; ++s) {
    const Index d = 2 + static_cast<Index>(s % 3);
    const QuantumChannel ch = random_cptp(d, d, 1 + static_cast<Index>(s % 3), 1000 + s);
    const DensityMatrix out = apply_channel(ch, random_density(d, d, 2000 + s));
    CHECK(std::abs(out.hermitian().trace() - 1) < 1e-10);
    CHECK(out.eigensystem().values.minCoeff() >= 0);
  }
}

TEST_CASE("apply_channel_tangent examples") {
  const TangentDirection x = random_tangent(3, 7);
  CHECK(dist(apply_channel_tangent(QuantumChannel::identity(3), x).matrix(), x.matrix()) < 1e-14);
  const QuantumChannel ch = random_cptp(3, 2, 2, 8);
  CHECK(apply_channel_tangent(ch, TangentDirection::zero(3)).matrix().norm() < 1e-15);
  const TangentDirection ux = apply_channel_tangent(QuantumChannel::unitary(random_unitary(3, 9)), x);
  CHECK(std::abs(ux.matrix().trace()) < 1e-12);
  const RealVector a = eigh(ux.hermitian()).values;
  const RealVector b = eigh(x.hermitian()).values;
  CHECK((a - b).norm() < 1e-12);
}

TEST_CASE("cq_apply and measure examples") {
  const DensityMatrix r0 = random_density(2, 2, 1);
  const DensityMatrix r1 = random_density(2, 2, 2);
  const Preparation prep({r0, r1});
  CHECK(dist(cq_apply(prep, ClassicalDistribution::point_mass(2, 1)).matrix(), r1.matrix()) < 1e-15);
  const Preparation same({r0, r0});
  CHECK(dist(cq_apply(same, ClassicalDistribution({0.5, 0.5})).matrix(), r0.matrix()) < 1e-15);
  CHECK_THROWS_AS(cq_apply(prep, ClassicalDistribution({0.2, 0.3, 0.5})), DimensionMismatch);

  const Measurement trivial({HermitianMatrix::identity(2)});
  CHECK(measure(trivial, r0)[0] == doctest::Approx(1.0));
  const DensityMatrix dg = DensityMatrix::diagonal(rv({0.2, 0.3, 0.5}));
  const ClassicalDistribution p = measure(Measurement::projective(ComplexMatrix::Identity(3, 3)), dg);
  CHECK((p.probs() - rv({0.2, 0.3, 0.5})).norm() < 1e-15);

  // random rank-1 POVM from an isometry
  const QuantumChannel iso = random_cptp(3, 6, 1, 77);
  std::vector<HermitianMatrix> effects;
  for (Index k = 0; k < 6; ++k) {
    const ComplexMatrix row = iso.kraus()[0].row(k);
    effects.push_back(HermitianMatrix::hermitian_part(row.adjoint() * row));
  }
  const ClassicalDistribution q = measure(Measurement(effects), random_density(3, 3, 78));
  CHECK(q.probs().minCoeff() >= -1e-12);
  CHECK(std::abs(q.probs().sum() - 1) < 1e-12);
}

TEST_CASE("tensor powers") {
  const DensityMatrix rho = random_density(2, 2, 3);
  CHECK(dist(tensor_power(rho, 1).matrix(), rho.matrix()) < 1e-15);
  const DensityMatrix d2 = tensor_power(DensityMatrix::diagonal(rv({0.3, 0.7})), 2);
  CHECK((d2.matrix().diagonal().real() - rv({0.09, 0.21, 0.21, 0.49})).norm() < 1e-15);

  const RealVector l = rho.eigensystem().values;
  std::vector<double> triples;
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j)
      for (int k = 0; k < 2; ++k) triples.push_back(l(i) * l(j) * l(k));
  std::sort(triples.begin(), triples.end());
  const RealVector got = eigh(tensor_power(rho, 3).hermitian()).values;
  for (int i = 0; i < 8; ++i) CHECK(std::abs(got(i) - triples[i]) < 1e-14);
  // the cached eigensystem of a tensor power agrees with a fresh one
  CHECK((tensor_power(rho, 3).eigensystem().values - got).norm() < 1e-14);

  CHECK(dist(tensor_power(rho, 5).matrix(), tensor_product(tensor_power(rho, 2), tensor_power(rho, 3)).matrix()) <
        1e-12);
}

TEST_CASE("dimension cap") {
  const DensityMatrix rho = random_density(2, 2, 4);
  try {
    tensor_power(rho, 13);
    FAIL("expected a resource error");
  } catch (const ResourceError& e) {
    CHECK(std::string(e.what()).find("8192") != std::string::npos);
  }
  setenv("QDIV_DIM_CAP", "16", 1);
  CHECK(dimension_cap() == 16);
  CHECK_THROWS_AS(tensor_power(rho, 5), ResourceError);
  unsetenv("QDIV_DIM_CAP");
  CHECK(dimension_cap() == 4096);
}

TEST_CASE("random generators") {
  const DensityMatrix pure = random_density(3, 1, 5);
  CHECK(pure.rank() == 1);
  CHECK(pure.eigensystem().values(2) == doctest::Approx(1.0));
  for (std::uint64_t s = 0; s < 50; ++s) {
    const QuantumChannel ch = random_cptp(3, 2, 3, s);
    ComplexMatrix sum = ComplexMatrix::Zero(3, 3);
    for (const auto& k : ch.kraus()) sum += k.adjoint() * k;
    CHECK((sum - ComplexMatrix::Identity(3, 3)).norm() < 1e-10);
  }
  CHECK(random_density(3, 2, 99).matrix() == random_density(3, 2, 99).matrix());
  CHECK(random_tangent(4, 99).matrix() == random_tangent(4, 99).matrix());
  CHECK(random_cptp(2, 2, 2, 99).kraus()[1] == random_cptp(2, 2, 2, 99).kraus()[1]);
  CHECK(random_density(3, 3, 1).matrix() != random_density(3, 3, 2).matrix());
  CHECK_THROWS_AS(random_density(3, 4, 1), InvalidArgument);
  CHECK_THROWS_AS(random_cptp(2, 2, 0, 1), InvalidArgument);
}

TEST_CASE("fuzzed constructors never violate invariants") {
  for (std::uint64_t s = 0; s < 1000; ++s) {
    const Index d = 2 + static_cast<Index>(s % 4);
    const DensityMatrix r = random_density(d, 1 + static_cast<Index>(s % d), s);
    CHECK(std::abs(r.hermitian().trace() - 1) <= 1e-10);
    CHECK(r.eigensystem().values.minCoeff() >= 0);
    const TangentDirection x = random_tangent(d, s);
    CHECK(std::abs(x.matrix().trace()) <= 1e-10);
  }
}

TEST_CASE("seed derivation") {
  CHECK(derive_seed(1, 0) != derive_seed(1, 1));
  CHECK(derive_seed(1, 0) != derive_seed(2, 0));
  CHECK(derive_seed(7, 3) == splitmix64(7 ^ splitmix64(3)));
}

#include "suites.hpp"

#include <algorithm>
#include <cmath>
#include <random>

#include "qdiv/asymptotics.hpp"
#include "qdiv/fixtures.hpp"
#include "qdiv/reverse_test.hpp"

namespace qdiv::detail {

namespace {

std::string tag(Index d) { return "[d=" + std::to_string(d) + "]"; }

double uniform01(std::mt19937_64& rng) { return static_cast<double>(rng() >> 11) * 0x1.0p-53; }

RealVector random_probs(Index d, std::mt19937_64& rng) {
  RealVector v(d);
  for (Index i = 0; i < d; ++i) v(i) = -std::log(1.0 - uniform01(rng));
  return v / v.sum();
}

std::string digest_of(const std::vector<const DensityMatrix*>& states, const TangentDirection* x = nullptr,
                      const QuantumChannel* ch = nullptr) {
  std::vector<const ComplexMatrix*> m;
  for (const auto* st : states) m.push_back(&st->matrix());
  if (x) m.push_back(&x->matrix());
  if (ch)
    for (const auto& k : ch->kraus()) m.push_back(&k);
  return inputs_digest(m);
}

std::vector<MonotoneMetricSpec> standard_specs() {
  return {MonotoneMetricSpec::sld(), MonotoneMetricSpec::wigner_yanase(), MonotoneMetricSpec::alpha(0.5),
          MonotoneMetricSpec::bkm(), MonotoneMetricSpec::rld()};
}

double finite(const ExtendedReal& x) { return x.value(); }

void monotonicity(TrialContext& ctx) {
  for (int d : ctx.config().dims) {
    const std::uint64_t s = derive_seed(ctx.seed(), static_cast<std::uint64_t>(d));
    const DensityMatrix rho = random_density(d, d, derive_seed(s, 1));
    const DensityMatrix sigma = random_density(d, d, derive_seed(s, 2));
    const QuantumChannel ch = random_cptp(d, d, 2, derive_seed(s, 3));
    const TangentDirection x = random_tangent(d, derive_seed(s, 4));
    const std::string dg = digest_of({&rho, &sigma}, &x, &ch);
    const DensityMatrix lr = apply_channel(ch, rho);
    const DensityMatrix ls = apply_channel(ch, sigma);
    const TangentDirection lx = apply_channel_tangent(ch, x);
    const double t = ctx.tol("data_processing");

    ctx.le("umegaki.data_processing" + tag(d), finite(umegaki(lr, ls).value), finite(umegaki(rho, sigma).value) + t, dg);
    const double dr_out = finite(rld_entropy(lr, ls).value);
    ctx.le("rld.data_processing" + tag(d), dr_out, finite(rld_entropy(rho, sigma).value) + t, dg);
    ctx.le("dmax.data_processing" + tag(d), finite(dmax(lr, ls)), finite(dmax(rho, sigma)) + t, dg);

    for (const auto& spec : standard_specs()) {
      const double in = petz_metric(spec, rho, x);
      const double out = petz_metric(spec, lr, lx);
      ctx.le("metric." + spec.name() + ".data_processing" + tag(d), out,
             in + ctx.tol("metric_monotone") * std::max(1.0, in), dg);
    }

    // The optimal test for the inputs, pushed through the channel, witnesses
    // a reverse test for the outputs with the input KL unchanged.
    const ReverseTest w = post_compose(ch, optimal_reverse_test(rho, sigma));
    ctx.le("rld.witness.reconstruction" + tag(d), reverse_test_residual(w, lr, ls), ctx.tol("reconstruction"), dg);
    ctx.le("rld.witness.kl" + tag(d), dr_out, w.input_kl + t, dg);
  }
}

void sandwich(TrialContext& ctx) {
  for (int d : ctx.config().dims) {
    const std::uint64_t s = derive_seed(ctx.seed(), static_cast<std::uint64_t>(d));
    const DensityMatrix rho = random_density(d, d, derive_seed(s, 1));
    const DensityMatrix sigma = random_density(d, d, derive_seed(s, 2));
    const std::string dg = digest_of({&rho, &sigma});
    const double t = ctx.tol("sandwich");
    const double du = finite(umegaki(rho, sigma).value);
    const double dr = finite(rld_entropy(rho, sigma).value);
    const auto md = measured_div_lower(rho, sigma, static_cast<int>(ctx.tol("measured_budget")), derive_seed(s, 3));
    ctx.le("measured<=umegaki" + tag(d), finite(md.value), du + t, dg);
    ctx.le("umegaki<=rld" + tag(d), du, dr + t, dg);

    const DensityMatrix rho2 = random_density(2, 2, derive_seed(s, 4));
    const DensityMatrix sigma2 = random_density(2, 2, derive_seed(s, 5));
    const DensityMatrix rr = tensor_product(rho, rho2);
    const DensityMatrix ss = tensor_product(sigma, sigma2);
    const std::string dg2 = digest_of({&rho, &sigma, &rho2, &sigma2});
    const double ta = ctx.tol("additivity");
    ctx.le("umegaki.additivity" + tag(d),
           std::abs(finite(umegaki(rr, ss).value) - du - finite(umegaki(rho2, sigma2).value)), ta, dg2);
    ctx.le("rld.additivity" + tag(d),
           std::abs(finite(rld_entropy(rr, ss).value) - dr - finite(rld_entropy(rho2, sigma2).value)), ta, dg2);
    ctx.le("dmax.additivity" + tag(d),
           std::abs(finite(dmax(rr, ss)) - finite(dmax(rho, sigma)) - finite(dmax(rho2, sigma2))), ta, dg2);

    // Commuting pair: a common eigenbasis rotated by a random unitary.
    std::mt19937_64 rng(derive_seed(s, 6));
    const RealVector p = random_probs(d, rng);
    const RealVector q = random_probs(d, rng);
    const ComplexMatrix u = random_unitary(d, derive_seed(s, 7));
    const DensityMatrix cp(HermitianMatrix::hermitian_part(u * p.cast<cplx>().asDiagonal() * u.adjoint()));
    const DensityMatrix cq(HermitianMatrix::hermitian_part(u * q.cast<cplx>().asDiagonal() * u.adjoint()));
    const std::string dg3 = digest_of({&cp, &cq});
    const double k = finite(kl(ClassicalDistribution(p), ClassicalDistribution(q)));
    const double tn = ctx.tol("normalization");
    ctx.le("umegaki.normalization" + tag(d), std::abs(finite(umegaki(cp, cq).value) - k), tn, dg3);
    ctx.le("rld.normalization" + tag(d), std::abs(finite(rld_entropy(cp, cq).value) - k), tn, dg3);
    const auto mc = measured_div_lower(cp, cq, static_cast<int>(ctx.tol("measured_budget")), derive_seed(s, 8));
    ctx.le("measured.normalization" + tag(d), std::abs(finite(mc.value) - k), tn, dg3);
  }
}

void joint_convexity(TrialContext& ctx) {
  for (int d : ctx.config().dims) {
    const std::uint64_t s = derive_seed(ctx.seed(), static_cast<std::uint64_t>(d));
    const DensityMatrix r0 = random_density(d, d, derive_seed(s, 1));
    const DensityMatrix s0 = random_density(d, d, derive_seed(s, 2));
    const DensityMatrix r1 = random_density(d, d, derive_seed(s, 3));
    const DensityMatrix s1 = random_density(d, d, derive_seed(s, 4));
    std::mt19937_64 rng(derive_seed(s, 5));
    const double lam = uniform01(rng);
    const double lhs = finite(rld_entropy(mix(lam, r0, r1), mix(lam, s0, s1)).value);
    const double rhs =
        lam * finite(rld_entropy(r0, s0).value) + (1 - lam) * finite(rld_entropy(r1, s1).value);
    ctx.le("rld.joint_convexity" + tag(d), lhs, rhs + ctx.tol("joint_convexity"),
           digest_of({&r0, &s0, &r1, &s1}), "lambda=" + std::to_string(lam));
  }
}

void reverse_test_optimality(TrialContext& ctx) {
  for (int d : ctx.config().dims) {
    const std::uint64_t s = derive_seed(ctx.seed(), static_cast<std::uint64_t>(d));
    const DensityMatrix rho = random_density(d, d, derive_seed(s, 1));
    const DensityMatrix sigma = random_density(d, d, derive_seed(s, 2));
    const std::string dg = digest_of({&rho, &sigma});
    const double dr = finite(rld_entropy(rho, sigma).value);
    const ReverseTest rt = optimal_reverse_test(rho, sigma);
    ctx.le("reverse_test.kl" + tag(d), std::abs(rt.input_kl - dr), ctx.tol("reverse_test_kl") * std::max(1.0, dr), dg);
    ctx.le("reverse_test.reconstruction" + tag(d), reverse_test_residual(rt, rho, sigma), ctx.tol("reconstruction"),
           dg);

    // Competitor: a reverse test for a larger pair pushed through a channel.
    const DensityMatrix big_r = random_density(d + 1, d + 1, derive_seed(s, 3));
    const DensityMatrix big_s = random_density(d + 1, d + 1, derive_seed(s, 4));
    const QuantumChannel ch = random_cptp(d + 1, d, 2, derive_seed(s, 5));
    const DensityMatrix tr = apply_channel(ch, big_r);
    const DensityMatrix ts = apply_channel(ch, big_s);
    const std::string dgc = digest_of({&big_r, &big_s}, nullptr, &ch);
    const ReverseTest comp = post_compose(ch, optimal_reverse_test(big_r, big_s));
    const double opt = optimal_reverse_test(tr, ts).input_kl;
    ctx.le("reverse_test.competitor_valid" + tag(d), reverse_test_residual(comp, tr, ts), ctx.tol("reconstruction"),
           dgc);
    ctx.ge("reverse_test.competitor_kl" + tag(d), comp.input_kl, opt - ctx.tol("reverse_test_kl"), dgc);

    // Along the segment between the frame distributions, the classical Fisher
    // information matches the RLD metric of the image.
    const ParallelDecomposition pd = parallel_decomposition(rho, sigma);
    std::mt19937_64 rng(derive_seed(s, 6));
    const double t = 0.1 + 0.8 * uniform01(rng);
    const RealVector pt = t * pd.p.probs() + (1 - t) * pd.q.probs();
    const RealVector dpt = pd.p.probs() - pd.q.probs();
    const double cf = finite(classical_fisher(ClassicalDistribution(pt), dpt));
    const DensityMatrix rho_t = mix(t, rho, sigma);
    const double jr = petz_metric(MonotoneMetricSpec::rld(), rho_t, TangentDirection::difference(rho, sigma));
    ctx.le("reverse_test.parallel_fisher" + tag(d), std::abs(cf - jr), ctx.tol("parallel_fisher") * std::max(1.0, jr),
           dg, "t=" + std::to_string(t));

    const TangentDirection x = random_tangent(d, derive_seed(s, 7));
    const std::string dgx = digest_of({&rho}, &x);
    const double jrx = petz_metric(MonotoneMetricSpec::rld(), rho, x);
    const ReverseEstimation est = reverse_estimation_1param(rho, x);
    const double te = ctx.tol("reverse_estimation") * std::max(1.0, jrx);
    ctx.le("reverse_estimation.fisher" + tag(d), std::abs(est.input_fisher - jrx), te, dgx);
    ctx.le("reverse_estimation.reconstruction" + tag(d), reverse_estimation_residual(est, rho, x),
           ctx.tol("reconstruction"), dgx);
    const ReverseEstimation dil = dilated_reverse_estimation(rho, x, d, derive_seed(s, 8));
    ctx.le("reverse_estimation.competitor_valid" + tag(d), reverse_estimation_residual(dil, rho, x),
           ctx.tol("reconstruction"), dgx);
    ctx.ge("reverse_estimation.competitor_fisher" + tag(d), dil.input_fisher, jrx - te, dgx);

    const SldMeasurement sm = sld_optimal_measurement(rho, x);
    ctx.le("sld.achievability" + tag(d), std::abs(sm.achieved - sm.sld_value),
           ctx.tol("sld_achievability") * std::max(1.0, sm.sld_value), dgx);
  }
}

void integral_identities(TrialContext& ctx) {
  for (int d : ctx.config().dims) {
    const std::uint64_t s = derive_seed(ctx.seed(), static_cast<std::uint64_t>(d));
    const DensityMatrix rho = random_density(d, d, derive_seed(s, 1));
    const DensityMatrix sigma = random_density(d, d, derive_seed(s, 2));
    const std::string dg = digest_of({&rho, &sigma});
    const double t = ctx.tol("integral_identity");
    const double du = finite(umegaki(rho, sigma).value);
    const double dr = finite(rld_entropy(rho, sigma).value);
    const QuadratureResult b = integral_divergence(MonotoneMetricSpec::bkm(), rho, sigma);
    const QuadratureResult r = integral_divergence(MonotoneMetricSpec::rld(), rho, sigma);
    const QuadratureResult l = integral_divergence(MonotoneMetricSpec::sld(), rho, sigma);
    auto note = [](const QuadratureResult& q) {
      return "nodes=" + std::to_string(q.nodes) + (q.converged ? "" : " unconverged");
    };
    ctx.le("integral.bkm=umegaki" + tag(d), std::abs(b.value - du), t * std::max(1.0, du), dg, note(b));
    ctx.le("integral.rld=rld_entropy" + tag(d), std::abs(r.value - dr), t * std::max(1.0, dr), dg, note(r));
    ctx.le("integral.rld=reverse_test_kl" + tag(d), std::abs(r.value - optimal_reverse_test(rho, sigma).input_kl),
           t * std::max(1.0, dr), dg, note(r));
    ctx.le("integral.sld<=umegaki" + tag(d), l.value, du + t, dg, note(l));
  }
}

void metric_ordering(TrialContext& ctx) {
  for (int d : ctx.config().dims) {
    const std::uint64_t s = derive_seed(ctx.seed(), static_cast<std::uint64_t>(d));
    const DensityMatrix rho = random_density(d, d, derive_seed(s, 1));
    const TangentDirection x = random_tangent(d, derive_seed(s, 2));
    const std::string dg = digest_of({&rho}, &x);
    const auto specs = standard_specs();  // increasing order
    std::vector<double> v;
    for (const auto& sp : specs) v.push_back(petz_metric(sp, rho, x));
    for (size_t i = 0; i + 1 < specs.size(); ++i)
      ctx.le("metric." + specs[i].name() + "<=" + specs[i + 1].name() + tag(d), v[i],
             v[i + 1] + ctx.tol("metric_order") * std::max(1.0, v[i + 1]), dg);

    std::mt19937_64 rng(derive_seed(s, 3));
    const double tc = ctx.tol("alpha_coincidence");
    for (int k = 0; k < 4; ++k) {
      const double xv = std::exp(6.0 * uniform01(rng) - 3.0);
      const std::string n = "x=" + std::to_string(xv);
      ctx.le("f_alpha(3)=f_rld", std::abs(f_alpha(xv, 3.0) - MonotoneMetricSpec::rld().f(xv)), tc, dg, n);
      ctx.le("f_alpha(1)=f_bkm", std::abs(f_alpha(xv, 1.0) - MonotoneMetricSpec::bkm().f(xv)), tc, dg, n);
      ctx.le("f_alpha(0)=f_wy", std::abs(f_alpha(xv, 0.0) - MonotoneMetricSpec::wigner_yanase().f(xv)), tc, dg, n);
    }
    const double a3 = petz_metric(MonotoneMetricSpec::alpha(3.0), rho, x);
    ctx.le("metric.alpha=3=rld" + tag(d), std::abs(a3 - v.back()), tc * std::max(1.0, v.back()), dg);
  }
}

// Exact Stein threshold for an i.i.d. pair of classical two-point laws on the
// same lattice: outcome types are enumerated by the count of second symbols.
double classical_stein(const RealVector& p, const RealVector& q, int n, double eps) {
  struct Type {
    double llr;
    double prob;
  };
  std::vector<Type> types;
  for (int k = 0; k <= n; ++k) {
    const double binom = std::exp(std::lgamma(n + 1.0) - std::lgamma(k + 1.0) - std::lgamma(n - k + 1.0));
    types.push_back({((n - k) * std::log(p(0) / q(0)) + k * std::log(p(1) / q(1))) / n,
                     binom * std::pow(p(0), n - k) * std::pow(p(1), k)});
  }
  std::sort(types.begin(), types.end(), [](const Type& a, const Type& b) { return a.llr < b.llr; });
  double acc = 0;
  for (const auto& t : types) {
    acc += t.prob;
    if (acc >= 1.0 - eps) return std::ceil(t.llr / tol::grid_step) * tol::grid_step;
  }
  return types.back().llr;
}

void stein_trend(TrialContext& ctx) {
  const int n0 = ctx.config().n_min;
  const int n1 = ctx.config().n_max;
  const double eps = ctx.tol("stein_eps");
  for (const auto& name : fixture_names()) {
    const FixturePair fx = fixture_pair(name);
    if (fx.rho.dim() != 2) continue;  // qubit fixtures keep n_max tractable
    const std::string dg = digest_of({&fx.rho, &fx.sigma});
    const double d = finite(umegaki(fx.rho, fx.sigma).value);
    const double a0 = stein_threshold(fx.rho, fx.sigma, n0, eps).threshold;
    const double a1 = stein_threshold(fx.rho, fx.sigma, n1, eps).threshold;
    const std::string note = "a(n_min)=" + std::to_string(a0) + " a(n_max)=" + std::to_string(a1);
    ctx.lt("stein." + name + ".approaches_D", std::abs(a1 - d), std::abs(a0 - d), dg, note);
    ctx.le("stein." + name + ".near_D", std::abs(a1 - d), ctx.tol("stein_abs"), dg, note);

    // Finite-n converse: any test with power t satisfies
    // type II >= e^{-na} (t - tr rho^n P_>(a)); checked at a = a(n_max) for
    // the substitute tests at rates below D.
    const DensityMatrix rn = tensor_power(fx.rho, n1);
    const DensityMatrix sn = tensor_power(fx.sigma, n1);
    const double tail = 1.0 - np_projector(rn, sn, a1, n1).point.type1_accept;
    for (double off : {0.2, 0.1}) {
      const NeymanPearson np = np_projector(rn, sn, d - off, n1);
      const double power = 1.0 - np.point.type1_accept;
      if (power <= tail || np.point.type2 <= 0) continue;
      const double exponent = -std::log(np.point.type2) / n1;
      ctx.le("stein." + name + ".finite_converse[a=D-" + std::to_string(off).substr(0, 3) + "]", exponent,
             a1 + std::log(1.0 / (power - tail)) / n1 + ctx.tol("stein_control"), dg,
             "power=" + std::to_string(power));
    }
  }

  // Commuting control against exact enumeration.
  RealVector p(2), q(2);
  p << 0.7, 0.3;
  q << 0.4, 0.6;
  const DensityMatrix cr = DensityMatrix::diagonal(p);
  const DensityMatrix cs = DensityMatrix::diagonal(q);
  const std::string dg = digest_of({&cr, &cs});
  const int top = std::min(static_cast<int>(ctx.tol("stein_control_n_max")), n1 + 2);
  for (int n = n0; n <= top; ++n) {
    const double got = stein_threshold(cr, cs, n, eps).threshold;
    const double want = classical_stein(p, q, n, eps);
    ctx.le("stein.commuting_control[n=" + std::to_string(n) + "]", std::abs(got - want), ctx.tol("stein_control"),
           dg, "threshold=" + std::to_string(got));
  }
}

void conversion(TrialContext& ctx) {
  const int n0 = ctx.config().n_min;
  const int n1 = ctx.config().n_max;
  for (const auto& name : conversion_fixture_names()) {
    const FixtureQuadruple fx = conversion_fixture(name);
    const std::string dg = digest_of({&fx.rho0, &fx.sigma0, &fx.rho, &fx.sigma});
    const double gap = finite(umegaki(fx.rho0, fx.sigma0).value) - finite(umegaki(fx.rho, fx.sigma).value);
    const double c = ctx.tol("conversion_c_fraction") * gap;
    double dist0 = 0, dist1 = 0;
    std::vector<ConversionReport> reps;
    for (int n = n0; n <= n1; ++n) {
      const ConversionReport rep =
          reps.emplace_back(state_conversion(fx.rho0, fx.sigma0, fx.rho, fx.sigma, n, c).report);
      ctx.le("conversion." + name + ".sigma_exact[n=" + std::to_string(n) + "]", rep.sigma_residual,
             ctx.tol("conversion_sigma"), dg, "rho_distance=" + std::to_string(rep.rho_distance));
      if (n == n0) dist0 = rep.rho_distance;
      if (n == n1) dist1 = rep.rho_distance;
    }
    ctx.lt("conversion." + name + ".distance_shrinks", dist1, dist0, dg);

    // The substitute test inside the conversion: power grows along n, type II
    // stays below e^{-n a}, and the exponent respects the empirical threshold.
    const double a = reps.front().test_rate;
    for (const auto& rep : reps)
      ctx.le("np." + name + ".type2[n=" + std::to_string(rep.n) + "]", rep.q0,
             std::exp(-rep.n * a) * (1 + ctx.tol("np_type2_relative")), dg, "power=" + std::to_string(rep.p0));
    ctx.lt("np." + name + ".power_grows", reps.front().p0, reps.back().p0, dg);
    if (reps.back().p0 >= ctx.tol("stein_converse_power") && reps.back().q0 > 0) {
      const double a1 = stein_threshold(fx.rho0, fx.sigma0, n1, ctx.tol("stein_eps")).threshold;
      ctx.le("stein." + name + ".converse", -std::log(reps.back().q0) / n1, a1 + ctx.tol("stein_converse_slack"),
             dg, "threshold=" + std::to_string(a1));
    }

    bool rejected = false;
    std::string msg = "accepted";
    try {
      state_conversion(fx.rho0, fx.sigma0, fx.rho, fx.sigma, n0, gap);
    } catch (const PreconditionError& e) {
      rejected = true;
      msg = e.what();
    }
    ctx.expect("conversion." + name + ".gap_precondition", rejected, dg, msg);
  }
}

void fidelity_counterexample(TrialContext& ctx) {
  for (int d : ctx.config().dims) {
    const std::uint64_t s = derive_seed(ctx.seed(), static_cast<std::uint64_t>(d));
    const int k = static_cast<int>(ctx.tol("fidelity_fit_samples"));
    std::vector<DensityMatrix> rs, ss;
    for (int i = 0; i < k; ++i) {
      rs.push_back(random_density(d, d, derive_seed(s, 2 * i + 1)));
      ss.push_back(random_density(d, d, derive_seed(s, 2 * i + 2)));
    }
    std::vector<const DensityMatrix*> all;
    for (int i = 0; i < k; ++i) {
      all.push_back(&rs[i]);
      all.push_back(&ss[i]);
    }
    const std::string dg = digest_of(all);

    RealVector f(k), u(k);
    for (int i = 0; i < k; ++i) {
      f(i) = finite(fidelity_logdiv(rs[i], ss[i]));
      u(i) = finite(umegaki(rs[i], ss[i]).value);
    }
    const DensityMatrix rr = tensor_product(rs[0], rs[1]);
    const DensityMatrix sp = tensor_product(ss[0], ss[1]);
    ctx.le("fidelity.additivity" + tag(d), std::abs(finite(fidelity_logdiv(rr, sp)) - f(0) - f(1)),
           ctx.tol("fidelity_additivity"), dg);

    const QuantumChannel ch = random_cptp(d, d, 2, derive_seed(s, 1000));
    const double out = finite(fidelity_logdiv(apply_channel(ch, rs[0]), apply_channel(ch, ss[0])));
    ctx.ge("fidelity.reverse_monotone" + tag(d), out, f(0) - ctx.tol("fidelity_monotone"), dg);

    // Best c with D^F ~ c D over the sample; a large relative residual means
    // no single rescaling turns one into the other.
    const double c = f.dot(u) / u.squaredNorm();
    const double resid = (f - c * u).norm() / f.norm();
    ctx.ge("fidelity.not_a_rescaling" + tag(d), resid, ctx.tol("fidelity_fit_residual"), dg,
           "c=" + std::to_string(c));
  }
}

}  // namespace

const std::vector<SuiteEntry>& suite_table() {
  static const std::vector<SuiteEntry> table{
      {"monotonicity", monotonicity, false},
      {"sandwich", sandwich, false},
      {"joint-convexity", joint_convexity, false},
      {"reverse-test-optimality", reverse_test_optimality, false},
      {"integral-identities", integral_identities, false},
      {"metric-ordering", metric_ordering, false},
      {"stein-trend", stein_trend, true},
      {"conversion", conversion, true},
      {"fidelity-counterexample", fidelity_counterexample, false},
  };
  return table;
}

}  // namespace qdiv::detail

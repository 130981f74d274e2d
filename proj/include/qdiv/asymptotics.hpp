#pragma once

#include <vector>

#include "qdiv/reverse_test.hpp"

namespace qdiv {

struct TestCurvePoint {
  double a;
  double type1_accept;  // tr rho^n P_{<=0}
  double type2;         // tr sigma^n (1 - P_{<=0})
};

struct NeymanPearson {
  HermitianMatrix projector;  // P_{<=0}: non-positive eigenspace of rho^n - e^{na} sigma^n
  TestCurvePoint point;
};

NeymanPearson np_projector(const DensityMatrix& rho_n, const DensityMatrix& sigma_n, double a, int n);

struct SteinThreshold {
  double threshold;
  double scan_lo;
  double scan_hi;
  std::vector<TestCurvePoint> scanned;  // in scan order
};

// Smallest lattice rate a = k * 1e-3 with type1_accept(a) >= 1 - eps, found
// by a coarse scan (stride 0.05) followed by a fine scan of the last cell.
SteinThreshold stein_threshold(const DensityMatrix& rho, const DensityMatrix& sigma, int n, double eps);

struct SmoothedState {
  DensityMatrix state;      // A_+ / tr A_+, A = rho^n - (rho^n - e^{na} sigma^n)_+
  HermitianMatrix cut;      // A_+ before normalisation
  double rate;              // a
  double epsilon;           // 1 - type1_accept(a)
  double trace_distance;    // ||state - rho^n||_1
  double rate_certificate;  // dmax(state || sigma^n) / n
  double psd_margin;        // min eigenvalue of e^{n a'} sigma^n - state, a' the certificate
  bool trace_bound_ok;      // trace_distance <= 4 sqrt(2 eps) + 1e-6
  bool rate_bound_ok;       // a' <= a + ln(1/(1 - sqrt(8 eps)))/n + 1e-6, vacuous if sqrt(8 eps) >= 1
};

SmoothedState smooth_state(const DensityMatrix& rho_n, const DensityMatrix& sigma_n, double a, int n);

struct FidelityReport {
  int n;
  double rate;
  double trace_distance;    // ||Phi(p) - rho^n||_1
  double sigma_residual;    // ||Phi(q) - sigma^n||_F
  double rate_certificate;  // dmax(Phi(delta_0) || sigma^n) / n
  double scale;             // weight mu of the cut state inside Phi(delta_0)
};

struct AsymptoticReverseTest {
  Preparation preparation;  // Phi(delta_0), Phi(delta_1)
  ClassicalDistribution p;  // (1, 0)
  ClassicalDistribution q;  // (e^{-n rate}, 1 - e^{-n rate})
  FidelityReport report;
};

// Phi(delta_0) = mu B + (1 - mu tr B) R / tr R with B the cut state of
// smooth_state at this rate, mu = min(1, e^{n rate} / lambda_max(sigma^-1/2 B
// sigma^-1/2)) and R = e^{n rate} sigma^n - mu B, so that Phi(delta_0) <=
// e^{n rate} sigma^n holds by construction. Requires rate >= 0.
AsymptoticReverseTest asymptotic_reverse_test(const DensityMatrix& rho, const DensityMatrix& sigma, int n,
                                              double rate);

// Measure with {P, 1 - P}, then prepare Phi(delta_0) or Phi(delta_1).
struct ConversionChannel {
  Measurement test;
  Preparation preparation;

  DensityMatrix apply(const DensityMatrix& input) const;
};

struct ConversionReport {
  int n;
  double c;
  double test_rate;       // D(rho||sigma) + c
  double p0;              // tr rho0^n P
  double q0;              // tr sigma0^n P
  ExtendedReal reverse_rate;  // -ln q0 / n
  double sigma_residual;  // ||Psi(sigma0^n) - sigma^n||_F
  double rho_distance;    // ||Psi(rho0^n) - rho^n||_1
};

struct StateConversion {
  ConversionChannel channel;
  ConversionReport report;
};

StateConversion state_conversion(const DensityMatrix& rho0, const DensityMatrix& sigma0, const DensityMatrix& rho,
                                 const DensityMatrix& sigma, int n, double c);

}  // namespace qdiv

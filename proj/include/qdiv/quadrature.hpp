#pragma once

#include <cmath>
#include <limits>
#include <numbers>
#include <vector>

#include "qdiv/errors.hpp"

namespace qdiv {

// Gauss-Legendre rule mapped to [0, 1], nodes ascending.
template <typename Real>
struct GaussLegendre {
  std::vector<Real> nodes;
  std::vector<Real> weights;
};

template <typename Real>
GaussLegendre<Real> gauss_legendre(int n) {
  if (n < 2) raise<InvalidArgument>("gauss_legendre: need at least 2 nodes, got ", n);
  GaussLegendre<Real> rule;
  rule.nodes.resize(static_cast<size_t>(n));
  rule.weights.resize(static_cast<size_t>(n));
  const Real eps = Real(4) * std::numeric_limits<Real>::epsilon();
  for (int i = 0; i < (n + 1) / 2; ++i) {
    Real z = std::cos(std::numbers::pi_v<Real> * (Real(i) + Real(0.75)) / (Real(n) + Real(0.5)));
    Real dp = 0;
    for (int it = 0; it < 100; ++it) {
      Real p0 = 1;
      Real p1 = z;
      for (int k = 2; k <= n; ++k) {
        const Real p2 = ((Real(2 * k - 1)) * z * p1 - Real(k - 1) * p0) / Real(k);
        p0 = p1;
        p1 = p2;
      }
      dp = Real(n) * (z * p1 - p0) / (z * z - Real(1));
      const Real dz = p1 / dp;
      z -= dz;
      if (std::abs(dz) <= eps) break;
    }
    const Real w = Real(1) / ((Real(1) - z * z) * dp * dp);  // 2/(...) halved for [0,1]
    const size_t lo = static_cast<size_t>(i);
    const size_t hi = static_cast<size_t>(n - 1 - i);
    rule.nodes[lo] = (Real(1) - z) / Real(2);
    rule.nodes[hi] = (Real(1) + z) / Real(2);
    rule.weights[lo] = w;
    rule.weights[hi] = w;
  }
  return rule;
}

// Pairwise reduction; the summation tree depends only on the length.
template <typename Real>
Real pairwise_sum(const Real* v, size_t n) {
  if (n == 0) return Real(0);
  if (n == 1) return v[0];
  const size_t h = n / 2;
  return pairwise_sum(v, h) + pairwise_sum(v + h, n - h);
}

template <typename Real>
Real pairwise_sum(const std::vector<Real>& v) {
  return pairwise_sum(v.data(), v.size());
}

}  // namespace qdiv

#include "voltext/explain/quadrature.h"

#include <cmath>
#include <numbers>
#include <utility>

#include "voltext/common/error.h"

namespace voltext::explain {

QuadratureMethod parse_quadrature(const std::string& s) {
  if (s == "gauss-legendre" || s == "gausslegendre" || s == "gl") return QuadratureMethod::kGaussLegendre;
  if (s == "riemann") return QuadratureMethod::kRiemann;
  fail(ErrorCode::kInvalidArgument, "unknown quadrature '" + s + "'");
}

namespace {

// P_m(x) and P'_m(x) by the three-term recurrence.
std::pair<double, double> legendre(int m, double x) {
  double p0 = 1.0, p1 = x;
  for (int k = 2; k <= m; ++k) {
    double pk = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
    p0 = p1;
    p1 = pk;
  }
  return {p1, m * (x * p1 - p0) / (x * x - 1.0)};
}

}  // namespace

QuadratureRule gauss_legendre(int m) {
  if (m < 1) fail(ErrorCode::kInvalidArgument, "quadrature needs at least one step");
  QuadratureRule rule;
  rule.nodes.resize(std::size_t(m));
  rule.weights.resize(std::size_t(m));
  for (int i = 0; i < (m + 1) / 2; ++i) {
    double x = std::cos(std::numbers::pi * (i + 0.75) / (m + 0.5));
    for (int iter = 0; iter < 100; ++iter) {
      auto [p, dp] = legendre(m, x);
      double dx = p / dp;
      x -= dx;
      if (std::abs(dx) < 1e-16) break;
    }
    const double dp = legendre(m, x).second;
    const double w = 2.0 / ((1.0 - x * x) * dp * dp);
    // [-1, 1] -> [0, 1], ascending.
    const std::size_t lo = std::size_t(i), hi = std::size_t(m - 1 - i);
    rule.nodes[lo] = (1.0 - x) / 2.0;
    rule.nodes[hi] = (1.0 + x) / 2.0;
    rule.weights[lo] = w / 2.0;
    rule.weights[hi] = w / 2.0;
  }
  return rule;
}

QuadratureRule quadrature_rule(QuadratureMethod method, int steps) {
  if (steps < 1) fail(ErrorCode::kInvalidArgument, "quadrature needs at least one step");
  if (method == QuadratureMethod::kGaussLegendre) return gauss_legendre(steps);
  QuadratureRule rule;
  for (int k = 1; k <= steps; ++k) {
    rule.nodes.push_back(double(k) / steps);
    rule.weights.push_back(1.0 / steps);
  }
  return rule;
}

}  // namespace voltext::explain

#pragma once

#include <string>
#include <vector>

namespace voltext::explain {

enum class QuadratureMethod { kGaussLegendre, kRiemann };

struct QuadratureSpec {
  QuadratureMethod method = QuadratureMethod::kGaussLegendre;
  int steps = 50;
  int batch = 100;  // path points evaluated together
};

QuadratureMethod parse_quadrature(const std::string& s);

struct QuadratureRule {
  std::vector<double> nodes;    // in [0, 1]
  std::vector<double> weights;  // sum to 1
};

// Gauss-Legendre nodes/weights mapped to [0, 1] (Newton iteration on P_m),
// or the right Riemann sum k/m, k = 1..m, with weights 1/m.
QuadratureRule quadrature_rule(QuadratureMethod method, int steps);
QuadratureRule gauss_legendre(int m);

}  // namespace voltext::explain

#pragma once

#include <span>
#include <vector>

#include "voltext/common/matrix.h"

namespace voltext::volatility {

struct OlsFit {
  std::vector<double> beta;
  std::size_t rank = 0;
};

// Least squares via complete orthogonal decomposition; rank-deficient designs
// get the minimum-norm solution. With `strict`, an all-zero column throws
// DegenerateDesign. Fewer rows than columns also throws DegenerateDesign.
OlsFit ols_fit(const Matrix<double>& x, std::span<const double> y, bool strict = false);

double predict(std::span<const double> beta, std::span<const double> x);

}  // namespace voltext::volatility

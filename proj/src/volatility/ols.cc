#include "voltext/volatility/ols.h"

#include <Eigen/Dense>

#include "voltext/common/error.h"

namespace voltext::volatility {

OlsFit ols_fit(const Matrix<double>& x, std::span<const double> y, bool strict) {
  const auto n = Eigen::Index(x.rows());
  const auto k = Eigen::Index(x.cols());
  if (std::size_t(n) != y.size()) fail(ErrorCode::kShapeMismatch, "design rows != targets");
  if (n < k || k == 0) {
    fail(ErrorCode::kDegenerateDesign, std::to_string(n) + " rows for " + std::to_string(k) + " columns");
  }
  Eigen::Map<const Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>> a(
      x.storage().data(), n, k);
  Eigen::Map<const Eigen::VectorXd> b(y.data(), n);
  if (strict) {
    for (Eigen::Index c = 0; c < k; ++c) {
      if ((a.col(c).array() == 0.0).all()) {
        fail(ErrorCode::kDegenerateDesign, "column " + std::to_string(c) + " is identically zero");
      }
    }
  }
  Eigen::CompleteOrthogonalDecomposition<Eigen::MatrixXd> cod(a);
  Eigen::VectorXd beta = cod.solve(b);
  OlsFit fit;
  fit.beta.assign(beta.data(), beta.data() + k);
  fit.rank = std::size_t(cod.rank());
  return fit;
}

double predict(std::span<const double> beta, std::span<const double> x) {
  if (beta.size() != x.size()) fail(ErrorCode::kShapeMismatch, "coefficient/feature length mismatch");
  double s = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) s += beta[i] * x[i];
  return s;
}

}  // namespace voltext::volatility

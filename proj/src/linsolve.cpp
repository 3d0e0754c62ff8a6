#include "starprod/linsolve.hpp"

#include <algorithm>
#include <limits>
#include <string>

#include <Eigen/SVD>

#include "starprod/errors.hpp"

namespace starprod {

LinearSystemReport least_squares_solve(const Eigen::MatrixXd& m, const Eigen::VectorXd& b,
                                       double rank_tol) {
  if (m.rows() == 0 || m.cols() == 0) throw DimensionError("least_squares_solve: empty matrix");
  if (m.rows() != b.size())
    throw DimensionError("least_squares_solve: " + std::to_string(m.rows()) +
                         " rows vs rhs length " + std::to_string(b.size()));
  if (!m.allFinite() || !b.allFinite())
    throw NumericError("least_squares_solve: non-finite entries");
  if (rank_tol <= 0.0) throw ConfigError("least_squares_solve: rank tolerance must be positive");

  Eigen::BDCSVD<Eigen::MatrixXd> svd(m, Eigen::ComputeThinU | Eigen::ComputeThinV);
  const Eigen::VectorXd& sigma = svd.singularValues();
  const double cutoff = sigma.size() > 0 ? rank_tol * sigma[0] : 0.0;

  Eigen::VectorXd coeffs = svd.matrixU().transpose() * b;
  Eigen::Index rank = 0;
  for (Eigen::Index i = 0; i < sigma.size(); ++i) {
    if (sigma[i] > cutoff) {
      coeffs[i] /= sigma[i];
      ++rank;
    } else {
      coeffs[i] = 0.0;
    }
  }

  LinearSystemReport report;
  report.solution = svd.matrixV() * coeffs;
  report.residual_norm = (m * report.solution - b).norm();
  report.relative_residual =
      report.residual_norm / std::max(b.norm(), std::numeric_limits<double>::epsilon());
  report.numerical_rank = rank;
  report.rank_tolerance = rank_tol;
  return report;
}

}  // namespace starprod

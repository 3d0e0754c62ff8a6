#pragma once

#include <Eigen/Core>

namespace starprod {

/// Relative singular-value cutoff used when no explicit tolerance is given.
inline constexpr double kDefaultRankTol = 1e-10;

/// Outcome of a rank-revealing least-squares solve.
struct LinearSystemReport {
  Eigen::VectorXd solution;
  double residual_norm = 0.0;
  /// residual_norm / max(|rhs|, eps floor)
  double relative_residual = 0.0;
  Eigen::Index numerical_rank = 0;
  double rank_tolerance = kDefaultRankTol;
};

/// Minimum-norm least-squares solution of M x = b via SVD. Singular
/// values below rank_tol times the largest are treated as zero, which
/// pins down a unique deterministic solution for rank-deficient and
/// wide systems.
LinearSystemReport least_squares_solve(const Eigen::MatrixXd& m, const Eigen::VectorXd& b,
                                       double rank_tol = kDefaultRankTol);

}  // namespace starprod

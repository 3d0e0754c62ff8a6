#pragma once

#include <complex>
#include <optional>
#include <string>
#include <vector>

#include <Eigen/Core>

#include "starprod/constraint.hpp"

namespace starprod {

/// Position and tangent in ambient product coordinates at curve
/// parameter h.
struct GeodesicState {
  Eigen::VectorXd x;
  Eigen::VectorXd v;
  double h = 0.0;
};

struct IntegratorConfig {
  double step_size = 1e-3;
  double h_max = 1.0;
  double projection_tol = 1e-10;
  int max_projection_iters = 50;
  double rank_tol = kDefaultRankTol;
  /// Re-project position and tangent every this many steps (0 disables).
  int project_every = 1;
  /// Scalar applied to the bracket when forming the initial tangent of
  /// a bosonic quantization; the default is i/2.
  std::complex<double> tangent_factor{0.0, 0.5};

  void validate() const;
};

struct TrajectorySample {
  double h = 0.0;
  Eigen::VectorXd x;
  Eigen::VectorXd v;
  /// Norm of the stacked constraint residual at x.
  double constraint_drift = 0.0;
  /// Norm of the multiplier of the acceleration solve at (x, v).
  double multiplier_norm = 0.0;
};

enum class TerminationStatus { Completed, ProjectionFailure, SolveFailure };

const char* to_string(TerminationStatus status);

struct TrajectoryRecord {
  std::vector<TrajectorySample> samples;
  TerminationStatus status = TerminationStatus::Completed;
  std::string message;
};

struct AccelerationResult {
  Eigen::VectorXd acceleration;
  /// Multiplier over all constraint rows (empty for an empty system).
  Eigen::VectorXd lambda;
};

/// Constrained acceleration: the unique normal-space vector satisfying
/// J(x) a = -H(v, v) in the least-squares sense, computed as
/// a = J^T lambda with lambda the minimum-norm solution of
/// (J J^T) lambda = -H(v, v). For an empty system a = 0.
AccelerationResult geodesic_acceleration(const QuadraticConstraintSystem& system,
                                         const Eigen::VectorXd& x, const Eigen::VectorXd& v,
                                         double rank_tol = kDefaultRankTol);

/// Gauss-Newton projection x <- x - J^+ residual(x) until
/// |residual| < tol; nearest-point approximation onto the zero set.
/// Returns the input unchanged if it is already within tolerance.
/// Throws ConvergenceError (carrying the final residual) after max_iter
/// sweeps.
Eigen::VectorXd project_to_manifold(const QuadraticConstraintSystem& system, Eigen::VectorXd x,
                                    double tol, int max_iter,
                                    double rank_tol = kDefaultRankTol);

/// Removes the row-space component: v - J^+ (J v).
Eigen::VectorXd project_tangent(const QuadraticConstraintSystem& system,
                                const Eigen::VectorXd& x, const Eigen::VectorXd& v,
                                double rank_tol = kDefaultRankTol);

/// Initial data of the quantization curve: position at the base
/// product, tangent = factor * bracket (realified), then
/// tangent-projected. In fermionic-tangent mode the bracket slot
/// already holds the curve tangent and the factor defaults to 1;
/// bosonic mode defaults to i/2 and requires a real factor over a real
/// field unless the bracket vanishes.
GeodesicState quantum_product_initial_data(const QuadraticConstraintSystem& system,
                                           const AlgebraSpec& alg,
                                           std::optional<std::complex<double>> factor = {});

/// Classical fourth-order one-step integration of x' = v,
/// v' = geodesic_acceleration, with periodic position/tangent
/// re-projection. Samples (including h = 0 and h = h_max) record the
/// constraint drift and multiplier norm. A zero initial tangent yields
/// the constant trajectory without invoking the solver.
TrajectoryRecord integrate_geodesic(const QuadraticConstraintSystem& system,
                                    const GeodesicState& state0, const IntegratorConfig& cfg);

/// Applies an automorphism to both position and tangent coordinates.
GeodesicState pushforward_state(const AutomorphismMap& u, const GeodesicState& state, int dim,
                                Field field);

}  // namespace starprod

#include "starprod/geodesic.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include <Eigen/SVD>

#include "starprod/errors.hpp"

namespace starprod {

void IntegratorConfig::validate() const {
  if (!(step_size > 0.0)) throw ConfigError("integrator: step size must be positive");
  if (!(h_max >= 0.0)) throw ConfigError("integrator: h_max must be nonnegative");
  if (!(projection_tol > 0.0)) throw ConfigError("integrator: projection tolerance must be positive");
  if (!(rank_tol > 0.0)) throw ConfigError("integrator: rank tolerance must be positive");
  if (max_projection_iters < 1) throw ConfigError("integrator: max projection iterations must be >= 1");
  if (project_every < 0) throw ConfigError("integrator: project_every must be >= 0");
}

const char* to_string(TerminationStatus status) {
  switch (status) {
    case TerminationStatus::Completed: return "completed";
    case TerminationStatus::ProjectionFailure: return "projection-failure";
    case TerminationStatus::SolveFailure: return "solve-failure";
  }
  return "unknown";
}

AccelerationResult geodesic_acceleration(const QuadraticConstraintSystem& system,
                                         const Eigen::VectorXd& x, const Eigen::VectorXd& v,
                                         double rank_tol) {
  AccelerationResult out;
  if (system.empty()) {
    out.acceleration = Eigen::VectorXd::Zero(x.size());
    out.lambda = Eigen::VectorXd(0);
    return out;
  }
  Eigen::MatrixXd jac = system.jacobian(x);
  Eigen::VectorXd rhs = -system.second_directional(v);

  // One SVD of J serves both: a = J^+ rhs lies in the row space and
  // lambda = (J J^T)^+ rhs reproduces it through a = J^T lambda.
  Eigen::BDCSVD<Eigen::MatrixXd> svd(jac, Eigen::ComputeThinU | Eigen::ComputeThinV);
  const Eigen::VectorXd& sigma = svd.singularValues();
  const double cutoff = sigma.size() > 0 ? rank_tol * sigma[0] : 0.0;

  Eigen::VectorXd coeffs = svd.matrixU().transpose() * rhs;
  Eigen::VectorXd acc_coeffs = coeffs;
  Eigen::VectorXd lambda_coeffs = coeffs;
  for (Eigen::Index i = 0; i < sigma.size(); ++i) {
    if (sigma[i] > cutoff) {
      acc_coeffs[i] /= sigma[i];
      lambda_coeffs[i] /= sigma[i] * sigma[i];
    } else {
      acc_coeffs[i] = 0.0;
      lambda_coeffs[i] = 0.0;
    }
  }
  out.acceleration = svd.matrixV() * acc_coeffs;
  out.lambda = svd.matrixU() * lambda_coeffs;
  return out;
}

namespace {

// Damped pseudo-inverse step delta = J^T (J J^T + mu I)^{-1} F with mu
// proportional to |F|. The associator constraints are massively
// redundant, and off the zero set their exact null directions lift to
// singular values of order |F|; the undamped minimum-norm step then
// moves O(1) along those directions (for the homogeneous quadratic
// blocks J(x) x = 2 F(x), so x/2 itself solves the step equation) and
// can land on a distant zero-set point. Damping at the residual scale
// suppresses exactly that block and reduces to the plain pseudo-inverse
// step as F -> 0.
Eigen::VectorXd damped_projection_step(const Eigen::MatrixXd& jac, const Eigen::VectorXd& f,
                                       double rank_tol) {
  Eigen::BDCSVD<Eigen::MatrixXd> svd(jac, Eigen::ComputeThinU | Eigen::ComputeThinV);
  const Eigen::VectorXd& sigma = svd.singularValues();
  const double sigma_max = sigma.size() > 0 ? sigma[0] : 0.0;
  const double cutoff = rank_tol * sigma_max;
  const double mu = sigma_max * f.norm();
  Eigen::VectorXd coeffs = svd.matrixU().transpose() * f;
  for (Eigen::Index i = 0; i < sigma.size(); ++i) {
    coeffs[i] = sigma[i] > cutoff ? coeffs[i] * sigma[i] / (sigma[i] * sigma[i] + mu) : 0.0;
  }
  return svd.matrixV() * coeffs;
}

}  // namespace

Eigen::VectorXd project_to_manifold(const QuadraticConstraintSystem& system, Eigen::VectorXd x,
                                    double tol, int max_iter, double rank_tol) {
  if (!(tol > 0.0)) throw ConfigError("project_to_manifold: tolerance must be positive");
  if (system.empty()) return x;
  double res_norm = system.residual(x).norm();
  for (int it = 0; it < max_iter; ++it) {
    if (res_norm < tol) return x;
    x -= damped_projection_step(system.jacobian(x), system.residual(x), rank_tol);
    res_norm = system.residual(x).norm();
  }
  if (res_norm < tol) return x;
  throw ConvergenceError("projection did not reach tolerance " + std::to_string(tol) + " in " +
                             std::to_string(max_iter) + " iterations",
                         res_norm);
}

Eigen::VectorXd project_tangent(const QuadraticConstraintSystem& system,
                                const Eigen::VectorXd& x, const Eigen::VectorXd& v,
                                double rank_tol) {
  if (system.empty()) return v;
  Eigen::MatrixXd jac = system.jacobian(x);
  LinearSystemReport solve = least_squares_solve(jac, jac * v, rank_tol);
  return v - solve.solution;
}

GeodesicState quantum_product_initial_data(const QuadraticConstraintSystem& system,
                                           const AlgebraSpec& alg,
                                           std::optional<std::complex<double>> factor) {
  GeodesicState state;
  state.h = 0.0;
  state.x = alg.bullet.ambient_coordinates();

  Eigen::VectorXd bracket = alg.poisson.ambient_coordinates();
  std::complex<double> f;
  if (alg.bracket_mode == BracketMode::FermionicTangent) {
    f = factor.value_or(std::complex<double>(1.0, 0.0));
  } else {
    f = factor.value_or(std::complex<double>(0.0, 0.5));
  }

  if (bracket.norm() == 0.0 || f == 0.0) {
    state.v = Eigen::VectorXd::Zero(state.x.size());
    return state;
  }

  if (alg.field == Field::Real) {
    if (f.imag() != 0.0)
      throw ConfigError("tangent factor must be real over a real scalar field");
    state.v = f.real() * bracket;
  } else {
    // Multiply the complex bracket tensor by the complex factor.
    Eigen::VectorXd v(bracket.size());
    for (Eigen::Index i = 0; i < bracket.size() / 2; ++i) {
      std::complex<double> z{bracket[2 * i], bracket[2 * i + 1]};
      z *= f;
      v[2 * i] = z.real();
      v[2 * i + 1] = z.imag();
    }
    state.v = v;
  }
  state.v = project_tangent(system, state.x, state.v);
  return state;
}

namespace {

double relative_tangency(const QuadraticConstraintSystem& system, const Eigen::VectorXd& x,
                         const Eigen::VectorXd& v) {
  if (system.empty() || v.norm() == 0.0) return 0.0;
  Eigen::MatrixXd jac = system.jacobian(x);
  double scale = std::max(jac.norm() * v.norm(), std::numeric_limits<double>::epsilon());
  return (jac * v).norm() / scale;
}

}  // namespace

TrajectoryRecord integrate_geodesic(const QuadraticConstraintSystem& system,
                                    const GeodesicState& state0, const IntegratorConfig& cfg) {
  cfg.validate();
  if (state0.x.size() != system.ambient_dim() || state0.v.size() != system.ambient_dim())
    throw DimensionError("integrate_geodesic: state size must match the ambient dimension");

  TrajectoryRecord record;
  Eigen::VectorXd x = state0.x;
  Eigen::VectorXd v = state0.v;
  double h = state0.h;
  const double h_end = state0.h + cfg.h_max;

  auto drift = [&](const Eigen::VectorXd& p) {
    return system.empty() ? 0.0 : system.residual(p).norm();
  };

  if (!system.empty()) {
    double initial_drift = drift(x);
    if (initial_drift > 10.0 * cfg.projection_tol)
      throw ConfigError("integrate_geodesic: initial position is off the constraint set "
                        "(residual " + std::to_string(initial_drift) + "); project it first");
    if (relative_tangency(system, x, v) > 10.0 * cfg.projection_tol)
      throw ConfigError("integrate_geodesic: initial tangent is not tangent to the "
                        "constraint set; project it first");
  }

  // Constant trajectory for zero tangent; no solver involved.
  if (v.norm() == 0.0) {
    record.samples.push_back({h, x, v, drift(x), 0.0});
    if (cfg.h_max > 0.0) record.samples.push_back({h_end, x, v, drift(x), 0.0});
    return record;
  }

  const double tiny = 1e-15 * std::max(1.0, std::abs(h_end));
  long step_index = 0;
  try {
    for (;;) {
      AccelerationResult acc0 = geodesic_acceleration(system, x, v, cfg.rank_tol);
      record.samples.push_back({h, x, v, drift(x), acc0.lambda.norm()});
      if (h >= h_end - tiny) break;

      const double dt = std::min(cfg.step_size, h_end - h);

      // Stage positions are pulled back onto the zero set before the
      // acceleration solve: a stage point sits O(dt^2) off the manifold,
      // where the lifted near-null singular values of the redundant
      // Jacobian amplify rounding noise in the multiplier solve.
      const bool stabilize = !system.empty() && cfg.project_every > 0;
      auto stage = [&](Eigen::VectorXd xs) {
        if (stabilize)
          xs = project_to_manifold(system, std::move(xs), cfg.projection_tol,
                                   cfg.max_projection_iters, cfg.rank_tol);
        return xs;
      };

      const Eigen::VectorXd& k1x = v;
      const Eigen::VectorXd& k1v = acc0.acceleration;

      Eigen::VectorXd x2 = stage(x + 0.5 * dt * k1x);
      Eigen::VectorXd k2x = v + 0.5 * dt * k1v;
      Eigen::VectorXd k2v = geodesic_acceleration(system, x2, k2x, cfg.rank_tol).acceleration;

      Eigen::VectorXd x3 = stage(x + 0.5 * dt * k2x);
      Eigen::VectorXd k3x = v + 0.5 * dt * k2v;
      Eigen::VectorXd k3v = geodesic_acceleration(system, x3, k3x, cfg.rank_tol).acceleration;

      Eigen::VectorXd x4 = stage(x + dt * k3x);
      Eigen::VectorXd k4x = v + dt * k3v;
      Eigen::VectorXd k4v = geodesic_acceleration(system, x4, k4x, cfg.rank_tol).acceleration;

      x += dt / 6.0 * (k1x + 2.0 * k2x + 2.0 * k3x + k4x);
      v += dt / 6.0 * (k1v + 2.0 * k2v + 2.0 * k3v + k4v);
      h += dt;
      ++step_index;

      if (!system.empty() && cfg.project_every > 0 && step_index % cfg.project_every == 0) {
        x = project_to_manifold(system, x, cfg.projection_tol, cfg.max_projection_iters,
                                cfg.rank_tol);
        v = project_tangent(system, x, v, cfg.rank_tol);
      }
    }
  } catch (const ConvergenceError& err) {
    record.status = TerminationStatus::ProjectionFailure;
    record.message = err.what();
    return record;
  } catch (const NumericError& err) {
    record.status = TerminationStatus::SolveFailure;
    record.message = err.what();
    return record;
  }
  return record;
}

GeodesicState pushforward_state(const AutomorphismMap& u, const GeodesicState& state, int dim,
                                Field field) {
  GeodesicState out;
  out.h = state.h;
  out.x = pushforward_product(u, ProductTensor::from_ambient(state.x, dim, field))
              .ambient_coordinates();
  out.v = pushforward_product(u, ProductTensor::from_ambient(state.v, dim, field))
              .ambient_coordinates();
  return out;
}

}  // namespace starprod

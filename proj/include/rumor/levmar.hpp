#pragma once

#include <functional>

#include <Eigen/Core>

namespace rumor {

struct LevMarOptions {
  int max_iterations = 200;
  double step_tolerance = 1e-8;       // relative parameter change on accepted steps
  double gradient_tolerance = 1e-14;  // sup norm of J^T r
  double initial_damping = 1e-3;
};

struct LevMarOutcome {
  Eigen::VectorXd params;
  double residual_norm2 = 0.0;  // sum of squared residuals at the solution
  int iterations = 0;
  bool converged = false;
};

using ResidualFn = std::function<Eigen::VectorXd(const Eigen::VectorXd&)>;

/// Damped least squares with Marquardt diagonal scaling and a numeric
/// (central-difference) Jacobian. Deterministic for identical inputs.
LevMarOutcome minimize_least_squares(const ResidualFn& residuals, Eigen::VectorXd x0,
                                     const LevMarOptions& options = {});

}  // namespace rumor

#include "rumor/levmar.hpp"

#include <cmath>

#include <Eigen/Cholesky>

namespace rumor {

namespace {

Eigen::MatrixXd numeric_jacobian(const ResidualFn& f, const Eigen::VectorXd& x,
                                 const Eigen::VectorXd& r0) {
  const auto n = x.size();
  Eigen::MatrixXd jac(r0.size(), n);
  for (Eigen::Index j = 0; j < n; ++j) {
    const double h = 1e-6 * std::max(1.0, std::abs(x(j)));
    Eigen::VectorXd xp = x, xm = x;
    xp(j) += h;
    xm(j) -= h;
    jac.col(j) = (f(xp) - f(xm)) / (2.0 * h);
  }
  return jac;
}

}  // namespace

LevMarOutcome minimize_least_squares(const ResidualFn& f, Eigen::VectorXd x,
                                     const LevMarOptions& opt) {
  LevMarOutcome out;
  Eigen::VectorXd r = f(x);
  double cost = r.squaredNorm();
  double damping = opt.initial_damping;

  for (int iter = 0; iter < opt.max_iterations; ++iter) {
    out.iterations = iter + 1;
    const Eigen::MatrixXd jac = numeric_jacobian(f, x, r);
    const Eigen::MatrixXd hess = jac.transpose() * jac;
    const Eigen::VectorXd grad = jac.transpose() * r;
    if (grad.lpNorm<Eigen::Infinity>() < opt.gradient_tolerance) {
      out.converged = true;
      break;
    }

    bool accepted = false;
    while (damping < 1e14) {
      Eigen::MatrixXd damped = hess;
      for (Eigen::Index i = 0; i < damped.rows(); ++i)
        damped(i, i) += damping * std::max(hess(i, i), 1e-12);
      const Eigen::VectorXd delta = damped.ldlt().solve(-grad);
      double max_rel_step = 0.0;
      for (Eigen::Index i = 0; i < delta.size(); ++i)
        max_rel_step =
            std::max(max_rel_step, std::abs(delta(i)) / (std::abs(x(i)) + 1e-12));
      const Eigen::VectorXd candidate = x + delta;
      const Eigen::VectorXd rc = f(candidate);
      const double candidate_cost = rc.squaredNorm();
      if (std::isfinite(candidate_cost) && candidate_cost < cost) {
        x = candidate;
        r = rc;
        cost = candidate_cost;
        damping = std::max(damping / 3.0, 1e-12);
        accepted = true;
        if (max_rel_step < opt.step_tolerance) out.converged = true;
        break;
      }
      // No improvement available within a step this small: converged.
      if (max_rel_step < opt.step_tolerance) {
        out.converged = true;
        break;
      }
      damping *= 2.5;
    }
    if (!accepted || out.converged) break;
  }

  out.params = std::move(x);
  out.residual_norm2 = cost;
  return out;
}

}  // namespace rumor

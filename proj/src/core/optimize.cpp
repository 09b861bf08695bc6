#include "core/optimize.hpp"

#include <cmath>

#include "core/errors.hpp"

namespace rtb {

Eigen::VectorXd numeric_gradient(const ObjectiveFn& f, const Eigen::VectorXd& x,
                                 double relative_step) {
  const auto n = x.size();
  Eigen::VectorXd grad(n);
  Eigen::VectorXd probe = x;
  for (Eigen::Index i = 0; i < n; ++i) {
    const double h = relative_step * std::max(1.0, std::abs(x(i)));
    probe(i) = x(i) + h;
    const double fp = f(probe);
    probe(i) = x(i) - h;
    const double fm = f(probe);
    probe(i) = x(i);
    grad(i) = (fp - fm) / (2.0 * h);
  }
  return grad;
}

Eigen::MatrixXd numeric_hessian(const ObjectiveFn& f, const Eigen::VectorXd& x,
                                double step) {
  const auto n = x.size();
  Eigen::MatrixXd hess(n, n);
  Eigen::VectorXd probe = x;
  const double f0 = f(x);
  for (Eigen::Index i = 0; i < n; ++i) {
    probe(i) = x(i) + step;
    const double fp = f(probe);
    probe(i) = x(i) - step;
    const double fm = f(probe);
    probe(i) = x(i);
    hess(i, i) = (fp - 2.0 * f0 + fm) / (step * step);
    for (Eigen::Index j = i + 1; j < n; ++j) {
      probe(i) = x(i) + step;
      probe(j) = x(j) + step;
      const double fpp = f(probe);
      probe(j) = x(j) - step;
      const double fpm = f(probe);
      probe(i) = x(i) - step;
      const double fmm = f(probe);
      probe(j) = x(j) + step;
      const double fmp = f(probe);
      probe(i) = x(i);
      probe(j) = x(j);
      const double v = (fpp - fpm - fmp + fmm) / (4.0 * step * step);
      hess(i, j) = v;
      hess(j, i) = v;
    }
  }
  return hess;
}

BfgsResult minimize_bfgs(const ObjectiveFn& f, const Eigen::VectorXd& x0,
                         const BfgsOptions& options) {
  const auto n = x0.size();
  BfgsResult result;
  result.x = x0;
  result.value = f(x0);
  require(std::isfinite(result.value), ErrorCode::evaluation,
          "minimize_bfgs: objective not finite at the starting point");
  Eigen::VectorXd grad = numeric_gradient(f, result.x, options.fd_step);
  Eigen::MatrixXd inv_hess = Eigen::MatrixXd::Identity(n, n);
  bool first_update = true;

  const auto grad_tol = [&](double value) {
    return std::max(options.gradient_abs_tol,
                    options.gradient_rel_tol * std::abs(value));
  };

  for (int iter = 0; iter < options.max_iterations; ++iter) {
    result.iterations = iter;
    if (grad.lpNorm<Eigen::Infinity>() <= grad_tol(result.value)) {
      result.converged = true;
      break;
    }
    Eigen::VectorXd direction = -(inv_hess * grad);
    double slope = grad.dot(direction);
    if (!(slope < 0.0)) {
      // Stale curvature; restart from steepest descent.
      inv_hess.setIdentity();
      direction = -grad;
      slope = grad.dot(direction);
      first_update = true;
    }

    double alpha = 1.0;
    double new_value = std::numeric_limits<double>::infinity();
    Eigen::VectorXd candidate;
    bool accepted = false;
    for (int ls = 0; ls < 60; ++ls) {
      candidate = result.x + alpha * direction;
      new_value = f(candidate);
      if (std::isfinite(new_value) && new_value <= result.value + 1e-4 * alpha * slope) {
        accepted = true;
        break;
      }
      alpha *= 0.5;
    }
    if (!accepted) {
      // No decrease along the quasi-Newton direction at machine-scale steps;
      // treat as converged only if the gradient is already small.
      result.converged = grad.lpNorm<Eigen::Infinity>() <= 10.0 * grad_tol(result.value);
      break;
    }

    Eigen::VectorXd new_grad = numeric_gradient(f, candidate, options.fd_step);
    Eigen::VectorXd s = candidate - result.x;
    Eigen::VectorXd y = new_grad - grad;
    const double sy = s.dot(y);

    const double value_change = result.value - new_value;
    result.x = candidate;
    result.value = new_value;
    grad = new_grad;

    if (sy > 1e-12 * s.norm() * y.norm()) {
      if (first_update) {
        inv_hess *= sy / y.squaredNorm();
        first_update = false;
      }
      const double rho = 1.0 / sy;
      const Eigen::VectorXd hy = inv_hess * y;
      inv_hess -= rho * (s * hy.transpose() + hy * s.transpose());
      inv_hess += rho * (rho * y.dot(hy) + 1.0) * (s * s.transpose());
    }

    if (value_change <= 1e-13 * (std::abs(result.value) + 1.0) &&
        s.lpNorm<Eigen::Infinity>() <= 1e-10 * (result.x.lpNorm<Eigen::Infinity>() + 1.0)) {
      result.converged = true;
      break;
    }
  }
  if (!result.converged &&
      grad.lpNorm<Eigen::Infinity>() <= grad_tol(result.value)) {
    result.converged = true;
  }
  result.gradient = grad;
  return result;
}

}  // namespace rtb

#pragma once

#include <functional>

#include <Eigen/Dense>

namespace rtb {

using ObjectiveFn = std::function<double(const Eigen::VectorXd&)>;

struct BfgsOptions {
  int max_iterations = 500;
  double gradient_abs_tol = 1e-6;
  double gradient_rel_tol = 1e-9;  // scaled by |f|
  double fd_step = 1e-6;           // relative central-difference step
};

struct BfgsResult {
  Eigen::VectorXd x;
  double value = 0.0;
  Eigen::VectorXd gradient;
  int iterations = 0;
  bool converged = false;
};

Eigen::VectorXd numeric_gradient(const ObjectiveFn& f, const Eigen::VectorXd& x,
                                 double relative_step);

// Central-difference Hessian with absolute step `step` per coordinate;
// symmetric by construction.
Eigen::MatrixXd numeric_hessian(const ObjectiveFn& f, const Eigen::VectorXd& x,
                                double step);

// Quasi-Newton minimizer with numeric gradients and Armijo backtracking.
// Objective values of +inf are treated as out-of-bounds and backtracked away.
BfgsResult minimize_bfgs(const ObjectiveFn& f, const Eigen::VectorXd& x0,
                         const BfgsOptions& options = {});

}  // namespace rtb

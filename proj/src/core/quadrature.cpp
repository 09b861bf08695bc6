#include "core/quadrature.hpp"

#include <cmath>

#include <Eigen/Dense>

#include "core/errors.hpp"

namespace rtb {

// Golub-Welsch: nodes are eigenvalues of the symmetric tridiagonal Jacobi
// matrix with off-diagonals sqrt(i/2); weights come from the first component
// of the normalized eigenvectors.
GhRule gauss_hermite(int n) {
  require(n >= 1, ErrorCode::domain, "gauss_hermite requires n >= 1");
  constexpr double kLogSqrtPi = 0.5723649429247001;
  if (n == 1) {
    return {{0.0}, {kLogSqrtPi}};
  }
  Eigen::MatrixXd jacobi = Eigen::MatrixXd::Zero(n, n);
  for (int i = 1; i < n; ++i) {
    const double b = std::sqrt(0.5 * i);
    jacobi(i, i - 1) = b;
    jacobi(i - 1, i) = b;
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(jacobi);
  require(solver.info() == Eigen::Success, ErrorCode::evaluation,
          "gauss_hermite: eigendecomposition failed");
  GhRule rule;
  rule.nodes.resize(n);
  rule.log_weights.resize(n);
  for (int i = 0; i < n; ++i) {
    rule.nodes[i] = solver.eigenvalues()(i);
    const double v0 = solver.eigenvectors()(0, i);
    rule.log_weights[i] = kLogSqrtPi + 2.0 * std::log(std::abs(v0));
  }
  return rule;
}

}  // namespace rtb

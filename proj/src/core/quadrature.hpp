#pragma once

#include <vector>

namespace rtb {

// Gauss-Hermite rule for weight exp(-x^2): integral f(x) e^{-x^2} dx
// ~= sum w_i f(x_i). Nodes ascend; n = 1 gives node 0, weight sqrt(pi).
struct GhRule {
  std::vector<double> nodes;
  std::vector<double> log_weights;
};

GhRule gauss_hermite(int n);

}  // namespace rtb

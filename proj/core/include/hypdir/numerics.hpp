#pragma once

#include <cstddef>
#include <functional>
#include <span>
#include <utility>
#include <vector>

namespace hypdir {

// Nodes and weights of the n-point Gauss-Legendre rule on [-1, 1].
std::pair<std::vector<double>, std::vector<double>> gauss_legendre(int n);

struct QuadResult {
  double value = 0.0;
  double error = 0.0;
  bool converged = false;
};

// Adaptive Gauss-Kronrod (7/15) integration of f over [a, b].
QuadResult integrate(const std::function<double(double)>& f, double a, double b, double abs_tol,
                     double rel_tol = 0.0, int max_depth = 40);

// Pairwise (cascade) summation; result independent of how the input was produced.
double pairwise_sum(std::span<const double> xs);

}  // namespace hypdir

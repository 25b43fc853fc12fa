#pragma once

#include <functional>
#include <utility>

#include <Eigen/Dense>

namespace zeno1f {

// Gauss-Legendre nodes and weights on [a, b], computed by Golub-Welsch.
// Nodes are returned in increasing order.
std::pair<Eigen::VectorXd, Eigen::VectorXd> gauss_legendre(int n, double a, double b);

struct QuadratureResult {
    double value = 0.0;
    double achieved_tol = 0.0;
    bool converged = true;
};

// Adaptive Simpson integration of f on [a, b] to absolute tolerance tol.
QuadratureResult adaptive_simpson(const std::function<double(double)>& f,
                                  double a, double b, double tol,
                                  int max_depth = 50);

}  // namespace zeno1f

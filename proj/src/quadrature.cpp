#include "zeno1f/quadrature.hpp"

#include <cmath>
#include <stdexcept>

#include <Eigen/Eigenvalues>

namespace zeno1f {

std::pair<Eigen::VectorXd, Eigen::VectorXd> gauss_legendre(int n, double a, double b) {
    if (n < 1) throw std::invalid_argument("gauss_legendre: n must be >= 1");
    if (!(b > a)) throw std::invalid_argument("gauss_legendre: need b > a");

    // Jacobi matrix of the Legendre polynomials on [-1, 1].
    Eigen::MatrixXd T = Eigen::MatrixXd::Zero(n, n);
    for (int k = 1; k < n; ++k) {
        double bk = k / std::sqrt(4.0 * k * k - 1.0);
        T(k, k - 1) = bk;
        T(k - 1, k) = bk;
    }
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(T);
    Eigen::VectorXd x = es.eigenvalues();
    Eigen::VectorXd w(n);
    for (int j = 0; j < n; ++j) {
        double v0 = es.eigenvectors()(0, j);
        w[j] = 2.0 * v0 * v0;
    }
    // Affine map to [a, b].
    double mid = 0.5 * (a + b), half = 0.5 * (b - a);
    for (int j = 0; j < n; ++j) {
        x[j] = mid + half * x[j];
        w[j] *= half;
    }
    return {x, w};
}

namespace {

double simpson(const std::function<double(double)>& f, double a, double fa,
               double b, double fb, double fm) {
    return (b - a) / 6.0 * (fa + 4.0 * fm + fb);
}

double adaptive_step(const std::function<double(double)>& f, double a, double fa,
                     double b, double fb, double fm, double whole, double tol,
                     int depth, double* achieved) {
    double m = 0.5 * (a + b);
    double lm = 0.5 * (a + m), rm = 0.5 * (m + b);
    double flm = f(lm), frm = f(rm);
    double left = simpson(f, a, fa, m, fm, flm);
    double right = simpson(f, m, fm, b, fb, frm);
    double err = (left + right - whole) / 15.0;
    if (depth <= 0 || std::abs(err) <= tol) {
        if (depth <= 0) *achieved = std::max(*achieved, std::abs(err));
        return left + right + err;
    }
    return adaptive_step(f, a, fa, m, fm, flm, left, 0.5 * tol, depth - 1, achieved) +
           adaptive_step(f, m, fm, b, fb, frm, right, 0.5 * tol, depth - 1, achieved);
}

}  // namespace

QuadratureResult adaptive_simpson(const std::function<double(double)>& f,
                                  double a, double b, double tol, int max_depth) {
    QuadratureResult res;
    if (a == b) return res;
    double fa = f(a), fb = f(b), fm = f(0.5 * (a + b));
    double whole = simpson(f, a, fa, b, fb, fm);
    double achieved = 0.0;
    res.value = adaptive_step(f, a, fa, b, fb, fm, whole, tol, max_depth, &achieved);
    res.achieved_tol = achieved;
    res.converged = achieved <= tol;
    return res;
}

}  // namespace zeno1f

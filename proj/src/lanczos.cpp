#include "zeno1f/lanczos.hpp"

#include <cmath>
#include <stdexcept>

#include <Eigen/Eigenvalues>

namespace zeno1f {

namespace {

// exp(z*T) e_1 for the real symmetric tridiagonal (alpha, beta) of size m.
VecC expm_tridiag_e1(const Eigen::VectorXd& alpha, const Eigen::VectorXd& beta, int m,
                     cplx z) {
    Eigen::MatrixXd T = Eigen::MatrixXd::Zero(m, m);
    for (int i = 0; i < m; ++i) T(i, i) = alpha[i];
    for (int i = 0; i + 1 < m; ++i) {
        T(i, i + 1) = beta[i];
        T(i + 1, i) = beta[i];
    }
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(T);
    VecC phases(m);
    for (int i = 0; i < m; ++i) phases[i] = std::exp(z * es.eigenvalues()[i]);
    Eigen::VectorXd e1 = es.eigenvectors().row(0);
    VecC out = VecC::Zero(m);
    for (int i = 0; i < m; ++i) out += phases[i] * e1[i] * es.eigenvectors().col(i);
    return out;
}

}  // namespace

VecC krylov_expv(const std::function<void(const VecC&, VecC&)>& matvec, const VecC& v,
                 cplx z, int max_dim, double tol) {
    double beta0 = v.norm();
    if (beta0 == 0.0) return v;
    Eigen::Index n = v.size();
    int m_max = static_cast<int>(std::min<Eigen::Index>(max_dim, n));

    Eigen::MatrixXcd V(n, m_max);
    Eigen::VectorXd alpha(m_max), beta(m_max);
    V.col(0) = v / beta0;
    VecC w(n);
    for (int j = 0; j < m_max; ++j) {
        matvec(V.col(j), w);
        cplx a = V.col(j).dot(w);
        alpha[j] = a.real();
        w -= a * V.col(j);
        if (j > 0) w -= cplx(beta[j - 1]) * V.col(j - 1);
        // one reorthogonalization pass keeps the basis clean at small m
        w -= V.leftCols(j + 1) * (V.leftCols(j + 1).adjoint() * w);
        double b = w.norm();
        beta[j] = b;

        bool breakdown = b < 1e-14 * std::max(1.0, std::abs(alpha[j]));
        // posterior error estimate: weight leaking out of the subspace
        VecC u = expm_tridiag_e1(alpha, beta, j + 1, z);
        double err = breakdown ? 0.0 : b * std::abs(u[j]);
        if (err <= tol || breakdown) return beta0 * (V.leftCols(j + 1) * u);
        if (j + 1 == m_max)
            throw std::runtime_error("krylov_expv: no convergence at max subspace size");
        V.col(j + 1) = w / b;
    }
    throw std::runtime_error("krylov_expv: unreachable");
}

}  // namespace zeno1f

#include "zeno1f/chainmap.hpp"

#include <cmath>
#include <cstring>
#include <stdexcept>
#include <string>

namespace zeno1f {

namespace {

// Kahan-compensated dot of elementwise products.
double csum(const Eigen::VectorXd& a, const Eigen::VectorXd& b) {
    double s = 0.0, c = 0.0;
    for (int i = 0; i < a.size(); ++i) {
        double y = a[i] * b[i] - c;
        double t = s + y;
        c = (t - s) - y;
        s = t;
    }
    return s;
}

int positive_support(const DiscretizedMeasure& m) {
    int n = 0;
    for (int j = 0; j < m.size(); ++j)
        if (m.weights[j] > 0.0) ++n;
    return n;
}

void check_support(const DiscretizedMeasure& m, int N) {
    if (N < 1) throw std::invalid_argument("map_to_chain: N must be >= 1");
    int s = positive_support(m);
    if (s < N)
        throw std::invalid_argument("map_to_chain: measure supports at most N = " +
                                    std::to_string(s) + " chain sites, requested " +
                                    std::to_string(N));
}

ChainCoefficients stieltjes(const DiscretizedMeasure& m, int N) {
    const Eigen::VectorXd& x = m.nodes;
    const Eigen::VectorXd& w = m.weights;
    double s0 = w.sum();

    ChainCoefficients c;
    c.kappa0 = std::sqrt(s0);
    c.eps.resize(N);
    c.hop.resize(N - 1);

    // monic orthogonal polynomials evaluated at the nodes
    Eigen::VectorXd pkm1 = Eigen::VectorXd::Zero(x.size());
    Eigen::VectorXd pk = Eigen::VectorXd::Ones(x.size());
    double nk = s0;        // <p_k, p_k>
    double nk_prev = 0.0;  // <p_{k-1}, p_{k-1}>
    for (int k = 0; k < N; ++k) {
        Eigen::VectorXd wp2 = w.cwiseProduct(pk.cwiseAbs2());
        double ak = csum(wp2, x) / nk;
        c.eps[k] = ak;
        if (k == N - 1) break;
        // p_{k+1} = (x - a_k) p_k - b_k p_{k-1},  b_k = n_k / n_{k-1}
        Eigen::VectorXd pkp1 = (x.array() - ak).matrix().cwiseProduct(pk);
        if (k > 0) pkp1 -= (nk / nk_prev) * pkm1;
        double nkp1 = csum(w, pkp1.cwiseAbs2());
        if (!(nkp1 > 0.0) || !std::isfinite(nkp1))
            throw std::runtime_error("map_to_chain: Stieltjes breakdown at hop index " +
                                     std::to_string(k));
        c.hop[k] = std::sqrt(nkp1 / nk);
        pkm1 = pk;
        pk = pkp1;
        nk_prev = nk;
        nk = nkp1;
    }
    return c;
}

ChainCoefficients lanczos(const DiscretizedMeasure& m, int N) {
    const Eigen::VectorXd& x = m.nodes;
    const Eigen::VectorXd& w = m.weights;
    double s0 = w.sum();
    int M = m.size();

    ChainCoefficients c;
    c.kappa0 = std::sqrt(s0);
    c.eps.resize(N);
    c.hop.resize(N - 1);

    // Lanczos on diag(x) with start vector sqrt(w)/||sqrt(w)||, full reorthogonalization.
    Eigen::MatrixXd V(M, N);
    Eigen::VectorXd v = w.cwiseSqrt() / std::sqrt(s0);
    V.col(0) = v;
    Eigen::VectorXd r;
    for (int k = 0; k < N; ++k) {
        r = x.cwiseProduct(V.col(k));
        double ak = V.col(k).dot(r);
        c.eps[k] = ak;
        if (k == N - 1) break;
        r -= ak * V.col(k);
        if (k > 0) r -= c.hop[k - 1] * V.col(k - 1);
        // full reorthogonalization (twice)
        for (int rep = 0; rep < 2; ++rep)
            r -= V.leftCols(k + 1) * (V.leftCols(k + 1).transpose() * r);
        double bk = r.norm();
        if (!(bk > 0.0) || !std::isfinite(bk))
            throw std::runtime_error("map_to_chain: Lanczos breakdown at hop index " +
                                     std::to_string(k));
        c.hop[k] = bk;
        V.col(k + 1) = r / bk;
    }
    return c;
}

}  // namespace

ChainCoefficients map_to_chain(const DiscretizedMeasure& measure, int N, MapMethod method) {
    if (measure.empty_flag || measure.size() == 0) {
        ChainCoefficients c;  // empty chain, kappa0 = 0
        return c;
    }
    check_support(measure, N);
    ChainCoefficients c =
        (method == MapMethod::Stieltjes) ? stieltjes(measure, N) : lanczos(measure, N);
    return c;
}

double cross_validate(const DiscretizedMeasure& measure, int N) {
    ChainCoefficients a = map_to_chain(measure, N, MapMethod::Stieltjes);
    ChainCoefficients b = map_to_chain(measure, N, MapMethod::Lanczos);
    double d = std::abs(a.kappa0 - b.kappa0);
    for (int k = 0; k < a.size(); ++k) d = std::max(d, std::abs(a.eps[k] - b.eps[k]));
    for (int k = 0; k + 1 < a.size(); ++k) d = std::max(d, std::abs(a.hop[k] - b.hop[k]));
    return d;
}

std::uint64_t coefficient_checksum(const ChainCoefficients& c) {
    std::uint64_t h = 1469598103934665603ull;
    auto mix = [&h](const void* p, size_t n) {
        const unsigned char* b = static_cast<const unsigned char*>(p);
        for (size_t i = 0; i < n; ++i) {
            h ^= b[i];
            h *= 1099511628211ull;
        }
    };
    mix(c.eps.data(), sizeof(double) * c.eps.size());
    mix(c.hop.data(), sizeof(double) * c.hop.size());
    mix(&c.kappa0, sizeof(double));
    return h;
}

}  // namespace zeno1f

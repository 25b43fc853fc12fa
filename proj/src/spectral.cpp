#include "zeno1f/spectral.hpp"

#include <cmath>
#include <stdexcept>

#include "zeno1f/quadrature.hpp"

namespace zeno1f {

SpectralDensity SpectralDensity::ohmic_debye(double eta, double omega_c) {
    if (eta < 0.0) throw std::invalid_argument("ohmic_debye: eta must be >= 0");
    if (omega_c <= 0.0) throw std::invalid_argument("ohmic_debye: omega_c must be > 0");
    SpectralDensity J;
    J.kind = BathKind::OhmicDebye;
    J.eta = eta;
    J.omega_c = omega_c;
    return J;
}

SpectralDensity SpectralDensity::one_over_f(double alpha, double omega0, double omega_c) {
    if (alpha < 0.0) throw std::invalid_argument("one_over_f: alpha must be >= 0");
    if (omega0 <= 0.0) throw std::invalid_argument("one_over_f: omega0 must be > 0");
    if (omega_c <= omega0) throw std::invalid_argument("one_over_f: need omega_c > omega0");
    SpectralDensity J;
    J.kind = BathKind::OneOverF;
    J.alpha = alpha;
    J.omega0 = omega0;
    J.omega_c = omega_c;
    return J;
}

double SpectralDensity::operator()(double omega) const {
    if (omega < 0.0) throw std::domain_error("SpectralDensity: omega must be >= 0");
    switch (kind) {
        case BathKind::OhmicDebye:
            return eta * omega * omega_c * omega_c / (omega_c * omega_c + omega * omega);
        case BathKind::OneOverF:
            // hard step edges, no smoothing
            if (omega < omega0 || omega > omega_c) return 0.0;
            return alpha / omega;
    }
    return 0.0;
}

std::pair<double, double> SpectralDensity::quad_support() const {
    if (kind == BathKind::OneOverF) return {omega0, omega_c};
    return {0.0, 20.0 * omega_c};
}

double ThermalizedDensity::operator()(double omega) const {
    if (empty()) return 0.0;
    double j = base(omega);
    if (std::isinf(beta)) return branch == Branch::R ? j : 0.0;
    if (branch == Branch::R) {
        // J/(1 - e^{-bw}); finite limit at w -> 0 only for Ohmic-type J
        if (omega == 0.0) {
            if (base.kind == BathKind::OhmicDebye) return base.eta / beta;
            return 0.0;
        }
        return j / (-std::expm1(-beta * omega));
    }
    // L branch: J/(e^{bw} - 1)
    if (omega == 0.0) {
        if (base.kind == BathKind::OhmicDebye) return base.eta / beta;
        return 0.0;
    }
    return j / std::expm1(beta * omega);
}

std::pair<ThermalizedDensity, ThermalizedDensity>
thermal_split(const SpectralDensity& J, double beta) {
    if (!(beta > 0.0)) throw std::domain_error("thermal_split: beta must be > 0 or inf");
    auto [lo, hi] = J.quad_support();
    ThermalizedDensity L{J, beta, Branch::L, lo, hi};
    ThermalizedDensity R{J, beta, Branch::R, lo, hi};
    return {L, R};
}

DiscretizedMeasure discretize(const ThermalizedDensity& jx, int M, int panels) {
    if (M < 1) throw std::invalid_argument("discretize: M must be >= 1");
    if (panels < 1) throw std::invalid_argument("discretize: panels must be >= 1");
    DiscretizedMeasure m;
    if (jx.empty()) {
        m.empty_flag = true;
        return m;
    }
    double a = jx.omega_min, b = jx.omega_max;
    if (!(b > a)) throw std::invalid_argument("discretize: empty support");

    std::vector<std::pair<double, double>> intervals;
    if (panels == 1 || a <= 0.0) {
        intervals.emplace_back(a, b);
    } else {
        double r = std::pow(b / a, 1.0 / panels);
        double lo = a;
        for (int p = 0; p < panels; ++p) {
            double hi = (p == panels - 1) ? b : lo * r;
            intervals.emplace_back(lo, hi);
            lo = hi;
        }
    }
    int per = M / static_cast<int>(intervals.size());
    int extra = M % static_cast<int>(intervals.size());

    std::vector<double> nodes, weights;
    nodes.reserve(M);
    weights.reserve(M);
    for (size_t p = 0; p < intervals.size(); ++p) {
        int n = per + (static_cast<int>(p) < extra ? 1 : 0);
        if (n == 0) continue;
        auto [x, w] = gauss_legendre(n, intervals[p].first, intervals[p].second);
        for (int j = 0; j < n; ++j) {
            nodes.push_back(x[j]);
            weights.push_back(w[j] * jx(x[j]));
        }
    }
    m.nodes = Eigen::Map<Eigen::VectorXd>(nodes.data(), static_cast<int>(nodes.size()));
    m.weights = Eigen::Map<Eigen::VectorXd>(weights.data(), static_cast<int>(weights.size()));
    return m;
}

}  // namespace zeno1f

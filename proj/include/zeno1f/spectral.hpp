#pragma once

#include <limits>
#include <utility>
#include <vector>

#include <Eigen/Dense>

namespace zeno1f {

enum class BathKind { OhmicDebye, OneOverF };
enum class Branch { L, R };

inline constexpr double kBetaInf = std::numeric_limits<double>::infinity();

// Bath spectral density J(omega). Frequencies are measured in units of the
// qubit tunneling Delta.
struct SpectralDensity {
    BathKind kind = BathKind::OneOverF;
    // OhmicDebye: J(w) = eta * w * wc^2 / (wc^2 + w^2)
    double eta = 0.0;
    // OneOverF:   J(w) = alpha / w on [omega0, omega_c], zero elsewhere
    double alpha = 0.0;
    double omega0 = 0.0;
    double omega_c = 0.0;

    static SpectralDensity ohmic_debye(double eta, double omega_c);
    static SpectralDensity one_over_f(double alpha, double omega0, double omega_c);

    // evaluate; throws std::domain_error for omega < 0
    double operator()(double omega) const;

    // support used for quadrature; the Debye tail is truncated at 20*omega_c
    std::pair<double, double> quad_support() const;
};

// One thermal branch J_L or J_R of the finite-temperature splitting.
struct ThermalizedDensity {
    SpectralDensity base;
    double beta = kBetaInf;
    Branch branch = Branch::R;
    double omega_min = 0.0;
    double omega_max = 0.0;

    bool empty() const { return branch == Branch::L && std::isinf(beta); }
    double operator()(double omega) const;
};

// J_L(w) = J(w)/(e^{bw}-1), J_R(w) = J(w)/(1-e^{-bw}); at beta=inf the L
// branch is identically zero. Throws std::domain_error for beta <= 0.
std::pair<ThermalizedDensity, ThermalizedDensity>
thermal_split(const SpectralDensity& J, double beta);

struct DiscretizedMeasure {
    Eigen::VectorXd nodes;    // strictly increasing
    Eigen::VectorXd weights;  // non-negative
    bool empty_flag = false;  // set for the L branch at beta = inf

    int size() const { return static_cast<int>(nodes.size()); }
    double total_weight() const { return weights.size() ? weights.sum() : 0.0; }
};

// Gauss-Legendre discretization of a thermal branch, weight w_j = w_j^GL * J_X(x_j).
// panels > 1 splits the support into log-spaced panels (useful for 1/f near omega0).
DiscretizedMeasure discretize(const ThermalizedDensity& jx, int M, int panels = 1);

}  // namespace zeno1f

#pragma once

#include <Eigen/Dense>

#include "zeno1f/spectral.hpp"

namespace zeno1f {

// Tridiagonal chain coefficients of a discretized measure: on-site energies
// eps (Jacobi diagonal), hoppings hop (Jacobi off-diagonal) and the edge
// coupling kappa0 = sqrt(total weight).
struct ChainCoefficients {
    Eigen::VectorXd eps;  // length N
    Eigen::VectorXd hop;  // length N-1 (N==0 -> empty chain)
    double kappa0 = 0.0;
    Branch branch = Branch::R;

    int size() const { return static_cast<int>(eps.size()); }
};

enum class MapMethod { Stieltjes, Lanczos };

// Orthogonal-polynomial mapping of a discretized measure onto N chain sites.
// Throws std::invalid_argument when the measure has fewer than N positive-weight
// support points, std::runtime_error on recurrence breakdown.
ChainCoefficients map_to_chain(const DiscretizedMeasure& measure, int N,
                               MapMethod method = MapMethod::Stieltjes);

// Max absolute discrepancy over all eps, hop and kappa0 between the Stieltjes
// and Lanczos routes.
double cross_validate(const DiscretizedMeasure& measure, int N);

// FNV-1a checksum of the coefficient bytes, for run manifests.
std::uint64_t coefficient_checksum(const ChainCoefficients& c);

}  // namespace zeno1f

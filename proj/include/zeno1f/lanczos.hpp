#pragma once

#include <complex>
#include <functional>

#include <Eigen/Dense>

#include "zeno1f/mps.hpp"

namespace zeno1f {

// w = exp(z*A) v for a Hermitian operator A given through its matvec, via a
// Lanczos Krylov subspace of size <= max_dim. Throws std::runtime_error if the
// posterior error estimate does not reach tol within max_dim iterations.
VecC krylov_expv(const std::function<void(const VecC&, VecC&)>& matvec, const VecC& v,
                 cplx z, int max_dim, double tol);

}  // namespace zeno1f

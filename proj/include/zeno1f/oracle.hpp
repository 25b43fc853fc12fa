#pragma once

#include <vector>

#include <Eigen/Sparse>

#include "zeno1f/model.hpp"
#include "zeno1f/tdvp.hpp"
#include "zeno1f/zeno.hpp"

namespace zeno1f {

// Exact full-Hilbert-space instance of a ChainModel (sparse Hamiltonian,
// Krylov propagation). The cap guards against accidental huge builds.
struct DenseInstance {
    Eigen::SparseMatrix<cplx> H;
    VecC psi0;
    std::vector<int> dims;   // kron convention: site 0 slowest
    int system_site = 0;
    long dim = 0;
};

DenseInstance make_dense_instance(const ChainModel& model, long dim_cap = 4096);

struct DenseTrajectory {
    std::vector<double> t;
    std::vector<double> sigma_z;
    std::vector<cplx> survival_amplitude;  // <psi0|psi(t)>
};

DenseTrajectory dense_propagate(const DenseInstance& inst, double T, double dt);

ZenoRecord dense_zeno(const DenseInstance& inst, const MeasurementProtocol& proto);

// NIBA reference: d<sz>/dt + int_0^t f(t-t') <sz(t')> dt' = 0 with
// f(tau) = Delta^2 cos[Q1] exp[-Q2].
struct NibaSpec {
    SpectralDensity J;
    double beta = kBetaInf;
    double delta = 1.0;
    double t_max = 2.0;
    int n_steps = 2000;  // uniform grid, h = t_max / n_steps
    double quad_tol = 1e-10;
};

double niba_Q1(const NibaSpec& spec, double tau);
double niba_Q2(const NibaSpec& spec, double tau);
double niba_kernel(const NibaSpec& spec, double tau);

// Second-order product-integration solution of the Volterra equation for a
// sampled kernel f_k = f(k h); returns s on the same grid with s_0 = 1.
std::vector<double> solve_volterra(const std::vector<double>& kernel, double h);

// <sigma_z(t)> on the grid t_k = k * t_max / n_steps.
std::vector<double> niba_sigma_z(const NibaSpec& spec);

}  // namespace zeno1f

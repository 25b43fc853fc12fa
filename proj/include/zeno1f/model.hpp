#pragma once

#include <complex>
#include <optional>
#include <vector>

#include <Eigen/Dense>

#include "zeno1f/chainmap.hpp"
#include "zeno1f/spectral.hpp"

namespace zeno1f {

using cplx = std::complex<double>;
using MatC = Eigen::MatrixXcd;

// Pauli matrices in the {|e>, |g>} basis, sigma_z|e> = +|e>.
MatC pauli_x();
MatC pauli_z();
// Truncated boson operators on a d-dimensional Fock space.
MatC boson_annihilate(int d);
MatC boson_number(int d);
MatC boson_displacement(int d);  // a^dag + a

struct SystemSpec {
    double delta = 1.0;  // tunneling; H_sys = (delta/2) sigma_x, coupling op sigma_z
};

// Site layout: [L_{N-1} ... L_0, system, R_0 ... R_{N-1}]. The L chain is
// absent at beta = inf, where the layout degenerates to [system, R_0 ...].
struct ChainModel {
    SystemSpec system;
    ChainCoefficients right;
    std::optional<ChainCoefficients> left;
    std::vector<int> local_dims;  // per site, layout order; system site has dim 2
    int system_site = 0;

    int n_sites() const { return static_cast<int>(local_dims.size()); }
};

struct LocalDimPolicy {
    int d_near = 12;    // sites within `near_sites` of the system
    int d_far = 8;
    int near_sites = 4;
    std::vector<int> override_dims;  // per-site override (layout order), empty = none
};

// thermal_split -> discretize -> map_to_chain -> assemble.
ChainModel build_model(const SystemSpec& system, const SpectralDensity& J, double beta,
                       int M, int N, const LocalDimPolicy& dims = {},
                       MapMethod method = MapMethod::Stieltjes, int panels = 1,
                       int N_left = -1);

// Two-site interaction channel X_i (x) Y_{i+1} across bond i.
struct BondChannel {
    MatC left_op;
    MatC right_op;
};

struct TermList {
    std::vector<MatC> onsite;                      // one per site
    std::vector<std::vector<BondChannel>> bonds;   // one list per bond (n_sites-1)
};

// H = sum_i onsite_i + sum_bonds sum_channels X_i Y_{i+1}; the 1/2 coupling
// prefactor is carried in the channel operators, not in kappa0.
TermList nearest_neighbor_terms(const ChainModel& model);

// Direct Kronecker assembly; intended for small instances (tests, oracle).
MatC dense_hamiltonian(const TermList& terms, const std::vector<int>& dims);

// MPO site tensor: (Dl x Dr) block matrix of local operators, lower-triangular
// convention with boundary vectors (0..0,1) on the left, (1,0..0) on the right.
struct MpoTensor {
    int dl = 0, dr = 0;
    std::vector<MatC> op;  // dl*dr entries, row-major: op[a*dr + b]
    const MatC& at(int a, int b) const { return op[a * dr + b]; }
    MatC& at(int a, int b) { return op[a * dr + b]; }
};

struct Mpo {
    std::vector<MpoTensor> w;
    int n_sites() const { return static_cast<int>(w.size()); }
};

Mpo build_mpo(const TermList& terms, const std::vector<int>& dims);

}  // namespace zeno1f

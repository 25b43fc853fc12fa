#pragma once

#include <complex>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "zeno1f/model.hpp"

namespace zeno1f {

using VecC = Eigen::VectorXcd;

// Rank-3 site tensor A(l, s, r), column-major with l fastest:
// index = l + dl*s + dl*d*r.
struct Tensor3 {
    int dl = 0, d = 0, dr = 0;
    VecC a;

    Tensor3() = default;
    Tensor3(int dl_, int d_, int dr_) : dl(dl_), d(d_), dr(dr_) {
        a = VecC::Zero(static_cast<Eigen::Index>(dl_) * d_ * dr_);
    }

    cplx& operator()(int l, int s, int r) { return a[l + static_cast<Eigen::Index>(dl) * (s + static_cast<Eigen::Index>(d) * r)]; }
    cplx operator()(int l, int s, int r) const { return a[l + static_cast<Eigen::Index>(dl) * (s + static_cast<Eigen::Index>(d) * r)]; }

    // (dl*d) x dr view, row index (l, s) with l fastest
    Eigen::Map<MatC> as_left() { return {a.data(), static_cast<Eigen::Index>(dl) * d, dr}; }
    Eigen::Map<const MatC> as_left() const { return {a.data(), static_cast<Eigen::Index>(dl) * d, dr}; }
    // dl x (d*dr) view, column index (s, r) with s fastest
    Eigen::Map<MatC> as_right() { return {a.data(), dl, static_cast<Eigen::Index>(d) * dr}; }
    Eigen::Map<const MatC> as_right() const { return {a.data(), dl, static_cast<Eigen::Index>(d) * dr}; }
};

struct MPSState {
    std::vector<Tensor3> tensors;
    int canonical_center = -1;  // -1 = none established

    int n_sites() const { return static_cast<int>(tensors.size()); }
    int bond_dim(int bond) const { return tensors[bond].dr; }  // bond between site i and i+1
    int max_bond() const;
    std::vector<int> local_dims() const;
};

// Product state: system in |e>, every chain site in its vacuum.
MPSState initial_state(const ChainModel& model);

// Establish mixed-canonical form with the given center; the represented vector
// is unchanged.
void canonicalize(MPSState& state, int center);

// SVD-truncate every bond to chi_max / discarded-weight cutoff. The state must
// be canonical; it is renormalized and left with center 0.
// Returns the max discarded weight over bonds.
double truncate(MPSState& state, int chi_max, double cutoff);

cplx expectation(const MPSState& state, const MatC& op, int site);
double norm(const MPSState& state);
void normalize(MPSState& state);

// <bra|ket>, full transfer contraction.
cplx overlap(const MPSState& bra, const MPSState& ket);

// <psi|H|psi> for an MPO (normalized by <psi|psi>).
cplx expectation_mpo(const MPSState& state, const Mpo& mpo);

// Brute-force reconstruction of the full state vector (small instances only).
VecC to_dense(const MPSState& state);

// Checkpoint: binary per-site tensor dump plus a small manifest header.
void save_checkpoint(const MPSState& state, const std::string& path,
                     const std::string& config_hash = "");
MPSState load_checkpoint(const std::string& path, std::string* config_hash = nullptr);

}  // namespace zeno1f

#pragma once

// MPO environment tensors and local effective-Hamiltonian applications shared
// by expectation contractions and the TDVP integrator.

#include <vector>

#include "zeno1f/model.hpp"
#include "zeno1f/mps.hpp"

namespace zeno1f {

// Environment block: one (chi_bra x chi_ket) matrix per MPO channel.
struct EnvBlock {
    std::vector<MatC> m;
    int channels() const { return static_cast<int>(m.size()); }
};

EnvBlock boundary_left(int channels);   // selects the last MPO row
EnvBlock boundary_right(int channels);  // selects MPO column 0

// Absorb site tensors into the environment from the left / right.
EnvBlock contract_left(const EnvBlock& e, const Tensor3& bra, const MpoTensor& w,
                       const Tensor3& ket);
EnvBlock contract_right(const EnvBlock& e, const Tensor3& bra, const MpoTensor& w,
                        const Tensor3& ket);

// One-site effective Hamiltonian: out(a',s',b') = L W R v.
void apply_heff1(const EnvBlock& L, const MpoTensor& w, const EnvBlock& R,
                 const Tensor3& in, Tensor3& out);

// Zero-site (bond) effective Hamiltonian on a chi_l x chi_r matrix.
void apply_heff0(const EnvBlock& L, const EnvBlock& R, const MatC& in, MatC& out);

// Two-site effective Hamiltonian on a merged tensor with fused physical leg
// s = s1 + d1*s2, applied in factorized form (the pair of MPO tensors is never
// multiplied out).
void apply_heff2(const EnvBlock& L, const MpoTensor& w1, const MpoTensor& w2,
                 const EnvBlock& R, int d1, int d2, const Tensor3& in, Tensor3& out);

// Merge two adjacent MPO tensors into one acting on the fused physical leg
// s = s1 + d1*s2; apply_heff1 with the merged tensor gives the two-site
// effective Hamiltonian (reference path, quadratic in the local dimension).
MpoTensor merge_mpo_pair(const MpoTensor& w1, const MpoTensor& w2);

}  // namespace zeno1f

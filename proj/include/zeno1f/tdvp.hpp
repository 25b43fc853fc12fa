#pragma once

#include <vector>

#include "zeno1f/env.hpp"
#include "zeno1f/model.hpp"
#include "zeno1f/mps.hpp"

namespace zeno1f {

enum class Scheme { OneSite, TwoSite, Hybrid };

struct EvolutionConfig {
    double dt = 0.01;                 // units of 1/Delta
    Scheme scheme = Scheme::Hybrid;
    int krylov_dim = 30;
    double krylov_tol = 1e-12;
    double hybrid_switch_time = 1.0;  // TwoSite before, OneSite after
    int chi_max = 64;
    double svd_cutoff = 1e-10;

    void validate() const;
};

struct Trajectory {
    std::vector<double> t;
    std::vector<double> sigma_z;
    std::vector<double> norm;
    std::vector<int> max_bond;
    std::vector<double> energy;
};

// Symmetric-sweep TDVP integrator for the nearest-neighbor chain Hamiltonian.
// A step advances the state by exp(-i H dt) within the MPS manifold.
class TdvpIntegrator {
public:
    TdvpIntegrator(const ChainModel& model, const EvolutionConfig& cfg);

    void step(MPSState& state);
    // Advance by duration T (rounded to an integer number of steps, dt adjusted
    // to divide T exactly). Observables sampled every `sample_every` steps when
    // traj != nullptr; with_energy adds <H> to the samples.
    void evolve_interval(MPSState& state, double T, Trajectory* traj = nullptr,
                         int sample_every = 1, bool with_energy = false);

    double elapsed() const { return time_; }
    void reset_time(double t = 0.0) { time_ = t; }
    double accumulated_truncation() const { return trunc_accum_; }
    double energy(const MPSState& state) const;
    const Mpo& mpo() const { return mpo_; }
    const ChainModel& model() const { return *model_; }
    // Invalidate cached environments (call after external state mutation).
    void invalidate() { prepared_ = false; }

private:
    void prepare(MPSState& state);
    void sweep_lr(MPSState& state, bool two_site);
    void sweep_rl(MPSState& state, bool two_site);
    Tensor3 evolve_site(const Tensor3& a, const MpoTensor& w, const EnvBlock& l,
                        const EnvBlock& r, cplx z, int site_for_error) const;
    MatC evolve_bond(const MatC& c, const EnvBlock& l, const EnvBlock& r, cplx z,
                     int site_for_error) const;

    const ChainModel* model_;
    EvolutionConfig cfg_;
    Mpo mpo_;
    int system_site_;
    double time_ = 0.0;
    double trunc_accum_ = 0.0;
    bool prepared_ = false;
    std::vector<EnvBlock> lenv_, renv_;
};

}  // namespace zeno1f

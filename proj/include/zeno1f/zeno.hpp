#pragma once

#include <functional>
#include <string>
#include <vector>

#include "zeno1f/model.hpp"
#include "zeno1f/mps.hpp"
#include "zeno1f/tdvp.hpp"

namespace zeno1f {

enum class MeasureMode { NonMarkovian, Markovian };

struct MeasurementProtocol {
    double tau = 0.5;  // units of 1/Delta; made an exact multiple of dt internally
    int n_measurements = 20;
    MeasureMode mode = MeasureMode::NonMarkovian;
    EvolutionConfig evolution;

    void validate() const;
};

struct ZenoStep {
    int index = 0;              // 1-based measurement index
    double t = 0.0;             // i * tau
    double survival_factor = 0.0;   // per-step P~(tau, i)
    double cumulative = 0.0;        // P_sur(i tau)
    double gamma = 0.0;             // -ln P_sur / (i tau)
};

struct ZenoRecord {
    std::vector<ZenoStep> steps;
    double tau = 0.0;
    MeasureMode mode = MeasureMode::NonMarkovian;
    bool underflow = false;  // protocol terminated early at the underflow floor
};

// Per-measurement-cycle hook (checkpointing, progress); receives the record so
// far and the current state.
using CycleHook = std::function<void(const ZenoRecord&, const MPSState&, int)>;

// resume_state/resume_steps continue an interrupted NonMarkovian run from a
// checkpointed state and its completed measurement cycles.
ZenoRecord run_protocol(const ChainModel& model, const MeasurementProtocol& proto,
                        const CycleHook& hook = {}, MPSState* resume_state = nullptr,
                        const std::vector<ZenoStep>* resume_steps = nullptr);

// Gamma(tau, n tau) series from a record; at n=1 this is the single-interval rate.
std::vector<double> effective_decay_rate(const ZenoRecord& record);

enum class ZenoLabel { QZE, QAZE, Flat };

struct GammaAtTau {
    double tau;
    std::vector<double> t;      // measurement times of this run
    std::vector<double> gamma;  // Gamma(tau, t)
};

struct ClassifiedInterval {
    double tau_lo = 0.0, tau_hi = 0.0;
    double slope = 0.0;
    ZenoLabel label = ZenoLabel::Flat;
};

// Gamma at a common time t by piecewise-linear interpolation of each run's
// (t, Gamma) series; runs not covering t are excluded (excluded_taus reports
// them). Finite-difference slope between adjacent tau points: positive = QZE,
// negative = QAZE, |slope| <= flat_tol = Flat.
std::vector<ClassifiedInterval> classify(const std::vector<GammaAtTau>& runs, double t,
                                         double flat_tol = 1e-12,
                                         std::vector<double>* excluded_taus = nullptr);

// Linear interpolation helper used by classify (exposed for tests/summary output).
bool interp_gamma(const GammaAtTau& run, double t, double* gamma_out);

std::string to_string(ZenoLabel label);

}  // namespace zeno1f

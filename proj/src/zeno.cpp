#include "zeno1f/zeno.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace zeno1f {

void MeasurementProtocol::validate() const {
    if (!(tau > 0.0)) throw std::invalid_argument("MeasurementProtocol: tau must be > 0");
    if (n_measurements < 1)
        throw std::invalid_argument("MeasurementProtocol: n_measurements must be >= 1");
    evolution.validate();
}

namespace {

constexpr double kUnderflowFloor = 1e-300;

// Project the system site onto |e>; returns the survival factor and leaves the
// state normalized with canonical center at the system site.
double project_system(MPSState& state, int system_site) {
    canonicalize(state, system_site);
    Tensor3& t = state.tensors[system_site];
    double before2 = t.a.squaredNorm();
    for (int s = 1; s < t.d; ++s)
        for (int r = 0; r < t.dr; ++r)
            for (int l = 0; l < t.dl; ++l) t(l, s, r) = 0.0;
    double after2 = t.a.squaredNorm();
    if (before2 <= 0.0) throw std::runtime_error("project_system: zero-norm state");
    double factor = after2 / before2;
    if (after2 > 0.0) t.a /= std::sqrt(after2);
    return factor;
}

}  // namespace

ZenoRecord run_protocol(const ChainModel& model, const MeasurementProtocol& proto,
                        const CycleHook& hook, MPSState* resume_state,
                        const std::vector<ZenoStep>* resume_steps) {
    proto.validate();
    EvolutionConfig cfg = proto.evolution;
    // tau must be an exact multiple of dt
    int steps_per_tau = std::max(1, static_cast<int>(std::llround(proto.tau / cfg.dt)));
    cfg.dt = proto.tau / steps_per_tau;

    ZenoRecord rec;
    rec.tau = proto.tau;
    rec.mode = proto.mode;

    if (proto.mode == MeasureMode::Markovian) {
        MPSState state = initial_state(model);
        TdvpIntegrator integ(model, cfg);
        integ.evolve_interval(state, proto.tau);
        double p1 = project_system(state, model.system_site);
        double cum = 1.0;
        for (int i = 1; i <= proto.n_measurements; ++i) {
            cum *= p1;
            double t = i * proto.tau;
            rec.steps.push_back({i, t, p1, cum, -std::log(cum) / t});
            if (cum < kUnderflowFloor) {
                rec.underflow = true;
                break;
            }
        }
        return rec;
    }

    MPSState state = initial_state(model);
    TdvpIntegrator integ(model, cfg);
    double cum = 1.0;
    int start = 1;
    if (resume_state && resume_steps && !resume_steps->empty()) {
        state = *resume_state;
        rec.steps = *resume_steps;
        cum = rec.steps.back().cumulative;
        start = rec.steps.back().index + 1;
        integ.reset_time(rec.steps.back().t);
    }
    for (int i = start; i <= proto.n_measurements; ++i) {
        integ.evolve_interval(state, proto.tau);
        double p = project_system(state, model.system_site);
        integ.invalidate();  // projection changed the state under the cached envs
        cum *= p;
        double t = i * proto.tau;
        rec.steps.push_back({i, t, p, cum, -std::log(cum) / t});
        if (hook) hook(rec, state, i);
        if (cum < kUnderflowFloor) {
            rec.underflow = true;
            break;
        }
    }
    return rec;
}

std::vector<double> effective_decay_rate(const ZenoRecord& record) {
    if (record.steps.empty())
        throw std::invalid_argument("effective_decay_rate: empty record");
    std::vector<double> g;
    g.reserve(record.steps.size());
    for (const ZenoStep& s : record.steps) g.push_back(-std::log(s.cumulative) / s.t);
    return g;
}

bool interp_gamma(const GammaAtTau& run, double t, double* gamma_out) {
    if (run.t.empty() || t < run.t.front() - 1e-12 || t > run.t.back() + 1e-12) return false;
    auto it = std::lower_bound(run.t.begin(), run.t.end(), t);
    size_t j = static_cast<size_t>(it - run.t.begin());
    if (j >= run.t.size()) j = run.t.size() - 1;
    if (std::abs(run.t[j] - t) < 1e-12 || j == 0) {
        *gamma_out = run.gamma[j];
        return true;
    }
    double t0 = run.t[j - 1], t1 = run.t[j];
    double w = (t - t0) / (t1 - t0);
    *gamma_out = (1.0 - w) * run.gamma[j - 1] + w * run.gamma[j];
    return true;
}

std::vector<ClassifiedInterval> classify(const std::vector<GammaAtTau>& runs, double t,
                                         double flat_tol,
                                         std::vector<double>* excluded_taus) {
    std::vector<std::pair<double, double>> pts;  // (tau, gamma at t)
    for (const GammaAtTau& r : runs) {
        double g;
        if (interp_gamma(r, t, &g)) {
            pts.emplace_back(r.tau, g);
        } else if (excluded_taus) {
            excluded_taus->push_back(r.tau);
        }
    }
    if (pts.size() < 2)
        throw std::invalid_argument("classify: need >= 2 tau points covering t");
    std::sort(pts.begin(), pts.end());
    std::vector<ClassifiedInterval> out;
    for (size_t i = 0; i + 1 < pts.size(); ++i) {
        ClassifiedInterval c;
        c.tau_lo = pts[i].first;
        c.tau_hi = pts[i + 1].first;
        c.slope = (pts[i + 1].second - pts[i].second) / (c.tau_hi - c.tau_lo);
        c.label = std::abs(c.slope) <= flat_tol ? ZenoLabel::Flat
                  : c.slope > 0.0              ? ZenoLabel::QZE
                                               : ZenoLabel::QAZE;
        out.push_back(c);
    }
    return out;
}

std::string to_string(ZenoLabel label) {
    switch (label) {
        case ZenoLabel::QZE: return "QZE";
        case ZenoLabel::QAZE: return "QAZE";
        case ZenoLabel::Flat: return "flat";
    }
    return "?";
}

}  // namespace zeno1f

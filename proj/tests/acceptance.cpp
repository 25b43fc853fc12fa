// Acceptance harness: one criterion per command-line argument (1..11), all by
// default. Long-running protocol results are cached under acceptance_cache/ in
// the working directory and resume at measurement-cycle granularity.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "zeno1f/oracle.hpp"
#include "zeno1f/quadrature.hpp"
#include "zeno1f/runner.hpp"
#include "zeno1f/zeno.hpp"

using namespace zeno1f;
namespace fs = std::filesystem;

namespace {

double now_s() {
    using clock = std::chrono::steady_clock;
    static const clock::time_point t0 = clock::now();
    return std::chrono::duration<double>(clock::now() - t0).count();
}

// ---------- cached measurement-protocol runs ----------

const char* kCacheDir = "acceptance_cache";

bool load_record_csv(const std::string& path, ZenoRecord* rec) {
    std::ifstream f(path);
    if (!f) return false;
    std::string line;
    std::getline(f, line);  // header
    rec->steps.clear();
    while (std::getline(f, line)) {
        ZenoStep s;
        if (std::sscanf(line.c_str(), "%d,%lf,%lf,%lf,%lf", &s.index, &s.t,
                        &s.survival_factor, &s.cumulative, &s.gamma) == 5)
            rec->steps.push_back(s);
    }
    return !rec->steps.empty();
}

void save_record_csv(const std::string& path, const ZenoRecord& rec) {
    std::ofstream f(path);
    f << "step_index,t,survival_factor,cumulative_survival,gamma\n";
    for (const ZenoStep& s : rec.steps) {
        char buf[160];
        std::snprintf(buf, sizeof(buf), "%d,%.17g,%.17g,%.17g,%.17g\n", s.index, s.t,
                      s.survival_factor, s.cumulative, s.gamma);
        f << buf;
    }
}

bool load_steps(const std::string& path, std::vector<ZenoStep>* steps) {
    std::ifstream f(path);
    if (!f) return false;
    steps->clear();
    std::string line;
    while (std::getline(f, line)) {
        ZenoStep s;
        if (std::sscanf(line.c_str(), "%d %lf %lf %lf %lf", &s.index, &s.t,
                        &s.survival_factor, &s.cumulative, &s.gamma) == 5)
            steps->push_back(s);
    }
    return !steps->empty();
}

ZenoRecord cached_protocol(const std::string& key, const ChainModel& model,
                           const MeasurementProtocol& proto) {
    fs::create_directories(kCacheDir);
    std::string base = std::string(kCacheDir) + "/" + key;
    ZenoRecord rec;
    if (load_record_csv(base + ".csv", &rec) &&
        static_cast<int>(rec.steps.size()) >= proto.n_measurements) {
        rec.tau = proto.tau;
        return rec;
    }
    MPSState resume_state;
    std::vector<ZenoStep> resume_steps;
    bool resuming = false;
    if (load_steps(base + ".steps", &resume_steps)) {
        try {
            resume_state = load_checkpoint(base + ".ckpt");
            resuming = true;
        } catch (const std::exception&) {
            resume_steps.clear();
        }
    }
    CycleHook hook = [&](const ZenoRecord& r, const MPSState& st, int) {
        save_checkpoint(st, base + ".ckpt.tmp");
        std::ofstream f(base + ".steps.tmp");
        for (const ZenoStep& s : r.steps) {
            char buf[160];
            std::snprintf(buf, sizeof(buf), "%d %.17g %.17g %.17g %.17g\n", s.index, s.t,
                          s.survival_factor, s.cumulative, s.gamma);
            f << buf;
        }
        f.close();
        fs::rename(base + ".ckpt.tmp", base + ".ckpt");
        fs::rename(base + ".steps.tmp", base + ".steps");
        std::printf("  [%s] cycle %d/%d t=%.2f chi=%d elapsed=%.0fs\n", key.c_str(),
                    r.steps.back().index, proto.n_measurements, r.steps.back().t,
                    st.max_bond(), now_s());
        std::fflush(stdout);
    };
    rec = run_protocol(model, proto, hook, resuming ? &resume_state : nullptr,
                       resuming ? &resume_steps : nullptr);
    save_record_csv(base + ".csv", rec);
    std::error_code ec;
    fs::remove(base + ".ckpt", ec);
    fs::remove(base + ".steps", ec);
    return rec;
}

// ---------- production-instance builders ----------

struct ProdParams {
    double alpha = 0.5;
    double beta = kBetaInf;  // units of 1/Delta; omega_c = 10
    int N = 60;
    int d_near = 12;
    int d_far = 8;
    int chi = 64;
    double dt = 0.02;
};

ChainModel prod_model(const ProdParams& p) {
    auto J = SpectralDensity::one_over_f(p.alpha, 0.1, 10.0);
    LocalDimPolicy dims;
    dims.d_near = p.d_near;
    dims.d_far = p.d_far;
    return build_model(SystemSpec{1.0}, J, p.beta, 400, p.N, dims);
}

EvolutionConfig prod_evolution(const ProdParams& p) {
    EvolutionConfig e;
    e.dt = p.dt;
    e.scheme = Scheme::TwoSite;
    e.chi_max = p.chi;
    e.svd_cutoff = 1e-10;
    e.krylov_tol = 1e-10;
    return e;
}

std::string prod_key(const char* tag, const ProdParams& p, double tau, int n) {
    char buf[160];
    std::snprintf(buf, sizeof(buf), "%s_a%g_b%s%g_tau%g_n%d_N%d_d%d-%d_chi%d_dt%g", tag,
                  p.alpha, std::isinf(p.beta) ? "inf" : "", std::isinf(p.beta) ? 0.0 : p.beta,
                  tau, n, p.N, p.d_near, p.d_far, p.chi, p.dt);
    return buf;
}

ZenoRecord prod_run(const char* tag, const ProdParams& p, double tau, int n) {
    MeasurementProtocol proto;
    proto.tau = tau;
    proto.n_measurements = n;
    proto.evolution = prod_evolution(p);
    return cached_protocol(prod_key(tag, p, tau, n), prod_model(p), proto);
}

GammaAtTau gamma_series(const ZenoRecord& rec, double tau) {
    GammaAtTau g;
    g.tau = tau;
    for (const ZenoStep& s : rec.steps) {
        g.t.push_back(s.t);
        g.gamma.push_back(s.gamma);
    }
    return g;
}

const std::vector<double> kTauGrid{0.2, 0.4, 0.8, 1.2, 1.6, 2.0};

int cycles_to(double t_target, double tau) {
    return static_cast<int>(std::ceil(t_target / tau - 1e-9));
}

// ---------- criteria ----------

bool criterion1() {
    double t0 = now_s();
    bool ok = true;
    for (double beta : {kBetaInf, 1.5}) {
        ProdParams p;
        p.alpha = 0.5;
        p.beta = beta;
        p.N = 3;
        p.d_near = 6;
        p.d_far = 6;
        p.chi = 64;
        ChainModel model = prod_model(p);

        DenseInstance inst = make_dense_instance(model, 1 << 20);
        DenseTrajectory ref = dense_propagate(inst, 5.0, 0.05);

        EvolutionConfig e;
        e.dt = 0.02;
        e.scheme = Scheme::TwoSite;
        // at zero temperature the full rank is 12, so no truncation at all;
        // the doubled chain needs a tight discarded-weight cutoff instead
        e.chi_max = std::isinf(beta) ? 64 : 128;
        e.svd_cutoff = std::isinf(beta) ? 0.0 : 3e-15;
        e.krylov_tol = 1e-12;
        TdvpIntegrator integ(model, e);
        MPSState s = initial_state(model);
        double max_dev = 0.0;
        for (size_t k = 1; k < ref.t.size(); ++k) {
            integ.evolve_interval(s, 0.05);
            double sz = expectation(s, pauli_z(), model.system_site).real();
            max_dev = std::max(max_dev, std::abs(sz - ref.sigma_z[k]));
        }
        std::printf("  beta=%s: max |<sz>_mps - <sz>_exact| = %.3e (chi=%d)\n",
                    std::isinf(beta) ? "inf" : "1.5", max_dev, s.max_bond());
        ok = ok && max_dev < 1e-6;
    }
    double rt = now_s() - t0;
    std::printf("  runtime %.1fs (budget 120s)\n", rt);
    return ok && rt < 120.0;
}

bool criterion2() {
    auto J = SpectralDensity::one_over_f(0.0, 0.1, 10.0);
    ChainModel model = build_model(SystemSpec{1.0}, J, kBetaInf, 8, 2, {});
    bool ok = true;
    for (double tau : {0.1, 0.5, 1.0}) {
        for (int n : {1, 10}) {
            MeasurementProtocol proto;
            proto.tau = tau;
            proto.n_measurements = n;
            proto.evolution.scheme = Scheme::OneSite;
            proto.evolution.dt = 0.001;
            ZenoRecord rec = run_protocol(model, proto);
            double expect = -std::log(std::pow(std::cos(0.5 * tau), 2)) / tau;
            double dev = std::abs(rec.steps.back().gamma - expect);
            std::printf("  tau=%.1f n=%2d: |Gamma - analytic| = %.2e\n", tau, n, dev);
            ok = ok && dev < 1e-8;
        }
    }
    return ok;
}

bool criterion3() {
    bool ok = true;
    for (double alpha : {0.5, 2.0}) {
        auto J = SpectralDensity::one_over_f(alpha, 0.1, 10.0);
        LocalDimPolicy dims;
        dims.d_near = 8;
        dims.d_far = 6;
        ChainModel model = build_model(SystemSpec{0.0}, J, kBetaInf, 80, 10, dims);
        MeasurementProtocol proto;
        proto.tau = 0.5;
        proto.n_measurements = 10;
        proto.evolution.dt = 0.02;
        proto.evolution.scheme = Scheme::TwoSite;
        proto.evolution.chi_max = 32;
        ZenoRecord rec = run_protocol(model, proto);
        double dev = 0.0;
        for (const ZenoStep& s : rec.steps) dev = std::max(dev, std::abs(s.cumulative - 1.0));
        std::printf("  alpha=%.1f: max |P_sur - 1| = %.2e\n", alpha, dev);
        ok = ok && dev < 1e-8;
    }
    return ok;
}

bool criterion4() {
    double beta = 1.5;
    double worst = 0.0;
    for (auto J : {SpectralDensity::one_over_f(0.5, 0.1, 10.0),
                   SpectralDensity::ohmic_debye(0.4, 4.0)}) {
        auto [L, R] = thermal_split(J, beta);
        auto [lo, hi] = J.quad_support();
        if (lo <= 0.0) lo = hi * 1e-6;
        for (int k = 0; k < 1000; ++k) {
            double w = lo * std::pow(hi / lo, (k + 0.5) / 1000.0);
            double lhs = L(w) * std::exp(beta * w);
            double rhs = R(w);
            worst = std::max(worst, std::abs(lhs - rhs) / rhs);
        }
    }
    std::printf("  max relative detailed-balance violation = %.2e over 2x1000 frequencies\n",
                worst);
    return worst < 1e-12;
}

bool criterion5() {
    auto [x, w] = gauss_legendre(200, 0.0, 1.0);
    DiscretizedMeasure flat;
    flat.nodes = x;
    flat.weights = w;
    auto c = map_to_chain(flat, 8);
    double dev = 0.0;
    for (int k = 0; k < 8; ++k) dev = std::max(dev, std::abs(c.eps[k] - 0.5));
    for (int k = 0; k < 7; ++k) {
        double n = k + 1;
        dev = std::max(dev, std::abs(c.hop[k] - n / (2.0 * std::sqrt(4.0 * n * n - 1.0))));
    }
    std::printf("  flat-measure closed form: max deviation = %.2e\n", dev);

    auto J = SpectralDensity::one_over_f(0.5, 0.1, 10.0);
    auto [L, R] = thermal_split(J, kBetaInf);
    double disc = cross_validate(discretize(R, 400), 60);
    std::printf("  Stieltjes vs Lanczos (M=400, N=60): max discrepancy = %.2e\n", disc);
    return dev < 1e-10 && disc < 1e-10;
}

bool criterion6() {
    ProdParams p;
    p.alpha = 0.5;
    p.N = 3;
    p.d_near = 6;
    p.d_far = 6;
    ChainModel model = prod_model(p);

    EvolutionConfig grow;
    grow.dt = 0.01;
    grow.scheme = Scheme::TwoSite;
    grow.chi_max = 64;
    grow.svd_cutoff = 0.0;
    TdvpIntegrator warm(model, grow);
    MPSState s = initial_state(model);
    warm.evolve_interval(s, 1.0);

    EvolutionConfig one;
    one.dt = 0.01;
    one.scheme = Scheme::OneSite;
    one.chi_max = 64;
    TdvpIntegrator integ(model, one);
    double e0 = integ.energy(s);
    integ.evolve_interval(s, 10.0);
    double norm_dev = std::abs(norm(s) - 1.0) / 10.0;
    // the initial energy vanishes for this model, so normalize by the coupling
    // scale kappa0 instead of |E0|
    double scale = std::max(std::abs(e0), model.right.kappa0);
    double e_drift = std::abs(integ.energy(s) - e0) / scale;
    std::printf("  one-site norm deviation: %.2e per unit time\n", norm_dev);
    std::printf("  relative energy drift over Dt=10: %.2e\n", e_drift);

    EvolutionConfig limit;
    limit.dt = 0.01;
    limit.scheme = Scheme::TwoSite;
    limit.chi_max = 4;
    limit.svd_cutoff = 0.0;
    TdvpIntegrator warm2(model, limit);
    MPSState s0 = initial_state(model);
    warm2.evolve_interval(s0, 0.5);
    auto run = [&](double dt) {
        EvolutionConfig cfg;
        cfg.dt = dt;
        cfg.scheme = Scheme::OneSite;
        cfg.chi_max = 4;
        cfg.krylov_tol = 1e-14;
        TdvpIntegrator it(model, cfg);
        MPSState st = s0;
        it.evolve_interval(st, 1.0);
        return expectation(st, pauli_z(), model.system_site).real();
    };
    double ref = run(0.04 / 16);
    double ratio = std::abs(run(0.04) - ref) / std::abs(run(0.02) - ref);
    std::printf("  dt-halving error ratio: %.2f\n", ratio);
    return norm_dev < 1e-10 && e_drift < 1e-6 && ratio > 3.5 && ratio < 4.5;
}

double spread(const std::vector<double>& v, size_t lo, size_t hi) {
    double mn = v[lo], mx = v[lo];
    for (size_t i = lo; i < hi; ++i) {
        mn = std::min(mn, v[i]);
        mx = std::max(mx, v[i]);
    }
    return mx - mn;
}

bool criterion7() {
    bool ok = true;
    for (double alpha : {0.1, 2.0}) {
        ProdParams p;
        p.alpha = alpha;
        ZenoRecord rec = prod_run("c7", p, 0.5, 20);
        std::vector<double> factors;
        for (const ZenoStep& s : rec.steps) factors.push_back(s.survival_factor);
        if (alpha == 0.1) {
            double sp = spread(factors, 0, factors.size());
            std::printf("  alpha=0.1: survival-factor spread = %.4f (limit 0.02)\n", sp);
            ok = ok && sp < 0.02;
        } else {
            double first = spread(factors, 0, 5);
            double last = spread(factors, 15, 20);
            std::printf("  alpha=2.0: first-5 spread = %.4f, last-5 spread = %.4f\n", first,
                        last);
            ok = ok && last < first;
        }
    }
    return ok;
}

std::vector<GammaAtTau> grid_runs(const char* tag, const ProdParams& base, double t_max) {
    std::vector<GammaAtTau> runs;
    for (double tau : kTauGrid) {
        ProdParams p = base;
        ZenoRecord rec = prod_run(tag, p, tau, cycles_to(t_max, tau));
        runs.push_back(gamma_series(rec, tau));
    }
    return runs;
}

bool check_crossover(const std::vector<GammaAtTau>& runs, bool verbose = true) {
    std::vector<double> g4, g16;
    for (const GammaAtTau& r : runs) {
        double g;
        if (!interp_gamma(r, 4.0, &g)) return false;
        g4.push_back(g);
        if (!interp_gamma(r, 16.0, &g)) return false;
        g16.push_back(g);
    }
    if (verbose) {
        std::printf("  Gamma(tau, t=4):  ");
        for (double g : g4) std::printf("%.4f ", g);
        std::printf("\n  Gamma(tau, t=16): ");
        for (double g : g16) std::printf("%.4f ", g);
        std::printf("\n");
    }
    bool increasing = true;
    for (size_t i = 1; i < g4.size(); ++i) increasing = increasing && g4[i] > g4[i - 1];
    size_t arg = 0;
    for (size_t i = 1; i < g16.size(); ++i)
        if (g16[i] > g16[arg]) arg = i;
    bool interior = arg > 0 && arg + 1 < g16.size();
    if (verbose)
        std::printf("  t=4 strictly increasing: %s; t=16 interior maximum at tau=%.1f: %s\n",
                    increasing ? "yes" : "no", kTauGrid[arg], interior ? "yes" : "no");
    return increasing && interior;
}

bool criterion8() {
    ProdParams p;
    p.alpha = 0.5;
    auto runs = grid_runs("c8", p, 16.0);
    return check_crossover(runs);
}

bool criterion9() {
    ProdParams zero;
    zero.alpha = 0.5;
    auto cold = grid_runs("c8", zero, 16.0);  // shares the criterion-8 cache

    ProdParams warm = zero;
    warm.beta = 1.5;  // beta * omega_c = 15
    auto hot = grid_runs("c9", warm, 16.0);

    auto max_at = [](const std::vector<GammaAtTau>& runs, double t) {
        double best = -1.0;
        for (const auto& r : runs) {
            double g;
            if (interp_gamma(r, t, &g)) best = std::max(best, g);
        }
        return best;
    };
    double g_cold = max_at(cold, 16.0), g_hot = max_at(hot, 16.0);
    std::printf("  max Gamma(t=16): zero T %.4f, beta*omega_c=15 %.4f (reduction %.0f%%)\n",
                g_cold, g_hot, 100.0 * (1.0 - g_hot / g_cold));
    bool reduced = g_hot < 0.7 * g_cold;

    ProdParams b10 = zero, b50 = zero;
    b10.beta = 1.0;
    b50.beta = 5.0;
    ZenoRecord r10 = prod_run("c9", b10, 0.8, cycles_to(8.0, 0.8));
    ZenoRecord r50 = prod_run("c9", b50, 0.8, cycles_to(8.0, 0.8));
    bool short_ok = true, long_ok = true;
    for (size_t i = 0; i < r10.steps.size(); ++i) {
        double t = r10.steps[i].t;
        double p10 = r10.steps[i].cumulative, p50 = r50.steps[i].cumulative;
        if (t < 4.0 - 1e-9)
            short_ok = short_ok && p10 > p50;
        else if (t > 4.0 + 1e-9)
            long_ok = long_ok && p10 < p50;
        std::printf("  t=%.1f: P_sur(bwc=10) = %.4f, P_sur(bwc=50) = %.4f\n", t, p10, p50);
    }
    std::printf("  short-time suppression: %s; long-time enhancement: %s\n",
                short_ok ? "yes" : "no", long_ok ? "yes" : "no");
    return reduced && short_ok && long_ok;
}

bool criterion10() {
    NibaSpec spec;
    spec.J = SpectralDensity::one_over_f(0.1, 0.1, 10.0);
    spec.beta = 1.5;
    spec.delta = 1.0;
    spec.t_max = 2.0;
    spec.n_steps = 2000;

    double f0 = niba_kernel(spec, 0.0);
    std::printf("  f(0) = %.15f (expect 1)\n", f0);
    bool f0_ok = f0 == 1.0;

    auto final_val = [&](int n) {
        NibaSpec s2 = spec;
        s2.n_steps = n;
        return niba_sigma_z(s2).back();
    };
    double ref = final_val(16000);
    double ratio = std::abs(final_val(2000) - ref) / std::abs(final_val(4000) - ref);
    std::printf("  solver self-convergence ratio: %.2f\n", ratio);
    bool ratio_ok = ratio > 3.5 && ratio < 4.5;

    std::vector<double> niba = niba_sigma_z(spec);

    ProdParams p;
    p.alpha = 0.1;
    p.beta = 1.5;
    ChainModel model = prod_model(p);
    EvolutionConfig e = prod_evolution(p);
    TdvpIntegrator integ(model, e);
    MPSState s = initial_state(model);
    double max_dev = 0.0;
    int samples = 20;
    for (int k = 1; k <= samples; ++k) {
        integ.evolve_interval(s, spec.t_max / samples);
        double sz = expectation(s, pauli_z(), model.system_site).real();
        double t = k * spec.t_max / samples;
        int idx = static_cast<int>(std::llround(t / spec.t_max * spec.n_steps));
        max_dev = std::max(max_dev, std::abs(sz - niba[idx]));
    }
    std::printf("  max |<sz>_NIBA - <sz>_MPS| for t<2: %.4f (limit 0.05)\n", max_dev);
    return f0_ok && ratio_ok && max_dev < 0.05;
}

bool criterion11() {
    ProdParams base;
    base.alpha = 0.5;
    auto baseline = grid_runs("c8", base, 16.0);

    struct Variant {
        const char* name;
        ProdParams p;
    };
    std::vector<Variant> variants;
    {
        ProdParams p = base;
        p.chi = 96;
        variants.push_back({"chi 64->96", p});
    }
    {
        ProdParams p = base;
        p.d_near = 16;
        variants.push_back({"d 12->16", p});
    }
    {
        ProdParams p = base;
        p.N = 80;
        variants.push_back({"N 60->80", p});
    }
    {
        ProdParams p = base;
        p.dt = 0.01;
        variants.push_back({"dt 0.02->0.01", p});
    }

    bool ok = true;
    for (const Variant& v : variants) {
        auto runs = grid_runs("c11", v.p, 16.0);
        double worst = 0.0;
        for (size_t i = 0; i < runs.size(); ++i) {
            for (double t : {4.0, 16.0}) {
                double g0, g1;
                if (!interp_gamma(baseline[i], t, &g0) || !interp_gamma(runs[i], t, &g1)) {
                    ok = false;
                    continue;
                }
                worst = std::max(worst, std::abs(g1 - g0) / std::abs(g0));
            }
        }
        std::printf("  %s: max relative Gamma change = %.3f%%\n", v.name, 100.0 * worst);
        ok = ok && worst < 0.01;
    }
    return ok;
}

}  // namespace

int main(int argc, char** argv) {
    using Fn = bool (*)();
    Fn fns[11] = {criterion1, criterion2, criterion3, criterion4,  criterion5, criterion6,
                  criterion7, criterion8, criterion9, criterion10, criterion11};
    std::vector<int> which;
    for (int i = 1; i < argc; ++i) {
        int c = std::atoi(argv[i]);
        if (c < 1 || c > 11) {
            std::fprintf(stderr, "usage: %s [criterion 1..11]...\n", argv[0]);
            return 2;
        }
        which.push_back(c);
    }
    if (which.empty())
        for (int c = 1; c <= 11; ++c) which.push_back(c);

    int failures = 0;
    for (int c : which) {
        std::printf("criterion %d:\n", c);
        std::fflush(stdout);
        bool ok = false;
        try {
            ok = fns[c - 1]();
        } catch (const std::exception& e) {
            std::printf("  exception: %s\n", e.what());
        }
        std::printf("criterion %d: %s\n", c, ok ? "PASS" : "FAIL");
        std::fflush(stdout);
        if (!ok) ++failures;
    }
    return failures == 0 ? 0 : 1;
}

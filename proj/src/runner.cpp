#include "zeno1f/runner.hpp"

#include <atomic>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <stdexcept>
#include <thread>

#include <json.hpp>

#include "zeno1f/oracle.hpp"

namespace zeno1f {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

std::string num(double v, const char* f = "%.12g") {
    if (std::isinf(v)) return "inf";
    char buf[40];
    std::snprintf(buf, sizeof(buf), f, v);
    return buf;
}

SpectralDensity with_coupling(const SpectralDensity& base, double coupling) {
    SpectralDensity j = base;
    if (j.kind == BathKind::OneOverF)
        j.alpha = coupling;
    else
        j.eta = coupling;
    return j;
}

double base_coupling(const SpectralDensity& j) {
    return j.kind == BathKind::OneOverF ? j.alpha : j.eta;
}

ChainModel build_point_model(const RunConfig& cfg, const SweepPoint& p) {
    SpectralDensity J = with_coupling(cfg.spectral, p.alpha);
    SystemSpec sys{cfg.delta};
    return build_model(sys, J, p.beta, cfg.chain.M, cfg.chain.N, cfg.chain.dims,
                       cfg.chain.method, cfg.chain.panels, cfg.chain.N_left);
}

void dump_coefficients(const ChainCoefficients& c, const std::string& path) {
    std::ofstream f(path);
    f << "# branch " << (c.branch == Branch::R ? "R" : "L") << " kappa0 "
      << num(c.kappa0, "%.17g") << "\n";
    f << "# index eps hop\n";
    for (int k = 0; k < c.size(); ++k)
        f << k << " " << num(c.eps[k], "%.17g") << " "
          << (k + 1 < c.size() ? num(c.hop[k], "%.17g") : std::string("-")) << "\n";
}

void write_run_csv(const ZenoRecord& rec, const std::string& path) {
    std::ofstream f(path);
    f << "step_index,t,survival_factor,cumulative_survival,gamma\n";
    for (const ZenoStep& s : rec.steps)
        f << s.index << "," << num(s.t) << "," << num(s.survival_factor) << ","
          << num(s.cumulative) << "," << num(s.gamma) << "\n";
}

json model_summary(const ChainModel& m) {
    json s;
    s["n_sites"] = m.n_sites();
    s["system_site"] = m.system_site;
    s["local_dims"] = m.local_dims;
    s["kappa0_R"] = num(m.right.kappa0, "%.17g");
    s["kappa0_L"] = m.left ? num(m.left->kappa0, "%.17g") : "0";
    s["N_R"] = m.right.size();
    s["N_L"] = m.left ? m.left->size() : 0;
    return s;
}

void write_manifest(const RunConfig& cfg, const SweepPoint& p, const ChainModel& model,
                    const std::string& path, const std::string& backend = "mps") {
    json m;
    m["version"] = kVersionString;
    m["config_hash"] = config_hash(cfg);
    m["backend"] = backend;
    m["alpha"] = num(p.alpha, "%.17g");
    m["beta_delta"] = num(p.beta, "%.17g");
    m["beta_omega_c"] = std::isinf(p.beta) ? "inf" : num(p.beta * cfg.spectral.omega_c, "%.17g");
    m["tau"] = num(p.tau, "%.17g");
    m["n_measurements"] = p.n_measurements;
    m["omega0"] = num(cfg.spectral.omega0, "%.17g");
    m["omega_c"] = num(cfg.spectral.omega_c, "%.17g");
    m["delta"] = num(cfg.delta, "%.17g");
    char buf[20];
    std::snprintf(buf, sizeof(buf), "%016llx",
                  static_cast<unsigned long long>(coefficient_checksum(model.right)));
    m["chain_checksum_R"] = buf;
    if (model.left) {
        std::snprintf(buf, sizeof(buf), "%016llx",
                      static_cast<unsigned long long>(coefficient_checksum(*model.left)));
        m["chain_checksum_L"] = buf;
    }
    m["model"] = model_summary(model);
    std::ofstream f(path);
    f << m.dump(2) << "\n";
}

struct CheckpointFiles {
    std::string state;
    std::string progress;
};

CheckpointFiles ckpt_files(const std::string& dir) {
    return {dir + "/state.ckpt", dir + "/progress.json"};
}

void save_progress(const ZenoRecord& rec, const MPSState& state, const std::string& dir,
                   const std::string& hash) {
    CheckpointFiles ck = ckpt_files(dir);
    save_checkpoint(state, ck.state + ".tmp", hash);
    json p;
    p["config_hash"] = hash;
    json steps = json::array();
    for (const ZenoStep& s : rec.steps)
        steps.push_back({{"index", s.index},
                         {"t", num(s.t, "%.17g")},
                         {"survival_factor", num(s.survival_factor, "%.17g")},
                         {"cumulative", num(s.cumulative, "%.17g")},
                         {"gamma", num(s.gamma, "%.17g")}});
    p["steps"] = steps;
    std::ofstream f(ck.progress + ".tmp");
    f << p.dump() << "\n";
    f.close();
    fs::rename(ck.state + ".tmp", ck.state);
    fs::rename(ck.progress + ".tmp", ck.progress);
}

bool load_progress(const std::string& dir, const std::string& hash, MPSState* state,
                   std::vector<ZenoStep>* steps) {
    CheckpointFiles ck = ckpt_files(dir);
    if (!fs::exists(ck.state) || !fs::exists(ck.progress)) return false;
    std::string saved_hash;
    MPSState st;
    try {
        st = load_checkpoint(ck.state, &saved_hash);
    } catch (const std::exception&) {
        return false;
    }
    if (saved_hash != hash) return false;
    std::ifstream f(ck.progress);
    json p;
    try {
        f >> p;
    } catch (const std::exception&) {
        return false;
    }
    if (p.value("config_hash", "") != hash) return false;
    steps->clear();
    for (const auto& s : p["steps"])
        steps->push_back({s["index"].get<int>(), std::stod(s["t"].get<std::string>()),
                          std::stod(s["survival_factor"].get<std::string>()),
                          std::stod(s["cumulative"].get<std::string>()),
                          std::stod(s["gamma"].get<std::string>())});
    *state = std::move(st);
    return true;
}

SweepResult run_point(const RunConfig& cfg, const SweepPoint& p) {
    SweepResult res;
    res.point = p;
    std::string dir = cfg.output_dir + "/" + run_dir_name(p);
    fs::create_directories(dir);
    try {
        ChainModel model = build_point_model(cfg, p);
        write_manifest(cfg, p, model, dir + "/manifest.json");
        if (cfg.chain.dump_coefficients) {
            dump_coefficients(model.right, dir + "/chain_R.txt");
            if (model.left) dump_coefficients(*model.left, dir + "/chain_L.txt");
        }
        MeasurementProtocol proto;
        proto.tau = p.tau;
        proto.n_measurements = p.n_measurements;
        proto.mode = cfg.protocol.mode;
        proto.evolution = cfg.evolution;

        std::string hash = config_hash(cfg);
        CycleHook hook;
        if (cfg.checkpoint)
            hook = [&](const ZenoRecord& rec, const MPSState& st, int) {
                save_progress(rec, st, dir, hash);
            };
        MPSState resume_state;
        std::vector<ZenoStep> resume_steps;
        bool resuming = cfg.checkpoint &&
                        load_progress(dir, hash, &resume_state, &resume_steps);
        res.record = run_protocol(model, proto, hook, resuming ? &resume_state : nullptr,
                                  resuming ? &resume_steps : nullptr);
        write_run_csv(res.record, dir + "/run.csv");
    } catch (const std::exception& e) {
        res.failed = true;
        res.error = e.what();
        std::ofstream f(dir + "/error.txt");
        f << e.what() << "\n";
    }
    return res;
}

void write_summary(const RunConfig& cfg, const std::vector<SweepResult>& results,
                   const std::string& path) {
    // classification context per (alpha, beta) group
    auto group_runs = [&](double alpha, double beta) {
        std::vector<GammaAtTau> runs;
        for (const SweepResult& r : results) {
            if (r.failed || r.point.alpha != alpha) continue;
            bool same_beta = (std::isinf(r.point.beta) && std::isinf(beta)) ||
                             r.point.beta == beta;
            if (!same_beta) continue;
            GammaAtTau g;
            g.tau = r.point.tau;
            for (const ZenoStep& s : r.record.steps) {
                g.t.push_back(s.t);
                g.gamma.push_back(s.gamma);
            }
            runs.push_back(std::move(g));
        }
        return runs;
    };

    std::ofstream f(path);
    f << "alpha,beta,tau,t,gamma,label\n";
    for (const SweepResult& r : results) {
        if (r.failed) {
            f << num(r.point.alpha) << "," << num(r.point.beta) << "," << num(r.point.tau)
              << ",nan,nan,failed\n";
            continue;
        }
        std::vector<GammaAtTau> runs = group_runs(r.point.alpha, r.point.beta);
        for (const ZenoStep& s : r.record.steps) {
            std::string label;
            if (runs.size() >= 2) {
                try {
                    auto intervals = classify(runs, s.t);
                    // label of the interval adjacent to this run's tau
                    for (const auto& iv : intervals)
                        if (iv.tau_lo == r.point.tau || iv.tau_hi == r.point.tau) {
                            label = to_string(iv.label);
                            if (iv.tau_lo == r.point.tau) break;  // prefer right interval
                        }
                } catch (const std::exception&) {
                    label.clear();
                }
            }
            f << num(r.point.alpha) << "," << num(r.point.beta) << "," << num(r.point.tau)
              << "," << num(s.t) << "," << num(s.gamma) << "," << label << "\n";
        }
    }
}

}  // namespace

std::string run_dir_name(const SweepPoint& p) {
    std::string b = std::isinf(p.beta) ? "inf" : num(p.beta, "%.6g");
    return "run_a" + num(p.alpha, "%.6g") + "_b" + b + "_tau" + num(p.tau, "%.6g");
}

std::vector<SweepPoint> expand_sweep(const RunConfig& cfg) {
    std::vector<double> alphas = cfg.sweep_alpha;
    if (alphas.empty()) alphas.push_back(base_coupling(cfg.spectral));
    std::vector<double> betas = cfg.sweep_beta;
    if (betas.empty()) betas.push_back(cfg.beta);
    std::vector<SweepPoint> pts;
    for (double a : alphas)
        for (double b : betas)
            for (double tau : cfg.protocol.tau) {
                SweepPoint p;
                p.alpha = a;
                p.beta = b;
                p.tau = tau;
                p.n_measurements =
                    cfg.protocol.t_max > 0.0
                        ? std::max(1, static_cast<int>(std::llround(cfg.protocol.t_max / tau)))
                        : cfg.protocol.n_measurements;
                pts.push_back(p);
            }
    return pts;
}

int worker_count(const RunConfig& cfg) {
    if (cfg.workers > 0) return cfg.workers;
    if (const char* env = std::getenv("ZENO1F_WORKERS")) {
        int w = std::atoi(env);
        if (w > 0) return w;
    }
    return 1;
}

int run_sweep(const RunConfig& cfg) {
    fs::create_directories(cfg.output_dir);
    std::vector<SweepPoint> pts = expand_sweep(cfg);
    std::vector<SweepResult> results(pts.size());

    int workers = std::min<int>(worker_count(cfg), static_cast<int>(pts.size()));
    if (workers <= 1) {
        for (size_t i = 0; i < pts.size(); ++i) results[i] = run_point(cfg, pts[i]);
    } else {
        std::atomic<size_t> next{0};
        auto work = [&]() {
            for (;;) {
                size_t i = next.fetch_add(1);
                if (i >= pts.size()) break;
                results[i] = run_point(cfg, pts[i]);
            }
        };
        std::vector<std::thread> pool;
        for (int w = 0; w < workers; ++w) pool.emplace_back(work);
        for (auto& t : pool) t.join();
    }

    write_summary(cfg, results, cfg.output_dir + "/summary.csv");
    json m;
    m["version"] = kVersionString;
    m["config_hash"] = config_hash(cfg);
    json runs = json::array();
    for (const SweepResult& r : results)
        runs.push_back({{"dir", run_dir_name(r.point)}, {"failed", r.failed}});
    m["runs"] = runs;
    std::ofstream mf(cfg.output_dir + "/manifest.json");
    mf << m.dump(2) << "\n";
    for (const SweepResult& r : results)
        if (r.failed) return 1;
    return 0;
}

int run_oracle(const RunConfig& cfg) {
    fs::create_directories(cfg.output_dir);
    if (cfg.oracle.backend == "niba") {
        NibaSpec spec;
        spec.J = cfg.spectral;
        spec.beta = cfg.beta;
        spec.delta = cfg.delta;
        spec.t_max = cfg.oracle.t_max;
        spec.n_steps = cfg.oracle.niba_steps;
        spec.quad_tol = cfg.oracle.quad_tol;
        std::vector<double> sz = niba_sigma_z(spec);
        std::ofstream f(cfg.output_dir + "/niba.csv");
        f << "t,sigma_z,backend\n";
        double h = spec.t_max / spec.n_steps;
        for (size_t k = 0; k < sz.size(); ++k)
            f << num(k * h) << "," << num(sz[k]) << ",niba\n";
        json m;
        m["version"] = kVersionString;
        m["config_hash"] = config_hash(cfg);
        m["backend"] = "niba";
        std::ofstream mf(cfg.output_dir + "/manifest.json");
        mf << m.dump(2) << "\n";
        return 0;
    }

    // dense backend: same protocol semantics on the exact Hilbert space
    std::vector<SweepPoint> pts = expand_sweep(cfg);
    std::vector<SweepResult> results(pts.size());
    for (size_t i = 0; i < pts.size(); ++i) {
        SweepResult& res = results[i];
        res.point = pts[i];
        std::string dir = cfg.output_dir + "/" + run_dir_name(pts[i]) + "_dense";
        fs::create_directories(dir);
        try {
            ChainModel model = build_point_model(cfg, pts[i]);
            write_manifest(cfg, pts[i], model, dir + "/manifest.json", "dense");
            DenseInstance inst = make_dense_instance(model, cfg.oracle.dim_cap);
            MeasurementProtocol proto;
            proto.tau = pts[i].tau;
            proto.n_measurements = pts[i].n_measurements;
            proto.mode = cfg.protocol.mode;
            proto.evolution = cfg.evolution;
            res.record = dense_zeno(inst, proto);
            write_run_csv(res.record, dir + "/run.csv");
        } catch (const std::exception& e) {
            res.failed = true;
            res.error = e.what();
            std::ofstream f(dir + "/error.txt");
            f << e.what() << "\n";
        }
    }
    write_summary(cfg, results, cfg.output_dir + "/summary_dense.csv");
    for (const SweepResult& r : results)
        if (r.failed) return 1;
    return 0;
}

int figure_harness(const std::string& figure_id, const std::string& output_dir) {
    RunConfig cfg;  // defaults: 1/f bath with omega0 = 0.1, omega_c = 10
    cfg.output_dir = output_dir.empty() ? ("figures/" + figure_id) : output_dir;
    if (figure_id == "fig2") {
        cfg.sweep_alpha = {0.1, 1.0, 2.0};
        cfg.protocol.tau = {0.5};
        cfg.protocol.n_measurements = 20;
    } else if (figure_id == "fig3") {
        cfg.sweep_alpha = {0.1, 0.5, 1.5};
        cfg.protocol.tau = {0.1, 0.2, 0.4, 0.8};
        cfg.protocol.t_max = 16.0;
    } else if (figure_id == "fig4") {
        cfg.sweep_alpha = {0.1, 0.5, 1.0};
        cfg.protocol.tau = {0.15, 0.2, 0.4, 0.8, 1.2, 1.6, 2.0};
        cfg.protocol.t_max = 20.0;
    } else if (figure_id == "fig5") {
        cfg.sweep_alpha = {0.5};
        cfg.sweep_beta = {10.0 / 10.0, 15.0 / 10.0, 25.0 / 10.0, 50.0 / 10.0};  // beta_omega_c / omega_c
        cfg.protocol.tau = {0.2, 0.4, 0.8, 1.2, 1.6, 2.0};
        cfg.protocol.t_max = 16.0;
    } else {
        throw std::invalid_argument("figure_harness: unknown figure id '" + figure_id + "'");
    }
    return run_sweep(cfg);
}

}  // namespace zeno1f

#include "zeno1f/config.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <set>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

namespace zeno1f {

using nlohmann::json;

namespace {

void reject_unknown(const json& j, const std::set<std::string>& allowed,
                    const std::string& where) {
    for (auto it = j.begin(); it != j.end(); ++it)
        if (!allowed.count(it.key()))
            throw std::invalid_argument("config: unknown key '" + it.key() + "' in " + where);
}

double get_num(const json& j, const std::string& key, double lo, double hi, double dflt,
               const std::string& where) {
    if (!j.contains(key)) return dflt;
    if (!j[key].is_number())
        throw std::invalid_argument("config: " + where + "." + key + " must be a number");
    double v = j[key].get<double>();
    if (v < lo || v > hi)
        throw std::invalid_argument("config: " + where + "." + key + " out of range");
    return v;
}

int get_int(const json& j, const std::string& key, int lo, int hi, int dflt,
            const std::string& where) {
    if (!j.contains(key)) return dflt;
    if (!j[key].is_number_integer())
        throw std::invalid_argument("config: " + where + "." + key + " must be an integer");
    int v = j[key].get<int>();
    if (v < lo || v > hi)
        throw std::invalid_argument("config: " + where + "." + key + " out of range");
    return v;
}

double parse_beta(const json& j, double omega_c) {
    if (j.is_string()) {
        if (j.get<std::string>() == "inf") return kBetaInf;
        throw std::invalid_argument("config: beta string must be \"inf\"");
    }
    if (j.is_number()) {
        double v = j.get<double>();
        if (!(v > 0.0)) throw std::invalid_argument("config: beta must be > 0");
        return v;
    }
    if (j.is_object()) {
        reject_unknown(j, {"beta_delta", "beta_omega_c"}, "beta");
        if (j.contains("beta_delta")) {
            double v = j["beta_delta"].get<double>();
            if (!(v > 0.0)) throw std::invalid_argument("config: beta_delta must be > 0");
            return v;
        }
        if (j.contains("beta_omega_c")) {
            double v = j["beta_omega_c"].get<double>();
            if (!(v > 0.0)) throw std::invalid_argument("config: beta_omega_c must be > 0");
            return v / omega_c;
        }
    }
    throw std::invalid_argument("config: beta must be \"inf\", a number, or an object");
}

SpectralDensity parse_spectral(const json& j) {
    if (!j.is_object()) throw std::invalid_argument("config: spectral must be an object");
    reject_unknown(j, {"kind", "alpha", "omega0", "omega_c", "eta"}, "spectral");
    std::string kind = j.value("kind", "one_over_f");
    if (kind == "one_over_f") {
        double alpha = get_num(j, "alpha", 0.0, 1e6, 0.5, "spectral");
        double w0 = get_num(j, "omega0", 1e-12, 1e6, 0.1, "spectral");
        double wc = get_num(j, "omega_c", 1e-12, 1e9, 10.0, "spectral");
        return SpectralDensity::one_over_f(alpha, w0, wc);
    }
    if (kind == "ohmic_debye") {
        double eta = get_num(j, "eta", 0.0, 1e6, 0.4, "spectral");
        double wc = get_num(j, "omega_c", 1e-12, 1e9, 4.0, "spectral");
        return SpectralDensity::ohmic_debye(eta, wc);
    }
    throw std::invalid_argument("config: spectral.kind must be one_over_f or ohmic_debye");
}

std::vector<double> parse_list(const json& j, const std::string& key, double lo,
                               const std::string& where) {
    std::vector<double> out;
    if (!j.contains(key)) return out;
    if (j[key].is_number()) {
        out.push_back(j[key].get<double>());
    } else if (j[key].is_array()) {
        for (const auto& v : j[key]) out.push_back(v.get<double>());
    } else {
        throw std::invalid_argument("config: " + where + "." + key + " must be number or array");
    }
    for (double v : out)
        if (!(v >= lo)) throw std::invalid_argument("config: " + where + "." + key + " out of range");
    return out;
}

}  // namespace

RunConfig parse_config_string(const std::string& text) {
    json j;
    try {
        j = json::parse(text);
    } catch (const json::parse_error& e) {
        throw std::invalid_argument(std::string("config: JSON parse error: ") + e.what());
    }
    reject_unknown(j,
                   {"delta", "spectral", "beta", "chain", "evolution", "protocol", "oracle",
                    "output_dir", "checkpoint", "workers", "sweep"},
                   "top level");
    RunConfig cfg;
    cfg.delta = get_num(j, "delta", 0.0, 1e6, 1.0, "top");
    if (j.contains("spectral")) cfg.spectral = parse_spectral(j["spectral"]);
    if (j.contains("beta")) cfg.beta = parse_beta(j["beta"], cfg.spectral.omega_c);

    if (j.contains("chain")) {
        const json& c = j["chain"];
        reject_unknown(c,
                       {"M", "N", "N_left", "panels", "d_near", "d_far", "near_sites",
                        "local_dims", "method", "dump_coefficients"},
                       "chain");
        cfg.chain.M = get_int(c, "M", 1, 1000000, 400, "chain");
        cfg.chain.N = get_int(c, "N", 1, 100000, 60, "chain");
        cfg.chain.N_left = get_int(c, "N_left", 1, 100000, -1, "chain");
        cfg.chain.panels = get_int(c, "panels", 1, 1000, 1, "chain");
        cfg.chain.dims.d_near = get_int(c, "d_near", 2, 256, 12, "chain");
        cfg.chain.dims.d_far = get_int(c, "d_far", 2, 256, 8, "chain");
        cfg.chain.dims.near_sites = get_int(c, "near_sites", 0, 100000, 4, "chain");
        if (c.contains("local_dims"))
            for (const auto& v : c["local_dims"])
                cfg.chain.dims.override_dims.push_back(v.get<int>());
        std::string method = c.value("method", "stieltjes");
        if (method == "stieltjes")
            cfg.chain.method = MapMethod::Stieltjes;
        else if (method == "lanczos")
            cfg.chain.method = MapMethod::Lanczos;
        else
            throw std::invalid_argument("config: chain.method must be stieltjes or lanczos");
        cfg.chain.dump_coefficients = c.value("dump_coefficients", false);
        if (cfg.chain.M < 4 * cfg.chain.N)
            throw std::invalid_argument("config: chain.M must be >= 4*N (under-resolved measure)");
    }

    if (j.contains("evolution")) {
        const json& e = j["evolution"];
        reject_unknown(e,
                       {"dt", "scheme", "krylov_dim", "krylov_tol", "hybrid_switch_time",
                        "chi_max", "svd_cutoff"},
                       "evolution");
        cfg.evolution.dt = get_num(e, "dt", 1e-9, 10.0, 0.01, "evolution");
        std::string scheme = e.value("scheme", "hybrid");
        if (scheme == "one_site")
            cfg.evolution.scheme = Scheme::OneSite;
        else if (scheme == "two_site")
            cfg.evolution.scheme = Scheme::TwoSite;
        else if (scheme == "hybrid")
            cfg.evolution.scheme = Scheme::Hybrid;
        else
            throw std::invalid_argument("config: evolution.scheme must be one_site, two_site or hybrid");
        cfg.evolution.krylov_dim = get_int(e, "krylov_dim", 2, 1000, 30, "evolution");
        cfg.evolution.krylov_tol = get_num(e, "krylov_tol", 1e-16, 1.0, 1e-12, "evolution");
        cfg.evolution.hybrid_switch_time = get_num(e, "hybrid_switch_time", 0.0, 1e6, 1.0, "evolution");
        cfg.evolution.chi_max = get_int(e, "chi_max", 1, 100000, 64, "evolution");
        cfg.evolution.svd_cutoff = get_num(e, "svd_cutoff", 0.0, 1.0, 1e-10, "evolution");
    }

    if (j.contains("protocol")) {
        const json& p = j["protocol"];
        reject_unknown(p, {"tau", "n", "t_max", "mode"}, "protocol");
        std::vector<double> taus = parse_list(p, "tau", 1e-9, "protocol");
        if (!taus.empty()) cfg.protocol.tau = taus;
        cfg.protocol.n_measurements = get_int(p, "n", 1, 1000000, 20, "protocol");
        cfg.protocol.t_max = get_num(p, "t_max", 0.0, 1e9, -1.0, "protocol");
        std::string mode = p.value("mode", "non_markovian");
        if (mode == "non_markovian")
            cfg.protocol.mode = MeasureMode::NonMarkovian;
        else if (mode == "markovian")
            cfg.protocol.mode = MeasureMode::Markovian;
        else
            throw std::invalid_argument("config: protocol.mode must be non_markovian or markovian");
    }

    if (j.contains("oracle")) {
        const json& o = j["oracle"];
        reject_unknown(o, {"backend", "dim_cap", "t_max", "dt", "niba_steps", "quad_tol"}, "oracle");
        cfg.oracle.backend = o.value("backend", "dense");
        if (cfg.oracle.backend != "dense" && cfg.oracle.backend != "niba")
            throw std::invalid_argument("config: oracle.backend must be dense or niba");
        cfg.oracle.dim_cap = get_int(o, "dim_cap", 2, 1 << 30, 4096, "oracle");
        cfg.oracle.t_max = get_num(o, "t_max", 0.0, 1e9, 5.0, "oracle");
        cfg.oracle.dt = get_num(o, "dt", 1e-9, 10.0, 0.01, "oracle");
        cfg.oracle.niba_steps = get_int(o, "niba_steps", 2, 100000000, 2000, "oracle");
        cfg.oracle.quad_tol = get_num(o, "quad_tol", 1e-15, 1.0, 1e-10, "oracle");
    }

    if (j.contains("output_dir")) cfg.output_dir = j["output_dir"].get<std::string>();
    if (j.contains("checkpoint")) cfg.checkpoint = j["checkpoint"].get<bool>();
    cfg.workers = get_int(j, "workers", 0, 4096, 0, "top");

    if (j.contains("sweep")) {
        const json& s = j["sweep"];
        reject_unknown(s, {"alpha", "beta_delta", "beta_omega_c"}, "sweep");
        cfg.sweep_alpha = parse_list(s, "alpha", 0.0, "sweep");
        cfg.sweep_beta = parse_list(s, "beta_delta", 0.0, "sweep");
        if (s.contains("beta_omega_c")) {
            if (!cfg.sweep_beta.empty())
                throw std::invalid_argument("config: sweep has both beta_delta and beta_omega_c");
            for (double v : parse_list(s, "beta_omega_c", 0.0, "sweep"))
                cfg.sweep_beta.push_back(v / cfg.spectral.omega_c);
        }
    }
    return cfg;
}

RunConfig parse_config_file(const std::string& path) {
    std::ifstream f(path);
    if (!f) throw std::invalid_argument("config: cannot open " + path);
    std::stringstream ss;
    ss << f.rdbuf();
    return parse_config_string(ss.str());
}

namespace {

std::string fmt(double v) {
    if (std::isinf(v)) return "inf";
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

}  // namespace

std::string canonical_config(const RunConfig& c) {
    json j;
    j["delta"] = fmt(c.delta);
    j["spectral"]["kind"] = c.spectral.kind == BathKind::OneOverF ? "one_over_f" : "ohmic_debye";
    j["spectral"]["alpha"] = fmt(c.spectral.alpha);
    j["spectral"]["eta"] = fmt(c.spectral.eta);
    j["spectral"]["omega0"] = fmt(c.spectral.omega0);
    j["spectral"]["omega_c"] = fmt(c.spectral.omega_c);
    j["beta_delta"] = fmt(c.beta);
    j["beta_omega_c"] = fmt(c.beta_omega_c());
    j["chain"] = {{"M", c.chain.M},
                  {"N", c.chain.N},
                  {"N_left", c.chain.N_left},
                  {"panels", c.chain.panels},
                  {"d_near", c.chain.dims.d_near},
                  {"d_far", c.chain.dims.d_far},
                  {"near_sites", c.chain.dims.near_sites},
                  {"local_dims", c.chain.dims.override_dims},
                  {"method", c.chain.method == MapMethod::Stieltjes ? "stieltjes" : "lanczos"}};
    j["evolution"] = {{"dt", fmt(c.evolution.dt)},
                      {"scheme", c.evolution.scheme == Scheme::OneSite    ? "one_site"
                                 : c.evolution.scheme == Scheme::TwoSite ? "two_site"
                                                                         : "hybrid"},
                      {"krylov_dim", c.evolution.krylov_dim},
                      {"krylov_tol", fmt(c.evolution.krylov_tol)},
                      {"hybrid_switch_time", fmt(c.evolution.hybrid_switch_time)},
                      {"chi_max", c.evolution.chi_max},
                      {"svd_cutoff", fmt(c.evolution.svd_cutoff)}};
    json taus = json::array();
    for (double t : c.protocol.tau) taus.push_back(fmt(t));
    j["protocol"] = {{"tau", taus},
                     {"n", c.protocol.n_measurements},
                     {"t_max", fmt(c.protocol.t_max)},
                     {"mode", c.protocol.mode == MeasureMode::NonMarkovian ? "non_markovian"
                                                                           : "markovian"}};
    json sa = json::array(), sb = json::array();
    for (double v : c.sweep_alpha) sa.push_back(fmt(v));
    for (double v : c.sweep_beta) sb.push_back(fmt(v));
    j["sweep"] = {{"alpha", sa}, {"beta_delta", sb}};
    return j.dump();  // nlohmann::json keeps keys sorted
}

std::string config_hash(const RunConfig& cfg) {
    std::string s = canonical_config(cfg);
    std::uint64_t h = 1469598103934665603ull;
    for (unsigned char ch : s) {
        h ^= ch;
        h *= 1099511628211ull;
    }
    char buf[20];
    std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(h));
    return buf;
}

}  // namespace zeno1f

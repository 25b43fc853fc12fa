#pragma once

#include <optional>
#include <string>
#include <vector>

#include "zeno1f/model.hpp"
#include "zeno1f/tdvp.hpp"
#include "zeno1f/zeno.hpp"

namespace zeno1f {

inline constexpr const char* kVersionString = "zeno1f 0.1.0";

struct ChainConfig {
    int M = 400;
    int N = 60;
    int N_left = -1;  // -1 = same as N
    int panels = 1;
    LocalDimPolicy dims;
    MapMethod method = MapMethod::Stieltjes;
    bool dump_coefficients = false;
};

struct ProtocolConfig {
    std::vector<double> tau = {0.5};
    int n_measurements = 20;
    double t_max = -1.0;  // > 0: per-tau n = round(t_max / tau), overrides n
    MeasureMode mode = MeasureMode::NonMarkovian;
};

struct OracleConfig {
    std::string backend = "dense";  // "dense" or "niba"
    long dim_cap = 4096;
    double t_max = 5.0;
    double dt = 0.01;
    int niba_steps = 2000;
    double quad_tol = 1e-10;
};

struct RunConfig {
    double delta = 1.0;
    SpectralDensity spectral = SpectralDensity::one_over_f(0.5, 0.1, 10.0);
    double beta = kBetaInf;  // in 1/Delta units
    ChainConfig chain;
    EvolutionConfig evolution;
    ProtocolConfig protocol;
    OracleConfig oracle;
    std::string output_dir = "out";
    bool checkpoint = false;
    int workers = 0;  // 0 = from env ZENO1F_WORKERS, else 1

    // sweep axes; empty = single point from the base fields
    std::vector<double> sweep_alpha;
    std::vector<double> sweep_beta;  // in 1/Delta units

    double beta_omega_c() const {
        return std::isinf(beta) ? kBetaInf : beta * spectral.omega_c;
    }
};

// Parse + validate a JSON config file. Unknown keys are rejected; all range
// violations throw std::invalid_argument with the offending key.
RunConfig parse_config_file(const std::string& path);
RunConfig parse_config_string(const std::string& text);

// Canonical serialization (sorted keys, fixed float format) and its FNV-1a hash.
std::string canonical_config(const RunConfig& cfg);
std::string config_hash(const RunConfig& cfg);

}  // namespace zeno1f

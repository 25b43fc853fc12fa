#pragma once

#include <string>
#include <vector>

#include "zeno1f/config.hpp"

namespace zeno1f {

struct SweepPoint {
    double alpha = 0.0;
    double beta = kBetaInf;
    double tau = 0.5;
    int n_measurements = 1;
};

struct SweepResult {
    SweepPoint point;
    ZenoRecord record;
    bool failed = false;
    std::string error;
};

// Cartesian sweep-point expansion in deterministic order (alpha, beta, tau).
std::vector<SweepPoint> expand_sweep(const RunConfig& cfg);

// Execute the sweep: per-run CSV + manifest under output_dir, then summary.csv.
// Returns 0 on success, 1 if any sweep point failed.
int run_sweep(const RunConfig& cfg);

// Oracle backends (dense / NIBA) with the same CSV schema, tagged by backend.
int run_oracle(const RunConfig& cfg);

// Execute one of the predefined parameter grids (fig2..fig5).
int figure_harness(const std::string& figure_id, const std::string& output_dir);

// Number of workers: config value, else ZENO1F_WORKERS, else 1.
int worker_count(const RunConfig& cfg);

std::string run_dir_name(const SweepPoint& p);

}  // namespace zeno1f

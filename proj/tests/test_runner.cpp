#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "zeno1f/runner.hpp"

using namespace zeno1f;
namespace fs = std::filesystem;

namespace {

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

RunConfig tiny_config(const std::string& out) {
    return parse_config_string(R"({
        "spectral": {"kind": "one_over_f", "alpha": 0.3},
        "chain": {"M": 40, "N": 2, "d_near": 3, "d_far": 3, "dump_coefficients": true},
        "evolution": {"dt": 0.05, "scheme": "two_site", "chi_max": 8},
        "protocol": {"tau": 0.5, "n": 2},
        "sweep": {"alpha": [0.3, 0.6]},
        "output_dir": ")" + out + R"("
    })");
}

}  // namespace

TEST_CASE("sweep runner writes per-run files, a summary, and is deterministic") {
    fs::path base = fs::temp_directory_path() / "zeno1f_runner_test";
    fs::remove_all(base);
    RunConfig cfg = tiny_config((base / "a").string());
    REQUIRE(run_sweep(cfg) == 0);

    auto points = expand_sweep(cfg);
    REQUIRE(points.size() == 2);
    for (const auto& p : points) {
        fs::path dir = base / "a" / run_dir_name(p);
        CHECK(fs::exists(dir / "run.csv"));
        CHECK(fs::exists(dir / "manifest.json"));
        CHECK(fs::exists(dir / "chain_R.txt"));
        std::string manifest = slurp(dir / "manifest.json");
        CHECK(manifest.find(config_hash(cfg)) != std::string::npos);
        CHECK(manifest.find(kVersionString) != std::string::npos);
        std::string csv = slurp(dir / "run.csv");
        CHECK(csv.rfind("step_index,t,survival_factor,cumulative_survival,gamma", 0) == 0);
    }
    std::string summary = slurp(base / "a" / "summary.csv");
    CHECK(summary.rfind("alpha,beta,tau,t,gamma,label", 0) == 0);
    CHECK(slurp(base / "a" / "manifest.json").find(config_hash(cfg)) != std::string::npos);

    RunConfig cfg2 = tiny_config((base / "b").string());
    REQUIRE(run_sweep(cfg2) == 0);
    CHECK(summary == slurp(base / "b" / "summary.csv"));
    fs::remove_all(base);
}

#include <doctest.h>

#include <cmath>

#include "zeno1f/oracle.hpp"
#include "zeno1f/zeno.hpp"

using namespace zeno1f;

namespace {

ChainModel small_model(double delta = 1.0, double alpha = 0.5, int N = 3, int d = 4) {
    auto J = SpectralDensity::one_over_f(alpha, 0.1, 10.0);
    LocalDimPolicy dims;
    dims.d_near = d;
    dims.d_far = d;
    return build_model(SystemSpec{delta}, J, kBetaInf, 40, N, dims);
}

EvolutionConfig exact_cfg(double dt = 0.01) {
    EvolutionConfig cfg;
    cfg.dt = dt;
    cfg.scheme = Scheme::TwoSite;
    cfg.chi_max = 64;
    cfg.svd_cutoff = 0.0;
    return cfg;
}

}  // namespace

TEST_CASE("protocol on a small chain matches the exact reference") {
    auto model = small_model();
    MeasurementProtocol proto;
    proto.tau = 0.3;
    proto.n_measurements = 3;
    proto.evolution = exact_cfg();
    ZenoRecord mps = run_protocol(model, proto);
    ZenoRecord exact = dense_zeno(make_dense_instance(model), proto);
    REQUIRE(mps.steps.size() == 3);
    REQUIRE(exact.steps.size() == 3);
    for (size_t i = 0; i < 3; ++i) {
        CHECK(mps.steps[i].survival_factor ==
              doctest::Approx(exact.steps[i].survival_factor).epsilon(1e-5));
        CHECK(mps.steps[i].cumulative ==
              doctest::Approx(exact.steps[i].cumulative).epsilon(1e-5));
    }
}

TEST_CASE("a frozen qubit never decays") {
    auto model = small_model(0.0);
    MeasurementProtocol proto;
    proto.tau = 0.4;
    proto.n_measurements = 5;
    proto.evolution = exact_cfg();
    ZenoRecord rec = run_protocol(model, proto);
    for (const ZenoStep& s : rec.steps) {
        CHECK(s.survival_factor == doctest::Approx(1.0).epsilon(1e-8));
        CHECK(s.cumulative == doctest::Approx(1.0).epsilon(1e-8));
    }
}

TEST_CASE("memoryless variant reuses the first survival factor") {
    auto model = small_model();
    MeasurementProtocol proto;
    proto.tau = 0.3;
    proto.n_measurements = 4;
    proto.mode = MeasureMode::Markovian;
    proto.evolution = exact_cfg();
    ZenoRecord rec = run_protocol(model, proto);
    REQUIRE(rec.steps.size() == 4);
    double p1 = rec.steps[0].survival_factor;
    for (const ZenoStep& s : rec.steps) {
        CHECK(s.survival_factor == doctest::Approx(p1));
        CHECK(s.cumulative == doctest::Approx(std::pow(p1, s.index)).epsilon(1e-12));
    }
}

TEST_CASE("decay rate series follows from the cumulative survival") {
    auto model = small_model();
    MeasurementProtocol proto;
    proto.tau = 0.25;
    proto.n_measurements = 3;
    proto.evolution = exact_cfg();
    ZenoRecord rec = run_protocol(model, proto);
    auto g = effective_decay_rate(rec);
    for (size_t i = 0; i < g.size(); ++i) {
        CHECK(g[i] == doctest::Approx(rec.steps[i].gamma).epsilon(1e-14));
        CHECK(g[i] ==
              doctest::Approx(-std::log(rec.steps[i].cumulative) / rec.steps[i].t));
    }
}

TEST_CASE("interrupted runs resume on the original trajectory") {
    auto model = small_model();
    MeasurementProtocol proto;
    proto.tau = 0.3;
    proto.n_measurements = 4;
    proto.evolution = exact_cfg();
    ZenoRecord full = run_protocol(model, proto);

    MPSState snapshot;
    std::vector<ZenoStep> done;
    CycleHook hook = [&](const ZenoRecord& rec, const MPSState& st, int i) {
        if (i == 2) {
            snapshot = st;
            done = rec.steps;
        }
    };
    run_protocol(model, proto, hook);
    ZenoRecord resumed = run_protocol(model, proto, {}, &snapshot, &done);
    REQUIRE(resumed.steps.size() == 4);
    for (size_t i = 0; i < 4; ++i)
        CHECK(resumed.steps[i].cumulative ==
              doctest::Approx(full.steps[i].cumulative).epsilon(1e-10));
}

TEST_CASE("interpolation of a rate series is piecewise linear") {
    GammaAtTau run;
    run.tau = 0.5;
    run.t = {1.0, 2.0, 3.0};
    run.gamma = {0.1, 0.3, 0.2};
    double g;
    REQUIRE(interp_gamma(run, 1.5, &g));
    CHECK(g == doctest::Approx(0.2));
    REQUIRE(interp_gamma(run, 2.0, &g));
    CHECK(g == doctest::Approx(0.3));
    CHECK_FALSE(interp_gamma(run, 3.5, &g));
    CHECK_FALSE(interp_gamma(run, 0.5, &g));
}

TEST_CASE("classification labels the slope sign between adjacent intervals") {
    auto mk = [](double tau, std::initializer_list<double> gs) {
        GammaAtTau r;
        r.tau = tau;
        double t = 1.0;
        for (double g : gs) {
            r.t.push_back(t);
            r.gamma.push_back(g);
            t += 1.0;
        }
        return r;
    };
    std::vector<GammaAtTau> runs{mk(0.2, {0.1, 0.1}), mk(0.4, {0.3, 0.3}),
                                 mk(0.8, {0.2, 0.2}), mk(1.6, {0.2, 0.2})};
    auto iv = classify(runs, 1.5);
    REQUIRE(iv.size() == 3);
    CHECK(iv[0].label == ZenoLabel::QZE);
    CHECK(iv[1].label == ZenoLabel::QAZE);
    CHECK(iv[2].label == ZenoLabel::Flat);
    CHECK(to_string(iv[0].label) == "QZE");
    CHECK(to_string(iv[1].label) == "QAZE");

    std::vector<double> excluded;
    runs.push_back(mk(3.0, {0.5}));  // covers only t=1
    classify(runs, 1.5, 1e-12, &excluded);
    REQUIRE(excluded.size() == 1);
    CHECK(excluded[0] == 3.0);

    CHECK_THROWS_AS(classify({runs[0]}, 1.5), std::invalid_argument);
}

TEST_CASE("protocol validation") {
    MeasurementProtocol proto;
    proto.tau = 0.0;
    CHECK_THROWS_AS(proto.validate(), std::invalid_argument);
    proto = {};
    proto.n_measurements = 0;
    CHECK_THROWS_AS(proto.validate(), std::invalid_argument);
}

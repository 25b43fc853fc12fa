#include "zeno1f/oracle.hpp"

#include <cmath>
#include <stdexcept>

#include "zeno1f/lanczos.hpp"
#include "zeno1f/quadrature.hpp"

namespace zeno1f {

namespace {

long block_sizes(const std::vector<int>& dims, int site, long* left, long* right) {
    long L = 1, R = 1, total = 1;
    for (int i = 0; i < static_cast<int>(dims.size()); ++i) {
        total *= dims[i];
        if (i < site) L *= dims[i];
        if (i > site) R *= dims[i];
    }
    *left = L;
    *right = R;
    return total;
}

}  // namespace

DenseInstance make_dense_instance(const ChainModel& model, long dim_cap) {
    long total = 1;
    for (int d : model.local_dims) total *= d;
    if (total > dim_cap)
        throw std::invalid_argument("make_dense_instance: dimension " + std::to_string(total) +
                                    " exceeds cap " + std::to_string(dim_cap));
    DenseInstance inst;
    inst.dims = model.local_dims;
    inst.system_site = model.system_site;
    inst.dim = total;

    TermList terms = nearest_neighbor_terms(model);
    std::vector<Eigen::Triplet<cplx>> trips;
    auto add_onsite = [&](const MatC& op, int site) {
        long L, R;
        block_sizes(inst.dims, site, &L, &R);
        int d = inst.dims[site];
        for (int sp = 0; sp < d; ++sp)
            for (int s = 0; s < d; ++s) {
                cplx v = op(sp, s);
                if (v == cplx(0.0)) continue;
                for (long a = 0; a < L; ++a)
                    for (long r = 0; r < R; ++r)
                        trips.emplace_back((a * d + sp) * R + r, (a * d + s) * R + r, v);
            }
    };
    auto add_bond = [&](const MatC& opa, const MatC& opb, int site) {
        long L, R2;
        block_sizes(inst.dims, site, &L, &R2);
        int d1 = inst.dims[site], d2 = inst.dims[site + 1];
        long R = R2 / d2;
        for (int s1p = 0; s1p < d1; ++s1p)
            for (int s1 = 0; s1 < d1; ++s1) {
                cplx va = opa(s1p, s1);
                if (va == cplx(0.0)) continue;
                for (int s2p = 0; s2p < d2; ++s2p)
                    for (int s2 = 0; s2 < d2; ++s2) {
                        cplx v = va * opb(s2p, s2);
                        if (v == cplx(0.0)) continue;
                        for (long a = 0; a < L; ++a)
                            for (long r = 0; r < R; ++r)
                                trips.emplace_back(((a * d1 + s1p) * d2 + s2p) * R + r,
                                                   ((a * d1 + s1) * d2 + s2) * R + r, v);
                    }
            }
    };
    for (size_t i = 0; i < terms.onsite.size(); ++i)
        add_onsite(terms.onsite[i], static_cast<int>(i));
    for (size_t b = 0; b < terms.bonds.size(); ++b)
        for (const BondChannel& ch : terms.bonds[b]) add_bond(ch.left_op, ch.right_op, static_cast<int>(b));

    inst.H.resize(total, total);
    inst.H.setFromTriplets(trips.begin(), trips.end());

    inst.psi0 = VecC::Zero(total);
    inst.psi0[0] = 1.0;  // all site indices 0: system |e>, chains vacuum
    return inst;
}

namespace {

VecC expv_step(const Eigen::SparseMatrix<cplx>& H, const VecC& v, double dt) {
    auto matvec = [&](const VecC& x, VecC& y) { y = H * x; };
    // sub-divide on rare non-convergence of the Krylov subspace
    try {
        return krylov_expv(matvec, v, cplx(0.0, -dt), 80, 1e-13);
    } catch (const std::runtime_error&) {
        VecC half = expv_step(H, v, 0.5 * dt);
        return expv_step(H, half, 0.5 * dt);
    }
}

double sigma_z_diag(const std::vector<int>& dims, int system_site, const VecC& psi) {
    long L, R;
    block_sizes(dims, system_site, &L, &R);
    double acc = 0.0;
    for (long a = 0; a < L; ++a)
        for (int s = 0; s < 2; ++s) {
            double sign = (s == 0) ? 1.0 : -1.0;
            long base = (a * 2 + s) * R;
            for (long r = 0; r < R; ++r) acc += sign * std::norm(psi[base + r]);
        }
    return acc / psi.squaredNorm();
}

double project_excited(const std::vector<int>& dims, int system_site, VecC& psi) {
    long L, R;
    block_sizes(dims, system_site, &L, &R);
    double before = psi.squaredNorm();
    for (long a = 0; a < L; ++a) {
        long base = (a * 2 + 1) * R;  // system |g> block
        psi.segment(base, R).setZero();
    }
    double after = psi.squaredNorm();
    double factor = after / before;
    if (after > 0.0) psi /= std::sqrt(after);
    return factor;
}

}  // namespace

DenseTrajectory dense_propagate(const DenseInstance& inst, double T, double dt) {
    if (!(dt > 0.0)) throw std::invalid_argument("dense_propagate: dt must be > 0");
    int n_steps = std::max(1, static_cast<int>(std::llround(T / dt)));
    double h = T / n_steps;
    DenseTrajectory traj;
    VecC psi = inst.psi0;
    traj.t.push_back(0.0);
    traj.sigma_z.push_back(sigma_z_diag(inst.dims, inst.system_site, psi));
    traj.survival_amplitude.push_back(inst.psi0.dot(psi));
    for (int k = 1; k <= n_steps; ++k) {
        psi = expv_step(inst.H, psi, h);
        traj.t.push_back(k * h);
        traj.sigma_z.push_back(sigma_z_diag(inst.dims, inst.system_site, psi));
        traj.survival_amplitude.push_back(inst.psi0.dot(psi));
    }
    return traj;
}

ZenoRecord dense_zeno(const DenseInstance& inst, const MeasurementProtocol& proto) {
    proto.validate();
    int steps_per_tau = std::max(1, static_cast<int>(std::llround(proto.tau / proto.evolution.dt)));
    double h = proto.tau / steps_per_tau;

    ZenoRecord rec;
    rec.tau = proto.tau;
    rec.mode = proto.mode;

    auto evolve_tau = [&](VecC& psi) {
        for (int k = 0; k < steps_per_tau; ++k) psi = expv_step(inst.H, psi, h);
    };

    if (proto.mode == MeasureMode::Markovian) {
        VecC psi = inst.psi0;
        evolve_tau(psi);
        double p1 = project_excited(inst.dims, inst.system_site, psi);
        double cum = 1.0;
        for (int i = 1; i <= proto.n_measurements; ++i) {
            cum *= p1;
            double t = i * proto.tau;
            rec.steps.push_back({i, t, p1, cum, -std::log(cum) / t});
        }
        return rec;
    }

    VecC psi = inst.psi0;
    double cum = 1.0;
    for (int i = 1; i <= proto.n_measurements; ++i) {
        evolve_tau(psi);
        double p = project_excited(inst.dims, inst.system_site, psi);
        cum *= p;
        double t = i * proto.tau;
        rec.steps.push_back({i, t, p, cum, -std::log(cum) / t});
        if (cum < 1e-300) {
            rec.underflow = true;
            break;
        }
    }
    return rec;
}

namespace {

double thermal_coth(double beta, double omega) {
    if (std::isinf(beta)) return 1.0;
    return 1.0 / std::tanh(0.5 * beta * omega);
}

double quad_or_throw(const std::function<double(double)>& f, double a, double b, double tol) {
    QuadratureResult r = adaptive_simpson(f, a, b, tol);
    if (!r.converged)
        throw std::runtime_error("niba quadrature: achieved tolerance " +
                                 std::to_string(r.achieved_tol) + " > requested " +
                                 std::to_string(tol));
    return r.value;
}

}  // namespace

double niba_Q1(const NibaSpec& spec, double tau) {
    if (tau < 0.0) throw std::domain_error("niba_Q1: tau must be >= 0");
    if (tau == 0.0) return 0.0;
    auto [a, b] = spec.J.quad_support();
    auto f = [&](double w) {
        if (w == 0.0) {
            // sin(w tau) J(w) / w^2 -> tau * eta for the Ohmic form
            return spec.J.kind == BathKind::OhmicDebye ? tau * spec.J.eta : 0.0;
        }
        return std::sin(w * tau) * spec.J(w) / (w * w);
    };
    return quad_or_throw(f, a, b, spec.quad_tol);
}

double niba_Q2(const NibaSpec& spec, double tau) {
    if (tau < 0.0) throw std::domain_error("niba_Q2: tau must be >= 0");
    if (tau == 0.0) return 0.0;
    auto [a, b] = spec.J.quad_support();
    auto f = [&](double w) {
        if (w == 0.0) {
            if (spec.J.kind != BathKind::OhmicDebye) return 0.0;
            // (1-cos) coth J / w^2 -> tau^2/2 * eta * w * coth(bw/2)
            if (std::isinf(spec.beta)) return 0.0;
            return spec.J.eta * tau * tau / spec.beta;
        }
        return (1.0 - std::cos(w * tau)) * thermal_coth(spec.beta, w) * spec.J(w) / (w * w);
    };
    return quad_or_throw(f, a, b, spec.quad_tol);
}

double niba_kernel(const NibaSpec& spec, double tau) {
    double q1 = niba_Q1(spec, tau);
    double q2 = niba_Q2(spec, tau);
    return spec.delta * spec.delta * std::cos(q1) * std::exp(-q2);
}

std::vector<double> solve_volterra(const std::vector<double>& kernel, double h) {
    if (kernel.size() < 2) throw std::invalid_argument("solve_volterra: need >= 2 kernel samples");
    size_t n = kernel.size();
    std::vector<double> s(n);
    s[0] = 1.0;
    // F_m = h (f_m s_0 / 2 + sum_{j=1}^{m-1} f_{m-j} s_j + f_0 s_m / 2)
    auto conv_open = [&](size_t m) {  // F_m without the j = m endpoint term
        double acc = 0.5 * kernel[m] * s[0];
        for (size_t j = 1; j < m; ++j) acc += kernel[m - j] * s[j];
        return h * acc;
    };
    for (size_t m = 0; m + 1 < n; ++m) {
        double Fm = (m == 0) ? 0.0 : conv_open(m) + 0.5 * h * kernel[0] * s[m];
        double Gp = conv_open(m + 1);  // F_{m+1} minus its s_{m+1} term
        double denom = 1.0 + 0.25 * h * h * kernel[0];
        s[m + 1] = (s[m] - 0.5 * h * (Fm + Gp)) / denom;
    }
    return s;
}

std::vector<double> niba_sigma_z(const NibaSpec& spec) {
    if (spec.n_steps < 2) throw std::invalid_argument("niba_sigma_z: n_steps must be >= 2");
    double h = spec.t_max / spec.n_steps;
    std::vector<double> f(spec.n_steps + 1);
    for (int k = 0; k <= spec.n_steps; ++k) f[k] = niba_kernel(spec, k * h);
    return solve_volterra(f, h);
}

}  // namespace zeno1f

#include "zeno1f/tdvp.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

#include <Eigen/QR>
#include <Eigen/SVD>

#include "zeno1f/lanczos.hpp"

namespace zeno1f {

void EvolutionConfig::validate() const {
    if (!(dt > 0.0)) throw std::invalid_argument("EvolutionConfig: dt must be > 0");
    if (krylov_dim < 2) throw std::invalid_argument("EvolutionConfig: krylov_dim must be >= 2");
    if (!(krylov_tol > 0.0)) throw std::invalid_argument("EvolutionConfig: krylov_tol must be > 0");
    if (chi_max < 1) throw std::invalid_argument("EvolutionConfig: chi_max must be >= 1");
    if (svd_cutoff < 0.0) throw std::invalid_argument("EvolutionConfig: svd_cutoff must be >= 0");
}

TdvpIntegrator::TdvpIntegrator(const ChainModel& model, const EvolutionConfig& cfg)
    : model_(&model), cfg_(cfg), system_site_(model.system_site) {
    cfg_.validate();
    mpo_ = build_mpo(nearest_neighbor_terms(model), model.local_dims);
}

void TdvpIntegrator::prepare(MPSState& s) {
    int n = s.n_sites();
    if (n != mpo_.n_sites())
        throw std::invalid_argument("TdvpIntegrator: state/model layout mismatch");
    canonicalize(s, 0);
    lenv_.assign(n, EnvBlock{});
    renv_.assign(n, EnvBlock{});
    lenv_[0] = boundary_left(mpo_.w[0].dl);
    renv_[n - 1] = boundary_right(mpo_.w[n - 1].dr);
    for (int i = n - 1; i > 0; --i)
        renv_[i - 1] = contract_right(renv_[i], s.tensors[i], mpo_.w[i], s.tensors[i]);
    prepared_ = true;
}

Tensor3 TdvpIntegrator::evolve_site(const Tensor3& a, const MpoTensor& w,
                                    const EnvBlock& l, const EnvBlock& r, cplx z,
                                    int site) const {
    Tensor3 buf(a.dl, a.d, a.dr);
    auto matvec = [&](const VecC& x, VecC& y) {
        Tensor3 in(a.dl, a.d, a.dr);
        in.a = x;
        apply_heff1(l, w, r, in, buf);
        y = buf.a;
    };
    Tensor3 out(a.dl, a.d, a.dr);
    try {
        out.a = krylov_expv(matvec, a.a, z, cfg_.krylov_dim, cfg_.krylov_tol);
    } catch (const std::runtime_error& e) {
        throw std::runtime_error(std::string(e.what()) + " (site " + std::to_string(site) + ")");
    }
    if (!out.a.allFinite())
        throw std::runtime_error("TdvpIntegrator: NaN at site " + std::to_string(site));
    return out;
}

MatC TdvpIntegrator::evolve_bond(const MatC& c, const EnvBlock& l, const EnvBlock& r,
                                 cplx z, int site) const {
    auto matvec = [&](const VecC& x, VecC& y) {
        Eigen::Map<const MatC> in(x.data(), c.rows(), c.cols());
        MatC out;
        apply_heff0(l, r, in, out);
        y = Eigen::Map<VecC>(out.data(), out.size());
    };
    VecC v = Eigen::Map<const VecC>(c.data(), c.size());
    VecC w;
    try {
        w = krylov_expv(matvec, v, z, cfg_.krylov_dim, cfg_.krylov_tol);
    } catch (const std::runtime_error& e) {
        throw std::runtime_error(std::string(e.what()) + " (bond at site " + std::to_string(site) + ")");
    }
    if (!w.allFinite())
        throw std::runtime_error("TdvpIntegrator: NaN at bond " + std::to_string(site));
    return Eigen::Map<MatC>(w.data(), c.rows(), c.cols());
}

namespace {

// SVD split of a merged two-site tensor (dl, d1*d2, dr) into left and right
// tensors, truncated to chi_max / cutoff; returns discarded weight fraction.
// keep_left: singular values go into the left tensor (center moves left).
// The flat layout of a merged tensor (l, s1 + d1*s2, r) coincides with the
// (dl*d1) x (d2*dr) matricization, so merge and split are plain matrix ops.
double split_theta(const Tensor3& theta, int d1, int d2, int chi_max, double cutoff,
                   bool keep_left, Tensor3& a, Tensor3& b) {
    Eigen::Map<const MatC> m(theta.a.data(), static_cast<Eigen::Index>(theta.dl) * d1,
                             static_cast<Eigen::Index>(d2) * theta.dr);
    Eigen::BDCSVD<MatC> svd(m, Eigen::ComputeThinU | Eigen::ComputeThinV);
    const Eigen::VectorXd& sv = svd.singularValues();
    int full = static_cast<int>(sv.size());
    double total = sv.squaredNorm();
    int keep = std::min(full, chi_max);
    double disc = 0.0;
    for (int k = full - 1; k >= keep; --k) disc += sv[k] * sv[k];
    while (keep > 1 && disc + sv[keep - 1] * sv[keep - 1] <= cutoff * total) {
        disc += sv[keep - 1] * sv[keep - 1];
        --keep;
    }
    a = Tensor3(theta.dl, d1, keep);
    b = Tensor3(keep, d2, theta.dr);
    if (keep_left) {
        a.as_left() = svd.matrixU().leftCols(keep) * sv.head(keep).asDiagonal();
        b.as_right() = svd.matrixV().leftCols(keep).adjoint();
    } else {
        a.as_left() = svd.matrixU().leftCols(keep);
        b.as_right() = sv.head(keep).asDiagonal() * svd.matrixV().leftCols(keep).adjoint();
    }
    return total > 0.0 ? disc / total : 0.0;
}

Tensor3 merge_sites(const Tensor3& a, const Tensor3& b) {
    Tensor3 th(a.dl, a.d * b.d, b.dr);
    Eigen::Map<MatC>(th.a.data(), static_cast<Eigen::Index>(a.dl) * a.d,
                     static_cast<Eigen::Index>(b.d) * b.dr)
        .noalias() = a.as_left() * b.as_right();
    return th;
}

// two-site forward evolution with the factorized effective Hamiltonian
Tensor3 evolve_pair(const Tensor3& theta, int d1, int d2, const MpoTensor& w1,
                    const MpoTensor& w2, const EnvBlock& l, const EnvBlock& r, cplx z,
                    int krylov_dim, double krylov_tol, int site) {
    Tensor3 buf;
    auto matvec = [&](const VecC& x, VecC& y) {
        Tensor3 in(theta.dl, theta.d, theta.dr);
        in.a = x;
        apply_heff2(l, w1, w2, r, d1, d2, in, buf);
        y = buf.a;
    };
    Tensor3 out(theta.dl, theta.d, theta.dr);
    try {
        out.a = krylov_expv(matvec, theta.a, z, krylov_dim, krylov_tol);
    } catch (const std::runtime_error& e) {
        throw std::runtime_error(std::string(e.what()) + " (bond at site " +
                                 std::to_string(site) + ")");
    }
    if (!out.a.allFinite())
        throw std::runtime_error("TdvpIntegrator: NaN at bond " + std::to_string(site));
    return out;
}

}  // namespace

void TdvpIntegrator::sweep_lr(MPSState& s, bool two_site) {
    int n = s.n_sites();
    cplx zf(0.0, -0.5 * cfg_.dt);  // forward half step
    cplx zb(0.0, +0.5 * cfg_.dt);  // backward half step
    if (!two_site) {
        for (int i = 0; i < n; ++i) {
            s.tensors[i] = evolve_site(s.tensors[i], mpo_.w[i], lenv_[i], renv_[i], zf, i);
            if (i + 1 < n) {
                Tensor3& A = s.tensors[i];
                Eigen::HouseholderQR<MatC> qr(A.as_left());
                int k = std::min<int>(A.dl * A.d, A.dr);
                MatC Q = qr.householderQ() * MatC::Identity(A.dl * A.d, k);
                MatC C = qr.matrixQR().topRows(k).triangularView<Eigen::Upper>();
                Tensor3 q(A.dl, A.d, k);
                q.as_left() = Q;
                s.tensors[i] = std::move(q);
                lenv_[i + 1] = contract_left(lenv_[i], s.tensors[i], mpo_.w[i], s.tensors[i]);
                C = evolve_bond(C, lenv_[i + 1], renv_[i], zb, i);
                Tensor3& B = s.tensors[i + 1];
                Tensor3 nb(k, B.d, B.dr);
                nb.as_right() = C * B.as_right();
                s.tensors[i + 1] = std::move(nb);
            }
        }
        s.canonical_center = n - 1;
    } else {
        for (int i = 0; i + 1 < n; ++i) {
            Tensor3 theta = merge_sites(s.tensors[i], s.tensors[i + 1]);
            theta = evolve_pair(theta, s.tensors[i].d, s.tensors[i + 1].d, mpo_.w[i],
                                mpo_.w[i + 1], lenv_[i], renv_[i + 1], zf,
                                cfg_.krylov_dim, cfg_.krylov_tol, i);
            Tensor3 a, b;
            double disc = split_theta(theta, s.tensors[i].d, s.tensors[i + 1].d,
                                      cfg_.chi_max, cfg_.svd_cutoff, false, a, b);
            trunc_accum_ += disc;
            s.tensors[i] = std::move(a);
            s.tensors[i + 1] = std::move(b);
            lenv_[i + 1] = contract_left(lenv_[i], s.tensors[i], mpo_.w[i], s.tensors[i]);
            if (i + 2 < n)
                s.tensors[i + 1] = evolve_site(s.tensors[i + 1], mpo_.w[i + 1], lenv_[i + 1],
                                               renv_[i + 1], zb, i + 1);
        }
        s.canonical_center = n - 1;
    }
}

void TdvpIntegrator::sweep_rl(MPSState& s, bool two_site) {
    int n = s.n_sites();
    cplx zf(0.0, -0.5 * cfg_.dt);
    cplx zb(0.0, +0.5 * cfg_.dt);
    if (!two_site) {
        for (int i = n - 1; i >= 0; --i) {
            s.tensors[i] = evolve_site(s.tensors[i], mpo_.w[i], lenv_[i], renv_[i], zf, i);
            if (i > 0) {
                Tensor3& A = s.tensors[i];
                MatC Mh = A.as_right().adjoint();
                Eigen::HouseholderQR<MatC> qr(Mh);
                int k = std::min<int>(A.d * A.dr, A.dl);
                MatC Qt = qr.householderQ() * MatC::Identity(A.d * A.dr, k);
                MatC Ct = qr.matrixQR().topRows(k).triangularView<Eigen::Upper>();
                Tensor3 q(k, A.d, A.dr);
                q.as_right() = Qt.adjoint();
                s.tensors[i] = std::move(q);
                renv_[i - 1] = contract_right(renv_[i], s.tensors[i], mpo_.w[i], s.tensors[i]);
                MatC C = Ct.adjoint();
                C = evolve_bond(C, lenv_[i], renv_[i - 1], zb, i);
                Tensor3& B = s.tensors[i - 1];
                Tensor3 nb(B.dl, B.d, k);
                nb.as_left() = B.as_left() * C;
                s.tensors[i - 1] = std::move(nb);
            }
        }
        s.canonical_center = 0;
    } else {
        for (int i = n - 2; i >= 0; --i) {
            Tensor3 theta = merge_sites(s.tensors[i], s.tensors[i + 1]);
            theta = evolve_pair(theta, s.tensors[i].d, s.tensors[i + 1].d, mpo_.w[i],
                                mpo_.w[i + 1], lenv_[i], renv_[i + 1], zf,
                                cfg_.krylov_dim, cfg_.krylov_tol, i);
            Tensor3 a, b;
            double disc = split_theta(theta, s.tensors[i].d, s.tensors[i + 1].d,
                                      cfg_.chi_max, cfg_.svd_cutoff, true, a, b);
            trunc_accum_ += disc;
            s.tensors[i] = std::move(a);
            s.tensors[i + 1] = std::move(b);
            renv_[i] = contract_right(renv_[i + 1], s.tensors[i + 1], mpo_.w[i + 1],
                                      s.tensors[i + 1]);
            if (i > 0)
                s.tensors[i] = evolve_site(s.tensors[i], mpo_.w[i], lenv_[i], renv_[i], zb, i);
        }
        s.canonical_center = 0;
    }
}

void TdvpIntegrator::step(MPSState& s) {
    if (!prepared_) prepare(s);
    bool two_site;
    switch (cfg_.scheme) {
        case Scheme::OneSite: two_site = false; break;
        case Scheme::TwoSite: two_site = true; break;
        case Scheme::Hybrid:
        default:
            two_site = time_ < cfg_.hybrid_switch_time - 0.5 * cfg_.dt;
            break;
    }
    sweep_lr(s, two_site);
    sweep_rl(s, two_site);
    time_ += cfg_.dt;
}

void TdvpIntegrator::evolve_interval(MPSState& s, double T, Trajectory* traj,
                                     int sample_every, bool with_energy) {
    if (T < 0.0) throw std::invalid_argument("evolve_interval: T must be >= 0");
    if (T == 0.0) return;
    int n_steps = std::max(1, static_cast<int>(std::llround(T / cfg_.dt)));
    double dt_saved = cfg_.dt;
    cfg_.dt = T / n_steps;
    auto sample = [&](MPSState& st) {
        if (!traj) return;
        traj->t.push_back(time_);
        traj->sigma_z.push_back(expectation(st, pauli_z(), system_site_).real());
        traj->norm.push_back(norm(st));
        traj->max_bond.push_back(st.max_bond());
        if (with_energy) traj->energy.push_back(energy(st));
    };
    for (int k = 0; k < n_steps; ++k) {
        step(s);
        if (traj && ((k + 1) % sample_every == 0 || k + 1 == n_steps)) sample(s);
    }
    cfg_.dt = dt_saved;
}

double TdvpIntegrator::energy(const MPSState& s) const {
    return expectation_mpo(s, mpo_).real();
}

}  // namespace zeno1f

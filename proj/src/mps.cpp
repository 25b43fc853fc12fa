#include "zeno1f/mps.hpp"

#include <cmath>
#include <cstdint>
#include <fstream>
#include <stdexcept>

#include <Eigen/QR>
#include <Eigen/SVD>

#include "zeno1f/env.hpp"

namespace zeno1f {

namespace {

using CStrideMap = Eigen::Map<const MatC, 0, Eigen::OuterStride<>>;

CStrideMap slice(const Tensor3& t, int s) {
    return {t.a.data() + static_cast<Eigen::Index>(t.dl) * s, t.dl, t.dr,
            Eigen::OuterStride<>(static_cast<Eigen::Index>(t.dl) * t.d)};
}

Tensor3 from_left(const MatC& m, int dl, int d, int dr) {
    Tensor3 t(dl, d, dr);
    t.as_left() = m;
    return t;
}

Tensor3 from_right(const MatC& m, int dl, int d, int dr) {
    Tensor3 t(dl, d, dr);
    t.as_right() = m;
    return t;
}

}  // namespace

int MPSState::max_bond() const {
    int m = 1;
    for (int i = 0; i + 1 < n_sites(); ++i) m = std::max(m, tensors[i].dr);
    return m;
}

std::vector<int> MPSState::local_dims() const {
    std::vector<int> d(tensors.size());
    for (size_t i = 0; i < tensors.size(); ++i) d[i] = tensors[i].d;
    return d;
}

MPSState initial_state(const ChainModel& model) {
    MPSState s;
    s.tensors.reserve(model.n_sites());
    for (int i = 0; i < model.n_sites(); ++i) {
        Tensor3 t(1, model.local_dims[i], 1);
        t(0, 0, 0) = 1.0;  // |e> at the system site, |0> on chain sites
        s.tensors.push_back(std::move(t));
    }
    s.canonical_center = 0;
    return s;
}

// Left-orthonormalize site i, pushing the R factor into site i+1.
static void shift_right(MPSState& s, int i) {
    Tensor3& A = s.tensors[i];
    Eigen::HouseholderQR<MatC> qr(A.as_left());
    int k = std::min<int>(A.dl * A.d, A.dr);
    MatC Q = qr.householderQ() * MatC::Identity(A.dl * A.d, k);
    MatC R = qr.matrixQR().topRows(k).triangularView<Eigen::Upper>();
    s.tensors[i] = from_left(Q, A.dl, A.d, k);
    Tensor3& B = s.tensors[i + 1];
    MatC nb = R * B.as_right();
    s.tensors[i + 1] = from_right(nb, k, B.d, B.dr);
}

// Right-orthonormalize site i, pushing the L factor into site i-1.
static void shift_left(MPSState& s, int i) {
    Tensor3& A = s.tensors[i];
    MatC Mh = A.as_right().adjoint();  // (d*dr) x dl
    Eigen::HouseholderQR<MatC> qr(Mh);
    int k = std::min<int>(A.d * A.dr, A.dl);
    MatC Qt = qr.householderQ() * MatC::Identity(A.d * A.dr, k);
    MatC Rt = qr.matrixQR().topRows(k).triangularView<Eigen::Upper>();
    s.tensors[i] = from_right(Qt.adjoint(), k, A.d, A.dr);
    Tensor3& B = s.tensors[i - 1];
    MatC nb = B.as_left() * Rt.adjoint();
    s.tensors[i - 1] = from_left(nb, B.dl, B.d, k);
}

void canonicalize(MPSState& s, int center) {
    int n = s.n_sites();
    if (center < 0 || center >= n)
        throw std::invalid_argument("canonicalize: center out of range");
    if (s.canonical_center >= 0) {
        int c = s.canonical_center;
        for (int i = c; i < center; ++i) shift_right(s, i);
        for (int i = c; i > center; --i) shift_left(s, i);
    } else {
        for (int i = 0; i < center; ++i) shift_right(s, i);
        for (int i = n - 1; i > center; --i) shift_left(s, i);
    }
    s.canonical_center = center;
}

double truncate(MPSState& s, int chi_max, double cutoff) {
    if (chi_max < 1) throw std::invalid_argument("truncate: chi_max must be >= 1");
    int n = s.n_sites();
    if (n == 1) {
        normalize(s);
        return 0.0;
    }
    canonicalize(s, n - 1);
    normalize(s);
    double max_discarded = 0.0;
    for (int i = n - 1; i > 0; --i) {
        Tensor3& A = s.tensors[i];
        Eigen::JacobiSVD<MatC> svd(A.as_right(), Eigen::ComputeThinU | Eigen::ComputeThinV);
        const Eigen::VectorXd& sv = svd.singularValues();
        int full = static_cast<int>(sv.size());
        double total = sv.squaredNorm();
        int keep = std::min(full, chi_max);
        // drop additional values while the discarded weight stays within cutoff
        double disc = 0.0;
        for (int k = full - 1; k >= keep; --k) disc += sv[k] * sv[k];
        while (keep > 1 && disc + sv[keep - 1] * sv[keep - 1] <= cutoff * total) {
            disc += sv[keep - 1] * sv[keep - 1];
            --keep;
        }
        max_discarded = std::max(max_discarded, total > 0 ? disc / total : 0.0);
        MatC Vh = svd.matrixV().leftCols(keep).adjoint();
        s.tensors[i] = from_right(Vh, keep, A.d, A.dr);
        MatC US = svd.matrixU().leftCols(keep) * sv.head(keep).asDiagonal();
        Tensor3& B = s.tensors[i - 1];
        MatC nb = B.as_left() * US;
        s.tensors[i - 1] = from_left(nb, B.dl, B.d, keep);
    }
    s.canonical_center = 0;
    normalize(s);
    return max_discarded;
}

double norm(const MPSState& s) {
    if (s.canonical_center >= 0) return s.tensors[s.canonical_center].a.norm();
    return std::sqrt(std::abs(overlap(s, s).real()));
}

void normalize(MPSState& s) {
    double nn = norm(s);
    if (nn == 0.0) throw std::runtime_error("normalize: zero state");
    if (s.canonical_center >= 0) {
        s.tensors[s.canonical_center].a /= nn;
    } else {
        s.tensors[0].a /= nn;
    }
}

cplx overlap(const MPSState& bra, const MPSState& ket) {
    if (bra.n_sites() != ket.n_sites())
        throw std::invalid_argument("overlap: site count mismatch");
    MatC e = MatC::Ones(1, 1);
    for (int i = 0; i < bra.n_sites(); ++i) {
        const Tensor3& b = bra.tensors[i];
        const Tensor3& k = ket.tensors[i];
        if (b.d != k.d) throw std::invalid_argument("overlap: local dim mismatch");
        MatC ne = MatC::Zero(b.dr, k.dr);
        for (int ss = 0; ss < b.d; ++ss)
            ne.noalias() += slice(b, ss).adjoint() * e * slice(k, ss);
        e = std::move(ne);
    }
    return e(0, 0);
}

cplx expectation(const MPSState& s, const MatC& op, int site) {
    if (site < 0 || site >= s.n_sites())
        throw std::invalid_argument("expectation: site out of range");
    const Tensor3& t0 = s.tensors[site];
    if (op.rows() != t0.d || op.cols() != t0.d)
        throw std::invalid_argument("expectation: operator dimension mismatch");
    MatC e = MatC::Ones(1, 1);
    cplx nrm2 = 0.0;
    MatC en = MatC::Ones(1, 1);
    for (int i = 0; i < s.n_sites(); ++i) {
        const Tensor3& t = s.tensors[i];
        MatC ne = MatC::Zero(t.dr, t.dr);
        MatC nn = MatC::Zero(t.dr, t.dr);
        for (int sp = 0; sp < t.d; ++sp) {
            nn.noalias() += slice(t, sp).adjoint() * en * slice(t, sp);
            if (i == site) {
                for (int sk = 0; sk < t.d; ++sk) {
                    cplx v = op(sp, sk);
                    if (v != cplx(0.0)) ne.noalias() += v * slice(t, sp).adjoint() * e * slice(t, sk);
                }
            } else {
                ne.noalias() += slice(t, sp).adjoint() * e * slice(t, sp);
            }
        }
        e = std::move(ne);
        en = std::move(nn);
    }
    nrm2 = en(0, 0);
    return e(0, 0) / nrm2;
}

cplx expectation_mpo(const MPSState& s, const Mpo& mpo) {
    if (mpo.n_sites() != s.n_sites())
        throw std::invalid_argument("expectation_mpo: site count mismatch");
    EnvBlock e = boundary_left(mpo.w[0].dl);
    for (int i = 0; i < s.n_sites(); ++i)
        e = contract_left(e, s.tensors[i], mpo.w[i], s.tensors[i]);
    cplx num = e.m[0](0, 0);
    cplx den = overlap(s, s);
    return num / den;
}

VecC to_dense(const MPSState& s) {
    long total = 1;
    for (const Tensor3& t : s.tensors) total *= t.d;
    if (total > (1L << 22)) throw std::runtime_error("to_dense: state too large");
    // contract left to right; accumulate (prod_phys x bond) matrix
    MatC acc = MatC::Ones(1, 1);
    long pdim = 1;
    for (const Tensor3& t : s.tensors) {
        MatC next = MatC::Zero(pdim * t.d, t.dr);
        for (int ss = 0; ss < t.d; ++ss) {
            // rows of acc indexed by earlier physical config (first site slowest)
            next.block(ss * pdim, 0, pdim, t.dr).noalias() = acc * slice(t, ss);
        }
        acc = std::move(next);
        pdim *= t.d;
    }
    // acc rows carry index s_i * pdim_prev + idx_prev (site 0 fastest);
    // dense_hamiltonian's kron convention has site 0 slowest, so reorder.
    int n = s.n_sites();
    std::vector<long> dims(n);
    for (int i = 0; i < n; ++i) dims[i] = s.tensors[i].d;
    VecC v(total);
    std::vector<long> si(n);
    for (long idx = 0; idx < total; ++idx) {
        long rem = idx;
        for (int i = 0; i < n; ++i) {
            si[i] = rem % dims[i];
            rem /= dims[i];
        }
        long kidx = 0;
        for (int i = 0; i < n; ++i) kidx = kidx * dims[i] + si[i];
        v[kidx] = acc(idx, 0);
    }
    return v;
}

void save_checkpoint(const MPSState& s, const std::string& path,
                     const std::string& config_hash) {
    std::ofstream f(path, std::ios::binary);
    if (!f) throw std::runtime_error("save_checkpoint: cannot open " + path);
    const char magic[8] = {'Z', '1', 'F', 'M', 'P', 'S', '0', '1'};
    f.write(magic, 8);
    std::uint32_t hl = static_cast<std::uint32_t>(config_hash.size());
    f.write(reinterpret_cast<const char*>(&hl), 4);
    f.write(config_hash.data(), hl);
    std::int32_t n = s.n_sites(), c = s.canonical_center;
    f.write(reinterpret_cast<const char*>(&n), 4);
    f.write(reinterpret_cast<const char*>(&c), 4);
    for (const Tensor3& t : s.tensors) {
        std::int32_t d[3] = {t.dl, t.d, t.dr};
        f.write(reinterpret_cast<const char*>(d), 12);
        f.write(reinterpret_cast<const char*>(t.a.data()), sizeof(cplx) * t.a.size());
    }
    if (!f) throw std::runtime_error("save_checkpoint: write failed for " + path);
}

MPSState load_checkpoint(const std::string& path, std::string* config_hash) {
    std::ifstream f(path, std::ios::binary);
    if (!f) throw std::runtime_error("load_checkpoint: cannot open " + path);
    char magic[8];
    f.read(magic, 8);
    if (std::string(magic, 8) != "Z1FMPS01")
        throw std::runtime_error("load_checkpoint: bad magic in " + path);
    std::uint32_t hl = 0;
    f.read(reinterpret_cast<char*>(&hl), 4);
    std::string hash(hl, '\0');
    f.read(hash.data(), hl);
    if (config_hash) *config_hash = hash;
    std::int32_t n = 0, c = -1;
    f.read(reinterpret_cast<char*>(&n), 4);
    f.read(reinterpret_cast<char*>(&c), 4);
    MPSState s;
    s.canonical_center = c;
    s.tensors.resize(n);
    for (int i = 0; i < n; ++i) {
        std::int32_t d[3];
        f.read(reinterpret_cast<char*>(d), 12);
        s.tensors[i] = Tensor3(d[0], d[1], d[2]);
        f.read(reinterpret_cast<char*>(s.tensors[i].a.data()),
               sizeof(cplx) * s.tensors[i].a.size());
    }
    if (!f) throw std::runtime_error("load_checkpoint: truncated file " + path);
    return s;
}

}  // namespace zeno1f

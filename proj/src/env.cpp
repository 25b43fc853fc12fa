#include "zeno1f/env.hpp"

namespace zeno1f {

namespace {

using StrideMap = Eigen::Map<MatC, 0, Eigen::OuterStride<>>;
using CStrideMap = Eigen::Map<const MatC, 0, Eigen::OuterStride<>>;

// dl x dr matrix slice of a tensor at fixed physical index s
CStrideMap slice(const Tensor3& t, int s) {
    return {t.a.data() + static_cast<Eigen::Index>(t.dl) * s, t.dl, t.dr,
            Eigen::OuterStride<>(static_cast<Eigen::Index>(t.dl) * t.d)};
}
StrideMap slice(Tensor3& t, int s) {
    return {t.a.data() + static_cast<Eigen::Index>(t.dl) * s, t.dl, t.dr,
            Eigen::OuterStride<>(static_cast<Eigen::Index>(t.dl) * t.d)};
}

bool nonzero(const MatC& m) { return m.size() > 0 && m.squaredNorm() > 0.0; }

// apply a local operator to the physical leg: out(.., s', ..) = sum_s op(s', s) in(.., s, ..)
void apply_phys(const MatC& op, const Tensor3& in, Tensor3& out) {
    for (int sp = 0; sp < out.d; ++sp) {
        auto os = slice(out, sp);
        os.setZero();
        for (int s = 0; s < in.d; ++s) {
            cplx v = op(sp, s);
            if (v != cplx(0.0)) os += v * slice(in, s);
        }
    }
}

}  // namespace

EnvBlock boundary_left(int channels) {
    EnvBlock e;
    e.m.assign(channels, MatC::Zero(1, 1));
    e.m[channels - 1](0, 0) = 1.0;
    return e;
}

EnvBlock boundary_right(int channels) {
    EnvBlock e;
    e.m.assign(channels, MatC::Zero(1, 1));
    e.m[0](0, 0) = 1.0;
    return e;
}

EnvBlock contract_left(const EnvBlock& e, const Tensor3& bra, const MpoTensor& w,
                       const Tensor3& ket) {
    EnvBlock out;
    out.m.assign(w.dr, MatC::Zero(bra.dr, ket.dr));
    Tensor3 t(bra.dl, ket.d, ket.dr);  // E[w1] * ket
    Tensor3 s(bra.dl, bra.d, ket.dr);  // op applied
    for (int w1 = 0; w1 < w.dl; ++w1) {
        if (!nonzero(e.m[w1])) continue;
        t.as_right().noalias() = e.m[w1] * ket.as_right();
        for (int w2 = 0; w2 < w.dr; ++w2) {
            const MatC& op = w.at(w1, w2);
            if (!nonzero(op)) continue;
            apply_phys(op, t, s);
            out.m[w2].noalias() += bra.as_left().adjoint() * s.as_left();
        }
    }
    return out;
}

EnvBlock contract_right(const EnvBlock& e, const Tensor3& bra, const MpoTensor& w,
                        const Tensor3& ket) {
    EnvBlock out;
    out.m.assign(w.dl, MatC::Zero(bra.dl, ket.dl));
    Tensor3 t(ket.dl, ket.d, bra.dr);  // ket * E[w2]^T
    Tensor3 s(ket.dl, bra.d, bra.dr);
    for (int w2 = 0; w2 < w.dr; ++w2) {
        if (!nonzero(e.m[w2])) continue;
        t.as_left().noalias() = ket.as_left() * e.m[w2].transpose();
        for (int w1 = 0; w1 < w.dl; ++w1) {
            const MatC& op = w.at(w1, w2);
            if (!nonzero(op)) continue;
            apply_phys(op, t, s);
            out.m[w1].noalias() += bra.as_right().conjugate() * s.as_right().transpose();
        }
    }
    return out;
}

void apply_heff1(const EnvBlock& L, const MpoTensor& w, const EnvBlock& R,
                 const Tensor3& in, Tensor3& out) {
    out = Tensor3(in.dl, in.d, in.dr);
    Tensor3 t(in.dl, in.d, in.dr);
    Tensor3 s(in.dl, in.d, in.dr);
    for (int w1 = 0; w1 < w.dl; ++w1) {
        if (!nonzero(L.m[w1])) continue;
        t.as_right().noalias() = L.m[w1] * in.as_right();
        for (int w2 = 0; w2 < w.dr; ++w2) {
            const MatC& op = w.at(w1, w2);
            if (!nonzero(op) || !nonzero(R.m[w2])) continue;
            apply_phys(op, t, s);
            out.as_left().noalias() += s.as_left() * R.m[w2].transpose();
        }
    }
}

void apply_heff0(const EnvBlock& L, const EnvBlock& R, const MatC& in, MatC& out) {
    out = MatC::Zero(in.rows(), in.cols());
    for (int w = 0; w < L.channels(); ++w) {
        if (!nonzero(L.m[w]) || !nonzero(R.m[w])) continue;
        out.noalias() += L.m[w] * in * R.m[w].transpose();
    }
}

void apply_heff2(const EnvBlock& L, const MpoTensor& w1, const MpoTensor& w2,
                 const EnvBlock& R, int d1, int d2, const Tensor3& in, Tensor3& out) {
    int dl = in.dl, dr = in.dr;
    Eigen::Index half = static_cast<Eigen::Index>(dl) * d1;
    Eigen::Index total = half * d2 * dr;

    // the merged layout l + dl*s1 + dl*d1*s2 + dl*d1*d2*r doubles as a site-1
    // tensor (dl, d1, d2*dr) and as a site-2 tensor (dl*d1, d2, dr)
    auto slice1 = [&](const VecC& v, int s1) {
        return CStrideMap(v.data() + dl * s1, dl, static_cast<Eigen::Index>(d2) * dr,
                          Eigen::OuterStride<>(half));
    };
    auto slice1w = [&](VecC& v, int s1) {
        return StrideMap(v.data() + dl * s1, dl, static_cast<Eigen::Index>(d2) * dr,
                         Eigen::OuterStride<>(half));
    };
    auto slice2 = [&](const VecC& v, int s2) {
        return CStrideMap(v.data() + half * s2, half, dr,
                          Eigen::OuterStride<>(half * d2));
    };
    auto slice2w = [&](VecC& v, int s2) {
        return StrideMap(v.data() + half * s2, half, dr,
                         Eigen::OuterStride<>(half * d2));
    };

    out = Tensor3(dl, d1 * d2, dr);
    VecC tl(total), ap(total), zr(total), zo(total);
    std::vector<char> have(w1.dr, 0);
    std::vector<VecC> mid(w1.dr);

    for (int a = 0; a < w1.dl; ++a) {
        if (!nonzero(L.m[a])) continue;
        Eigen::Map<MatC>(tl.data(), dl, total / dl).noalias() =
            L.m[a] * Eigen::Map<const MatC>(in.a.data(), dl, total / dl);
        for (int k = 0; k < w1.dr; ++k) {
            const MatC& o1 = w1.at(a, k);
            if (!nonzero(o1)) continue;
            for (int sp = 0; sp < d1; ++sp) {
                auto dst = slice1w(ap, sp);
                dst.setZero();
                for (int s = 0; s < d1; ++s) {
                    cplx v = o1(sp, s);
                    if (v != cplx(0.0)) dst += v * slice1(tl, s);
                }
            }
            if (!have[k]) {
                mid[k] = ap;
                have[k] = 1;
            } else {
                mid[k] += ap;
            }
        }
    }

    for (int k = 0; k < w1.dr; ++k) {
        if (!have[k]) continue;
        for (int c = 0; c < w2.dr; ++c) {
            const MatC& o2 = w2.at(k, c);
            if (!nonzero(o2) || !nonzero(R.m[c])) continue;
            for (int sp = 0; sp < d2; ++sp) {
                auto dst = slice2w(zr, sp);
                dst.setZero();
                for (int s = 0; s < d2; ++s) {
                    cplx v = o2(sp, s);
                    if (v != cplx(0.0)) dst += v * slice2(mid[k], s);
                }
            }
            Eigen::Map<MatC>(zo.data(), total / dr, dr).noalias() =
                Eigen::Map<const MatC>(zr.data(), total / dr, dr) * R.m[c].transpose();
            out.a += zo;
        }
    }
}

MpoTensor merge_mpo_pair(const MpoTensor& w1t, const MpoTensor& w2t) {
    int d1 = 0, d2 = 0;
    for (const MatC& o : w1t.op)
        if (o.size() > 0) d1 = static_cast<int>(o.rows());
    for (const MatC& o : w2t.op)
        if (o.size() > 0) d2 = static_cast<int>(o.rows());
    int d12 = d1 * d2;
    MpoTensor m;
    m.dl = w1t.dl;
    m.dr = w2t.dr;
    m.op.assign(m.dl * m.dr, MatC::Zero(d12, d12));
    for (int a = 0; a < m.dl; ++a)
        for (int b = 0; b < m.dr; ++b) {
            MatC& dst = m.at(a, b);
            for (int k = 0; k < w1t.dr; ++k) {
                const MatC& o1 = w1t.at(a, k);
                const MatC& o2 = w2t.at(k, b);
                if (!nonzero(o1) || !nonzero(o2)) continue;
                for (int s2p = 0; s2p < d2; ++s2p)
                    for (int s2 = 0; s2 < d2; ++s2) {
                        cplx v = o2(s2p, s2);
                        if (v == cplx(0.0)) continue;
                        dst.block(s2p * d1, s2 * d1, d1, d1) += v * o1;
                    }
            }
        }
    return m;
}

}  // namespace zeno1f

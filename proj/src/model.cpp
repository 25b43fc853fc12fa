#include "zeno1f/model.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace zeno1f {

MatC pauli_x() {
    MatC m(2, 2);
    m << 0, 1, 1, 0;
    return m;
}

MatC pauli_z() {
    MatC m(2, 2);
    m << 1, 0, 0, -1;
    return m;
}

MatC boson_annihilate(int d) {
    MatC a = MatC::Zero(d, d);
    for (int n = 1; n < d; ++n) a(n - 1, n) = std::sqrt(static_cast<double>(n));
    return a;
}

MatC boson_number(int d) {
    MatC n = MatC::Zero(d, d);
    for (int k = 0; k < d; ++k) n(k, k) = k;
    return n;
}

MatC boson_displacement(int d) {
    MatC a = boson_annihilate(d);
    return a + a.adjoint();
}

ChainModel build_model(const SystemSpec& system, const SpectralDensity& J, double beta,
                       int M, int N, const LocalDimPolicy& dims, MapMethod method,
                       int panels, int N_left) {
    if (!(system.delta >= 0.0)) throw std::invalid_argument("build_model: delta must be >= 0");
    if (N_left < 0) N_left = N;

    auto [jl, jr] = thermal_split(J, beta);
    ChainModel model;
    model.system = system;

    DiscretizedMeasure mr = discretize(jr, M, panels);
    if (mr.total_weight() > 0.0) {
        model.right = map_to_chain(mr, N, method);
    } else {
        model.right = ChainCoefficients{};  // zero coupling: empty chain measure
        model.right.eps = Eigen::VectorXd::Zero(0);
    }
    model.right.branch = Branch::R;

    int nl = 0;
    if (!jl.empty()) {
        DiscretizedMeasure ml = discretize(jl, M, panels);
        if (ml.total_weight() > 0.0) {
            model.left = map_to_chain(ml, N_left, method);
            model.left->branch = Branch::L;
            nl = model.left->size();
        }
    }
    int nr = model.right.size();

    model.system_site = nl;
    int n_sites = nl + 1 + nr;
    model.local_dims.resize(n_sites);
    if (!dims.override_dims.empty()) {
        if (static_cast<int>(dims.override_dims.size()) != n_sites)
            throw std::invalid_argument("build_model: local_dims override has length " +
                                        std::to_string(dims.override_dims.size()) +
                                        ", model has " + std::to_string(n_sites) + " sites");
        model.local_dims = dims.override_dims;
    } else {
        for (int i = 0; i < n_sites; ++i) {
            if (i == model.system_site) {
                model.local_dims[i] = 2;
            } else {
                int dist = std::abs(i - model.system_site);
                model.local_dims[i] = (dist <= dims.near_sites) ? dims.d_near : dims.d_far;
            }
        }
    }
    for (int i = 0; i < n_sites; ++i)
        if (model.local_dims[i] < 2)
            throw std::invalid_argument("build_model: every local dim must be >= 2");
    if (model.local_dims[model.system_site] != 2)
        throw std::invalid_argument("build_model: system site must have local dim 2");
    return model;
}

TermList nearest_neighbor_terms(const ChainModel& model) {
    int n = model.n_sites();
    int sys = model.system_site;
    int nl = model.left ? model.left->size() : 0;
    TermList terms;
    terms.onsite.resize(n);
    terms.bonds.resize(n > 0 ? n - 1 : 0);

    // on-site terms
    for (int i = 0; i < n; ++i) {
        int d = model.local_dims[i];
        if (i == sys) {
            terms.onsite[i] = (model.system.delta / 2.0) * pauli_x();
        } else if (i < sys) {
            int k = sys - 1 - i;  // L chain index (site L_0 adjacent to system)
            terms.onsite[i] = -model.left->eps[k] * boson_number(d);
        } else {
            int k = i - sys - 1;  // R chain index
            terms.onsite[i] = model.right.eps[k] * boson_number(d);
        }
    }

    // bonds
    for (int b = 0; b + 1 < n; ++b) {
        int i = b, j = b + 1;
        int di = model.local_dims[i], dj = model.local_dims[j];
        std::vector<BondChannel>& ch = terms.bonds[b];
        if (j == sys) {
            // L_0 -- system edge coupling: (1/2) kappa0^L (c0^dag + c0) sigma_z
            double k0 = model.left ? model.left->kappa0 : 0.0;
            if (k0 != 0.0)
                ch.push_back({0.5 * k0 * boson_displacement(di), pauli_z()});
        } else if (i == sys) {
            // system -- R_0 edge coupling
            double k0 = model.right.kappa0;
            if (k0 != 0.0)
                ch.push_back({0.5 * k0 * pauli_z(), boson_displacement(dj)});
        } else if (j < sys) {
            // within L chain (reversed layout): bond between L_{k+1} (site i) and L_k (site j)
            int k = sys - 1 - j;  // lower chain index
            double t = model.left->hop[k];
            MatC a_i = boson_annihilate(di), a_j = boson_annihilate(dj);
            ch.push_back({-t * a_i.adjoint(), a_j});
            ch.push_back({-t * a_i, MatC(a_j.adjoint())});
        } else {
            // within R chain: bond between R_k (site i) and R_{k+1} (site j)
            int k = i - sys - 1;
            double t = model.right.hop[k];
            MatC a_i = boson_annihilate(di), a_j = boson_annihilate(dj);
            ch.push_back({t * a_i.adjoint(), a_j});
            ch.push_back({t * a_i, MatC(a_j.adjoint())});
        }
        (void)nl;
    }
    return terms;
}

namespace {

MatC kron(const MatC& a, const MatC& b) {
    MatC out(a.rows() * b.rows(), a.cols() * b.cols());
    for (Eigen::Index i = 0; i < a.rows(); ++i)
        for (Eigen::Index j = 0; j < a.cols(); ++j)
            out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
    return out;
}

MatC embed(const MatC& op, int site, const std::vector<int>& dims) {
    MatC out = MatC::Identity(1, 1);
    for (size_t i = 0; i < dims.size(); ++i) {
        if (static_cast<int>(i) == site)
            out = kron(out, op);
        else
            out = kron(out, MatC::Identity(dims[i], dims[i]));
    }
    return out;
}

MatC embed2(const MatC& opa, const MatC& opb, int site, const std::vector<int>& dims) {
    MatC out = MatC::Identity(1, 1);
    for (size_t i = 0; i < dims.size(); ++i) {
        if (static_cast<int>(i) == site)
            out = kron(out, opa);
        else if (static_cast<int>(i) == site + 1)
            out = kron(out, opb);
        else
            out = kron(out, MatC::Identity(dims[i], dims[i]));
    }
    return out;
}

}  // namespace

MatC dense_hamiltonian(const TermList& terms, const std::vector<int>& dims) {
    long total = 1;
    for (int d : dims) total *= d;
    MatC H = MatC::Zero(total, total);
    for (size_t i = 0; i < terms.onsite.size(); ++i)
        H += embed(terms.onsite[i], static_cast<int>(i), dims);
    for (size_t b = 0; b < terms.bonds.size(); ++b)
        for (const BondChannel& ch : terms.bonds[b])
            H += embed2(ch.left_op, ch.right_op, static_cast<int>(b), dims);
    return H;
}

Mpo build_mpo(const TermList& terms, const std::vector<int>& dims) {
    int n = static_cast<int>(dims.size());
    Mpo mpo;
    mpo.w.resize(n);
    // bond MPO dimension left of site i: 2 + channels(bond i-1); boundaries 1
    std::vector<int> wdim(n + 1, 1);
    for (int b = 0; b + 1 < n; ++b)
        wdim[b + 1] = 2 + static_cast<int>(terms.bonds[b].size());

    for (int i = 0; i < n; ++i) {
        int d = dims[i];
        int dl = wdim[i], dr = wdim[i + 1];
        MpoTensor& W = mpo.w[i];
        W.dl = dl;
        W.dr = dr;
        W.op.assign(dl * dr, MatC::Zero(d, d));
        MatC id = MatC::Identity(d, d);

        // column 0: "finished" channel
        W.at(0, 0) = id;
        // incoming channels from bond i-1 complete with their right op
        if (i > 0)
            for (size_t c = 0; c < terms.bonds[i - 1].size(); ++c)
                W.at(1 + static_cast<int>(c), 0) = terms.bonds[i - 1][c].right_op;
        // last row: "nothing placed yet"
        W.at(dl - 1, 0) = terms.onsite[i];
        if (i + 1 < n)
            for (size_t c = 0; c < terms.bonds[i].size(); ++c)
                W.at(dl - 1, 1 + static_cast<int>(c)) = terms.bonds[i][c].left_op;
        if (i + 1 < n) W.at(dl - 1, dr - 1) = id;
    }
    return mpo;
}

}  // namespace zeno1f

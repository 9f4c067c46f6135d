#ifndef CSTAR_CORR_HPP
#define CSTAR_CORR_HPP

#include <cstar/hmod.hpp>

#include <algorithm>
#include <numeric>
#include <optional>

// C*-correspondences over a block algebra: a Hilbert module together with a
// left action phi_X : A -> L(X). The left action is stored in canonical
// multiplicity form: on fiber j it is
//
//   phi(a)_j = W_j diag(a_0 x M[j][0], a_1 x M[j][1], ..., 0-padding) W_j*
//
// with summands ordered by ascending source-block index and the zero corner
// last. Multiplicity matrices classify *-homomorphisms between block algebras
// up to unitary equivalence, which makes kernels and images computable by
// counting columns.

namespace cstar {

struct StarHom {
    FdAlgebra source;
    std::vector<int> target_fibers;
    Eigen::MatrixXi multiplicity;  // rows: target fibers j, cols: source blocks i
    std::vector<Mat> unitaries;    // empty: all identity

    StarHom() = default;
    StarHom(FdAlgebra src, std::vector<int> fibers, Eigen::MatrixXi mult,
            std::vector<Mat> uns = {})
        : source(std::move(src)),
          target_fibers(std::move(fibers)),
          multiplicity(std::move(mult)),
          unitaries(std::move(uns)) {
        int nf = static_cast<int>(target_fibers.size());
        if (multiplicity.rows() != nf || multiplicity.cols() != source.num_blocks())
            throw std::invalid_argument("StarHom: multiplicity shape mismatch");
        for (int j = 0; j < nf; ++j) {
            int used = 0;
            for (int i = 0; i < source.num_blocks(); ++i) {
                if (multiplicity(j, i) < 0)
                    throw std::invalid_argument("StarHom: negative multiplicity");
                used += multiplicity(j, i) * source.block_size(i);
            }
            if (used > target_fibers[j])
                throw std::invalid_argument(
                    "StarHom: multiplicities exceed fiber dimension");
        }
        if (!unitaries.empty()) {
            if (static_cast<int>(unitaries.size()) != nf)
                throw std::invalid_argument("StarHom: unitary count mismatch");
            for (int j = 0; j < nf; ++j) {
                const Mat& w = unitaries[j];
                int k = target_fibers[j];
                if (w.rows() != k || w.cols() != k)
                    throw std::invalid_argument("StarHom: unitary shape mismatch");
                if (k > 0 &&
                    (w.adjoint() * w - Mat::Identity(k, k)).cwiseAbs().maxCoeff() > 1e-8)
                    throw std::invalid_argument("StarHom: matrix is not unitary");
            }
        }
    }

    int num_fibers() const { return static_cast<int>(target_fibers.size()); }

    /// The realized action of a on fiber j, a k_j x k_j matrix.
    Mat realize_fiber(const AlgElement& a, int j) const {
        require_same_algebra(a.alg, source, "StarHom::realize_fiber");
        int k = target_fibers[static_cast<size_t>(j)];
        Mat d = Mat::Zero(k, k);
        int off = 0;
        for (int i = 0; i < source.num_blocks(); ++i) {
            int n = source.block_size(i);
            for (int c = 0; c < multiplicity(j, i); ++c) {
                d.block(off, off, n, n) = a.data[static_cast<size_t>(i)];
                off += n;
            }
        }
        if (unitaries.empty()) return d;
        const Mat& w = unitaries[static_cast<size_t>(j)];
        return w * d * w.adjoint();
    }
};

struct Correspondence {
    HilbertModule module;
    StarHom left_action;

    Correspondence() = default;
    Correspondence(HilbertModule m, StarHom phi)
        : module(std::move(m)), left_action(std::move(phi)) {
        if (left_action.source != module.algebra)
            throw std::invalid_argument("Correspondence: left action over wrong algebra");
        if (left_action.target_fibers != module.fibers)
            throw std::invalid_argument("Correspondence: left action fiber mismatch");
    }

    const FdAlgebra& algebra() const { return module.algebra; }
};

/// phi_X(a) as a concrete module operator.
inline ModuleOperator left_act(const Correspondence& X, const AlgElement& a) {
    require_same_algebra(a.alg, X.algebra(), "left_act");
    std::vector<Mat> d;
    d.reserve(X.module.fibers.size());
    for (int j = 0; j < X.module.num_fibers(); ++j)
        d.push_back(X.left_action.realize_fiber(a, j));
    return {X.module, std::move(d)};
}

/// ker phi_X = the blocks whose multiplicity column vanishes.
inline Ideal ker_phi(const Correspondence& X) {
    std::set<int> s;
    for (int i = 0; i < X.algebra().num_blocks(); ++i) {
        bool zero = true;
        for (int j = 0; j < X.left_action.num_fibers(); ++j)
            if (X.left_action.multiplicity(j, i) > 0) zero = false;
        if (zero) s.insert(i);
    }
    return {X.algebra(), std::move(s)};
}

/// The ideal phi_X^{-1}(K(X)) cap (ker phi_X)^perp. Over a finite block
/// algebra K(X) = L(X), so the preimage is all of A and the answer collapses
/// to (ker phi_X)^perp; the proper-inclusion case only occurs for infinite
/// emitters, which the graph layer handles symbolically.
inline Ideal jx(const Correspondence& X) { return ideal_perp(ker_phi(X)); }

struct CorrespondenceFlags {
    bool faithful;
    bool nondegenerate;
    bool full;
};

inline CorrespondenceFlags correspondence_flags(const Correspondence& X) {
    bool faithful = ker_phi(X).empty();
    bool nondeg = true;
    for (int j = 0; j < X.left_action.num_fibers(); ++j) {
        int used = 0;
        for (int i = 0; i < X.algebra().num_blocks(); ++i)
            used += X.left_action.multiplicity(j, i) * X.algebra().block_size(i);
        if (used != X.module.fiber_dim(j)) nondeg = false;
    }
    bool full = is_full(X.module).full;
    return {faithful, nondeg, full};
}

/// X = A as a correspondence over itself: fibers = blocks, multiplicity = I.
inline Correspondence identity_correspondence(const FdAlgebra& alg) {
    std::vector<int> fibers = alg.blocks;
    Eigen::MatrixXi m =
        Eigen::MatrixXi::Identity(alg.num_blocks(), alg.num_blocks());
    return {HilbertModule(alg, std::move(fibers)),
            StarHom(alg, alg.blocks, std::move(m))};
}

/// The zero correspondence: all fibers 0.
inline Correspondence zero_correspondence(const FdAlgebra& alg) {
    std::vector<int> fibers(static_cast<size_t>(alg.num_blocks()), 0);
    Eigen::MatrixXi m =
        Eigen::MatrixXi::Zero(alg.num_blocks(), alg.num_blocks());
    return {HilbertModule(alg, std::move(fibers)),
            StarHom(alg, fibers, std::move(m))};
}

namespace detail {

// Slot labels of the canonical layout of phi_X on fiber i: block index per
// coordinate, -1 for the zero-padding corner.
inline std::vector<int> canonical_slot_labels(const StarHom& phi, int i) {
    std::vector<int> labels;
    int k = phi.target_fibers[static_cast<size_t>(i)];
    labels.reserve(static_cast<size_t>(k));
    for (int l = 0; l < phi.source.num_blocks(); ++l)
        for (int c = 0; c < phi.multiplicity(i, l); ++c)
            for (int q = 0; q < phi.source.block_size(l); ++q) labels.push_back(l);
    while (static_cast<int>(labels.size()) < k) labels.push_back(-1);
    return labels;
}

}  // namespace detail

/// Internal tensor product X (x)_A Y: fibers k'_j = sum_i M_Y[j][i] k^X_i and
/// multiplicity M_Y * M_X, with explicit unitaries so that the realized left
/// action matches the elementary-tensor embedding of tensor_elem.
inline Correspondence tensor(const Correspondence& X, const Correspondence& Y) {
    require_same_algebra(X.algebra(), Y.algebra(), "tensor");
    const FdAlgebra& alg = X.algebra();
    int m = alg.num_blocks();
    int nf = Y.module.num_fibers();

    std::vector<int> fibers(static_cast<size_t>(nf), 0);
    for (int j = 0; j < nf; ++j)
        for (int i = 0; i < m; ++i)
            fibers[static_cast<size_t>(j)] +=
                Y.left_action.multiplicity(j, i) * X.module.fiber_dim(i);

    Eigen::MatrixXi mult = Y.left_action.multiplicity * X.left_action.multiplicity;

    // Per fiber: the natural frame is the stack of segments (one copy of X's
    // fiber i for each unit of M_Y[j][i]); conjugate each segment by W^X_i and
    // permute canonical slots into segment order.
    std::vector<Mat> uns;
    uns.reserve(static_cast<size_t>(nf));
    bool nontrivial = false;
    for (int j = 0; j < nf; ++j) {
        int k = fibers[static_cast<size_t>(j)];
        Mat u = Mat::Zero(k, k);
        std::vector<int> labels;  // natural-frame slot labels after W^X*
        labels.reserve(static_cast<size_t>(k));
        int off = 0;
        for (int i = 0; i < m; ++i) {
            int kxi = X.module.fiber_dim(i);
            std::vector<int> seg = detail::canonical_slot_labels(X.left_action, i);
            for (int c = 0; c < Y.left_action.multiplicity(j, i); ++c) {
                if (kxi > 0) {
                    if (X.left_action.unitaries.empty())
                        u.block(off, off, kxi, kxi) = Mat::Identity(kxi, kxi);
                    else
                        u.block(off, off, kxi, kxi) =
                            X.left_action.unitaries[static_cast<size_t>(i)];
                }
                labels.insert(labels.end(), seg.begin(), seg.end());
                off += kxi;
            }
        }
        // Stable sort of natural positions by block label (pad last) gives the
        // canonical-to-natural permutation.
        std::vector<int> perm(static_cast<size_t>(k));
        std::iota(perm.begin(), perm.end(), 0);
        std::stable_sort(perm.begin(), perm.end(), [&](int a, int b) {
            int la = labels[static_cast<size_t>(a)] < 0 ? m : labels[static_cast<size_t>(a)];
            int lb = labels[static_cast<size_t>(b)] < 0 ? m : labels[static_cast<size_t>(b)];
            return la < lb;
        });
        Mat p = Mat::Zero(k, k);
        for (int c = 0; c < k; ++c) p(perm[static_cast<size_t>(c)], c) = 1.0;
        Mat w = u * p;
        if (k > 0 && (w - Mat::Identity(k, k)).cwiseAbs().maxCoeff() > 0) nontrivial = true;
        uns.push_back(std::move(w));
    }
    if (!nontrivial) uns.clear();

    return {HilbertModule(alg, fibers),
            StarHom(alg, fibers, std::move(mult), std::move(uns))};
}

/// Elementary tensor xi (x) eta as an element of tensor(X, Y). The balanced
/// inner product <xi1 (x) eta1, xi2 (x) eta2> = <eta1, phi_Y(<xi1,xi2>) eta2>
/// holds for the embedding; the degenerate corner of Y's fibers is dropped.
inline ModuleElement tensor_elem(const Correspondence& X, const Correspondence& Y,
                                 const ModuleElement& xi, const ModuleElement& eta) {
    require_same_module(xi.mod, X.module, "tensor_elem: xi");
    require_same_module(eta.mod, Y.module, "tensor_elem: eta");
    const FdAlgebra& alg = X.algebra();
    int m = alg.num_blocks();
    int nf = Y.module.num_fibers();

    std::vector<Mat> out;
    out.reserve(static_cast<size_t>(nf));
    for (int j = 0; j < nf; ++j) {
        int nj = alg.block_size(j);
        int kj = 0;
        for (int i = 0; i < m; ++i)
            kj += Y.left_action.multiplicity(j, i) * X.module.fiber_dim(i);
        Mat block = Mat::Zero(kj, nj);
        Mat etap = Y.left_action.unitaries.empty()
                       ? eta.data[static_cast<size_t>(j)]
                       : Mat(Y.left_action.unitaries[static_cast<size_t>(j)].adjoint() *
                             eta.data[static_cast<size_t>(j)]);
        int src_off = 0;  // rows in etap, canonical layout of Y's fiber j
        int dst_off = 0;  // rows in the stacked tensor fiber
        for (int i = 0; i < m; ++i) {
            int ni = alg.block_size(i);
            int kxi = X.module.fiber_dim(i);
            for (int c = 0; c < Y.left_action.multiplicity(j, i); ++c) {
                if (kxi > 0 && nj > 0)
                    block.block(dst_off, 0, kxi, nj) =
                        xi.data[static_cast<size_t>(i)] * etap.block(src_off, 0, ni, nj);
                src_off += ni;
                dst_off += kxi;
            }
        }
        out.push_back(std::move(block));
    }
    Correspondence XY = tensor(X, Y);
    return {XY.module, std::move(out)};
}

/// Evaluator for (phi_X|_{J_X})^{-1}, produced by detect_bimodule.
/// For each fiber j with k_j >= 1, the left action pulls fiber j back to the
/// single source block sigma[j] via the fiber's unitary.
struct LeftInnerProduct {
    Correspondence corr;
    std::vector<int> source_of_fiber;  // sigma; -1 on zero fibers
};

namespace detail {

// Numeric cross-check: rank of phi restricted to J_X as a map into K(X).
inline int phi_restricted_rank(const Correspondence& X, const Ideal& J) {
    int cod = 0;
    for (int j = 0; j < X.module.num_fibers(); ++j) {
        int k = X.module.fiber_dim(j);
        cod += k * k;
    }
    int dom = 0;
    for (int i : J.members) {
        int n = X.algebra().block_size(i);
        dom += n * n;
    }
    if (dom == 0 || cod == 0) return 0;
    Mat map = Mat::Zero(cod, dom);
    int col = 0;
    for (int i : J.members) {
        int n = X.algebra().block_size(i);
        for (int p = 0; p < n; ++p)
            for (int q = 0; q < n; ++q) {
                AlgElement a = alg_matrix_unit(X.algebra(), i, p, q);
                ModuleOperator op = left_act(X, a);
                int row = 0;
                for (int j = 0; j < X.module.num_fibers(); ++j) {
                    int k = X.module.fiber_dim(j);
                    for (int r = 0; r < k; ++r)
                        for (int s = 0; s < k; ++s) map(row++, col) = op.data[static_cast<size_t>(j)](r, s);
                }
                ++col;
            }
    }
    Eigen::JacobiSVD<Mat> svd(map);
    double thresh = 1e-9 * std::max(1.0, svd.singularValues().maxCoeff());
    int rank = 0;
    for (int s = 0; s < svd.singularValues().size(); ++s)
        if (svd.singularValues()(s) > thresh) ++rank;
    return rank;
}

}  // namespace detail

/// Detects Hilbert-bimodule structure: phi_X(J_X) = K(X). Structurally this
/// means the multiplicity matrix is a partial permutation pairing each nonzero
/// fiber with a single source block of equal size; a numeric image-dimension
/// count confirms it. Absence of bimodule structure is a normal outcome.
inline std::optional<LeftInnerProduct> detect_bimodule(const Correspondence& X) {
    const Eigen::MatrixXi& M = X.left_action.multiplicity;
    int m = X.algebra().num_blocks();
    bool structural = true;
    std::vector<int> sigma(static_cast<size_t>(X.module.num_fibers()), -1);
    for (int j = 0; j < X.module.num_fibers() && structural; ++j) {
        int k = X.module.fiber_dim(j);
        if (k == 0) continue;
        int hits = 0, src = -1;
        for (int i = 0; i < m; ++i) {
            if (M(j, i) == 0) continue;
            hits += M(j, i);
            src = i;
        }
        if (hits != 1 || X.algebra().block_size(src) != k)
            structural = false;
        else
            sigma[static_cast<size_t>(j)] = src;
    }
    if (structural) {
        // each source block may serve at most one fiber
        std::set<int> used;
        for (int s : sigma)
            if (s >= 0 && !used.insert(s).second) structural = false;
    }

    int kdim = 0;
    for (int k : X.module.fibers) kdim += k * k;
    bool numeric = detail::phi_restricted_rank(X, jx(X)) == kdim;
    if (structural != numeric)
        throw std::logic_error(
            "detect_bimodule: structural criterion and image-dimension count disagree");
    if (!structural) return std::nullopt;
    return LeftInnerProduct{X, std::move(sigma)};
}

/// The unique a in J_X with phi_X(a) = theta_{xi,eta}; the left inner product
/// of the detected bimodule.
inline AlgElement left_inner(const LeftInnerProduct& L, const ModuleElement& xi,
                             const ModuleElement& eta, double tol = 1e-9) {
    require_same_module(xi.mod, L.corr.module, "left_inner");
    ModuleOperator T = theta(xi, eta);
    AlgElement a = alg_zero(L.corr.algebra());
    for (int j = 0; j < L.corr.module.num_fibers(); ++j) {
        int i = L.source_of_fiber[static_cast<size_t>(j)];
        if (i < 0) continue;
        const Mat& tj = T.data[static_cast<size_t>(j)];
        if (L.corr.left_action.unitaries.empty())
            a.data[static_cast<size_t>(i)] = tj;
        else {
            const Mat& w = L.corr.left_action.unitaries[static_cast<size_t>(j)];
            a.data[static_cast<size_t>(i)] = w.adjoint() * tj * w;
        }
    }
    double scale = std::max(1.0, operator_norm(T));
    double resid = op_dist(left_act(L.corr, a), T);
    if (resid > tol * scale)
        throw std::runtime_error("left_inner: evaluator residual above tolerance");
    return a;
}

/// A block bijection I -> J with per-block unitaries: theta(a)|_to = u a_from u*.
struct PartialAutoPair {
    int from;
    int to;
    Mat unitary;  // empty: identity
};

/// Correspondence X(phi) = J A of a partial automorphism (theta, I, J):
/// fibers n_j on J, zero elsewhere; left action a xi = theta(a|_I) xi.
/// The result satisfies jx = I and detect_bimodule succeeds.
inline Correspondence from_partial_automorphism(const FdAlgebra& alg, const Ideal& I,
                                                const Ideal& J,
                                                const std::vector<PartialAutoPair>& pairs) {
    require_same_algebra(alg, I.alg, "from_partial_automorphism");
    require_same_algebra(alg, J.alg, "from_partial_automorphism");
    std::set<int> froms, tos;
    for (const auto& p : pairs) {
        if (!I.contains(p.from) || !J.contains(p.to))
            throw std::invalid_argument(
                "from_partial_automorphism: pair outside the given ideals");
        if (alg.block_size(p.from) != alg.block_size(p.to))
            throw std::invalid_argument(
                "from_partial_automorphism: paired blocks have different sizes");
        if (!froms.insert(p.from).second || !tos.insert(p.to).second)
            throw std::invalid_argument("from_partial_automorphism: pairing not a bijection");
        int n = alg.block_size(p.to);
        if (p.unitary.size() != 0 && (p.unitary.rows() != n || p.unitary.cols() != n))
            throw std::invalid_argument("from_partial_automorphism: unitary shape mismatch");
    }
    if (froms != I.members || tos != J.members)
        throw std::invalid_argument(
            "from_partial_automorphism: pairing does not cover the ideals");

    int m = alg.num_blocks();
    std::vector<int> fibers(static_cast<size_t>(m), 0);
    for (int j : J.members) fibers[static_cast<size_t>(j)] = alg.block_size(j);
    Eigen::MatrixXi mult = Eigen::MatrixXi::Zero(m, m);
    std::vector<Mat> uns;
    bool nontrivial = false;
    for (int j = 0; j < m; ++j) uns.push_back(Mat::Identity(fibers[static_cast<size_t>(j)], fibers[static_cast<size_t>(j)]));
    for (const auto& p : pairs) {
        mult(p.to, p.from) = 1;
        if (p.unitary.size() != 0) {
            uns[static_cast<size_t>(p.to)] = p.unitary;
            nontrivial = true;
        }
    }
    if (!nontrivial) uns.clear();
    return {HilbertModule(alg, fibers), StarHom(alg, fibers, std::move(mult), std::move(uns))};
}

}  // namespace cstar

#endif  // CSTAR_CORR_HPP

#ifndef CSTAR_FDALG_HPP
#define CSTAR_FDALG_HPP

#include <Eigen/Dense>
#include <complex>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

// Arithmetic in finite-dimensional C*-algebras A = M_{n_0} + ... + M_{n_{m-1}}
// and exact computation in their ideal lattice. Ideals are subsets of block
// indices; every two-sided closed ideal of such an algebra has this form.

namespace cstar {

using Complex = std::complex<double>;
using Mat = Eigen::MatrixXcd;

/// Direct sum of full matrix blocks, described by its block sizes.
struct FdAlgebra {
    std::vector<int> blocks;

    FdAlgebra() = default;
    explicit FdAlgebra(std::vector<int> sizes) : blocks(std::move(sizes)) {
        if (blocks.empty())
            throw std::invalid_argument("FdAlgebra: need at least one block");
        for (int n : blocks)
            if (n < 1)
                throw std::invalid_argument("FdAlgebra: block sizes must be >= 1");
    }

    int num_blocks() const { return static_cast<int>(blocks.size()); }
    int block_size(int j) const { return blocks.at(static_cast<size_t>(j)); }
    int dim() const {
        int d = 0;
        for (int n : blocks) d += n * n;
        return d;
    }
    // Dimension of the standard representation space C^{n_0} + ... + C^{n_{m-1}}.
    int rep_dim() const {
        int d = 0;
        for (int n : blocks) d += n;
        return d;
    }

    friend bool operator==(const FdAlgebra& a, const FdAlgebra& b) {
        return a.blocks == b.blocks;
    }
    friend bool operator!=(const FdAlgebra& a, const FdAlgebra& b) { return !(a == b); }
};

/// Element of an FdAlgebra: one square matrix per block.
struct AlgElement {
    FdAlgebra alg;
    std::vector<Mat> data;

    AlgElement() = default;
    AlgElement(FdAlgebra a, std::vector<Mat> d) : alg(std::move(a)), data(std::move(d)) {
        if (static_cast<int>(data.size()) != alg.num_blocks())
            throw std::invalid_argument("AlgElement: block count mismatch");
        for (int j = 0; j < alg.num_blocks(); ++j)
            if (data[j].rows() != alg.block_size(j) || data[j].cols() != alg.block_size(j))
                throw std::invalid_argument("AlgElement: block shape mismatch");
    }

    const Mat& block(int j) const { return data.at(static_cast<size_t>(j)); }
};

inline void require_same_algebra(const FdAlgebra& a, const FdAlgebra& b,
                                 const char* where) {
    if (a != b)
        throw std::invalid_argument(std::string(where) + ": mismatched parent algebras");
}

inline AlgElement alg_zero(const FdAlgebra& alg) {
    std::vector<Mat> d;
    d.reserve(alg.blocks.size());
    for (int n : alg.blocks) d.push_back(Mat::Zero(n, n));
    return {alg, std::move(d)};
}

inline AlgElement alg_identity(const FdAlgebra& alg) {
    std::vector<Mat> d;
    d.reserve(alg.blocks.size());
    for (int n : alg.blocks) d.push_back(Mat::Identity(n, n));
    return {alg, std::move(d)};
}

/// Matrix unit e_{pq} in block j, zero elsewhere.
inline AlgElement alg_matrix_unit(const FdAlgebra& alg, int j, int p, int q) {
    AlgElement a = alg_zero(alg);
    a.data.at(static_cast<size_t>(j))(p, q) = Complex(1.0, 0.0);
    return a;
}

inline AlgElement alg_add(const AlgElement& a, const AlgElement& b) {
    require_same_algebra(a.alg, b.alg, "alg_add");
    std::vector<Mat> d;
    d.reserve(a.data.size());
    for (size_t j = 0; j < a.data.size(); ++j) d.push_back(a.data[j] + b.data[j]);
    return {a.alg, std::move(d)};
}

inline AlgElement alg_sub(const AlgElement& a, const AlgElement& b) {
    require_same_algebra(a.alg, b.alg, "alg_sub");
    std::vector<Mat> d;
    d.reserve(a.data.size());
    for (size_t j = 0; j < a.data.size(); ++j) d.push_back(a.data[j] - b.data[j]);
    return {a.alg, std::move(d)};
}

inline AlgElement alg_mul(const AlgElement& a, const AlgElement& b) {
    require_same_algebra(a.alg, b.alg, "alg_mul");
    std::vector<Mat> d;
    d.reserve(a.data.size());
    for (size_t j = 0; j < a.data.size(); ++j) d.push_back(a.data[j] * b.data[j]);
    return {a.alg, std::move(d)};
}

inline AlgElement alg_adjoint(const AlgElement& a) {
    std::vector<Mat> d;
    d.reserve(a.data.size());
    for (const Mat& m : a.data) d.push_back(m.adjoint());
    return {a.alg, std::move(d)};
}

inline AlgElement alg_scale(Complex c, const AlgElement& a) {
    std::vector<Mat> d;
    d.reserve(a.data.size());
    for (const Mat& m : a.data) d.push_back(c * m);
    return {a.alg, std::move(d)};
}

/// Largest singular value of a square matrix, via the spectrum of m* m.
inline double spectral_norm(const Mat& m) {
    if (m.rows() == 0 || m.cols() == 0) return 0.0;
    Eigen::SelfAdjointEigenSolver<Mat> es(m.adjoint() * m);
    double lam = es.eigenvalues().maxCoeff();
    return lam > 0.0 ? std::sqrt(lam) : 0.0;
}

/// C*-norm: max over blocks of the largest singular value.
inline double op_norm(const AlgElement& a) {
    double r = 0.0;
    for (const Mat& m : a.data) r = std::max(r, spectral_norm(m));
    return r;
}

/// Ideal of a block algebra, stored structurally as the set of its blocks.
struct Ideal {
    FdAlgebra alg;
    std::set<int> members;

    Ideal() = default;
    Ideal(FdAlgebra a, std::set<int> s) : alg(std::move(a)), members(std::move(s)) {
        for (int j : members)
            if (j < 0 || j >= alg.num_blocks())
                throw std::invalid_argument("Ideal: block index out of range");
    }

    bool contains(int j) const { return members.count(j) > 0; }
    bool empty() const { return members.empty(); }

    friend bool operator==(const Ideal& a, const Ideal& b) {
        return a.alg == b.alg && a.members == b.members;
    }
    friend bool operator!=(const Ideal& a, const Ideal& b) { return !(a == b); }
};

inline Ideal zero_ideal(const FdAlgebra& alg) { return {alg, {}}; }

inline Ideal full_ideal(const FdAlgebra& alg) {
    std::set<int> s;
    for (int j = 0; j < alg.num_blocks(); ++j) s.insert(j);
    return {alg, std::move(s)};
}

/// Annihilator I^perp = {a : ab = 0 for all b in I}; the complementary block set.
inline Ideal ideal_perp(const Ideal& I) {
    std::set<int> s;
    for (int j = 0; j < I.alg.num_blocks(); ++j)
        if (!I.contains(j)) s.insert(j);
    return {I.alg, std::move(s)};
}

inline Ideal ideal_meet(const Ideal& I, const Ideal& J) {
    require_same_algebra(I.alg, J.alg, "ideal_meet");
    std::set<int> s;
    for (int j : I.members)
        if (J.contains(j)) s.insert(j);
    return {I.alg, std::move(s)};
}

inline bool ideal_subset(const Ideal& I, const Ideal& J) {
    require_same_algebra(I.alg, J.alg, "ideal_subset");
    for (int j : I.members)
        if (!J.contains(j)) return false;
    return true;
}

inline bool is_essential(const Ideal& I) { return ideal_perp(I).empty(); }

/// All 2^m ideals of a block algebra, in subset-mask order.
inline std::vector<Ideal> all_ideals(const FdAlgebra& alg) {
    int m = alg.num_blocks();
    std::vector<Ideal> out;
    out.reserve(static_cast<size_t>(1) << m);
    for (unsigned mask = 0; mask < (1u << m); ++mask) {
        std::set<int> s;
        for (int j = 0; j < m; ++j)
            if (mask & (1u << j)) s.insert(j);
        out.push_back(Ideal(alg, std::move(s)));
    }
    return out;
}

/// Entrywise max-norm distance, for tolerance comparisons scaled by the caller.
inline double alg_dist(const AlgElement& a, const AlgElement& b) {
    require_same_algebra(a.alg, b.alg, "alg_dist");
    double r = 0.0;
    for (size_t j = 0; j < a.data.size(); ++j) {
        if (a.data[j].size() == 0) continue;
        r = std::max(r, (a.data[j] - b.data[j]).cwiseAbs().maxCoeff());
    }
    return r;
}

inline bool alg_approx_equal(const AlgElement& a, const AlgElement& b,
                             double tol = 1e-9) {
    double scale = std::max(1.0, std::max(op_norm(a), op_norm(b)));
    return alg_dist(a, b) <= tol * scale;
}

}  // namespace cstar

#endif  // CSTAR_FDALG_HPP

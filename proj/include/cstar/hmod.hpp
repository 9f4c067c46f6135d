#ifndef CSTAR_HMOD_HPP
#define CSTAR_HMOD_HPP

#include <cstar/fdalg.hpp>

// Hilbert modules over a block algebra. Every Hilbert module over
// A = M_{n_0} + ... + M_{n_{m-1}} is X = M_{k_0 x n_0} + ... + M_{k_{m-1} x n_{m-1}}
// with <xi, eta>_X = xi_j* eta_j fiberwise, and L(X) = K(X) = sum of M_{k_j}
// acting by left multiplication on each fiber. Zero fibers (k_j = 0) encode
// zero summands and are legal everywhere.

namespace cstar {

struct HilbertModule {
    FdAlgebra algebra;
    std::vector<int> fibers;

    HilbertModule() = default;
    HilbertModule(FdAlgebra a, std::vector<int> k)
        : algebra(std::move(a)), fibers(std::move(k)) {
        if (static_cast<int>(fibers.size()) != algebra.num_blocks())
            throw std::invalid_argument("HilbertModule: fiber count != block count");
        for (int kj : fibers)
            if (kj < 0)
                throw std::invalid_argument("HilbertModule: fibers must be >= 0");
    }

    int num_fibers() const { return static_cast<int>(fibers.size()); }
    int fiber_dim(int j) const { return fibers.at(static_cast<size_t>(j)); }

    friend bool operator==(const HilbertModule& x, const HilbertModule& y) {
        return x.algebra == y.algebra && x.fibers == y.fibers;
    }
    friend bool operator!=(const HilbertModule& x, const HilbertModule& y) {
        return !(x == y);
    }
};

/// Element of a Hilbert module: one k_j x n_j matrix per fiber.
struct ModuleElement {
    HilbertModule mod;
    std::vector<Mat> data;

    ModuleElement() = default;
    ModuleElement(HilbertModule m, std::vector<Mat> d)
        : mod(std::move(m)), data(std::move(d)) {
        if (data.size() != mod.fibers.size())
            throw std::invalid_argument("ModuleElement: fiber count mismatch");
        for (int j = 0; j < mod.num_fibers(); ++j)
            if (data[j].rows() != mod.fiber_dim(j) ||
                data[j].cols() != mod.algebra.block_size(j))
                throw std::invalid_argument("ModuleElement: fiber shape mismatch");
    }

    const Mat& fiber(int j) const { return data.at(static_cast<size_t>(j)); }
};

/// Adjointable (= compact) operator on a Hilbert module: one k_j x k_j matrix
/// per fiber, acting by left multiplication.
struct ModuleOperator {
    HilbertModule mod;
    std::vector<Mat> data;

    ModuleOperator() = default;
    ModuleOperator(HilbertModule m, std::vector<Mat> d)
        : mod(std::move(m)), data(std::move(d)) {
        if (data.size() != mod.fibers.size())
            throw std::invalid_argument("ModuleOperator: fiber count mismatch");
        for (int j = 0; j < mod.num_fibers(); ++j)
            if (data[j].rows() != mod.fiber_dim(j) || data[j].cols() != mod.fiber_dim(j))
                throw std::invalid_argument("ModuleOperator: fiber shape mismatch");
    }

    const Mat& fiber(int j) const { return data.at(static_cast<size_t>(j)); }
};

inline void require_same_module(const HilbertModule& x, const HilbertModule& y,
                                const char* where) {
    if (x != y)
        throw std::invalid_argument(std::string(where) + ": mismatched parent modules");
}

inline ModuleElement mod_zero(const HilbertModule& m) {
    std::vector<Mat> d;
    d.reserve(m.fibers.size());
    for (int j = 0; j < m.num_fibers(); ++j)
        d.push_back(Mat::Zero(m.fiber_dim(j), m.algebra.block_size(j)));
    return {m, std::move(d)};
}

/// Fiber matrix unit e_{pq} in fiber j, zero elsewhere.
inline ModuleElement mod_matrix_unit(const HilbertModule& m, int j, int p, int q) {
    ModuleElement x = mod_zero(m);
    x.data.at(static_cast<size_t>(j))(p, q) = Complex(1.0, 0.0);
    return x;
}

inline ModuleElement mod_add(const ModuleElement& x, const ModuleElement& y) {
    require_same_module(x.mod, y.mod, "mod_add");
    std::vector<Mat> d;
    d.reserve(x.data.size());
    for (size_t j = 0; j < x.data.size(); ++j) d.push_back(x.data[j] + y.data[j]);
    return {x.mod, std::move(d)};
}

inline ModuleElement mod_sub(const ModuleElement& x, const ModuleElement& y) {
    require_same_module(x.mod, y.mod, "mod_sub");
    std::vector<Mat> d;
    d.reserve(x.data.size());
    for (size_t j = 0; j < x.data.size(); ++j) d.push_back(x.data[j] - y.data[j]);
    return {x.mod, std::move(d)};
}

inline ModuleElement mod_scale(Complex c, const ModuleElement& x) {
    std::vector<Mat> d;
    d.reserve(x.data.size());
    for (const Mat& m : x.data) d.push_back(c * m);
    return {x.mod, std::move(d)};
}

/// A-valued inner product <xi, eta>_X = xi_j* eta_j fiberwise.
inline AlgElement inner(const ModuleElement& xi, const ModuleElement& eta) {
    require_same_module(xi.mod, eta.mod, "inner");
    std::vector<Mat> d;
    d.reserve(xi.data.size());
    for (size_t j = 0; j < xi.data.size(); ++j)
        d.push_back(xi.data[j].adjoint() * eta.data[j]);
    return {xi.mod.algebra, std::move(d)};
}

inline ModuleElement right_act(const ModuleElement& xi, const AlgElement& a) {
    require_same_algebra(xi.mod.algebra, a.alg, "right_act");
    std::vector<Mat> d;
    d.reserve(xi.data.size());
    for (size_t j = 0; j < xi.data.size(); ++j) d.push_back(xi.data[j] * a.data[j]);
    return {xi.mod, std::move(d)};
}

/// ||xi|| = ||<xi,xi>_X||^{1/2} = largest singular value of any fiber of xi.
inline double module_norm(const ModuleElement& xi) {
    double r = 0.0;
    for (const Mat& m : xi.data) r = std::max(r, spectral_norm(m));
    return r;
}

/// Rank-one operator theta_{xi,eta}: zeta -> xi <eta, zeta>_X; fiberwise xi_j eta_j*.
inline ModuleOperator theta(const ModuleElement& xi, const ModuleElement& eta) {
    require_same_module(xi.mod, eta.mod, "theta");
    std::vector<Mat> d;
    d.reserve(xi.data.size());
    for (size_t j = 0; j < xi.data.size(); ++j)
        d.push_back(xi.data[j] * eta.data[j].adjoint());
    return {xi.mod, std::move(d)};
}

inline ModuleOperator op_identity(const HilbertModule& m) {
    std::vector<Mat> d;
    d.reserve(m.fibers.size());
    for (int j = 0; j < m.num_fibers(); ++j)
        d.push_back(Mat::Identity(m.fiber_dim(j), m.fiber_dim(j)));
    return {m, std::move(d)};
}

inline ModuleOperator op_zero(const HilbertModule& m) {
    std::vector<Mat> d;
    d.reserve(m.fibers.size());
    for (int j = 0; j < m.num_fibers(); ++j)
        d.push_back(Mat::Zero(m.fiber_dim(j), m.fiber_dim(j)));
    return {m, std::move(d)};
}

inline ModuleOperator op_compose(const ModuleOperator& s, const ModuleOperator& t) {
    require_same_module(s.mod, t.mod, "op_compose");
    std::vector<Mat> d;
    d.reserve(s.data.size());
    for (size_t j = 0; j < s.data.size(); ++j) d.push_back(s.data[j] * t.data[j]);
    return {s.mod, std::move(d)};
}

inline ModuleOperator op_adjoint(const ModuleOperator& s) {
    std::vector<Mat> d;
    d.reserve(s.data.size());
    for (const Mat& m : s.data) d.push_back(m.adjoint());
    return {s.mod, std::move(d)};
}

inline ModuleOperator op_add(const ModuleOperator& s, const ModuleOperator& t) {
    require_same_module(s.mod, t.mod, "op_add");
    std::vector<Mat> d;
    d.reserve(s.data.size());
    for (size_t j = 0; j < s.data.size(); ++j) d.push_back(s.data[j] + t.data[j]);
    return {s.mod, std::move(d)};
}

inline ModuleOperator op_sub(const ModuleOperator& s, const ModuleOperator& t) {
    require_same_module(s.mod, t.mod, "op_sub");
    std::vector<Mat> d;
    d.reserve(s.data.size());
    for (size_t j = 0; j < s.data.size(); ++j) d.push_back(s.data[j] - t.data[j]);
    return {s.mod, std::move(d)};
}

inline ModuleOperator op_scale(Complex c, const ModuleOperator& s) {
    std::vector<Mat> d;
    d.reserve(s.data.size());
    for (const Mat& m : s.data) d.push_back(c * m);
    return {s.mod, std::move(d)};
}

inline ModuleElement op_apply(const ModuleOperator& s, const ModuleElement& zeta) {
    require_same_module(s.mod, zeta.mod, "op_apply");
    std::vector<Mat> d;
    d.reserve(s.data.size());
    for (size_t j = 0; j < s.data.size(); ++j) d.push_back(s.data[j] * zeta.data[j]);
    return {s.mod, std::move(d)};
}

inline double operator_norm(const ModuleOperator& s) {
    double r = 0.0;
    for (const Mat& m : s.data) r = std::max(r, spectral_norm(m));
    return r;
}

inline double op_dist(const ModuleOperator& s, const ModuleOperator& t) {
    require_same_module(s.mod, t.mod, "op_dist");
    double r = 0.0;
    for (size_t j = 0; j < s.data.size(); ++j) {
        if (s.data[j].size() == 0) continue;
        r = std::max(r, (s.data[j] - t.data[j]).cwiseAbs().maxCoeff());
    }
    return r;
}

inline double mod_dist(const ModuleElement& x, const ModuleElement& y) {
    require_same_module(x.mod, y.mod, "mod_dist");
    double r = 0.0;
    for (size_t j = 0; j < x.data.size(); ++j) {
        if (x.data[j].size() == 0) continue;
        r = std::max(r, (x.data[j] - y.data[j]).cwiseAbs().maxCoeff());
    }
    return r;
}

struct FullnessResult {
    bool full;
    Ideal witness;  // span of inner products = blocks with a nonzero fiber
};

/// The closed span of {<xi,eta>_X} is the ideal {j : k_j >= 1}.
inline FullnessResult is_full(const HilbertModule& m) {
    std::set<int> s;
    for (int j = 0; j < m.num_fibers(); ++j)
        if (m.fiber_dim(j) >= 1) s.insert(j);
    Ideal w(m.algebra, std::move(s));
    bool full = w == full_ideal(m.algebra);
    return {full, std::move(w)};
}

}  // namespace cstar

#endif  // CSTAR_HMOD_HPP

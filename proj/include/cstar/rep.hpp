#ifndef CSTAR_REP_HPP
#define CSTAR_REP_HPP

#include <cstar/corr.hpp>

// Concrete representations (pi, t) of a correspondence on a finite-dimensional
// Hilbert space, given on the matrix-unit bases of A and X and extended
// linearly. Verdicts are tolerance-parameterized; reports always carry the raw
// defect norms so callers can re-judge.

namespace cstar {

struct Representation {
    Correspondence corr;
    int dim = 0;
    // pi_basis[j][p*n_j+q] = pi(matrix unit e^{(j)}_{pq}), an N x N matrix.
    std::vector<std::vector<Mat>> pi_basis;
    // t_basis[j][p*n_j+q] = t(fiber matrix unit), row-major over k_j x n_j.
    std::vector<std::vector<Mat>> t_basis;

    Representation() = default;
    Representation(Correspondence c, int n, std::vector<std::vector<Mat>> pb,
                   std::vector<std::vector<Mat>> tb)
        : corr(std::move(c)), dim(n), pi_basis(std::move(pb)), t_basis(std::move(tb)) {
        const FdAlgebra& alg = corr.algebra();
        if (static_cast<int>(pi_basis.size()) != alg.num_blocks())
            throw std::invalid_argument("Representation: pi basis block count mismatch");
        for (int j = 0; j < alg.num_blocks(); ++j) {
            int n_j = alg.block_size(j);
            if (static_cast<int>(pi_basis[static_cast<size_t>(j)].size()) != n_j * n_j)
                throw std::invalid_argument("Representation: pi basis size mismatch");
            for (const Mat& m : pi_basis[static_cast<size_t>(j)])
                if (m.rows() != dim || m.cols() != dim)
                    throw std::invalid_argument("Representation: pi matrix shape mismatch");
        }
        if (static_cast<int>(t_basis.size()) != corr.module.num_fibers())
            throw std::invalid_argument("Representation: t basis fiber count mismatch");
        for (int j = 0; j < corr.module.num_fibers(); ++j) {
            int k = corr.module.fiber_dim(j);
            int n_j = alg.block_size(j);
            if (static_cast<int>(t_basis[static_cast<size_t>(j)].size()) != k * n_j)
                throw std::invalid_argument("Representation: t basis size mismatch");
            for (const Mat& m : t_basis[static_cast<size_t>(j)])
                if (m.rows() != dim || m.cols() != dim)
                    throw std::invalid_argument("Representation: t matrix shape mismatch");
        }
    }

    Mat pi(const AlgElement& a) const {
        require_same_algebra(a.alg, corr.algebra(), "Representation::pi");
        Mat out = Mat::Zero(dim, dim);
        for (int j = 0; j < corr.algebra().num_blocks(); ++j) {
            int n = corr.algebra().block_size(j);
            for (int p = 0; p < n; ++p)
                for (int q = 0; q < n; ++q) {
                    Complex c = a.data[static_cast<size_t>(j)](p, q);
                    if (c != Complex(0.0, 0.0))
                        out += c * pi_basis[static_cast<size_t>(j)][static_cast<size_t>(p * n + q)];
                }
        }
        return out;
    }

    Mat t(const ModuleElement& xi) const {
        require_same_module(xi.mod, corr.module, "Representation::t");
        Mat out = Mat::Zero(dim, dim);
        for (int j = 0; j < corr.module.num_fibers(); ++j) {
            int k = corr.module.fiber_dim(j);
            int n = corr.algebra().block_size(j);
            for (int p = 0; p < k; ++p)
                for (int q = 0; q < n; ++q) {
                    Complex c = xi.data[static_cast<size_t>(j)](p, q);
                    if (c != Complex(0.0, 0.0))
                        out += c * t_basis[static_cast<size_t>(j)][static_cast<size_t>(p * n + q)];
                }
        }
        return out;
    }
};

struct DefectEntry {
    std::string label;
    double defect;
};

struct CovarianceReport {
    double tol = 1e-9;
    std::vector<DefectEntry> entries;
    bool passed = true;

    double max_defect() const {
        double r = 0.0;
        for (const auto& e : entries) r = std::max(r, e.defect);
        return r;
    }
    void add(std::string label, double defect) {
        passed = passed && defect <= tol;
        entries.push_back({std::move(label), defect});
    }
};

namespace detail {

// Residual defects are measured in the Frobenius norm (an upper bound for the
// operator norm, and much cheaper at these sizes); genuine operator norms of
// single operators use spectral_norm.
inline double resid_norm(const Mat& m) { return m.norm(); }

}  // namespace detail

/// Checks the representation axioms on basis pairs:
///   (i)  t(xi)* t(eta) = pi(<xi,eta>)
///   (ii) pi(a) t(xi) = t(phi_X(a) xi)
/// plus the automatic identity t(xi) pi(a) = t(xi a), the contraction bound
/// ||t(xi)|| <= ||xi||, and that pi is *-preserving and multiplicative on the
/// basis. An optional domain projection restricts the defect of axiom (i) and
/// the norm bound to a subspace (used for truncated constructions).
inline CovarianceReport verify_representation(const Representation& R, double tol = 1e-9,
                                              const Mat* domain_proj = nullptr) {
    CovarianceReport rep;
    rep.tol = tol;
    const FdAlgebra& alg = R.corr.algebra();
    const HilbertModule& mod = R.corr.module;

    auto restrict = [&](const Mat& m) -> Mat {
        return domain_proj ? Mat(m * (*domain_proj)) : m;
    };
    auto pi_unit = [&](int j, int p, int q) -> const Mat& {
        return R.pi_basis[static_cast<size_t>(j)]
                         [static_cast<size_t>(p * alg.block_size(j) + q)];
    };

    // pi is a *-homomorphism on the basis
    double star_defect = 0.0, mult_defect = 0.0;
    for (int j = 0; j < alg.num_blocks(); ++j) {
        int n = alg.block_size(j);
        for (int p = 0; p < n; ++p)
            for (int q = 0; q < n; ++q) {
                star_defect = std::max(
                    star_defect,
                    detail::resid_norm(pi_unit(j, p, q).adjoint() - pi_unit(j, q, p)));
                for (int r = 0; r < n; ++r)
                    mult_defect = std::max(
                        mult_defect, detail::resid_norm(pi_unit(j, p, q) * pi_unit(j, q, r) -
                                                        pi_unit(j, p, r)));
            }
    }
    rep.add("pi_star_preserving", star_defect);
    rep.add("pi_multiplicative", mult_defect);

    // axiom (i) on fiber basis pairs; within a fiber
    // <e_{pq}, e_{rs}> = delta_{pr} e_{qs}, across fibers it vanishes.
    double ax1 = 0.0;
    for (int j = 0; j < mod.num_fibers(); ++j) {
        int k = mod.fiber_dim(j), n = alg.block_size(j);
        const auto& tb = R.t_basis[static_cast<size_t>(j)];
        for (int a = 0; a < k * n; ++a)
            for (int b = 0; b < k * n; ++b) {
                Mat lhs = tb[static_cast<size_t>(a)].adjoint() * tb[static_cast<size_t>(b)];
                if (a / n == b / n) lhs -= pi_unit(j, a % n, b % n);
                ax1 = std::max(ax1, detail::resid_norm(restrict(lhs)));
            }
        for (int j2 = 0; j2 < mod.num_fibers(); ++j2) {
            if (j2 == j || mod.fiber_dim(j2) == 0 || k == 0) continue;
            Mat lhs = tb[0].adjoint() * R.t_basis[static_cast<size_t>(j2)][0];
            ax1 = std::max(ax1, detail::resid_norm(restrict(lhs)));
        }
    }
    rep.add("axiom_i", ax1);

    // axiom (ii) and the automatic identity on (block unit, fiber unit) pairs
    double ax2 = 0.0, auto_id = 0.0, norm_bound = 0.0;
    for (int jf = 0; jf < mod.num_fibers(); ++jf) {
        int k = mod.fiber_dim(jf), n = alg.block_size(jf);
        for (int b = 0; b < k * n; ++b) {
            ModuleElement xi = mod_matrix_unit(mod, jf, b / n, b % n);
            const Mat& txi = R.t_basis[static_cast<size_t>(jf)][static_cast<size_t>(b)];
            norm_bound = std::max(
                norm_bound, std::max(0.0, spectral_norm(restrict(txi)) - module_norm(xi)));
            for (int ja = 0; ja < alg.num_blocks(); ++ja) {
                int na = alg.block_size(ja);
                for (int a = 0; a < na * na; ++a) {
                    AlgElement u = alg_matrix_unit(alg, ja, a / na, a % na);
                    ax2 = std::max(ax2, detail::resid_norm(
                                            pi_unit(ja, a / na, a % na) * txi -
                                            R.t(op_apply(left_act(R.corr, u), xi))));
                    auto_id = std::max(
                        auto_id, detail::resid_norm(restrict(
                                     txi * pi_unit(ja, a / na, a % na) -
                                     R.t(right_act(xi, u)))));
                }
            }
        }
    }
    rep.add("axiom_ii", ax2);
    rep.add("automatic_identity", auto_id);
    rep.add("norm_bound", norm_bound);
    return rep;
}

/// psi_t extended linearly from theta_{xi,eta} -> t(xi) t(eta)* to all of
/// K(X). Well-definedness is certified by decomposing every basis operator two
/// independent ways (plain matrix-unit vectors, and the same vectors rotated
/// by a fixed unitary) and comparing the images.
inline Mat psi_t(const Representation& R, const ModuleOperator& T,
                 double wd_tol = 1e-7) {
    require_same_module(T.mod, R.corr.module, "psi_t");
    const FdAlgebra& alg = R.corr.algebra();
    const HilbertModule& mod = R.corr.module;
    Mat out1 = Mat::Zero(R.dim, R.dim);
    Mat out2 = Mat::Zero(R.dim, R.dim);
    double scale = 0.0;
    for (int j = 0; j < mod.num_fibers(); ++j) {
        int k = mod.fiber_dim(j);
        if (k == 0) continue;
        int n = alg.block_size(j);
        // route 2 rotates the reference column by the DFT unitary of block j
        Mat g(n, n);
        for (int a = 0; a < n; ++a)
            for (int b = 0; b < n; ++b)
                g(a, b) = std::polar(1.0 / std::sqrt(static_cast<double>(n)),
                                     2.0 * M_PI * a * b / n);
        std::vector<Mat> t_plain(static_cast<size_t>(k)), t_rot(static_cast<size_t>(k));
        for (int p = 0; p < k; ++p) {
            ModuleElement e = mod_matrix_unit(mod, j, p, 0);
            t_plain[static_cast<size_t>(p)] = R.t(e);
            ModuleElement er = mod_zero(mod);
            er.data[static_cast<size_t>(j)].row(p) = g.row(0);
            t_rot[static_cast<size_t>(p)] = R.t(er);
        }
        const Mat& tj = T.data[static_cast<size_t>(j)];
        for (int p = 0; p < k; ++p)
            for (int q = 0; q < k; ++q) {
                Complex c = tj(p, q);
                if (c == Complex(0.0, 0.0)) continue;
                out1 += c * t_plain[static_cast<size_t>(p)] * t_plain[static_cast<size_t>(q)].adjoint();
                out2 += c * t_rot[static_cast<size_t>(p)] * t_rot[static_cast<size_t>(q)].adjoint();
                scale = std::max(scale, std::abs(c));
            }
    }
    double resid = detail::resid_norm(out1 - out2);
    if (resid > wd_tol * std::max(1.0, scale))
        throw std::runtime_error("psi_t: decomposition images disagree (not a representation)");
    return out1;
}

/// Covariance relative to an ideal J0: per matrix-unit generator a of J0,
/// the defect ||pi(a) - psi_t(phi_X(a))||. With J0 = jx(X) this is the full
/// covariance condition; J0 empty passes vacuously (the Toeplitz case).
inline CovarianceReport check_relative_covariance(const Representation& R,
                                                  const Ideal& J0, double tol = 1e-9) {
    require_same_algebra(J0.alg, R.corr.algebra(), "check_relative_covariance");
    CovarianceReport rep;
    rep.tol = tol;
    for (int i : J0.members) {
        int n = R.corr.algebra().block_size(i);
        for (int p = 0; p < n; ++p)
            for (int q = 0; q < n; ++q) {
                AlgElement a = alg_matrix_unit(R.corr.algebra(), i, p, q);
                Mat d = R.pi(a) - psi_t(R, left_act(R.corr, a));
                rep.add("covariance[block " + std::to_string(i) + ", e(" +
                            std::to_string(p) + "," + std::to_string(q) + ")]",
                        detail::resid_norm(d));
            }
    }
    return rep;
}

struct InjectivityResult {
    bool injective;
    double isometric_defect;
};

/// pi is injective iff it kills no block; for an injective representation the
/// map t is isometric, so the reported defect should sit at tolerance level.
inline InjectivityResult rep_injectivity(const Representation& R, double tol = 1e-9) {
    bool injective = true;
    for (int j = 0; j < R.corr.algebra().num_blocks(); ++j) {
        double blk = 0.0;
        for (const Mat& m : R.pi_basis[static_cast<size_t>(j)])
            blk = std::max(blk, m.norm());
        if (blk <= tol) injective = false;
    }
    double defect = 0.0;
    const HilbertModule& mod = R.corr.module;
    for (int j = 0; j < mod.num_fibers(); ++j) {
        int k = mod.fiber_dim(j), n = R.corr.algebra().block_size(j);
        for (int b = 0; b < k * n; ++b) {
            ModuleElement xi = mod_matrix_unit(mod, j, b / n, b % n);
            defect = std::max(defect,
                              std::abs(spectral_norm(R.t(xi)) - module_norm(xi)));
        }
    }
    return {injective, defect};
}

}  // namespace cstar

#endif  // CSTAR_REP_HPP

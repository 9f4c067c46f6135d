#ifndef CSTAR_FOCK_HPP
#define CSTAR_FOCK_HPP

#include <cstar/rep.hpp>

// Truncated Fock representations. Level n realizes the n-fold tensor power of
// the correspondence, localized over A by tensoring with the identity
// representation on C^{n_0} + ... + C^{n_{m-1}}: a fiber M_{k_j x n_j}
// contributes k_j * n_j Hilbert-space dimensions, which preserves all inner
// products exactly. Level 0 is A acting on itself. t(xi) is the creation
// operator and annihilates the top level, so axiom (i) is only promised on
// vectors supported below the cut; the truncation error is a first-class,
// testable object (see fock_defect_profile).
//
// Basis ordering is deterministic: levels ascending, fibers ascending within a
// level, row-major within a fiber.

namespace cstar {

struct FockSpace {
    Correspondence corr;
    int depth = 0;
    std::vector<Correspondence> levels;  // tensor powers; levels[0] = identity corr
    std::vector<int> level_dims;         // localized dimensions d_0..d_N
    std::vector<int> level_offsets;
    int total_dim = 0;
};

/// Localized dimensions d_0..d_N; throws past the dimension cap.
inline std::vector<int> fock_dims(const Correspondence& X, int depth,
                                  long cap = 1000000) {
    if (depth < 0) throw std::invalid_argument("fock_dims: negative depth");
    const FdAlgebra& alg = X.algebra();
    std::vector<int> dims;
    Correspondence level = identity_correspondence(alg);
    for (int n = 0; n <= depth; ++n) {
        long d = 0;
        for (int j = 0; j < alg.num_blocks(); ++j)
            d += static_cast<long>(level.module.fiber_dim(j)) * alg.block_size(j);
        if (d > cap)
            throw std::runtime_error("fock_dims: level dimension exceeds cap");
        dims.push_back(static_cast<int>(d));
        if (n < depth) level = tensor(X, level);
    }
    return dims;
}

inline FockSpace build_fock_space(const Correspondence& X, int depth,
                                  long cap = 1000000) {
    FockSpace f;
    f.corr = X;
    f.depth = depth;
    const FdAlgebra& alg = X.algebra();
    Correspondence level = identity_correspondence(alg);
    for (int n = 0; n <= depth; ++n) {
        long d = 0;
        for (int j = 0; j < alg.num_blocks(); ++j)
            d += static_cast<long>(level.module.fiber_dim(j)) * alg.block_size(j);
        if (f.total_dim + d > cap)
            throw std::runtime_error("build_fock_space: dimension exceeds cap");
        f.levels.push_back(level);
        f.level_offsets.push_back(f.total_dim);
        f.level_dims.push_back(static_cast<int>(d));
        f.total_dim += static_cast<int>(d);
        if (n < depth) level = tensor(X, level);
    }
    return f;
}

namespace detail {

// Column index of basis vector (fiber j, row p, col q) inside a localized level.
inline int level_index(const FdAlgebra& alg, const Correspondence& level, int j,
                       int p, int q) {
    int off = 0;
    for (int jj = 0; jj < j; ++jj)
        off += level.module.fiber_dim(jj) * alg.block_size(jj);
    return off + p * alg.block_size(j) + q;
}

// Writes a localized module element as a column vector of length d_n.
inline Eigen::VectorXcd localize(const FdAlgebra& alg, const ModuleElement& z,
                                 int dim) {
    Eigen::VectorXcd v = Eigen::VectorXcd::Zero(dim);
    int off = 0;
    for (int j = 0; j < z.mod.num_fibers(); ++j) {
        int k = z.mod.fiber_dim(j), n = alg.block_size(j);
        for (int p = 0; p < k; ++p)
            for (int q = 0; q < n; ++q) v(off + p * n + q) = z.data[static_cast<size_t>(j)](p, q);
        off += k * n;
    }
    return v;
}

}  // namespace detail

/// Orthogonal projection onto the span of the given levels.
inline Mat level_projection(const FockSpace& f, int first, int last) {
    Mat p = Mat::Zero(f.total_dim, f.total_dim);
    for (int n = std::max(first, 0); n <= std::min(last, f.depth); ++n)
        for (int i = 0; i < f.level_dims[static_cast<size_t>(n)]; ++i) {
            int idx = f.level_offsets[static_cast<size_t>(n)] + i;
            p(idx, idx) = 1.0;
        }
    return p;
}

/// The truncated Fock representation: pi acts blockwise on every level through
/// the level's left action, t is creation into the next level and annihilates
/// level N.
inline Representation build_fock(const Correspondence& X, int depth,
                                 long cap = 1000000) {
    FockSpace f = build_fock_space(X, depth, cap);
    const FdAlgebra& alg = X.algebra();
    int N = f.total_dim;

    // pi on block matrix units: on level n, fiber j, the realized left action
    // tensored with the identity on the n_j columns.
    std::vector<std::vector<Mat>> pi_basis(static_cast<size_t>(alg.num_blocks()));
    for (int jb = 0; jb < alg.num_blocks(); ++jb) {
        int nb = alg.block_size(jb);
        for (int p = 0; p < nb; ++p)
            for (int q = 0; q < nb; ++q) {
                AlgElement a = alg_matrix_unit(alg, jb, p, q);
                Mat m = Mat::Zero(N, N);
                for (int lev = 0; lev <= depth; ++lev) {
                    const Correspondence& L = f.levels[static_cast<size_t>(lev)];
                    int off = f.level_offsets[static_cast<size_t>(lev)];
                    int fiber_off = 0;
                    for (int j = 0; j < alg.num_blocks(); ++j) {
                        int k = L.module.fiber_dim(j), n = alg.block_size(j);
                        if (k > 0) {
                            Mat act = L.left_action.realize_fiber(a, j);
                            for (int r = 0; r < k; ++r)
                                for (int s = 0; s < k; ++s) {
                                    Complex c = act(r, s);
                                    if (c == Complex(0.0, 0.0)) continue;
                                    for (int col = 0; col < n; ++col)
                                        m(off + fiber_off + r * n + col,
                                          off + fiber_off + s * n + col) = c;
                                }
                        }
                        fiber_off += k * n;
                    }
                }
                pi_basis[static_cast<size_t>(jb)].push_back(std::move(m));
            }
    }

    // t on fiber matrix units: creation level n -> n+1 via elementary tensors.
    std::vector<std::vector<Mat>> t_basis(static_cast<size_t>(X.module.num_fibers()));
    for (int jf = 0; jf < X.module.num_fibers(); ++jf) {
        int kf = X.module.fiber_dim(jf), nf = alg.block_size(jf);
        for (int b = 0; b < kf * nf; ++b) {
            ModuleElement xi = mod_matrix_unit(X.module, jf, b / nf, b % nf);
            Mat m = Mat::Zero(N, N);
            for (int lev = 0; lev < depth; ++lev) {
                const Correspondence& L = f.levels[static_cast<size_t>(lev)];
                int src_off = f.level_offsets[static_cast<size_t>(lev)];
                int dst_off = f.level_offsets[static_cast<size_t>(lev + 1)];
                int dst_dim = f.level_dims[static_cast<size_t>(lev + 1)];
                int col = 0;
                for (int j = 0; j < alg.num_blocks(); ++j) {
                    int k = L.module.fiber_dim(j), n = alg.block_size(j);
                    for (int p = 0; p < k; ++p)
                        for (int q = 0; q < n; ++q) {
                            ModuleElement z = mod_matrix_unit(L.module, j, p, q);
                            ModuleElement w = tensor_elem(X, L, xi, z);
                            Eigen::VectorXcd v = detail::localize(alg, w, dst_dim);
                            m.block(dst_off, src_off + col, dst_dim, 1) = v;
                            ++col;
                        }
                }
            }
            t_basis[static_cast<size_t>(jf)].push_back(std::move(m));
        }
    }

    return {X, N, std::move(pi_basis), std::move(t_basis)};
}

struct FockDefectRow {
    int block;  // generator block index in jx
    int p, q;   // matrix unit within the block
    std::vector<double> level_defects;  // operator norm per level, 0..depth
};

/// Per-level profile of the covariance defect pi(a) - psi_t(phi_X(a)) for each
/// matrix-unit generator a of jx(X). The defect is concentrated at the vacuum:
/// it vanishes on levels 1..N and equals the generator's level-0 action norm at
/// level 0, which is exactly why the truncated (Toeplitz) representation fails
/// covariance and the covariant quotient is proper.
inline std::vector<FockDefectRow> fock_defect_profile(const FockSpace& f,
                                                      const Representation& R) {
    if (R.dim != f.total_dim)
        throw std::invalid_argument("fock_defect_profile: representation/space mismatch");
    std::vector<FockDefectRow> rows;
    Ideal J = jx(f.corr);
    for (int i : J.members) {
        int n = f.corr.algebra().block_size(i);
        for (int p = 0; p < n; ++p)
            for (int q = 0; q < n; ++q) {
                AlgElement a = alg_matrix_unit(f.corr.algebra(), i, p, q);
                Mat d = R.pi(a) - psi_t(R, left_act(f.corr, a));
                FockDefectRow row{i, p, q, {}};
                for (int lev = 0; lev <= f.depth; ++lev) {
                    int off = f.level_offsets[static_cast<size_t>(lev)];
                    int dim = f.level_dims[static_cast<size_t>(lev)];
                    row.level_defects.push_back(
                        spectral_norm(d.block(off, off, dim, dim)));
                }
                rows.push_back(std::move(row));
            }
    }
    return rows;
}

}  // namespace cstar

#endif  // CSTAR_FOCK_HPP

#include <doctest.h>

#include "oracles.hpp"

using namespace cstar;

namespace {

Correspondence two_cycle() {
    Graph g({"u", "v"}, {{"e", "u", "v"}, {"f", "v", "u"}});
    return graph_correspondence(g);
}

Mat unit2(int r, int c) {
    Mat m = Mat::Zero(2, 2);
    m(r, c) = 1.0;
    return m;
}

// the exact 2x2 representation of the 2-cycle by permutation partial isometries
Representation cycle_rep() {
    Correspondence X = two_cycle();
    std::vector<std::vector<Mat>> pi_basis{{unit2(0, 0)}, {unit2(1, 1)}};
    // fiber 0 (u) collects edge f = v->u, fiber 1 (v) collects edge e = u->v
    std::vector<std::vector<Mat>> t_basis{{unit2(1, 0)}, {unit2(0, 1)}};
    return {X, 2, std::move(pi_basis), std::move(t_basis)};
}

}  // namespace

TEST_CASE("constructor validates basis shapes") {
    Correspondence X = two_cycle();
    CHECK_THROWS_AS(Representation(X, 2, {{unit2(0, 0)}}, {{unit2(1, 0)}, {unit2(0, 1)}}),
                    std::invalid_argument);
    CHECK_THROWS_AS(Representation(X, 3, {{unit2(0, 0)}, {unit2(1, 1)}},
                                   {{unit2(1, 0)}, {unit2(0, 1)}}),
                    std::invalid_argument);
}

TEST_CASE("zero representation passes vacuously and is not injective") {
    Correspondence X = two_cycle();
    Mat z = Mat::Zero(2, 2);
    Representation R(X, 2, {{z}, {z}}, {{z}, {z}});
    CovarianceReport rep = verify_representation(R);
    CHECK(rep.passed);
    CHECK(rep.max_defect() == 0.0);
    CHECK_FALSE(rep_injectivity(R).injective);
}

TEST_CASE("cycle representation is exact and covariant") {
    Representation R = cycle_rep();
    CovarianceReport rep = verify_representation(R, 1e-12);
    CHECK(rep.passed);
    CHECK(rep.max_defect() == 0.0);

    InjectivityResult inj = rep_injectivity(R);
    CHECK(inj.injective);
    CHECK(inj.isometric_defect <= 1e-12);

    // Toeplitz case: empty ideal is vacuous
    CovarianceReport vac = check_relative_covariance(R, zero_ideal(R.corr.algebra()));
    CHECK(vac.passed);
    CHECK(vac.entries.empty());

    // full covariance over jx = everything
    CovarianceReport cov = check_relative_covariance(R, jx(R.corr), 1e-12);
    CHECK(cov.passed);
}

TEST_CASE("doubling t breaks axiom (i) by exactly a factor of three") {
    Representation R = cycle_rep();
    Representation D(R.corr, R.dim,
                     R.pi_basis,
                     {{2.0 * R.t_basis[0][0]}, {2.0 * R.t_basis[1][0]}});
    CovarianceReport rep = verify_representation(D);
    CHECK_FALSE(rep.passed);
    for (const auto& e : rep.entries)
        if (e.label == "axiom_i")
            CHECK(e.defect == doctest::Approx(3.0));  // 3 * ||pi(<xi,xi>)||
}

TEST_CASE("halving t keeps pi injective but breaks isometry") {
    Representation R = cycle_rep();
    Representation H(R.corr, R.dim, R.pi_basis,
                     {{0.5 * R.t_basis[0][0]}, {0.5 * R.t_basis[1][0]}});
    InjectivityResult inj = rep_injectivity(H);
    CHECK(inj.injective);
    CHECK(inj.isometric_defect == doctest::Approx(0.5));
    CHECK_FALSE(verify_representation(H).passed);
}

TEST_CASE("psi_t on generators, adjoints and products") {
    std::mt19937 rng(101);
    Representation R = cycle_rep();
    const HilbertModule& mod = R.corr.module;
    for (int it = 0; it < 50; ++it) {
        ModuleElement x = testutil::random_mod_element(rng, mod);
        ModuleElement y = testutil::random_mod_element(rng, mod);
        Mat lhs = psi_t(R, theta(x, y));
        Mat rhs = R.t(x) * R.t(y).adjoint();
        CHECK((lhs - rhs).norm() < 1e-10 * std::max(1.0, rhs.norm()));
    }
    for (int it = 0; it < 30; ++it) {
        std::vector<Mat> sd, td;
        for (int j = 0; j < mod.num_fibers(); ++j) {
            sd.push_back(testutil::random_matrix(rng, mod.fiber_dim(j), mod.fiber_dim(j)));
            td.push_back(testutil::random_matrix(rng, mod.fiber_dim(j), mod.fiber_dim(j)));
        }
        ModuleOperator S(mod, sd), T(mod, td);
        CHECK((psi_t(R, op_adjoint(S)) - psi_t(R, S).adjoint()).norm() < 1e-9);
        CHECK((psi_t(R, op_compose(S, T)) - psi_t(R, S) * psi_t(R, T)).norm() < 1e-9);
    }
}

TEST_CASE("psi_t injectivity for an injective representation") {
    Representation R = cycle_rep();
    const HilbertModule& mod = R.corr.module;
    std::vector<Eigen::VectorXcd> vecs;
    int kdim = 0;
    for (int j = 0; j < mod.num_fibers(); ++j) {
        int k = mod.fiber_dim(j);
        kdim += k * k;
        for (int p = 0; p < k; ++p)
            for (int q = 0; q < k; ++q) {
                ModuleOperator op = op_zero(mod);
                op.data[static_cast<size_t>(j)](p, q) = 1.0;
                Mat m = psi_t(R, op);
                Eigen::VectorXcd v(m.size());
                for (int r = 0; r < m.rows(); ++r)
                    for (int c = 0; c < m.cols(); ++c) v(r * m.cols() + c) = m(r, c);
                vecs.push_back(std::move(v));
            }
    }
    CHECK(testutil::span_rank(vecs) == kdim);
}

TEST_CASE("psi_t rejects inconsistent t data") {
    // needs a block of size >= 2 so the two decomposition routes differ
    std::mt19937 rng(103);
    Correspondence X = identity_correspondence(FdAlgebra({2}));
    Representation R = build_fock(X, 1);
    // corrupt one creation matrix
    R.t_basis[0][1] = testutil::random_matrix(rng, R.dim, R.dim);
    CHECK_THROWS_AS(psi_t(R, op_identity(X.module)), std::runtime_error);
}

TEST_CASE("automatic identity defect stays within 10x tolerance for passing reps") {
    Representation R = cycle_rep();
    CovarianceReport rep = verify_representation(R, 1e-10);
    REQUIRE(rep.passed);
    for (const auto& e : rep.entries)
        if (e.label == "automatic_identity") CHECK(e.defect <= 10 * rep.tol);
}

#include <doctest.h>

#include "oracles.hpp"

using namespace cstar;

namespace {

Correspondence loops_correspondence(int n) {
    FdAlgebra alg({1});
    Eigen::MatrixXi m(1, 1);
    m << n;
    return {HilbertModule(alg, {n}), StarHom(alg, {n}, std::move(m))};
}

Correspondence two_cycle() {
    Graph g({"u", "v"}, {{"e", "u", "v"}, {"f", "v", "u"}});
    return graph_correspondence(g);
}

double axiom_defect(const CovarianceReport& rep, const std::string& label) {
    for (const auto& e : rep.entries)
        if (e.label == label) return e.defect;
    FAIL(("missing report entry: " + label));
    return -1.0;
}

}  // namespace

TEST_CASE("fock dimensions") {
    CHECK(fock_dims(loops_correspondence(2), 3) == std::vector<int>{1, 2, 4, 8});

    Graph g({"u", "v"}, {{"e", "u", "v"}});
    CHECK(fock_dims(graph_correspondence(g), 3) == std::vector<int>{2, 1, 0, 0});

    FdAlgebra alg({2, 1});
    CHECK(fock_dims(zero_correspondence(alg), 2) == std::vector<int>{3, 0, 0});

    CHECK_THROWS_AS(fock_dims(loops_correspondence(2), 40), std::runtime_error);
    CHECK_THROWS_AS(fock_dims(loops_correspondence(2), -1), std::invalid_argument);
}

TEST_CASE("depth zero gives the identity representation of A with t = 0") {
    Correspondence X = loops_correspondence(2);
    FockSpace f = build_fock_space(X, 0);
    Representation R = build_fock(X, 0);
    CHECK(R.dim == 1);
    for (const auto& fib : R.t_basis)
        for (const Mat& m : fib) CHECK(m.norm() == 0.0);
    CHECK(rep_injectivity(R).injective);
    // sub-cut domain is empty at depth 0: projection onto levels 0..-1 is zero
    Mat proj = level_projection(f, 0, -1);
    CHECK(proj.norm() == 0.0);
    CovarianceReport rep = verify_representation(R, 1e-12, &proj);
    CHECK(rep.passed);
}

TEST_CASE("O_2 Fock representation at depth 4 passes below the cut") {
    Correspondence X = loops_correspondence(2);
    FockSpace f = build_fock_space(X, 4);
    Representation R = build_fock(X, 4);
    CHECK(R.dim == 1 + 2 + 4 + 8 + 16);
    Mat below = level_projection(f, 0, 3);
    CovarianceReport rep = verify_representation(R, 1e-9, &below);
    CHECK(rep.passed);
    InjectivityResult inj = rep_injectivity(R);
    CHECK(inj.injective);
    CHECK(inj.isometric_defect <= 1e-9);
}

TEST_CASE("axiom (ii) is exact on all levels, axiom (i) fails only at the cut") {
    Correspondence X = two_cycle();
    FockSpace f = build_fock_space(X, 4);
    Representation R = build_fock(X, 4);

    CovarianceReport unrestricted = verify_representation(R, 1e-12);
    CHECK(axiom_defect(unrestricted, "axiom_ii") <= 1e-12);
    CHECK(axiom_defect(unrestricted, "axiom_i") > 0.5);  // the cut is visible

    Mat below = level_projection(f, 0, 3);
    CovarianceReport restricted = verify_representation(R, 1e-12, &below);
    CHECK(axiom_defect(restricted, "axiom_i") <= 1e-12);
}

TEST_CASE("covariance defect is concentrated at the vacuum") {
    Correspondence X = loops_correspondence(1);
    FockSpace f = build_fock_space(X, 3);
    Representation R = build_fock(X, 3);
    std::vector<FockDefectRow> rows = fock_defect_profile(f, R);
    REQUIRE(rows.size() == 1);
    REQUIRE(rows[0].level_defects.size() == 4);
    CHECK(rows[0].level_defects[0] == doctest::Approx(1.0));
    for (size_t l = 1; l < 4; ++l) CHECK(rows[0].level_defects[l] <= 1e-10);

    // and the overall covariance check fails because of that vacuum defect
    CHECK_FALSE(check_relative_covariance(R, jx(X)).passed);

    // empty jx: nothing to profile (Toeplitz = covariant)
    Correspondence Z = zero_correspondence(FdAlgebra({1}));
    FockSpace fz = build_fock_space(Z, 2);
    CHECK(fock_defect_profile(fz, build_fock(Z, 2)).empty());
}

TEST_CASE("creation operators are graded and adjointness holds") {
    std::mt19937 rng(107);
    Correspondence X = two_cycle();
    FockSpace f = build_fock_space(X, 3);
    Representation R = build_fock(X, 3);
    ModuleElement xi = testutil::random_mod_element(rng, X.module);
    Mat t = R.t(xi);

    // t raises the level by exactly one; pi preserves levels
    for (int a = 0; a <= 3; ++a)
        for (int b = 0; b <= 3; ++b) {
            Mat blk = t.block(f.level_offsets[static_cast<size_t>(a)],
                              f.level_offsets[static_cast<size_t>(b)],
                              f.level_dims[static_cast<size_t>(a)],
                              f.level_dims[static_cast<size_t>(b)]);
            if (a != b + 1) CHECK(blk.norm() == 0.0);
        }
    AlgElement a = testutil::random_alg_element(rng, X.algebra());
    Mat pa = R.pi(a);
    for (int i = 0; i <= 3; ++i)
        for (int j = 0; j <= 3; ++j) {
            if (i == j) continue;
            Mat blk = pa.block(f.level_offsets[static_cast<size_t>(i)],
                               f.level_offsets[static_cast<size_t>(j)],
                               f.level_dims[static_cast<size_t>(i)],
                               f.level_dims[static_cast<size_t>(j)]);
            CHECK(blk.norm() == 0.0);
        }

    // products of depth+1 creations vanish
    Mat power = Mat::Identity(R.dim, R.dim);
    for (int k = 0; k < 4; ++k) power = t * power;
    CHECK(power.norm() == 0.0);

    // adjointness on random vectors
    for (int it = 0; it < 20; ++it) {
        Eigen::VectorXcd v = testutil::random_matrix(rng, R.dim, 1);
        Eigen::VectorXcd w = testutil::random_matrix(rng, R.dim, 1);
        Complex l = w.dot(t * v);              // <w, t v>
        Complex r = (t.adjoint() * w).dot(v);  // <t* w, v>
        CHECK(std::abs(l - r) < 1e-10 * std::max(1.0, std::abs(l)));
    }
}

TEST_CASE("psi_t of the identity of K(X) projects onto levels >= 1") {
    Correspondence X = loops_correspondence(2);
    FockSpace f = build_fock_space(X, 3);
    Representation R = build_fock(X, 3);
    Mat p = psi_t(R, op_identity(X.module));
    Mat expect = level_projection(f, 1, 3);
    CHECK((p - expect).norm() < 1e-9);
}

TEST_CASE("random correspondences: Fock representation behaves below the cut") {
    std::mt19937 rng(109);
    for (int it = 0; it < 8; ++it) {
        Correspondence X = testutil::random_small_correspondence(rng, 3, 80);
        FockSpace f = build_fock_space(X, 3);
        Representation R = build_fock(X, 3);
        Mat below = level_projection(f, 0, 2);
        CHECK(verify_representation(R, 1e-9, &below).passed);
        CHECK(rep_injectivity(R).injective);
    }
}

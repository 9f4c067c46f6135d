#include <doctest.h>

#include "oracles.hpp"

using namespace cstar;

TEST_CASE("algebra construction validates") {
    CHECK_THROWS_AS(FdAlgebra(std::vector<int>{}), std::invalid_argument);
    CHECK_THROWS_AS(FdAlgebra({2, 0}), std::invalid_argument);
    FdAlgebra a({1, 2, 3});
    CHECK(a.num_blocks() == 3);
    CHECK(a.dim() == 1 + 4 + 9);
    CHECK(a.rep_dim() == 6);
}

TEST_CASE("element construction validates shapes") {
    FdAlgebra a({1, 2});
    CHECK_THROWS_AS(AlgElement(a, {Mat::Zero(1, 1)}), std::invalid_argument);
    CHECK_THROWS_AS(AlgElement(a, {Mat::Zero(1, 1), Mat::Zero(3, 3)}),
                    std::invalid_argument);
}

TEST_CASE("arithmetic identities") {
    std::mt19937 rng(11);
    FdAlgebra alg({2, 3});
    AlgElement id = alg_identity(alg);
    for (int it = 0; it < 20; ++it) {
        AlgElement a = testutil::random_alg_element(rng, alg);
        AlgElement b = testutil::random_alg_element(rng, alg);
        AlgElement c = testutil::random_alg_element(rng, alg);
        CHECK(alg_dist(alg_mul(id, a), a) == 0.0);
        CHECK(alg_dist(alg_adjoint(alg_adjoint(a)), a) == 0.0);
        CHECK(alg_dist(alg_mul(alg_mul(a, b), c), alg_mul(a, alg_mul(b, c))) < 1e-12);
        // adjoint is an anti-homomorphism
        CHECK(alg_dist(alg_adjoint(alg_mul(a, b)),
                       alg_mul(alg_adjoint(b), alg_adjoint(a))) < 1e-12);
    }
    FdAlgebra other({2, 2});
    CHECK_THROWS_AS(alg_mul(id, alg_identity(other)), std::invalid_argument);
}

TEST_CASE("matrix units multiply like matrix units") {
    FdAlgebra alg({3});
    for (int p = 0; p < 3; ++p)
        for (int q = 0; q < 3; ++q)
            for (int r = 0; r < 3; ++r)
                for (int s = 0; s < 3; ++s) {
                    AlgElement prod = alg_mul(alg_matrix_unit(alg, 0, p, q),
                                              alg_matrix_unit(alg, 0, r, s));
                    AlgElement expect = q == r ? alg_matrix_unit(alg, 0, p, s)
                                               : alg_zero(alg);
                    CHECK(alg_dist(prod, expect) == 0.0);
                }
}

TEST_CASE("op_norm examples and oracle") {
    FdAlgebra alg({1, 2});
    CHECK(op_norm(alg_identity(alg)) == doctest::Approx(1.0));

    AlgElement d = alg_zero(alg);
    d.data[1] << 3.0, 0.0, 0.0, 4.0;
    CHECK(op_norm(d) == doctest::Approx(4.0));

    std::mt19937 rng(5);
    for (int it = 0; it < 30; ++it) {
        Mat r = testutil::random_matrix(rng, 4, 4);
        Mat h = 0.5 * (r + Mat(r.adjoint()));
        CHECK(spectral_norm(h) == doctest::Approx(testutil::power_norm(h)).epsilon(1e-10));
    }
}

TEST_CASE("C*-identity and submultiplicativity") {
    std::mt19937 rng(7);
    FdAlgebra alg({2, 3, 1});
    for (int it = 0; it < 50; ++it) {
        AlgElement a = testutil::random_alg_element(rng, alg);
        AlgElement b = testutil::random_alg_element(rng, alg);
        double na = op_norm(a);
        CHECK(std::abs(op_norm(alg_mul(alg_adjoint(a), a)) - na * na) <=
              1e-10 * std::max(1.0, na * na));
        CHECK(op_norm(alg_mul(a, b)) <= na * op_norm(b) + 1e-10);
    }
}

TEST_CASE("ideal_perp examples") {
    FdAlgebra alg2({1, 2});
    CHECK(ideal_perp(Ideal(alg2, {0})) == Ideal(alg2, {1}));
    CHECK(ideal_perp(zero_ideal(alg2)) == full_ideal(alg2));

    // products of elements across an ideal and its annihilator vanish exactly
    std::mt19937 rng(3);
    FdAlgebra alg3({1, 2, 2});
    for (const Ideal& I : all_ideals(alg3)) {
        Ideal P = ideal_perp(I);
        AlgElement a = testutil::random_alg_element(rng, alg3);
        AlgElement b = testutil::random_alg_element(rng, alg3);
        for (int j = 0; j < 3; ++j) {
            if (!P.contains(j)) a.data[static_cast<size_t>(j)].setZero();
            if (!I.contains(j)) b.data[static_cast<size_t>(j)].setZero();
        }
        CHECK(op_norm(alg_mul(a, b)) == 0.0);
    }
}

TEST_CASE("ideal_meet and the annihilator characterization") {
    FdAlgebra alg3({1, 1, 1});
    CHECK(ideal_meet(Ideal(alg3, {0, 1}), Ideal(alg3, {1, 2})) == Ideal(alg3, {1}));

    FdAlgebra alg4({2, 1, 3, 1});
    for (const Ideal& I : all_ideals(alg4))
        CHECK(ideal_meet(I, ideal_perp(I)).empty());

    // J subset of I^perp iff J meet I is zero, all 64 pairs
    for (const Ideal& I : all_ideals(alg3))
        for (const Ideal& J : all_ideals(alg3))
            CHECK(ideal_subset(J, ideal_perp(I)) == ideal_meet(J, I).empty());
}

TEST_CASE("is_essential") {
    FdAlgebra alg({1, 1});
    CHECK(is_essential(full_ideal(alg)));
    CHECK_FALSE(is_essential(Ideal(alg, {0})));

    for (int m = 1; m <= 4; ++m) {
        std::vector<int> blocks(static_cast<size_t>(m), 1);
        FdAlgebra a(blocks);
        for (const Ideal& I : all_ideals(a))
            CHECK(is_essential(I) == (I == full_ideal(a)));
    }
}

TEST_CASE("approximate equality scales by operand norm") {
    FdAlgebra alg({2});
    AlgElement a = alg_scale(Complex(1e6, 0.0), alg_identity(alg));
    AlgElement b = a;
    b.data[0](0, 0) += Complex(1e-4, 0.0);
    CHECK(alg_approx_equal(a, b));  // relative to the 1e6 scale
    AlgElement c = alg_identity(alg);
    AlgElement d = c;
    d.data[0](0, 0) += Complex(1e-4, 0.0);
    CHECK_FALSE(alg_approx_equal(c, d));
}

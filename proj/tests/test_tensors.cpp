#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "tilab/tensors.hpp"

using namespace tilab;

namespace {

Mat3 random_rotation(std::mt19937_64& rng) {
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    Eigen::Quaterniond q(u(rng), u(rng), u(rng), u(rng));
    q.normalize();
    return q.toRotationMatrix();
}

CMat3 random_cmat(std::mt19937_64& rng) {
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    CMat3 m;
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) m(i, j) = Complex(u(rng), u(rng));
    return m;
}

}  // namespace

TEST_CASE("background validation") {
    CHECK_NOTHROW(IsotropicBackground(1.0, 1.0, 1.0, 0.0));
    CHECK_NOTHROW(IsotropicBackground(-0.5, 1.0, 1.0, 2.0));  // 3l + 2m = 0.5 > 0
    CHECK_THROWS_AS(IsotropicBackground(1.0, 0.0, 1.0, 0.0), std::invalid_argument);
    CHECK_THROWS_AS(IsotropicBackground(-1.0, 1.0, 1.0, 0.0), std::invalid_argument);
    CHECK_THROWS_AS(IsotropicBackground(1.0, 1.0, -1.0, 0.0), std::invalid_argument);
    CHECK_THROWS_AS(IsotropicBackground(1.0, 1.0, 1.0, -0.1), std::invalid_argument);
    const IsotropicBackground bg(2.0, 3.0, 5.0, 4.0);
    CHECK(bg.ks2() == doctest::Approx(16.0 * 5.0 / 3.0));
    CHECK(bg.kp2() == doctest::Approx(16.0 * 5.0 / 8.0));
}

TEST_CASE("ti_expand places the nine components") {
    SUBCASE("unit c1111") {
        const StiffnessTensor c = ti_expand({1, 0, 0, 0, 0});
        CHECK(c(1, 1, 1, 1) == 1.0);
        CHECK(c(0, 1, 0, 1) == 0.5);
        CHECK(c(0, 0, 2, 2) == 0.0);
        CHECK(c(1, 1, 2, 2) == 0.0);
        CHECK(c(0, 2, 0, 2) == 0.0);
        CHECK(c(1, 2, 1, 2) == 0.0);
        CHECK(c(2, 2, 2, 2) == 0.0);
    }
    SUBCASE("zero input") { CHECK(ti_expand({0, 0, 0, 0, 0}).max_abs() == 0.0); }
    SUBCASE("all-ones input") {
        const StiffnessTensor c = ti_expand({1, 1, 1, 1, 1});
        CHECK(c(0, 1, 0, 1) == 0.0);
        CHECK(c(1, 2, 1, 2) == 1.0);
        CHECK(c(1, 1, 2, 2) == 1.0);
    }
}

TEST_CASE("isotropic_expand") {
    CHECK(isotropic_expand(0, 0).max_abs() == 0.0);
    const StiffnessTensor c01 = isotropic_expand(0, 1);
    CHECK(c01(0, 1, 0, 1) == 1.0);
    CHECK(c01(0, 0, 0, 0) == 2.0);
    CHECK(c01(0, 0, 1, 1) == 0.0);
    const StiffnessTensor c11 = isotropic_expand(1, 1);
    CHECK(c11(0, 0, 0, 0) == 3.0);
    CHECK(c11(0, 0, 1, 1) == 1.0);
    CHECK(c11(0, 0, 2, 2) == 1.0);
}

TEST_CASE("symmetry images hold bitwise for constructed tensors") {
    std::mt19937_64 rng(7);
    std::uniform_real_distribution<double> u(-2.0, 2.0);
    for (int k = 0; k < 20; ++k) {
        const StiffnessTensor c =
            ti_expand({u(rng), u(rng), u(rng), u(rng), u(rng)});
        CHECK(c.has_symmetries());
    }
    CHECK(isotropic_expand(1.7, 0.4).has_symmetries());
}

TEST_CASE("rotate_tensor") {
    std::mt19937_64 rng(11);
    const StiffnessTensor c = ti_expand({1.3, 0.4, 0.7, 0.9, 1.6});

    SUBCASE("identity leaves the tensor unchanged") {
        const StiffnessTensor r = rotate_tensor(c, Mat3::Identity());
        for (int i = 0; i < 3; ++i)
            for (int j = 0; j < 3; ++j)
                for (int k = 0; k < 3; ++k)
                    for (int l = 0; l < 3; ++l) CHECK(r(i, j, k, l) == doctest::Approx(c(i, j, k, l)));
    }
    SUBCASE("x3 rotation leaves a TI tensor unchanged") {
        const StiffnessTensor r = rotate_tensor(c, rotation_x3(0.7));
        for (int i = 0; i < 3; ++i)
            for (int j = 0; j < 3; ++j)
                for (int k = 0; k < 3; ++k)
                    for (int l = 0; l < 3; ++l)
                        CHECK(std::abs(r(i, j, k, l) - c(i, j, k, l)) < 1e-12);
    }
    SUBCASE("any rotation leaves an isotropic tensor unchanged") {
        const StiffnessTensor iso = isotropic_expand(1.0, 1.0);
        const StiffnessTensor r = rotate_tensor(iso, random_rotation(rng));
        for (int i = 0; i < 3; ++i)
            for (int j = 0; j < 3; ++j)
                for (int k = 0; k < 3; ++k)
                    for (int l = 0; l < 3; ++l)
                        CHECK(std::abs(r(i, j, k, l) - iso(i, j, k, l)) < 1e-12);
    }
    SUBCASE("round trip through Q and Q^T") {
        const Mat3 q = random_rotation(rng);
        const StiffnessTensor r = rotate_tensor(rotate_tensor(c, q), q.transpose());
        for (int i = 0; i < 3; ++i)
            for (int j = 0; j < 3; ++j)
                for (int k = 0; k < 3; ++k)
                    for (int l = 0; l < 3; ++l)
                        CHECK(std::abs(r(i, j, k, l) - c(i, j, k, l)) < 1e-12);
    }
    SUBCASE("non-orthogonal matrices are rejected") {
        Mat3 bad = Mat3::Identity();
        bad(0, 1) = 0.3;
        CHECK_THROWS_AS(rotate_tensor(c, bad), std::invalid_argument);
    }
}

TEST_CASE("check_ti_invariance") {
    CHECK(check_ti_invariance(ti_expand({2.0, -0.3, 0.8, 1.1, 0.9}), 1e-12));
    CHECK(check_ti_invariance(StiffnessTensor{}, 1e-12));
    StiffnessTensor broken;
    broken.set(0, 0, 0, 0, 1.0);  // c1111 without its c2222 partner
    CHECK_FALSE(check_ti_invariance(broken, 1e-12));
}

TEST_CASE("contract") {
    std::mt19937_64 rng(3);
    const CMat3 g = random_cmat(rng), h = random_cmat(rng);

    SUBCASE("zero tensor") { CHECK(std::abs(contract(StiffnessTensor{}, g, h)) == 0.0); }
    SUBCASE("isotropic closed form") {
        const double lambda = 1.4, mu = 0.6;
        const Complex got = contract(isotropic_expand(lambda, mu), g, h);
        const Complex trg = g(0, 0) + g(1, 1) + g(2, 2);
        const Complex trh = h(0, 0) + h(1, 1) + h(2, 2);
        const CMat3 gs = 0.5 * (g + g.transpose());
        const CMat3 hs = 0.5 * (h + h.transpose());
        Complex symsym(0.0, 0.0);
        for (int i = 0; i < 3; ++i)
            for (int j = 0; j < 3; ++j) symsym += gs(i, j) * hs(i, j);
        const Complex want = lambda * trg * trh + 2.0 * mu * symsym;
        CHECK(std::abs(got - want) < 1e-13);
    }
    SUBCASE("single-component contraction") {
        CMat3 e11 = CMat3::Zero();
        e11(0, 0) = 1.0;
        CHECK(std::abs(contract(ti_expand({1, 0, 0, 0, 0}), e11, e11) - 1.0) < 1e-15);
    }
    SUBCASE("major symmetry makes the form symmetric") {
        const StiffnessTensor c = ti_expand({1.3, 0.2, -0.4, 0.8, 1.9});
        CHECK(std::abs(contract(c, g, h) - contract(c, h, g)) < 1e-13);
    }
}

TEST_CASE("positivity_margin") {
    CHECK(positivity_margin(StiffnessTensor{}) == doctest::Approx(0.0));
    CHECK(positivity_margin(isotropic_expand(0, 1)) == doctest::Approx(2.0));
    CHECK(positivity_margin(isotropic_expand(1, 1)) == doctest::Approx(2.0));
    std::mt19937_64 rng(19);
    std::uniform_real_distribution<double> u(0.1, 2.0);
    for (int k = 0; k < 10; ++k) {
        const double lambda = u(rng) - 0.5, mu = u(rng);
        if (3.0 * lambda + 2.0 * mu <= 0.0) continue;
        const double margin = positivity_margin(isotropic_expand(lambda, mu));
        CHECK(margin ==
              doctest::Approx(std::min(2.0 * mu, 3.0 * lambda + 2.0 * mu)).epsilon(1e-12));
    }
}

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "tilab/phantom.hpp"

using namespace tilab;

TEST_CASE("grid geometry") {
    const SpatialGrid g(Vec3::Zero(), Vec3::Constant(0.5), {9, 9, 9});
    CHECK(g.size() == 9 * 9 * 9);
    CHECK(g.coord(0, 0) == doctest::Approx(-0.5));
    CHECK(g.coord(0, 8) == doctest::Approx(0.5));
    CHECK_THROWS_AS(SpatialGrid(Vec3::Zero(), Vec3(0.5, 0.0, 0.5), {4, 4, 4}),
                    std::invalid_argument);
    CHECK_THROWS_AS(SpatialGrid(Vec3::Zero(), Vec3::Constant(0.5), {1, 4, 4}),
                    std::invalid_argument);
}

TEST_CASE("closure fields evaluate exactly and interpolate approximately") {
    const SpatialGrid g(Vec3::Zero(), Vec3::Constant(0.5), {17, 17, 17});
    auto f = [](const Vec3& x) { return std::sin(3.0 * x(0)) * std::cos(2.0 * x(1)) + x(2); };
    const ScalarField field = ScalarField::from_closure(g, f);
    std::mt19937_64 rng(3);
    std::uniform_real_distribution<double> u(-0.45, 0.45);
    for (int k = 0; k < 50; ++k) {
        const Vec3 x(u(rng), u(rng), u(rng));
        CHECK(field(x) == doctest::Approx(f(x)));
        CHECK(std::abs(field.interpolate(x) - f(x)) < 5e-3);  // trilinear on h = 1/16
    }
    CHECK_THROWS_AS(ScalarField(g, std::vector<double>(5, 0.0)), std::invalid_argument);
    std::vector<double> bad(g.size(), 0.0);
    bad[3] = std::numeric_limits<double>::infinity();
    CHECK_THROWS_AS(ScalarField(g, bad), std::invalid_argument);
}

TEST_CASE("phantom bumps are supported inside the box") {
    const SpatialGrid g(Vec3::Zero(), Vec3::Constant(0.5), {16, 16, 16});
    const Phantom ph = build_phantom(PhantomSpec::default_full(), g);
    CHECK(ph.has_density);
    for (const auto& comp : ph.stiffness.comps) CHECK(comp.max_abs() > 0.0);
    // boundary nodes are outside the mollifier window
    for (int i = 0; i < 16; ++i)
        for (int j = 0; j < 16; ++j) {
            CHECK(ph.stiffness.comps[0].values()[g.index(0, i, j)] == 0.0);
            CHECK(ph.stiffness.comps[0].values()[g.index(15, i, j)] == 0.0);
            CHECK(ph.density.rho11.values()[g.index(i, j, 0)] == 0.0);
        }
}

TEST_CASE("constant phantom") {
    const SpatialGrid g(Vec3::Zero(), Vec3::Constant(0.5), {8, 8, 8});
    const Phantom ph = build_constant_phantom({1, 2, 3, 4, 5}, 0.5, 0.25, g);
    const TIComponents p = ph.stiffness.at(Vec3(0.3, -0.2, 0.1));
    CHECK(p.c1111 == 1.0);
    CHECK(p.c3333 == 5.0);
    CHECK(ph.density.at(Vec3(0.1, 0.1, 0.1))[1] == 0.25);
}

TEST_CASE("field error metric") {
    const SpatialGrid g(Vec3::Zero(), Vec3::Constant(0.5), {8, 8, 8});
    ScalarField a(g), b(g);
    for (std::size_t i = 0; i < g.size(); ++i) {
        b.values()[i] = 2.0;
        a.values()[i] = 2.2;
    }
    const FieldError e = field_error(a, b);
    CHECK(e.rel_l2 == doctest::Approx(0.1));
    CHECK(e.rel_linf == doctest::Approx(0.1));
}

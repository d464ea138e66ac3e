#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "tilab/cgo.hpp"

using namespace tilab;

namespace {

const IsotropicBackground kUnit{1.0, 1.0, 1.0, 0.0};

Vec3 random_point(std::mt19937_64& rng, double w = 0.5) {
    std::uniform_real_distribution<double> u(-w, w);
    return Vec3(u(rng), u(rng), u(rng));
}

double rel_residual(const CgoSolution& sol, const Vec3& x) {
    const CVec3 r = sol.residual_coefficient(x);
    return std::max({std::abs(r(0)), std::abs(r(1)), std::abs(r(2))}) / sol.residual_scale();
}

}  // namespace

TEST_CASE("phase_pair_A") {
    SUBCASE("static node") {
        const PhasePair p = phase_pair_A(1.0, 0.0, kUnit);
        CHECK(std::abs(p.zeta1(0) - Complex(0, 1)) < 1e-15);
        CHECK(std::abs(p.zeta1(2) - Complex(1, 0)) < 1e-15);
        CHECK(std::abs(p.zeta2(2) - Complex(-1, 0)) < 1e-15);
        CHECK(std::abs(bdot(p.zeta1, p.zeta1)) < 1e-15);
    }
    SUBCASE("time-harmonic node") {
        const IsotropicBackground bg{1.0, 1.0, 1.0, 1.0};  // ks = 1
        const PhasePair p = phase_pair_A(2.0, 0.0, bg);
        CHECK(std::abs(p.zeta1(0) - Complex(0, 2)) < 1e-15);
        CHECK(std::abs(p.zeta1(2) - Complex(std::sqrt(3.0) / 2.0 * 2.0, 0)) < 1e-15);
        CHECK(std::abs(bdot(p.zeta1, p.zeta1) - Complex(-1.0, 0.0)) < 1e-14);
    }
    SUBCASE("degenerate and evanescent nodes rejected") {
        CHECK_THROWS_AS(phase_pair_A(0.0, 0.0, kUnit), std::invalid_argument);
        const IsotropicBackground bg{1.0, 1.0, 1.0, 2.0};  // ks = 2
        CHECK_THROWS_AS(phase_pair_A(0.0, 1.0, bg), std::invalid_argument);
    }
}

TEST_CASE("phase_pair_B") {
    SUBCASE("zero r gives a null phase") {
        const PhasePair p = phase_pair_B(1.0, 0.0, 0.0, kUnit);
        CHECK(std::abs(bdot(p.zeta1, p.zeta1)) < 1e-14);
        CHECK(std::abs(bdot(p.zeta2, p.zeta2)) < 1e-14);
    }
    SUBCASE("static large r") {
        const PhasePair p = phase_pair_B(3.0, 4.0, 10.0, kUnit);
        // beta = sqrt(100/25 - 1) = sqrt(3)
        CHECK(std::abs(p.zeta1(1) - Complex(10.0, 0.0)) < 1e-15);
        CHECK(std::abs(p.zeta1(0) - Complex(0.0, 3.0 - std::sqrt(3.0) * 4.0)) < 1e-13);
        CHECK(std::abs(bdot(p.zeta1, p.zeta1)) < 1e-12);
    }
    SUBCASE("time-harmonic stays on the compressional shell") {
        // kp = 5 needs omega^2 rho / (lambda + 2 mu) = 25.
        const IsotropicBackground bg{1.0, 1.0, 1.0, 5.0 * std::sqrt(3.0)};
        CHECK(bg.kp2() == doctest::Approx(25.0));
        const PhasePair p = phase_pair_B(3.0, 4.0, 10.0, bg);
        // beta = sqrt(4 - 1 + 1) = 2
        CHECK(std::abs(p.zeta1(0) - Complex(0.0, 3.0 - 2.0 * 4.0)) < 1e-13);
        CHECK(std::abs(bdot(p.zeta1, p.zeta1) - Complex(-25.0, 0.0)) < 1e-11);
    }
}

TEST_CASE("amplitude_theta") {
    const IsotropicBackground bg{1.0, 1.0, 1.0, 1.0};  // ks = 1
    SUBCASE("orthogonality to the matching phases") {
        const PhasePair ph = phase_pair_A(2.0, 0.0, bg);
        const PhasePair th = amplitude_theta(2.0, 0.0, bg);
        CHECK(std::abs(th.zeta1(0) - Complex(0, std::sqrt(3.0))) < 1e-14);
        CHECK(std::abs(th.zeta1(2) - Complex(2.0, 0.0)) < 1e-14);
        CHECK(std::abs(bdot(th.zeta1, ph.zeta1)) < 1e-13);
        CHECK(std::abs(bdot(th.zeta2, ph.zeta2)) < 1e-13);
    }
    SUBCASE("static degeneracy reproduces the gradient amplitudes") {
        const PhasePair ph = phase_pair_A(1.0, 0.0, kUnit);
        const PhasePair th = amplitude_theta(1.0, 0.0, kUnit);
        CHECK(hnorm(th.zeta1 - ph.zeta1) < 1e-15);
    }
    SUBCASE("evanescent rejection") {
        const IsotropicBackground bg2{1.0, 1.0, 1.0, 2.0};
        CHECK_THROWS_AS(amplitude_theta(0.0, 1.0, bg2), std::invalid_argument);
    }
    SUBCASE("orthogonality across random admissible nodes") {
        std::mt19937_64 rng(5);
        std::uniform_real_distribution<double> u(-4.0, 4.0);
        for (int k = 0; k < 200; ++k) {
            const double s = u(rng), t = u(rng);
            if (s * s + t * t <= bg.ks2() * 1.01) continue;
            const PhasePair ph = phase_pair_A(s, t, bg);
            const PhasePair th = amplitude_theta(s, t, bg);
            CHECK(std::abs(bdot(th.zeta1, ph.zeta1)) < 1e-12 * (1.0 + hnorm(ph.zeta1)));
        }
    }
}

TEST_CASE("affine_amplitude") {
    SUBCASE("mirrored phase of the right-affine pair") {
        const double r = 6.0;
        const PhasePair p = phase_pair_B(1.0, 0.0, r, kUnit);
        const AffineAmplitude a = affine_amplitude(p.zeta2, kUnit);
        CHECK(a.b(0) == doctest::Approx(0.0));
        CHECK(a.b(1) == doctest::Approx(-2.0 / std::sqrt(2.0)));  // -(l+m)/sqrt(2)
        CHECK(a.b(2) == doctest::Approx(0.0));
        CHECK(a.c(1) == doctest::Approx(4.0 / (2.0 * r)));  // (l+3m)/(2r)
    }
    SUBCASE("divergence constant is -mu0") {
        std::mt19937_64 rng(17);
        std::uniform_real_distribution<double> u(-3.0, 3.0);
        for (int k = 0; k < 50; ++k) {
            const double s = u(rng), t = u(rng);
            if (s * s + t * t < 0.1) continue;
            const PhasePair p = phase_pair_A(s, t, kUnit);
            const AffineAmplitude a = affine_amplitude(p.zeta1, kUnit);
            const CVec3 bc = a.b.cast<Complex>();
            const CVec3 cc = a.c.cast<Complex>();
            const Complex div = bdot(bc, a.zhat) + bdot(cc, p.zeta1);
            CHECK(std::abs(div - Complex(-kUnit.mu0, 0.0)) < 1e-13);
        }
    }
    SUBCASE("preconditions") {
        const IsotropicBackground bg{1.0, 1.0, 1.0, 1.0};
        const PhasePair p = phase_pair_A(1.0, 0.0, kUnit);
        CHECK_THROWS_AS(affine_amplitude(p.zeta1, bg), std::invalid_argument);
        const CVec3 bad(Complex(0, 1), Complex(0, 0), Complex(0, 0));
        CHECK_THROWS_AS(affine_amplitude(bad, kUnit), std::invalid_argument);
    }
}

TEST_CASE("evaluation closed forms") {
    std::mt19937_64 rng(23);

    SUBCASE("divergence-free constant amplitude") {
        const CgoPair pair = build_pair({PairKind::A_shear, 1.3, -0.7, 0.4, 0.0, 0.0}, kUnit);
        for (int k = 0; k < 20; ++k)
            CHECK(std::abs(pair.u.eval_divergence(random_point(rng))) < 1e-13);
    }
    SUBCASE("affine divergence is -mu0 e^{zeta.x}") {
        const CgoPair pair = build_pair({PairKind::D_affine_both, 0.9, 1.4, 1.1, 0.0, 0.0}, kUnit);
        for (int k = 0; k < 20; ++k) {
            const Vec3 x = random_point(rng);
            const Complex expf = std::exp(bdot(pair.u.zeta, x));
            CHECK(std::abs(pair.u.eval_divergence(x) + kUnit.mu0 * expf) < 1e-12);
        }
    }
    SUBCASE("compressional divergence is -kp^2 e^{zeta.x}") {
        const IsotropicBackground bg{1.0, 1.0, 1.0, 2.0};
        const CgoPair pair = build_pair({PairKind::B_gradient, 2.0, 1.0, 0.0, 9.0, 2.0}, bg);
        const Vec3 x = random_point(rng);
        const Complex expf = std::exp(bdot(pair.u.zeta, x));
        CHECK(std::abs(pair.u.eval_divergence(x) + bg.kp2() * expf) < 1e-10 * std::abs(expf));
    }
    SUBCASE("gradient matches central differences at second order") {
        const CgoPair pair =
            build_pair({PairKind::C_affine_right, 1.1, 0.6, 0.0, 9.5, 0.0}, kUnit);
        const Vec3 x(0.1, -0.2, 0.15);
        for (const CgoSolution* sol : {&pair.u, &pair.v}) {
            double h = 1e-3;
            double err_prev = 0.0;
            for (int step = 0; step < 2; ++step) {
                const CMat3 g = sol->eval_gradient(x);
                double err = 0.0;
                for (int i = 0; i < 3; ++i) {
                    Vec3 xp = x, xm = x;
                    xp(i) += h;
                    xm(i) -= h;
                    const CVec3 fd =
                        (sol->eval_displacement(xp) - sol->eval_displacement(xm)) / (2.0 * h);
                    for (int j = 0; j < 3; ++j) err = std::max(err, std::abs(fd(j) - g(i, j)));
                }
                if (step == 0)
                    err_prev = err;
                else if (err > 1e-11)
                    CHECK(err_prev / err > std::pow(2.0, 1.9));
                h *= 0.5;
            }
        }
    }
}

TEST_CASE("navier residual") {
    std::mt19937_64 rng(29);

    SUBCASE("deliberate non-solution") {
        CgoSolution sol;
        sol.bg = kUnit;
        sol.zeta = CVec3(Complex(0, 1), Complex(0, 0), Complex(0, 0));
        sol.amplitude = ConstantAmplitude{CVec3(Complex(1, 0), Complex(0, 0), Complex(0, 0))};
        const CVec3 r = sol.navier_residual(Vec3::Zero());
        CHECK(std::abs(r(0) - Complex(-3.0, 0.0)) < 1e-14);
        CHECK(std::abs(r(1)) < 1e-15);
        CHECK(std::abs(r(2)) < 1e-15);
    }
    SUBCASE("perturbed affine amplitude is not a solution") {
        CgoPair pair = build_pair({PairKind::D_affine_both, 1.0, 0.5, 0.0, 0.0, 0.0}, kUnit);
        auto& aff = std::get<AffineAmplitude>(pair.u.amplitude);
        aff.c *= 2.0;
        double worst = 0.0;
        for (int k = 0; k < 50; ++k)
            worst = std::max(worst, rel_residual(pair.u, random_point(rng)));
        CHECK(worst > 1e-4);
    }
    SUBCASE("every constructed family solves the system") {
        const std::array<PairKind, 6> kinds = {PairKind::A_shear,        PairKind::B_gradient,
                                               PairKind::C_affine_right, PairKind::D_affine_both,
                                               PairKind::E_theta,        PairKind::F_grad_theta};
        const std::vector<std::array<double, 4>> nodes = {
            {1, 0, 0, 8}, {0.7, -1.3, 0.9, 11}, {2.4, 0.8, 2.2, 22}, {3, 4, 4.4, 45}};
        for (double omega : {0.0, 1.0, 2.0}) {
            const IsotropicBackground bg{1.0, 1.0, 1.0, omega};
            for (PairKind kind : kinds) {
                for (const auto& n : nodes) {
                    CgoPair pair;
                    try {
                        pair = build_pair({kind, n[0], n[1], n[2], n[3], omega}, bg);
                    } catch (const std::invalid_argument&) {
                        continue;  // family/frequency mismatch or evanescent node
                    }
                    double worst = 0.0;
                    for (int k = 0; k < 100; ++k) {
                        const Vec3 x = random_point(rng);
                        worst = std::max(worst, rel_residual(pair.u, x));
                        worst = std::max(worst, rel_residual(pair.v, x));
                    }
                    INFO(to_string(kind), " omega=", omega);
                    CHECK(worst < 1e-9);
                }
            }
        }
    }
    SUBCASE("combined phases are purely imaginary and match 2i(s,0,t)") {
        for (PairKind kind : {PairKind::A_shear, PairKind::B_gradient, PairKind::C_affine_right,
                              PairKind::D_affine_both, PairKind::E_theta}) {
            const CgoPair pair = build_pair({kind, 1.2, -0.8, 0.0, 10.0, 0.0}, kUnit);
            CHECK(std::abs(pair.combined_phase(0) - Complex(0.0, 2.4)) < 1e-12);
            CHECK(std::abs(pair.combined_phase(1)) < 1e-12);
            CHECK(std::abs(pair.combined_phase(2) - Complex(0.0, -1.6)) < 1e-12);
        }
        // The mixed pair carries a known O(1/r) in-plane shift at omega > 0.
        const IsotropicBackground bg{1.0, 1.0, 1.0, 1.0};
        const CgoPair pair = build_pair({PairKind::F_grad_theta, 1.2, -0.8, 0.0, 30.0, 1.0}, bg);
        for (int a = 0; a < 3; ++a) CHECK(std::abs(pair.combined_phase(a).real()) < 1e-12);
        CHECK(std::abs(pair.combined_phase(0).imag() - 2.4) < 0.02);
        CHECK(std::abs(pair.combined_phase(1).imag()) < 1e-12);
    }
}

TEST_CASE("rotation about x3") {
    std::mt19937_64 rng(31);
    SUBCASE("phi = 0 is the identity") {
        const CgoPair pair = build_pair({PairKind::A_shear, 1.0, 0.3, 0.0, 0.0, 0.0}, kUnit);
        const CgoSolution r = rotate_about_x3(pair.u, 0.0);
        CHECK(hnorm(r.zeta - pair.u.zeta) < 1e-15);
    }
    SUBCASE("quarter turn moves the phase onto the x2 axis") {
        const PhasePair p = phase_pair_A(1.0, 0.0, kUnit);
        CgoSolution sol;
        sol.bg = kUnit;
        sol.zeta = p.zeta1;
        sol.amplitude = ConstantAmplitude{CVec3(Complex(0), Complex(1), Complex(0))};
        const CgoSolution r = rotate_about_x3(sol, M_PI / 2.0);
        CHECK(std::abs(r.zeta(0)) < 1e-15);
        CHECK(std::abs(r.zeta(1) - Complex(0, 1)) < 1e-15);
        CHECK(std::abs(r.zeta(2) - Complex(1, 0)) < 1e-15);
    }
    SUBCASE("rotation preserves the residual") {
        for (PairKind kind : {PairKind::B_gradient, PairKind::C_affine_right}) {
            const CgoPair pair = build_pair({kind, 1.4, 0.9, 0.0, 12.0, 0.0}, kUnit);
            const CgoSolution r = rotate_about_x3(pair.v, 1.234);
            double worst = 0.0;
            for (int k = 0; k < 100; ++k)
                worst = std::max(worst, rel_residual(r, random_point(rng)));
            CHECK(worst < 1e-9);
        }
    }
    SUBCASE("pair sum rotates as 2i(s cos phi, s sin phi, t)") {
        const double s = 1.7, t = -0.6, phi = 0.8;
        const CgoPair pair = build_pair({PairKind::A_shear, s, t, phi, 0.0, 0.0}, kUnit);
        CHECK(std::abs(pair.combined_phase(0) - 2.0 * I * s * std::cos(phi)) < 1e-13);
        CHECK(std::abs(pair.combined_phase(1) - 2.0 * I * s * std::sin(phi)) < 1e-13);
        CHECK(std::abs(pair.combined_phase(2) - 2.0 * I * t) < 1e-13);
    }
}

#include "tilab/cgo.hpp"

#include <cmath>

namespace tilab {

namespace {

Complex cexp(const CVec3& zeta, const Vec3& x) { return std::exp(bdot(zeta, x)); }

double d2_of(double s, double t) { return s * s + t * t; }

// Principal square root of the (real) radicand (r^2 - d^2 + k^2)/d^2.
Complex beta_of(double s, double t, double r, double k2) {
    const double d2 = d2_of(s, t);
    const double radicand = (r * r - d2 + k2) / d2;
    return std::sqrt(Complex(radicand, 0.0));
}

}  // namespace

CVec3 CgoSolution::amplitude_factor(const Vec3& x) const {
    if (const auto* c = std::get_if<ConstantAmplitude>(&amplitude)) return c->a;
    const auto& a = std::get<AffineAmplitude>(amplitude);
    const double bx = a.b.dot(x);
    return bx * a.zhat + a.c.cast<Complex>();
}

CMat3 CgoSolution::gradient_factor(const Vec3& x) const {
    if (const auto* c = std::get_if<ConstantAmplitude>(&amplitude)) return outer(zeta, c->a);
    const auto& a = std::get<AffineAmplitude>(amplitude);
    const double bx = a.b.dot(x);
    // d_i u_j = b_i zhat_j + zeta_i ((b.x) zhat_j + c_j), times e^{zeta.x}.
    return outer(a.b.cast<Complex>(), a.zhat) +
           outer(zeta, bx * a.zhat + a.c.cast<Complex>());
}

CVec3 CgoSolution::eval_displacement(const Vec3& x) const {
    return cexp(zeta, x) * amplitude_factor(x);
}

CMat3 CgoSolution::eval_gradient(const Vec3& x) const {
    return cexp(zeta, x) * gradient_factor(x);
}

Complex CgoSolution::eval_divergence(const Vec3& x) const {
    const CMat3 g = eval_gradient(x);
    return g(0, 0) + g(1, 1) + g(2, 2);
}

CVec3 CgoSolution::residual_coefficient(const Vec3& x) const {
    const double mu = bg.mu0, lm = bg.lambda0 + bg.mu0, w2r = bg.omega * bg.omega * bg.rho0;
    const Complex zz = bdot(zeta, zeta);
    if (const auto* ca = std::get_if<ConstantAmplitude>(&amplitude)) {
        const Complex az = bdot(ca->a, zeta);
        return (mu * zz + w2r) * ca->a + (lm * az) * zeta;
    }
    const auto& a = std::get<AffineAmplitude>(amplitude);
    const CVec3 bc = a.b.cast<Complex>();
    const CVec3 cc = a.c.cast<Complex>();
    const Complex bz = bdot(bc, zeta);
    const Complex bzh = bdot(bc, a.zhat);
    const Complex cz = bdot(cc, zeta);
    const Complex zhz = bdot(a.zhat, zeta);
    CVec3 out = 2.0 * mu * bz * a.zhat + mu * zz * cc + lm * (zhz * bc + (bzh + cz) * zeta) +
                w2r * cc;
    const double bx = a.b.dot(x);
    out += bx * ((mu * zz + w2r) * a.zhat + lm * zhz * zeta);
    return out;
}

CVec3 CgoSolution::navier_residual(const Vec3& x) const {
    return cexp(zeta, x) * residual_coefficient(x);
}

double CgoSolution::residual_scale() const {
    const double z2 = hnorm(zeta) * hnorm(zeta);
    const double k2 = std::max(bg.ks2(), bg.kp2());
    double amp = 0.0;
    if (const auto* c = std::get_if<ConstantAmplitude>(&amplitude)) {
        amp = hnorm(c->a);
    } else {
        const auto& a = std::get<AffineAmplitude>(amplitude);
        amp = a.b.norm() + a.c.norm();
    }
    return bg.mu0 * std::max(z2, k2) * std::max(amp, 1e-300);
}

CgoSolution rotate_about_x3(const CgoSolution& sol, double phi) {
    const Mat3 r = rotation_x3(phi);
    CgoSolution out = sol;
    out.zeta = rotate(r, sol.zeta);
    if (const auto* c = std::get_if<ConstantAmplitude>(&sol.amplitude)) {
        out.amplitude = ConstantAmplitude{rotate(r, c->a)};
    } else {
        const auto& a = std::get<AffineAmplitude>(sol.amplitude);
        out.amplitude = AffineAmplitude{r * a.b, r * a.c, rotate(r, a.zhat)};
    }
    return out;
}

PhasePair phase_pair_A(double s, double t, const IsotropicBackground& bg) {
    const double d2 = d2_of(s, t);
    if (d2 <= 0.0) throw std::invalid_argument("phase_pair_A: (s,t) must be nonzero");
    const double ks2 = bg.ks2();
    if (bg.omega > 0.0 && d2 <= ks2)
        throw std::invalid_argument("phase_pair_A: node inside the shear evanescent disk (s^2+t^2 <= ks^2)");
    const double kk = std::sqrt(1.0 - ks2 / d2);
    const CVec3 e1 = CVec3(I * s, Complex(0.0), I * t);
    const CVec3 e2 = CVec3(Complex(-t), Complex(0.0), Complex(s));
    return {e1 + kk * e2, e1 - kk * e2};
}

PhasePair phase_pair_B(double s, double t, double r, const IsotropicBackground& bg) {
    const double d2 = d2_of(s, t);
    if (d2 <= 0.0) throw std::invalid_argument("phase_pair_B: (s,t) must be nonzero");
    if (r < 0.0) throw std::invalid_argument("phase_pair_B: r must be nonnegative");
    const Complex beta = beta_of(s, t, r, bg.kp2());
    const CVec3 z1(I * (s - beta * t), Complex(r), I * (t + beta * s));
    const CVec3 z2(I * (s + beta * t), Complex(-r), I * (t - beta * s));
    return {z1, z2};
}

PhasePair amplitude_theta(double s, double t, const IsotropicBackground& bg) {
    const double d2 = d2_of(s, t);
    if (d2 <= 0.0) throw std::invalid_argument("amplitude_theta: (s,t) must be nonzero");
    const double ks2 = bg.ks2();
    if (bg.omega > 0.0 && d2 <= ks2)
        throw std::invalid_argument("amplitude_theta: node inside the shear evanescent disk");
    const double kk = std::sqrt(1.0 - ks2 / d2);
    const CVec3 e1 = CVec3(I * s, Complex(0.0), I * t);
    const CVec3 e2 = CVec3(Complex(-t), Complex(0.0), Complex(s));
    return {kk * e1 + e2, kk * e1 - e2};
}

AffineAmplitude affine_amplitude(const CVec3& zeta, const IsotropicBackground& bg) {
    if (bg.omega != 0.0)
        throw std::invalid_argument("affine_amplitude: affine family exists at zero frequency only");
    const Complex zz = bdot(zeta, zeta);
    const double zn = hnorm(zeta);
    if (zn <= 0.0) throw std::invalid_argument("affine_amplitude: zeta must be nonzero");
    if (std::abs(zz) > 1e-10 * zn * zn)
        throw std::invalid_argument("affine_amplitude: requires zeta.zeta = 0");
    const CVec3 zhat = zeta / zn;
    const Vec3 re_zhat(zhat(0).real(), zhat(1).real(), zhat(2).real());
    AffineAmplitude a;
    a.zhat = zhat;
    a.b = (bg.lambda0 + bg.mu0) * re_zhat;
    a.c = -((bg.lambda0 + 3.0 * bg.mu0) / zn) * re_zhat;
    return a;
}

std::string to_string(PairKind k) {
    switch (k) {
        case PairKind::A_shear: return "A_shear";
        case PairKind::B_gradient: return "B_gradient";
        case PairKind::C_affine_right: return "C_affine_right";
        case PairKind::D_affine_both: return "D_affine_both";
        case PairKind::E_theta: return "E_theta";
        case PairKind::F_grad_theta: return "F_grad_theta";
    }
    throw std::logic_error("unknown pair kind");
}

PairKind pair_kind_from_string(const std::string& s) {
    if (s == "A_shear") return PairKind::A_shear;
    if (s == "B_gradient") return PairKind::B_gradient;
    if (s == "C_affine_right") return PairKind::C_affine_right;
    if (s == "D_affine_both") return PairKind::D_affine_both;
    if (s == "E_theta") return PairKind::E_theta;
    if (s == "F_grad_theta") return PairKind::F_grad_theta;
    throw std::invalid_argument("unknown pair kind: " + s);
}

CgoPair build_pair(const PairConfig& cfg, const IsotropicBackground& medium) {
    const IsotropicBackground bg = medium.at_omega(cfg.omega);
    const double s = cfg.s, t = cfg.t, r = cfg.r;
    const double d2 = d2_of(s, t);
    if (d2 <= 0.0) throw std::invalid_argument("pair config: (s,t) must be nonzero");

    CgoSolution u, v;
    u.bg = v.bg = bg;

    switch (cfg.kind) {
        case PairKind::A_shear: {
            const PhasePair p = phase_pair_A(s, t, bg);
            const CVec3 a(Complex(0.0), Complex(1.0), Complex(0.0));
            u.zeta = p.zeta1;
            v.zeta = p.zeta2;
            u.amplitude = ConstantAmplitude{a};
            v.amplitude = ConstantAmplitude{a};
            break;
        }
        case PairKind::B_gradient: {
            const PhasePair p = phase_pair_B(s, t, r, bg);
            u.zeta = p.zeta1;
            v.zeta = p.zeta2;
            u.amplitude = ConstantAmplitude{p.zeta1};
            v.amplitude = ConstantAmplitude{p.zeta2};
            break;
        }
        case PairKind::C_affine_right: {
            if (bg.omega != 0.0)
                throw std::invalid_argument("C_affine_right requires zero frequency");
            const PhasePair p = phase_pair_B(s, t, r, bg);
            u.zeta = p.zeta1;
            u.amplitude = ConstantAmplitude{p.zeta1};
            v.zeta = p.zeta2;
            v.amplitude = affine_amplitude(p.zeta2, bg);
            break;
        }
        case PairKind::D_affine_both: {
            if (bg.omega != 0.0)
                throw std::invalid_argument("D_affine_both requires zero frequency");
            const PhasePair p = phase_pair_A(s, t, bg);
            u.zeta = p.zeta1;
            u.amplitude = affine_amplitude(p.zeta1, bg);
            v.zeta = p.zeta2;
            v.amplitude = affine_amplitude(p.zeta2, bg);
            break;
        }
        case PairKind::E_theta: {
            const PhasePair p = phase_pair_A(s, t, bg);
            const PhasePair th = amplitude_theta(s, t, bg);
            u.zeta = p.zeta1;
            v.zeta = p.zeta2;
            u.amplitude = ConstantAmplitude{th.zeta1};
            v.amplitude = ConstantAmplitude{th.zeta2};
            break;
        }
        case PairKind::F_grad_theta: {
            // Left: P-type gradient on the B phases. Right: exact S solution
            // whose second phase component is -r, so the real parts cancel:
            //   xi = (is + i bs t, -r, it - i bs s), bs^2 = (r^2 - d^2 + ks^2)/d^2,
            //   theta = (is + i bs t, -(r^2 + ks^2)/r, it - i bs s), theta.xi = 0.
            // The combined phase is 2i(s,0,t) + i(bs - bp)(t,0,-s).
            if (!(r > 0.0)) throw std::invalid_argument("F_grad_theta requires r > 0");
            const PhasePair p = phase_pair_B(s, t, r, bg);
            u.zeta = p.zeta1;
            u.amplitude = ConstantAmplitude{p.zeta1};
            const Complex bs = beta_of(s, t, r, bg.ks2());
            const CVec3 xi(I * (s + bs * t), Complex(-r), I * (t - bs * s));
            const CVec3 theta(I * (s + bs * t), Complex(-(r * r + bg.ks2()) / r),
                              I * (t - bs * s));
            v.zeta = xi;
            v.amplitude = ConstantAmplitude{theta};
            break;
        }
    }

    CgoPair pair;
    pair.u = rotate_about_x3(u, cfg.phi);
    pair.v = rotate_about_x3(v, cfg.phi);
    pair.combined_phase = pair.u.zeta + pair.v.zeta;
    pair.config = cfg;
    if (std::abs(pair.combined_phase(0).real()) + std::abs(pair.combined_phase(1).real()) +
            std::abs(pair.combined_phase(2).real()) >
        1e-9 * (1.0 + hnorm(pair.combined_phase)))
        throw std::logic_error("pair combined phase has a real part; product would be unbounded");
    return pair;
}

}  // namespace tilab

#include "tilab/dn_form.hpp"

#include <cmath>
#include <map>

namespace tilab {

Complex contract_ti(const TIComponents& p, const CMat3& g, const CMat3& h) {
    const Complex s12 = (g(0, 1) + g(1, 0)) * (h(0, 1) + h(1, 0));
    const Complex s13 = (g(0, 2) + g(2, 0)) * (h(0, 2) + h(2, 0));
    const Complex s23 = (g(1, 2) + g(2, 1)) * (h(1, 2) + h(2, 1));
    Complex out = p.c1111 * (g(0, 0) * h(0, 0) + g(1, 1) * h(1, 1));
    out += p.c3333 * g(2, 2) * h(2, 2);
    out += p.c1122 * (g(0, 0) * h(1, 1) + g(1, 1) * h(0, 0));
    out += p.c1133 *
           (g(0, 0) * h(2, 2) + g(2, 2) * h(0, 0) + g(1, 1) * h(2, 2) + g(2, 2) * h(1, 1));
    out += p.c1212() * s12;
    out += p.c1313 * (s13 + s23);
    return out;
}

PairFactors pair_factors(const CgoSolution& u, const CgoSolution& v) {
    PairFactors f;
    f.kappa = u.zeta + v.zeta;
    f.omega = u.bg.omega;

    auto fill = [](const CgoSolution& s, CMat3 g[2], CVec3 a[2], Vec3& dir, bool& affine) {
        if (const auto* c = std::get_if<ConstantAmplitude>(&s.amplitude)) {
            g[0] = outer(s.zeta, c->a);
            g[1].setZero();
            a[0] = c->a;
            a[1].setZero();
            affine = false;
            return;
        }
        const auto& aa = std::get<AffineAmplitude>(s.amplitude);
        const double bn = aa.b.norm();
        dir = bn > 0.0 ? Vec3(aa.b / bn) : Vec3::Zero();
        g[0] = outer(aa.b.cast<Complex>(), aa.zhat) + outer(s.zeta, aa.c.cast<Complex>());
        g[1] = bn * outer(s.zeta, aa.zhat);
        a[0] = aa.c.cast<Complex>();
        a[1] = bn * aa.zhat;
        affine = true;
    };
    fill(u, f.g, f.au, f.eu, f.u_affine);
    fill(v, f.h, f.av, f.ev, f.v_affine);
    return f;
}

namespace {

// rho contraction for diag(r11, r11, r33): r11 (a1 b1 + a2 b2) + r33 a3 b3.
Complex rho_pair(const CVec3& a, const CVec3& b, double r11, double r33) {
    return r11 * (a(0) * b(0) + a(1) * b(1)) + r33 * a(2) * b(2);
}

}  // namespace

Complex bilinear_form(const TIPerturbationField& dC, const DensityPerturbationField* dRho,
                      const CgoSolution& u, const CgoSolution& v, const QuadratureSpec& quad) {
    if (!u.bg.same_medium(v.bg))
        throw std::invalid_argument("bilinear_form: solutions have mismatched backgrounds");
    const double omega = u.bg.omega;
    const double w2 = omega * omega;
    const bool with_rho = dRho != nullptr && omega > 0.0;

    const SpatialGrid& box = dC.grid;
    const Rule1D& r1 = rule_1d(quad.rule, quad.points);
    const int n = quad.points;

    const PairFactors pf = pair_factors(u, v);

    // Separable combined exponential along each axis.
    std::array<std::vector<Complex>, 3> ephase;
    std::array<std::vector<double>, 3> coord;
    for (int a = 0; a < 3; ++a) {
        ephase[a].resize(n);
        coord[a].resize(n);
        for (int i = 0; i < n; ++i) {
            const double x = box.center(a) + box.halfwidth(a) * r1.nodes[i];
            coord[a][i] = x;
            ephase[a][i] = std::exp(pf.kappa(a) * x);
        }
    }
    const double jac = box.halfwidth(0) * box.halfwidth(1) * box.halfwidth(2);

    Complex acc(0.0, 0.0);
    for (int ix = 0; ix < n; ++ix) {
        for (int iy = 0; iy < n; ++iy) {
            const Complex exy = ephase[0][ix] * ephase[1][iy];
            const double wxy = r1.weights[ix] * r1.weights[iy];
            for (int iz = 0; iz < n; ++iz) {
                const Vec3 x(coord[0][ix], coord[1][iy], coord[2][iz]);
                const TIComponents p = dC.at(x);
                const CMat3 g = u.gradient_factor(x);
                const CMat3 h = v.gradient_factor(x);
                Complex val = contract_ti(p, g, h);
                if (with_rho) {
                    const auto r = dRho->at(x);
                    val -= w2 * rho_pair(u.amplitude_factor(x), v.amplitude_factor(x), r[0], r[1]);
                }
                acc += val * exy * ephase[2][iz] * (wxy * r1.weights[iz]);
            }
        }
    }
    return acc * jac;
}

Complex axis_moment_integral(int p, Complex mu, double w) {
    if (p < 0 || p > 2) throw std::invalid_argument("axis_moment_integral: p must be 0..2");
    const Complex mw = mu * w;
    if (std::abs(mw) < 0.5) {
        // sum_k mu^k/k! * int u^{p+k} du  (odd p+k vanishes)
        Complex out(0.0, 0.0);
        Complex muk(1.0, 0.0);
        double kfact = 1.0;
        for (int k = 0; k <= 16; ++k) {
            if ((p + k) % 2 == 0)
                out += muk / kfact * (2.0 * std::pow(w, p + k + 1) / (p + k + 1));
            muk *= mu;
            kfact *= (k + 1.0);
        }
        return out;
    }
    const Complex ep = std::exp(mw), em = std::exp(-mw);
    const Complex sh = 0.5 * (ep - em), ch = 0.5 * (ep + em);
    switch (p) {
        case 0: return 2.0 * sh / mu;
        case 1: return 2.0 * w * ch / mu - 2.0 * sh / (mu * mu);
        default:
            return 2.0 * w * w * sh / mu - 4.0 * w * ch / (mu * mu) + 4.0 * sh / (mu * mu * mu);
    }
}

namespace {

// int_box x^p1 x^p2 x^p3 e^{kappa.x} dx for a center-c box via binomial shift.
Complex box_moment(const std::array<int, 3>& pw, const CVec3& kappa, const SpatialGrid& box) {
    Complex out(1.0, 0.0);
    for (int a = 0; a < 3; ++a) {
        const double c = box.center(a), w = box.halfwidth(a);
        const Complex shift = std::exp(kappa(a) * c);
        Complex axis(0.0, 0.0);
        for (int q = 0; q <= pw[a]; ++q) {
            double binom = (pw[a] == 2 && q == 1) ? 2.0 : 1.0;
            axis += binom * std::pow(c, pw[a] - q) * axis_moment_integral(q, kappa(a), w);
        }
        out *= shift * axis;
    }
    return out;
}

}  // namespace

Complex constant_oracle(const TIComponents& p, std::optional<std::array<double, 2>> rho,
                        const CgoSolution& u, const CgoSolution& v, const SpatialGrid& box) {
    if (!u.bg.same_medium(v.bg))
        throw std::invalid_argument("constant_oracle: solutions have mismatched backgrounds");
    const PairFactors f = pair_factors(u, v);
    const double w2 = f.omega * f.omega;
    const bool with_rho = rho.has_value() && f.omega > 0.0;

    Complex acc(0.0, 0.0);
    for (int a = 0; a < 2; ++a) {
        for (int b = 0; b < 2; ++b) {
            if (a == 1 && !f.u_affine) continue;
            if (b == 1 && !f.v_affine) continue;
            Complex coeff = contract_ti(p, f.g[a], f.h[b]);
            if (with_rho) coeff -= w2 * rho_pair(f.au[a], f.av[b], (*rho)[0], (*rho)[1]);
            if (coeff == Complex(0.0, 0.0)) continue;
            if (a == 0 && b == 0) {
                acc += coeff * box_moment({0, 0, 0}, f.kappa, box);
            } else if (a == 1 && b == 0) {
                for (int m = 0; m < 3; ++m) {
                    if (f.eu(m) == 0.0) continue;
                    std::array<int, 3> pw = {0, 0, 0};
                    pw[m] = 1;
                    acc += coeff * f.eu(m) * box_moment(pw, f.kappa, box);
                }
            } else if (a == 0 && b == 1) {
                for (int m = 0; m < 3; ++m) {
                    if (f.ev(m) == 0.0) continue;
                    std::array<int, 3> pw = {0, 0, 0};
                    pw[m] = 1;
                    acc += coeff * f.ev(m) * box_moment(pw, f.kappa, box);
                }
            } else {
                for (int m = 0; m < 3; ++m)
                    for (int nn = 0; nn < 3; ++nn) {
                        const double em = f.eu(m) * f.ev(nn);
                        if (em == 0.0) continue;
                        std::array<int, 3> pw = {0, 0, 0};
                        pw[m] += 1;
                        pw[nn] += 1;
                        acc += coeff * em * box_moment(pw, f.kappa, box);
                    }
            }
        }
    }
    return acc;
}

int oscillation_points(double kappa_abs, double halfwidth, int base) {
    const int need = static_cast<int>(std::ceil(0.7 * kappa_abs * halfwidth)) + 8;
    int n = std::max(base, need);
    return (n + 3) / 4 * 4;  // quantize so field caches are shared
}

std::vector<FormValue> synthesize_data(const TIPerturbationField& dC,
                                       const DensityPerturbationField* dRho,
                                       const IsotropicBackground& medium,
                                       const std::vector<PairConfig>& plan,
                                       const QuadratureSpec& quad, bool adaptive, int max_points,
                                       int workers) {
    std::vector<FormValue> out(plan.size());
    parallel_for(plan.size(), workers, [&](std::size_t b, std::size_t e) {
        for (std::size_t i = b; i < e; ++i) {
            FormValue& fv = out[i];
            fv.config = plan[i];
            try {
                const CgoPair pair = build_pair(plan[i], medium);
                QuadratureSpec q = quad;
                if (adaptive && quad.rule == QuadratureRule::Gauss) {
                    int n = quad.points;
                    for (int a = 0; a < 3; ++a)
                        n = std::max(n, oscillation_points(std::abs(pair.combined_phase(a).imag()),
                                                           dC.grid.halfwidth(a), quad.points));
                    if (n > max_points)
                        throw std::invalid_argument(
                            "pair frequency exceeds the quadrature oscillation cap");
                    q.points = n;
                }
                fv.value = bilinear_form(dC, dRho, pair.u, pair.v, q);
            } catch (const std::exception& ex) {
                fv.ok = false;
                fv.error = ex.what();
            }
        }
    });
    return out;
}

}  // namespace tilab

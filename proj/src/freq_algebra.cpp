#include "tilab/freq_algebra.hpp"

#include <cmath>

namespace tilab {

namespace {

struct TermBuilder {
    double s, t, kp;
    int beta_terms;
    LaurentSeries beta, r1, r2, r4;

    TermBuilder(double s_, double t_, double kp_, int bt)
        : s(s_), t(t_), kp(kp_), beta_terms(bt) {
        beta = beta_series(s, t, kp, bt);
        r1 = LaurentSeries::monomial(Complex(1.0), 1);
        r2 = LaurentSeries::monomial(Complex(1.0), 2);
        r4 = LaurentSeries::monomial(Complex(1.0), 4);
    }

    LaurentSeries c(double v) const { return LaurentSeries::constant(Complex(v)); }

    // Linear factors in beta.
    LaurentSeries s_minus_bt() const { return c(s) - beta * Complex(t); }
    LaurentSeries s_plus_bt() const { return c(s) + beta * Complex(t); }
    LaurentSeries t_minus_bs() const { return c(t) - beta * Complex(s); }
    LaurentSeries t_plus_bs() const { return c(t) + beta * Complex(s); }

    std::vector<ExpansionTerm> build() const {
        std::vector<ExpansionTerm> out;
        const LaurentSeries b2 = beta * beta;
        const LaurentSeries f_sb = s_minus_bt() * s_plus_bt();   // s^2 - beta^2 t^2
        const LaurentSeries f_ts = t_plus_bs() * t_minus_bs();   // t^2 - beta^2 s^2
        const LaurentSeries g_sb = c(s * s) + b2 * Complex(t * t);  // s^2 + beta^2 t^2
        const LaurentSeries g_ts = c(t * t) + b2 * Complex(s * s);  // t^2 + beta^2 s^2

        out.push_back({"I1", "c1111", f_sb * f_sb});
        out.push_back({"I2", "c2222", r4});
        out.push_back({"I3", "c3333", f_ts * f_ts});
        out.push_back({"I4", "c1122", g_sb * r2 * Complex(-2.0)});
        // I5 = C1133 (s-bt)^2 (t-bs)^2 + C3311 (t+bs)^2 (s+bt)^2; the two
        // parts are combined on c1133 (major symmetry) and the odd-beta
        // cross terms cancel in the sum.
        const LaurentSeries a5 = s_minus_bt() * t_minus_bs();
        const LaurentSeries b5 = t_plus_bs() * s_plus_bt();
        out.push_back({"I5", "c1133", a5 * a5 + b5 * b5});
        out.push_back({"I6", "c2233", g_ts * r2 * Complex(-2.0)});
        out.push_back({"I7", "c1212", f_sb * r2 * Complex(4.0)});
        out.push_back({"I8", "c1313", f_sb * f_ts * Complex(4.0)});
        out.push_back({"I9", "c2323", f_ts * r2 * Complex(4.0)});
        out.push_back({"J1", "rho11", f_sb});
        out.push_back({"J2", "rho11", r2});
        out.push_back({"J3", "rho33", f_ts});
        for (auto& term : out) term.series.prune(1e-300);
        return out;
    }
};

double beta_exact(double s, double t, double kp, double r) {
    const double d2 = s * s + t * t;
    const double rad = (r * r - d2 + kp * kp) / d2;
    if (rad < 0.0) throw std::invalid_argument("exact beta requested below the turning radius");
    return std::sqrt(rad);
}

}  // namespace

std::vector<ExpansionTerm> pair_product_expansion(PairKind kind, double s, double t, double omega,
                                                  const IsotropicBackground& bg, int beta_terms) {
    if (kind != PairKind::B_gradient)
        throw std::invalid_argument("pair_product_expansion: only the gradient pair has the I/J term list");
    if (!(s * s + t * t > 0.0)) throw std::invalid_argument("pair_product_expansion: degenerate node");
    const double kp = std::sqrt(bg.at_omega(omega).kp2());
    return TermBuilder(s, t, kp, beta_terms).build();
}

Complex exact_term_value(const std::string& term, double s, double t, double kp, double r) {
    const double b = beta_exact(s, t, kp, r);
    const double f_sb = (s - b * t) * (s + b * t);
    const double f_ts = (t + b * s) * (t - b * s);
    if (term == "I1") return f_sb * f_sb;
    if (term == "I2") return r * r * r * r;
    if (term == "I3") return f_ts * f_ts;
    if (term == "I4") return -2.0 * (s * s + b * b * t * t) * r * r;
    if (term == "I5") {
        const double a5 = (s - b * t) * (t - b * s);
        const double b5 = (t + b * s) * (s + b * t);
        return a5 * a5 + b5 * b5;
    }
    if (term == "I6") return -2.0 * (t * t + b * b * s * s) * r * r;
    if (term == "I7") return 4.0 * f_sb * r * r;
    if (term == "I8") return 4.0 * f_sb * f_ts;
    if (term == "I9") return 4.0 * f_ts * r * r;
    if (term == "J1") return f_sb;
    if (term == "J2") return r * r;
    if (term == "J3") return f_ts;
    throw std::invalid_argument("unknown term: " + term);
}

std::array<Complex, 5> reduced_stiffness_coefficients(const std::vector<ExpansionTerm>& terms,
                                                      int power) {
    // order: c1111, c1122, c1133, c1313, c3333
    std::array<Complex, 5> out{};
    for (const auto& t : terms) {
        if (t.term[0] != 'I') continue;
        const Complex v = t.series.coeff(power);
        if (t.component == "c1111" || t.component == "c2222") {
            out[0] += v;
        } else if (t.component == "c1122") {
            out[1] += v;
        } else if (t.component == "c1133" || t.component == "c2233") {
            out[2] += v;
        } else if (t.component == "c1313" || t.component == "c2323") {
            out[3] += v;
        } else if (t.component == "c3333") {
            out[4] += v;
        } else if (t.component == "c1212") {
            out[0] += 0.5 * v;
            out[1] -= 0.5 * v;
        } else {
            throw std::logic_error("unexpected component " + t.component);
        }
    }
    return out;
}

std::array<Complex, 2> rho_coefficients(const std::vector<ExpansionTerm>& terms, int power) {
    std::array<Complex, 2> out{};
    for (const auto& t : terms) {
        if (t.term[0] != 'J') continue;
        if (t.component == "rho11")
            out[0] += t.series.coeff(power);
        else
            out[1] += t.series.coeff(power);
    }
    return out;
}

std::vector<TermCheck> exact_vs_series_check(PairKind kind, double s, double t, double omega,
                                             const IsotropicBackground& bg,
                                             const std::vector<double>& r_values, int beta_terms) {
    const double d = std::sqrt(s * s + t * t);
    for (std::size_t i = 0; i < r_values.size(); ++i) {
        if (r_values[i] <= d)
            throw std::invalid_argument("exact_vs_series_check: r values must exceed d");
        if (i > 0 && r_values[i] <= r_values[i - 1])
            throw std::invalid_argument("exact_vs_series_check: r values must increase");
    }
    const double kp = std::sqrt(bg.at_omega(omega).kp2());
    auto terms = pair_product_expansion(kind, s, t, omega, bg, beta_terms);

    std::vector<TermCheck> out;
    for (const auto& term : terms) {
        TermCheck tc;
        tc.term = term.term;
        tc.component = term.component;
        std::vector<double> devs;
        double scale = 0.0;
        for (double r : r_values) {
            const Complex ex = exact_term_value(term.term, s, t, kp, r);
            const Complex se = term.series.eval(r);
            devs.push_back(std::abs(ex - se));
            scale = std::max(scale, std::abs(ex));
        }
        tc.max_rel_dev = *std::max_element(devs.begin(), devs.end()) / std::max(scale, 1e-300);
        tc.polynomial_exact = tc.max_rel_dev < 1e-12;
        if (!tc.polynomial_exact && devs.front() > 0.0 && devs.back() > 0.0) {
            // Least-squares slope of log(dev) against log(r).
            double sx = 0, sy = 0, sxx = 0, sxy = 0;
            const double n = static_cast<double>(devs.size());
            for (std::size_t i = 0; i < devs.size(); ++i) {
                const double x = std::log(r_values[i]), y = std::log(devs[i]);
                sx += x;
                sy += y;
                sxx += x * x;
                sxy += x * y;
            }
            tc.fitted_order = (n * sxy - sx * sy) / (n * sxx - sx * sx);
        }
        out.push_back(tc);
    }
    return out;
}

LaurentSeries mixed_t_beta_s_squared(double s, double t, double k, int beta_terms) {
    const LaurentSeries b = beta_series(s, t, k, beta_terms);
    const LaurentSeries f = LaurentSeries::constant(Complex(t)) + b * Complex(s);
    return f * f;
}

Complex mixed_t_beta_s_squared_exact(double s, double t, double k, double r) {
    const double b = beta_exact(s, t, k, r);
    return Complex((t + b * s) * (t + b * s), 0.0);
}

ComboSolution combo_solve(const ComboTriple& g) {
    ComboSolution x;
    x.c1313 = (g.g2 - g.g3) * 0.125;
    x.m2 = (g.g2 + g.g3) * 0.5;
    x.m1 = 2.0 * (g.g1 - x.c1313);
    return x;
}

ComboTriple combo_forward(const ComboSolution& x) {
    ComboTriple g;
    g.g1 = 0.5 * x.m1 + x.c1313;
    g.g2 = x.m2 + 4.0 * x.c1313;
    g.g3 = x.m2 - 4.0 * x.c1313;
    return g;
}

std::pair<Complex, Complex> two_frequency_split(Complex gA, Complex gB, double w1, double w2) {
    if (!(w1 > 0.0) || !(w2 > 0.0))
        throw std::invalid_argument("two_frequency_split: frequencies must be positive");
    if (w1 == w2) throw std::invalid_argument("two_frequency_split: frequencies must differ");
    const double det = w1 * w1 - w2 * w2;
    const Complex a = (gA - gB) / det;
    const Complex b = gA - w1 * w1 * a;
    return {a, b};
}

}  // namespace tilab

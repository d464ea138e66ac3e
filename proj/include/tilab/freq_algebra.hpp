// Mechanical verification of the large-r asymptotics of the gradient-pair
// products, and the exact linear solves that recover component combinations
// from per-frequency data.
#pragma once

#include <string>
#include <vector>

#include "tilab/cgo.hpp"
#include "tilab/laurent.hpp"

namespace tilab {

// One product term: the series multiplying a single stiffness or density
// component. Terms I1..I9 carry stiffness components (indexed over the nine
// nonzero TI slots); J1..J3 carry rho11/rho33 and enter the integrand with
// an extra omega^2 factor.
struct ExpansionTerm {
    std::string term;       // "I1".."I9", "J1".."J3"
    std::string component;  // c1111, c2222, c3333, c1122, c1133, c2233, c1212, c1313, c2323, rho11, rho33
    LaurentSeries series;
};

// Gradient-pair (B family) product expansion at a node. beta enters through
// its truncated series; every series that is polynomial in beta^2 comes out
// exact.
std::vector<ExpansionTerm> pair_product_expansion(PairKind kind, double s, double t, double omega,
                                                  const IsotropicBackground& bg,
                                                  int beta_terms = 6);

// Exact (closed-form) value of one term's coefficient at finite r.
Complex exact_term_value(const std::string& term, double s, double t, double kp, double r);

// Sum of the r^power coefficients over the I-terms, mapped to the five
// independent components by the TI linear relations
// (c2222->c1111, c2233->c1133, c2323->c1313, c1212->(c1111-c1122)/2).
std::array<Complex, 5> reduced_stiffness_coefficients(const std::vector<ExpansionTerm>& terms,
                                                      int power);
// (rho11, rho33) coefficients of r^power over the J-terms.
std::array<Complex, 2> rho_coefficients(const std::vector<ExpansionTerm>& terms, int power);

// Deviation/order report comparing truncated series against exact values.
struct TermCheck {
    std::string term;
    std::string component;
    double max_rel_dev = 0.0;   // deviation normalized by the exact magnitude
    double fitted_order = 0.0;  // log2 growth of the absolute deviation
    bool polynomial_exact = false;
};
std::vector<TermCheck> exact_vs_series_check(PairKind kind, double s, double t, double omega,
                                             const IsotropicBackground& bg,
                                             const std::vector<double>& r_values,
                                             int beta_terms = 6);

// (t + beta s)^2: the mixed-pair coefficient whose expansion carries odd
// powers of beta (used by the order-of-convergence tests).
LaurentSeries mixed_t_beta_s_squared(double s, double t, double k, int beta_terms);
Complex mixed_t_beta_s_squared_exact(double s, double t, double k, double r);

// Per-frequency values of the three recovered combinations
//   g1 = F[c1212 + c1313], g2 = F[c1111 - 2 c1133 + 4 c1313 + c3333],
//   g3 = F[c1111 - 2 c1133 - 4 c1313 + c3333].
struct ComboTriple {
    Complex g1{0.0, 0.0};
    Complex g2{0.0, 0.0};
    Complex g3{0.0, 0.0};
};
struct ComboSolution {
    Complex c1313{0.0, 0.0};
    Complex m1{0.0, 0.0};  // c1111 - c1122
    Complex m2{0.0, 0.0};  // c1111 - 2 c1133 + c3333
};
ComboSolution combo_solve(const ComboTriple& g);
ComboTriple combo_forward(const ComboSolution& x);

// Exact 2x2 solve of [w1^2 1; w2^2 1] (A,B)^T = (gA,gB)^T.
std::pair<Complex, Complex> two_frequency_split(Complex gA, Complex gB, double w1, double w2);

}  // namespace tilab

// Rank-4 elastic stiffness tensors with the minor/major symmetries, the
// transversely isotropic (x3 axis) parametrization and its linear relations,
// rotations, invariance checks, and the contraction used by the bilinear form.
#pragma once

#include <array>
#include <string>

#include "tilab/common.hpp"

namespace tilab {

// Homogeneous isotropic background (lambda0, mu0, rho0) at frequency omega.
struct IsotropicBackground {
    double lambda0 = 1.0;
    double mu0 = 1.0;
    double rho0 = 1.0;
    double omega = 0.0;

    IsotropicBackground() = default;
    IsotropicBackground(double lambda, double mu, double rho, double w);

    // Squared S- and P-wave numbers omega^2 rho0 / mu0, omega^2 rho0 / (lambda0 + 2 mu0).
    double ks2() const { return omega * omega * rho0 / mu0; }
    double kp2() const { return omega * omega * rho0 / (lambda0 + 2.0 * mu0); }

    IsotropicBackground at_omega(double w) const { return {lambda0, mu0, rho0, w}; }

    bool same_medium(const IsotropicBackground& o) const;
};

// The five independent components of a transversely isotropic tensor
// (symmetry axis x3). The remaining nonzero components follow from
//   c2222 = c1111, c2233 = c1133, c2323 = c1313, c1212 = (c1111 - c1122)/2.
struct TIComponents {
    double c1111 = 0.0;
    double c1122 = 0.0;
    double c1133 = 0.0;
    double c1313 = 0.0;
    double c3333 = 0.0;

    double c1212() const { return 0.5 * (c1111 - c1122); }

    std::array<double, 5> as_array() const { return {c1111, c1122, c1133, c1313, c3333}; }
    static TIComponents from_array(const std::array<double, 5>& a) {
        return {a[0], a[1], a[2], a[3], a[4]};
    }
};

inline const std::array<std::string, 5> kTIComponentNames = {"c1111", "c1122", "c1133",
                                                             "c1313", "c3333"};

// Full 3x3x3x3 stiffness tensor. Writes go through set(), which fills every
// index image required by the symmetries C_ijkl = C_jikl = C_ijlk = C_klij,
// so reads are plain array lookups and the symmetry invariants hold bitwise.
class StiffnessTensor {
  public:
    StiffnessTensor() { c_.fill(0.0); }

    double operator()(int i, int j, int k, int l) const { return c_[idx(i, j, k, l)]; }

    void set(int i, int j, int k, int l, double v);
    void add(int i, int j, int k, int l, double v);

    StiffnessTensor& operator+=(const StiffnessTensor& o);
    StiffnessTensor operator*(double s) const;

    double max_abs() const;
    bool has_symmetries() const;  // exact (bitwise) check

  private:
    static int idx(int i, int j, int k, int l) { return ((i * 3 + j) * 3 + k) * 3 + l; }
    std::array<double, 81> c_;
};

// Embeds the five TI components, deriving the four related ones.
StiffnessTensor ti_expand(const TIComponents& p);

// C_ijkl = lambda d_ij d_kl + mu (d_ik d_jl + d_il d_jk).
StiffnessTensor isotropic_expand(double lambda, double mu);

// Components Q_ip Q_jq Q_kr Q_ls C_pqrs. Q must be orthogonal to 1e-10.
StiffnessTensor rotate_tensor(const StiffnessTensor& c, const Mat3& q);

// True iff c is invariant (to tol) under the three axis reflections and a
// sample of rotations about x3.
bool check_ti_invariance(const StiffnessTensor& c, double tol);

// sum_ijkl C_ijkl G_ij H_kl with complex G, H (no conjugation).
Complex contract(const StiffnessTensor& c, const CMat3& g, const CMat3& h);

// Minimum of eps -> C_ijkl eps_ij eps_kl over unit-Frobenius-norm symmetric
// eps: the smallest eigenvalue of the orthonormal 6x6 representation.
double positivity_margin(const StiffnessTensor& c);

}  // namespace tilab

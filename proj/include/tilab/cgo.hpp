// Closed-form complex-geometrical-optics solutions of the homogeneous
// isotropic Navier system  mu0 Lap u + (lambda0+mu0) grad div u + w^2 rho0 u = 0.
//
// Families (PairKind) and what each pair is used for downstream:
//   A_shear        shear pair, constant amplitude (0,1,0)
//   B_gradient     gradient pair with large parameter r (divergence -kp^2 e^{z.x})
//   C_affine_right gradient left, affine-amplitude right (zero frequency only)
//   D_affine_both  affine amplitudes on both sides (zero frequency only)
//   E_theta        divergence-free theta amplitudes on the shear phases
//   F_grad_theta   gradient left (P phase), theta right on the matching S phase
#pragma once

#include <string>
#include <variant>

#include "tilab/tensors.hpp"

namespace tilab {

struct ConstantAmplitude {
    CVec3 a;
};

// Amplitude (b.x) zhat + c with real b, c; requires omega = 0 and z.z = 0.
struct AffineAmplitude {
    Vec3 b;
    Vec3 c;
    CVec3 zhat;
};

struct CgoSolution {
    CVec3 zeta;
    std::variant<ConstantAmplitude, AffineAmplitude> amplitude;
    IsotropicBackground bg;

    bool is_affine() const { return std::holds_alternative<AffineAmplitude>(amplitude); }

    // Amplitude factor A(x) and gradient factor (d_i u_j) / e^{zeta.x}.
    CVec3 amplitude_factor(const Vec3& x) const;
    CMat3 gradient_factor(const Vec3& x) const;

    CVec3 eval_displacement(const Vec3& x) const;
    CMat3 eval_gradient(const Vec3& x) const;  // entry (i,j) = d_i u_j
    Complex eval_divergence(const Vec3& x) const;

    // mu0 Lap u + (lambda0+mu0) grad div u + w^2 rho0 u, in closed form.
    CVec3 navier_residual(const Vec3& x) const;
    // Residual with the e^{zeta.x} factor removed, for overflow-free checks.
    CVec3 residual_coefficient(const Vec3& x) const;
    // Natural magnitude of the operator applied to this solution.
    double residual_scale() const;
};

CgoSolution rotate_about_x3(const CgoSolution& sol, double phi);

// Step-1 phases: zeta = i(s,0,t) +/- K(-t,0,s), K = sqrt(1 - ks^2/(s^2+t^2)).
struct PhasePair {
    CVec3 zeta1;
    CVec3 zeta2;
};
PhasePair phase_pair_A(double s, double t, const IsotropicBackground& bg);
// Step-3 phases: zeta1 = (is - i b t, r, it + i b s), b = sqrt((r^2 - d^2 + kp^2)/d^2).
PhasePair phase_pair_B(double s, double t, double r, const IsotropicBackground& bg);
// Divergence-free amplitudes theta = i K (s,0,t) +/- (-t,0,s) for the A phases.
PhasePair amplitude_theta(double s, double t, const IsotropicBackground& bg);
// b = (l0+m0) Re zhat, c = -((l0+3m0)/|z|) Re zhat; divergence is -mu0 e^{z.x}.
AffineAmplitude affine_amplitude(const CVec3& zeta, const IsotropicBackground& bg);

enum class PairKind { A_shear, B_gradient, C_affine_right, D_affine_both, E_theta, F_grad_theta };

std::string to_string(PairKind k);
PairKind pair_kind_from_string(const std::string& s);

struct PairConfig {
    PairKind kind = PairKind::A_shear;
    double s = 1.0;
    double t = 0.0;
    double phi = 0.0;
    double r = 0.0;
    double omega = 0.0;
};

struct CgoPair {
    CgoSolution u;
    CgoSolution v;
    CVec3 combined_phase;  // zeta_u + zeta_v, purely imaginary for every family
    PairConfig config;
};

// Builds the pair for a config (rotating by phi), validating preconditions.
CgoPair build_pair(const PairConfig& cfg, const IsotropicBackground& medium);

}  // namespace tilab
